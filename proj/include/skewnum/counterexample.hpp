#pragma once

#include "skewnum/inequality.hpp"
#include "skewnum/matrix.hpp"
#include "skewnum/tensor.hpp"

namespace skewnum {

/// The known subadditivity counterexample: a 4x4 state on two qubits with
/// local observables whose WYD entropy at p=1/2 violates
/// S(ρ₁,k₁)+S(ρ₂,k₂) ≥ S(ρ₁₂,k₁₂). All entries are small integers, so the
/// instance is exactly representable and the key intermediates are exact
/// in double precision.
inline BipartiteInstance counterexample_instance() {
    const HermitianMatrix rho = HermitianMatrix::from_real({
        {7, 5, 5, 6},
        {5, 6, 2, 5},
        {5, 2, 6, 5},
        {6, 5, 5, 7},
    });
    const HermitianMatrix k1 = HermitianMatrix::from_real({{10, 1}, {1, 1}});
    const HermitianMatrix k2 = HermitianMatrix::from_real({{1, 1}, {1, 10}});
    return BipartiteInstance(MultipartiteOperator(rho, {2, 2}), k1, k2, 0.5);
}

/// Square root of the counterexample state; exactly an integer matrix.
inline HermitianMatrix counterexample_sqrt() {
    return HermitianMatrix::from_real({
        {2, 1, 1, 1},
        {1, 2, 0, 1},
        {1, 0, 2, 1},
        {1, 1, 1, 2},
    });
}

/// Joint observable k₁⊗1 + 1⊗k₂ of the counterexample.
inline HermitianMatrix counterexample_k12() {
    return HermitianMatrix::from_real({
        {11, 1, 1, 0},
        {1, 20, 0, 1},
        {1, 0, 2, 1},
        {0, 1, 1, 11},
    });
}

/// Commutator [ρ₁₂^{1/2}, k₁₂]; exact integers.
inline Matrix counterexample_commutator() {
    return Matrix::from_real({
        {0, 10, -8, 0},
        {-10, 0, 0, -10},
        {8, 0, 0, 8},
        {0, 10, -8, 0},
    });
}

/// Square of the commutator above; exact integers.
inline Matrix counterexample_commutator_squared() {
    return Matrix::from_real({
        {-164, 0, 0, -164},
        {0, -200, 160, 0},
        {0, 160, -128, 0},
        {-164, 0, 0, -164},
    });
}

/// Both partial traces of the counterexample state are this matrix.
inline HermitianMatrix counterexample_reduced_state() {
    return HermitianMatrix::from_real({{13, 10}, {10, 13}});
}

}  // namespace skewnum
