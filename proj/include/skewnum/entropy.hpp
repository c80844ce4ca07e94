#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "skewnum/eigen.hpp"
#include "skewnum/matrix.hpp"

namespace skewnum {

namespace detail {

// The traces below are mathematically real; we keep the real part and
// treat a large imaginary residue as a numerical failure.
inline double real_trace_product(const Matrix& a, const Matrix& b) {
    const Complex t = trace_product(a, b);
    const double scale = std::max(1.0, a.frobenius_norm() * b.frobenius_norm());
    if (std::abs(t.imag()) > 1e-10 * scale)
        throw std::runtime_error("entropy trace has a non-negligible imaginary part");
    return t.real();
}

}  // namespace detail

/// Wigner-Yanase-Dyson entropy ½·tr([ρ^p,k][ρ^{1-p},k]) for 0 < p < 1.
/// Nonpositive: it is minus the skew information of the state ρ with
/// respect to the conserved observable k. States need not have trace 1;
/// the value is homogeneous of degree 1 in ρ.
inline double wyd_entropy(const HermitianMatrix& rho, const HermitianMatrix& k, double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("wyd_entropy: p must lie in (0,1)");
    if (rho.dim() != k.dim()) throw std::invalid_argument("wyd_entropy: dimension mismatch");

    const EigenDecomposition dec = eigh(rho);
    std::vector<double> ev = detail::clamped_psd_spectrum(dec.eigenvalues);

    std::vector<double> ev_p(ev.size()), ev_q(ev.size());
    for (size_t i = 0; i < ev.size(); ++i) {
        ev_p[i] = std::pow(ev[i], p);
        ev_q[i] = (p == 0.5) ? ev_p[i] : std::pow(ev[i], 1.0 - p);
    }
    const Matrix c1 = commutator(dec.reconstruct(ev_p), k.matrix());
    const Matrix c2 = (p == 0.5) ? c1 : commutator(dec.reconstruct(ev_q), k.matrix());
    return 0.5 * detail::real_trace_product(c1, c2);
}

/// Wigner-Yanase entropy ½·tr([ρ^{1/2},k]²), computed through a single
/// square root.
inline double wy_entropy(const HermitianMatrix& rho, const HermitianMatrix& k) {
    if (rho.dim() != k.dim()) throw std::invalid_argument("wy_entropy: dimension mismatch");
    const Matrix c = commutator(matrix_sqrt_psd(rho), k);
    return 0.5 * detail::real_trace_product(c, c);
}

/// Quantum-mechanical entropy -tr ρ log ρ, natural log, 0·log 0 = 0.
inline double von_neumann_entropy(const HermitianMatrix& rho) {
    const EigenDecomposition dec = eigh(rho);
    const std::vector<double> ev = detail::clamped_psd_spectrum(dec.eigenvalues);
    double s = 0.0;
    for (double x : ev)
        if (x > 0.0) s -= x * std::log(x);
    return s;
}

}  // namespace skewnum
