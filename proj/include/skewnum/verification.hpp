#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "skewnum/counterexample.hpp"
#include "skewnum/eigen.hpp"
#include "skewnum/entropy.hpp"
#include "skewnum/inequality.hpp"
#include "skewnum/matrix.hpp"
#include "skewnum/tensor.hpp"

namespace skewnum {

struct VerificationCheck {
    std::string name;
    double max_error = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

struct VerificationReport {
    std::vector<VerificationCheck> checks;
    double gap = 0.0;
    bool violation_flagged = false;
    bool all_passed = true;
};

namespace detail {

inline double max_entry_error(const Matrix& got, const Matrix& want) {
    Matrix diff = got;
    diff -= want;
    return diff.max_abs();
}

}  // namespace detail

/// Recompute the published counterexample end to end and compare every
/// intermediate against its known value. Integer-valued identities hold
/// exactly in double precision; quantities passing through an
/// eigendecomposition are checked within `tol` (absolute).
inline VerificationReport verify_counterexample(double tol = 1e-9, double p = 0.5) {
    VerificationReport report;
    auto add = [&](const std::string& name, double err) {
        const bool ok = err <= tol;
        report.checks.push_back({name, err, tol, ok});
        if (!ok) report.all_passed = false;
    };

    const BipartiteInstance inst = counterexample_instance();
    const double s17 = std::sqrt(17.0);
    const double s69 = std::sqrt(69.0);

    {
        const EigenDecomposition eig = eigh(inst.rho12.matrix);
        const double expected[4] = {0.5 * (21.0 - 5.0 * s17), 1.0, 4.0, 0.5 * (21.0 + 5.0 * s17)};
        double err = 0.0;
        for (int i = 0; i < 4; ++i) err = std::max(err, std::abs(eig.eigenvalues[i] - expected[i]));
        add("state eigenvalues", err);
    }

    const HermitianMatrix sqrt_state = matrix_sqrt_psd(inst.rho12.matrix);
    add("state square root",
        detail::max_entry_error(sqrt_state.matrix(), counterexample_sqrt().matrix()));

    const MultipartiteOperator k12 = local_sum({inst.k1, inst.k2}, inst.rho12.dims);
    add("joint observable assembly",
        detail::max_entry_error(k12.matrix.matrix(), counterexample_k12().matrix()));

    // The commutator identities are integer-exact, so they are checked from
    // the integer square root rather than the computed one; the computed
    // square root is covered by the entrywise check above.
    const Matrix comm = commutator(counterexample_sqrt().matrix(), k12.matrix.matrix());
    add("commutator identity", detail::max_entry_error(comm, counterexample_commutator()));
    add("commutator square identity",
        detail::max_entry_error(comm * comm, counterexample_commutator_squared()));

    add("joint entropy", std::abs(wyd_entropy(inst.rho12.matrix, k12.matrix, p) - (-328.0)));

    const MultipartiteOperator rho1 = partial_trace(inst.rho12, {0});
    const MultipartiteOperator rho2 = partial_trace(inst.rho12, {1});
    add("partial trace 1",
        detail::max_entry_error(rho1.matrix.matrix(), counterexample_reduced_state().matrix()));
    add("partial trace 2",
        detail::max_entry_error(rho2.matrix.matrix(), counterexample_reduced_state().matrix()));

    {
        const EigenDecomposition eig = eigh(rho1.matrix);
        const double err = std::max(std::abs(eig.eigenvalues[0] - 3.0),
                                    std::abs(eig.eigenvalues[1] - 23.0));
        add("reduced state eigenvalues", err);
    }

    const double reduced_expected = -526.5 + 40.5 * s69;  // = -(81/4)(√23-√3)²
    add("reduced entropy 1",
        std::abs(wyd_entropy(rho1.matrix, inst.k1, p) - reduced_expected));
    add("reduced entropy 2",
        std::abs(wyd_entropy(rho2.matrix, inst.k2, p) - reduced_expected));

    const GapReport gap = sa_gap(BipartiteInstance(inst.rho12, inst.k1, inst.k2, p));
    report.gap = gap.gap;
    report.violation_flagged = gap.violated;
    add("subadditivity gap", std::abs(gap.gap - (-725.0 + 81.0 * s69)));
    add("violation flagged",
        gap.violated ? 0.0 : std::numeric_limits<double>::infinity());

    return report;
}

}  // namespace skewnum
