#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "skewnum/entropy.hpp"
#include "skewnum/matrix.hpp"
#include "skewnum/tensor.hpp"

namespace skewnum {

/// A bipartite state with local observables and a WYD exponent; the input
/// bundle for the subadditivity checker.
struct BipartiteInstance {
    MultipartiteOperator rho12;
    HermitianMatrix k1, k2;
    double p;

    BipartiteInstance(MultipartiteOperator state, HermitianMatrix obs1, HermitianMatrix obs2,
                      double exponent)
        : rho12(std::move(state)), k1(std::move(obs1)), k2(std::move(obs2)), p(exponent) {
        if (rho12.factor_count() != 2)
            throw std::invalid_argument("BipartiteInstance: state must have exactly 2 factors");
        if (k1.dim() != rho12.dims[0] || k2.dim() != rho12.dims[1])
            throw std::invalid_argument("BipartiteInstance: observable dims do not match factors");
        if (!(p > 0.0 && p < 1.0))
            throw std::invalid_argument("BipartiteInstance: p must lie in (0,1)");
    }
};

struct TripartiteInstance {
    MultipartiteOperator rho123;
    HermitianMatrix k1, k2, k3;
    double p;

    TripartiteInstance(MultipartiteOperator state, HermitianMatrix obs1, HermitianMatrix obs2,
                       HermitianMatrix obs3, double exponent)
        : rho123(std::move(state)),
          k1(std::move(obs1)),
          k2(std::move(obs2)),
          k3(std::move(obs3)),
          p(exponent) {
        if (rho123.factor_count() != 3)
            throw std::invalid_argument("TripartiteInstance: state must have exactly 3 factors");
        if (k1.dim() != rho123.dims[0] || k2.dim() != rho123.dims[1] ||
            k3.dim() != rho123.dims[2])
            throw std::invalid_argument("TripartiteInstance: observable dims do not match factors");
        if (!(p > 0.0 && p < 1.0))
            throw std::invalid_argument("TripartiteInstance: p must lie in (0,1)");
    }
};

/// One entropy term of an inequality, with the sign it contributes to the
/// gap (gap = Σ sign·value).
struct GapTerm {
    std::string name;
    double value;
    int sign;
};

/// Outcome of a gap evaluation. The gap is the signed slack of the
/// inequality: nonnegative means the inequality holds, and a gap below
/// -tolerance is flagged as a violation. All component entropies are kept
/// so individual terms can be inspected.
struct GapReport {
    std::vector<GapTerm> terms;
    double gap = 0.0;
    bool violated = false;
    double tolerance = 0.0;
    double p = 0.5;

    double term(const std::string& name) const {
        for (const auto& t : terms)
            if (t.name == name) return t.value;
        throw std::invalid_argument("GapReport: no term named " + name);
    }
};

/// Default violation threshold: 1e-8·max(1, |anchor|), where the anchor is
/// the joint-state entropy. Separates genuine violations from rounding
/// noise near zero.
inline double default_violation_tolerance(double anchor_entropy) {
    return 1e-8 * std::max(1.0, std::abs(anchor_entropy));
}

namespace detail {

inline GapReport make_report(std::vector<GapTerm> terms, double p, double tolerance) {
    GapReport r;
    r.terms = std::move(terms);
    r.p = p;
    r.tolerance = tolerance;
    double gap = 0.0;
    for (const auto& t : r.terms) gap += t.sign * t.value;
    r.gap = gap;
    r.violated = gap < -tolerance;
    return r;
}

}  // namespace detail

/// Subadditivity gap S_p(ρ₁,k₁) + S_p(ρ₂,k₂) - S_p(ρ₁₂,k₁₂) with
/// k₁₂ = k₁⊗1 + 1⊗k₂ and ρ₁, ρ₂ the partial traces. Subadditivity would
/// assert a nonnegative gap.
inline GapReport sa_gap(const BipartiteInstance& inst, double tolerance) {
    const MultipartiteOperator rho1 = partial_trace(inst.rho12, {0});
    const MultipartiteOperator rho2 = partial_trace(inst.rho12, {1});
    const MultipartiteOperator k12 = local_sum({inst.k1, inst.k2}, inst.rho12.dims);

    const double s12 = wyd_entropy(inst.rho12.matrix, k12.matrix, inst.p);
    const double s1 = wyd_entropy(rho1.matrix, inst.k1, inst.p);
    const double s2 = wyd_entropy(rho2.matrix, inst.k2, inst.p);
    return detail::make_report({{"S12", s12, -1}, {"S1", s1, +1}, {"S2", s2, +1}}, inst.p,
                               tolerance);
}

inline GapReport sa_gap(const BipartiteInstance& inst) {
    const MultipartiteOperator k12 = local_sum({inst.k1, inst.k2}, inst.rho12.dims);
    const double s12 = wyd_entropy(inst.rho12.matrix, k12.matrix, inst.p);
    return sa_gap(inst, default_violation_tolerance(s12));
}

/// Strong subadditivity gap
/// S_p(ρ₁₂,k₁₂) + S_p(ρ₂₃,k₂₃) - S_p(ρ₁₂₃,k₁₂₃) - S_p(ρ₂,k₂).
inline GapReport ssa_gap(const TripartiteInstance& inst, double tolerance) {
    const std::vector<int>& dims = inst.rho123.dims;
    const MultipartiteOperator rho12 = partial_trace(inst.rho123, {0, 1});
    const MultipartiteOperator rho23 = partial_trace(inst.rho123, {1, 2});
    const MultipartiteOperator rho2 = partial_trace(inst.rho123, {1});

    const MultipartiteOperator k123 = local_sum({inst.k1, inst.k2, inst.k3}, dims);
    const MultipartiteOperator k12 = local_sum({inst.k1, inst.k2}, {dims[0], dims[1]});
    const MultipartiteOperator k23 = local_sum({inst.k2, inst.k3}, {dims[1], dims[2]});

    const double s123 = wyd_entropy(inst.rho123.matrix, k123.matrix, inst.p);
    const double s2 = wyd_entropy(rho2.matrix, inst.k2, inst.p);
    const double s12 = wyd_entropy(rho12.matrix, k12.matrix, inst.p);
    const double s23 = wyd_entropy(rho23.matrix, k23.matrix, inst.p);
    return detail::make_report(
        {{"S123", s123, -1}, {"S2", s2, -1}, {"S12", s12, +1}, {"S23", s23, +1}}, inst.p,
        tolerance);
}

inline GapReport ssa_gap(const TripartiteInstance& inst) {
    const MultipartiteOperator k123 =
        local_sum({inst.k1, inst.k2, inst.k3}, inst.rho123.dims);
    const double s123 = wyd_entropy(inst.rho123.matrix, k123.matrix, inst.p);
    return ssa_gap(inst, default_violation_tolerance(s123));
}

/// Reinterpret a bipartite instance (systems 1 and 3) as a tripartite one
/// with a dimension-1 middle factor carrying the 1×1 identity observable.
/// The strong-subadditivity gap of the result equals the subadditivity gap
/// of the input: S_p(ρ₂,k₂) vanishes and the identity summand drops out of
/// every commutator.
inline TripartiteInstance embed_sa_as_ssa(const BipartiteInstance& inst) {
    MultipartiteOperator rho123(inst.rho12.matrix,
                                {inst.rho12.dims[0], 1, inst.rho12.dims[1]});
    return TripartiteInstance(std::move(rho123), inst.k1, HermitianMatrix::identity(1), inst.k2,
                              inst.p);
}

/// Concavity slack S_p(tρa+(1-t)ρb, k) - t·S_p(ρa,k) - (1-t)·S_p(ρb,k);
/// nonnegative by concavity of S_p in the state.
inline double concavity_probe(const HermitianMatrix& rho_a, const HermitianMatrix& rho_b,
                              double t, const HermitianMatrix& k, double p) {
    if (!(t >= 0.0 && t <= 1.0))
        throw std::invalid_argument("concavity_probe: t must lie in [0,1]");
    if (rho_a.dim() != rho_b.dim() || rho_a.dim() != k.dim())
        throw std::invalid_argument("concavity_probe: dimension mismatch");
    const HermitianMatrix mix = t * rho_a + (1.0 - t) * rho_b;
    return wyd_entropy(mix, k, p) - t * wyd_entropy(rho_a, k, p) -
           (1.0 - t) * wyd_entropy(rho_b, k, p);
}

/// Subadditivity gap of the von Neumann entropy, S(ρ₁)+S(ρ₂)-S(ρ₁₂).
/// Nonnegative for every state; used as a contrast check against the WYD
/// family.
inline double von_neumann_sa_gap(const MultipartiteOperator& rho12) {
    if (rho12.factor_count() != 2)
        throw std::invalid_argument("von_neumann_sa_gap: state must have exactly 2 factors");
    const MultipartiteOperator rho1 = partial_trace(rho12, {0});
    const MultipartiteOperator rho2 = partial_trace(rho12, {1});
    return von_neumann_entropy(rho1.matrix) + von_neumann_entropy(rho2.matrix) -
           von_neumann_entropy(rho12.matrix);
}

}  // namespace skewnum
