#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "skewnum/eigen.hpp"
#include "skewnum/matrix.hpp"
#include "skewnum/quadrature.hpp"

namespace skewnum {

/// Extreme Morozova-Chentsov function
/// c_λ(x,y) = (1+λ)/2 · (1/(x+λy) + 1/(λx+y)), symmetric in (x,y).
inline double c_lambda(double lam, double x, double y) {
    if (!(lam >= 0.0 && lam <= 1.0)) throw std::invalid_argument("c_lambda: need 0 <= lambda <= 1");
    if (!(x > 0.0) || !(y > 0.0)) throw std::domain_error("c_lambda: need x, y > 0");
    return 0.5 * (1.0 + lam) * (1.0 / (x + lam * y) + 1.0 / (lam * x + y));
}

/// f_λ(x,y) = xy·c_λ(x,y); a mean: f_λ(x,x) = x, and f_λ(x,y) ≤ (x+y)/2.
inline double f_lambda(double lam, double x, double y) {
    return x * y * c_lambda(lam, x, y);
}

/// Spectrum of ρ plus the observable rotated into ρ's eigenbasis. In this
/// basis the left/right multiplication operators act entrywise, so every
/// λ-entropy evaluation is an O(dim²) sum; precompute this once when
/// scanning many λ (the quadrature below does).
struct LeftRightSpectrum {
    std::vector<double> eigenvalues;
    Matrix k_tilde;
};

inline LeftRightSpectrum left_right_spectrum(const HermitianMatrix& rho,
                                             const HermitianMatrix& k) {
    if (rho.dim() != k.dim())
        throw std::invalid_argument("left_right_spectrum: dimension mismatch");
    const EigenDecomposition dec = eigh(rho);
    const Matrix kt = dec.vectors.adjoint() * k.matrix() * dec.vectors;
    if (!kt.is_hermitian(1e-10 * std::max(1.0, kt.max_abs())))
        throw std::runtime_error("left_right_spectrum: rotated observable lost Hermiticity");
    return {dec.eigenvalues, kt};
}

namespace detail {

inline void require_positive_definite(const std::vector<double>& eigenvalues) {
    double max_ev = 0.0;
    for (double ev : eigenvalues) max_ev = std::max(max_ev, ev);
    for (double ev : eigenvalues)
        if (!(ev > 1e-12 * max_ev))
            throw std::domain_error("lambda_entropy: state must be positive definite");
}

// E_λ = -½ Σ_ij (d_i + d_j - 2 f_λ(d_i,d_j)) |k̃_ij|². Equivalent to the
// defining -tr ρk² + tr k f_λ(L_ρ,R_ρ)k, but every summand is nonnegative
// (f_λ is below the arithmetic mean), so nothing large cancels as λ → 0.
inline double lambda_entropy_from_spectrum(const LeftRightSpectrum& s, double lam) {
    const int n = static_cast<int>(s.eigenvalues.size());
    double sum = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double x = s.eigenvalues[i], y = s.eigenvalues[j];
            sum += (x + y - 2.0 * f_lambda(lam, x, y)) * std::norm(s.k_tilde(i, j));
        }
    return -0.5 * sum;
}

}  // namespace detail

/// λ-entropy E_λ(ρ,k) for λ ∈ (0,1] and positive definite ρ. Nonpositive,
/// vanishes when ρ and k commute.
inline double lambda_entropy(const LeftRightSpectrum& spectrum, double lam) {
    if (!(lam > 0.0 && lam <= 1.0))
        throw std::invalid_argument("lambda_entropy: need 0 < lambda <= 1");
    detail::require_positive_definite(spectrum.eigenvalues);
    return detail::lambda_entropy_from_spectrum(spectrum, lam);
}

inline double lambda_entropy(const HermitianMatrix& rho, const HermitianMatrix& k, double lam) {
    return lambda_entropy(left_right_spectrum(rho, k), lam);
}

/// Density of the probability measure μ_p on [0,1]:
/// (2 sin pπ)/(π p(1-p)) · (λ^p + λ^{1-p})/(1+λ)³.
inline double mu_p_density(double p, double lam) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("mu_p_density: p must lie in (0,1)");
    if (!(lam > 0.0 && lam <= 1.0))
        throw std::invalid_argument("mu_p_density: need 0 < lambda <= 1");
    // sin(pπ) = sin((1-p)π); evaluating at min(p, 1-p) makes the density
    // symmetric under p ↦ 1-p down to the last bit, not just in exact math.
    const double c =
        2.0 * std::sin(std::min(p, 1.0 - p) * std::numbers::pi) /
        (std::numbers::pi * p * (1.0 - p));
    const double onepl = 1.0 + lam;
    return c * (std::pow(lam, p) + std::pow(lam, 1.0 - p)) / (onepl * onepl * onepl);
}

namespace detail {

template <class F>
double integrate_unit_or_throw(F&& f, const QuadratureConfig& cfg, const char* what) {
    const QuadratureResult r =
        adaptive_simpson(std::forward<F>(f), 0.0, 1.0, cfg.abs_tol, cfg.max_panels);
    if (!r.converged)
        throw QuadratureError(std::string(what) + ": quadrature did not converge (estimate " +
                                  std::to_string(r.error_estimate) + ")",
                              r);
    return r.value;
}

}  // namespace detail

/// Total mass of μ_p; equals 1 (checked by tests for several p).
inline double mu_p_total_mass(double p, const QuadratureConfig& cfg = {}) {
    const double m = cfg.substitution_exponent;
    auto integrand = [p, m](double u) {
        if (u <= 0.0) return 0.0;
        const double lam = std::min(std::pow(u, m), 1.0);
        return mu_p_density(p, lam) * m * std::pow(u, m - 1.0);
    };
    return detail::integrate_unit_or_throw(integrand, cfg, "mu_p_total_mass");
}

/// ∫₀¹ λ^{-1} dμ_p(λ); finite for every p in (0,1). Uses a substitution
/// exponent large enough to remove the λ^{min(p,1-p)-1} endpoint blowup.
inline double mu_p_inverse_moment(double p, const QuadratureConfig& cfg = {}) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("mu_p_inverse_moment: p must lie in (0,1)");
    const double m = std::max(cfg.substitution_exponent, 2.0 / std::min(p, 1.0 - p));
    auto integrand = [p, m](double u) {
        if (u <= 0.0) return 0.0;
        const double lam = std::min(std::pow(u, m), 1.0);
        return mu_p_density(p, lam) / lam * m * std::pow(u, m - 1.0);
    };
    return detail::integrate_unit_or_throw(integrand, cfg, "mu_p_inverse_moment");
}

/// S_p reconstructed from the integral representation
/// S_p(ρ,k) = p(1-p)/2 ∫₀¹ E_λ(ρ,k) (1+λ)²/λ dμ_p(λ),
/// evaluated after the λ = u^m substitution. The prefactors collapse to
/// sin(pπ)/π · E_λ · (λ^p + λ^{1-p})/(λ(1+λ)).
inline QuadratureResult wyd_quadrature_detail(const HermitianMatrix& rho,
                                              const HermitianMatrix& k, double p,
                                              const QuadratureConfig& cfg = {}) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("wyd_via_quadrature: p must lie in (0,1)");
    const LeftRightSpectrum spectrum = left_right_spectrum(rho, k);
    detail::require_positive_definite(spectrum.eigenvalues);

    const double m = cfg.substitution_exponent;
    const double prefactor = std::sin(p * std::numbers::pi) / std::numbers::pi;
    auto integrand = [&spectrum, p, m, prefactor](double u) {
        if (u <= 0.0) return 0.0;  // E_λ = O(λ) kills the endpoint
        const double lam = std::min(std::pow(u, m), 1.0);
        if (lam <= 0.0) return 0.0;
        const double e = detail::lambda_entropy_from_spectrum(spectrum, lam);
        const double weight =
            (std::pow(lam, p) + std::pow(lam, 1.0 - p)) / (lam * (1.0 + lam));
        return prefactor * e * weight * m * std::pow(u, m - 1.0);
    };
    return adaptive_simpson(integrand, 0.0, 1.0, cfg.abs_tol, cfg.max_panels);
}

inline double wyd_via_quadrature(const HermitianMatrix& rho, const HermitianMatrix& k, double p,
                                 const QuadratureConfig& cfg = {}) {
    const QuadratureResult r = wyd_quadrature_detail(rho, k, p, cfg);
    if (!r.converged)
        throw QuadratureError("wyd_via_quadrature: quadrature did not converge (estimate " +
                                  std::to_string(r.error_estimate) + ")",
                              r);
    return r.value;
}

}  // namespace skewnum
