#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "skewnum/matrix.hpp"

namespace skewnum {

/// Result of diagonalizing a Hermitian matrix: real eigenvalues in
/// ascending order, and a unitary matrix whose column j is the eigenvector
/// belonging to eigenvalues[j].
struct EigenDecomposition {
    std::vector<double> eigenvalues;
    Matrix vectors;

    /// V·diag(f(eigenvalues))·V*.
    Matrix reconstruct(const std::vector<double>& diag) const {
        const int n = vectors.dim();
        Matrix r(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Complex s = 0.0;
                for (int k = 0; k < n; ++k)
                    s += vectors(i, k) * diag[k] * std::conj(vectors(j, k));
                r(i, j) = s;
            }
        return r;
    }
};

namespace detail {

// One cyclic complex Jacobi rotation annihilating A[p][q]. Updates A in
// place and accumulates the rotation into V.
inline void jacobi_rotate(Matrix& a, Matrix& v, int p, int q) {
    const Complex apq = a(p, q);
    const double r = std::abs(apq);
    if (r == 0.0) return;

    const Complex u = apq / r;  // unit phase of the off-diagonal entry
    const double diff = a(q, q).real() - a(p, p).real();
    const double tau = diff / (2.0 * r);
    double t;
    if (std::isinf(tau)) {
        t = 0.0;
    } else if (tau >= 0.0) {
        t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
    } else {
        t = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
    }
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;

    const int n = a.dim();
    // A <- U* A U with U acting on the (p,q) plane:
    //   U[p][p] = c, U[p][q] = s·u, U[q][p] = -s·conj(u), U[q][q] = c.
    for (int j = 0; j < n; ++j) {
        const Complex ap = a(p, j), aq = a(q, j);
        a(p, j) = c * ap - s * u * aq;
        a(q, j) = s * std::conj(u) * ap + c * aq;
    }
    for (int i = 0; i < n; ++i) {
        const Complex ap = a(i, p), aq = a(i, q);
        a(i, p) = c * ap - s * std::conj(u) * aq;
        a(i, q) = s * u * ap + c * aq;
    }
    a(p, q) = 0.0;
    a(q, p) = 0.0;
    a(p, p) = Complex(a(p, p).real(), 0.0);
    a(q, q) = Complex(a(q, q).real(), 0.0);

    for (int i = 0; i < n; ++i) {
        const Complex vp = v(i, p), vq = v(i, q);
        v(i, p) = c * vp - s * std::conj(u) * vq;
        v(i, q) = s * u * vp + c * vq;
    }
}

inline double off_diagonal_norm(const Matrix& a) {
    double s = 0.0;
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

}  // namespace detail

/// Full eigendecomposition by cyclic Jacobi with complex rotations.
/// Converged when the off-diagonal Frobenius mass drops below
/// 1e-14·‖a‖_F; throws after 100 sweeps without convergence.
inline EigenDecomposition eigh(const HermitianMatrix& input) {
    constexpr double kOffTol = 1e-14;
    constexpr int kMaxSweeps = 100;

    const int n = input.dim();
    Matrix a = input.matrix();
    Matrix v = Matrix::identity(n);
    const double norm = a.frobenius_norm();

    if (norm > 0.0 && n > 1) {
        bool converged = false;
        for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
            if (detail::off_diagonal_norm(a) < kOffTol * norm) {
                converged = true;
                break;
            }
            for (int p = 0; p < n - 1; ++p)
                for (int q = p + 1; q < n; ++q) detail::jacobi_rotate(a, v, p, q);
        }
        if (!converged && detail::off_diagonal_norm(a) >= kOffTol * norm)
            throw std::runtime_error("eigh: Jacobi sweeps did not converge");
    }

    // Stable ascending sort; ties keep the Jacobi output order.
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&a](int i, int j) { return a(i, i).real() < a(j, j).real(); });

    EigenDecomposition dec;
    dec.eigenvalues.resize(n);
    dec.vectors = Matrix(n);
    for (int j = 0; j < n; ++j) {
        dec.eigenvalues[j] = a(order[j], order[j]).real();
        for (int i = 0; i < n; ++i) dec.vectors(i, j) = v(i, order[j]);
    }
    return dec;
}

/// V·diag(f(λ))·V* for a scalar function f defined on the spectrum.
/// Throws std::domain_error when f produces a non-finite value at an
/// eigenvalue.
template <class F>
HermitianMatrix apply_spectral_function(const HermitianMatrix& a, F&& f) {
    const EigenDecomposition dec = eigh(a);
    std::vector<double> mapped(dec.eigenvalues.size());
    for (size_t i = 0; i < dec.eigenvalues.size(); ++i) {
        mapped[i] = f(dec.eigenvalues[i]);
        if (!std::isfinite(mapped[i]))
            throw std::domain_error("apply_spectral_function: function undefined at eigenvalue " +
                                    std::to_string(dec.eigenvalues[i]));
    }
    return HermitianMatrix(dec.reconstruct(mapped));
}

namespace detail {

// Rounding noise policy for fractional powers: eigenvalues in
// [-tau, 0] with tau = 1e-12·max eigenvalue are clamped to 0; anything
// below -tau means the matrix is genuinely indefinite.
inline std::vector<double> clamped_psd_spectrum(const std::vector<double>& eigenvalues) {
    double max_ev = 0.0;
    for (double ev : eigenvalues) max_ev = std::max(max_ev, ev);
    const double tau = 1e-12 * max_ev;
    std::vector<double> out(eigenvalues.size());
    for (size_t i = 0; i < eigenvalues.size(); ++i) {
        if (eigenvalues[i] < -tau)
            throw std::domain_error("matrix is not positive semi-definite (eigenvalue " +
                                    std::to_string(eigenvalues[i]) + ")");
        out[i] = std::max(eigenvalues[i], 0.0);
    }
    return out;
}

}  // namespace detail

/// a^p for positive semi-definite a and p > 0, with the clamping policy
/// above applied to small negative eigenvalues.
inline HermitianMatrix matrix_power_psd(const HermitianMatrix& a, double p) {
    if (!(p > 0.0)) throw std::invalid_argument("matrix_power_psd: exponent must be positive");
    const EigenDecomposition dec = eigh(a);
    std::vector<double> ev = detail::clamped_psd_spectrum(dec.eigenvalues);
    for (double& x : ev) x = std::pow(x, p);
    return HermitianMatrix(dec.reconstruct(ev));
}

/// Positive semi-definite square root.
inline HermitianMatrix matrix_sqrt_psd(const HermitianMatrix& a) {
    const EigenDecomposition dec = eigh(a);
    std::vector<double> ev = detail::clamped_psd_spectrum(dec.eigenvalues);
    for (double& x : ev) x = std::sqrt(x);
    return HermitianMatrix(dec.reconstruct(ev));
}

/// ab - ba. Anti-Hermitian whenever a and b are Hermitian.
inline Matrix commutator(const Matrix& a, const Matrix& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("commutator: dimension mismatch");
    return a * b - b * a;
}

inline Matrix commutator(const HermitianMatrix& a, const HermitianMatrix& b) {
    return commutator(a.matrix(), b.matrix());
}

inline Matrix commutator(const HermitianMatrix& a, const Matrix& b) {
    return commutator(a.matrix(), b);
}

}  // namespace skewnum
