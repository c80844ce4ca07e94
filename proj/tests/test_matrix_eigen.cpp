#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "skewnum/skewnum.hpp"
#include "test_helpers.hpp"

using namespace skewnum;
using testutil::max_entry_diff;

TEST_CASE("HermitianMatrix validates and symmetrizes input", "[matrix]") {
    Matrix ok = Matrix::from_rows({{Complex(2, 0), Complex(1, 3)}, {Complex(1, -3), Complex(5, 0)}});
    HermitianMatrix h(ok);
    CHECK(h(0, 1) == Complex(1, 3));
    CHECK(h(1, 0) == Complex(1, -3));

    Matrix skewed = ok;
    skewed(0, 1) += Complex(1e-13, 0);  // inside the 1e-12*max tolerance
    CHECK_NOTHROW(HermitianMatrix(skewed));
    HermitianMatrix hs(skewed);
    CHECK(hs(0, 1) == std::conj(hs(1, 0)));

    Matrix bad = ok;
    bad(0, 1) = Complex(1.1, 3);
    CHECK_THROWS_AS(HermitianMatrix(bad), std::invalid_argument);

    Matrix imag_diag = ok;
    imag_diag(0, 0) = Complex(2, 0.5);
    CHECK_THROWS_AS(HermitianMatrix(imag_diag), std::invalid_argument);

    CHECK_THROWS_AS(Matrix::from_rows({{Complex(1), Complex(2)}}), std::invalid_argument);
}

TEST_CASE("eigh reproduces the known spectra", "[eigen]") {
    const double s17 = std::sqrt(17.0);

    SECTION("4x4 state") {
        const EigenDecomposition dec = eigh(counterexample_instance().rho12.matrix);
        const double expected[4] = {0.5 * (21.0 - 5.0 * s17), 1.0, 4.0, 0.5 * (21.0 + 5.0 * s17)};
        for (int i = 0; i < 4; ++i)
            CHECK(std::abs(dec.eigenvalues[i] - expected[i]) < 1e-12);
    }

    SECTION("identity") {
        const EigenDecomposition dec = eigh(HermitianMatrix::identity(4));
        for (double ev : dec.eigenvalues) CHECK(ev == 1.0);
        CHECK(max_entry_diff(dec.vectors.adjoint() * dec.vectors, Matrix::identity(4)) < 1e-14);
    }

    SECTION("reduced state") {
        const EigenDecomposition dec = eigh(counterexample_reduced_state());
        CHECK(std::abs(dec.eigenvalues[0] - 3.0) < 1e-12);
        CHECK(std::abs(dec.eigenvalues[1] - 23.0) < 1e-12);
    }
}

TEST_CASE("eigh invariants on random Hermitian matrices", "[eigen]") {
    std::mt19937_64 rng(12345);
    std::uniform_int_distribution<int> dims(1, 8);
    for (int trial = 0; trial < 200; ++trial) {
        const int d = dims(rng);
        const HermitianMatrix a = testutil::random_hermitian(rng, d, 3.0);
        const EigenDecomposition dec = eigh(a);

        for (int i = 0; i + 1 < d; ++i) CHECK(dec.eigenvalues[i] <= dec.eigenvalues[i + 1]);

        const double scale = std::max(a.max_abs(), 1e-30);
        CHECK(max_entry_diff(dec.reconstruct(dec.eigenvalues), a.matrix()) <= 1e-10 * scale);
        CHECK(max_entry_diff(dec.vectors.adjoint() * dec.vectors, Matrix::identity(d)) <= 1e-10);

        double ev_sum = 0.0;
        for (double ev : dec.eigenvalues) ev_sum += ev;
        CHECK(std::abs(ev_sum - a.real_trace()) <= 1e-10 * std::max(1.0, std::abs(ev_sum)));
    }
}

TEST_CASE("spectral functions", "[eigen]") {
    const HermitianMatrix rho12 = counterexample_instance().rho12.matrix;

    SECTION("square root of the 4x4 state is an integer matrix") {
        CHECK(max_entry_diff(matrix_sqrt_psd(rho12), counterexample_sqrt()) < 1e-10);
        CHECK(max_entry_diff(apply_spectral_function(rho12, [](double x) { return std::sqrt(x); }),
                             counterexample_sqrt()) < 1e-10);
    }

    SECTION("identity function returns the input") {
        CHECK(max_entry_diff(apply_spectral_function(rho12, [](double x) { return x; }), rho12) <
              1e-12 * rho12.max_abs());
    }

    SECTION("square root of the reduced state") {
        const double a = 0.5 * (std::sqrt(23.0) + std::sqrt(3.0));
        const double b = 0.5 * (std::sqrt(23.0) - std::sqrt(3.0));
        const HermitianMatrix expected = HermitianMatrix::from_real({{a, b}, {b, a}});
        CHECK(max_entry_diff(matrix_sqrt_psd(counterexample_reduced_state()), expected) < 1e-12);
    }

    SECTION("sqrt squared returns the matrix for random PSD input") {
        std::mt19937_64 rng(777);
        for (int trial = 0; trial < 50; ++trial) {
            const HermitianMatrix a = testutil::random_psd(rng, 2 + trial % 5);
            const HermitianMatrix r = matrix_sqrt_psd(a);
            CHECK(max_entry_diff(r.matrix() * r.matrix(), a.matrix()) <= 1e-9 * a.max_abs());
        }
    }

    SECTION("fractional powers respect the indefiniteness policy") {
        const HermitianMatrix slightly_negative =
            HermitianMatrix::from_real({{1.0, 0.0}, {0.0, -5e-13}});
        CHECK_NOTHROW(matrix_power_psd(slightly_negative, 0.5));
        const HermitianMatrix clamped = matrix_power_psd(slightly_negative, 0.5);
        CHECK(std::abs(clamped(1, 1)) < 1e-12);

        const HermitianMatrix indefinite = HermitianMatrix::from_real({{1.0, 0.0}, {0.0, -1e-6}});
        CHECK_THROWS_AS(matrix_power_psd(indefinite, 0.5), std::domain_error);
        CHECK_THROWS_AS(matrix_sqrt_psd(indefinite), std::domain_error);

        CHECK_THROWS_AS(matrix_power_psd(slightly_negative, 0.0), std::invalid_argument);
    }
}

TEST_CASE("commutators", "[eigen]") {
    const BipartiteInstance inst = counterexample_instance();
    const MultipartiteOperator k12 = local_sum({inst.k1, inst.k2}, inst.rho12.dims);

    SECTION("square root against joint observable") {
        const Matrix c = commutator(counterexample_sqrt().matrix(), k12.matrix.matrix());
        CHECK(max_entry_diff(c, counterexample_commutator()) == 0.0);
        CHECK(max_entry_diff(c * c, counterexample_commutator_squared()) == 0.0);
    }

    SECTION("self-commutator vanishes") {
        const Matrix z = commutator(inst.rho12.matrix, inst.rho12.matrix);
        CHECK(z.max_abs() == 0.0);
    }

    SECTION("reduced square root against its observable") {
        const Matrix c =
            commutator(matrix_sqrt_psd(counterexample_reduced_state()), inst.k1.matrix());
        const double off = 4.5 * (std::sqrt(23.0) - std::sqrt(3.0));
        CHECK(std::abs(c(0, 1).real() - (-off)) < 1e-12);
        CHECK(std::abs(c(1, 0).real() - off) < 1e-12);
        CHECK(std::abs(c(0, 0)) < 1e-12);
        CHECK(std::abs(c(1, 1)) < 1e-12);
    }

    SECTION("anti-Hermitian with zero trace for random inputs") {
        std::mt19937_64 rng(2024);
        for (int trial = 0; trial < 100; ++trial) {
            const int d = 2 + trial % 4;
            const HermitianMatrix a = testutil::random_hermitian(rng, d, 2.0);
            const HermitianMatrix b = testutil::random_hermitian(rng, d, 2.0);
            const Matrix c = commutator(a, b);
            const double scale = std::max(1.0, a.max_abs() * b.max_abs());
            CHECK(max_entry_diff(c.adjoint(), -c) <= 1e-12 * scale);
            CHECK(std::abs(c.trace()) <= 1e-12 * scale);
            for (int i = 0; i < d; ++i) CHECK(std::abs(c(i, i).real()) <= 1e-12 * scale);
        }
    }

    SECTION("dimension mismatch is rejected") {
        CHECK_THROWS_AS(commutator(HermitianMatrix::identity(2), HermitianMatrix::identity(3)),
                        std::invalid_argument);
    }
}
