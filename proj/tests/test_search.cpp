#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstddef>
#include <vector>

#include "skewnum/skewnum.hpp"
#include "test_helpers.hpp"

using namespace skewnum;

namespace {

double min_eigenvalue(const HermitianMatrix& a) {
    return eigh(a).eigenvalues.front();
}

bool same_instance(const BipartiteInstance& a, const BipartiteInstance& b) {
    return testutil::max_entry_diff(a.rho12.matrix, b.rho12.matrix) == 0.0 &&
           testutil::max_entry_diff(a.k1, b.k1) == 0.0 &&
           testutil::max_entry_diff(a.k2, b.k2) == 0.0 && a.p == b.p;
}

}  // namespace

TEST_CASE("deterministic random instances", "[search]") {
    SECTION("same seed gives bitwise identical instances") {
        const BipartiteInstance a = random_instance({2, 2}, 42);
        const BipartiteInstance b = random_instance({2, 2}, 42);
        CHECK(same_instance(a, b));
        const BipartiteInstance c = random_instance({2, 2}, 43);
        CHECK_FALSE(same_instance(a, c));
    }

    SECTION("states are positive definite") {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const BipartiteInstance inst = random_instance({2, 2}, seed, 0.5, 1e-9);
            CHECK(min_eigenvalue(inst.rho12.matrix) >= 0.5e-9);
        }
    }

    SECTION("every entropy term is nonpositive") {
        const GapReport report = sa_gap(random_instance({2, 2}, 42));
        for (const auto& t : report.terms) CHECK(t.value <= 0.0);
    }

    SECTION("dims validation") {
        CHECK_THROWS_AS(random_instance({0, 2}, 1), std::invalid_argument);
    }
}

TEST_CASE("parameter layout", "[search]") {
    SECTION("vector sizes") {
        CHECK(ParameterLayout({2, 2}, 0.5, 1e-9, false, false).size() == 16);
        CHECK(ParameterLayout({2, 2}, 0.5, 1e-9, false, true).size() == 24);
        CHECK(ParameterLayout({2, 2}, 0.5, 1e-9, true, false).size() == 13);
        CHECK(ParameterLayout({2, 3}, 0.5, 1e-9, false, false).size() == 30);
    }

    SECTION("encode then decode reproduces the counterexample up to epsilon") {
        const ParameterLayout layout({2, 2}, 0.5, 1e-9, false, false);
        const BipartiteInstance inst = counterexample_instance();
        const BipartiteInstance back = layout.decode(layout.encode(inst));
        CHECK(testutil::max_entry_diff(back.rho12.matrix, inst.rho12.matrix) < 1e-7);
        CHECK(testutil::max_entry_diff(back.k1, inst.k1) == 0.0);
        CHECK(testutil::max_entry_diff(back.k2, inst.k2) == 0.0);
    }

    SECTION("random vectors decode to positive definite trace-26 states") {
        const ParameterLayout layout({2, 2}, 0.5, 1e-9, false, false);
        for (std::uint64_t r = 0; r < 10; ++r) {
            const std::vector<double> v = layout.random_start(CounterRng(11, r));
            REQUIRE(v.size() == layout.size());
            const BipartiteInstance inst = layout.decode(v);
            CHECK(min_eigenvalue(inst.rho12.matrix) >= 0.5e-9);
            CHECK(std::abs(inst.rho12.matrix.real_trace() - 26.0) < 1e-6);
        }
    }

    SECTION("complex layout round-trips a complex observable") {
        const ParameterLayout layout({2, 2}, 0.5, 1e-9, false, true);
        BipartiteInstance inst = counterexample_instance();
        const HermitianMatrix k1 =
            HermitianMatrix::from_rows({{Complex(2.0, 0.0), Complex(1.0, -3.0)},
                                        {Complex(1.0, 3.0), Complex(-1.0, 0.0)}});
        const BipartiteInstance complex_inst(inst.rho12, k1, inst.k2, 0.5);
        const BipartiteInstance back = layout.decode(layout.encode(complex_inst));
        CHECK(testutil::max_entry_diff(back.k1, k1) == 0.0);
    }

    SECTION("wrong vector length is rejected") {
        const ParameterLayout layout({2, 2}, 0.5, 1e-9, false, false);
        CHECK_THROWS_AS(layout.decode(std::vector<double>(15, 0.0)), std::invalid_argument);
    }
}

TEST_CASE("Nelder-Mead on a quadratic bowl", "[search]") {
    auto bowl = [](const std::vector<double>& x) {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double d = x[i] - (1.0 + static_cast<double>(i));
            s += d * d;
        }
        return s;
    };
    const std::vector<double> start{0.0, 0.0, 0.0};

    NelderMeadOptions opt;
    opt.max_iters = 400;
    const NelderMeadResult res = nelder_mead(bowl, start, opt);

    SECTION("finds the minimum") {
        REQUIRE(res.best_point.size() == 3);
        CHECK(res.best_value < 1e-10);
        for (std::size_t i = 0; i < 3; ++i)
            CHECK(std::abs(res.best_point[i] - (1.0 + static_cast<double>(i))) < 1e-4);
    }

    SECTION("history is monotone and one entry per iteration") {
        CHECK(res.best_history.size() == 401);
        for (std::size_t i = 1; i < res.best_history.size(); ++i)
            CHECK(res.best_history[i] <= res.best_history[i - 1]);
    }

    SECTION("bitwise deterministic") {
        const NelderMeadResult again = nelder_mead(bowl, start, opt);
        CHECK(again.best_value == res.best_value);
        CHECK(again.best_point == res.best_point);
        CHECK(again.best_history == res.best_history);
    }

    SECTION("argument validation") {
        CHECK_THROWS_AS(nelder_mead(bowl, std::vector<double>{}, opt), std::invalid_argument);
        NelderMeadOptions bad;
        bad.max_iters = 0;
        CHECK_THROWS_AS(nelder_mead(bowl, start, bad), std::invalid_argument);
    }
}

TEST_CASE("warm-started violation search descends below the seed gap", "[search]") {
    SearchConfig cfg;
    cfg.restarts = 1;
    cfg.seed = 3;
    cfg.max_iters = 200;

    const BipartiteInstance warm = counterexample_instance();
    const double warm_gap = sa_gap(warm).gap;
    const SearchOutcome out = search_sa_violation(cfg, warm, 1);

    CHECK(out.report.violated);
    CHECK(out.report.gap <= warm_gap);
    CHECK(out.report.gap <= -52.1635);
    CHECK(out.restart_index >= -1);
    CHECK(std::abs(out.instance.rho12.matrix.real_trace() - 26.0) < 1e-6);
}

TEST_CASE("cold violation search", "[search]") {
    SearchConfig cfg;
    cfg.restarts = 8;
    cfg.seed = 7;
    cfg.max_iters = 300;

    const SearchOutcome out = search_sa_violation(cfg, std::nullopt, 1);

    SECTION("finds a violation from random starts") {
        CHECK(out.report.violated);
        CHECK(out.report.gap < -1.0);
        CHECK(out.restart_index >= 0);
        CHECK(out.restart_index < 8);
        CHECK(min_eigenvalue(out.instance.rho12.matrix) > 0.0);
    }

    SECTION("is reproducible bit for bit, independent of thread count") {
        const SearchOutcome again = search_sa_violation(cfg, std::nullopt, 1);
        CHECK(again.report.gap == out.report.gap);
        CHECK(again.restart_index == out.restart_index);
        CHECK(same_instance(again.instance, out.instance));

        const SearchOutcome threaded = search_sa_violation(cfg, std::nullopt, 2);
        CHECK(threaded.report.gap == out.report.gap);
        CHECK(threaded.restart_index == out.restart_index);
        CHECK(same_instance(threaded.instance, out.instance));
    }
}

TEST_CASE("search with the second observable pinned to zero finds no violation", "[search]") {
    SearchConfig cfg;
    cfg.restarts = 4;
    cfg.seed = 1;
    cfg.max_iters = 150;
    cfg.fix_k2_zero = true;

    const SearchOutcome out = search_sa_violation(cfg, std::nullopt, 1);
    CHECK_FALSE(out.report.violated);
    CHECK(out.instance.k2.max_abs() == 0.0);
}

TEST_CASE("search configuration is validated", "[search]") {
    const auto expect_invalid = [](SearchConfig cfg) {
        CHECK_THROWS_AS(search_sa_violation(cfg, std::nullopt, 1), std::invalid_argument);
    };
    SearchConfig cfg;
    cfg.restarts = 0;
    expect_invalid(cfg);
    cfg = {};
    cfg.p = 1.0;
    expect_invalid(cfg);
    cfg = {};
    cfg.max_iters = 0;
    expect_invalid(cfg);
    cfg = {};
    cfg.epsilon = 0.0;
    expect_invalid(cfg);
    cfg = {};
    cfg.dims = {0, 2};
    expect_invalid(cfg);

    SECTION("warm start dims must match the configured dims") {
        SearchConfig mismatch;
        mismatch.dims = {2, 3};
        CHECK_THROWS_AS(search_sa_violation(mismatch, counterexample_instance(), 1),
                        std::invalid_argument);
    }
}

TEST_CASE("exponent sweep", "[search]") {
    const BipartiteInstance inst = counterexample_instance();
    std::vector<double> grid;
    for (int i = 1; i <= 9; ++i) grid.push_back(i / 10.0);

    const std::vector<GapReport> reports = p_sweep(inst, grid);
    REQUIRE(reports.size() == 9);

    SECTION("reports come back in grid order with the swept exponent") {
        for (std::size_t i = 0; i < reports.size(); ++i) CHECK(reports[i].p == grid[i]);
    }

    SECTION("the counterexample violates subadditivity at every swept exponent") {
        for (const GapReport& r : reports) {
            CHECK(r.gap < 0.0);
            CHECK(r.violated);
        }
    }

    SECTION("midpoint value matches the closed form") {
        CHECK(std::abs(reports[4].gap - (-725.0 + 81.0 * std::sqrt(69.0))) < 1e-9);
    }

    SECTION("gap is symmetric under p -> 1-p") {
        for (std::size_t i = 0; i < 4; ++i)
            CHECK(std::abs(reports[i].gap - reports[8 - i].gap) <=
                  1e-10 * std::max(1.0, std::abs(reports[i].gap)));
    }

    SECTION("product states sweep to zero everywhere") {
        std::mt19937_64 rng(2024);
        const HermitianMatrix a = testutil::normalized(testutil::random_pd(rng, 2));
        const HermitianMatrix b = testutil::normalized(testutil::random_pd(rng, 2));
        const BipartiteInstance prod(MultipartiteOperator(kron(a, b), {2, 2}),
                                     testutil::random_hermitian(rng, 2, 3.0),
                                     testutil::random_hermitian(rng, 2, 3.0), 0.5);
        for (const GapReport& r : p_sweep(prod, grid)) {
            CHECK(std::abs(r.gap) < 1e-9);
            CHECK_FALSE(r.violated);
        }
    }

    SECTION("empty grids are rejected") {
        CHECK_THROWS_AS(p_sweep(inst, {}), std::invalid_argument);
    }
}
