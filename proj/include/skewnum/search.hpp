#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "skewnum/inequality.hpp"
#include "skewnum/matrix.hpp"
#include "skewnum/rng.hpp"
#include "skewnum/tensor.hpp"

namespace skewnum {

struct SearchConfig {
    std::pair<int, int> dims{2, 2};
    double p = 0.5;
    int restarts = 1;
    std::uint64_t seed = 0;
    int max_iters = 500;
    double reflection = 1.0;
    double expansion = 2.0;
    double contraction = 0.5;
    double shrink = 0.5;
    double epsilon = 1e-9;
    bool fix_k2_zero = false;
    bool complex_entries = false;
};

namespace detail {

inline void validate_search_config(const SearchConfig& cfg) {
    if (cfg.dims.first < 1 || cfg.dims.second < 1)
        throw std::invalid_argument("SearchConfig: dims must be >= 1");
    if (!(cfg.p > 0.0 && cfg.p < 1.0))
        throw std::invalid_argument("SearchConfig: p must lie in (0,1)");
    if (cfg.restarts < 1) throw std::invalid_argument("SearchConfig: restarts must be >= 1");
    if (cfg.max_iters < 1) throw std::invalid_argument("SearchConfig: max_iters must be >= 1");
    if (!(cfg.reflection > 0.0) || !(cfg.expansion > 0.0) || !(cfg.contraction > 0.0) ||
        !(cfg.shrink > 0.0))
        throw std::invalid_argument("SearchConfig: simplex coefficients must be positive");
    if (!(cfg.epsilon > 0.0)) throw std::invalid_argument("SearchConfig: epsilon must be positive");
}

/// Best-effort lower Cholesky factor of a Hermitian matrix: nonpositive
/// pivots are flattened to zero instead of throwing, so near-PSD inputs
/// still produce a usable factor.
inline Matrix cholesky_lower_clamped(const Matrix& a) {
    const int d = a.dim();
    Matrix l = Matrix::zero(d);
    for (int j = 0; j < d; ++j) {
        double s = a(j, j).real();
        for (int k = 0; k < j; ++k) s -= std::norm(l(j, k));
        const double piv = s > 0.0 ? std::sqrt(s) : 0.0;
        l(j, j) = piv;
        for (int i = j + 1; i < d; ++i) {
            Complex t = a(i, j);
            for (int k = 0; k < j; ++k) t -= l(i, k) * std::conj(l(j, k));
            l(i, j) = piv > 0.0 ? t / piv : Complex(0.0);
        }
    }
    return l;
}

}  // namespace detail

/// Maps between flat real parameter vectors and bipartite instances. The
/// state block stores a lower-triangular factor L; decode forms LL*,
/// rescales it to trace 26 (a pure conditioning choice: the gap is
/// homogeneous in the state), and adds ε·I so every decoded state is
/// positive definite with smallest eigenvalue at least ε. Observables are
/// stored entrywise (triangle only).
class ParameterLayout {
  public:
    ParameterLayout(std::pair<int, int> dims, double p, double epsilon, bool fix_k2_zero,
                    bool complex_entries)
        : dims_(dims), p_(p), epsilon_(epsilon), fix_k2_zero_(fix_k2_zero),
          complex_(complex_entries) {
        if (dims.first < 1 || dims.second < 1)
            throw std::invalid_argument("ParameterLayout: dims must be >= 1");
        if (!(p > 0.0 && p < 1.0))
            throw std::invalid_argument("ParameterLayout: p must lie in (0,1)");
        if (!(epsilon > 0.0))
            throw std::invalid_argument("ParameterLayout: epsilon must be positive");
    }

    std::size_t size() const {
        const std::size_t d = joint_dim();
        std::size_t n = block_size(d);
        n += block_size(static_cast<std::size_t>(dims_.first));
        if (!fix_k2_zero_) n += block_size(static_cast<std::size_t>(dims_.second));
        return n;
    }

    BipartiteInstance decode(const std::vector<double>& v) const {
        if (v.size() != size())
            throw std::invalid_argument("ParameterLayout: wrong parameter vector length");
        const int d = static_cast<int>(joint_dim());
        std::size_t t = 0;
        const Matrix l = read_lower(v, t, d);

        Matrix a = Matrix::zero(d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j <= i; ++j) {
                Complex s = 0.0;
                for (int k = 0; k <= j; ++k) s += l(i, k) * std::conj(l(j, k));
                a(i, j) = s;
                if (i != j) a(j, i) = std::conj(s);
            }

        double tr = 0.0;
        for (int i = 0; i < d; ++i) tr += a(i, i).real();
        if (tr > kTraceFloor) {
            const double scale = 26.0 / tr;
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) a(i, j) *= scale;
        }
        for (int i = 0; i < d; ++i) a(i, i) += epsilon_;

        HermitianMatrix k1 = read_hermitian(v, t, dims_.first);
        HermitianMatrix k2 = fix_k2_zero_ ? HermitianMatrix::zero(dims_.second)
                                          : read_hermitian(v, t, dims_.second);
        return BipartiteInstance(MultipartiteOperator(HermitianMatrix(a),
                                                      {dims_.first, dims_.second}),
                                 std::move(k1), std::move(k2), p_);
    }

    std::vector<double> encode(const BipartiteInstance& inst) const {
        if (inst.rho12.dims[0] != dims_.first || inst.rho12.dims[1] != dims_.second)
            throw std::invalid_argument("ParameterLayout: instance dims do not match layout");
        const int d = static_cast<int>(joint_dim());
        Matrix b = inst.rho12.matrix.matrix();
        for (int i = 0; i < d; ++i) b(i, i) -= epsilon_;
        const Matrix l = detail::cholesky_lower_clamped(b);

        std::vector<double> v;
        v.reserve(size());
        write_lower(v, l, d);
        write_hermitian(v, inst.k1);
        if (!fix_k2_zero_) write_hermitian(v, inst.k2);
        return v;
    }

    /// Start point for one restart: state-factor entries uniform in [-1,1],
    /// observable entries uniform in [-10,10].
    std::vector<double> random_start(const CounterRng& rng) const {
        const std::size_t n = size();
        const std::size_t state_block = block_size(joint_dim());
        std::vector<double> v(n);
        for (std::size_t i = 0; i < n; ++i)
            v[i] = i < state_block ? rng.uniform(i, -1.0, 1.0) : rng.uniform(i, -10.0, 10.0);
        return v;
    }

    double p() const { return p_; }
    double epsilon() const { return epsilon_; }

  private:
    static constexpr double kTraceFloor = 1e-150;

    std::size_t joint_dim() const {
        return static_cast<std::size_t>(dims_.first) * static_cast<std::size_t>(dims_.second);
    }

    std::size_t block_size(std::size_t d) const {
        return complex_ ? d * d : d * (d + 1) / 2;
    }

    Matrix read_lower(const std::vector<double>& v, std::size_t& t, int d) const {
        Matrix l = Matrix::zero(d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j <= i; ++j) {
                if (complex_ && j < i) {
                    l(i, j) = Complex(v[t], v[t + 1]);
                    t += 2;
                } else {
                    l(i, j) = v[t++];
                }
            }
        return l;
    }

    void write_lower(std::vector<double>& v, const Matrix& l, int d) const {
        for (int i = 0; i < d; ++i)
            for (int j = 0; j <= i; ++j) {
                v.push_back(l(i, j).real());
                if (complex_ && j < i) v.push_back(l(i, j).imag());
            }
    }

    HermitianMatrix read_hermitian(const std::vector<double>& v, std::size_t& t, int d) const {
        Matrix k = Matrix::zero(d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j <= i; ++j) {
                Complex e;
                if (complex_ && j < i) {
                    e = Complex(v[t], v[t + 1]);
                    t += 2;
                } else {
                    e = v[t++];
                }
                k(i, j) = e;
                if (i != j) k(j, i) = std::conj(e);
            }
        return HermitianMatrix(k);
    }

    void write_hermitian(std::vector<double>& v, const HermitianMatrix& k) const {
        for (int i = 0; i < k.dim(); ++i)
            for (int j = 0; j <= i; ++j) {
                v.push_back(k(i, j).real());
                if (complex_ && j < i) v.push_back(k(i, j).imag());
            }
    }

    std::pair<int, int> dims_;
    double p_;
    double epsilon_;
    bool fix_k2_zero_;
    bool complex_;
};

/// Random bipartite instance: ρ = GG* + ε·I with G entrywise uniform in
/// [-1,1]; observables symmetric with entries uniform in [-10,10].
/// Deterministic per (dims, seed).
inline BipartiteInstance random_instance(std::pair<int, int> dims, std::uint64_t seed,
                                         double p = 0.5, double epsilon = 1e-9) {
    if (dims.first < 1 || dims.second < 1)
        throw std::invalid_argument("random_instance: dims must be >= 1");
    const int d = dims.first * dims.second;
    const CounterRng rng(seed, 0);
    std::uint64_t c = 0;

    Matrix g = Matrix::zero(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) g(i, j) = rng.uniform(c++, -1.0, 1.0);
    Matrix rho = g * g.adjoint();
    for (int i = 0; i < d; ++i) rho(i, i) += epsilon;

    auto random_symmetric = [&](int dk) {
        Matrix k = Matrix::zero(dk);
        for (int i = 0; i < dk; ++i)
            for (int j = 0; j <= i; ++j) {
                const double e = rng.uniform(c++, -10.0, 10.0);
                k(i, j) = e;
                k(j, i) = e;
            }
        return HermitianMatrix(k);
    };
    HermitianMatrix k1 = random_symmetric(dims.first);
    HermitianMatrix k2 = random_symmetric(dims.second);
    return BipartiteInstance(MultipartiteOperator(HermitianMatrix(rho), {dims.first, dims.second}),
                             std::move(k1), std::move(k2), p);
}

struct NelderMeadOptions {
    int max_iters = 500;
    double reflection = 1.0;
    double expansion = 2.0;
    double contraction = 0.5;
    double shrink = 0.5;
};

struct NelderMeadResult {
    std::vector<double> best_point;
    double best_value = 0.0;
    /// Best value seen after each iteration (entry 0 is the initial
    /// simplex); non-increasing by construction.
    std::vector<double> best_history;
};

/// Nelder-Mead simplex descent. The best vertex is never discarded (only
/// the worst is replaced, and shrink contracts toward the best), so the
/// running minimum is monotone. Deterministic for a deterministic f.
template <typename F>
NelderMeadResult nelder_mead(F&& f, const std::vector<double>& start,
                             const NelderMeadOptions& opt = {}) {
    const std::size_t n = start.size();
    if (n == 0) throw std::invalid_argument("nelder_mead: empty start point");
    if (opt.max_iters < 1) throw std::invalid_argument("nelder_mead: max_iters must be >= 1");

    auto eval = [&f](const std::vector<double>& x) {
        const double v = f(x);
        return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    };

    std::vector<std::vector<double>> pts(n + 1, start);
    for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += 0.05 * (1.0 + std::abs(start[i]));
    std::vector<double> vals(n + 1);
    for (std::size_t i = 0; i <= n; ++i) vals[i] = eval(pts[i]);

    NelderMeadResult res;
    res.best_history.reserve(static_cast<std::size_t>(opt.max_iters) + 1);
    auto current_min = [&] {
        return *std::min_element(vals.begin(), vals.end());
    };
    res.best_history.push_back(current_min());

    std::vector<double> centroid(n), xr(n), xx(n);
    for (int iter = 0; iter < opt.max_iters; ++iter) {
        const std::size_t b =
            static_cast<std::size_t>(std::min_element(vals.begin(), vals.end()) - vals.begin());
        const std::size_t w =
            static_cast<std::size_t>(std::max_element(vals.begin(), vals.end()) - vals.begin());
        double second_worst = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i <= n; ++i)
            if (i != w) second_worst = std::max(second_worst, vals[i]);

        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i <= n; ++i)
                if (i != w) s += pts[i][j];
            centroid[j] = s / static_cast<double>(n);
        }

        for (std::size_t j = 0; j < n; ++j)
            xr[j] = centroid[j] + opt.reflection * (centroid[j] - pts[w][j]);
        const double fr = eval(xr);

        bool do_shrink = false;
        if (fr < vals[b]) {
            for (std::size_t j = 0; j < n; ++j)
                xx[j] = centroid[j] + opt.expansion * (xr[j] - centroid[j]);
            const double fe = eval(xx);
            if (fe < fr) {
                pts[w] = xx;
                vals[w] = fe;
            } else {
                pts[w] = xr;
                vals[w] = fr;
            }
        } else if (fr < second_worst) {
            pts[w] = xr;
            vals[w] = fr;
        } else if (fr < vals[w]) {
            for (std::size_t j = 0; j < n; ++j)
                xx[j] = centroid[j] + opt.contraction * (xr[j] - centroid[j]);
            const double fc = eval(xx);
            if (fc <= fr) {
                pts[w] = xx;
                vals[w] = fc;
            } else {
                do_shrink = true;
            }
        } else {
            for (std::size_t j = 0; j < n; ++j)
                xx[j] = centroid[j] + opt.contraction * (pts[w][j] - centroid[j]);
            const double fc = eval(xx);
            if (fc < vals[w]) {
                pts[w] = xx;
                vals[w] = fc;
            } else {
                do_shrink = true;
            }
        }

        if (do_shrink) {
            for (std::size_t i = 0; i <= n; ++i) {
                if (i == b) continue;
                for (std::size_t j = 0; j < n; ++j)
                    pts[i][j] = pts[b][j] + opt.shrink * (pts[i][j] - pts[b][j]);
                vals[i] = eval(pts[i]);
            }
        }
        res.best_history.push_back(current_min());
    }

    const std::size_t b =
        static_cast<std::size_t>(std::min_element(vals.begin(), vals.end()) - vals.begin());
    res.best_point = pts[b];
    res.best_value = vals[b];
    return res;
}

struct SearchOutcome {
    GapReport report;
    BipartiteInstance instance;
    /// Index of the winning start: -1 for the warm start, otherwise the
    /// restart number.
    long long restart_index = 0;
};

/// Minimize the subadditivity gap over instances by Nelder-Mead descent
/// from `restarts` random start points (plus an optional warm start).
/// Restarts may run concurrently (`threads`; 0 = hardware concurrency) but
/// the result is scheduling-independent: each restart draws from its own
/// (seed, restart) stream and the reduction takes the minimum with ties to
/// the lowest start index (warm start first). Never throws on a failed
/// search; the best nonviolating report is returned with violated = false.
inline SearchOutcome search_sa_violation(
    const SearchConfig& cfg,
    const std::optional<BipartiteInstance>& warm_start = std::nullopt, int threads = 0) {
    detail::validate_search_config(cfg);
    const ParameterLayout layout(cfg.dims, cfg.p, cfg.epsilon, cfg.fix_k2_zero,
                                 cfg.complex_entries);
    if (warm_start &&
        (warm_start->rho12.dims[0] != cfg.dims.first ||
         warm_start->rho12.dims[1] != cfg.dims.second))
        throw std::invalid_argument("search_sa_violation: warm start dims do not match config");

    auto objective = [&layout](const std::vector<double>& v) -> double {
        try {
            return sa_gap(layout.decode(v), 0.0).gap;
        } catch (const std::exception&) {
            return std::numeric_limits<double>::infinity();
        }
    };

    NelderMeadOptions opt;
    opt.max_iters = cfg.max_iters;
    opt.reflection = cfg.reflection;
    opt.expansion = cfg.expansion;
    opt.contraction = cfg.contraction;
    opt.shrink = cfg.shrink;

    std::vector<std::vector<double>> starts;
    starts.reserve(static_cast<std::size_t>(cfg.restarts) + (warm_start ? 1 : 0));
    if (warm_start) starts.push_back(layout.encode(*warm_start));
    for (int r = 0; r < cfg.restarts; ++r)
        starts.push_back(layout.random_start(CounterRng(cfg.seed, static_cast<std::uint64_t>(r))));

    const std::size_t jobs = starts.size();
    std::vector<double> best_values(jobs, std::numeric_limits<double>::infinity());
    std::vector<std::vector<double>> best_points(jobs);

    auto run_one = [&](std::size_t i) {
        NelderMeadResult r = nelder_mead(objective, starts[i], opt);
        best_values[i] = r.best_value;
        best_points[i] = std::move(r.best_point);
    };

    int want = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    if (want < 1) want = 1;
    const std::size_t pool = std::min<std::size_t>(static_cast<std::size_t>(want), jobs);
    if (pool <= 1) {
        for (std::size_t i = 0; i < jobs; ++i) run_one(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> workers;
        workers.reserve(pool);
        for (std::size_t t = 0; t < pool; ++t)
            workers.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < jobs; i = next.fetch_add(1))
                    run_one(i);
            });
        for (auto& t : workers) t.join();
    }

    std::size_t winner = 0;
    for (std::size_t i = 1; i < jobs; ++i)
        if (best_values[i] < best_values[winner]) winner = i;

    BipartiteInstance best = layout.decode(best_points[winner]);
    GapReport report = sa_gap(best);
    SearchOutcome out{std::move(report), std::move(best), 0};
    out.restart_index = warm_start ? static_cast<long long>(winner) - 1
                                   : static_cast<long long>(winner);
    return out;
}

/// Evaluate the subadditivity gap of one instance across a grid of
/// exponents; reports come back in grid order.
inline std::vector<GapReport> p_sweep(const BipartiteInstance& inst,
                                      const std::vector<double>& grid) {
    if (grid.empty()) throw std::invalid_argument("p_sweep: empty grid");
    std::vector<GapReport> reports;
    reports.reserve(grid.size());
    for (double p : grid)
        reports.push_back(sa_gap(BipartiteInstance(inst.rho12, inst.k1, inst.k2, p)));
    return reports;
}

}  // namespace skewnum
