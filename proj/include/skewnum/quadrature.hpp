#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace skewnum {

struct QuadratureConfig {
    double abs_tol = 1e-8;
    int max_panels = 4096;
    /// λ = u^m substitution exponent used by the integral representations;
    /// 2 flattens the λ^{p-1}-type endpoint behaviour at λ = 0.
    double substitution_exponent = 2.0;
};

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int panels = 0;
    bool converged = false;
};

class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, QuadratureResult r)
        : std::runtime_error(what), result(r) {}
    QuadratureResult result;
};

/// Adaptive Simpson integration of f over [a,b] with per-panel Richardson
/// error estimates. Panels are accepted when the Richardson estimate fits
/// their share of the absolute tolerance; accepted panels are accumulated
/// left to right so the summation order is deterministic. When the panel
/// budget runs out the remaining panels are accepted as-is and the result
/// is flagged as not converged.
template <class F>
QuadratureResult adaptive_simpson(F&& f, double a, double b, double abs_tol, int max_panels) {
    if (!(b > a)) throw std::invalid_argument("adaptive_simpson: empty interval");
    if (!(abs_tol > 0.0)) throw std::invalid_argument("adaptive_simpson: abs_tol must be positive");
    if (max_panels < 4) throw std::invalid_argument("adaptive_simpson: max_panels must be >= 4");

    struct Panel {
        double a, b;
        double fa, fm, fb;
        double simpson;
    };
    auto simpson = [](double lo, double hi, double flo, double fmid, double fhi) {
        return (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
    };

    const double width = b - a;
    const double min_width = 1e-15 * width;

    QuadratureResult res;
    res.converged = true;

    std::vector<Panel> stack;
    {
        const double m = 0.5 * (a + b);
        const double fa = f(a), fm = f(m), fb = f(b);
        stack.push_back({a, b, fa, fm, fb, simpson(a, b, fa, fm, fb)});
    }

    while (!stack.empty()) {
        const Panel panel = stack.back();
        stack.pop_back();

        const double w = panel.b - panel.a;
        const double m = 0.5 * (panel.a + panel.b);
        const double lm = 0.5 * (panel.a + m);
        const double rm = 0.5 * (m + panel.b);
        const double flm = f(lm), frm = f(rm);
        const double s1 = simpson(panel.a, m, panel.fa, flm, panel.fm);
        const double s2 = simpson(m, panel.b, panel.fm, frm, panel.fb);
        const double diff = (s1 + s2) - panel.simpson;

        const double budget = 15.0 * abs_tol * (w / width);
        const bool out_of_panels = res.panels + static_cast<int>(stack.size()) + 2 > max_panels;
        if (std::abs(diff) <= budget || w <= min_width || out_of_panels) {
            if (!(std::abs(diff) <= budget)) res.converged = false;
            res.value += s1 + s2 + diff / 15.0;
            res.error_estimate += std::abs(diff) / 15.0;
            res.panels += 1;
        } else {
            // Right first so the left half is processed next (LIFO).
            stack.push_back({m, panel.b, panel.fm, frm, panel.fb, s2});
            stack.push_back({panel.a, m, panel.fa, flm, panel.fm, s1});
        }
    }
    return res;
}

}  // namespace skewnum
