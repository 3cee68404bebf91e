#ifndef CASIMIR_QUADRATURE_HPP
#define CASIMIR_QUADRATURE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <span>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace casimir::quad {

/// Neumaier-compensated running sum. Order of `add` calls fixes the result bit-for-bit.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    CompensatedSum& operator+=(double x) noexcept {
        add(x);
        return *this;
    }
    [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

struct Options {
    double rel_tol = 1e-10;
    double abs_tol = 0.0;
    std::size_t max_panels = 4000;
};

struct Result {
    double value = 0.0;
    double error = 0.0;
    std::size_t panels = 0;
    bool converged = false;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15 abscissae and weights).
inline constexpr std::array<double, 8> kronrod_nodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kronrod_weights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for kronrod_nodes[1], [3], [5], [7].
inline constexpr std::array<double, 4> gauss_weights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a;
    double b;
    double value;
    double error;
    bool operator<(const Panel& other) const noexcept { return error < other.error; }
};

template <class F>
Panel gauss_kronrod_15(F& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod = fc * kronrod_weights[7];
    double gauss = fc * gauss_weights[3];
    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = half * kronrod_nodes[j];
        const double pair = f(center - dx) + f(center + dx);
        kronrod += kronrod_weights[j] * pair;
        if (j % 2 == 1) {
            gauss += gauss_weights[j / 2] * pair;
        }
    }
    return Panel{a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (7/15) integration over the panels delimited by
/// `breakpoints` (sorted, at least two entries). The panel with the largest error
/// estimate is bisected until the total error meets max(abs_tol, rel_tol*|I|).
template <class F>
Result integrate_panels(F&& f, std::span<const double> breakpoints, const Options& opts = {}) {
    if (breakpoints.size() < 2) {
        throw std::invalid_argument("integrate_panels: need at least two breakpoints");
    }
    std::priority_queue<detail::Panel> heap;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        if (breakpoints[i + 1] > breakpoints[i]) {
            heap.push(detail::gauss_kronrod_15(f, breakpoints[i], breakpoints[i + 1]));
        }
    }
    auto totals = [&heap] {
        // Heap order is deterministic for identical inputs, so this sum is reproducible.
        auto copy = heap;
        CompensatedSum value;
        CompensatedSum error;
        while (!copy.empty()) {
            value += copy.top().value;
            error += copy.top().error;
            copy.pop();
        }
        return std::pair{value.value(), error.value()};
    };

    auto [value, error] = totals();
    const double eps = std::numeric_limits<double>::epsilon();
    while (heap.size() < opts.max_panels) {
        if (error <= std::max(opts.abs_tol, opts.rel_tol * std::abs(value))) {
            return Result{value, error, heap.size(), true};
        }
        const detail::Panel worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b) || (worst.b - worst.a) < 64 * eps * std::abs(mid)) {
            // Panel can no longer be split in double precision.
            break;
        }
        heap.pop();
        const auto left = detail::gauss_kronrod_15(f, worst.a, mid);
        const auto right = detail::gauss_kronrod_15(f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        if (heap.size() % 64 == 0) {
            // Re-sum occasionally so the incremental updates do not drift.
            std::tie(value, error) = totals();
        }
    }
    std::tie(value, error) = totals();
    const bool ok = error <= std::max(opts.abs_tol, opts.rel_tol * std::abs(value));
    return Result{value, error, heap.size(), ok};
}

template <class F>
Result integrate(F&& f, double a, double b, const Options& opts = {}) {
    const std::array<double, 2> ends{a, b};
    return integrate_panels(f, std::span<const double>(ends), opts);
}

/// Integral over [a, inf) through the map x = a + t/(1-t), t in [0, 1).
template <class F>
Result integrate_to_infinity(F&& f, double a, const Options& opts = {}) {
    auto mapped = [&f, a](double t) {
        if (t >= 1.0) {
            return 0.0;
        }
        const double one_minus = 1.0 - t;
        const double jac = 1.0 / (one_minus * one_minus);
        const double v = f(a + t / one_minus) * jac;
        return std::isfinite(v) ? v : 0.0;
    };
    return integrate(mapped, 0.0, 1.0, opts);
}

/// Geometrically spaced breakpoints lo..hi (lo > 0), prefixed by `start` when start < lo.
inline std::vector<double> geometric_breakpoints(double start, double lo, double hi, std::size_t count) {
    std::vector<double> pts;
    pts.reserve(count + 1);
    if (start < lo) {
        pts.push_back(start);
    }
    const double ratio = std::pow(hi / lo, 1.0 / static_cast<double>(count - 1));
    double x = lo;
    for (std::size_t i = 0; i < count; ++i) {
        pts.push_back(i + 1 == count ? hi : x);
        x *= ratio;
    }
    return pts;
}

/// Sort, drop duplicates, and clip to [lo, hi]; both ends are always present.
inline std::vector<double> normalize_breakpoints(std::vector<double> pts, double lo, double hi) {
    pts.push_back(lo);
    pts.push_back(hi);
    std::erase_if(pts, [lo, hi](double x) { return !(x >= lo && x <= hi); });
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

}  // namespace casimir::quad

#endif  // CASIMIR_QUADRATURE_HPP
