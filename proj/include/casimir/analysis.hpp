#ifndef CASIMIR_ANALYSIS_HPP
#define CASIMIR_ANALYSIS_HPP

// Data reduction for the two-membrane temperature sweeps: thermal-baseline calibration,
// differential subtraction, FEM conversion, Dynes spectroscopy, synthetic sweeps.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

#include "casimir/membrane.hpp"
#include "casimir/physcore.hpp"
#include "casimir/quadrature.hpp"

namespace casimir {

// ---------------------------------------------------------------- calibration

struct Residual {
    double T;          // K
    double dw2;        // (rad/s)^2
    double sigma_dw2;  // (rad/s)^2, 0 when unknown
};

struct CalibratedResiduals {
    std::vector<Residual> records;
    double fit_slope = 0.0;      // (rad/s)^2 / K
    double fit_intercept = 0.0;  // (rad/s)^2
    std::pair<double, double> fit_window{0.0, 0.0};
};

inline double angular_squared(double f) {
    const double w = 2.0 * std::numbers::pi * f;
    return w * w;
}

/// Least-squares line through omega^2(T) over `window`, subtracted from every record.
inline CalibratedResiduals calibrate_thermal(const std::vector<SweepRecord>& records, std::pair<double, double> window,
                                             double Tc = SuperconductorParams{}.Tc) {
    const auto [lo, hi] = window;
    detail::require(lo < hi, "calibrate_thermal: empty window");
    detail::require(hi <= Tc, "calibrate_thermal: window must lie below Tc");

    // Centre T and omega^2 so the normal equations do not cancel catastrophically.
    std::vector<std::pair<double, double>> pts;
    for (const auto& r : records) {
        if (r.T >= lo && r.T <= hi) {
            pts.emplace_back(r.T, angular_squared(r.f));
        }
    }
    detail::require(pts.size() >= 3, "calibrate_thermal: need at least 3 points in the window");
    quad::CompensatedSum st;
    quad::CompensatedSum sw;
    for (const auto& [t, w] : pts) {
        st += t;
        sw += w;
    }
    const double n = static_cast<double>(pts.size());
    const double tbar = st.value() / n;
    const double wbar = sw.value() / n;
    quad::CompensatedSum sxx;
    quad::CompensatedSum sxy;
    for (const auto& [t, w] : pts) {
        sxx += (t - tbar) * (t - tbar);
        sxy += (t - tbar) * (w - wbar);
    }
    detail::require(sxx.value() > 0.0, "calibrate_thermal: window points share one temperature");

    CalibratedResiduals out;
    out.fit_slope = sxy.value() / sxx.value();
    out.fit_intercept = wbar - out.fit_slope * tbar;
    out.fit_window = window;
    out.records.reserve(records.size());
    for (const auto& r : records) {
        const double w2 = angular_squared(r.f);
        const double fit = wbar + out.fit_slope * (r.T - tbar);
        const double sigma = r.sigma_f ? 8.0 * std::numbers::pi * std::numbers::pi * r.f * *r.sigma_f : 0.0;
        out.records.push_back({r.T, w2 - fit, sigma});
    }
    std::stable_sort(out.records.begin(), out.records.end(), [](const Residual& a, const Residual& b) { return a.T < b.T; });
    return out;
}

// ---------------------------------------------------------------- differential

enum class ErrorRule { Additive, Quadrature };

/// small - big, with the big-gap residual linearly interpolated at each small-gap temperature.
/// Small-gap points outside the big-gap support are dropped (no extrapolation).
/// Additive rule: sigma_small + both bracketing big-gap sigmas.
inline std::vector<Residual> differential_subtract(const CalibratedResiduals& small, const CalibratedResiduals& big,
                                                   ErrorRule rule = ErrorRule::Additive) {
    const auto& b = big.records;
    detail::require(!b.empty() && !small.records.empty(), "differential_subtract: empty input");
    std::vector<Residual> out;
    for (const auto& s : small.records) {
        if (s.T < b.front().T || s.T > b.back().T) {
            continue;
        }
        auto it = std::lower_bound(b.begin(), b.end(), s.T, [](const Residual& r, double t) { return r.T < t; });
        double value;
        double s1;
        double s2 = 0.0;
        if (it->T == s.T) {
            value = it->dw2;
            s1 = it->sigma_dw2;
        } else {
            const auto& right = *it;
            const auto& left = *(it - 1);
            const double w = (s.T - left.T) / (right.T - left.T);
            value = left.dw2 + w * (right.dw2 - left.dw2);
            s1 = left.sigma_dw2;
            s2 = right.sigma_dw2;
        }
        const double sigma = rule == ErrorRule::Additive ? s.sigma_dw2 + s1 + s2
                                                         : std::sqrt(s.sigma_dw2 * s.sigma_dw2 + s1 * s1 + s2 * s2);
        out.push_back({s.T, s.dw2 - value, sigma});
    }
    detail::require(!out.empty(), "differential_subtract: temperature supports do not overlap");
    return out;
}

/// Two big-gap runs merged by concatenation, sorted by temperature.
inline std::vector<SweepRecord> merge_sweeps(std::vector<SweepRecord> a, const std::vector<SweepRecord>& b) {
    a.insert(a.end(), b.begin(), b.end());
    std::stable_sort(a.begin(), a.end(), [](const SweepRecord& x, const SweepRecord& y) { return x.T < y.T; });
    return a;
}

struct JumpEstimate {
    double dw2;    // mean above Tc minus mean below Tc, (rad/s)^2
    double sigma;  // (rad/s)^2
    std::size_t n_below;
    std::size_t n_above;
};

/// Step in a residual series across Tc, from plain means over [Tc - width, Tc) and (Tc, Tc + width].
inline JumpEstimate estimate_jump(const std::vector<Residual>& series, double Tc, double width) {
    quad::CompensatedSum below;
    quad::CompensatedSum above;
    quad::CompensatedSum var_below;
    quad::CompensatedSum var_above;
    std::size_t nb = 0;
    std::size_t na = 0;
    for (const auto& r : series) {
        if (r.T >= Tc - width && r.T < Tc) {
            below += r.dw2;
            var_below += r.sigma_dw2 * r.sigma_dw2;
            ++nb;
        } else if (r.T > Tc && r.T <= Tc + width) {
            above += r.dw2;
            var_above += r.sigma_dw2 * r.sigma_dw2;
            ++na;
        }
    }
    detail::require(nb > 0 && na > 0, "estimate_jump: need points on both sides of Tc");
    const double mb = below.value() / static_cast<double>(nb);
    const double ma = above.value() / static_cast<double>(na);
    const double sigma = std::sqrt(var_below.value() / static_cast<double>(nb * nb) +
                                   var_above.value() / static_cast<double>(na * na));
    return {ma - mb, sigma, nb, na};
}

// ---------------------------------------------------------------- FEM conversion

/// Shift of omega^2 in (rad/s)^2.
struct AngularShift {
    double value;
};
/// Shift of f^2 in Hz^2.
struct LinearShift {
    double value;
};

inline LinearShift to_linear(AngularShift s) {
    return {s.value / (4.0 * std::numbers::pi * std::numbers::pi)};
}
inline AngularShift to_angular(LinearShift s) {
    return {s.value * 4.0 * std::numbers::pi * std::numbers::pi};
}

struct PhysicalShift {
    double force;       // N
    double pressure;    // Pa
    double deflection;  // m
};

namespace detail {
inline PhysicalShift apply_factors(double x, const ConversionFactors& f) {
    return {x * f.force_per_w2, x * f.pressure_per_w2, x * f.deflection_per_w2};
}
}  // namespace detail

inline PhysicalShift convert_fem(AngularShift s, const ConversionFactors& f) {
    detail::require(f.basis == FrequencyBasis::AngularSquared,
                    "convert_fem: factors are per Hz^2; pass a LinearShift (see to_linear)");
    return detail::apply_factors(s.value, f);
}

inline PhysicalShift convert_fem(LinearShift s, const ConversionFactors& f) {
    detail::require(f.basis == FrequencyBasis::LinearSquared,
                    "convert_fem: factors are per (rad/s)^2; pass an AngularShift (see to_angular)");
    return detail::apply_factors(s.value, f);
}

// ---------------------------------------------------------------- Dynes

struct DynesParams {
    double Delta;  // eV
    double gamma;  // eV
    double T;      // K
    double A;      // conductance scale
};

/// Broadened BCS density of states, Re[(E - i gamma) / sqrt((E - i gamma)^2 - Delta^2)].
inline double dynes_dos(double E, double Delta, double gamma) {
    const std::complex<double> z(E, -gamma);
    std::complex<double> root = std::sqrt(z * z - Delta * Delta);
    // Branch with the same asymptote as z, so that N -> 1 at large |E|.
    if ((root / z).real() < 0.0) {
        root = -root;
    }
    return (z / root).real();
}

/// Tunnelling conductance dI/dV (units of A): the DOS convolved with -df/dE at bias V (volts).
inline double dynes_conductance(double V, const DynesParams& p) {
    detail::require(p.Delta > 0.0 && p.gamma > 0.0, "dynes_conductance: Delta and gamma must be positive");
    detail::require(p.T >= 0.0, "dynes_conductance: temperature must be non-negative");
    const double kT = Constants::kB_eV * p.T;
    if (kT == 0.0) {
        return p.A * dynes_dos(V, p.Delta, p.gamma);
    }
    auto kernel = [&](double E) {
        const double x = (E - V) / (2.0 * kT);
        const double c = std::cosh(x);
        return dynes_dos(E, p.Delta, p.gamma) / (4.0 * kT * c * c);
    };
    const double half = 30.0 * kT;
    std::vector<double> pts{V - half, -p.Delta, p.Delta, V, V + half};
    for (const double s : {-1.0, 1.0}) {
        for (const double w : {1.0, 4.0}) {
            pts.push_back(s * p.Delta - w * p.gamma);
            pts.push_back(s * p.Delta + w * p.gamma);
        }
    }
    pts = quad::normalize_breakpoints(std::move(pts), V - half, V + half);
    return p.A * quad::integrate_panels(kernel, pts, {1e-10, 1e-13, 2000}).value;
}

struct DynesFit {
    DynesParams params;
    int iterations;
    double rms_residual;
};

namespace detail {

struct DynesFunctor {
    using Scalar = double;
    using InputType = Eigen::VectorXd;
    using ValueType = Eigen::VectorXd;
    using JacobianType = Eigen::MatrixXd;
    enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

    const std::vector<std::pair<double, double>>* points;
    double T;
    double scale;  // voltage scale used to normalize Delta and gamma

    [[nodiscard]] int inputs() const { return 3; }
    [[nodiscard]] int values() const { return static_cast<int>(points->size()); }

    int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& fvec) const {
        // Fit in log space for Delta and gamma so they stay positive.
        const DynesParams p{scale * std::exp(x(0)), scale * std::exp(x(1)), T, x(2)};
        for (std::size_t i = 0; i < points->size(); ++i) {
            fvec(static_cast<Eigen::Index>(i)) = dynes_conductance((*points)[i].first, p) - (*points)[i].second;
        }
        return 0;
    }
};

}  // namespace detail

/// Nonlinear least squares for (Delta, gamma, A) at fixed T. Points are (V in volts, G).
inline DynesFit dynes_fit(const std::vector<std::pair<double, double>>& points, double T, int max_iterations = 400) {
    if (points.size() < 20) {
        throw FitError("dynes_fit: need at least 20 points");
    }
    auto sorted = points;
    std::sort(sorted.begin(), sorted.end());

    // Deterministic start: coherence peaks on either side of the minimum, outer 20% for A.
    std::size_t imin = 0;
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        if (sorted[i].second < sorted[imin].second) {
            imin = i;
        }
    }
    if (imin == 0 || imin + 1 == sorted.size()) {
        throw FitError("dynes_fit: conductance minimum is not inside the bias range");
    }
    std::size_t ileft = 0;
    for (std::size_t i = 0; i < imin; ++i) {
        if (sorted[i].second > sorted[ileft].second) {
            ileft = i;
        }
    }
    std::size_t iright = sorted.size() - 1;
    for (std::size_t i = sorted.size() - 1; i > imin; --i) {
        if (sorted[i].second > sorted[iright].second) {
            iright = i;
        }
    }
    double delta0 = 0.5 * (sorted[iright].first - sorted[ileft].first);
    if (!(delta0 > 0.0)) {
        throw FitError("dynes_fit: cannot locate coherence peaks");
    }
    std::vector<std::pair<double, double>> by_abs = sorted;
    std::sort(by_abs.begin(), by_abs.end(), [](const auto& a, const auto& b) { return std::abs(a.first) < std::abs(b.first); });
    const std::size_t outer = std::max<std::size_t>(1, by_abs.size() / 5);
    double a0 = 0.0;
    for (std::size_t i = by_abs.size() - outer; i < by_abs.size(); ++i) {
        a0 += by_abs[i].second;
    }
    a0 /= static_cast<double>(outer);

    detail::DynesFunctor functor{&sorted, T, delta0};
    Eigen::NumericalDiff<detail::DynesFunctor> numdiff(functor);
    Eigen::LevenbergMarquardt<Eigen::NumericalDiff<detail::DynesFunctor>> lm(numdiff);
    lm.parameters.maxfev = max_iterations;
    lm.parameters.xtol = 1e-12;
    lm.parameters.ftol = 1e-14;
    Eigen::VectorXd x(3);
    x << 0.0, std::log(0.1), a0;
    const auto status = lm.minimize(x);
    const DynesParams p{delta0 * std::exp(x(0)), delta0 * std::exp(x(1)), T, x(2)};
    Eigen::VectorXd r(static_cast<Eigen::Index>(sorted.size()));
    functor(x, r);
    const double rms = std::sqrt(r.squaredNorm() / static_cast<double>(r.size()));
    if (status == Eigen::LevenbergMarquardtSpace::TooManyFunctionEvaluation ||
        status == Eigen::LevenbergMarquardtSpace::ImproperInputParameters) {
        throw FitError("dynes_fit: no convergence; last iterate Delta=" + exact_repr(p.Delta) +
                       " gamma=" + exact_repr(p.gamma) + " A=" + exact_repr(p.A));
    }
    return {p, static_cast<int>(lm.iter), rms};
}

// ---------------------------------------------------------------- two-column input

/// Reads `x,y` pairs under a fixed header such as `V_volt,G_arb` or `V_volt,f_Hz`.
inline std::vector<std::pair<double, double>> read_xy_csv(std::istream& in, const std::string& xname,
                                                          const std::string& yname) {
    std::string line;
    std::size_t lineno = 0;
    bool have_header = false;
    std::vector<std::pair<double, double>> out;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') {
            continue;
        }
        const auto cells = detail::split_csv_line(line);
        if (!have_header) {
            if (cells.size() != 2 || cells[0] != xname || cells[1] != yname) {
                throw InputError("header must be " + xname + "," + yname, lineno);
            }
            have_header = true;
            continue;
        }
        if (cells.size() != 2) {
            throw InputError("expected 2 columns, got " + std::to_string(cells.size()), lineno);
        }
        out.emplace_back(detail::parse_cell(cells[0], lineno, xname.c_str()),
                         detail::parse_cell(cells[1], lineno, yname.c_str()));
    }
    if (!have_header) {
        throw InputError("empty input file");
    }
    return out;
}

inline std::vector<std::pair<double, double>> read_xy_csv(const std::string& path, const std::string& xname,
                                                          const std::string& yname) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open " + path);
    }
    return read_xy_csv(in, xname, yname);
}

// ---------------------------------------------------------------- synthetic sweeps

struct SweepTruth {
    double slope;      // (rad/s)^2 / K
    double intercept;  // (rad/s)^2
    double jump;       // (rad/s)^2 added for T > Tc
    double Tc;         // K
    double sigma_f;    // Hz, Gaussian noise on f
    std::vector<double> grid;  // K, ascending
};

/// omega^2(T) = intercept + slope T + jump [T > Tc], plus Gaussian noise on f. Deterministic in `seed`.
inline std::vector<SweepRecord> generate_sweep(const SweepTruth& truth, std::uint64_t seed) {
    detail::require(std::is_sorted(truth.grid.begin(), truth.grid.end()), "generate_sweep: grid must be ascending");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<SweepRecord> out;
    out.reserve(truth.grid.size());
    for (const double T : truth.grid) {
        const double w2 = truth.intercept + truth.slope * T + (T > truth.Tc ? truth.jump : 0.0);
        detail::require(w2 > 0.0, "generate_sweep: omega^2 must stay positive");
        double f = std::sqrt(w2) / (2.0 * std::numbers::pi);
        // Draw even when sigma_f = 0 so that the stream does not depend on the noise level.
        f += truth.sigma_f * noise(rng);
        out.push_back({T, f, truth.sigma_f, std::nullopt});
    }
    return out;
}

/// Evenly spaced temperatures lo, lo + step, ..., up to hi.
inline std::vector<double> temperature_grid(double lo, double hi, double step) {
    detail::require(step > 0.0 && hi >= lo, "temperature_grid: bad range");
    std::vector<double> g;
    const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
    for (long i = 0; i <= n; ++i) {
        g.push_back(lo + static_cast<double>(i) * step);
    }
    return g;
}

// ---------------------------------------------------------------- output

/// 9 significant digits, scientific.
inline std::string csv_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.8e", v);
    return buf;
}

/// 4 significant digits for human-readable tables.
inline std::string table_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

// Sweep files keep every bit: 9 digits would quantize f to about 1 mHz at 350 kHz.
inline void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records) {
    out << "T_K,f_Hz,sigma_f_Hz\n";
    for (const auto& r : records) {
        out << exact_repr(r.T) << ',' << exact_repr(r.f) << ',' << exact_repr(r.sigma_f.value_or(0.0)) << '\n';
    }
}

}  // namespace casimir

#endif  // CASIMIR_ANALYSIS_HPP
