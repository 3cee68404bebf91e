#ifndef CASIMIR_LIFSHITZ_HPP
#define CASIMIR_LIFSHITZ_HPP

// Casimir pressure and pressure gradient between two identical half-spaces
// from the finite-temperature Lifshitz formula.
//
// With y = 2 d q the l-th Matsubara term reduces to
//   P_l  = -(kB T / 8 pi d^3) Int_{y_l}^inf y^2 Sum_a r_a^2 / (e^y - r_a^2) dy
//   P'_l =  (kB T / 8 pi d^4) Int_{y_l}^inf y^3 Sum_a r_a^2 e^y / (e^y - r_a^2)^2 dy
// where y_l = 2 d xi_l / hbar c. The l = 0 term enters with weight 1/2.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "casimir/permittivity.hpp"
#include "casimir/physcore.hpp"
#include "casimir/quadrature.hpp"

namespace casimir {

enum class ZeroFreqApproach { DrudeBCS, PlasmaBCS, PlasmaPlasma };

struct QuadratureConfig {
    double rel_tol = 1e-8;
    double abs_tol_pressure = 1e-9;  // Pa (Pa/m for gradients is scaled by 1/d)
    long max_matsubara = 100000;
    double term_stop_rel = 1e-10;

    void validate() const {
        detail::require(rel_tol > 0.0 && abs_tol_pressure > 0.0 && term_stop_rel > 0.0,
                        "QuadratureConfig: tolerances must be positive");
        detail::require(max_matsubara >= 1, "QuadratureConfig: max_matsubara must be >= 1");
    }
};

struct LifshitzSpec {
    double d = 190e-9;  // m
    double T = 14.058;  // K
    DielectricModel model = BcsModel{};
    ZeroFreqApproach approach = ZeroFreqApproach::PlasmaBCS;
    QuadratureConfig quad{};

    void validate() const {
        detail::require(d > 0.0, "LifshitzSpec: separation must be positive");
        detail::require(T > 0.0, "LifshitzSpec: temperature must be positive");
        params_of(model).validate();
        quad.validate();
    }
};

class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double partial, double achieved, long terms)
        : std::runtime_error(what), partial_sum(partial), achieved_tol(achieved), terms_used(terms) {}
    double partial_sum;   // in the units of the requested quantity
    double achieved_tol;  // last |term| / |partial sum|
    long terms_used;
};

/// Pressure-like result with its Matsubara breakdown. All parts share the unit of `value`.
struct LifshitzResult {
    double value = 0.0;
    double static_tm = 0.0;  // l = 0, TM
    double static_te = 0.0;  // l = 0, TE
    double dynamic = 0.0;    // l >= 1
    long terms = 0;          // highest l used
    double tail_estimate = 0.0;
};

// ---------------------------------------------------------------- reflection

struct Reflection {
    double te;
    double tm;
};

/// Fresnel coefficients at imaginary frequency xi (eV) and in-plane wavevector k_perp (1/m).
inline Reflection fresnel_iw(double epsilon, double xi, double k_perp) {
    detail::require(epsilon >= 1.0, "fresnel_iw: epsilon must be >= 1");
    detail::require(xi >= 0.0 && k_perp >= 0.0, "fresnel_iw: xi and k_perp must be non-negative");
    detail::require(xi > 0.0 || k_perp > 0.0, "fresnel_iw: xi and k_perp cannot both vanish");
    const double K = xi / Constants::hbar_c;
    const double q = std::hypot(K, k_perp);
    const double s = std::sqrt(q * q + (epsilon - 1.0) * K * K);
    // Written without the q - s cancellation.
    const double te = -(epsilon - 1.0) * K * K / ((q + s) * (q + s));
    const double tm = (epsilon - 1.0) * ((epsilon + 1.0) * q * q - K * K) / ((epsilon * q + s) * (epsilon * q + s));
    return {te, tm};
}

/// Static TE reflection of a plasma-like medium with plasma frequency Omega_eff (eV).
inline double static_te_reflection(double k_perp, double Omega_eff) {
    detail::require(k_perp >= 0.0 && Omega_eff >= 0.0, "static_te_reflection: arguments must be non-negative");
    if (Omega_eff == 0.0) {
        return 0.0;
    }
    const double K = Omega_eff / Constants::hbar_c;
    const double s = std::hypot(K, k_perp);
    return -K * K / ((k_perp + s) * (k_perp + s));
}

// ---------------------------------------------------------------- single terms

namespace detail {

// r^2 / (e^y - r^2) and r^2 e^y / (e^y - r^2)^2, given r^2 and 1 - r^2 computed without cancellation.
inline double pressure_kernel(double y, double r2, double one_minus_r2) {
    return r2 / (std::expm1(y) + one_minus_r2);
}
inline double gradient_kernel(double y, double r2, double one_minus_r2) {
    if (y > 1.0) {
        const double e = std::exp(-y);
        const double den = 1.0 - r2 * e;
        return r2 * e / (den * den);
    }
    const double den = std::expm1(y) + one_minus_r2;
    return r2 * std::exp(y) / (den * den);
}

template <class Kernel>
double integrate_over_y(Kernel&& kernel, double y0, double feature, double rel_tol) {
    // Integrand decays like y^3 e^{-y}; nothing is left past y0 + 120.
    const double lo = 1e-3 * std::min(1.0, feature);
    auto offsets = quad::geometric_breakpoints(0.0, lo, 120.0, 28);
    for (double& x : offsets) {
        x += y0;
    }
    const quad::Options opts{rel_tol, 0.0, 4000};
    return quad::integrate_panels(kernel, offsets, opts).value;
}

}  // namespace detail

/// Dimensionless integral of one Matsubara term l >= 1 for both polarizations.
/// y0 = 2 d xi / hbar c; eps = epsilon(i xi). `gradient` selects the y^3 kernel.
inline double matsubara_term_integral(double y0, double eps, bool gradient, double rel_tol = 1e-10) {
    detail::require(y0 > 0.0 && eps >= 1.0, "matsubara_term_integral: need y0 > 0 and eps >= 1");
    const double em1 = eps - 1.0;
    auto f = [=](double y) {
        const double s = std::sqrt(y * y + em1 * y0 * y0);
        const double ys = y + s;
        const double es = eps * y + s;
        const double r_te = em1 * y0 * y0 / (ys * ys);  // |r_te|
        const double r_tm = em1 * ((eps + 1.0) * y * y - y0 * y0) / (es * es);
        const double om_te = 4.0 * y * s / (ys * ys);
        const double om_tm = 4.0 * eps * y * s / (es * es);
        const double pw = gradient ? y * y * y : y * y;
        if (gradient) {
            return pw * (detail::gradient_kernel(y, r_te * r_te, om_te) + detail::gradient_kernel(y, r_tm * r_tm, om_tm));
        }
        return pw * (detail::pressure_kernel(y, r_te * r_te, om_te) + detail::pressure_kernel(y, r_tm * r_tm, om_tm));
    };
    return detail::integrate_over_y(f, y0, 1.0, rel_tol);
}

/// Dimensionless l = 0 TM integral (r = 1): 2 zeta(3) for the pressure, 6 zeta(3) for the gradient.
inline double static_tm_integral(bool gradient) {
    return (gradient ? 6.0 : 2.0) * Constants::zeta3;
}

/// Dimensionless l = 0 TE integral for a plasma-like static response.
/// Y = 2 d Omega_eff / hbar c; zero when Y = 0.
inline double static_te_integral(double Y, bool gradient, double rel_tol = 1e-10) {
    detail::require(Y >= 0.0, "static_te_integral: Y must be non-negative");
    if (Y == 0.0) {
        return 0.0;
    }
    auto f = [=](double y) {
        if (y <= 0.0) {
            return 0.0;
        }
        const double s = std::hypot(y, Y);
        const double ys = y + s;
        const double r = Y * Y / (ys * ys);
        const double om = 4.0 * y * s / (ys * ys);
        if (gradient) {
            return y * y * y * detail::gradient_kernel(y, r * r, om);
        }
        return y * y * detail::pressure_kernel(y, r * r, om);
    };
    return detail::integrate_over_y(f, 0.0, Y, rel_tol);
}

// ---------------------------------------------------------------- permittivity cache

/// epsilon(i xi_l), l = 1, 2, ..., computed on first use. Depends on (model, T) only,
/// so one instance can serve several separations.
class MatsubaraPermittivity {
public:
    MatsubaraPermittivity(DielectricModel model, double T) : model_(std::move(model)), T_(T) {}

    double at(long l) {
        detail::require(l >= 1, "MatsubaraPermittivity: l must be >= 1");
        while (static_cast<long>(values_.size()) < l) {
            const long next = static_cast<long>(values_.size()) + 1;
            values_.push_back(permittivity_iw(model_, matsubara_frequency(next, T_), T_));
        }
        return values_[static_cast<std::size_t>(l - 1)];
    }

    [[nodiscard]] const DielectricModel& model() const noexcept { return model_; }
    [[nodiscard]] double temperature() const noexcept { return T_; }

private:
    DielectricModel model_;
    double T_;
    std::vector<double> values_;
};

// ---------------------------------------------------------------- static prescriptions

/// Plasma frequency (eV) that sets the static TE reflection; 0 means r_TE(0) = 0.
/// `superconducting` selects the state; it defaults to T < Tc.
inline double static_te_plasma_frequency(ZeroFreqApproach approach, const SuperconductorParams& p, double T,
                                         bool superconducting) {
    if (!superconducting) {
        return approach == ZeroFreqApproach::DrudeBCS ? 0.0 : p.Omega;
    }
    if (approach == ZeroFreqApproach::PlasmaPlasma) {
        return p.Omega;
    }
    return condensate_plasma_frequency(T, p);
}

// ---------------------------------------------------------------- Matsubara sums

namespace detail {

inline LifshitzResult lifshitz_sum(double d, double T, double static_omega, MatsubaraPermittivity& eps,
                                   const QuadratureConfig& qc, bool gradient) {
    const double kT = Constants::kB_J * T;
    const double pref = gradient ? kT / (8.0 * std::numbers::pi * std::pow(d, 4))
                                 : -kT / (8.0 * std::numbers::pi * std::pow(d, 3));
    const double term_tol = std::min(1e-10, 0.01 * qc.rel_tol);

    LifshitzResult out;
    out.static_tm = 0.5 * pref * static_tm_integral(gradient);
    out.static_te = 0.5 * pref * static_te_integral(2.0 * d * static_omega / Constants::hbar_c, gradient, term_tol);

    quad::CompensatedSum dyn;
    const double y1 = 2.0 * d * matsubara_frequency(1, T) / Constants::hbar_c;
    double previous = 0.0;
    double last = 0.0;
    int small_in_row = 0;
    long l = 1;
    for (;; ++l) {
        if (l > qc.max_matsubara) {
            const double partial = out.static_tm + out.static_te + dyn.value();
            throw ConvergenceError("Matsubara sum not converged within max_matsubara terms", partial,
                                   std::abs(last / partial), l - 1);
        }
        const double t = pref * matsubara_term_integral(static_cast<double>(l) * y1, eps.at(l), gradient, term_tol);
        dyn += t;
        previous = last;
        last = t;
        const double total = out.static_tm + out.static_te + dyn.value();
        const double abs_floor = gradient ? qc.abs_tol_pressure / d : qc.abs_tol_pressure;
        const bool small = std::abs(t) < qc.term_stop_rel * std::abs(total) || std::abs(t) < 1e-3 * abs_floor;
        small_in_row = small ? small_in_row + 1 : 0;
        if (small_in_row >= 3) {
            break;
        }
    }
    out.dynamic = dyn.value();
    out.terms = l;
    // Terms fall off geometrically; bound the remainder by the last ratio.
    const double ratio = previous != 0.0 ? std::abs(last / previous) : 0.0;
    out.tail_estimate = ratio < 1.0 ? std::abs(last) * ratio / (1.0 - ratio) : std::abs(last);
    out.value = out.static_tm + out.static_te + out.dynamic;
    return out;
}

}  // namespace detail

/// Casimir pressure (Pa, negative = attraction) with breakdown. `superconducting`
/// overrides the state picked for the static TE term; by default it is T < Tc.
inline LifshitzResult casimir_pressure_detailed(const LifshitzSpec& spec, MatsubaraPermittivity& eps,
                                                std::optional<bool> superconducting = std::nullopt) {
    spec.validate();
    const auto& p = params_of(spec.model);
    const bool sc = superconducting.value_or(spec.T < p.Tc);
    const double om = static_te_plasma_frequency(spec.approach, p, spec.T, sc);
    return detail::lifshitz_sum(spec.d, spec.T, om, eps, spec.quad, false);
}

/// Analytic d P / d d (Pa/m) with breakdown.
inline LifshitzResult casimir_pressure_gradient_detailed(const LifshitzSpec& spec, MatsubaraPermittivity& eps,
                                                         std::optional<bool> superconducting = std::nullopt) {
    spec.validate();
    const auto& p = params_of(spec.model);
    const bool sc = superconducting.value_or(spec.T < p.Tc);
    const double om = static_te_plasma_frequency(spec.approach, p, spec.T, sc);
    return detail::lifshitz_sum(spec.d, spec.T, om, eps, spec.quad, true);
}

inline double casimir_pressure(const LifshitzSpec& spec) {
    MatsubaraPermittivity eps(spec.model, spec.T);
    return casimir_pressure_detailed(spec, eps).value;
}

inline double casimir_pressure_gradient(const LifshitzSpec& spec) {
    MatsubaraPermittivity eps(spec.model, spec.T);
    return casimir_pressure_gradient_detailed(spec, eps).value;
}

struct ClassicalTerms {
    double P_tm0;       // Pa
    double Pprime_cl;   // Pa/m
};

/// High-temperature (l = 0, TM) pressure and its gradient.
inline ClassicalTerms classical_terms(double d, double T) {
    detail::require(d > 0.0 && T > 0.0, "classical_terms: d and T must be positive");
    const double kTz = Constants::kB_J * T * Constants::zeta3;
    return {-kTz / (8.0 * std::numbers::pi * d * d * d), 3.0 * kTz / (8.0 * std::numbers::pi * std::pow(d, 4))};
}

/// Local power-law exponent n = -d ln|P| / d ln d by symmetric differencing with step ratio 1.01.
inline double local_exponent(const LifshitzSpec& spec) {
    spec.validate();
    constexpr double ratio = 1.01;
    MatsubaraPermittivity eps(spec.model, spec.T);
    LifshitzSpec lo = spec;
    LifshitzSpec hi = spec;
    lo.d = spec.d / ratio;
    hi.d = spec.d * ratio;
    const double p_lo = casimir_pressure_detailed(lo, eps).value;
    const double p_hi = casimir_pressure_detailed(hi, eps).value;
    return -(std::log(std::abs(p_hi)) - std::log(std::abs(p_lo))) / (2.0 * std::log(ratio));
}

// ---------------------------------------------------------------- ideal conductors

struct PlatePlate {
    double area;  // m^2
    double d;     // m
};
struct SpherePlate {
    double R;  // m
    double d;  // m
};
using IdealGeometry = std::variant<PlatePlate, SpherePlate>;

/// Zero-temperature Casimir force magnitude (N) between perfect conductors.
inline double ideal_casimir_force(const IdealGeometry& g) {
    constexpr double pi = std::numbers::pi;
    struct Visitor {
        double operator()(const PlatePlate& p) const {
            detail::require(p.area > 0.0 && p.d > 0.0, "ideal_casimir_force: dimensions must be positive");
            return pi * pi * Constants::hbar_c_J * p.area / (240.0 * std::pow(p.d, 4));
        }
        double operator()(const SpherePlate& s) const {
            detail::require(s.R > 0.0 && s.d > 0.0, "ideal_casimir_force: dimensions must be positive");
            return pi * pi * pi * Constants::hbar_c_J * s.R / (360.0 * std::pow(s.d, 3));
        }
    };
    return std::visit(Visitor{}, g);
}

/// Zero-temperature ideal-conductor pressure (Pa, attractive).
inline double ideal_casimir_pressure(double d) {
    return -ideal_casimir_force(PlatePlate{1.0, d});
}

// ---------------------------------------------------------------- transition

struct TcJump {
    double value;         // P'(normal side) - P'(superconducting side), Pa/m
    double above;         // P' at Tc + dT
    double below;         // P' at Tc - dT
};

/// Gradient change across Tc. The normal side uses T = Tc + dT, the superconducting side
/// T = Tc - dT; dT = 0 gives the two one-sided limits at Tc. Both sides use the BCS
/// response for l >= 1 (Drude above Tc).
inline TcJump tc_jump_detailed(double d, double dT, ZeroFreqApproach approach, const SuperconductorParams& p,
                               const QuadratureConfig& qc = {}) {
    detail::require(dT >= 0.0 && dT < p.Tc, "tc_jump: need 0 <= dT < Tc");
    LifshitzSpec spec{d, p.Tc + dT, BcsModel{p}, approach, qc};
    MatsubaraPermittivity eps_above(spec.model, spec.T);
    const double above = casimir_pressure_gradient_detailed(spec, eps_above, false).value;
    spec.T = p.Tc - dT;
    MatsubaraPermittivity eps_below(spec.model, spec.T);
    const double below = casimir_pressure_gradient_detailed(spec, eps_below, true).value;
    return {above - below, above, below};
}

inline double tc_jump(double d, double Tc, double dT, ZeroFreqApproach approach, SuperconductorParams p,
                      const QuadratureConfig& qc = {}) {
    p.Tc = Tc;
    return tc_jump_detailed(d, dT, approach, p, qc).value;
}

}  // namespace casimir

#endif  // CASIMIR_LIFSHITZ_HPP
