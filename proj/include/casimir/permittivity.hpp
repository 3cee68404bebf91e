#ifndef CASIMIR_PERMITTIVITY_HPP
#define CASIMIR_PERMITTIVITY_HPP

// Dielectric response at imaginary frequency: Drude, plasma, and the
// Mattis-Bardeen (dirty-limit BCS) response of the superconducting film.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <variant>

#include "casimir/physcore.hpp"
#include "casimir/quadrature.hpp"

namespace casimir {

/// Temperature-dependent BCS gap in eV; zero at and above Tc.
inline double bcs_gap(double T, const SuperconductorParams& p) {
    detail::require(T >= 0.0, "bcs_gap: temperature must be non-negative");
    if (T >= p.Tc) {
        return 0.0;
    }
    const double t = T / p.Tc;
    return p.c1 * Constants::kB_eV * p.Tc * std::sqrt(1.0 - t) * (p.c2 + p.c3 * t);
}

/// Normalized superfluid weight of the condensate,
///
///   w(T) = (pi / 2 eta) tanh(1 / (4 eta t)) - (1 / eta^2) Int_0^inf tanh(E/2t) / (E (4x^2 + 1)) dx,
///
/// with eta = hbar gamma / 2 Delta, t = kB T / hbar gamma and E(x) = sqrt(x^2 + 1/(4 eta^2)).
/// It tends to 1 in the clean limit and to pi Delta / hbar gamma in the dirty limit at T = 0.
/// Valid only for 0 < T < Tc.
inline double superfluid_weight(double T, const SuperconductorParams& p) {
    detail::require(T > 0.0, "superfluid_weight: temperature must be positive");
    detail::require(T < p.Tc, "superfluid_weight: defined only below Tc");
    const double gap = bcs_gap(T, p);
    const double a = gap / p.gamma();            // 1 / (2 eta)
    const double t = Constants::kB_eV * T / p.gamma();  // reduced temperature
    auto integrand = [a, t](double x) {
        const double e = std::hypot(x, a);
        return std::tanh(e / (2.0 * t)) / (e * (4.0 * x * x + 1.0));
    };
    const double lo = std::min({a, 0.5, t});
    const double hi = std::max({a, 0.5, t});
    auto pts = quad::geometric_breakpoints(0.0, 1e-3 * lo, 1e3 * hi, 40);
    const quad::Options opts{1e-13, 0.0, 20000};
    const double body = quad::integrate_panels(integrand, pts, opts).value;
    const double tail = quad::integrate_to_infinity(integrand, pts.back(), opts).value;
    // Both terms scale as a^2 near Tc; written in terms of a to keep the cancellation mild.
    return std::numbers::pi * a * std::tanh(a / (2.0 * t)) - 4.0 * a * a * (body + tail);
}

namespace detail {

/// Re G_+(i xi, eps) of the analytically continued Mattis-Bardeen kernel. Evaluated in
/// extended precision: at eps >> gap the real part is a small remainder of O(E) terms.
inline double mattis_bardeen_kernel_re(double xi, double eps, double gap, double hbar_gamma) {
    using cld = std::complex<long double>;
    const long double e2 = static_cast<long double>(eps) * eps;
    const long double g2 = static_cast<long double>(gap) * gap;
    const long double E = std::sqrt(e2 + g2);
    const cld w(E, static_cast<long double>(xi));  // E + hbar z at z = i xi
    cld Q = std::sqrt(w * w - g2);
    if (Q.real() < 0.0L) {
        Q = -Q;
    }
    const cld A = E * w + g2;
    const cld Qg = Q + cld(0.0L, static_cast<long double>(hbar_gamma));
    const cld num = e2 * Q + Qg * A;
    const cld den = Q * (e2 - Qg * Qg);
    return static_cast<double>((num / den).real());
}

}  // namespace detail

/// BCS correction g(xi; T) entering the superconducting permittivity (dimensionless).
///
///   g = Theta(Tc - T) Int_{-inf}^{inf} d eps / E tanh(E / 2 kB T) Re G_+(i xi, eps),
///
/// folded onto eps >= 0. Its xi -> 0 limit is the superfluid weight w(T).
inline double bcs_g(double xi, double T, const SuperconductorParams& p) {
    detail::require(xi > 0.0, "bcs_g: xi must be positive");
    detail::require(T >= 0.0, "bcs_g: temperature must be non-negative");
    if (T >= p.Tc) {
        return 0.0;
    }
    const double gap = bcs_gap(T, p);
    const double kT = Constants::kB_eV * T;
    const double hg = p.gamma();
    auto integrand = [=](double eps) {
        const double E = std::hypot(eps, gap);
        const double occupation = kT > 0.0 ? std::tanh(E / (2.0 * kT)) : 1.0;
        return occupation / E * detail::mattis_bardeen_kernel_re(xi, eps, gap, hg);
    };
    // The kernel only settles into its 1/eps^2 tail once eps exceeds hbar gamma, which in
    // the dirty limit lies far above 200 Delta.
    const double top = std::max({200.0 * gap, 50.0 * kT, 1e3 * std::max(xi, hg)});
    const double feature = std::min({std::sqrt(xi * gap), gap, xi});
    auto pts = quad::geometric_breakpoints(0.0, 1e-3 * feature, top, 64);
    pts.push_back(gap);
    pts.push_back(xi);
    pts.push_back(std::sqrt(xi * gap));
    pts = quad::normalize_breakpoints(std::move(pts), 0.0, top);
    // g enters epsilon next to xi / (xi + hbar gamma); past that scale extra digits of g are
    // roundoff from the cancellation inside Re G_+.
    const quad::Options opts{1e-9, 1e-11 * xi / (xi + hg), 4000};
    return 2.0 * quad::integrate_panels(integrand, pts, opts).value;
}

struct DrudeModel {
    SuperconductorParams params;
};
struct PlasmaModel {
    SuperconductorParams params;
};
/// Mattis-Bardeen response below Tc, identical to Drude at and above Tc.
struct BcsModel {
    SuperconductorParams params;
};

using DielectricModel = std::variant<DrudeModel, PlasmaModel, BcsModel>;

inline const SuperconductorParams& params_of(const DielectricModel& model) {
    return std::visit([](const auto& m) -> const SuperconductorParams& { return m.params; }, model);
}

inline double drude_permittivity(double xi, const SuperconductorParams& p) {
    return 1.0 + p.Omega * p.Omega / (xi * (xi + p.gamma()));
}

/// epsilon(i xi) for the chosen model at temperature T (T only matters for BCS).
inline double permittivity_iw(const DielectricModel& model, double xi, double T) {
    detail::require(xi > 0.0, "permittivity_iw: xi must be positive");
    struct Visitor {
        double xi;
        double T;
        double operator()(const DrudeModel& m) const { return drude_permittivity(xi, m.params); }
        double operator()(const PlasmaModel& m) const {
            return 1.0 + m.params.Omega * m.params.Omega / (xi * xi);
        }
        double operator()(const BcsModel& m) const {
            const auto& p = m.params;
            if (T >= p.Tc) {
                return drude_permittivity(xi, p);
            }
            const double g = bcs_g(xi, T, p);
            return 1.0 + p.Omega * p.Omega / xi * (1.0 / (xi + p.gamma()) + g / xi);
        }
    };
    return std::visit(Visitor{xi, T}, model);
}

/// Effective plasma frequency of the condensate (eV) used in the static TE reflection
/// below Tc: Omega_bar = w(T) Omega.
// NOTE: bcs_g(xi -> 0) tends to w(T), not w(T)^2, so the 1/xi^2 pole of epsilon_BCS
// alone would suggest sqrt(w) Omega. The two differ only well inside the dirty limit
// by a negligible amount for the default parameters.
inline double condensate_plasma_frequency(double T, const SuperconductorParams& p) {
    if (T >= p.Tc) {
        return 0.0;
    }
    return superfluid_weight(T, p) * p.Omega;
}

}  // namespace casimir

#endif  // CASIMIR_PERMITTIVITY_HPP
