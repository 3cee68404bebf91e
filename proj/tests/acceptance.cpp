// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "casimir/analysis.hpp"
#include "casimir/ideal_tables.hpp"
#include "casimir/lifshitz.hpp"
#include "casimir/membrane.hpp"

using namespace casimir;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
    std::printf("%s [%2d] %s: %s\n", pass ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!pass) {
        ++failures;
    }
}

// Runs one criterion; any exception counts as a failure with its message.
void criterion(int id, const std::string& name, const std::function<std::pair<bool, std::string>()>& body) {
    try {
        const auto [pass, detail] = body();
        report(id, name, pass, detail);
    } catch (const std::exception& e) {
        report(id, name, false, std::string("exception: ") + e.what());
    }
}

bool within_rel(double value, double target, double tol) {
    return std::abs(value / target - 1.0) <= tol;
}

std::string fmt(const char* f, double a) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string fmt(const char* f, double a, double b) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

std::string fmt(const char* f, double a, double b, double c) {
    char buf[200];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

LifshitzSpec headline_spec(double d) {
    LifshitzSpec s;
    s.d = d;
    s.T = 0.99 * SuperconductorParams{}.Tc;
    return s;
}

SweepTruth sweep_truth(double f0, double slope, double jump, double sigma_f) {
    const double w0 = 2.0 * std::numbers::pi * f0;
    return {slope, w0 * w0, jump, 14.2, sigma_f, temperature_grid(12.0, 16.0, 0.02)};
}

// Recovered gradient jump (Pa/m) from one synthetic small/big pair.
double pipeline_gradient(std::uint64_t seed, double dw2_jump, double sigma_f) {
    const auto s = MembraneSpec::small_gap();
    const auto small = calibrate_thermal(generate_sweep(sweep_truth(352.8e3, 2.0e9, dw2_jump, sigma_f), seed), {12.0, 14.0});
    const auto big = calibrate_thermal(generate_sweep(sweep_truth(343.0e3, -3.0e9, 0.0, sigma_f), seed + 7919), {12.0, 14.0});
    const auto jump = estimate_jump(differential_subtract(small, big), 14.2, 0.5);
    // Convert through the FEM factors and back to a gradient so the whole chain is exercised.
    const auto shift = convert_fem(to_linear(AngularShift{jump.dw2}), ConversionFactors::small_gap_fem());
    const double dw2_back = to_angular(LinearShift{shift.force / ConversionFactors::small_gap_fem().force_per_w2}).value;
    return gradient_from_dw2(dw2_back, s);
}

}  // namespace

int main() {
    const SuperconductorParams p;
    const auto small = MembraneSpec::small_gap();
    const auto big = MembraneSpec::big_gap();

    criterion(1, "headline pressure at 190 nm, 0.99 Tc", [&] {
        const auto t0 = std::chrono::steady_clock::now();
        const double P190 = casimir_pressure(headline_spec(190e-9));
        const double dt = seconds_since(t0);
        return std::pair{within_rel(P190, -0.4021, 0.05) && dt < 60.0,
                         fmt("P = %.6g Pa (target -0.4021 +/- 5%%), %.2f s (limit 60 s)", P190, dt)};
    });

    criterion(2, "local exponent at 190 nm", [&] {
        const double n190 = local_exponent(headline_spec(190e-9));
        return std::pair{std::abs(n190 - 3.507) <= 0.03, fmt("n = %.5f (target 3.507 +/- 0.03)", n190)};
    });

    criterion(3, "classical gradient at 190 nm, 14.2 K", [&] {
        const double g = classical_terms(190e-9, 14.2).Pprime_cl;
        return std::pair{within_rel(g, 21.6e3, 1e-3), fmt("P'_cl = %.6g Pa/m (target 21.6e3 +/- 0.1%%)", g)};
    });

    double plasma_bcs_jump = 0.0;
    criterion(4, "gradient jump across Tc, dT = 0.1 K", [&] {
        const auto t0 = std::chrono::steady_clock::now();
        plasma_bcs_jump = tc_jump(190e-9, p.Tc, 0.1, ZeroFreqApproach::PlasmaBCS, p);
        const double pp = tc_jump(190e-9, p.Tc, 0.1, ZeroFreqApproach::PlasmaPlasma, p);
        const double db = tc_jump(190e-9, p.Tc, 0.1, ZeroFreqApproach::DrudeBCS, p);
        const double dt = seconds_since(t0);
        // The Drude-BCS entry is compared in magnitude; see the README on the sign convention.
        const bool ok = within_rel(plasma_bcs_jump, 6.0e3, 0.20) && within_rel(pp, 65.0, 0.30) &&
                        within_rel(std::abs(db), 19.0, 0.30) && dt < 600.0;
        char buf[256];
        std::snprintf(buf, sizeof buf,
                      "PlasmaBCS %.4g (6.0e3 +/- 20%%), PlasmaPlasma %.4g (65 +/- 30%%), |DrudeBCS| %.4g (19 +/- 30%%) Pa/m; %.1f s",
                      plasma_bcs_jump, pp, std::abs(db), dt);
        return std::pair{ok, std::string(buf)};
    });

    criterion(5, "predicted frequency jump for 6.0 kPa/m", [&] {
        const double df = predicted_frequency_jump(6.0e3, small, 352.8e3);
        return std::pair{within_rel(std::abs(df), 0.29, 0.10), fmt("|df| = %.4g Hz (target 0.29 +/- 10%%)", std::abs(df))};
    });

    criterion(6, "ideal-conductor limit", [&] {
        SuperconductorParams q;
        q.Omega = 1e4;
        bool ok = true;
        std::string detail;
        for (const double d : {100e-9, 190e-9, 500e-9}) {
            LifshitzSpec s{d, 0.1, PlasmaModel{q}, ZeroFreqApproach::PlasmaPlasma, {}};
            s.quad.max_matsubara = 2000000;
            const double r = casimir_pressure(s) / ideal_casimir_pressure(d);
            ok = ok && std::abs(r - 1.0) <= 0.01;
            detail += fmt("d=%.0f nm ratio %.5f; ", d * 1e9, r);
        }
        return std::pair{ok, detail + "tolerance 1%"};
    });

    criterion(7, "comparison tables from geometry", [&] {
        double worst = 0.0;
        const auto pp = recompute_table(plate_plate_experiments());
        const auto sp = recompute_table(sphere_plate_experiments());
        for (const auto* t : {&pp, &sp}) {
            for (const auto& r : t->rows) {
                worst = std::max(worst, std::abs(r.deviation));
            }
        }
        const double avg_pp = pp.average / kPlatePlateQuotedAverage - 1.0;
        const double avg_sp = sp.average / kSpherePlateQuotedAverage - 1.0;
        const bool ok = worst <= 5e-3 && std::abs(avg_pp) <= 5e-3 && std::abs(avg_sp) <= 5e-3;
        return std::pair{ok, fmt("worst row %.3e, plate average %.3e, sphere average %.3e (limit 5e-3)", worst, avg_pp, avg_sp)};
    });

    criterion(8, "membrane frequencies with holes", [&] {
        const double fs = fundamental_frequency(small, true);
        const double fb = fundamental_frequency(big, true);
        return std::pair{within_rel(fs, 352.800e3, 2e-3) && within_rel(fb, 343.008e3, 2e-3),
                         fmt("%.6g Hz and %.6g Hz (targets 352.800e3, 343.008e3 +/- 0.2%%)", fs, fb)};
    });

    criterion(9, "static deflection", [&] {
        // Power-law fits P = C / d^n quoted for the two devices.
        const double zs = static_deflection(-1.081e-24, 3.507, small);
        const double zb = static_deflection(-1.013e-26, 3.829, big);
        // Same formula fed with this code's own local power law at 0.99 Tc, for information.
        const double Pb = casimir_pressure(headline_spec(1213e-9));
        const double nb = local_exponent(headline_spec(1213e-9));
        const double zb_own = static_deflection(Pb * std::pow(1213e-9, nb), nb, big);
        return std::pair{within_rel(zs, -152e-12, 0.02) && within_rel(zb, -0.17e-12, 0.02),
                         fmt("%.4g pm and %.4g pm (targets -152, -0.17 +/- 2%%); own big-gap power law gives %.4g pm",
                             zs * 1e12, zb * 1e12, zb_own * 1e12)};
    });

    criterion(10, "thermal expansion at 14.2 K", [&] {
        const double as = cte_alpha(14.2, small.cte_A, small.cte_B);
        const double ab = cte_alpha(14.2, big.cte_A, big.cte_B);
        char s1[32];
        char s2[32];
        std::snprintf(s1, sizeof s1, "%.2e", as);
        std::snprintf(s2, sizeof s2, "%.2e", ab);
        const bool ok = std::string(s1) == "5.46e-09" && std::string(s2) == "7.00e-09";
        return std::pair{ok, std::string(s1) + " and " + s2 + " 1/K (targets 5.46e-9, 7.00e-9 to 3 digits)"};
    });

    criterion(11, "synthetic pipeline recovery", [&] {
        const double target = 12.1e3;
        const double dw2 = dw2_from_gradient(target, small);
        const double exact = pipeline_gradient(1, dw2, 0.0);
        double sum = 0.0;
        double sum2 = 0.0;
        const int seeds = 100;
        for (int s = 1; s <= seeds; ++s) {
            const double g = pipeline_gradient(static_cast<std::uint64_t>(s), dw2, 4.7e-3);
            sum += g;
            sum2 += g * g;
        }
        const double mean = sum / seeds;
        const double spread = std::sqrt(std::max(0.0, sum2 / seeds - mean * mean));
        const double bias = mean / target - 1.0;
        const double noiseless = exact / target - 1.0;
        const bool ok = std::abs(bias) < 0.05 && spread / target < 0.15 && std::abs(noiseless) <= 1e-6;
        return std::pair{ok, fmt("bias %.3e (limit 5e-2), spread %.3e (limit 0.15), noiseless %.3e (limit 1e-6)", bias,
                                 spread / target, noiseless)};
    });

    criterion(12, "numerical self-consistency", [&] {
        double worst_fd = 0.0;
        for (const double d : {100e-9, 190e-9, 400e-9, 800e-9, 1213e-9}) {
            for (const double T : {4.0, 14.0}) {
                LifshitzSpec s = headline_spec(d);
                s.T = T;
                MatsubaraPermittivity eps(s.model, s.T);
                const double h = 1e-3 * d;
                auto lo = s;
                auto hi = s;
                lo.d = d - h;
                hi.d = d + h;
                const double fd = (casimir_pressure_detailed(hi, eps).value - casimir_pressure_detailed(lo, eps).value) / (2 * h);
                const double an = casimir_pressure_gradient_detailed(s, eps).value;
                worst_fd = std::max(worst_fd, std::abs(an / fd - 1.0));
            }
        }

        double worst_mem = 0.0;
        std::mt19937_64 rng(2024);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        std::uniform_real_distribution<double> scale(0.5, 2.0);
        for (int i = 0; i < 100; ++i) {
            MembraneSpec m;
            m.L *= scale(rng);
            m.h *= scale(rng);
            m.d *= scale(rng);
            m.sigma *= scale(rng);
            m.rho *= scale(rng);
            m.Y_ratio = 0.5 + 0.25 * (1.0 + u(rng));
            const long double L = m.L, h = m.h, d = m.d, sig = m.sigma, rho = m.rho;
            const long double f = std::sqrt(sig / (2 * rho * L * L));
            const double Pp = 1e4 * u(rng);
            const double dv = u(rng);
            const double C = -1e-24 * (1.5 + u(rng));
            const double n = 3.5 + 0.3 * u(rng);
            auto rel = [](double a, long double b) { return std::abs(static_cast<double>(a / b - 1.0L)); };
            worst_mem = std::max({worst_mem, rel(fundamental_frequency(m, false), f),
                                  rel(fundamental_frequency(m, true), f * std::sqrt((long double)m.Y_ratio)),
                                  rel(dw2_from_gradient(Pp, m), -Pp / (rho * h)),
                                  rel(electrostatic_dw2(dv, 0.0, m), -(long double)Constants::eps0 * dv * dv / (rho * h * d * d * d)),
                                  rel(static_deflection(C, n, m),
                                      m.C_hole * (C / std::pow(d, (long double)n)) * L * L / (4 * m.C1 * h * sig))});
        }

        const DynesParams truth{2.6e-3, 8e-5, 4.45, 1.7};
        std::vector<std::pair<double, double>> pts;
        for (int i = 0; i <= 200; ++i) {
            const double V = -4 * truth.Delta + 8 * truth.Delta * i / 200.0;
            pts.emplace_back(V, dynes_conductance(V, truth));
        }
        const auto fit = dynes_fit(pts, truth.T);
        const double worst_dynes = std::max({std::abs(fit.params.Delta / truth.Delta - 1), std::abs(fit.params.gamma / truth.gamma - 1),
                                             std::abs(fit.params.A / truth.A - 1)});
        const bool ok = worst_fd <= 1e-4 && worst_mem <= 1e-10 && worst_dynes <= 1e-4;
        return std::pair{ok, fmt("gradient vs FD %.2e (limit 1e-4), membrane oracles %.2e (limit 1e-10), Dynes fit %.2e (limit 1e-4)",
                                 worst_fd, worst_mem, worst_dynes)};
    });

    std::printf("%s: %d criterion(s) failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
