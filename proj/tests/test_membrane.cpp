#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "casimir/membrane.hpp"

using namespace casimir;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

std::vector<std::pair<double, double>> lcpd_curve(double V0, const MembraneSpec& m, double span, int n) {
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i < n; ++i) {
        const double v = V0 - span + 2.0 * span * i / (n - 1);
        pts.emplace_back(v, lcpd_frequency(v, V0, m));
    }
    return pts;
}

MembraneSpec random_spec(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.5, 2.0);
    MembraneSpec m;
    m.L *= u(rng);
    m.h *= u(rng);
    m.d *= u(rng);
    m.sigma *= u(rng);
    m.rho *= u(rng);
    m.C_hole *= u(rng);
    m.Y_ratio = 0.5 + 0.5 * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    return m;
}

}  // namespace

TEST_CASE("fundamental frequency") {
    const auto s = MembraneSpec::small_gap();
    const auto b = MembraneSpec::big_gap();
    CHECK_THAT(fundamental_frequency(s, false), WithinRel(367.3e3, 1e-3));
    CHECK_THAT(fundamental_frequency(s, true), WithinRel(352.800e3, 1e-3));
    CHECK_THAT(fundamental_frequency(b, true), WithinRel(343.008e3, 1e-3));

    auto m = s;
    m.sigma *= 4.0;
    CHECK_THAT(fundamental_frequency(m, false), WithinRel(2.0 * fundamental_frequency(s, false), 1e-15));
    m = s;
    m.L *= 3.0;
    CHECK_THAT(fundamental_frequency(m, true), WithinRel(fundamental_frequency(s, true) / 3.0, 1e-15));
}

TEST_CASE("frequency shift and gradient") {
    const auto s = MembraneSpec::small_gap();
    CHECK(dw2_from_gradient(0.0, s) == 0.0);
    CHECK_THAT(dw2_from_gradient(12.10e3, s), WithinRel(-1.564e7, 1e-3));
    for (double x : {1e-3, 12.1e3, -7e5}) {
        CHECK_THAT(gradient_from_dw2(dw2_from_gradient(x, s), s), WithinRel(x, 1e-12));
    }
    const double df = predicted_frequency_jump(6.0e3, s, 352.8e3);
    CHECK_THAT(std::abs(df), WithinRel(0.28, 0.01));
    CHECK_THAT(predicted_frequency_jump(12.0e3, s, 352.8e3), WithinRel(2.0 * df, 1e-15));
    CHECK(predicted_frequency_jump(0.0, s, 352.8e3) == 0.0);
    // Same number from the stress form -f0 dP' L^2 / (4 pi^2 sigma h), with sigma rewritten through f0.
    const double f0 = 352.8e3;
    const double sigma_eff = 2.0 * s.L * s.L * s.rho * f0 * f0;
    CHECK_THAT(df, WithinRel(-f0 * 6.0e3 * s.L * s.L / (4 * M_PI * M_PI * sigma_eff * s.h), 1e-12));
}

TEST_CASE("electrostatic softening") {
    const auto s = MembraneSpec::small_gap();
    CHECK(electrostatic_dw2(0.3, 0.3, s) == 0.0);
    CHECK_THAT(electrostatic_dw2(0.4, 0.3, s), WithinRel(-1.668e10, 1e-3));
    CHECK(electrostatic_dw2(0.3 + 0.07, 0.3, s) == electrostatic_dw2(0.3 - 0.07, 0.3, s));
    for (double v = -1.0; v <= 1.0; v += 0.05) {
        CHECK(electrostatic_dw2(v, 0.25, s) <= 0.0);
    }
}

TEST_CASE("LCPD fit") {
    SECTION("noiseless round trip") {
        for (const auto& truth : {MembraneSpec::small_gap(), MembraneSpec::big_gap()}) {
            for (double V0 : {0.2572, 0.2236, -0.1}) {
                auto guess = truth;
                guess.sigma = 1.0;
                guess.rho = 1.0;
                const auto fit = lcpd_fit(lcpd_curve(V0, truth, 0.8, 41), guess);
                CHECK_THAT(fit.V0, WithinAbs(V0, 1e-6 * std::abs(V0)));
                CHECK_THAT(fit.sigma, WithinRel(truth.sigma, 1e-6));
                CHECK_THAT(fit.rho, WithinRel(truth.rho, 1e-6));
                CHECK_THAT(fit.f_apex, WithinRel(fundamental_frequency(truth, true), 1e-9));
            }
        }
    }
    SECTION("noisy curves, 100 seeds") {
        const auto truth = MembraneSpec::small_gap();
        const double V0 = 0.2572;
        double worst = 0.0;
        for (std::uint64_t seed = 1; seed <= 100; ++seed) {
            std::mt19937_64 rng(seed);
            std::normal_distribution<double> n(0.0, 1e-3);
            auto pts = lcpd_curve(V0, truth, 1.2, 201);
            for (auto& [v, f] : pts) {
                f *= 1.0 + n(rng);
            }
            worst = std::max(worst, std::abs(lcpd_fit(pts, truth).V0 - V0));
        }
        CHECK(worst < 1e-3);
    }
    SECTION("failures") {
        const auto m = MembraneSpec::small_gap();
        auto pts = lcpd_curve(0.1, m, 0.5, 4);
        CHECK_THROWS_AS(lcpd_fit(pts, m), FitError);
        std::vector<std::pair<double, double>> convex;
        for (int i = -3; i <= 3; ++i) {
            convex.emplace_back(0.1 * i, 1e5 + 10.0 * i * i);
        }
        CHECK_THROWS_AS(lcpd_fit(convex, m), FitError);
    }
}

TEST_CASE("static deflection") {
    const auto s = MembraneSpec::small_gap();
    const auto b = MembraneSpec::big_gap();
    CHECK_THAT(static_deflection(-1.081e-24, 3.507, s), WithinRel(-152e-12, 0.02));
    CHECK_THAT(static_deflection(-1.013e-26, 3.829, b), WithinRel(-0.17e-12, 0.02));
    CHECK(static_deflection(0.0, 3.5, s) == 0.0);
    CHECK_THAT(static_deflection(-2.0e-24, 3.507, s), WithinRel(2.0 * static_deflection(-1.0e-24, 3.507, s), 1e-15));
}

TEST_CASE("patch pressure") {
    CHECK_THAT(patch_pressure(10e-3, 30e-9, 190e-9), WithinRel(5.5e-4, 0.01));
    CHECK(patch_pressure(0.0, 30e-9, 190e-9) == 0.0);
    CHECK_THAT(patch_pressure(5e-3, 20e-9, 400e-9), WithinRel(patch_pressure(5e-3, 20e-9, 200e-9) / 16, 1e-15));
}

TEST_CASE("thermal expansion") {
    const auto s = MembraneSpec::small_gap();
    const auto b = MembraneSpec::big_gap();
    CHECK_THAT(cte_alpha(14.2, s.cte_A, s.cte_B), WithinRel(5.46e-9, 1e-3));
    CHECK_THAT(cte_alpha(14.2, b.cte_A, b.cte_B), WithinRel(7.00e-9, 1e-3));
    CHECK(cte_alpha(0.0, s.cte_A, s.cte_B) == 0.0);

    const double T1 = 4.45;
    const double T2 = 16.0;
    const double exact = s.E / (1 - s.nu) *
                         (s.cte_A / 2 * (T2 * T2 - T1 * T1) + s.cte_B / 4 * (std::pow(T2, 4) - std::pow(T1, 4)));
    CHECK_THAT(thermal_stress(T1, T2, s), WithinRel(exact, 1e-12));
    const double sub = 1e-9;
    CHECK_THAT(thermal_stress(T1, T2, s, {sub}), WithinRel(exact - s.E / (1 - s.nu) * sub * (T2 - T1), 1e-12));
}

TEST_CASE("frequency noise") {
    CHECK(frequency_noise(352.8e3, 7.2e5, 0.0, 0.2) == 0.0);
    CHECK_THAT(frequency_noise(352.8e3, 7.2e6, 0.02, 0.2), WithinRel(frequency_noise(352.8e3, 7.2e5, 0.02, 0.2) / 10, 1e-15));
    const double ns = noise_to_signal_for(352.8e3, 7.2e5, 4.7e-3, 0.2);
    CHECK_THAT(ns, WithinRel(0.0215049, 1e-5));
    CHECK_THAT(frequency_noise(352.8e3, 7.2e5, ns, 0.2), WithinRel(4.7e-3, 1e-14));
}

TEST_CASE("closed forms against an independent evaluation on random draws") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const auto m = random_spec(rng);
        const long double L = m.L, h = m.h, d = m.d, sig = m.sigma, rho = m.rho;
        const long double f = std::sqrt(sig / (2 * rho * L * L));
        CHECK_THAT(fundamental_frequency(m, false), WithinRel(static_cast<double>(f), 1e-10));
        CHECK_THAT(fundamental_frequency(m, true), WithinRel(static_cast<double>(f * std::sqrt((long double)m.Y_ratio)), 1e-10));

        const double Pp = 1e4 * u(rng);
        CHECK_THAT(dw2_from_gradient(Pp, m), WithinRel(static_cast<double>(-Pp / (rho * h)), 1e-10));
        const double dv = u(rng);
        CHECK_THAT(electrostatic_dw2(dv, 0.0, m),
                   WithinRel(static_cast<double>(-(long double)Constants::eps0 * dv * dv / (rho * h * d * d * d)), 1e-10));
        const double C = -1e-24 * (1.5 + u(rng));
        const double n = 3.5 + 0.3 * u(rng);
        const long double z = m.C_hole * (C / std::pow(d, (long double)n)) * L * L / (4 * m.C1 * h * sig);
        CHECK_THAT(static_deflection(C, n, m), WithinRel(static_cast<double>(z), 1e-10));
        const double f0 = 3e5 * (1.5 + u(rng));
        CHECK_THAT(predicted_frequency_jump(Pp, m, f0),
                   WithinRel(static_cast<double>(-Pp / (rho * h) / (8 * 3.14159265358979323846L * 3.14159265358979323846L * f0)), 1e-10));
    }
}

TEST_CASE("sweep CSV") {
    std::istringstream ok("T_K,f_Hz,sigma_f_Hz\n# comment\n14.0,352800.5,0.0047\n\n14.1,352800.1,0.0047\n");
    const auto r = read_sweep_csv(ok);
    REQUIRE(r.size() == 2);
    CHECK(r[1].T == 14.1);
    CHECK(r[0].sigma_f.value() == 0.0047);
    CHECK_FALSE(r[0].Q.has_value());

    std::istringstream bad("T_K,f_Hz\n14.0,352800\n14.1,abc\n");
    try {
        read_sweep_csv(bad);
        FAIL("expected an input error");
    } catch (const InputError& e) {
        CHECK(e.line == 3);
    }
    std::istringstream empty("");
    CHECK_THROWS_AS(read_sweep_csv(empty), InputError);
    std::istringstream neg("T_K,f_Hz\n-1,3\n");
    CHECK_THROWS_AS(read_sweep_csv(neg), InputError);
}
