#include <catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "casimir/physcore.hpp"

using namespace casimir;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("constants are mutually consistent") {
    CHECK_THAT(Constants::hbar_c, WithinRel(Constants::hbar_eV * Constants::c, 1e-12));
    CHECK_THAT(Constants::hbar_c, WithinRel(1.973269804e-7, 1e-9));
    CHECK_THAT(Constants::kB_eV, WithinRel(8.617333262e-5, 1e-9));
    CHECK_THAT(Constants::hbar_c_J, WithinRel(Constants::hbar_c * Constants::elementary_charge, 1e-12));
}

TEST_CASE("matsubara frequencies") {
    CHECK(matsubara_frequency(0, 14.2) == 0.0);
    CHECK_THAT(matsubara_frequency(1, 14.2), WithinRel(7.688e-3, 2e-4));
    CHECK_THAT(matsubara_frequency(1, 14.2), WithinRel(2.0 * M_PI * 8.617333262e-5 * 14.2, 1e-9));
    for (long l : {1L, 2L, 7L, 1000L}) {
        CHECK_THAT(matsubara_frequency(2 * l, 3.3), WithinRel(2.0 * matsubara_frequency(l, 3.3), 1e-15));
        CHECK_THAT(matsubara_frequency(l, 6.6), WithinRel(2.0 * matsubara_frequency(l, 3.3), 1e-15));
    }
    CHECK_THROWS_AS(matsubara_frequency(1, 0.0), DomainError);
    CHECK_THROWS_AS(matsubara_frequency(1, -1.0), DomainError);
}

TEST_CASE("parameter validation") {
    SuperconductorParams p;
    CHECK_NOTHROW(p.validate());
    p.RRR = 0.5;
    CHECK_THROWS_AS(p.validate(), DomainError);

    MembraneSpec m;
    CHECK_NOTHROW(m.validate());
    m.Y_ratio = 1.2;
    CHECK_THROWS_AS(m.validate(), DomainError);
    m = MembraneSpec{};
    m.h = 0.0;
    CHECK_THROWS_AS(m.validate(), DomainError);
}

TEST_CASE("canonical membranes") {
    const auto s = MembraneSpec::small_gap();
    const auto b = MembraneSpec::big_gap();
    CHECK(s.d == 190e-9);
    CHECK(s.sigma == 677e6);
    CHECK(s.rho == 4992.0);
    CHECK(b.d == 1213e-9);
    CHECK(b.sigma == 683e6);
    CHECK(b.rho == 5332.0);
    CHECK(s.L == b.L);
    CHECK(s.h == b.h);
    CHECK_THAT(s.areal_mass(), WithinRel(7.7376e-4, 1e-12));
}

TEST_CASE("membrane specs round-trip through the config format bit-exactly") {
    for (const auto& m : {MembraneSpec::small_gap(), MembraneSpec::big_gap()}) {
        std::ostringstream out;
        write_config(out, m);
        const auto back = membrane_from_config(KeyValueConfig::parse(out.str()));
        CHECK(back.L == m.L);
        CHECK(back.h == m.h);
        CHECK(back.d == m.d);
        CHECK(back.sigma == m.sigma);
        CHECK(back.rho == m.rho);
        CHECK(back.E == m.E);
        CHECK(back.nu == m.nu);
        CHECK(back.C1 == m.C1);
        CHECK(back.C_hole == m.C_hole);
        CHECK(back.Y_ratio == m.Y_ratio);
        CHECK(back.area_ratio == m.area_ratio);
        CHECK(back.cte_A == m.cte_A);
        CHECK(back.cte_B == m.cte_B);
        CHECK(back.k0 == m.k0);
    }
    SuperconductorParams p;
    p.Omega = 12.7;
    p.gamma0 = 0.1 / 3.0;
    std::ostringstream out;
    write_config(out, p);
    const auto q = superconductor_from_config(KeyValueConfig::parse(out.str()));
    CHECK(q.Omega == p.Omega);
    CHECK(q.gamma0 == p.gamma0);
    CHECK(q.Tc == p.Tc);
    CHECK(q.c3 == p.c3);
}

TEST_CASE("config parsing") {
    const auto cfg = KeyValueConfig::parse("# comment\n d_m = 2e-7  # trailing\nname = abc\n\n");
    CHECK(cfg.number("d_m") == 2e-7);
    CHECK(cfg.text("name") == "abc");
    CHECK(cfg.number_or("missing", 3.0) == 3.0);
    CHECK_THROWS_AS(cfg.number("name"), ConfigError);
    CHECK_THROWS_AS(KeyValueConfig::parse(std::string("no equals sign\n")), ConfigError);
}

TEST_CASE("conversion factors carry an explicit basis") {
    const auto f = ConversionFactors::small_gap_fem();
    CHECK(f.basis == FrequencyBasis::LinearSquared);
    const auto cfg = KeyValueConfig::parse("basis = angular\nforce_N = 1\npressure_Pa = 2\ndeflection_m = 3\n");
    const auto g = conversion_from_config(cfg);
    CHECK(g.basis == FrequencyBasis::AngularSquared);
    CHECK(g.pressure_per_w2 == 2.0);
    CHECK_THROWS_AS(conversion_from_config(KeyValueConfig::parse("force_N = 1\npressure_Pa = 2\ndeflection_m = 3\n")),
                    ConfigError);
}
