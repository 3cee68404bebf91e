// Pressure, gradient and exponent at the small gap, then the gradient change across Tc.

#include <cstdio>
#include <utility>

#include "casimir/lifshitz.hpp"
#include "casimir/membrane.hpp"

int main() {
    using namespace casimir;
    LifshitzSpec spec;  // 190 nm, 14.058 K, BCS response, plasma-BCS prescription
    std::printf("P    = %.6g Pa\n", casimir_pressure(spec));
    std::printf("P'   = %.6g Pa/m\n", casimir_pressure_gradient(spec));
    std::printf("n    = %.5f\n", local_exponent(spec));

    const SuperconductorParams p;
    const auto m = MembraneSpec::small_gap();
    const std::pair<ZeroFreqApproach, const char*> rows[] = {{ZeroFreqApproach::PlasmaBCS, "plasma-bcs"},
                                                             {ZeroFreqApproach::PlasmaPlasma, "plasma-plasma"},
                                                             {ZeroFreqApproach::DrudeBCS, "drude-bcs"}};
    for (const auto& [a, name] : rows) {
        const double jump = tc_jump(spec.d, p.Tc, 0.1, a, p);
        std::printf("%-14s %10.4g Pa/m  df = %+.4g Hz\n", name, jump, predicted_frequency_jump(jump, m, 352.8e3));
    }
}
