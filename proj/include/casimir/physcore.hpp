#ifndef CASIMIR_PHYSCORE_HPP
#define CASIMIR_PHYSCORE_HPP

// Physical constants, unit conventions and the parameter records shared by the
// rest of the library.
//
// Conventions: spectral quantities (Matsubara frequencies, plasma and relaxation
// frequencies, gaps) are energies in eV. Lengths are metres, wavevectors 1/m,
// pressures Pa. Photon wavevectors are formed as xi / hbar_c with hbar_c in eV*m.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace casimir {

/// CODATA 2018 exact / recommended values.
struct Constants {
    static constexpr double kB_J = 1.380649e-23;                   // J/K
    static constexpr double elementary_charge = 1.602176634e-19;   // C (= J/eV)
    static constexpr double kB_eV = kB_J / elementary_charge;      // eV/K
    static constexpr double hbar_J = 1.054571817e-34;              // J*s
    static constexpr double hbar_eV = hbar_J / elementary_charge;  // eV*s
    static constexpr double c = 299792458.0;                       // m/s
    static constexpr double eps0 = 8.8541878128e-12;               // F/m
    static constexpr double hbar_c = hbar_eV * c;                  // eV*m
    static constexpr double hbar_c_J = hbar_J * c;                 // J*m
    static constexpr double zeta3 = 1.2020569031595942854;
};

class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

namespace detail {
inline void require(bool cond, const char* what) {
    if (!cond) {
        throw DomainError(what);
    }
}
}  // namespace detail

/// Normal-state Drude parameters plus the BCS gap law of the superconducting film.
struct SuperconductorParams {
    double Omega = 5.33;       // plasma frequency, eV
    double gamma0 = 0.465;     // room-temperature relaxation, eV
    double RRR = 1.0;
    double Tc = 14.2;  // K
    double c1 = 1.764;
    double c2 = 0.9963;
    double c3 = 0.7735;

    [[nodiscard]] double gamma() const noexcept { return gamma0 / RRR; }

    void validate() const {
        detail::require(Omega > 0.0, "SuperconductorParams: Omega must be positive");
        detail::require(gamma0 > 0.0, "SuperconductorParams: gamma0 must be positive");
        detail::require(RRR >= 1.0, "SuperconductorParams: RRR must be >= 1");
        detail::require(Tc > 0.0, "SuperconductorParams: Tc must be positive");
    }
};

/// Tensioned square membrane over a backgate.
struct MembraneSpec {
    double L = 709e-6;     // side length, m
    double h = 155e-9;     // thickness, m
    double d = 190e-9;     // gap, m
    double sigma = 677e6;  // tensile stress, Pa
    double rho = 4992.0;   // density, kg/m^3
    double E = 375e9;      // Young's modulus, Pa
    double nu = 0.2949;    // Poisson ratio
    double C1 = 3.45;      // deflection constant of a square membrane
    double C_hole = 1.086;
    double Y_ratio = 0.923;     // (f_holes / f_no_holes)^2
    double area_ratio = 0.945;  // force reduction from the hole pattern
    double cte_A = 2.001e-10;   // 1/K^2
    double cte_B = 9.159e-13;   // 1/K^4
    double k0 = 1804.0;         // N/m, descriptive only

    [[nodiscard]] double areal_mass() const noexcept { return rho * h; }

    void validate() const {
        detail::require(L > 0.0 && h > 0.0 && d > 0.0, "MembraneSpec: lengths must be positive");
        detail::require(sigma > 0.0 && rho > 0.0, "MembraneSpec: sigma and rho must be positive");
        detail::require(Y_ratio > 0.0 && Y_ratio <= 1.0, "MembraneSpec: Y_ratio must lie in (0, 1]");
        detail::require(area_ratio > 0.0 && area_ratio <= 1.0, "MembraneSpec: area_ratio must lie in (0, 1]");
    }

    /// The 190 nm device.
    static MembraneSpec small_gap() { return MembraneSpec{}; }

    /// The 1213 nm control device.
    static MembraneSpec big_gap() {
        MembraneSpec m;
        m.d = 1213e-9;
        m.sigma = 683e6;
        m.rho = 5332.0;
        m.cte_A = 4.289e-10;
        m.cte_B = 3.181e-13;
        m.k0 = 1821.0;
        return m;
    }
};

enum class FrequencyBasis { AngularSquared, LinearSquared };

/// Linear maps from a frequency-squared shift to force, pressure and centre deflection.
/// The basis has no default; it must be stated wherever factors are built.
struct ConversionFactors {
    double force_per_w2;
    double pressure_per_w2;
    double deflection_per_w2;
    FrequencyBasis basis;

    /// FEM factors of the 190 nm device: N, Pa and m per Hz^2 of Delta(f^2).
    static ConversionFactors small_gap_fem() {
        return ConversionFactors{7.83e-16, 1.55e-9, 6.28e-19, FrequencyBasis::LinearSquared};
    }
};

/// Matsubara frequency xi_l = 2 pi l kB T as an energy (eV).
inline double matsubara_frequency(long l, double T) {
    detail::require(T > 0.0, "matsubara_frequency: temperature must be positive");
    detail::require(l >= 0, "matsubara_frequency: index must be non-negative");
    return 2.0 * std::numbers::pi * static_cast<double>(l) * Constants::kB_eV * T;
}

// ---------------------------------------------------------------------------
// Flat key-value configuration: `key = value` lines, '#' comments, units
// carried in the key suffix (d_m, Omega_eV, T_K, ...).

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class KeyValueConfig {
public:
    KeyValueConfig() = default;

    static KeyValueConfig parse(std::istream& in, std::string_view source = "<config>") {
        KeyValueConfig cfg;
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (const auto hash = line.find('#'); hash != std::string::npos) {
                line.erase(hash);
            }
            const auto trimmed = trim(line);
            if (trimmed.empty()) {
                continue;
            }
            const auto eq = trimmed.find('=');
            if (eq == std::string_view::npos) {
                throw ConfigError(std::string(source) + ":" + std::to_string(lineno) + ": expected 'key = value'");
            }
            const auto key = trim(trimmed.substr(0, eq));
            const auto value = trim(trimmed.substr(eq + 1));
            if (key.empty()) {
                throw ConfigError(std::string(source) + ":" + std::to_string(lineno) + ": empty key");
            }
            cfg.values_[std::string(key)] = std::string(value);
        }
        return cfg;
    }

    static KeyValueConfig parse(const std::string& text, std::string_view source = "<config>") {
        std::istringstream in(text);
        return parse(in, source);
    }

    static KeyValueConfig load(const std::string& path) {
        std::ifstream in(path);
        if (!in) {
            throw ConfigError("cannot open config file '" + path + "'");
        }
        return parse(in, path);
    }

    void set(const std::string& key, const std::string& value) { values_[key] = value; }
    [[nodiscard]] bool has(const std::string& key) const { return values_.contains(key); }
    [[nodiscard]] const std::map<std::string, std::string>& entries() const noexcept { return values_; }

    [[nodiscard]] std::optional<double> number(const std::string& key) const {
        const auto it = values_.find(key);
        if (it == values_.end()) {
            return std::nullopt;
        }
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(it->second, &used);
        } catch (const std::exception&) {
            throw ConfigError("key '" + key + "': '" + it->second + "' is not a number");
        }
        if (used != it->second.size()) {
            throw ConfigError("key '" + key + "': trailing characters in '" + it->second + "'");
        }
        return v;
    }

    [[nodiscard]] double number_or(const std::string& key, double fallback) const {
        return number(key).value_or(fallback);
    }

    [[nodiscard]] std::optional<std::string> text(const std::string& key) const {
        const auto it = values_.find(key);
        if (it == values_.end()) {
            return std::nullopt;
        }
        return it->second;
    }

private:
    static std::string_view trim(std::string_view s) {
        const auto first = s.find_first_not_of(" \t\r");
        if (first == std::string_view::npos) {
            return {};
        }
        const auto last = s.find_last_not_of(" \t\r");
        return s.substr(first, last - first + 1);
    }

    std::map<std::string, std::string> values_;
};

/// Shortest decimal that reads back to the same double.
inline std::string exact_repr(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline SuperconductorParams superconductor_from_config(const KeyValueConfig& cfg, SuperconductorParams p = {}) {
    p.Omega = cfg.number_or("Omega_eV", p.Omega);
    p.gamma0 = cfg.number_or("gamma0_eV", p.gamma0);
    p.RRR = cfg.number_or("RRR", p.RRR);
    p.Tc = cfg.number_or("Tc_K", p.Tc);
    p.c1 = cfg.number_or("gap_c1", p.c1);
    p.c2 = cfg.number_or("gap_c2", p.c2);
    p.c3 = cfg.number_or("gap_c3", p.c3);
    p.validate();
    return p;
}

inline void write_config(std::ostream& out, const SuperconductorParams& p) {
    out << "Omega_eV = " << exact_repr(p.Omega) << '\n'
        << "gamma0_eV = " << exact_repr(p.gamma0) << '\n'
        << "RRR = " << exact_repr(p.RRR) << '\n'
        << "Tc_K = " << exact_repr(p.Tc) << '\n'
        << "gap_c1 = " << exact_repr(p.c1) << '\n'
        << "gap_c2 = " << exact_repr(p.c2) << '\n'
        << "gap_c3 = " << exact_repr(p.c3) << '\n';
}

/// Keys: L_m, h_m, d_m, sigma_Pa, rho_kgm3, E_Pa, nu, C1, C_hole, Y_ratio,
/// area_ratio, cte_A_perK2, cte_B_perK4, k0_Npm. Missing keys keep `m`'s value.
inline MembraneSpec membrane_from_config(const KeyValueConfig& cfg, MembraneSpec m = {}) {
    m.L = cfg.number_or("L_m", m.L);
    m.h = cfg.number_or("h_m", m.h);
    m.d = cfg.number_or("d_m", m.d);
    m.sigma = cfg.number_or("sigma_Pa", m.sigma);
    m.rho = cfg.number_or("rho_kgm3", m.rho);
    m.E = cfg.number_or("E_Pa", m.E);
    m.nu = cfg.number_or("nu", m.nu);
    m.C1 = cfg.number_or("C1", m.C1);
    m.C_hole = cfg.number_or("C_hole", m.C_hole);
    m.Y_ratio = cfg.number_or("Y_ratio", m.Y_ratio);
    m.area_ratio = cfg.number_or("area_ratio", m.area_ratio);
    m.cte_A = cfg.number_or("cte_A_perK2", m.cte_A);
    m.cte_B = cfg.number_or("cte_B_perK4", m.cte_B);
    m.k0 = cfg.number_or("k0_Npm", m.k0);
    m.validate();
    return m;
}

inline void write_config(std::ostream& out, const MembraneSpec& m) {
    out << "L_m = " << exact_repr(m.L) << '\n'
        << "h_m = " << exact_repr(m.h) << '\n'
        << "d_m = " << exact_repr(m.d) << '\n'
        << "sigma_Pa = " << exact_repr(m.sigma) << '\n'
        << "rho_kgm3 = " << exact_repr(m.rho) << '\n'
        << "E_Pa = " << exact_repr(m.E) << '\n'
        << "nu = " << exact_repr(m.nu) << '\n'
        << "C1 = " << exact_repr(m.C1) << '\n'
        << "C_hole = " << exact_repr(m.C_hole) << '\n'
        << "Y_ratio = " << exact_repr(m.Y_ratio) << '\n'
        << "area_ratio = " << exact_repr(m.area_ratio) << '\n'
        << "cte_A_perK2 = " << exact_repr(m.cte_A) << '\n'
        << "cte_B_perK4 = " << exact_repr(m.cte_B) << '\n'
        << "k0_Npm = " << exact_repr(m.k0) << '\n';
}

/// Keys: force_N, pressure_Pa, deflection_m and the mandatory basis = angular|linear.
inline ConversionFactors conversion_from_config(const KeyValueConfig& cfg) {
    const auto basis = cfg.text("basis");
    if (!basis) {
        throw ConfigError("conversion factors: 'basis' must be given (angular or linear)");
    }
    FrequencyBasis b{};
    if (*basis == "angular") {
        b = FrequencyBasis::AngularSquared;
    } else if (*basis == "linear") {
        b = FrequencyBasis::LinearSquared;
    } else {
        throw ConfigError("conversion factors: basis must be 'angular' or 'linear', got '" + *basis + "'");
    }
    const auto need = [&cfg](const char* key) {
        const auto v = cfg.number(key);
        if (!v) {
            throw ConfigError(std::string("conversion factors: missing key '") + key + "'");
        }
        return *v;
    };
    return ConversionFactors{need("force_N"), need("pressure_Pa"), need("deflection_m"), b};
}

}  // namespace casimir

#endif  // CASIMIR_PHYSCORE_HPP
