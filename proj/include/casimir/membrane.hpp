#ifndef CASIMIR_MEMBRANE_HPP
#define CASIMIR_MEMBRANE_HPP

// Tensioned square membrane: fundamental mode, frequency shift <-> pressure gradient,
// electrostatics, LCPD fit, static deflection, thermal expansion and frequency noise.

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "casimir/physcore.hpp"
#include "casimir/quadrature.hpp"

namespace casimir {

/// Malformed input data; `line` is 1-based, 0 when not tied to a line.
class InputError : public std::runtime_error {
public:
    InputError(const std::string& what, std::size_t line = 0)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line(line) {}
    std::size_t line;
};

class FitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SweepRecord {
    double T;  // K
    double f;  // Hz
    std::optional<double> sigma_f;
    std::optional<double> Q;
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        const auto b = cell.find_first_not_of(" \t\r");
        const auto e = cell.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? std::string{} : cell.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

inline double parse_cell(const std::string& s, std::size_t line, const char* column) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) {
            throw std::invalid_argument(s);
        }
        return v;
    } catch (const std::exception&) {
        throw InputError(std::string("cannot parse ") + column + " value '" + s + "'", line);
    }
}

}  // namespace detail

/// Reads `T_K,f_Hz[,sigma_f_Hz][,Q]`. Blank lines and lines starting with '#' are skipped.
inline std::vector<SweepRecord> read_sweep_csv(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') {
            continue;
        }
        header = detail::split_csv_line(line);
        break;
    }
    if (header.empty()) {
        throw InputError("empty sweep file");
    }
    if (header.size() < 2 || header[0] != "T_K" || header[1] != "f_Hz") {
        throw InputError("header must start with T_K,f_Hz", lineno);
    }
    int sigma_col = -1;
    int q_col = -1;
    for (std::size_t i = 2; i < header.size(); ++i) {
        if (header[i] == "sigma_f_Hz") {
            sigma_col = static_cast<int>(i);
        } else if (header[i] == "Q") {
            q_col = static_cast<int>(i);
        } else {
            throw InputError("unknown column '" + header[i] + "'", lineno);
        }
    }

    std::vector<SweepRecord> out;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') {
            continue;
        }
        const auto cells = detail::split_csv_line(line);
        if (cells.size() != header.size()) {
            throw InputError("expected " + std::to_string(header.size()) + " columns, got " +
                                 std::to_string(cells.size()),
                             lineno);
        }
        SweepRecord r{detail::parse_cell(cells[0], lineno, "T_K"), detail::parse_cell(cells[1], lineno, "f_Hz"),
                      std::nullopt, std::nullopt};
        if (sigma_col >= 0) {
            r.sigma_f = detail::parse_cell(cells[static_cast<std::size_t>(sigma_col)], lineno, "sigma_f_Hz");
        }
        if (q_col >= 0) {
            r.Q = detail::parse_cell(cells[static_cast<std::size_t>(q_col)], lineno, "Q");
        }
        if (!(r.T > 0.0) || !(r.f > 0.0) || (r.sigma_f && !(*r.sigma_f >= 0.0))) {
            throw InputError("need T_K > 0, f_Hz > 0 and sigma_f_Hz >= 0", lineno);
        }
        out.push_back(r);
    }
    return out;
}

inline std::vector<SweepRecord> read_sweep_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open " + path);
    }
    return read_sweep_csv(in);
}

// ---------------------------------------------------------------- frequencies

/// Fundamental (1,1) frequency in Hz; the hole pattern scales f^2 by Y_ratio.
inline double fundamental_frequency(const MembraneSpec& m, bool with_holes) {
    m.validate();
    const double f = std::sqrt(m.sigma / m.rho) / (std::numbers::sqrt2 * m.L);
    return with_holes ? f * std::sqrt(m.Y_ratio) : f;
}

/// Shift of omega^2 ((rad/s)^2) produced by an external pressure gradient (Pa/m).
inline double dw2_from_gradient(double Pprime, const MembraneSpec& m) {
    return -Pprime / m.areal_mass();
}

inline double gradient_from_dw2(double dw2, const MembraneSpec& m) {
    return -dw2 * m.areal_mass();
}

/// Linear frequency shift (Hz) for a gradient change, df = d(omega^2) / (8 pi^2 f0).
inline double predicted_frequency_jump(double Pprime_jump, const MembraneSpec& m, double f0) {
    detail::require(f0 > 0.0, "predicted_frequency_jump: f0 must be positive");
    return dw2_from_gradient(Pprime_jump, m) / (8.0 * std::numbers::pi * std::numbers::pi * f0);
}

/// Plate-backgate electrostatic softening of omega^2, -(eps0 / rho h) (V_bg - V0)^2 / d^3.
inline double electrostatic_dw2(double V_bg, double V0, const MembraneSpec& m) {
    const double dv = V_bg - V0;
    return -Constants::eps0 / m.areal_mass() * dv * dv / (m.d * m.d * m.d);
}

// ---------------------------------------------------------------- LCPD fit

struct LcpdFit {
    double V0;      // V
    double sigma;   // Pa
    double rho;     // kg/m^3
    double f_apex;  // Hz
    double sigma_V0;  // 1-sigma from the linearized covariance, V
    std::array<double, 3> coeffs;  // f^2 = c0 + c1 V + c2 V^2
};

/// Fits f^2(V_bg) to a concave parabola. Uses L, h, d and Y_ratio from `m`; sigma and rho
/// are outputs. The apex frequency is the with-holes fundamental.
inline LcpdFit lcpd_fit(const std::vector<std::pair<double, double>>& points, const MembraneSpec& m) {
    if (points.size() < 5) {
        throw FitError("lcpd_fit: need at least 5 points");
    }
    const auto n = static_cast<Eigen::Index>(points.size());
    Eigen::MatrixXd A(n, 3);
    Eigen::VectorXd b(n);
    double vmin = points.front().first;
    double vmax = vmin;
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto [v, f] = points[static_cast<std::size_t>(i)];
        A(i, 0) = 1.0;
        A(i, 1) = v;
        A(i, 2) = v * v;
        b(i) = f * f;
        vmin = std::min(vmin, v);
        vmax = std::max(vmax, v);
    }
    // Scale columns so the normal matrix stays well conditioned for mV-scale sweeps.
    const Eigen::Vector3d scale = A.colwise().norm().transpose();
    const Eigen::MatrixXd As = A * scale.cwiseInverse().asDiagonal();
    const auto qr = As.colPivHouseholderQr();
    const Eigen::Vector3d cs = qr.solve(b);
    const Eigen::Vector3d c = cs.cwiseQuotient(scale);
    if (!(c(2) < 0.0)) {
        throw FitError("lcpd_fit: fitted parabola is not concave");
    }
    const double V0 = -c(1) / (2.0 * c(2));
    if (V0 < vmin || V0 > vmax) {
        throw FitError("lcpd_fit: apex lies outside the sampled voltage range");
    }
    const double f2_apex = c(0) - c(1) * c(1) / (4.0 * c(2));
    const double rho = -Constants::eps0 / (4.0 * std::numbers::pi * std::numbers::pi * c(2) * m.h * m.d * m.d * m.d);
    const double sigma = 2.0 * m.L * m.L * rho * f2_apex / m.Y_ratio;

    // Linearized uncertainty of V0 from the residual variance.
    double sigma_V0 = 0.0;
    if (n > 3) {
        const Eigen::VectorXd resid = b - A * c;
        const double s2 = resid.squaredNorm() / static_cast<double>(n - 3);
        const Eigen::Matrix3d cov_s = (As.transpose() * As).inverse() * s2;
        const Eigen::Matrix3d cov = scale.cwiseInverse().asDiagonal() * cov_s * scale.cwiseInverse().asDiagonal();
        const Eigen::Vector3d grad(0.0, -1.0 / (2.0 * c(2)), c(1) / (2.0 * c(2) * c(2)));
        sigma_V0 = std::sqrt(std::max(0.0, grad.dot(cov * grad)));
    }
    return {V0, sigma, rho, std::sqrt(f2_apex), sigma_V0, {c(0), c(1), c(2)}};
}

/// Noiseless f(V_bg) for given (V0, sigma, rho), the inverse of lcpd_fit.
inline double lcpd_frequency(double V_bg, double V0, const MembraneSpec& m) {
    const double w2 = std::pow(2.0 * std::numbers::pi * fundamental_frequency(m, true), 2) + electrostatic_dw2(V_bg, V0, m);
    return std::sqrt(w2) / (2.0 * std::numbers::pi);
}

// ---------------------------------------------------------------- statics

/// Centre deflection (m) under the uniform pressure P(d) = C / d^n; negative means toward the gate.
inline double static_deflection(double C, double n, const MembraneSpec& m) {
    const double P = C / std::pow(m.d, n);
    return m.C_hole * P * m.L * m.L / (4.0 * m.C1 * m.h * m.sigma);
}

/// Quasi-static patch-potential pressure bound (Pa).
inline double patch_pressure(double V_rms, double ell, double d) {
    detail::require(d > 0.0, "patch_pressure: d must be positive");
    return 0.9 * Constants::eps0 * V_rms * V_rms * ell * ell / std::pow(d, 4);
}

/// Thermal expansion coefficient alpha(T) = A T + B T^3 (1/K).
inline double cte_alpha(double T, double A, double B) {
    detail::require(T >= 0.0, "cte_alpha: temperature must be non-negative");
    return A * T + B * T * T * T;
}

/// Thermal stress (Pa) accumulated between T1 and T2, E/(1-nu) Int (alpha_film - alpha_sub) dT.
/// `alpha_sub` holds polynomial coefficients in T (constant first); empty means zero.
inline double thermal_stress(double T1, double T2, const MembraneSpec& m, const std::vector<double>& alpha_sub = {}) {
    auto integrand = [&](double T) {
        double sub = 0.0;
        for (auto it = alpha_sub.rbegin(); it != alpha_sub.rend(); ++it) {
            sub = sub * T + *it;
        }
        return cte_alpha(T, m.cte_A, m.cte_B) - sub;
    };
    return m.E / (1.0 - m.nu) * quad::integrate(integrand, T1, T2, {1e-13, 0.0, 200}).value;
}

// ---------------------------------------------------------------- noise

/// RMS frequency noise (Hz) of a phase-tracked resonator, (f0 / 2Q)(N/S) sqrt(1 / 2 pi tau).
inline double frequency_noise(double f0, double Q, double noise_to_signal, double tau) {
    detail::require(f0 > 0.0 && Q > 0.0 && tau > 0.0 && noise_to_signal >= 0.0,
                    "frequency_noise: arguments must be positive");
    return f0 / (2.0 * Q) * noise_to_signal * std::sqrt(1.0 / (2.0 * std::numbers::pi * tau));
}

/// N/S that produces a given RMS frequency noise.
inline double noise_to_signal_for(double f0, double Q, double df_rms, double tau) {
    return df_rms / frequency_noise(f0, Q, 1.0, tau);
}

}  // namespace casimir

#endif  // CASIMIR_MEMBRANE_HPP
