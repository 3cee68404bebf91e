// casimir: command-line front end for the Lifshitz, membrane and analysis code.
//
// Exit codes: 0 ok, 2 usage or invalid value, 3 unreadable/malformed input, 4 no convergence.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "casimir/analysis.hpp"
#include "casimir/ideal_tables.hpp"
#include "casimir/lifshitz.hpp"
#include "casimir/membrane.hpp"

using namespace casimir;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitInput = 3;
constexpr int kExitConvergence = 4;

// Everything a command prints: provenance, one header, rows of preformatted cells, trailing notes.
struct Report {
    std::string command;
    std::vector<std::pair<std::string, std::string>> provenance;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> notes;

    void param(const std::string& k, const std::string& v) { provenance.emplace_back(k, v); }
    void param(const std::string& k, double v) { provenance.emplace_back(k, exact_repr(v)); }

    void config_block(const std::string& text) {
        std::istringstream in(text);
        std::string line;
        while (std::getline(in, line)) {
            const auto eq = line.find(" = ");
            if (eq != std::string::npos) {
                param(line.substr(0, eq), line.substr(eq + 3));
            }
        }
    }
};

void emit(const Report& r, bool table, std::ostream& out) {
    out << "# casimir " << r.command << '\n';
    for (const auto& [k, v] : r.provenance) {
        out << "# " << k << " = " << v << '\n';
    }
    if (!table) {
        for (std::size_t i = 0; i < r.columns.size(); ++i) {
            out << (i ? "," : "") << r.columns[i];
        }
        out << '\n';
        for (const auto& row : r.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                out << (i ? "," : "") << (row[i].find(',') == std::string::npos ? row[i] : '"' + row[i] + '"');
            }
            out << '\n';
        }
    } else {
        std::vector<std::size_t> width(r.columns.size());
        for (std::size_t i = 0; i < r.columns.size(); ++i) {
            width[i] = r.columns[i].size();
            for (const auto& row : r.rows) {
                width[i] = std::max(width[i], row[i].size());
            }
        }
        auto line = [&](const std::vector<std::string>& cells) {
            std::string s;
            for (std::size_t i = 0; i < cells.size(); ++i) {
                s += cells[i];
                if (i + 1 < cells.size()) {
                    s.append(width[i] - cells[i].size() + 2, ' ');
                }
            }
            out << s << '\n';
        };
        line(r.columns);
        std::size_t total = 0;
        for (const auto w : width) {
            total += w + 2;
        }
        out << std::string(total > 2 ? total - 2 : 0, '-') << '\n';
        for (const auto& row : r.rows) {
            line(row);
        }
    }
    for (const auto& n : r.notes) {
        out << "# " << n << '\n';
    }
}

std::string num(double v) { return csv_number(v); }

// Flag-or-config-or-default resolution. Flags given on the command line always win.
class Params {
public:
    void number(CLI::App* app, const std::string& flag, const std::string& key, double& target, const std::string& help) {
        numbers_.push_back({key, &target, app->add_option(flag, target, help)->capture_default_str()});
    }
    void integer(CLI::App* app, const std::string& flag, const std::string& key, long long& target, const std::string& help) {
        integers_.push_back({key, &target, app->add_option(flag, target, help)->capture_default_str()});
    }
    void text(CLI::App* app, const std::string& flag, const std::string& key, std::string& target, const std::string& help,
              const std::vector<std::string>& choices = {}) {
        auto* opt = app->add_option(flag, target, help)->capture_default_str();
        if (!choices.empty()) {
            opt->check(CLI::IsMember(choices));
        }
        texts_.push_back({key, &target, opt, choices});
    }

    void resolve(const KeyValueConfig& cfg, Report& report) const {
        for (const auto& p : numbers_) {
            if (p.opt->count() == 0) {
                if (const auto v = cfg.number(p.key)) {
                    *p.target = *v;
                }
            }
            report.param(p.key, *p.target);
        }
        for (const auto& p : integers_) {
            if (p.opt->count() == 0) {
                if (const auto v = cfg.number(p.key)) {
                    if (*v != std::floor(*v)) {
                        throw ConfigError("key '" + p.key + "' must be an integer");
                    }
                    *p.target = static_cast<long long>(*v);
                }
            }
            report.param(p.key, std::to_string(*p.target));
        }
        for (const auto& p : texts_) {
            if (p.opt->count() == 0) {
                if (const auto v = cfg.text(p.key)) {
                    if (!p.choices.empty() && std::find(p.choices.begin(), p.choices.end(), *v) == p.choices.end()) {
                        throw ConfigError("key '" + p.key + "': unsupported value '" + *v + "'");
                    }
                    *p.target = *v;
                }
            }
            report.param(p.key, *p.target);
        }
    }

private:
    struct Number {
        std::string key;
        double* target;
        CLI::Option* opt;
    };
    struct Integer {
        std::string key;
        long long* target;
        CLI::Option* opt;
    };
    struct Text {
        std::string key;
        std::string* target;
        CLI::Option* opt;
        std::vector<std::string> choices;
    };
    std::vector<Number> numbers_;
    std::vector<Integer> integers_;
    std::vector<Text> texts_;
};

// Material overrides shared by the Lifshitz commands; unset flags fall back to the config file.
struct MaterialFlags {
    std::optional<double> Omega;
    std::optional<double> gamma0;
    std::optional<double> Tc;
    std::optional<double> RRR;

    void add(CLI::App* app) {
        app->add_option("--Omega", Omega, "plasma frequency (eV)");
        app->add_option("--gamma0", gamma0, "relaxation frequency before RRR scaling (eV)");
        app->add_option("--Tc", Tc, "critical temperature (K)");
        app->add_option("--RRR", RRR, "residual resistivity ratio");
    }

    SuperconductorParams resolve(const KeyValueConfig& cfg, Report& report) const {
        auto p = superconductor_from_config(cfg);
        if (Omega) p.Omega = *Omega;
        if (gamma0) p.gamma0 = *gamma0;
        if (Tc) p.Tc = *Tc;
        if (RRR) p.RRR = *RRR;
        p.validate();
        std::ostringstream s;
        write_config(s, p);
        report.config_block(s.str());
        return p;
    }
};

struct MembraneFlags {
    std::string which = "small";

    void add(CLI::App* app, Params& params) {
        params.text(app, "--membrane", "membrane", which, "built-in membrane the config file modifies", {"small", "big"});
    }

    MembraneSpec resolve(const KeyValueConfig& cfg, Report& report) const {
        const auto m = membrane_from_config(cfg, which == "big" ? MembraneSpec::big_gap() : MembraneSpec::small_gap());
        std::ostringstream s;
        write_config(s, m);
        std::istringstream in(s.str());
        std::string line;
        while (std::getline(in, line)) {
            const auto eq = line.find(" = ");
            if (eq != std::string::npos) {
                report.param("membrane." + line.substr(0, eq), line.substr(eq + 3));
            }
        }
        return m;
    }
};

ZeroFreqApproach approach_from(const std::string& s) {
    if (s == "drude-bcs") return ZeroFreqApproach::DrudeBCS;
    if (s == "plasma-plasma") return ZeroFreqApproach::PlasmaPlasma;
    return ZeroFreqApproach::PlasmaBCS;
}

const char* approach_name(ZeroFreqApproach a) {
    switch (a) {
        case ZeroFreqApproach::DrudeBCS: return "drude-bcs";
        case ZeroFreqApproach::PlasmaBCS: return "plasma-bcs";
        case ZeroFreqApproach::PlasmaPlasma: return "plasma-plasma";
    }
    return "?";
}

DielectricModel model_from(const std::string& s, const SuperconductorParams& p) {
    if (s == "drude") return DrudeModel{p};
    if (s == "plasma") return PlasmaModel{p};
    return BcsModel{p};
}

const std::vector<std::string> kModels{"drude", "plasma", "bcs"};
const std::vector<std::string> kApproaches{"drude-bcs", "plasma-bcs", "plasma-plasma"};

// Options common to pressure, gradient and exponent.
struct LifshitzFlags {
    double d = 190e-9;
    double T = 14.058;
    std::string model = "bcs";
    std::string approach = "plasma-bcs";
    double rel_tol = 1e-8;
    long long max_terms = 100000;
    MaterialFlags material;

    void add(CLI::App* app, Params& params) {
        params.number(app, "--d", "d_m", d, "plate separation (m)");
        params.number(app, "--T", "T_K", T, "temperature (K)");
        params.text(app, "--model", "model", model, "permittivity model", kModels);
        params.text(app, "--approach", "approach", approach, "zero-frequency TE prescription", kApproaches);
        params.number(app, "--rel-tol", "rel_tol", rel_tol, "relative tolerance of the frequency integrals");
        params.integer(app, "--max-terms", "max_matsubara", max_terms, "Matsubara term cap");
        material.add(app);
    }

    LifshitzSpec resolve(const KeyValueConfig& cfg, Report& report) const {
        const auto p = material.resolve(cfg, report);
        LifshitzSpec s{d, T, model_from(model, p), approach_from(approach), {}};
        s.quad.rel_tol = rel_tol;
        s.quad.max_matsubara = max_terms;
        s.validate();
        return s;
    }
};

struct Context {
    KeyValueConfig cfg;
    bool table = false;
};

// ---------------------------------------------------------------- commands

struct PressureCmd {
    Params params;
    LifshitzFlags lf;
    bool ideal = false;
    bool ideal_zero_T = false;
    std::optional<double> area;
    std::optional<double> radius;

    void add(CLI::App* app) {
        lf.add(app, params);
        app->add_flag("--ideal", ideal, "ideal-conductor force for --area (plate) or --radius (sphere)");
        app->add_flag("--ideal-zero-T", ideal_zero_T, "ideal-conductor pressure -pi^2 hbar c / (240 d^4)");
        app->add_option("--area", area, "plate area (m^2), with --ideal");
        app->add_option("--radius", radius, "sphere radius (m), with --ideal");
    }

    Report run(const Context& ctx) {
        Report r{"pressure"};
        if (ideal) {
            params.resolve(ctx.cfg, r);
            if (area.has_value() == radius.has_value()) {
                throw CLI::ValidationError("--ideal needs exactly one of --area or --radius");
            }
            if (area) {
                r.param("area_m2", *area);
                r.columns = {"d_m", "area_m2", "F_N"};
                r.rows.push_back({num(lf.d), num(*area), num(ideal_casimir_force(PlatePlate{*area, lf.d}))});
            } else {
                r.param("radius_m", *radius);
                r.columns = {"d_m", "radius_m", "F_N"};
                r.rows.push_back({num(lf.d), num(*radius), num(ideal_casimir_force(SpherePlate{*radius, lf.d}))});
            }
            return r;
        }
        if (ideal_zero_T) {
            params.resolve(ctx.cfg, r);
            r.columns = {"d_m", "P_Pa"};
            r.rows.push_back({num(lf.d), num(ideal_casimir_pressure(lf.d))});
            return r;
        }
        params.resolve(ctx.cfg, r);
        const auto s = lf.resolve(ctx.cfg, r);
        MatsubaraPermittivity eps(s.model, s.T);
        const auto P = casimir_pressure_detailed(s, eps);
        const auto G = casimir_pressure_gradient_detailed(s, eps);
        const double n = local_exponent(s);
        r.columns = {"d_m", "T_K", "model", "approach", "P_Pa", "Pprime_Pa_per_m", "n", "terms"};
        r.rows.push_back({num(s.d), num(s.T), lf.model, lf.approach, num(P.value), num(G.value), num(n), std::to_string(P.terms)});
        return r;
    }
};

struct GradientCmd {
    Params params;
    LifshitzFlags lf;

    void add(CLI::App* app) { lf.add(app, params); }

    Report run(const Context& ctx) {
        Report r{"gradient"};
        params.resolve(ctx.cfg, r);
        const auto s = lf.resolve(ctx.cfg, r);
        MatsubaraPermittivity eps(s.model, s.T);
        const auto G = casimir_pressure_gradient_detailed(s, eps);
        r.columns = {"d_m", "T_K", "Pprime_Pa_per_m", "static_tm", "static_te", "dynamic", "classical_Pa_per_m", "terms"};
        r.rows.push_back({num(s.d), num(s.T), num(G.value), num(G.static_tm), num(G.static_te), num(G.dynamic),
                          num(classical_terms(s.d, s.T).Pprime_cl), std::to_string(G.terms)});
        return r;
    }
};

struct ExponentCmd {
    Params params;
    LifshitzFlags lf;

    void add(CLI::App* app) { lf.add(app, params); }

    Report run(const Context& ctx) {
        Report r{"exponent"};
        params.resolve(ctx.cfg, r);
        const auto s = lf.resolve(ctx.cfg, r);
        r.columns = {"d_m", "T_K", "n"};
        r.rows.push_back({num(s.d), num(s.T), num(local_exponent(s))});
        return r;
    }
};

struct JumpCmd {
    Params params;
    MaterialFlags material;
    MembraneFlags membrane;
    double d = 190e-9;
    double dT = 0.1;
    double f0 = 352.8e3;
    double rel_tol = 1e-8;
    std::string approach = "plasma-bcs";
    bool all = false;

    void add(CLI::App* app) {
        params.number(app, "--d", "d_m", d, "plate separation (m)");
        params.number(app, "--dT", "dT_K", dT, "offset from Tc on each side (K)");
        params.number(app, "--f0", "f0_Hz", f0, "resonance frequency used for the predicted shift (Hz)");
        params.number(app, "--rel-tol", "rel_tol", rel_tol, "relative tolerance of the frequency integrals");
        params.text(app, "--approach", "approach", approach, "zero-frequency TE prescription", kApproaches);
        app->add_flag("--all", all, "all three prescriptions");
        material.add(app);
        membrane.add(app, params);
    }

    Report run(const Context& ctx) {
        Report r{"jump"};
        const auto p = material.resolve(ctx.cfg, r);
        params.resolve(ctx.cfg, r);
        const auto m = membrane.resolve(ctx.cfg, r);
        r.param("all", all ? "true" : "false");
        QuadratureConfig qc;
        qc.rel_tol = rel_tol;
        r.columns = {"approach", "d_m", "dT_K", "dPprime_Pa_per_m", "Pprime_above_Pa_per_m", "Pprime_below_Pa_per_m", "df_Hz"};
        std::vector<ZeroFreqApproach> list;
        if (all) {
            list = {ZeroFreqApproach::PlasmaBCS, ZeroFreqApproach::PlasmaPlasma, ZeroFreqApproach::DrudeBCS};
        } else {
            list = {approach_from(approach)};
        }
        for (const auto a : list) {
            const auto j = tc_jump_detailed(d, dT, a, p, qc);
            r.rows.push_back({approach_name(a), num(d), num(dT), num(j.value), num(j.above), num(j.below),
                              num(predicted_frequency_jump(j.value, m, f0))});
        }
        return r;
    }
};

struct SweepCmd {
    Params params;
    MembraneFlags membrane;
    std::string small_path;
    std::vector<std::string> big_paths;
    std::string factors_path;
    double lo = 12.0;
    double hi = 14.0;
    double Tc = 14.2;
    double width = 0.5;
    std::string rule = "additive";

    void add(CLI::App* app) {
        app->add_option("--small", small_path, "small-gap sweep CSV (T_K,f_Hz[,sigma_f_Hz][,Q])")->required();
        app->add_option("--big", big_paths, "big-gap sweep CSV; repeat to merge runs")->required();
        app->add_option("--factors", factors_path, "FEM conversion factors (key = value file with an explicit basis)");
        params.number(app, "--window-lo", "window_lo_K", lo, "lower edge of the calibration window (K)");
        params.number(app, "--window-hi", "window_hi_K", hi, "upper edge of the calibration window (K), at most Tc");
        params.number(app, "--Tc", "Tc_K", Tc, "transition temperature of the jump (K)");
        params.number(app, "--width", "jump_width_K", width, "averaging width on each side of Tc (K)");
        params.text(app, "--error-rule", "error_rule", rule, "combination of error bars", {"additive", "quadrature"});
        membrane.add(app, params);
    }

    Report run(const Context& ctx) {
        Report r{"sweep"};
        params.resolve(ctx.cfg, r);
        const auto m = membrane.resolve(ctx.cfg, r);
        const auto factors = factors_path.empty() ? ConversionFactors::small_gap_fem()
                                                  : conversion_from_config(KeyValueConfig::load(factors_path));
        r.param("small", small_path);
        for (const auto& b : big_paths) {
            r.param("big", b);
        }
        r.param("factors.basis", factors.basis == FrequencyBasis::LinearSquared ? "linear" : "angular");
        r.param("factors.force_N", factors.force_per_w2);
        r.param("factors.pressure_Pa", factors.pressure_per_w2);
        r.param("factors.deflection_m", factors.deflection_per_w2);

        const auto small_records = read_sweep_csv(small_path);
        std::vector<SweepRecord> big_records;
        for (const auto& b : big_paths) {
            big_records = merge_sweeps(std::move(big_records), read_sweep_csv(b));
        }
        if (small_records.empty() || big_records.empty()) {
            throw InputError("sweep files contain no data rows");
        }
        const auto small = calibrate_thermal(small_records, {lo, hi}, Tc);
        const auto big = calibrate_thermal(big_records, {lo, hi}, Tc);
        const auto diff = differential_subtract(small, big, rule == "quadrature" ? ErrorRule::Quadrature : ErrorRule::Additive);

        auto shift = [&](double dw2) {
            return factors.basis == FrequencyBasis::LinearSquared ? convert_fem(to_linear(AngularShift{dw2}), factors)
                                                                  : convert_fem(AngularShift{dw2}, factors);
        };
        r.columns = {"T_K", "dw2_small", "dw2_diff", "sigma_dw2", "dPprime_Pa_per_m", "dF_N", "dP_Pa", "dz_m"};
        std::size_t k = 0;
        for (const auto& x : diff) {
            while (small.records[k].T != x.T) {
                ++k;
            }
            const auto s = shift(x.dw2);
            r.rows.push_back({num(x.T), num(small.records[k].dw2), num(x.dw2), num(x.sigma_dw2),
                              num(gradient_from_dw2(x.dw2, m)), num(s.force), num(s.pressure), num(s.deflection)});
        }
        const auto j = estimate_jump(diff, Tc, width);
        const auto s = shift(j.dw2);
        const auto e = shift(j.sigma);
        r.notes.push_back("jump dw2 = " + num(j.dw2) + " +/- " + num(j.sigma) + " (rad/s)^2 from " + std::to_string(j.n_below) +
                          " + " + std::to_string(j.n_above) + " points");
        r.notes.push_back("jump dPprime = " + num(gradient_from_dw2(j.dw2, m)) + " +/- " +
                          num(std::abs(gradient_from_dw2(j.sigma, m))) + " Pa/m");
        r.notes.push_back("jump dF = " + num(s.force) + " +/- " + num(std::abs(e.force)) + " N");
        r.notes.push_back("jump dP = " + num(s.pressure) + " +/- " + num(std::abs(e.pressure)) + " Pa");
        r.notes.push_back("jump dz = " + num(s.deflection) + " +/- " + num(std::abs(e.deflection)) + " m");
        return r;
    }
};

struct GenerateSweepCmd {
    Params params;
    MembraneFlags membrane;
    long long seed = 1;
    double f0 = 352.8e3;
    double slope = 2.0e9;
    double jump_gradient = 0.0;
    double Tc = 14.2;
    double sigma_f = 4.7e-3;
    double lo = 12.0;
    double hi = 16.0;
    double step = 0.02;

    void add(CLI::App* app) {
        params.integer(app, "--seed", "seed", seed, "RNG seed");
        params.number(app, "--f0", "f0_Hz", f0, "frequency at T = 0 of the linear baseline (Hz)");
        params.number(app, "--slope", "slope_w2_per_K", slope, "baseline slope of omega^2 ((rad/s)^2/K)");
        params.number(app, "--jump-gradient", "jump_Pa_per_m", jump_gradient, "gradient jump above Tc (Pa/m)");
        params.number(app, "--Tc", "Tc_K", Tc, "transition temperature (K)");
        params.number(app, "--sigma-f", "sigma_f_Hz", sigma_f, "Gaussian frequency noise (Hz)");
        params.number(app, "--T-lo", "T_lo_K", lo, "first temperature (K)");
        params.number(app, "--T-hi", "T_hi_K", hi, "last temperature (K)");
        params.number(app, "--step", "T_step_K", step, "temperature step (K)");
        membrane.add(app, params);
    }

    Report run(const Context& ctx) {
        Report r{"generate-sweep"};
        params.resolve(ctx.cfg, r);
        const auto m = membrane.resolve(ctx.cfg, r);
        if (seed < 0) {
            throw DomainError("seed must be non-negative");
        }
        const double w0 = 2.0 * std::numbers::pi * f0;
        const SweepTruth truth{slope, w0 * w0, dw2_from_gradient(jump_gradient, m), Tc, sigma_f, temperature_grid(lo, hi, step)};
        r.param("jump_w2", truth.jump + 0.0);  // no "-0" in the header
        r.columns = {"T_K", "f_Hz", "sigma_f_Hz"};
        for (const auto& x : generate_sweep(truth, static_cast<std::uint64_t>(seed))) {
            r.rows.push_back({exact_repr(x.T), exact_repr(x.f), exact_repr(x.sigma_f.value_or(0.0))});
        }
        return r;
    }
};

struct LcpdCmd {
    Params params;
    MembraneFlags membrane;
    std::string input;

    void add(CLI::App* app) {
        app->add_option("--input", input, "CSV with header V_volt,f_Hz")->required();
        membrane.add(app, params);
    }

    Report run(const Context& ctx) {
        Report r{"lcpd-fit"};
        params.resolve(ctx.cfg, r);
        const auto m = membrane.resolve(ctx.cfg, r);
        r.param("input", input);
        const auto fit = lcpd_fit(read_xy_csv(input, "V_volt", "f_Hz"), m);
        r.columns = {"V0_V", "sigma_V0_V", "sigma_Pa", "rho_kgm3", "f_apex_Hz"};
        r.rows.push_back({num(fit.V0), num(fit.sigma_V0), num(fit.sigma), num(fit.rho), num(fit.f_apex)});
        return r;
    }
};

struct DynesCmd {
    Params params;
    std::string input;
    double T = 4.45;

    void add(CLI::App* app) {
        app->add_option("--input", input, "CSV with header V_volt,G_arb")->required();
        params.number(app, "--T", "T_K", T, "temperature of the measurement (K)");
    }

    Report run(const Context& ctx) {
        Report r{"dynes-fit"};
        params.resolve(ctx.cfg, r);
        r.param("input", input);
        const auto fit = dynes_fit(read_xy_csv(input, "V_volt", "G_arb"), T);
        r.columns = {"Delta_eV", "gamma_eV", "A", "T_K", "rms_residual", "iterations"};
        r.rows.push_back({num(fit.params.Delta), num(fit.params.gamma), num(fit.params.A), num(T), num(fit.rms_residual),
                          std::to_string(fit.iterations)});
        return r;
    }
};

struct TablesCmd {
    Report run(const Context&) {
        Report r{"tables"};
        r.param("tolerance", 5e-3);
        r.columns = {"geometry", "experiment", "size_m", "d_m", "F_quoted_N", "F_ideal_N", "deviation", "status"};
        auto add = [&](const char* kind, const std::vector<ExperimentRow>& rows, double q_avg, double q_med) {
            const auto t = recompute_table(rows);
            for (const auto& x : t.rows) {
                const double size = std::holds_alternative<PlatePlate>(x.row.geometry) ? std::get<PlatePlate>(x.row.geometry).area
                                                                                       : std::get<SpherePlate>(x.row.geometry).R;
                const double d = std::holds_alternative<PlatePlate>(x.row.geometry) ? std::get<PlatePlate>(x.row.geometry).d
                                                                                    : std::get<SpherePlate>(x.row.geometry).d;
                r.rows.push_back({kind, x.row.label, num(size), num(d), num(x.row.quoted_force), num(x.force), num(x.deviation),
                                  std::abs(x.deviation) <= 5e-3 ? "ok" : "DEVIATES"});
            }
            r.notes.push_back(std::string(kind) + " average " + num(t.average) + " N (quoted " + num(q_avg) + "), median " +
                              num(t.median) + " N (quoted " + num(q_med) + ")");
        };
        add("plate-plate", plate_plate_experiments(), kPlatePlateQuotedAverage, kPlatePlateQuotedMedian);
        add("sphere-plate", sphere_plate_experiments(), kSpherePlateQuotedAverage, kSpherePlateQuotedMedian);
        r.notes.push_back("plate-plate summary excludes the 709 um NbTiN membrane row; size is area (plate) or radius (sphere)");
        return r;
    }
};

struct NoiseCmd {
    Params params;
    double f0 = 352.8e3;
    double Q = 7.2e5;
    double tau = 0.2;
    double ns = 0.0215;
    std::optional<double> df;

    void add(CLI::App* app) {
        params.number(app, "--f0", "f0_Hz", f0, "resonance frequency (Hz)");
        params.number(app, "--Q", "Q", Q, "quality factor");
        params.number(app, "--tau", "tau_s", tau, "integration time (s)");
        params.number(app, "--ns", "noise_to_signal", ns, "amplitude noise-to-signal ratio");
        app->add_option("--df", df, "target RMS frequency noise (Hz); solves for the noise-to-signal ratio instead");
    }

    Report run(const Context& ctx) {
        Report r{"noise"};
        params.resolve(ctx.cfg, r);
        if (df) {
            r.param("df_Hz", *df);
            ns = noise_to_signal_for(f0, Q, *df, tau);
        }
        r.columns = {"f0_Hz", "Q", "tau_s", "noise_to_signal", "df_rms_Hz"};
        r.rows.push_back({num(f0), num(Q), num(tau), num(ns), num(frequency_noise(f0, Q, ns, tau))});
        return r;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Casimir pressure between superconducting plates, membrane conversions and the calibration pipeline"};
    app.require_subcommand(1);
    std::string config_path;
    std::string format = "csv";
    app.add_option("--config", config_path, "key = value file; flags override its values")->envname("CASIMIR_CONFIG");
    app.add_option("--format", format, "output format")->check(CLI::IsMember({"csv", "table"}))->capture_default_str();

    PressureCmd pressure;
    GradientCmd gradient;
    ExponentCmd exponent;
    JumpCmd jump;
    SweepCmd sweep;
    GenerateSweepCmd generate;
    LcpdCmd lcpd;
    DynesCmd dynes;
    TablesCmd tables;
    NoiseCmd noise;

    auto* c_pressure = app.add_subcommand("pressure", "Casimir pressure P (Pa), gradient (Pa/m) and local exponent");
    pressure.add(c_pressure);
    auto* c_gradient = app.add_subcommand("gradient", "pressure gradient with its Matsubara breakdown (Pa/m)");
    gradient.add(c_gradient);
    auto* c_exponent = app.add_subcommand("exponent", "local power-law exponent n = -dln|P|/dln d");
    exponent.add(c_exponent);
    auto* c_jump = app.add_subcommand("jump", "gradient change across Tc and the predicted frequency shift");
    jump.add(c_jump);
    auto* c_sweep = app.add_subcommand("sweep", "calibrate, subtract and convert two temperature sweeps");
    sweep.add(c_sweep);
    auto* c_generate = app.add_subcommand("generate-sweep", "synthetic sweep with a step above Tc");
    generate.add(c_generate);
    auto* c_lcpd = app.add_subcommand("lcpd-fit", "contact potential, stress and density from f(V_bg)");
    lcpd.add(c_lcpd);
    auto* c_dynes = app.add_subcommand("dynes-fit", "gap and broadening from a tunnelling spectrum");
    dynes.add(c_dynes);
    auto* c_tables = app.add_subcommand("tables", "ideal-conductor forces of published experiments, recomputed");
    auto* c_noise = app.add_subcommand("noise", "frequency noise of a phase-tracked resonator");
    noise.add(c_noise);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        Context ctx;
        ctx.table = format == "table";
        if (!config_path.empty()) {
            ctx.cfg = KeyValueConfig::load(config_path);
        }
        Report report;
        if (c_pressure->parsed()) report = pressure.run(ctx);
        else if (c_gradient->parsed()) report = gradient.run(ctx);
        else if (c_exponent->parsed()) report = exponent.run(ctx);
        else if (c_jump->parsed()) report = jump.run(ctx);
        else if (c_sweep->parsed()) report = sweep.run(ctx);
        else if (c_generate->parsed()) report = generate.run(ctx);
        else if (c_lcpd->parsed()) report = lcpd.run(ctx);
        else if (c_dynes->parsed()) report = dynes.run(ctx);
        else if (c_tables->parsed()) report = tables.run(ctx);
        else if (c_noise->parsed()) report = noise.run(ctx);
        if (!config_path.empty()) {
            report.provenance.insert(report.provenance.begin(), {"config", config_path});
        }
        report.provenance.insert(report.provenance.begin(), {"format", format});
        emit(report, ctx.table, std::cout);
        return 0;
    } catch (const ConvergenceError& e) {
        std::cerr << "casimir: no convergence: " << e.what() << "\n  partial sum " << exact_repr(e.partial_sum)
                  << ", last relative term " << exact_repr(e.achieved_tol) << ", terms " << e.terms_used << '\n';
        return kExitConvergence;
    } catch (const InputError& e) {
        std::cerr << "casimir: input error: " << e.what() << '\n';
        return kExitInput;
    } catch (const ConfigError& e) {
        std::cerr << "casimir: config error: " << e.what() << '\n';
        return kExitInput;
    } catch (const FitError& e) {
        std::cerr << "casimir: fit failed: " << e.what() << '\n';
        return kExitInput;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "casimir: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DomainError& e) {
        std::cerr << "casimir: invalid value: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "casimir: " << e.what() << '\n';
        return 1;
    }
}
