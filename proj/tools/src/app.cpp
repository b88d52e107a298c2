#include "cavnet/cli/app.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "cavnet/cli/config.hpp"
#include "cavnet/cli/output.hpp"
#include "cavnet/errors.hpp"
#include "cavnet/linear_response.hpp"
#include "cavnet/normal_modes.hpp"
#include "cavnet/rates.hpp"
#include "cavnet/saturation.hpp"
#include "cavnet/verification.hpp"

namespace cavnet::cli {

namespace {

using nlohmann::json;

// Flags shared by the computing subcommands.
struct CommonFlags {
    std::vector<std::string> configs;
    std::string preset;
    std::string out;
    std::string v_scaling;
    unsigned threads = 0;
    bool plot = false;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool with_plot) {
    cmd->add_option("-c,--config", f.configs, "JSON config file(s), applied in order");
    cmd->add_option("-p,--preset", f.preset, "fig2 or fig3");
    cmd->add_option("-o,--out", f.out, "output file ('-' for stdout)");
    cmd->add_option("--v-scaling", f.v_scaling, "coupling scale factor, or 'fitted'");
    cmd->add_option("-j,--threads", f.threads, "worker threads");
    if (with_plot) cmd->add_flag("--plot", f.plot, "also write a gnuplot script");
}

RunConfig build_config(const CommonFlags& f, PresetName fallback) {
    RunConfig c = default_config(f.preset.empty() ? fallback : parse_preset(f.preset, "--preset"));
    for (const auto& path : f.configs) c = load_config_file(path, std::move(c));
    if (!f.v_scaling.empty()) {
        json value = f.v_scaling;
        if (f.v_scaling != "fitted") {
            try {
                std::size_t used = 0;
                value = std::stod(f.v_scaling, &used);
                if (used != f.v_scaling.size()) throw std::invalid_argument(f.v_scaling);
            } catch (const std::exception&) {
                throw ConfigError("--v-scaling: expected a number or 'fitted'");
            }
        }
        c = apply_config(json{{"v_scaling", value}}, std::move(c));
    }
    if (f.threads > 0) c.sweep.threads = f.threads;
    return c;
}

std::string output_file(const CommonFlags& f, const RunConfig& c, const char* fallback) {
    if (!f.out.empty()) return f.out;
    if (!c.output.file.empty()) return c.output.file;
    return fallback;
}

// Writes contents to the resolved path (or out for "-"); returns the path.
std::filesystem::path emit(const std::string& file, const RunConfig& c, const std::string& contents,
                           std::ostream& out) {
    if (file == "-") {
        out << contents;
        return {};
    }
    const auto path = resolve_output(file, c.output.directory);
    write_atomic(path, contents);
    return path;
}

void maybe_plot(bool requested, const std::filesystem::path& csv, std::ostream& err,
                double flux_scale = 1.0) {
    if (!requested) return;
    if (csv.empty()) throw ConfigError("--plot: needs a CSV file, not stdout");
    auto script = csv;
    script.replace_extension(".gp");
    write_atomic(script, emit_plot_script(csv, PlotStyle::Auto, flux_scale));
    err << "wrote " << script.string() << "\n";
}

// --- derive-rates ----------------------------------------------------------

int cmd_derive_rates(const CommonFlags& f, double fiber_index, std::ostream& out,
                     std::ostream& err) {
    RunConfig c = build_config(f, PresetName::Fig2);
    if (!std::isnan(fiber_index)) c.geometry.fiber_index = fiber_index;
    c.geometry.validate();
    const ModelRates derived = derive_rates(c.geometry, c.rates.gamma_par, c.rates.gamma_las);

    const std::pair<const char*, std::pair<double, double>> rows[] = {
        {"kappa_1l", {derived.kappa_1l, c.rates.kappa_1l}},
        {"kappa_1r", {derived.kappa_1r, c.rates.kappa_1r}},
        {"kappa_2l", {derived.kappa_2l, c.rates.kappa_2l}},
        {"kappa_2r", {derived.kappa_2r, c.rates.kappa_2r}},
        {"kappa_1loss", {derived.kappa_1loss, c.rates.kappa_1loss}},
        {"kappa_2loss", {derived.kappa_2loss, c.rates.kappa_2loss}},
        {"kappa_b_bs", {derived.kappa_b_bs, c.rates.kappa_b_bs}},
        {"kappa_b_loss", {derived.kappa_b_loss, c.rates.kappa_b_loss}},
        {"v1", {derived.v1, c.rates.v1}},
        {"v2", {derived.v2, c.rates.v2}},
    };
    err << std::left << std::setw(14) << "rate" << std::setw(14) << "derived" << std::setw(14)
        << "reference" << "rel. dev\n";
    for (const auto& [name, v] : rows) {
        err << std::setw(14) << name << std::setw(14) << v.first << std::setw(14) << v.second;
        if (v.second != 0.0) err << (v.first - v.second) / v.second;
        err << "\n";
    }
    err << "fiber free spectral range " << fiber_free_spectral_range(c.geometry)
        << " (2 pi MHz)\n";

    const auto path = emit(output_file(f, c, "rates.json"), c,
                           rates_document(derived).dump(2) + "\n", out);
    if (!path.empty()) err << "wrote " << path.string() << "\n";
    return kSuccess;
}

// --- modes -----------------------------------------------------------------

int cmd_modes(const CommonFlags& f, const std::vector<double>& g, const std::vector<double>& v,
              const std::string& method, std::ostream& out, std::ostream& err) {
    const RunConfig c = build_config(f, PresetName::Fig2);
    const ModelRates rates = c.effective_rates();
    const double g1 = g.empty() ? c.atoms.g_eff_1 : g[0];
    const double g2 = g.empty() ? c.atoms.g_eff_2 : g[1];
    const double v1 = v.empty() ? rates.v1 : v[0];
    const double v2 = v.empty() ? rates.v2 : v[1];

    const bool analytic = method == "analytic" ||
                          (method == "auto" && g1 > 0.0 && g2 > 0.0 && v1 > 0.0 && v2 > 0.0);
    const NormalModeSet modes = analytic ? analytic_modes(g1, g2, v1, v2)
                                         : numeric_modes(g1, g2, v1, v2);

    CsvTable table({"label", "frequency", "sigma1_re", "sigma1_im", "sigma2_re", "sigma2_im",
                    "a1_re", "a1_im", "a2_re", "a2_im", "b_re", "b_im", "fiber_weight",
                    "cavity_weight"});
    for (const auto& m : modes.modes) {
        std::vector<double> row{m.frequency};
        const ModeVector vec = canonical_phase(m.vector);
        for (int k = 0; k < 5; ++k) {
            row.push_back(vec(k).real());
            row.push_back(vec(k).imag());
        }
        row.push_back(fiber_weight_fraction(vec));
        row.push_back(cavity_weight_fraction(vec));
        table.add_row(to_string(m.label), row);
    }
    const auto path = emit(output_file(f, c, "modes.csv"), c, table.str(), out);
    if (!path.empty()) err << "wrote " << path.string() << "\n";
    return kSuccess;
}

// --- spectrum --------------------------------------------------------------

struct SpectrumFlags {
    std::string input;
    bool empty = false;
    std::vector<double> g;
    std::size_t points = 0;
    std::vector<double> range;
    std::string normalize;
    std::string c_detection;
    double amplitude = 0.0;
    double plot_scale = 0.0;
};

int cmd_spectrum(const CommonFlags& f, const SpectrumFlags& s, std::ostream& out,
                 std::ostream& err) {
    RunConfig c = build_config(f, PresetName::Fig2);
    json overrides = json::object();
    if (!s.input.empty()) overrides["drive"]["port"] = s.input;
    if (s.amplitude > 0.0) overrides["drive"]["amplitude"] = s.amplitude;
    if (s.points > 0) overrides["sweep"]["points"] = s.points;
    if (!s.range.empty()) {
        overrides["sweep"]["delta_min"] = s.range[0];
        overrides["sweep"]["delta_max"] = s.range[1];
    }
    if (!s.normalize.empty()) overrides["output"]["normalize"] = s.normalize;
    if (!s.c_detection.empty()) overrides["output"]["c_detection"] = s.c_detection;
    if (s.plot_scale != 0.0) overrides["output"]["plot_scale"] = s.plot_scale;
    if (s.empty) overrides["atoms"]["empty"] = true;
    if (!s.g.empty()) {
        overrides["atoms"]["g_eff_1"] = s.g[0];
        overrides["atoms"]["g_eff_2"] = s.g[1];
    }
    c = apply_config(overrides, std::move(c));

    const ModelRates rates = c.effective_rates();
    SweepOptions opts;
    opts.input = c.drive.port;
    opts.amplitude = c.drive.amplitude;
    opts.delta_min = c.sweep.delta_min;
    opts.delta_max = c.sweep.delta_max;
    opts.points = c.sweep.points;
    opts.threads = c.sweep.threads;
    opts.c_detection = c.output.c_detection;

    Spectrum spectrum = sweep_spectrum(rates, c.atoms, opts);
    if (c.output.normalize == Normalization::EmptyPeak) {
        spectrum = normalize_to_empty_peak(std::move(spectrum), rates, opts);
    }
    CsvTable table({"delta", "flux_A", "flux_B", "flux_C"});
    for (const auto& row : spectrum.rows) {
        table.add_row({row.delta, row.flux_a, row.flux_b, row.flux_c});
    }
    const auto path = emit(output_file(f, c, "spectrum.csv"), c, table.str(), out);
    if (!path.empty()) err << "wrote " << path.string() << "\n";
    maybe_plot(f.plot || c.output.plot_script, path, err, c.output.plot_scale);
    return kSuccess;
}

// --- saturate --------------------------------------------------------------

struct SaturateFlags {
    std::vector<double> powers;
    std::size_t points = 0;
    double geometric_factor = 0.0;
    std::string spectra_file;
};

int cmd_saturate(const CommonFlags& f, const SaturateFlags& s, std::ostream& out,
                 std::ostream& err) {
    RunConfig c = build_config(f, PresetName::Fig3);
    json overrides = json::object();
    if (!s.powers.empty()) overrides["saturation"]["powers_w"] = s.powers;
    if (s.points > 0) overrides["saturation"]["delta_points"] = s.points;
    if (s.geometric_factor > 0.0) overrides["saturation"]["geometric_factor"] = s.geometric_factor;
    c = apply_config(overrides, std::move(c));

    const ModelRates rates = c.effective_rates();
    const SaturationParams params =
        SaturationParams::from(rates, c.atoms, c.saturation.geometric_factor);
    SaturationCurveOptions opts;
    opts.delta_min = c.saturation.delta_min;
    opts.delta_max = c.saturation.delta_max;
    opts.points = c.saturation.delta_points;
    opts.wavelength = c.geometry.wavelength;
    opts.solver = c.solver;
    opts.threads = c.sweep.threads;
    const std::vector<double> powers = c.saturation_powers();

    const auto curve = saturation_curve(powers, rates, params, opts);
    CsvTable table({"power_w", "y_b", "norm_transmission", "flux0", "bright_avg", "bistable"});
    for (const auto& p : curve) {
        table.add_row({p.power_w, p.y_b, p.normalized_transmission, p.flux0, p.bright_avg,
                       p.bistable ? 1.0 : 0.0});
        if (p.bistable) err << "warning: bistable response at " << p.power_w << " W\n";
    }
    const auto path = emit(output_file(f, c, "saturation.csv"), c, table.str(), out);
    if (!path.empty()) err << "wrote " << path.string() << "\n";

    if (!s.spectra_file.empty()) {
        const SaturatedSpectra spectra = saturated_spectra(powers, rates, params, opts);
        std::vector<std::string> header{"delta"};
        for (std::size_t i = 0; i < powers.size(); ++i) {
            header.push_back("flux_C_" + std::to_string(i));
        }
        CsvTable st(header);
        for (std::size_t j = 0; j < spectra.deltas.size(); ++j) {
            std::vector<double> row{spectra.deltas[j]};
            for (std::size_t i = 0; i < powers.size(); ++i) row.push_back(spectra.flux_c[i][j]);
            st.add_row(row);
        }
        const auto spath = emit(s.spectra_file, c, st.str(), out);
        if (!spath.empty()) err << "wrote " << spath.string() << "\n";
    }
    maybe_plot(f.plot || c.output.plot_script, path, err);
    return kSuccess;
}

// --- verify ----------------------------------------------------------------

struct VerifyFlags {
    bool acceptance = false;
    std::string json_file;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::size_t draws = 0;
    std::size_t mc_atoms = 0;
};

int cmd_verify(const CommonFlags& f, const VerifyFlags& v, std::ostream& out, std::ostream& err) {
    const RunConfig c = build_config(f, PresetName::Fig2);
    SuiteOptions opts;
    opts.seed = v.seed_set ? v.seed : c.seed;
    if (v.draws > 0) opts.random_draws = v.draws;
    if (v.mc_atoms > 0) opts.monte_carlo_atoms = v.mc_atoms;
    opts.threads = std::max(1u, c.sweep.threads);

    VerificationReport report = run_oracle_suite(opts);
    if (v.acceptance) {
        VerificationReport acc = run_acceptance_suite(opts);
        for (auto& check : acc.checks) {
            check.id = "criterion_" + check.id;
            report.checks.push_back(std::move(check));
        }
    }

    json summary = {{"seed", opts.seed}, {"passed", report.all_passed()},
                    {"failures", report.failures()}, {"checks", json::array()}};
    for (const auto& check : report.checks) {
        out << (check.passed ? "PASS " : "FAIL ") << std::left << std::setw(30) << check.id
            << " metric " << std::setw(13) << check.metric << " bound " << std::setw(8)
            << check.threshold << " " << check.description;
        if (!check.detail.empty()) out << " [" << check.detail << "]";
        out << "\n";
        summary["checks"].push_back({{"id", check.id},
                                     {"description", check.description},
                                     {"passed", check.passed},
                                     {"metric", check.metric},
                                     {"threshold", check.threshold},
                                     {"detail", check.detail}});
    }
    out << report.checks.size() - report.failures() << "/" << report.checks.size()
        << " checks passed\n";

    const std::string file = !v.json_file.empty() ? v.json_file
                             : !f.out.empty()     ? f.out
                                                  : "verify.json";
    const auto path = emit(file, c, summary.dump(2) + "\n", out);
    if (!path.empty()) err << "wrote " << path.string() << "\n";
    return report.all_passed() ? kSuccess : kOracleFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Coupled atom-cavity network simulator", "cavnet"};
    app.require_subcommand(1);

    CommonFlags common;

    auto* derive = app.add_subcommand("derive-rates", "rates from mirror and fiber geometry");
    add_common(derive, common, false);
    double fiber_index = std::nan("");
    derive->add_option("--fiber-index", fiber_index, "fiber refractive index");

    auto* modes = app.add_subcommand("modes", "normal-mode frequencies and vectors");
    add_common(modes, common, false);
    std::vector<double> mode_g, mode_v;
    std::string method = "auto";
    modes->add_option("--g", mode_g, "collective couplings g1 g2")->expected(2);
    modes->add_option("--v", mode_v, "fiber couplings v1 v2")->expected(2);
    modes->add_option("--method", method, "analytic, numeric or auto")
        ->check(CLI::IsMember({"analytic", "numeric", "auto"}));

    auto* spectrum = app.add_subcommand("spectrum", "linear transmission spectra");
    add_common(spectrum, common, true);
    SpectrumFlags sflags;
    spectrum->add_option("--in", sflags.input, "input port A or C");
    spectrum->add_flag("--empty", sflags.empty, "no atoms");
    spectrum->add_option("--g", sflags.g, "collective couplings g1 g2")->expected(2);
    spectrum->add_option("--points", sflags.points, "grid points");
    spectrum->add_option("--range", sflags.range, "delta_min delta_max")->expected(2);
    spectrum->add_option("--normalize", sflags.normalize, "none or empty_peak");
    spectrum->add_option("--c-detection", sflags.c_detection, "emitted or same_channel");
    spectrum->add_option("--amplitude", sflags.amplitude, "drive amplitude (2 pi MHz)");
    spectrum->add_option("--plot-scale", sflags.plot_scale,
                         "multiply plotted flux traces (e.g. 0.8); CSV unchanged");

    auto* saturate = app.add_subcommand("saturate", "dark-mode saturation curve");
    add_common(saturate, common, true);
    SaturateFlags satflags;
    saturate->add_option("--powers", satflags.powers, "input powers in W, ascending");
    saturate->add_option("--points", satflags.points, "detuning grid points");
    saturate->add_option("--geometric-factor", satflags.geometric_factor, "ensemble factor A");
    saturate->add_option("--spectra", satflags.spectra_file, "also write C->C spectra per power");

    auto* verify = app.add_subcommand("verify", "run the oracle suite");
    add_common(verify, common, false);
    VerifyFlags vflags;
    verify->add_flag("--acceptance", vflags.acceptance, "also run the acceptance criteria");
    verify->add_option("--json", vflags.json_file, "machine-readable summary path");
    auto* seed_opt = verify->add_option("--seed", vflags.seed, "random seed");
    verify->add_option("--draws", vflags.draws, "random draws per property check");
    verify->add_option("--mc-atoms", vflags.mc_atoms, "Monte-Carlo ensemble size");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kConfigError;
    }
    vflags.seed_set = seed_opt->count() > 0;

    try {
        if (derive->parsed()) return cmd_derive_rates(common, fiber_index, out, err);
        if (modes->parsed()) return cmd_modes(common, mode_g, mode_v, method, out, err);
        if (spectrum->parsed()) return cmd_spectrum(common, sflags, out, err);
        if (saturate->parsed()) return cmd_saturate(common, satflags, out, err);
        if (verify->parsed()) return cmd_verify(common, vflags, out, err);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const OutputError& e) {
        err << "output error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::invalid_argument& e) {  // InvalidGeometry, InvalidParameter
        err << "invalid input: " << e.what() << "\n";
        return kConfigError;
    } catch (const SingularSystem& e) {
        err << "solver error: " << e.what() << "\n";
        return kSolverError;
    } catch (const ConvergenceError& e) {
        err << "solver error: " << e.what() << " (residual " << e.residual() << ")\n";
        return kSolverError;
    } catch (const json::exception& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kSolverError;
    }
    return kConfigError;
}

}  // namespace cavnet::cli
