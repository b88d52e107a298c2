#include "cavnet/cli/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "cavnet/errors.hpp"

namespace cavnet::cli {

namespace {

using nlohmann::json;

std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

void require_object(const json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigError((path.empty() ? "config" : path) + ": expected an object");
}

void reject_unknown(const json& j, const std::string& path,
                    std::initializer_list<const char*> allowed) {
    require_object(j, path);
    for (const auto& [key, value] : j.items()) {
        const bool known = std::any_of(allowed.begin(), allowed.end(),
                                       [&](const char* a) { return key == a; });
        if (!known) throw ConfigError(join(path, key) + ": unknown key");
    }
}

double number_at(const json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError(path + ": expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ConfigError(path + ": expected a finite number");
    return v;
}

void read_number(const json& obj, const char* key, const std::string& path, double& out) {
    if (auto it = obj.find(key); it != obj.end()) out = number_at(*it, join(path, key));
}

template <class Int>
void read_count(const json& obj, const char* key, const std::string& path, Int& out) {
    if (auto it = obj.find(key); it != obj.end()) {
        if (!it->is_number_integer() || it->get<long long>() < 0) {
            throw ConfigError(join(path, key) + ": expected a non-negative integer");
        }
        out = static_cast<Int>(it->get<unsigned long long>());
    }
}

void read_bool(const json& obj, const char* key, const std::string& path, bool& out) {
    if (auto it = obj.find(key); it != obj.end()) {
        if (!it->is_boolean()) throw ConfigError(join(path, key) + ": expected true or false");
        out = it->get<bool>();
    }
}

std::string string_at(const json& j, const std::string& path) {
    if (!j.is_string()) throw ConfigError(path + ": expected a string");
    return j.get<std::string>();
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

void apply_geometry(const json& j, NetworkGeometry& g) {
    const std::string path = "geometry";
    reject_unknown(j, path,
                   {"cavity1_length", "cavity2_length", "fiber_length", "reflectance", "loss1",
                    "loss2", "loss_fiber", "bs_tap", "fiber_index", "wavelength"});
    read_number(j, "cavity1_length", path, g.cavity1_length);
    read_number(j, "cavity2_length", path, g.cavity2_length);
    read_number(j, "fiber_length", path, g.fiber_length);
    read_number(j, "loss1", path, g.loss1);
    read_number(j, "loss2", path, g.loss2);
    read_number(j, "loss_fiber", path, g.loss_fiber);
    read_number(j, "bs_tap", path, g.bs_tap);
    read_number(j, "fiber_index", path, g.fiber_index);
    read_number(j, "wavelength", path, g.wavelength);
    if (auto it = j.find("reflectance"); it != j.end()) {
        const std::string rpath = path + ".reflectance";
        if (!it->is_array() || it->size() != 4) {
            throw ConfigError(rpath + ": expected an array of 4 reflectances");
        }
        for (std::size_t i = 0; i < 4; ++i) {
            const std::string ipath = rpath + "[" + std::to_string(i) + "]";
            const double r = number_at((*it)[i], ipath);
            if (!(r >= 0.0 && r < 1.0)) {
                std::ostringstream msg;
                msg << ipath << ": reflectance " << r << " must lie in [0, 1)";
                throw ConfigError(msg.str());
            }
            g.reflectance[i] = r;
        }
    }
    try {
        g.validate();
    } catch (const InvalidGeometry& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

void apply_rates(const json& j, ModelRates& r) {
    const std::string path = "rates_override";
    reject_unknown(j, path,
                   {"kappa_1l", "kappa_1r", "kappa_2l", "kappa_2r", "kappa_1loss", "kappa_2loss",
                    "kappa_b_bs", "kappa_b_loss", "v1", "v2", "gamma_par", "gamma_las"});
    read_number(j, "kappa_1l", path, r.kappa_1l);
    read_number(j, "kappa_1r", path, r.kappa_1r);
    read_number(j, "kappa_2l", path, r.kappa_2l);
    read_number(j, "kappa_2r", path, r.kappa_2r);
    read_number(j, "kappa_1loss", path, r.kappa_1loss);
    read_number(j, "kappa_2loss", path, r.kappa_2loss);
    read_number(j, "kappa_b_bs", path, r.kappa_b_bs);
    read_number(j, "kappa_b_loss", path, r.kappa_b_loss);
    read_number(j, "v1", path, r.v1);
    read_number(j, "v2", path, r.v2);
    read_number(j, "gamma_par", path, r.gamma_par);
    read_number(j, "gamma_las", path, r.gamma_las);
    try {
        r.validate();
    } catch (const InvalidParameter& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

void apply_atoms(const json& j, AtomEnsembleParams& a) {
    const std::string path = "atoms";
    reject_unknown(j, path,
                   {"g_eff_1", "g_eff_2", "g0_1", "g0_2", "n_eff_1", "n_eff_2", "n_sat_1",
                    "n_sat_2", "empty"});
    bool empty = false;
    read_bool(j, "empty", path, empty);
    if (empty) a = AtomEnsembleParams{};
    read_number(j, "g_eff_1", path, a.g_eff_1);
    read_number(j, "g_eff_2", path, a.g_eff_2);
    read_number(j, "g0_1", path, a.g0_1);
    read_number(j, "g0_2", path, a.g0_2);
    read_number(j, "n_eff_1", path, a.n_eff_1);
    read_number(j, "n_eff_2", path, a.n_eff_2);
    read_number(j, "n_sat_1", path, a.n_sat_1);
    read_number(j, "n_sat_2", path, a.n_sat_2);
    const std::pair<double, const char*> fields[] = {
        {a.g_eff_1, "g_eff_1"}, {a.g_eff_2, "g_eff_2"}, {a.g0_1, "g0_1"},
        {a.g0_2, "g0_2"},       {a.n_eff_1, "n_eff_1"}, {a.n_eff_2, "n_eff_2"},
        {a.n_sat_1, "n_sat_1"}, {a.n_sat_2, "n_sat_2"}};
    for (const auto& [value, name] : fields) {
        if (value < 0.0) throw ConfigError(join(path, name) + ": must be >= 0");
    }
}

void apply_sweep(const json& j, SweepSection& s) {
    const std::string path = "sweep";
    reject_unknown(j, path, {"delta_min", "delta_max", "points", "threads"});
    read_number(j, "delta_min", path, s.delta_min);
    read_number(j, "delta_max", path, s.delta_max);
    read_count(j, "points", path, s.points);
    read_count(j, "threads", path, s.threads);
    if (!(s.delta_min < s.delta_max)) throw ConfigError(path + ": delta_min must be < delta_max");
    if (s.points < 2) throw ConfigError(path + ".points: need at least 2");
    if (s.threads < 1) throw ConfigError(path + ".threads: need at least 1");
}

void apply_drive(const json& j, DriveSection& d) {
    const std::string path = "drive";
    reject_unknown(j, path, {"port", "amplitude"});
    if (auto it = j.find("port"); it != j.end()) {
        d.port = parse_port(string_at(*it, path + ".port"), path + ".port");
    }
    read_number(j, "amplitude", path, d.amplitude);
    if (!(d.amplitude > 0.0)) throw ConfigError(path + ".amplitude: must be positive");
}

void apply_output(const json& j, OutputSection& o) {
    const std::string path = "output";
    reject_unknown(j, path,
                   {"directory", "file", "normalize", "plot_script", "plot_scale", "c_detection"});
    if (auto it = j.find("directory"); it != j.end()) o.directory = string_at(*it, path + ".directory");
    if (auto it = j.find("file"); it != j.end()) o.file = string_at(*it, path + ".file");
    if (auto it = j.find("normalize"); it != j.end()) {
        const std::string v = lower(string_at(*it, path + ".normalize"));
        if (v == "none") {
            o.normalize = Normalization::None;
        } else if (v == "empty_peak") {
            o.normalize = Normalization::EmptyPeak;
        } else {
            throw ConfigError(path + ".normalize: expected \"none\" or \"empty_peak\"");
        }
    }
    if (auto it = j.find("c_detection"); it != j.end()) {
        const std::string v = lower(string_at(*it, path + ".c_detection"));
        if (v == "emitted") {
            o.c_detection = PortDetection::EmittedOnly;
        } else if (v == "same_channel") {
            o.c_detection = PortDetection::SameChannel;
        } else {
            throw ConfigError(path + ".c_detection: expected \"emitted\" or \"same_channel\"");
        }
    }
    read_bool(j, "plot_script", path, o.plot_script);
    read_number(j, "plot_scale", path, o.plot_scale);
    if (!(o.plot_scale > 0.0)) {
        throw ConfigError(path + ".plot_scale: must be positive");
    }
}

void apply_saturation(const json& j, SaturationSection& s) {
    const std::string path = "saturation";
    reject_unknown(j, path,
                   {"geometric_factor", "powers_w", "power_min_w", "power_max_w", "power_points",
                    "delta_min", "delta_max", "delta_points"});
    read_number(j, "geometric_factor", path, s.geometric_factor);
    read_number(j, "power_min_w", path, s.power_min_w);
    read_number(j, "power_max_w", path, s.power_max_w);
    read_count(j, "power_points", path, s.power_points);
    read_number(j, "delta_min", path, s.delta_min);
    read_number(j, "delta_max", path, s.delta_max);
    read_count(j, "delta_points", path, s.delta_points);
    if (auto it = j.find("powers_w"); it != j.end()) {
        if (!it->is_array() || it->empty()) {
            throw ConfigError(path + ".powers_w: expected a non-empty array");
        }
        s.powers_w.clear();
        for (std::size_t i = 0; i < it->size(); ++i) {
            const std::string ipath = path + ".powers_w[" + std::to_string(i) + "]";
            const double p = number_at((*it)[i], ipath);
            if (!(p > 0.0)) throw ConfigError(ipath + ": must be positive");
            if (!s.powers_w.empty() && p <= s.powers_w.back()) {
                throw ConfigError(ipath + ": powers must increase");
            }
            s.powers_w.push_back(p);
        }
    }
    if (!(s.geometric_factor > 0.0 && s.geometric_factor < 1.0)) {
        throw ConfigError(path + ".geometric_factor: must lie in (0, 1)");
    }
    if (!(s.power_min_w > 0.0 && s.power_min_w < s.power_max_w)) {
        throw ConfigError(path + ": need 0 < power_min_w < power_max_w");
    }
    if (s.power_points < 2) throw ConfigError(path + ".power_points: need at least 2");
    if (!(s.delta_min < 0.0 && s.delta_max > 0.0)) {
        throw ConfigError(path + ": the detuning range must straddle 0");
    }
    if (s.delta_points < 3) throw ConfigError(path + ".delta_points: need at least 3");
}

void apply_solver(const json& j, SaturationSolverOptions& s) {
    const std::string path = "solver";
    reject_unknown(j, path,
                   {"tolerance", "max_newton_iterations", "max_continuation_steps",
                    "start_fraction", "max_growth", "check_bistability"});
    read_number(j, "tolerance", path, s.tolerance);
    read_count(j, "max_newton_iterations", path, s.max_newton_iterations);
    read_count(j, "max_continuation_steps", path, s.max_continuation_steps);
    read_number(j, "start_fraction", path, s.start_fraction);
    read_number(j, "max_growth", path, s.max_growth);
    read_bool(j, "check_bistability", path, s.check_bistability);
    if (!(s.tolerance > 0.0)) throw ConfigError(path + ".tolerance: must be positive");
    if (!(s.start_fraction > 0.0 && s.start_fraction <= 1.0)) {
        throw ConfigError(path + ".start_fraction: must lie in (0, 1]");
    }
    if (!(s.max_growth > 1.0)) throw ConfigError(path + ".max_growth: must exceed 1");
}

}  // namespace

PresetName parse_preset(const std::string& name, const std::string& path) {
    try {
        return parse_preset_name(name);
    } catch (const InvalidParameter&) {
        throw ConfigError(path + ": unknown preset \"" + name + "\" (expected fig2 or fig3)");
    }
}

InputPort parse_port(const std::string& name, const std::string& path) {
    const std::string v = lower(name);
    if (v == "a") return InputPort::A;
    if (v == "c") return InputPort::C;
    throw ConfigError(path + ": input port must be A or C, got \"" + name + "\"");
}

ModelRates RunConfig::effective_rates() const {
    ModelRates base = rates;
    if (rates_source == RatesSource::Geometry) {
        base = derive_rates(geometry, rates.gamma_par, rates.gamma_las);
    }
    return apply_v_scaling(base, v_scaling);
}

std::vector<double> RunConfig::saturation_powers() const {
    if (!saturation.powers_w.empty()) return saturation.powers_w;
    std::vector<double> out(saturation.power_points);
    const double ratio = saturation.power_max_w / saturation.power_min_w;
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = saturation.power_min_w *
                 std::pow(ratio, static_cast<double>(i) / static_cast<double>(out.size() - 1));
    }
    out.back() = saturation.power_max_w;
    return out;
}

RunConfig default_config(std::optional<PresetName> name) {
    RunConfig c;
    c.preset = name;
    if (name) {
        const Preset p = preset(*name);
        c.geometry = p.geometry;
        c.rates = p.rates;
        c.atoms = p.atoms;
    }
    return c;
}

RunConfig apply_config(const json& doc, RunConfig base) {
    reject_unknown(doc, "",
                   {"preset", "rates_source", "geometry", "rates_override", "atoms", "v_scaling",
                    "sweep", "drive", "output", "saturation", "solver", "seed"});
    RunConfig c = std::move(base);
    if (auto it = doc.find("preset"); it != doc.end()) {
        const RunConfig fresh = default_config(parse_preset(string_at(*it, "preset"), "preset"));
        c.preset = fresh.preset;
        c.geometry = fresh.geometry;
        c.rates = fresh.rates;
        c.atoms = fresh.atoms;
    }
    if (auto it = doc.find("geometry"); it != doc.end()) {
        apply_geometry(*it, c.geometry);
        c.rates_source = RatesSource::Geometry;
    }
    if (auto it = doc.find("rates_source"); it != doc.end()) {
        const std::string v = lower(string_at(*it, "rates_source"));
        if (v == "table") {
            c.rates_source = RatesSource::Table;
        } else if (v == "geometry") {
            c.rates_source = RatesSource::Geometry;
        } else {
            throw ConfigError("rates_source: expected \"table\" or \"geometry\"");
        }
    }
    if (auto it = doc.find("rates_override"); it != doc.end()) {
        apply_rates(*it, c.rates);
        c.rates_source = RatesSource::Table;
    }
    if (auto it = doc.find("atoms"); it != doc.end()) apply_atoms(*it, c.atoms);
    if (auto it = doc.find("v_scaling"); it != doc.end()) {
        if (it->is_string() && lower(it->get<std::string>()) == "fitted") {
            if (!c.preset) throw ConfigError("v_scaling: \"fitted\" needs a preset");
            c.v_scaling = preset(*c.preset).fitted_v_scaling;
        } else {
            c.v_scaling = number_at(*it, "v_scaling");
        }
        if (!(c.v_scaling > 0.0)) throw ConfigError("v_scaling: must be positive");
    }
    if (auto it = doc.find("sweep"); it != doc.end()) apply_sweep(*it, c.sweep);
    if (auto it = doc.find("drive"); it != doc.end()) apply_drive(*it, c.drive);
    if (auto it = doc.find("output"); it != doc.end()) apply_output(*it, c.output);
    if (auto it = doc.find("saturation"); it != doc.end()) apply_saturation(*it, c.saturation);
    if (auto it = doc.find("solver"); it != doc.end()) apply_solver(*it, c.solver);
    if (auto it = doc.find("seed"); it != doc.end()) {
        if (!it->is_number_unsigned()) throw ConfigError("seed: expected a non-negative integer");
        c.seed = it->get<std::uint64_t>();
    }
    return c;
}

RunConfig load_config_file(const std::filesystem::path& path, RunConfig base) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path.string() + ": cannot open config file");
    json doc;
    try {
        doc = json::parse(in, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return apply_config(doc, std::move(base));
}

nlohmann::json rates_document(const ModelRates& r) {
    json rates = {
        {"kappa_1l", r.kappa_1l},       {"kappa_1r", r.kappa_1r},
        {"kappa_2l", r.kappa_2l},       {"kappa_2r", r.kappa_2r},
        {"kappa_1loss", r.kappa_1loss}, {"kappa_2loss", r.kappa_2loss},
        {"kappa_b_bs", r.kappa_b_bs},   {"kappa_b_loss", r.kappa_b_loss},
        {"v1", r.v1},                   {"v2", r.v2},
        {"gamma_par", r.gamma_par},     {"gamma_las", r.gamma_las},
    };
    return json{{"rates_override", rates}};
}

}  // namespace cavnet::cli
