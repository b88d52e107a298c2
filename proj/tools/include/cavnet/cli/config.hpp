#ifndef CAVNET_CLI_CONFIG_HPP
#define CAVNET_CLI_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "cavnet/linear_response.hpp"
#include "cavnet/rates.hpp"
#include "cavnet/saturation.hpp"

namespace cavnet::cli {

/// Malformed or out-of-range configuration; the message starts with the
/// offending field path.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Normalization { None, EmptyPeak };
enum class RatesSource { Table, Geometry };

struct SweepSection {
    double delta_min = -30.0;
    double delta_max = 30.0;
    std::size_t points = 600;
    unsigned threads = 1;
};

struct DriveSection {
    InputPort port = InputPort::A;
    double amplitude = 1.0;
};

struct OutputSection {
    std::string directory;  // empty: $CAVNET_OUTPUT_DIR, then "."
    std::string file;       // empty: subcommand default
    Normalization normalize = Normalization::None;
    bool plot_script = false;
    double plot_scale = 1.0;  // multiplies plotted spectrum traces, never the data
    PortDetection c_detection = PortDetection::EmittedOnly;
};

struct SaturationSection {
    double geometric_factor = kDefaultGeometricFactor;
    std::vector<double> powers_w;  // explicit list; overrides the log range
    double power_min_w = 0.5e-9;
    double power_max_w = 27e-9;
    std::size_t power_points = 12;
    double delta_min = -30.0;
    double delta_max = 30.0;
    std::size_t delta_points = 241;
};

struct RunConfig {
    std::optional<PresetName> preset;
    RatesSource rates_source = RatesSource::Table;
    NetworkGeometry geometry;
    ModelRates rates;  // table (or zero) rates with rates_override applied
    AtomEnsembleParams atoms;
    double v_scaling = 1.0;
    SweepSection sweep;
    DriveSection drive;
    OutputSection output;
    SaturationSection saturation;
    SaturationSolverOptions solver;
    std::uint64_t seed = 20240917;

    /// Rates fed to the models: derived from the geometry when requested,
    /// then scaled by v_scaling.
    ModelRates effective_rates() const;
    std::vector<double> saturation_powers() const;
};

/// Preset defaults (or an empty network when no preset is given).
RunConfig default_config(std::optional<PresetName> preset);

/// Applies a JSON document on top of base. A "preset" key resets the base
/// to that preset first. Unknown keys and wrong types throw ConfigError.
RunConfig apply_config(const nlohmann::json& doc, RunConfig base);

RunConfig load_config_file(const std::filesystem::path& path, RunConfig base);

/// {"rates_override": {...}} with every rate field, suitable for re-ingestion.
nlohmann::json rates_document(const ModelRates& rates);

PresetName parse_preset(const std::string& name, const std::string& path);
InputPort parse_port(const std::string& name, const std::string& path);

}  // namespace cavnet::cli

#endif  // CAVNET_CLI_CONFIG_HPP
