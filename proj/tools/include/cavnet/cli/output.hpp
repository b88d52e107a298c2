#ifndef CAVNET_CLI_OUTPUT_HPP
#define CAVNET_CLI_OUTPUT_HPP

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cavnet::cli {

/// Output file could not be written or a CSV could not be read back.
class OutputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Full-precision scientific notation (17 significant digits).
std::string format_number(double value);

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);

    void add_row(const std::vector<double>& values);
    /// Rows that start with a text column (e.g. a mode label).
    void add_row(std::string_view label, const std::vector<double>& values);

    const std::vector<std::string>& header() const { return header_; }
    std::size_t rows() const { return rows_.size(); }
    std::string str() const;

private:
    std::vector<std::string> header_;
    std::vector<std::string> rows_;
};

/// Writes through a temporary sibling file and renames it into place, so
/// readers never see a partial file. Creates missing parent directories.
void write_atomic(const std::filesystem::path& path, std::string_view contents);

/// Resolves an output path: absolute paths are kept, relative ones are
/// placed under directory, then $CAVNET_OUTPUT_DIR, then the working directory.
std::filesystem::path resolve_output(const std::string& file, const std::string& directory);

enum class PlotStyle { Auto, Spectrum, Saturation };

/// Gnuplot script for a CSV written by the spectrum or saturate commands.
/// flux_scale multiplies the plotted spectrum traces only (a display aid
/// for comparing against asymmetric data); the CSV is never rescaled.
/// Throws OutputError on a missing, empty or unrecognized file.
std::string emit_plot_script(const std::filesystem::path& csv_path,
                             PlotStyle style = PlotStyle::Auto, double flux_scale = 1.0);

}  // namespace cavnet::cli

#endif  // CAVNET_CLI_OUTPUT_HPP
