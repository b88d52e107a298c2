#include "cavnet/cli/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <system_error>

#include <unistd.h>

namespace cavnet::cli {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, sep)) out.push_back(field);
    return out;
}

std::size_t column_of(const std::vector<std::string>& header, const std::string& name,
                      const std::filesystem::path& path) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
        throw OutputError(path.string() + ": header lacks column \"" + name + "\"");
    }
    return static_cast<std::size_t>(it - header.begin()) + 1;  // gnuplot columns are 1-based
}

}  // namespace

std::string format_number(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", value);
    return buf;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(const std::vector<double>& values) {
    if (values.size() != header_.size()) throw OutputError("CSV row width does not match header");
    std::string row;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) row += ',';
        row += format_number(values[i]);
    }
    rows_.push_back(std::move(row));
}

void CsvTable::add_row(std::string_view label, const std::vector<double>& values) {
    if (values.size() + 1 != header_.size()) {
        throw OutputError("CSV row width does not match header");
    }
    std::string row(label);
    for (double v : values) {
        row += ',';
        row += format_number(v);
    }
    rows_.push_back(std::move(row));
}

std::string CsvTable::str() const {
    std::string out;
    for (std::size_t i = 0; i < header_.size(); ++i) {
        if (i) out += ',';
        out += header_[i];
    }
    out += '\n';
    for (const auto& row : rows_) {
        out += row;
        out += '\n';
    }
    return out;
}

void write_atomic(const std::filesystem::path& path, std::string_view contents) {
    std::error_code ec;
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) throw OutputError(path.parent_path().string() + ": " + ec.message());
    }
    std::filesystem::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw OutputError(tmp.string() + ": cannot open for writing");
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        out.flush();
        if (!out) {
            std::filesystem::remove(tmp, ec);
            throw OutputError(tmp.string() + ": write failed");
        }
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw OutputError(path.string() + ": cannot move output into place");
    }
}

std::filesystem::path resolve_output(const std::string& file, const std::string& directory) {
    std::filesystem::path p(file);
    if (p.is_absolute()) return p;
    if (!directory.empty()) return std::filesystem::path(directory) / p;
    if (const char* env = std::getenv("CAVNET_OUTPUT_DIR"); env && *env) {
        return std::filesystem::path(env) / p;
    }
    return p;
}

std::string emit_plot_script(const std::filesystem::path& csv_path, PlotStyle style,
                             double flux_scale) {
    if (!(flux_scale > 0.0) || !std::isfinite(flux_scale)) {
        throw OutputError("plot scale must be positive and finite");
    }
    std::ifstream in(csv_path);
    if (!in) throw OutputError(csv_path.string() + ": cannot open CSV");
    std::string line;
    if (!std::getline(in, line) || line.empty()) {
        throw OutputError(csv_path.string() + ": empty CSV, no header");
    }
    const std::vector<std::string> header = split(line, ',');
    if (style == PlotStyle::Auto) {
        if (!header.empty() && header.front() == "delta") {
            style = PlotStyle::Spectrum;
        } else if (!header.empty() && header.front() == "power_w") {
            style = PlotStyle::Saturation;
        } else {
            throw OutputError(csv_path.string() + ": unrecognized CSV header \"" + line + "\"");
        }
    }
    std::string data_line;
    if (!std::getline(in, data_line) || data_line.empty()) {
        throw OutputError(csv_path.string() + ": CSV has a header but no data rows");
    }

    const std::string file = csv_path.filename().string();
    std::ostringstream s;
    s << "# gnuplot script for " << file << "\n"
      << "set datafile separator ','\n"
      << "set key top right\n"
      << "set grid\n";
    if (style == PlotStyle::Spectrum) {
        const std::size_t delta = column_of(header, "delta", csv_path);
        const std::size_t b = column_of(header, "flux_B", csv_path);
        const std::size_t c = column_of(header, "flux_C", csv_path);
        // Detuning is oscillator minus probe, so the probe axis is -delta.
        const std::string scale = flux_scale == 1.0 ? "" : "*" + format_number(flux_scale);
        const std::string suffix = flux_scale == 1.0 ? "" : " (scaled)";
        s << "set xlabel 'probe detuning (MHz)'\n"
          << "set ylabel 'output flux'\n"
          << "plot '" << file << "' using (-$" << delta << "):($" << b << scale
          << ") skip 1 with lines title 'flux_B" << suffix << "', \\\n"
          << "     '" << file << "' using (-$" << delta << "):($" << c << scale
          << ") skip 1 with lines title 'flux_C" << suffix << "'\n";
    } else {
        const std::size_t p = column_of(header, "power_w", csv_path);
        const std::size_t t = column_of(header, "norm_transmission", csv_path);
        s << "set logscale x\n"
          << "set xlabel 'probe power (nW)'\n"
          << "set ylabel 'normalized dark-mode transmission'\n"
          << "plot '" << file << "' using ($" << p << "*1e9):" << t
          << " skip 1 with linespoints title 'norm_transmission'\n";
    }
    return s.str();
}

}  // namespace cavnet::cli
