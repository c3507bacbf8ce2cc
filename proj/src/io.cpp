#include "comove/io.hpp"

#include "comove/errors.hpp"

#include <json.hpp>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace comove {

using nlohmann::json;

std::string format_double(double value) {
    char buf[40];
    const auto result = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, result.ptr);
}

void write_text_file(const std::string& path, const std::string& text) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) {
        std::filesystem::create_directories(p.parent_path());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << text;
    if (!out) throw DataError("write failed for '" + path + "'");
}

namespace {

std::string offset_text(int minutes) {
    if (minutes == 0) return "Z";
    char buf[16];
    const int a = std::abs(minutes);
    std::snprintf(buf, sizeof(buf), "%c%02d:%02d", minutes < 0 ? '-' : '+', a / 60, a % 60);
    return std::string(buf);
}

std::vector<std::string> split_fields(const std::string& line, char delim = ',') {
    std::vector<std::string> out;
    std::string token;
    for (char ch : line) {
        if (ch == delim) {
            out.push_back(token);
            token.clear();
        } else if (ch != '\r') {
            token.push_back(ch);
        }
    }
    out.push_back(token);
    return out;
}

double parse_double_field(const std::string& text, const std::string& where) {
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
        throw DataError(where + ": malformed number '" + text + "'");
    }
    return v;
}

} // namespace

void write_return_series_csv(const ReturnSeries& series, const std::string& path) {
    std::ostringstream out;
    out << "# comove-returns v1 symbol=" << series.symbol
        << " utc_offset=" << offset_text(series.utc_offset_minutes) << "\n";
    out << "timestamp,return,day_index\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        out << format_iso8601(series.timestamps[i], series.utc_offset_minutes) << ','
            << format_double(series.returns[i]) << ',' << series.day_index[i] << '\n';
    }
    write_text_file(path, out.str());
}

ReturnSeries read_return_series_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");

    ReturnSeries series;
    std::string line;
    if (!std::getline(in, line) || line.rfind("# comove-returns v1", 0) != 0) {
        throw DataError(path + ": missing '# comove-returns v1' header");
    }
    for (const auto& token : split_fields(line, ' ')) {
        if (token.rfind("symbol=", 0) == 0) series.symbol = token.substr(7);
        if (token.rfind("utc_offset=", 0) == 0) {
            series.utc_offset_minutes = parse_utc_offset(token.substr(11));
        }
    }
    if (!std::getline(in, line) || split_fields(line)[0] != "timestamp") {
        throw DataError(path + ": missing column header");
    }
    std::size_t line_no = 2;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split_fields(line);
        if (fields.size() != 3) {
            throw DataError(path + ":" + std::to_string(line_no) + ": expected 3 columns");
        }
        series.timestamps.push_back(parse_iso8601(fields[0]));
        series.returns.push_back(parse_double_field(fields[1], path));
        series.day_index.push_back(
            static_cast<int>(parse_double_field(fields[2], path)));
    }
    return series;
}

std::string stats_to_json(const DescriptiveStats& stats, const std::string& symbol) {
    json j;
    j["format"] = "comove-stats v1";
    j["symbol"] = symbol;
    j["n"] = stats.n;
    j["mean"] = stats.mean;
    j["st_dev"] = stats.st_dev;
    if (stats.skewness) {
        j["skewness"] = *stats.skewness;
    } else {
        j["skewness"] = nullptr;
    }
    if (stats.kurtosis) {
        j["kurtosis"] = *stats.kurtosis;
    } else {
        j["kurtosis"] = nullptr;
    }
    j["min"] = stats.min;
    j["max"] = stats.max;
    return j.dump(2) + "\n";
}

namespace {

template <typename M, typename Format>
void write_matrix_impl(const M& m, const std::string& path, const std::string& kind,
                       Format format) {
    std::ostringstream out;
    out << "# comove-matrix v1 kind=" << kind << " rows=" << m.rows() << " cols=" << m.cols()
        << "\n";
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (c != 0) out << ',';
            out << format(m(r, c));
        }
        out << '\n';
    }
    write_text_file(path, out.str());
}

} // namespace

void write_matrix_csv(const RealMatrix& m, const std::string& path, const std::string& kind) {
    write_matrix_impl(m, path, kind, [](double v) { return format_double(v); });
}

void write_matrix_csv(const BoolMatrix& m, const std::string& path, const std::string& kind) {
    write_matrix_impl(m, path, kind,
                      [](unsigned char v) { return std::string(v != 0 ? "1" : "0"); });
}

RealMatrix read_matrix_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line) || line.rfind("# comove-matrix v1", 0) != 0) {
        throw DataError(path + ": missing '# comove-matrix v1' header");
    }
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_fields(line);
        std::vector<double> row;
        row.reserve(fields.size());
        for (const auto& f : fields) row.push_back(parse_double_field(f, path));
        if (!rows.empty() && rows.front().size() != row.size()) {
            throw DataError(path + ": ragged matrix rows");
        }
        rows.push_back(std::move(row));
    }
    RealMatrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = rows[r][c];
    }
    return m;
}

namespace {

json grid_to_json(const ScaleGrid& grid) {
    json j;
    j["dt"] = grid.dt;
    j["s0"] = grid.s0;
    j["dj"] = grid.dj;
    j["omega0"] = grid.omega0;
    j["fourier_factor"] = grid.fourier_factor;
    j["scales"] = grid.scales;
    return j;
}

} // namespace

void save_cwt_field(const CwtField& field, const std::string& base_path) {
    RealMatrix re(field.coefficients.rows(), field.coefficients.cols());
    RealMatrix im(field.coefficients.rows(), field.coefficients.cols());
    for (std::size_t i = 0; i < re.data().size(); ++i) {
        re.data()[i] = field.coefficients.data()[i].real();
        im.data()[i] = field.coefficients.data()[i].imag();
    }
    write_matrix_csv(re, base_path + "_real.csv", "cwt_real");
    write_matrix_csv(im, base_path + "_imag.csv", "cwt_imag");

    json j;
    j["format"] = "comove-cwt-meta v1";
    j["grid"] = grid_to_json(field.grid);
    j["coi"] = field.coi;
    j["n"] = field.n_original;
    write_text_file(base_path + "_meta.json", j.dump(2) + "\n");
}

void save_coherence_field(const CoherenceField& field, const std::string& out_dir,
                          std::size_t n_sim, std::uint64_t seed) {
    const std::filesystem::path dir(out_dir);
    write_matrix_csv(field.r2, (dir / "r2.csv").string(), "r2");
    write_matrix_csv(field.phase, (dir / "phase.csv").string(), "phase");
    write_matrix_csv(field.significant, (dir / "significance.csv").string(), "significance");

    json j;
    j["format"] = "comove-coherence-meta v1";
    j["grid"] = grid_to_json(field.grid);
    j["coi"] = field.coi;
    j["n"] = field.r2.cols();
    j["alpha"] = field.alpha;
    if (!field.thresholds.empty()) {
        json t = json::array();
        for (double v : field.thresholds) {
            if (std::isfinite(v)) {
                t.push_back(v);
            } else {
                t.push_back(nullptr); // no trusted cells at this scale
            }
        }
        j["thresholds"] = t;
        j["n_sim"] = n_sim;
        j["seed"] = seed;
    }
    write_text_file((dir / "meta.json").string(), j.dump(2) + "\n");
}

void save_decomposition(const ModwtDecomposition& d, const std::string& csv_path,
                        const std::string& json_path) {
    std::ostringstream out;
    out << "# comove-modwt v1 filter=" << d.filter.name << " levels=" << d.levels << "\n";
    for (std::size_t j = 1; j <= d.levels; ++j) {
        out << "w" << j << ',';
    }
    out << "v" << d.levels << "\n";
    for (std::size_t t = 0; t < d.size(); ++t) {
        for (std::size_t j = 0; j < d.levels; ++j) {
            out << format_double(d.w[j][t]) << ',';
        }
        out << format_double(d.v[t]) << '\n';
    }
    write_text_file(csv_path, out.str());

    json j;
    j["format"] = "comove-modwt-meta v1";
    j["filter"] = d.filter.name;
    j["levels"] = d.levels;
    j["n"] = d.size();
    json counts = json::array();
    for (std::size_t level = 1; level <= d.levels; ++level) {
        counts.push_back(d.boundary_count(level));
    }
    j["boundary_counts"] = counts;
    write_text_file(json_path, j.dump(2) + "\n");
}

std::string wcorr_to_json(const WaveletCorrelation& wc) {
    json j;
    j["format"] = "comove-wcorr v1";
    j["alpha"] = wc.alpha;
    j["filter"] = wc.filter_name;
    json scales = json::array();
    for (const auto& sc : wc.scales) {
        json row;
        row["level"] = sc.level;
        row["rho"] = sc.rho;
        row["ci_low"] = sc.ci_low;
        row["ci_high"] = sc.ci_high;
        row["n_eff"] = sc.n_eff;
        scales.push_back(row);
    }
    j["scales"] = scales;
    return j.dump(2) + "\n";
}

void write_wcorr_csv(const WaveletCorrelation& wc, const std::string& path) {
    std::ostringstream out;
    out << "# comove-wcorr v1 filter=" << wc.filter_name << " alpha=" << format_double(wc.alpha)
        << "\n";
    out << "level,rho,ci_low,ci_high,n_eff\n";
    for (const auto& sc : wc.scales) {
        out << sc.level << ',' << format_double(sc.rho) << ',' << format_double(sc.ci_low)
            << ',' << format_double(sc.ci_high) << ',' << sc.n_eff << '\n';
    }
    write_text_file(path, out.str());
}

std::string contagion_to_json(const ContagionReport& report) {
    json j;
    j["format"] = "comove-contagion v1";
    j["break_index"] = report.break_index;
    j["window_length"] = report.window_length;
    j["alpha"] = report.alpha;
    j["filter"] = report.filter_name;
    json scales = json::array();
    for (const auto& sc : report.scales) {
        json row;
        row["level"] = sc.level;
        row["horizon"] = sc.horizon_text;
        row["rho_i"] = sc.rho_i;
        row["rho_ii"] = sc.rho_ii;
        row["ci_i"] = {sc.ci_low_i, sc.ci_high_i};
        row["ci_ii"] = {sc.ci_low_ii, sc.ci_high_ii};
        if (sc.z) {
            row["z"] = *sc.z;
            row["p_value"] = *sc.p_value;
        } else {
            row["z"] = nullptr;
            row["p_value"] = nullptr;
        }
        row["reject"] = sc.reject;
        row["direction"] =
            sc.direction > 0 ? "increase" : (sc.direction < 0 ? "decrease" : "none");
        scales.push_back(row);
    }
    j["scales"] = scales;
    return j.dump(2) + "\n";
}

void write_contagion_csv(const ContagionReport& report, const std::string& path) {
    std::ostringstream out;
    out << "# comove-contagion v1 filter=" << report.filter_name
        << " alpha=" << format_double(report.alpha) << " window=" << report.window_length
        << "\n";
    out << "level,horizon,rho_i,rho_ii,ci_low_i,ci_high_i,ci_low_ii,ci_high_ii,z,p_value,"
           "reject,direction\n";
    for (const auto& sc : report.scales) {
        out << sc.level << ',' << sc.horizon_text << ',' << format_double(sc.rho_i) << ','
            << format_double(sc.rho_ii) << ',' << format_double(sc.ci_low_i) << ','
            << format_double(sc.ci_high_i) << ',' << format_double(sc.ci_low_ii) << ','
            << format_double(sc.ci_high_ii) << ',';
        if (sc.z) {
            out << format_double(*sc.z) << ',' << format_double(*sc.p_value);
        } else {
            out << ',';
        }
        out << ',' << (sc.reject ? 1 : 0) << ','
            << (sc.direction > 0 ? "increase" : (sc.direction < 0 ? "decrease" : "none"))
            << '\n';
    }
    write_text_file(path, out.str());
}

} // namespace comove
