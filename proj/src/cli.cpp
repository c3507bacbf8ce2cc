#include "comove/cli.hpp"

#include "comove/coherence.hpp"
#include "comove/errors.hpp"
#include "comove/ingest.hpp"
#include "comove/io.hpp"
#include "comove/modwt.hpp"
#include "comove/synth.hpp"
#include "comove/wcorr.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

namespace comove {

namespace {

struct SessionFlags {
    std::string open = "09:30";
    std::string close = "16:00";
    std::string tz = "+01:00";
    int bar_seconds = 300;

    Session to_session() const {
        Session s;
        s.open_minutes = parse_time_of_day(open);
        s.close_minutes = parse_time_of_day(close);
        s.utc_offset_minutes = parse_utc_offset(tz);
        s.bar_seconds = bar_seconds;
        validate_session(s);
        return s;
    }
};

void add_session_flags(CLI::App* cmd, SessionFlags& flags) {
    cmd->add_option("--open", flags.open, "Session open, HH:MM")->capture_default_str();
    cmd->add_option("--close", flags.close, "Session close, HH:MM")->capture_default_str();
    cmd->add_option("--tz", flags.tz, "Fixed UTC offset, e.g. +01:00 or Z")
        ->capture_default_str();
    cmd->add_option("--bar-seconds", flags.bar_seconds, "Bar interval in seconds")
        ->capture_default_str();
}

// key=value config files supply defaults; explicit flags always win. The
// file is expanded into extra argv entries for options not already given.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
    std::vector<std::string> out;
    std::string config_path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw UsageError("--config requires a file path");
            config_path = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            config_path = args[i].substr(9);
        } else {
            out.push_back(args[i]);
        }
    }
    if (config_path.empty()) return out;

    std::ifstream in(config_path);
    if (!in) throw DataError("cannot open config file '" + config_path + "'");

    std::set<std::string> given;
    for (const auto& a : out) {
        if (a.rfind("--", 0) == 0) given.insert(a.substr(0, a.find('=')));
    }
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        const auto eq = line.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw DataError(config_path + ":" + std::to_string(line_no) +
                            ": expected key=value");
        }
        auto strip = [](std::string s) {
            const auto b = s.find_first_not_of(" \t");
            if (b == std::string::npos) return std::string();
            const auto e = s.find_last_not_of(" \t");
            return s.substr(b, e - b + 1);
        };
        const std::string key = "--" + strip(line.substr(0, eq));
        const std::string value = strip(line.substr(eq + 1));
        if (given.count(key) != 0) continue;
        // Single-token form so flag-valued keys (e.g. no-significance=true)
        // parse the same way as options.
        out.push_back(key + "=" + value);
    }
    return out;
}

std::vector<double> parse_rho_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ',')) {
        double v = 0.0;
        const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
        if (res.ec != std::errc{} || res.ptr != token.data() + token.size()) {
            throw UsageError("invalid correlation list entry '" + token + "'");
        }
        out.push_back(v);
    }
    if (out.empty()) throw UsageError("empty correlation list");
    return out;
}

// First positive timestamp spacing inside a day; the bar interval of an
// aligned return file.
double bar_minutes_of(const ReturnSeries& series, double fallback) {
    for (std::size_t i = 1; i < series.size(); ++i) {
        if (series.day_index[i] == series.day_index[i - 1]) {
            return static_cast<double>(series.timestamps[i] - series.timestamps[i - 1]) / 60.0;
        }
    }
    return fallback;
}

void require_aligned(const ReturnSeries& x, const ReturnSeries& y) {
    if (x.timestamps != y.timestamps) {
        throw DataError("input return series are not aligned (timestamps differ)");
    }
}

// ---------------------------------------------------------------------------

struct SimulateConfig {
    std::string kind = "ar1";
    std::size_t days = 0;
    std::size_t n = 0;
    double phi = 0.0;
    double sigma = 0.001;
    std::string rho_list;
    std::string filter = "la8";
    std::uint64_t seed = 0;
    double p0 = 100.0;
    std::string start_date = "2008-01-07";
    std::string out;
    std::string out2;
    std::string symbol = "SIM1";
    std::string symbol2 = "SIM2";
    SessionFlags session;
};

std::vector<EpochSeconds> session_grid(const Session& session, const std::string& start_date,
                                       std::size_t n_days) {
    if (start_date.size() != 10 || start_date[4] != '-' || start_date[7] != '-') {
        throw UsageError("start date must be YYYY-MM-DD");
    }
    const int year = std::stoi(start_date.substr(0, 4));
    const int month = std::stoi(start_date.substr(5, 2));
    const int day = std::stoi(start_date.substr(8, 2));
    std::int64_t civil_day = days_from_civil(year, month, day);

    const int bars = session.bars_per_day();
    std::vector<EpochSeconds> grid;
    grid.reserve(n_days * static_cast<std::size_t>(bars));
    std::size_t produced = 0;
    while (produced < n_days) {
        const EpochSeconds midnight =
            civil_day * 86400 - static_cast<EpochSeconds>(session.utc_offset_minutes) * 60;
        const int weekday = weekday_from_epoch(midnight + 12 * 3600, session.utc_offset_minutes);
        if (weekday < 5) { // Monday..Friday
            for (int b = 1; b <= bars; ++b) {
                grid.push_back(midnight + session.open_minutes * 60 +
                               static_cast<EpochSeconds>(b) * session.bar_seconds);
            }
            ++produced;
        }
        ++civil_day;
    }
    return grid;
}

void write_price_csv(const std::string& path, const std::vector<EpochSeconds>& stamps,
                     const std::vector<double>& returns, double p0, int utc_offset_minutes) {
    std::ostringstream out;
    out << "timestamp,price\n";
    double log_price = std::log(p0);
    for (std::size_t i = 0; i < stamps.size(); ++i) {
        log_price += returns[i];
        out << format_iso8601(stamps[i], utc_offset_minutes) << ','
            << format_double(std::exp(log_price)) << '\n';
    }
    write_text_file(path, out.str());
}

int cmd_simulate(const SimulateConfig& config) {
    const Session session = config.session.to_session();
    if (config.out.empty()) throw UsageError("simulate requires --out");

    std::vector<EpochSeconds> stamps;
    if (config.days > 0) {
        stamps = session_grid(session, config.start_date, config.days);
    } else if (config.n > 0) {
        stamps = session_grid(session, config.start_date,
                              (config.n + session.bars_per_day() - 1) /
                                  static_cast<std::size_t>(session.bars_per_day()));
        stamps.resize(config.n);
    } else {
        throw UsageError("simulate requires --days or --n");
    }

    if (config.kind == "ar1") {
        const std::vector<double> r =
            gen_ar1(stamps.size(), config.phi, config.sigma, {config.seed, 0});
        write_price_csv(config.out, stamps, r, config.p0, session.utc_offset_minutes);
    } else if (config.kind == "pair") {
        if (config.out2.empty()) throw UsageError("simulate --kind pair requires --out2");
        if (config.rho_list.empty()) {
            throw UsageError("simulate --kind pair requires --rho (comma separated)");
        }
        const std::vector<double> rho = parse_rho_list(config.rho_list);
        auto [x, y] = gen_correlated_pair(stamps.size(), rho,
                                          wavelet_filter(config.filter), {config.seed, 0});
        for (auto& v : x) v *= config.sigma;
        for (auto& v : y) v *= config.sigma;
        write_price_csv(config.out, stamps, x, config.p0, session.utc_offset_minutes);
        write_price_csv(config.out2, stamps, y, config.p0, session.utc_offset_minutes);
    } else {
        throw UsageError("unknown simulate kind '" + config.kind + "'");
    }
    return 0;
}

// ---------------------------------------------------------------------------

struct IngestConfig {
    std::vector<std::string> inputs;
    std::vector<std::string> symbols;
    std::string out_dir = ".";
    std::string ts_col = "timestamp";
    std::string price_col = "price";
    SessionFlags session;
};

int cmd_ingest(const IngestConfig& config) {
    if (config.inputs.empty()) throw UsageError("ingest requires at least one --in file");
    const Session session = config.session.to_session();

    CsvSchema schema;
    schema.timestamp_column = config.ts_col;
    schema.price_column = config.price_col;

    std::vector<PriceSeries> series;
    for (std::size_t i = 0; i < config.inputs.size(); ++i) {
        const std::string symbol = i < config.symbols.size() ? config.symbols[i] : "";
        series.push_back(load_price_csv(config.inputs[i], schema, symbol));
    }
    const std::vector<PriceSeries> aligned = align_sessions(series, session);

    const std::filesystem::path dir(config.out_dir);
    for (const auto& prices : aligned) {
        std::vector<std::string> warnings;
        const ReturnSeries returns = log_returns(prices, session, &warnings);
        for (const auto& w : warnings) std::cerr << prices.symbol << ": " << w << "\n";
        write_return_series_csv(returns, (dir / (prices.symbol + "_returns.csv")).string());
        const DescriptiveStats stats = descriptive_stats(returns);
        write_text_file((dir / (prices.symbol + "_stats.json")).string(),
                        stats_to_json(stats, prices.symbol));
    }
    return 0;
}

// ---------------------------------------------------------------------------

struct CoherenceConfig {
    std::string x_path;
    std::string y_path;
    std::string out_dir = ".";
    double omega0 = 6.0;
    double s0 = 0.0; // 0: default 2*dt
    double dj = 1.0 / 12.0;
    std::size_t n_scales = 0; // 0: default cap
    std::size_t n_sim = 300;
    double alpha = 0.05;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    bool no_significance = false;
    std::string svg_path;
};

int cmd_coherence(const CoherenceConfig& config) {
    const ReturnSeries x = read_return_series_csv(config.x_path);
    const ReturnSeries y = read_return_series_csv(config.y_path);
    require_aligned(x, y);

    const double dt = 1.0; // scale axis in bars
    const double s0 = config.s0 > 0.0 ? config.s0 : 2.0 * dt;
    const std::size_t n_scales =
        config.n_scales > 0 ? config.n_scales
                            : default_scale_count(x.size(), dt, s0, config.dj, config.omega0);
    const ScaleGrid grid = make_scale_grid(dt, s0, config.dj, n_scales, config.omega0);

    CoherenceField field = wavelet_coherence(x.returns, y.returns, grid);
    std::size_t n_sim_used = 0;
    if (!config.no_significance) {
        McParams params;
        params.n_sim = config.n_sim;
        params.alpha = config.alpha;
        params.seed = config.seed;
        params.threads = config.threads;
        const SignificanceResult sig =
            significance_mc(x.returns, y.returns, grid, params, &field.r2);
        field.significant = sig.significant;
        field.thresholds = sig.thresholds;
        field.alpha = config.alpha;
        n_sim_used = config.n_sim;
    }
    save_coherence_field(field, config.out_dir, n_sim_used, config.seed);
    if (!config.svg_path.empty()) {
        write_coherence_svg(field, config.svg_path);
    }
    return 0;
}

// ---------------------------------------------------------------------------

struct WcorrConfig {
    std::string x_path;
    std::string y_path;
    std::string out_dir = ".";
    std::string filter = "la8";
    std::size_t levels = 8;
    double alpha = 0.05;
};

int cmd_wcorr(const WcorrConfig& config) {
    const ReturnSeries x = read_return_series_csv(config.x_path);
    const ReturnSeries y = read_return_series_csv(config.y_path);
    require_aligned(x, y);

    std::vector<std::string> warnings;
    const WaveletCorrelation wc = wavelet_correlation(
        x.returns, y.returns, wavelet_filter(config.filter), config.levels, config.alpha,
        &warnings);
    for (const auto& w : warnings) std::cerr << w << "\n";

    const std::filesystem::path dir(config.out_dir);
    write_text_file((dir / "wcorr.json").string(), wcorr_to_json(wc));
    write_wcorr_csv(wc, (dir / "wcorr.csv").string());
    return 0;
}

// ---------------------------------------------------------------------------

struct ContagionConfig {
    std::string x_path;
    std::string y_path;
    std::string break_ts;
    std::string out_dir = ".";
    std::string filter = "la8";
    std::size_t levels = 8;
    double alpha = 0.05;
    double bar_minutes = 0.0; // 0: derive from the data
};

int cmd_contagion(const ContagionConfig& config) {
    const ReturnSeries x = read_return_series_csv(config.x_path);
    const ReturnSeries y = read_return_series_csv(config.y_path);
    require_aligned(x, y);
    if (config.break_ts.empty()) throw UsageError("contagion requires --break");

    const std::size_t break_index = find_break_index(x, parse_iso8601(config.break_ts));
    const double dt_minutes =
        config.bar_minutes > 0.0 ? config.bar_minutes : bar_minutes_of(x, 5.0);

    std::vector<std::string> warnings;
    const ContagionReport report =
        contagion_test(x.returns, y.returns, break_index, wavelet_filter(config.filter),
                       config.levels, config.alpha, dt_minutes, &warnings);
    for (const auto& w : warnings) std::cerr << w << "\n";

    const std::filesystem::path dir(config.out_dir);
    write_text_file((dir / "contagion.json").string(), contagion_to_json(report));
    write_contagion_csv(report, (dir / "contagion.csv").string());
    return 0;
}

} // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"comove: wavelet comovement and contagion analysis for intraday returns"};
    app.require_subcommand(1);

    SimulateConfig sim;
    CLI::App* simulate = app.add_subcommand("simulate", "Write synthetic price CSVs");
    simulate->add_option("--kind", sim.kind, "ar1 or pair")->capture_default_str();
    simulate->add_option("--days", sim.days, "Number of synthetic trading days");
    simulate->add_option("--n", sim.n, "Number of bars (alternative to --days)");
    simulate->add_option("--phi", sim.phi, "AR(1) coefficient")->capture_default_str();
    simulate->add_option("--sigma", sim.sigma, "Return standard deviation")
        ->capture_default_str();
    simulate->add_option("--rho", sim.rho_list,
                         "Per-scale correlations for --kind pair, e.g. 0.8,0.5,0.2,0");
    simulate->add_option("--filter", sim.filter, "Wavelet filter for --kind pair")
        ->capture_default_str();
    simulate->add_option("--seed", sim.seed, "Random seed")->capture_default_str();
    simulate->add_option("--p0", sim.p0, "Initial price level")->capture_default_str();
    simulate->add_option("--start-date", sim.start_date, "First trading day, YYYY-MM-DD")
        ->capture_default_str();
    simulate->add_option("--out", sim.out, "Output price CSV");
    simulate->add_option("--out2", sim.out2, "Second output CSV for --kind pair");
    simulate->add_option("--symbol", sim.symbol, "Symbol name")->capture_default_str();
    simulate->add_option("--symbol2", sim.symbol2, "Second symbol name")
        ->capture_default_str();
    add_session_flags(simulate, sim.session);

    IngestConfig ing;
    CLI::App* ingest = app.add_subcommand(
        "ingest", "Align price CSVs on a session grid and emit returns + stats");
    ingest->add_option("--in", ing.inputs, "Input price CSV (repeatable)");
    ingest->add_option("--symbol", ing.symbols, "Symbol per input (defaults to file name)");
    ingest->add_option("--out-dir", ing.out_dir, "Output directory")->capture_default_str();
    ingest->add_option("--ts-col", ing.ts_col, "Timestamp column name")
        ->capture_default_str();
    ingest->add_option("--price-col", ing.price_col, "Price column name")
        ->capture_default_str();
    add_session_flags(ingest, ing.session);

    CoherenceConfig coh;
    CLI::App* coherence = app.add_subcommand(
        "coherence", "Wavelet coherence with Monte Carlo significance");
    coherence->add_option("--x", coh.x_path, "First aligned return CSV")->required();
    coherence->add_option("--y", coh.y_path, "Second aligned return CSV")->required();
    coherence->add_option("--out-dir", coh.out_dir, "Output directory")
        ->capture_default_str();
    coherence->add_option("--omega0", coh.omega0, "Morlet center frequency")
        ->capture_default_str();
    coherence->add_option("--s0", coh.s0, "Smallest scale in bars (default 2)");
    coherence->add_option("--dj", coh.dj, "Scale step in octaves")->capture_default_str();
    coherence->add_option("--n-scales", coh.n_scales,
                          "Scale count (default: cap period at n/2)");
    coherence->add_option("--n-sim", coh.n_sim, "Monte Carlo surrogate pairs")
        ->capture_default_str();
    coherence->add_option("--alpha", coh.alpha, "Significance level")->capture_default_str();
    coherence->add_option("--seed", coh.seed, "Random seed")->capture_default_str();
    coherence->add_option("--threads", coh.threads,
                          "Worker threads for the Monte Carlo loop (0 = hardware)");
    coherence->add_flag("--no-significance", coh.no_significance,
                        "Skip the Monte Carlo significance test");
    coherence->add_option("--svg", coh.svg_path, "Also render an SVG heatmap here");

    WcorrConfig wco;
    CLI::App* wcorr = app.add_subcommand("wcorr", "Scale-by-scale wavelet correlation");
    wcorr->add_option("--x", wco.x_path, "First aligned return CSV")->required();
    wcorr->add_option("--y", wco.y_path, "Second aligned return CSV")->required();
    wcorr->add_option("--out-dir", wco.out_dir, "Output directory")->capture_default_str();
    wcorr->add_option("--filter", wco.filter, "haar, d4 or la8")->capture_default_str();
    wcorr->add_option("--levels", wco.levels, "Decomposition depth J")
        ->capture_default_str();
    wcorr->add_option("--alpha", wco.alpha, "Confidence level complement")
        ->capture_default_str();

    ContagionConfig con;
    CLI::App* contagion = app.add_subcommand(
        "contagion", "Two-window wavelet correlation change test");
    contagion->add_option("--x", con.x_path, "First aligned return CSV")->required();
    contagion->add_option("--y", con.y_path, "Second aligned return CSV")->required();
    contagion->add_option("--break", con.break_ts,
                          "Break timestamp (ISO-8601 with offset); window II starts here");
    contagion->add_option("--out-dir", con.out_dir, "Output directory")
        ->capture_default_str();
    contagion->add_option("--filter", con.filter, "haar, d4 or la8")->capture_default_str();
    contagion->add_option("--levels", con.levels, "Decomposition depth J")
        ->capture_default_str();
    contagion->add_option("--alpha", con.alpha, "Test level")->capture_default_str();
    contagion->add_option("--bar-minutes", con.bar_minutes,
                          "Bar interval in minutes for horizon labels (default: derived)");

    // Subcommands document --config in their help; expansion happens here.
    for (CLI::App* sub : {simulate, ingest, coherence, wcorr, contagion}) {
        sub->add_option("--config", "Optional key=value config file; flags win")
            ->type_name("FILE")
            ->expected(0); // consumed before parsing
    }

    std::vector<std::string> raw_args;
    for (int i = 1; i < argc; ++i) raw_args.emplace_back(argv[i]);
    std::vector<std::string> expanded;
    try {
        expanded = expand_config(raw_args);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    std::vector<const char*> parse_argv;
    parse_argv.push_back("comove");
    for (const auto& a : expanded) parse_argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(parse_argv.size()), parse_argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(sim);
        if (ingest->parsed()) return cmd_ingest(ing);
        if (coherence->parsed()) return cmd_coherence(coh);
        if (wcorr->parsed()) return cmd_wcorr(wco);
        if (contagion->parsed()) return cmd_contagion(con);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return 2;
}

} // namespace comove
