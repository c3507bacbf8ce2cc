#include "comove/cli.hpp"

#include "comove/io.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <unistd.h>
#include <vector>

using namespace comove;

namespace {

int run(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.push_back("comove");
    for (const auto& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(bool(in));
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("comove_cli_test_" + std::to_string(::getpid()));
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

} // namespace

TEST_CASE("cli usage errors exit with code 2") {
    CHECK(run({}) == 2);
    CHECK(run({"simulate"}) == 2);                       // no --out
    CHECK(run({"simulate", "--days", "2"}) == 2);        // still no --out
    CHECK(run({"coherence", "--x", "a"}) == 2);          // missing required --y
    CHECK(run({"unknown-subcommand"}) == 2);
}

TEST_CASE("cli numeric failures exit with code 4") {
    TempDir dir;
    // Constant prices produce zero-variance returns, which the coherence
    // estimator refuses.
    std::string csv = "timestamp,price\n";
    const EpochSeconds start = parse_iso8601("2008-01-07T09:35:00+01:00");
    for (int i = 0; i < 78; ++i) {
        csv += format_iso8601(start + i * 300, 60) + ",100.0\n";
    }
    write_text_file(dir.file("flat.csv"), csv);
    REQUIRE(run({"ingest", "--in", dir.file("flat.csv"), "--out-dir", dir.file("ing")}) == 0);
    CHECK(run({"coherence", "--x", dir.file("ing/flat_returns.csv"), "--y",
               dir.file("ing/flat_returns.csv"), "--out-dir", dir.file("coh"),
               "--no-significance"}) == 4);
}

TEST_CASE("cli data errors exit with code 3") {
    TempDir dir;
    CHECK(run({"ingest", "--in", dir.file("missing.csv"), "--out-dir", dir.file("out")}) == 3);

    // Disjoint synthetic calendars: alignment is empty.
    REQUIRE(run({"simulate", "--days", "2", "--out", dir.file("a.csv"), "--seed", "1"}) == 0);
    REQUIRE(run({"simulate", "--days", "2", "--out", dir.file("b.csv"), "--seed", "2",
                 "--start-date", "2009-06-01"}) == 0);
    CHECK(run({"ingest", "--in", dir.file("a.csv"), "--in", dir.file("b.csv"), "--out-dir",
               dir.file("out")}) == 3);
}

TEST_CASE("simulate then ingest yields aligned equal-length return files") {
    TempDir dir;
    REQUIRE(run({"simulate", "--kind", "pair", "--days", "4", "--rho", "0.7,0.4", "--seed",
                 "11", "--out", dir.file("x.csv"), "--out2", dir.file("y.csv")}) == 0);
    REQUIRE(run({"ingest", "--in", dir.file("x.csv"), "--in", dir.file("y.csv"), "--out-dir",
                 dir.file("ing")}) == 0);

    const ReturnSeries rx = read_return_series_csv(dir.file("ing/x_returns.csv"));
    const ReturnSeries ry = read_return_series_csv(dir.file("ing/y_returns.csv"));
    CHECK(rx.size() == 4 * 77);
    CHECK(rx.timestamps == ry.timestamps);
    CHECK(slurp(dir.file("ing/x_stats.json")).find("\"st_dev\"") != std::string::npos);
}

TEST_CASE("seeded coherence runs are byte-identical across thread counts") {
    TempDir dir;
    REQUIRE(run({"simulate", "--kind", "pair", "--days", "2", "--rho", "0.6,0.3", "--seed",
                 "21", "--out", dir.file("x.csv"), "--out2", dir.file("y.csv")}) == 0);
    REQUIRE(run({"ingest", "--in", dir.file("x.csv"), "--in", dir.file("y.csv"), "--out-dir",
                 dir.file("ing")}) == 0);

    const std::vector<std::string> base = {
        "coherence",       "--x",   dir.file("ing/x_returns.csv"),
        "--y",             dir.file("ing/y_returns.csv"),
        "--n-sim",         "100",   "--seed", "5",
    };
    auto with_out = [&](const std::string& out, const std::string& threads) {
        std::vector<std::string> args = base;
        args.push_back("--out-dir");
        args.push_back(dir.file(out));
        args.push_back("--threads");
        args.push_back(threads);
        return args;
    };
    REQUIRE(run(with_out("run1", "1")) == 0);
    REQUIRE(run(with_out("run2", "2")) == 0);
    for (const char* name : {"r2.csv", "phase.csv", "significance.csv", "meta.json"}) {
        CHECK(slurp(dir.file("run1/") + name) == slurp(dir.file("run2/") + name));
    }
}

TEST_CASE("coherence rejects misaligned inputs") {
    TempDir dir;
    REQUIRE(run({"simulate", "--days", "2", "--out", dir.file("a.csv"), "--seed", "1"}) == 0);
    REQUIRE(run({"simulate", "--days", "3", "--out", dir.file("b.csv"), "--seed", "2"}) == 0);
    REQUIRE(run({"ingest", "--in", dir.file("a.csv"), "--out-dir", dir.file("ia")}) == 0);
    REQUIRE(run({"ingest", "--in", dir.file("b.csv"), "--out-dir", dir.file("ib")}) == 0);
    CHECK(run({"coherence", "--x", dir.file("ia/a_returns.csv"), "--y",
               dir.file("ib/b_returns.csv"), "--out-dir", dir.file("coh"), "--n-sim",
               "100"}) == 3);
}

TEST_CASE("self pair coherence writes r2 of one") {
    TempDir dir;
    REQUIRE(run({"simulate", "--days", "2", "--out", dir.file("a.csv"), "--seed", "31"}) == 0);
    REQUIRE(run({"ingest", "--in", dir.file("a.csv"), "--out-dir", dir.file("ing")}) == 0);
    REQUIRE(run({"coherence", "--x", dir.file("ing/a_returns.csv"), "--y",
                 dir.file("ing/a_returns.csv"), "--out-dir", dir.file("coh"),
                 "--no-significance"}) == 0);
    const RealMatrix r2 = read_matrix_csv(dir.file("coh/r2.csv"));
    for (double v : r2.data()) CHECK(v >= 1.0 - 1e-10);
}

TEST_CASE("wcorr output is unaffected by alpha except interval width") {
    TempDir dir;
    REQUIRE(run({"simulate", "--kind", "pair", "--days", "4", "--rho", "0.7,0.4", "--seed",
                 "41", "--out", dir.file("x.csv"), "--out2", dir.file("y.csv")}) == 0);
    REQUIRE(run({"ingest", "--in", dir.file("x.csv"), "--in", dir.file("y.csv"), "--out-dir",
                 dir.file("ing")}) == 0);
    REQUIRE(run({"wcorr", "--x", dir.file("ing/x_returns.csv"), "--y",
                 dir.file("ing/y_returns.csv"), "--levels", "3", "--out-dir",
                 dir.file("w1")}) == 0);
    REQUIRE(run({"wcorr", "--x", dir.file("ing/x_returns.csv"), "--y",
                 dir.file("ing/y_returns.csv"), "--levels", "3", "--alpha", "0.2",
                 "--out-dir", dir.file("w2")}) == 0);

    auto rho_column = [&](const std::string& path) {
        std::vector<std::string> out;
        std::istringstream in(slurp(path));
        std::string line;
        std::getline(in, line);
        std::getline(in, line);
        while (std::getline(in, line)) {
            const auto a = line.find(',');
            const auto b = line.find(',', a + 1);
            out.push_back(line.substr(a + 1, b - a - 1));
        }
        return out;
    };
    CHECK(rho_column(dir.file("w1/wcorr.csv")) == rho_column(dir.file("w2/wcorr.csv")));
    CHECK(slurp(dir.file("w1/wcorr.csv")) != slurp(dir.file("w2/wcorr.csv")));
}

TEST_CASE("contagion emits one row per level with horizon labels") {
    TempDir dir;
    REQUIRE(run({"simulate", "--kind", "pair", "--days", "6", "--rho", "0.7,0.4,0.2",
                 "--seed", "51", "--out", dir.file("x.csv"), "--out2", dir.file("y.csv")}) ==
            0);
    REQUIRE(run({"ingest", "--in", dir.file("x.csv"), "--in", dir.file("y.csv"), "--out-dir",
                 dir.file("ing")}) == 0);
    REQUIRE(run({"contagion", "--x", dir.file("ing/x_returns.csv"), "--y",
                 dir.file("ing/y_returns.csv"), "--break", "2008-01-10T00:00:00+01:00",
                 "--levels", "3", "--out-dir", dir.file("con")}) == 0);

    const std::string csv = slurp(dir.file("con/contagion.csv"));
    CHECK(csv.find("\n1,10-20 min,") != std::string::npos);
    CHECK(csv.find("\n3,40-80 min,") != std::string::npos);

    // Break outside the sample is a data error.
    CHECK(run({"contagion", "--x", dir.file("ing/x_returns.csv"), "--y",
               dir.file("ing/y_returns.csv"), "--break", "2020-01-01T00:00:00Z",
               "--levels", "3", "--out-dir", dir.file("con2")}) == 3);
}

TEST_CASE("config file supplies defaults that flags override") {
    TempDir dir;
    write_text_file(dir.file("sim.conf"), "days=2\nseed=77\nout=" + dir.file("c.csv") + "\n");
    REQUIRE(run({"simulate", "--config", dir.file("sim.conf")}) == 0);
    REQUIRE(run({"simulate", "--config", dir.file("sim.conf"), "--seed", "78", "--out",
                 dir.file("d.csv")}) == 0);
    CHECK(slurp(dir.file("c.csv")) != slurp(dir.file("d.csv"))); // seed flag won
}
