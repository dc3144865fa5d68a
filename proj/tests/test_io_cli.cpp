#include <catch2/catch_amalgamated.hpp>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "shotvar/io.hpp"
#include "shotvar/sim.hpp"
#include "shotvar/svg.hpp"

using namespace shotvar;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    auto dir = fs::temp_directory_path() / "shotvar_tests";
    fs::create_directories(dir);
    return dir;
}

std::string tmp(const std::string& name) { return (temp_dir() / name).string(); }

int run_cli(const std::string& args) {
    std::string cmd = std::string(SHOTVAR_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

} // namespace

TEST_CASE("calibration ingest round-trips the table values") {
    std::string path = tmp("cal.json");
    io::write_file(path, R"({
      "dt_seconds": 5e-10, "eplg": 0.01, "unit": "dt",
      "qubits": [
        {"id": 129, "t1": 232, "t2": 120, "p01": 0.0186, "p10": 0.014},
        {"id": 61, "t1": 232, "t2": 110, "p01": 0.0099, "p10": 0.006}
      ]})");
    auto cal = io::ingest_calibration(path);
    CHECK(cal.eplg == 0.01);
    CHECK(cal.qubit(129).t1 == 232.0);
    CHECK(cal.qubit(129).p01 == 0.0186);
    CHECK(cal.qubit(129).p10 == 0.014);
    CHECK(cal.qubit(61).p01 == 0.0099);
    CHECK_THROWS_AS(cal.qubit(999), std::invalid_argument);
}

TEST_CASE("microsecond units convert to dt on ingest") {
    std::string path = tmp("cal_us.json");
    io::write_file(path, R"({
      "dt_seconds": 5e-10, "eplg": 0.002, "unit": "us",
      "qubits": [{"id": 0, "t1": 116, "t2": 60, "p01": 0.01, "p10": 0.01}]})");
    auto cal = io::ingest_calibration(path);
    // 116 us / 0.5 ns per dt = 232000 dt
    CHECK(cal.qubits[0].t1 == Catch::Approx(232000.0));
    CHECK(cal.qubits[0].t2 == Catch::Approx(120000.0));
}

TEST_CASE("calibration schema violations name the offending path") {
    std::string path = tmp("cal_bad.json");
    io::write_file(path, R"({"dt_seconds": 5e-10, "unit": "dt",
      "qubits": [{"id": 0, "t1": 1, "t2": 1, "p01": 0, "p10": 0}]})");
    CHECK_THROWS_MATCHES(io::ingest_calibration(path), parse_error,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("$.eplg")));

    io::write_file(path, R"({"dt_seconds": 5e-10, "eplg": 0.01, "unit": "dt",
      "qubits": [{"id": 0, "t1": 1, "t2": 1, "p01": 0}]})");
    CHECK_THROWS_MATCHES(io::ingest_calibration(path), parse_error,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("$.qubits[0].p10")));

    io::write_file(path, R"({"dt_seconds": 5e-10, "eplg": 0.01, "unit": "furlongs",
      "qubits": [{"id": 0, "t1": 1, "t2": 1, "p01": 0, "p10": 0}]})");
    CHECK_THROWS_AS(io::ingest_calibration(path), parse_error);

    io::write_file(path, "{not json");
    CHECK_THROWS_AS(io::ingest_calibration(path), parse_error);

    // invariant violations are parse errors too; physicality is a warning
    io::write_file(path, R"({"dt_seconds": 5e-10, "eplg": 0.01, "unit": "dt",
      "qubits": [{"id": 0, "t1": -3, "t2": 1, "p01": 0, "p10": 0}]})");
    CHECK_THROWS_AS(io::ingest_calibration(path), parse_error);

    io::write_file(path, R"({"dt_seconds": 5e-10, "eplg": 0.01, "unit": "dt",
      "qubits": [{"id": 0, "t1": 10, "t2": 30, "p01": 0, "p10": 0}]})");
    std::vector<Diagnostic> warnings;
    CHECK_NOTHROW(io::ingest_calibration(path, &warnings));
    CHECK(warnings.size() == 1);
}

TEST_CASE("series CSV round trip with frozen header") {
    auto series = sim::sample_coin(0.5, 64, 7);
    std::string path = tmp("series.csv");
    io::write_series_csv(path, series);

    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "# seed=7, spec=coin;p1=0.5;shots=64, hash=" + io::hex64(series.spec_hash));

    auto back = io::read_series_csv(path);
    CHECK(back.values == series.values);
    CHECK(back.seed == series.seed);
    CHECK(back.spec_label == series.spec_label);
    CHECK(back.spec_hash == series.spec_hash);
}

TEST_CASE("series CSV rejects malformed input") {
    std::string path = tmp("series_bad.csv");
    io::write_file(path, "1\n0\n");
    CHECK_THROWS_AS(io::read_series_csv(path), parse_error);
    io::write_file(path, "# seed=1, spec=x, hash=00\nnot-a-number\n");
    CHECK_THROWS_AS(io::read_series_csv(path), parse_error);
}

TEST_CASE("rsd curve CSV has the frozen column order") {
    auto series = sim::sample_coin(0.5, 1 << 15, 3);
    auto curve = clt::rsd_curve(series);
    std::string path = tmp("curve.csv");
    io::write_rsd_csv(path, curve);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "log2_w,log2_rsd");
    std::string first;
    std::getline(in, first);
    CHECK(first.rfind("2,", 0) == 0); // log2(4) = 2
}

TEST_CASE("comparison report rows carry the gap and its color") {
    std::vector<std::pair<std::string, double>> pred = {
        {"1", -3.030}, {"2", -0.836}, {"3", -0.851}, {"only-pred", 1.0}};
    std::vector<std::pair<std::string, double>> real = {
        {"1", -2.871}, {"2", -1.690}, {"3", -2.820}, {"only-real", 2.0}};
    auto report = io::build_comparison(pred, real);
    REQUIRE(report.rows.size() == 3);
    CHECK(report.rows[0].delta == Catch::Approx(0.159));
    CHECK(report.rows[0].color == clt::Color::Green);
    CHECK(report.rows[1].delta == Catch::Approx(0.854));
    CHECK(report.rows[1].color == clt::Color::Yellow);
    CHECK(report.rows[2].delta == Catch::Approx(1.969));
    CHECK(report.rows[2].color == clt::Color::Black);
    REQUIRE(report.unmatched.size() == 2);

    std::string path = tmp("report.csv");
    io::write_comparison_csv(path, report);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "id,c_pred,c_real,delta,color");

    auto rows = io::read_id_value_csv(path);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].first == "1");
    CHECK(rows[0].second == Catch::Approx(-3.030));
}

TEST_CASE("identical prediction and measurement compare all green") {
    std::vector<std::pair<std::string, double>> vals = {{"a", -1.0}, {"b", 0.5}};
    auto report = io::build_comparison(vals, vals);
    for (const auto& r : report.rows) {
        CHECK(r.delta == 0.0);
        CHECK(r.color == clt::Color::Green);
    }
    CHECK(report.unmatched.empty());
}

TEST_CASE("wait shorthand parses reps and gate kind") {
    auto w = io::parse_wait("100x");
    CHECK(w.reps == 100);
    CHECK(w.kind == WaitKind::X);
    CHECK(io::parse_wait("10h").kind == WaitKind::H);
    CHECK(io::parse_wait("1000id").reps == 1000);
    CHECK(io::parse_wait("1000id").kind == WaitKind::Id);
    CHECK_THROWS_AS(io::parse_wait("xid"), parse_error);
    CHECK_THROWS_AS(io::parse_wait("12q"), parse_error);
}

TEST_CASE("svg outputs carry the expected structure") {
    auto scatter = svg::scatter_plot({{2.0, -1.0}, {3.0, -1.5}}, svg::FitLine{-0.5, 0.0},
                                     "log2 w", "log2 RSD");
    CHECK(scatter.rfind("<?xml", 0) == 0);
    CHECK(scatter.find("<svg xmlns='http://www.w3.org/2000/svg' width='640' height='480'>") !=
          std::string::npos);
    CHECK(std::count(scatter.begin(), scatter.end(), '\n') > 10);
    std::size_t circles = 0;
    for (std::size_t pos = 0; (pos = scatter.find("<circle", pos)) != std::string::npos; ++pos)
        ++circles;
    CHECK(circles == 2);

    auto grid = svg::grid_map({{"0", clt::Color::Green}, {"1", clt::Color::Black}});
    CHECK(grid.find("#2ca02c") != std::string::npos);
    CHECK(grid.find("#222222") != std::string::npos);
}

TEST_CASE("cli: simulate coin then analyze reproduces the baseline") {
    std::string series_path = tmp("cli_coin.csv");
    REQUIRE(run_cli("simulate --kind coin --p1 0.5 --shots 32768 --seed 7 -o " + series_path) == 0);
    auto series = io::read_series_csv(series_path);
    CHECK(series.size() == 32768);
    CHECK(fs::exists(series_path + ".manifest.json"));

    std::string curve_path = tmp("cli_curve.csv");
    std::string report_path = tmp("cli_fit.json");
    std::string svg_path = tmp("cli_plot.svg");
    REQUIRE(run_cli("analyze " + series_path + " -o " + curve_path + " --report " + report_path +
                    " --svg " + svg_path) == 0);
    auto fit = nlohmann::json::parse(io::read_file(report_path));
    CHECK(std::fabs(fit["c"].get<double>()) < 0.1);
    CHECK(fit["slope"].get<double>() == -0.5);
    CHECK(fs::exists(svg_path));
}

TEST_CASE("cli: fixed seeds are bit-reproducible") {
    std::string a = tmp("rep_a.csv"), b = tmp("rep_b.csv");
    REQUIRE(run_cli("simulate --kind coin --p1 0.3 --shots 4096 --seed 42 -o " + a) == 0);
    REQUIRE(run_cli("simulate --kind coin --p1 0.3 --shots 4096 --seed 42 -o " + b) == 0);
    CHECK(io::read_file(a) == io::read_file(b));
}

TEST_CASE("cli: t2 simulation with wait shorthand") {
    std::string cal = tmp("cli_cal.json");
    io::write_file(cal, R"({"dt_seconds": 5e-10, "eplg": 0.01, "unit": "dt",
      "qubits": [{"id": 0, "t1": 500, "t2": 400, "p01": 0.01, "p10": 0.02}]})");
    std::string out = tmp("cli_t2.csv");
    REQUIRE(run_cli("simulate --kind t2 --calibration " + cal +
                    " --qubit 0 --wait 100x --shots 8192 --seed 5 -o " + out) == 0);
    auto series = io::read_series_csv(out);
    CHECK(series.size() == 8192);
}

TEST_CASE("cli: vqe simulation runs on the fixture") {
    std::string cal = tmp("cli_cal4.json");
    io::write_file(cal, R"({"dt_seconds": 5e-10, "eplg": 0.004, "unit": "dt",
      "qubits": [
        {"id": 0, "t1": 20000, "t2": 15000, "p01": 0.01, "p10": 0.008},
        {"id": 1, "t1": 18000, "t2": 14000, "p01": 0.012, "p10": 0.007},
        {"id": 2, "t1": 22000, "t2": 16000, "p01": 0.009, "p10": 0.01},
        {"id": 3, "t1": 21000, "t2": 15500, "p01": 0.011, "p10": 0.009}
      ]})");
    std::string out = tmp("cli_vqe.csv");
    REQUIRE(run_cli(std::string("simulate --kind vqe --hamiltonian ") + SHOTVAR_DATA_DIR +
                    "/h2.pauli --calibration " + cal +
                    " --reps 1 --depth 100 --shots 4096 --seed 9 -o " + out) == 0);
    auto series = io::read_series_csv(out);
    CHECK(series.size() == 4096);
}

TEST_CASE("cli: predict emits intermediates") {
    REQUIRE(run_cli("predict --model spam --p01 0.33 --p10 0.33") == 0);
    REQUIRE(run_cli("predict --model t1 --p01 0 --p10 0 --t1 100 --t 69.3") == 0);
    // symmetric readout -> c = 0; t1 model at t = 0 equals the spam model
    std::string out = tmp("pred.json");
    std::string cmd = std::string(SHOTVAR_CLI_PATH) +
                      " predict --model t1 --p01 0.0186 --p10 0.014 --t1 232 --t 0 > " + out;
    REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
    auto j = nlohmann::json::parse(io::read_file(out));
    CHECK(j["c_pred"].get<double>() == Catch::Approx(-0.006636).margin(1e-5));
    CHECK(j["b"].get<double>() == Catch::Approx(1.0));
}

TEST_CASE("cli: shots arithmetic") {
    std::string out = tmp("shots.json");
    std::string cmd = std::string(SHOTVAR_CLI_PATH) +
                      " shots --mean 16.3 --c -2.871 --sigma 0.098 > " + out;
    REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
    auto j = nlohmann::json::parse(io::read_file(out));
    CHECK(j["shots_exact"].get<std::uint64_t>() == 517);
    CHECK(j["shots_pow2"].get<std::uint64_t>() == 1024);

    cmd = std::string(SHOTVAR_CLI_PATH) + " shots --mean 1.84 --c -2.407 --shots 256 > " + out;
    REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
    j = nlohmann::json::parse(io::read_file(out));
    CHECK(j["sigma"].get<double>() == Catch::Approx(0.0217).margin(5e-4));
}

TEST_CASE("cli: compare pipeline and error exits") {
    std::string pred = tmp("pred.csv"), real = tmp("real.csv"), out = tmp("cmp.csv");
    io::write_file(pred, "id,c_pred\n1,-3.030\n2,-3.180\n");
    io::write_file(real, "id,c_real\n1,-2.871\n2,-2.760\n");
    REQUIRE(run_cli("compare --pred " + pred + " --real " + real + " -o " + out + " --svg " +
                    tmp("cmp.svg")) == 0);
    auto text = io::read_file(out);
    CHECK(text.find("green") != std::string::npos);

    io::write_file(real, "id,c_real\n3,-2.871\n");
    CHECK(run_cli("compare --pred " + pred + " --real " + real + " -o " + out) == 2);
}

TEST_CASE("cli: exit codes per error family") {
    // schema error -> 2
    std::string bad = tmp("bad.json");
    io::write_file(bad, "{}");
    CHECK(run_cli("simulate --kind t1 --calibration " + bad + " --qubit 0 -o " + tmp("x.csv")) ==
          2);
    // capacity error -> 3 (series too short for the default windows)
    std::string small = tmp("small.csv");
    REQUIRE(run_cli("simulate --kind coin --shots 128 --seed 1 -o " + small) == 0);
    CHECK(run_cli("analyze " + small + " -o " + tmp("y.csv")) == 3);
    // degenerate statistics -> 4
    CHECK(run_cli("predict --model coin --p1 1.0") == 4);
}

TEST_CASE("cli: tmap classifies a population") {
    std::string values = tmp("t1s.csv");
    io::write_file(values, "id,t1\n0,80\n1,90\n2,100\n3,110\n4,120\n5,95\n");
    std::string svg_path = tmp("tmap.svg");
    std::string csv_path = tmp("tmap.csv");
    REQUIRE(run_cli("tmap --values " + values + " -o " + svg_path + " --csv " + csv_path) == 0);
    auto text = io::read_file(csv_path);
    CHECK(text.find("id,value,color") == 0);
    CHECK(text.find("orange") != std::string::npos);
}
