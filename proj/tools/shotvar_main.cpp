// shotvar: simulate noisy-circuit outcome series, analyze their shot-count
// scaling, predict intercepts from calibration data, budget shots, and
// compare predictions against measurements.

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "shotvar/shotvar.hpp"

namespace sv = shotvar;

namespace {

std::uint64_t default_seed() {
    if (const char* env = std::getenv("SHOTVAR_SEED")) return std::strtoull(env, nullptr, 10);
    return 12345;
}

void print_warnings(const std::vector<sv::Diagnostic>& warnings) {
    for (const auto& w : warnings)
        std::cerr << "warning: qubit " << w.qubit_id << " " << w.field << ": " << w.message
                  << "\n";
}

sv::QubitCalibration pick_qubit(const sv::DeviceCalibration& cal, int id) {
    return cal.qubit(id);
}

struct SimulateArgs {
    std::string kind;
    double p1 = 0.5;
    std::string calibration;
    int qubit = 0;
    std::string wait;
    bool pre_measure = false;
    std::string hamiltonian;
    int reps = 0;
    std::vector<double> angles;
    double depth = -1.0;
    int occupation = -1;
    std::size_t shots = 32768;
    std::uint64_t seed = 0;
    std::string output;
};

int cmd_simulate(const SimulateArgs& a) {
    sv::io::RunManifest manifest;
    manifest.command = "simulate --kind " + a.kind;
    manifest.seed = a.seed;

    sv::OutcomeSeries series;
    if (a.kind == "coin") {
        series = sv::sim::sample_coin(a.p1, a.shots, a.seed);
    } else if (a.kind == "t1" || a.kind == "t2") {
        std::vector<sv::Diagnostic> warnings;
        auto cal = sv::io::ingest_calibration(a.calibration, &warnings);
        print_warnings(warnings);
        manifest.input_hashes.emplace_back(a.calibration, sv::io::hash_of_file(a.calibration));
        auto q = pick_qubit(cal, a.qubit);
        auto wait = a.wait.empty() ? sv::io::WaitSpec{} : sv::io::parse_wait(a.wait);
        double t = static_cast<double>(wait.reps);
        if (a.kind == "t1")
            series = sv::sim::sample_t1_coin(q, t, a.shots, a.seed);
        else
            series = sv::sim::sample_t2_coin(q, t, a.pre_measure, a.shots, a.seed);
    } else if (a.kind == "vqe") {
        std::vector<sv::Diagnostic> warnings;
        auto cal = sv::io::ingest_calibration(a.calibration, &warnings);
        print_warnings(warnings);
        manifest.input_hashes.emplace_back(a.calibration, sv::io::hash_of_file(a.calibration));
        manifest.input_hashes.emplace_back(a.hamiltonian, sv::io::hash_of_file(a.hamiltonian));
        auto h = sv::obs::PauliHamiltonian::parse(sv::io::read_file(a.hamiltonian));
        sv::CircuitSpec spec;
        spec.n_qubits = h.n_qubits();
        spec.depth = a.depth < 0.0 ? 0.0 : a.depth;
        sv::sim::AnsatzSpec ansatz;
        ansatz.reps = a.reps;
        ansatz.angles = a.angles;
        ansatz.occupation = a.occupation;
        series = sv::sim::run_experiment(spec, cal, &h, a.shots, a.seed, ansatz);
    } else {
        throw CLI::ValidationError("--kind must be coin, t1, t2 or vqe");
    }

    sv::io::write_series_csv(a.output, series);
    manifest.outputs.push_back(a.output);
    sv::io::write_manifest(manifest);
    std::cout << "wrote " << series.size() << " outcomes to " << a.output << "\n";
    return 0;
}

struct AnalyzeArgs {
    std::string input;
    std::string output;
    std::string report;
    std::string svg;
    std::vector<std::size_t> windows = sv::clt::default_window_sizes();
    std::size_t n_windows = 256;
    bool free_slope = false;
};

int cmd_analyze(const AnalyzeArgs& a) {
    auto series = sv::io::read_series_csv(a.input);
    auto curve = sv::clt::rsd_curve(series, a.windows, a.n_windows);
    auto fit = sv::clt::fit_c(curve, !a.free_slope);

    sv::io::RunManifest manifest;
    manifest.command = "analyze";
    manifest.seed = series.seed;
    manifest.input_hashes.emplace_back(a.input, sv::io::hash_of_file(a.input));

    sv::io::write_rsd_csv(a.output, curve);
    manifest.outputs.push_back(a.output);

    auto report = sv::io::fit_report_json(curve, fit);
    if (a.report.empty()) {
        std::cout << report.dump(2) << "\n";
    } else {
        sv::io::write_file(a.report, report.dump(2) + "\n");
        manifest.outputs.push_back(a.report);
    }
    if (!a.svg.empty()) {
        std::vector<std::pair<double, double>> pts;
        for (const auto& p : curve.points) pts.emplace_back(p.log2_w, p.log2_rsd);
        sv::io::write_file(a.svg, sv::svg::scatter_plot(pts, sv::svg::FitLine{fit.slope, fit.c},
                                                        "log2 window size", "log2 RSD"));
        manifest.outputs.push_back(a.svg);
    }
    sv::io::write_manifest(manifest);
    return 0;
}

struct PredictArgs {
    std::string model;
    double p1 = 0.5;
    std::optional<double> p01, p10;
    std::string calibration;
    int qubit = 0;
    std::string wait;
    std::optional<double> t;
    std::optional<double> t1_override, t2_override;
    // observable budget
    std::string hamiltonian;
    std::optional<double> mean;
    std::optional<double> var_h, var_t1, var_t2, var_gate, var_readout;
    std::string method = "popoviciu";
    std::string aggregate = "median";
    double depth = 0.0;
    bool include_readout = false;
};

int cmd_predict(const PredictArgs& a) {
    nlohmann::json out;
    out["model"] = a.model;

    auto readout_pair = [&]() -> std::pair<double, double> {
        if (a.p01 && a.p10) return {*a.p01, *a.p10};
        if (a.calibration.empty())
            throw CLI::ValidationError("need --p01/--p10 or --calibration with --qubit");
        std::vector<sv::Diagnostic> warnings;
        auto cal = sv::io::ingest_calibration(a.calibration, &warnings);
        print_warnings(warnings);
        auto q = pick_qubit(cal, a.qubit);
        return {q.p01, q.p10};
    };
    auto wait_time = [&]() -> double {
        if (a.t) return *a.t;
        if (!a.wait.empty()) return static_cast<double>(sv::io::parse_wait(a.wait).reps);
        return 0.0;
    };

    if (a.model == "coin") {
        out["p1"] = a.p1;
        out["c_pred"] = sv::predict::c_coin(a.p1);
    } else if (a.model == "spam") {
        auto [p01, p10] = readout_pair();
        double p_eff = sv::sim::effective_p1_spam(0.5, p01, p10);
        out["p01"] = p01;
        out["p10"] = p10;
        out["p_effective"] = p_eff;
        out["c_pred"] = sv::predict::c_spam(p01, p10);
        out["c_unhalved"] = sv::predict::c_spam_unhalved(p01, p10);
    } else if (a.model == "t1" || a.model == "t2") {
        auto [p01, p10] = readout_pair();
        double t = wait_time();
        double time_constant;
        if (a.model == "t1" && a.t1_override)
            time_constant = *a.t1_override;
        else if (a.model == "t2" && a.t2_override)
            time_constant = *a.t2_override;
        else {
            if (a.calibration.empty())
                throw CLI::ValidationError("need --t1/--t2 or --calibration with --qubit");
            auto cal = sv::io::ingest_calibration(a.calibration);
            auto q = pick_qubit(cal, a.qubit);
            time_constant = a.model == "t1" ? q.t1 : q.t2;
        }
        double eps_d = 1.0 - std::exp(-t / time_constant);
        out["p01"] = p01;
        out["p10"] = p10;
        out["t"] = t;
        out[a.model == "t1" ? "t1" : "t2"] = time_constant;
        out["eps_decay"] = eps_d;
        if (a.model == "t1") {
            out["b"] = sv::predict::b_t1(t, time_constant);
            out["c_pred"] = sv::predict::c_t1(p01, p10, t, time_constant);
        } else {
            if (t > 0.0) out["b"] = sv::predict::b_t2(t, time_constant);
            out["c_pred"] = sv::predict::c_t2(p01, p10, t, time_constant);
        }
    } else if (a.model == "observable") {
        sv::predict::VarianceBudget budget;
        if (a.var_h && a.mean) {
            budget.var_h = *a.var_h;
            budget.var_t1 = a.var_t1.value_or(0.0);
            budget.var_t2 = a.var_t2.value_or(0.0);
            budget.var_gate = a.var_gate.value_or(0.0);
            budget.var_readout = a.var_readout.value_or(0.0);
            budget.mean_h = *a.mean;
        } else {
            if (a.hamiltonian.empty() || a.calibration.empty())
                throw CLI::ValidationError(
                    "observable model needs --hamiltonian + --calibration (or an explicit "
                    "--mean/--var-h budget)");
            auto h = sv::obs::PauliHamiltonian::parse(sv::io::read_file(a.hamiltonian));
            std::vector<sv::Diagnostic> warnings;
            auto cal = sv::io::ingest_calibration(a.calibration, &warnings);
            print_warnings(warnings);
            auto bounds = sv::obs::spectrum_bounds(h);
            out["lambda_min"] = bounds.lambda_min;
            out["lambda_max"] = bounds.lambda_max;
            double mean_h = a.mean.value_or(std::fabs(bounds.lambda_min));
            if (a.method == "popoviciu")
                budget.var_h = sv::obs::popoviciu_bound(bounds);
            else if (a.method == "bhatia-davis")
                budget.var_h = sv::obs::bhatia_davis_bound(bounds, -std::fabs(mean_h));
            else if (a.method == "coeff-sum")
                budget.var_h = sv::obs::coeff_sum_bound(h);
            else if (a.method == "eigenstate")
                budget.var_h = 0.0;
            else
                throw CLI::ValidationError("unknown --method " + a.method);
            auto policy = a.aggregate == "min" ? sv::noisevar::Aggregation::Minimum
                                               : sv::noisevar::Aggregation::Median;
            std::vector<double> t1s, t2s;
            int n = h.n_qubits();
            for (int q = 0; q < n; ++q) {
                t1s.push_back(cal.qubits[static_cast<std::size_t>(q)].t1);
                t2s.push_back(cal.qubits[static_cast<std::size_t>(q)].t2);
            }
            double t1 = sv::noisevar::aggregate_time(t1s, policy);
            double t2 = sv::noisevar::aggregate_time(t2s, policy);
            auto noise = sv::noisevar::closed_form_noise_variance(n, 1.0, a.depth / t1,
                                                                  a.depth / t2, a.depth, cal.eplg);
            budget.var_t1 = noise.t1;
            budget.var_t2 = noise.t2;
            budget.var_gate = noise.gate;
            if (a.include_readout) {
                double vr = 0.0;
                for (int q = 0; q < n; ++q)
                    vr += sv::noisevar::readout_bit_variance(
                        cal.qubits[static_cast<std::size_t>(q)].p10,
                        cal.qubits[static_cast<std::size_t>(q)].p01, q, true);
                budget.var_readout = vr;
            }
            budget.mean_h = mean_h;
            out["t1_aggregated"] = t1;
            out["t2_aggregated"] = t2;
        }
        out["mean_h"] = budget.mean_h;
        out["var_h"] = budget.var_h;
        out["var_t1"] = budget.var_t1;
        out["var_t2"] = budget.var_t2;
        out["var_gate"] = budget.var_gate;
        out["var_readout"] = budget.var_readout;
        out["noise_sum"] = budget.noise_sum();
        out["total_variance"] = budget.total();
        out["c_pred"] = sv::predict::c_observable(budget);
    } else {
        throw CLI::ValidationError("--model must be coin, spam, t1, t2 or observable");
    }

    std::cout << out.dump(2) << "\n";
    return 0;
}

struct ShotsArgs {
    double mean = 0.0;
    double c = 0.0;
    std::optional<double> sigma;
    std::optional<std::uint64_t> shots;
};

int cmd_shots(const ShotsArgs& a) {
    nlohmann::json out;
    out["mean"] = a.mean;
    out["c"] = a.c;
    if (a.sigma) {
        auto plan = sv::predict::shots_for_sigma(a.mean, a.c, *a.sigma);
        out["target_sigma"] = *a.sigma;
        out["shots_exact"] = plan.exact;
        out["shots_pow2"] = plan.pow2;
        out["sigma_at_exact"] = plan.sigma_at_exact;
        out["sigma_at_pow2"] = plan.sigma_at_pow2;
    } else if (a.shots) {
        out["shots"] = *a.shots;
        out["sigma"] = sv::predict::sigma_at_shots(a.mean, a.c, *a.shots);
        out["log2_rsd"] = a.c - 0.5 * std::log2(static_cast<double>(*a.shots));
    } else {
        throw CLI::ValidationError("need --sigma or --shots");
    }
    std::cout << out.dump(2) << "\n";
    return 0;
}

struct CompareArgs {
    std::string pred;
    std::string real;
    std::string output;
    std::string svg;
    bool strict = false;
};

int cmd_compare(const CompareArgs& a) {
    auto preds = sv::io::read_id_value_csv(a.pred);
    auto reals = sv::io::read_id_value_csv(a.real);
    auto report = sv::io::build_comparison(preds, reals);
    if (report.rows.empty()) throw sv::parse_error("compare: no matching ids between the files");

    sv::io::RunManifest manifest;
    manifest.command = "compare";
    manifest.input_hashes.emplace_back(a.pred, sv::io::hash_of_file(a.pred));
    manifest.input_hashes.emplace_back(a.real, sv::io::hash_of_file(a.real));

    sv::io::write_comparison_csv(a.output, report);
    manifest.outputs.push_back(a.output);
    if (!a.svg.empty()) {
        std::vector<std::pair<std::string, sv::clt::Color>> cells;
        for (const auto& r : report.rows) cells.emplace_back(r.id, r.color);
        sv::io::write_file(a.svg, sv::svg::grid_map(cells));
        manifest.outputs.push_back(a.svg);
    }
    sv::io::write_manifest(manifest);

    for (const auto& id : report.unmatched) std::cerr << "unmatched id: " << id << "\n";
    std::cout << "compared " << report.rows.size() << " rows ("
              << report.unmatched.size() << " unmatched)\n";
    if (a.strict && !report.unmatched.empty()) return 2;
    return 0;
}

struct TmapArgs {
    std::string values;
    std::string svg;
    std::string csv;
};

int cmd_tmap(const TmapArgs& a) {
    auto rows = sv::io::read_id_value_csv(a.values);
    std::vector<double> population;
    for (const auto& [id, v] : rows) population.push_back(v);
    std::vector<std::pair<std::string, sv::clt::Color>> cells;
    std::ostringstream csv;
    csv << "id,value,color\n";
    for (const auto& [id, v] : rows) {
        auto color = sv::clt::classify_tmap(population, v);
        cells.emplace_back(id, color);
        csv << id << "," << sv::io::format_full(v) << "," << sv::clt::to_string(color) << "\n";
    }
    sv::io::RunManifest manifest;
    manifest.command = "tmap";
    manifest.input_hashes.emplace_back(a.values, sv::io::hash_of_file(a.values));
    if (!a.csv.empty()) {
        sv::io::write_file(a.csv, csv.str());
        manifest.outputs.push_back(a.csv);
    }
    sv::io::write_file(a.svg, sv::svg::grid_map(cells));
    manifest.outputs.push_back(a.svg);
    sv::io::write_manifest(manifest);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"shot-count and variance analysis for noisy circuit outcomes"};
    app.require_subcommand(1);
    app.set_version_flag("--version", sv::io::kToolVersion);

    SimulateArgs sim_args;
    sim_args.seed = default_seed();
    auto* sim_cmd = app.add_subcommand("simulate", "generate an outcome series");
    sim_cmd->add_option("--kind", sim_args.kind, "coin | t1 | t2 | vqe")->required();
    sim_cmd->add_option("--p1", sim_args.p1, "coin: probability of outcome 1");
    sim_cmd->add_option("--calibration", sim_args.calibration, "calibration JSON file");
    sim_cmd->add_option("--qubit", sim_args.qubit, "calibration qubit id (t1/t2 kinds)");
    sim_cmd->add_option("--wait", sim_args.wait, "wait spec, e.g. 100x, 10h, 1000id");
    sim_cmd->add_flag("--pre-measure", sim_args.pre_measure, "t2: record a pre-measurement");
    sim_cmd->add_option("--hamiltonian", sim_args.hamiltonian, "Pauli text file (vqe)");
    sim_cmd->add_option("--reps", sim_args.reps, "vqe: ansatz layer count");
    sim_cmd->add_option("--angles", sim_args.angles, "vqe: rotation angles")->delimiter(',');
    sim_cmd->add_option("--depth", sim_args.depth, "vqe: declared circuit depth in dt");
    sim_cmd->add_option("--occupation", sim_args.occupation,
                        "vqe: initial basis state (-1 = min diagonal)");
    sim_cmd->add_option("--shots", sim_args.shots, "shot count");
    sim_cmd->add_option("--seed", sim_args.seed, "RNG seed (default: SHOTVAR_SEED env or 12345)");
    sim_cmd->add_option("-o,--output", sim_args.output, "outcome CSV path")->required();

    AnalyzeArgs an_args;
    auto* an_cmd = app.add_subcommand("analyze", "window a series and fit its intercept");
    an_cmd->add_option("input", an_args.input, "outcome CSV")->required();
    an_cmd->add_option("-o,--output", an_args.output, "RSD curve CSV path")->required();
    an_cmd->add_option("--report", an_args.report, "fit report JSON path (default: stdout)");
    an_cmd->add_option("--svg", an_args.svg, "scatter plot SVG path");
    an_cmd->add_option("--windows", an_args.windows, "window sizes")->delimiter(',');
    an_cmd->add_option("--n-windows", an_args.n_windows, "windows per size");
    an_cmd->add_flag("--free-slope", an_args.free_slope, "fit the slope instead of fixing -1/2");

    PredictArgs pr_args;
    auto* pr_cmd = app.add_subcommand("predict", "closed-form intercept prediction");
    pr_cmd->add_option("--model", pr_args.model, "coin | spam | t1 | t2 | observable")->required();
    pr_cmd->add_option("--p1", pr_args.p1, "coin: probability of outcome 1");
    pr_cmd->add_option("--p01", pr_args.p01, "readout 0->1 probability");
    pr_cmd->add_option("--p10", pr_args.p10, "readout 1->0 probability");
    pr_cmd->add_option("--calibration", pr_args.calibration, "calibration JSON file");
    pr_cmd->add_option("--qubit", pr_args.qubit, "calibration qubit id");
    pr_cmd->add_option("--wait", pr_args.wait, "wait spec, e.g. 100x");
    pr_cmd->add_option("--t", pr_args.t, "wait time in dt (overrides --wait)");
    pr_cmd->add_option("--t1", pr_args.t1_override, "T1 in dt (overrides calibration)");
    pr_cmd->add_option("--t2", pr_args.t2_override, "T2 in dt (overrides calibration)");
    pr_cmd->add_option("--hamiltonian", pr_args.hamiltonian, "Pauli text file (observable)");
    pr_cmd->add_option("--mean", pr_args.mean, "observable mean <H>");
    pr_cmd->add_option("--var-h", pr_args.var_h, "observable variance");
    pr_cmd->add_option("--var-t1", pr_args.var_t1, "T1 noise variance");
    pr_cmd->add_option("--var-t2", pr_args.var_t2, "T2 noise variance");
    pr_cmd->add_option("--var-gate", pr_args.var_gate, "gate noise variance");
    pr_cmd->add_option("--var-readout", pr_args.var_readout, "readout noise variance");
    pr_cmd->add_option("--method", pr_args.method,
                       "popoviciu | bhatia-davis | coeff-sum | eigenstate");
    pr_cmd->add_option("--aggregate", pr_args.aggregate, "median | min T1/T2 aggregation");
    pr_cmd->add_option("--depth", pr_args.depth, "circuit depth in dt (observable)");
    pr_cmd->add_flag("--include-readout", pr_args.include_readout,
                     "add per-bit readout variance to the budget");

    ShotsArgs sh_args;
    auto* sh_cmd = app.add_subcommand("shots", "shot budget for a target sigma, or sigma at n");
    sh_cmd->add_option("--mean", sh_args.mean, "observable mean")->required();
    sh_cmd->add_option("--c", sh_args.c, "intercept")->required();
    sh_cmd->add_option("--sigma", sh_args.sigma, "target sigma");
    sh_cmd->add_option("--shots", sh_args.shots, "shot count to evaluate sigma at");

    CompareArgs cp_args;
    auto* cp_cmd = app.add_subcommand("compare", "join predicted and measured intercepts");
    cp_cmd->add_option("--pred", cp_args.pred, "CSV of id,c_pred")->required();
    cp_cmd->add_option("--real", cp_args.real, "CSV of id,c_real")->required();
    cp_cmd->add_option("-o,--output", cp_args.output, "report CSV path")->required();
    cp_cmd->add_option("--svg", cp_args.svg, "grid map SVG path");
    cp_cmd->add_flag("--strict", cp_args.strict, "exit nonzero on unmatched ids");

    TmapArgs tm_args;
    auto* tm_cmd = app.add_subcommand("tmap", "color a T1/T2 population by z-score bins");
    tm_cmd->add_option("--values", tm_args.values, "CSV of id,value")->required();
    tm_cmd->add_option("-o,--svg", tm_args.svg, "grid map SVG path")->required();
    tm_cmd->add_option("--csv", tm_args.csv, "also write id,value,color CSV");

    try {
        app.parse(argc, argv);
        if (sim_cmd->parsed()) return cmd_simulate(sim_args);
        if (an_cmd->parsed()) return cmd_analyze(an_args);
        if (pr_cmd->parsed()) return cmd_predict(pr_args);
        if (sh_cmd->parsed()) return cmd_shots(sh_args);
        if (cp_cmd->parsed()) return cmd_compare(cp_args);
        if (tm_cmd->parsed()) return cmd_tmap(tm_args);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const sv::parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const sv::degenerate_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const sv::capacity_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
