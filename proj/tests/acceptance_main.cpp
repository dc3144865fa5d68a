// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// criterion fails. Each criterion pins its tolerance in code.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "shotvar/shotvar.hpp"

using namespace shotvar;
namespace nv = shotvar::noisevar;
namespace pr = shotvar::predict;

namespace {

int failures = 0;

void report(int number, const std::string& label, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %2d: %s — %s\n", pass ? "PASS" : "FAIL", number, label.c_str(),
                detail.c_str());
    if (!pass) ++failures;
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

double c_real_of(const OutcomeSeries& series) {
    return clt::fit_c(clt::rsd_curve(series), true).c;
}

std::string data_path(const std::string& name) { return std::string(SHOTVAR_DATA_DIR "/") + name; }

DeviceCalibration synthetic_calibration() {
    DeviceCalibration cal;
    cal.dt_seconds = 5e-10;
    cal.eplg = 0.004;
    cal.qubits = {{0, 20000.0, 15000.0, 0.010, 0.008},
                  {1, 18000.0, 14000.0, 0.012, 0.007},
                  {2, 22000.0, 16000.0, 0.009, 0.010},
                  {3, 21000.0, 15500.0, 0.011, 0.009}};
    return cal;
}

// ---------------------------------------------------------------------------

void criterion_1_clt_baseline() {
    // the free fit confirms the -1/2 scaling; c itself is defined with the
    // slope held at -1/2
    auto t0 = std::chrono::steady_clock::now();
    auto series = sim::sample_coin(0.5, 1 << 15, 2024);
    auto curve = clt::rsd_curve(series);
    auto free_fit = clt::fit_c(curve, false);
    auto fixed_fit = clt::fit_c(curve, true);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool pass = std::fabs(free_fit.slope + 0.5) <= 0.05 && std::fabs(fixed_fit.c) < 0.05 &&
                secs < 5.0;
    report(1, "CLT fair-coin baseline", pass,
           "free slope " + fmt(free_fit.slope) + ", c " + fmt(fixed_fit.c) + " (free-fit c " +
               fmt(free_fit.c) + "), " + fmt(secs) + " s");
}

void criterion_2_predictor_oracle_grid() {
    auto t0 = std::chrono::steady_clock::now();
    const std::size_t shots = 1 << 15;
    std::uint64_t seed = 46000;
    int configs = 0;
    double worst = 0.0;
    std::string worst_tag;
    bool pass = true;

    // n_windows = 0: cover all 2^15 shots at every window size for the
    // lowest-noise measured intercept
    auto c_real_full = [](const OutcomeSeries& series) {
        return clt::fit_c(clt::rsd_curve(series, clt::default_window_sizes(), 0), true).c;
    };
    auto check = [&](const std::string& tag, double c_pred, const OutcomeSeries& series) {
        double gap = std::fabs(c_pred - c_real_full(series));
        ++configs;
        if (gap > worst) {
            worst = gap;
            worst_tag = tag;
        }
        if (gap >= 0.1) pass = false;
    };
    auto effective_ok = [](double p) { return p >= 0.055 && p <= 0.945; };

    for (double p1 : {0.1, 0.2, 0.35, 0.5, 0.65, 0.8, 0.9})
        check("coin p1=" + fmt(p1), pr::c_coin(p1), sim::sample_coin(p1, shots, seed++));

    for (double p01 : {0.02, 0.1, 0.25, 0.4})
        for (double p10 : {0.0, 0.05, 0.15, 0.33}) {
            double p_eff = sim::effective_p1_spam(0.5, p01, p10);
            if (!effective_ok(p_eff)) continue;
            QubitCalibration q{0, 1e9, 1e9, p01, p10};
            check("spam " + fmt(p01) + "/" + fmt(p10), pr::c_spam(p01, p10),
                  sim::sample_t1_coin(q, 0.0, shots, seed++));
        }

    const double T = 1000.0;
    for (double p01 : {0.0, 0.05, 0.15})
        for (double p10 : {0.0, 0.1})
            for (double tau : {0.1, 0.5, 1.2}) {
                double t = tau * T;
                QubitCalibration q{0, T, T, p01, p10};
                double p_t1 = sim::effective_p1_spam(0.5 * std::exp(-tau), p01, p10);
                if (effective_ok(p_t1))
                    check("t1 " + fmt(p01) + "/" + fmt(p10) + "/" + fmt(tau),
                          pr::c_t1(p01, p10, t, T), sim::sample_t1_coin(q, t, shots, seed++));
                double p_t2 = sim::effective_p1_spam(0.5 * (1.0 - std::exp(-tau)), p01, p10);
                if (effective_ok(p_t2))
                    check("t2 " + fmt(p01) + "/" + fmt(p10) + "/" + fmt(tau),
                          pr::c_t2(p01, p10, t, T),
                          sim::sample_t2_coin(q, t, false, shots, seed++));
            }

    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    pass = pass && configs >= 50 && secs < 120.0;
    report(2, "predictor-oracle agreement |c_pred - c_real| < 0.1", pass,
           std::to_string(configs) + " configs, worst gap " + fmt(worst) + " (" + worst_tag +
               "), " + fmt(secs) + " s");
}

void criterion_3_sigma_c_worked_example() {
    double v = pr::sigma_c_t2(100.0, 500.0, 20.0);
    bool pass = std::fabs(v - 0.02) <= 0.0005;
    report(3, "sigma_c(100, 500, 20) = 0.02 +/- 0.0005", pass, "got " + fmt(v));
}

void criterion_4_shot_arithmetic() {
    double s512 = pr::sigma_at_shots(16.3, -2.871, 512);
    double s512_conservative = pr::sigma_at_shots(16.3, -2.0, 512);
    double s256 = pr::sigma_at_shots(1.84, -2.407, 256);
    bool pass = std::fabs(s512 - 0.098) <= 0.001 && s512_conservative < 0.19 &&
                s256 >= 0.020 && s256 <= 0.023;
    report(4, "shot arithmetic pins the base-2 convention", pass,
           "sigma(16.3,-2.871,2^9)=" + fmt(s512) + ", conservative " + fmt(s512_conservative) +
               ", sigma(1.84,-2.407,2^8)=" + fmt(s256));
}

struct VqeWorkflow {
    double mean_h = 0.0;
    double noise_sum = 0.0;
    double c_pred_popoviciu = 0.0;
    double c_pred_corrected = 0.0;
    double c_real_pilot = 0.0;
    double c_real_check = 0.0; // independent second run
    CircuitSpec spec;
    DeviceCalibration cal;
    obs::PauliHamiltonian h;
    sim::AnsatzSpec ansatz;
};

VqeWorkflow run_vqe_workflow() {
    VqeWorkflow w{.h = obs::PauliHamiltonian::parse(io::read_file(data_path("h2.pauli")))};
    w.cal = synthetic_calibration();
    w.spec.n_qubits = 4;
    w.spec.depth = 100.0;
    w.ansatz = {1, {0.05, -0.03, 0.04}, -1};

    auto rho = sim::build_ansatz_state(w.spec, w.cal, w.h, w.ansatz);
    w.mean_h = std::fabs(rho.expectation(w.h.to_matrix()));

    std::vector<double> t1s, t2s;
    for (const auto& q : w.cal.qubits) {
        t1s.push_back(q.t1);
        t2s.push_back(q.t2);
    }
    double t1 = nv::aggregate_time(t1s, nv::Aggregation::Median);
    double t2 = nv::aggregate_time(t2s, nv::Aggregation::Median);
    auto noise = nv::closed_form_noise_variance(4, 1.0, w.spec.depth / t1, w.spec.depth / t2,
                                                w.spec.depth, w.cal.eplg);
    w.noise_sum = noise.total;

    pr::VarianceBudget budget;
    budget.mean_h = w.mean_h;
    budget.var_h = obs::popoviciu_bound(obs::spectrum_bounds(w.h));
    budget.var_t1 = noise.t1;
    budget.var_t2 = noise.t2;
    budget.var_gate = noise.gate;
    w.c_pred_popoviciu = pr::c_observable(budget);

    auto pilot = sim::run_experiment(w.spec, w.cal, &w.h, 1 << 15, 90001, w.ansatz);
    w.c_real_pilot = c_real_of(pilot);

    auto corrected = pr::correct_variance(w.mean_h, w.c_real_pilot, w.noise_sum);
    pr::VarianceBudget fixed = budget;
    fixed.var_h = corrected.var_h;
    w.c_pred_corrected = pr::c_observable(fixed);

    auto check = sim::run_experiment(w.spec, w.cal, &w.h, 1 << 15, 90002, w.ansatz);
    w.c_real_check = c_real_of(check);
    return w;
}

void criterion_5_factor_of_two(const VqeWorkflow& w) {
    auto t0 = std::chrono::steady_clock::now();
    bool pass = true;
    std::string detail;
    for (std::size_t n : {std::size_t(256), std::size_t(512)}) {
        double sigma_pred = pr::sigma_at_shots(w.mean_h, w.c_pred_corrected, n);
        std::vector<double> means;
        for (int replay = 0; replay < 100; ++replay) {
            auto series = sim::run_experiment(w.spec, w.cal, &w.h, n,
                                              100000 + static_cast<std::uint64_t>(replay) +
                                                  1000 * static_cast<std::uint64_t>(n),
                                              w.ansatz);
            means.push_back(oracles::mean(series.values));
        }
        double sigma_true = std::sqrt(oracles::sample_variance(means));
        double ratio = sigma_pred / sigma_true;
        if (!(ratio >= 0.5 && ratio <= 2.0)) pass = false;
        detail += "n=" + std::to_string(n) + ": pred " + fmt(sigma_pred) + " true " +
                  fmt(sigma_true) + " ratio " + fmt(ratio) + "; ";
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    pass = pass && secs < 300.0;
    report(5, "estimate-then-correct sigma within a factor of 2", pass,
           detail + fmt(secs) + " s");
}

void criterion_6_moment_formulas() {
    bool pass = true;
    double worst_decay = 0.0, worst_nm = 0.0;
    for (double tau : {0.01, 0.1, 1.0, 5.0, 20.0}) {
        auto [e1, e2] = nv::decay_first_second(tau);
        for (int p : {1, 2}) {
            double quad = oracles::romberg(
                [&](double u) { return std::pow(u, p) * std::exp(-u); }, 0.0, tau);
            double closed = p == 1 ? e1 : e2;
            double moment = nv::decay_moment(p, tau, 1.0);
            worst_decay = std::max({worst_decay, std::fabs(closed - quad),
                                    std::fabs(moment - quad)});
            if (std::fabs(closed - quad) > 1e-9 || std::fabs(moment - quad) > 1e-9) pass = false;
        }
    }
    for (double gamma0 : {0.05, 0.1, 0.2})
        for (double lambda : {5.0, 10.0, 20.0})
            for (int p : {1, 2}) {
                nv::NonMarkovParams params{gamma0, lambda, 5.0};
                double closed = nv::nonmarkov_moment(p, params);
                double quad = oracles::romberg(
                    [&](double t) {
                        double g = nv::nonmarkov_G(t, params);
                        return std::pow(t, p) * g * g;
                    },
                    0.0, params.t0);
                double rel = std::fabs(closed - quad) / std::fabs(quad);
                worst_nm = std::max(worst_nm, rel);
                if (rel > 1e-6) pass = false;
            }
    report(6, "decay and memory-kernel moments match quadrature", pass,
           "decay worst abs " + fmt(worst_decay) + ", memory-kernel worst rel " + fmt(worst_nm));
}

void criterion_7_closed_form_consistency() {
    const int n = 4;
    const double s = 256.0, tau1 = 0.12, tau2 = 0.31, t = 180.0, g = 0.015;
    auto r = nv::closed_form_noise_variance(n, s, tau1, tau2, t, g);
    double scale = n / (2.0 * s);
    double t1_expect = scale * nv::decay_variance(tau1);
    double t2_expect = scale * nv::decay_variance(tau2);
    double gate_expect = nv::gate_walk_variance(t, g, n) / s;
    auto half = nv::closed_form_noise_variance(n, s / 2.0, tau1, tau2, t, g);
    bool pass = std::fabs(r.t1 - t1_expect) <= 1e-12 && std::fabs(r.t2 - t2_expect) <= 1e-12 &&
                std::fabs(r.gate - gate_expect) <= 1e-12 &&
                std::fabs(r.total - (r.t1 + r.t2 + r.gate + r.readout)) <= 1e-12 &&
                std::fabs(half.total - 2.0 * r.total) <= 1e-12;
    report(7, "combined noise variance decomposes exactly", pass,
           "total " + fmt(r.total) + " = " + fmt(r.t1) + " + " + fmt(r.t2) + " + " + fmt(r.gate));
}

void criterion_8_bound_ordering() {
    CounterRng rng(424242, 0);
    std::uint64_t counter = 0;
    int checked = 0;
    bool pass = true;
    for (int trial = 0; trial < 500; ++trial) {
        int n = 1 + static_cast<int>(rng.word(counter++) % 3);
        std::vector<obs::PauliTerm> terms;
        for (int t = 0; t < 4; ++t) {
            std::string word;
            for (int q = 0; q < n; ++q) word.push_back("IXYZ"[rng.word(counter++) % 4]);
            terms.push_back({2.0 * rng.uniform(counter++) - 1.0, word});
        }
        obs::PauliHamiltonian h(terms);
        auto bounds = obs::spectrum_bounds(h);
        auto state = obs::haar_random_state(n, 51000 + static_cast<std::uint64_t>(trial));
        double exact = obs::exact_variance(h, state);
        double mean = (h.to_matrix() * state.matrix()).trace().real();
        mean = std::clamp(mean, bounds.lambda_min, bounds.lambda_max); // fp guard
        double bd = obs::bhatia_davis_bound(bounds, mean);
        double pop = obs::popoviciu_bound(bounds);
        if (!(exact <= bd + 1e-9 && bd <= pop + 1e-9)) pass = false;
        ++checked;
    }

    // equality cases: an eigenstate has zero variance; a balanced extreme
    // superposition puts the mean at the midpoint where the bounds touch
    auto h = obs::PauliHamiltonian::parse("0.7 XZ\n-0.4 ZY\n0.3 YX\n0.2 ZZ");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.to_matrix());
    auto ground = sim::DensityMatrix::from_state_vector(es.eigenvectors().col(0));
    double eigen_var = obs::exact_variance(h, ground);
    if (std::fabs(eigen_var) > 1e-9) pass = false;

    Eigen::VectorXcd mix = (es.eigenvectors().col(0) +
                            es.eigenvectors().col(es.eigenvectors().cols() - 1)) /
                           std::sqrt(2.0);
    auto midpoint = sim::DensityMatrix::from_state_vector(mix);
    auto bounds = obs::spectrum_bounds(h);
    double mid_mean = (h.to_matrix() * midpoint.matrix()).trace().real();
    double bd_mid = obs::bhatia_davis_bound(bounds, mid_mean);
    double pop_mid = obs::popoviciu_bound(bounds);
    if (std::fabs(bd_mid - pop_mid) > 1e-9) pass = false;

    report(8, "variance bound ordering with equality cases", pass,
           std::to_string(checked) + " random cases, eigenstate var " + fmt(eigen_var) +
               ", midpoint BD-Popoviciu gap " + fmt(bd_mid - pop_mid));
}

void criterion_9_correction_round_trip(const VqeWorkflow& w) {
    pr::VarianceBudget budget;
    budget.mean_h = 1.84;
    budget.var_h = 0.0623;
    budget.var_t1 = 0.0114;
    budget.var_t2 = 0.0087;
    budget.var_gate = 0.0021;
    budget.var_readout = 0.0009;
    double c = pr::c_observable(budget);
    auto corrected = pr::correct_variance(budget.mean_h, c, budget.noise_sum());
    double rel = std::fabs(corrected.var_h - budget.var_h) / budget.var_h;

    double gap_before = std::fabs(w.c_pred_popoviciu - w.c_real_check);
    double gap_after = std::fabs(w.c_pred_corrected - w.c_real_check);
    bool pass = rel <= 1e-12 && gap_after < gap_before;
    report(9, "correction inverts the intercept and closes the gap", pass,
           "round-trip rel err " + fmt(rel) + "; gap " + fmt(gap_before) + " -> " +
               fmt(gap_after));
}

void criterion_10_classifier_fixtures() {
    struct Row {
        const char* id;
        double c_pred, c_real, delta_printed;
        clt::Color color;
    };
    // hardware comparison tables, rows as printed
    const std::vector<Row> rows = {
        {"t4-1", -0.851, -2.820, 1.969, clt::Color::Black},
        {"t4-2", -0.851, -2.540, 1.689, clt::Color::Black},
        {"t4-3", -0.851, -2.970, 2.119, clt::Color::Black},
        {"t4-4", -0.836, -1.690, 0.854, clt::Color::Yellow},
        {"t4-5", -0.851, -2.460, 1.609, clt::Color::Black},
        {"t5-1", -2.407, -3.030, 0.623, clt::Color::Yellow},
        {"t5-2", -2.124, -1.590, 0.534, clt::Color::Yellow},
        {"t5-3", -0.722, -0.610, 0.112, clt::Color::Green},
        {"t5-4", -2.408, -2.070, 0.338, clt::Color::Green},
        {"t7-1", -3.030, -2.871, 0.159, clt::Color::Green},
        {"t7-2", -3.180, -2.760, 0.420, clt::Color::Green},
    };
    std::vector<std::pair<std::string, double>> preds, reals;
    for (const auto& r : rows) {
        preds.emplace_back(r.id, r.c_pred);
        reals.emplace_back(r.id, r.c_real);
    }
    auto report_rows = io::build_comparison(preds, reals);
    bool pass = report_rows.rows.size() == rows.size() && report_rows.unmatched.empty();
    double worst = 0.0;
    for (std::size_t i = 0; i < rows.size() && pass; ++i) {
        worst = std::max(worst, std::fabs(report_rows.rows[i].delta - rows[i].delta_printed));
        if (std::fabs(report_rows.rows[i].delta - rows[i].delta_printed) > 0.001) pass = false;
        if (report_rows.rows[i].color != rows[i].color) pass = false;
    }
    report(10, "comparison-table fixtures reproduce printed gaps and colors", pass,
           std::to_string(rows.size()) + " rows, worst delta error " + fmt(worst));
}

void criterion_11_var_var() {
    const std::size_t n = 100000;
    CounterRng rng(31415, 0);
    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) values[i] = rng.normal(i);
    auto series = OutcomeSeries::with_label(std::move(values), 31415, "gaussian");
    double vov = clt::variance_of_variance(series);
    double expected = 2.0 / static_cast<double>(n - 1);
    double rel = std::fabs(vov - expected) / expected;
    report(11, "Var(Var) within 10% of the Gaussian closed form", rel <= 0.10,
           "got " + fmt(vov) + ", expected " + fmt(expected) + ", rel " + fmt(rel));
}

} // namespace

int main() {
    criterion_1_clt_baseline();
    criterion_2_predictor_oracle_grid();
    criterion_3_sigma_c_worked_example();
    criterion_4_shot_arithmetic();
    auto workflow = run_vqe_workflow();
    criterion_5_factor_of_two(workflow);
    criterion_6_moment_formulas();
    criterion_7_closed_form_consistency();
    criterion_8_bound_ordering();
    criterion_9_correction_round_trip(workflow);
    criterion_10_classifier_fixtures();
    criterion_11_var_var();

    if (failures == 0) {
        std::printf("all acceptance criteria passed\n");
        return 0;
    }
    std::printf("%d acceptance criterion(s) failed\n", failures);
    return 1;
}
