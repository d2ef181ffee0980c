#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "monotrend/errors.hpp"
#include "monotrend/estimators.hpp"
#include "monotrend/inference.hpp"
#include "monotrend/isotonic.hpp"
#include "monotrend/limits.hpp"
#include "monotrend/noise.hpp"
#include "monotrend/serialization.hpp"
#include "monotrend/stats.hpp"

namespace {

using nlohmann::json;

double trend_value(const std::string& name, double t) {
    if (name == "m1") return std::exp(t);
    if (name == "m2") {
        if (t <= 0.25) return t;
        if (t <= 0.25 + 1.0 / 200.0) return 0.25 + 20000.0 * (t - 0.25) * (t - 0.25);
        return t + 0.75;
    }
    if (name == "logistic") return 1.0 / (1.0 + std::exp(-20.0 * (t - 0.5)));
    if (name == "tsquared") return t * t;
    throw monotrend::InvalidInput("unknown trend: " + name);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw monotrend::DataError(path + ": cannot open for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

monotrend::DependenceSpec spec_from_flag(const std::string& flag) {
    const std::string text =
        !flag.empty() && flag.front() == '{' ? flag : read_text_file(flag);
    return monotrend::spec_from_json(text);
}

void emit(const std::string& output_path, const std::string& text) {
    if (output_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(output_path);
    if (!out) throw monotrend::DataError(output_path + ": cannot open for writing");
    out << text;
}

monotrend::LookupMode lookup_mode(const std::string& name) {
    if (name == "exact") return monotrend::LookupMode::EXACT_H;
    if (name == "nearest") return monotrend::LookupMode::NEAREST_H;
    if (name == "conservative") return monotrend::LookupMode::CONSERVATIVE;
    throw monotrend::InvalidInput("unknown hurst mode: " + name);
}

/// Table resolution order: --table file, then MONOTREND_TABLE_DIR, then
/// the embedded defaults.
monotrend::QuantileTable resolve_table(const std::string& table_flag, bool psi) {
    if (!table_flag.empty()) {
        return monotrend::table_from_json(read_text_file(table_flag));
    }
    if (const char* dir = std::getenv("MONOTREND_TABLE_DIR")) {
        const std::string path =
            std::string(dir) + "/" + (psi ? "psi.json" : "l_m1.json");
        return monotrend::table_from_json(read_text_file(path));
    }
    return psi ? monotrend::embedded_psi_table() : monotrend::embedded_l_table_m1();
}

json nuisance_block(const monotrend::Nuisance& nu) {
    json j = json::object();
    if (!std::isnan(nu.tau2)) j["tau2"] = nu.tau2;
    if (!std::isnan(nu.hurst)) j["hurst"] = nu.hurst;
    if (!std::isnan(nu.a_hat)) j["a_hat"] = nu.a_hat;
    if (!std::isnan(nu.b_hat)) j["b_hat"] = nu.b_hat;
    return j;
}

std::vector<double> residuals_of(const monotrend::Series& series,
                                 const monotrend::IsotonicFit& fit) {
    std::vector<double> r(series.n());
    for (std::size_t i = 0; i < series.n(); ++i) r[i] = series.ys[i] - fit.fitted[i];
    return r;
}

int run(int argc, char** argv) {
    CLI::App app{"Monotone trend estimation and inference"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "Write a synthetic (t, y) CSV");
    std::string gen_output, gen_trend = "m1", gen_spec;
    std::size_t gen_n = 500;
    std::uint64_t gen_seed = 1;
    bool gen_no_noise = false;
    gen->add_option("--output", gen_output, "CSV output path")->required();
    gen->add_option("--n", gen_n, "sample size");
    gen->add_option("--trend", gen_trend, "trend: m1, m2, logistic, tsquared");
    gen->add_option("--spec", gen_spec, "error-model json (inline or file path)");
    gen->add_option("--seed", gen_seed, "random seed");
    gen->add_flag("--no-noise", gen_no_noise, "emit the pure trend");

    // fit
    auto* fit_cmd = app.add_subcommand("fit", "Isotonic least-squares fit");
    std::string fit_input, fit_output;
    fit_cmd->add_option("--input", fit_input, "CSV input path")->required();
    fit_cmd->add_option("--output", fit_output, "JSON output path (default stdout)");

    // ci
    auto* ci_cmd = app.add_subcommand("ci", "Confidence interval for m(t0)");
    std::string ci_input, ci_output, ci_method = "ln-srd", ci_mode = "exact", ci_table;
    double ci_t0 = 0.5, ci_alpha = 0.10;
    double ci_hurst = std::numeric_limits<double>::quiet_NaN();
    double ci_quantile = std::numeric_limits<double>::quiet_NaN();
    std::uint64_t ci_seed = 1;
    unsigned ci_threads = 0;
    ci_cmd->add_option("--input", ci_input, "CSV input path")->required();
    ci_cmd->add_option("--output", ci_output, "JSON output path (default stdout)");
    ci_cmd->add_option("--t0", ci_t0, "constraint location in (0,1)")->required();
    ci_cmd->add_option("--alpha", ci_alpha, "significance level");
    ci_cmd->add_option("--method", ci_method, "ln-srd, tn-srd, ln-lrd, psi");
    ci_cmd->add_option("--hurst", ci_hurst, "Hurst index (estimated when absent)");
    ci_cmd->add_option("--hurst-mode", ci_mode, "exact, nearest, conservative");
    ci_cmd->add_option("--table", ci_table, "quantile table json path");
    ci_cmd->add_option("--quantile", ci_quantile, "explicit statistic threshold");
    ci_cmd->add_option("--seed", ci_seed, "seed for the bandwidth cross-validation");
    ci_cmd->add_option("--threads", ci_threads, "worker cap for delegated simulation");

    // band
    auto* band_cmd = app.add_subcommand("band", "Simultaneous confidence band");
    std::string band_input, band_output, band_method = "ln-srd", band_table;
    double band_alpha = 0.10, band_a = 0.1, band_b = 0.9;
    double band_quantile = std::numeric_limits<double>::quiet_NaN();
    std::size_t band_k = 0;
    band_cmd->add_option("--input", band_input, "CSV input path")->required();
    band_cmd->add_option("--output", band_output, "JSON output path (default stdout)");
    band_cmd->add_option("--alpha", band_alpha, "simultaneous significance level");
    band_cmd->add_option("--a", band_a, "left end of the band interval");
    band_cmd->add_option("--b", band_b, "right end of the band interval");
    band_cmd->add_option("--k", band_k, "evaluation points (0: floor(n^(1/3)))");
    band_cmd->add_option("--method", band_method, "per-point method: ln-srd, tn-srd");
    band_cmd->add_option("--table", band_table, "quantile table json path");
    band_cmd->add_option("--quantile", band_quantile, "explicit per-point threshold");

    // quantiles
    auto* q_cmd = app.add_subcommand("quantiles", "Simulate limit-distribution quantiles");
    std::string q_output, q_mode = "m1", q_probs = "0.5,0.8,0.85,0.9,0.95";
    std::size_t q_n = 10000, q_reps = 2000;
    double q_step = 2e-4, q_hurst = 0.5, q_var = 1.0;
    std::uint64_t q_seed = 1;
    unsigned q_threads = 0;
    q_cmd->add_option("--output", q_output, "JSON output path (default stdout)");
    q_cmd->add_option("--mode", q_mode, "m1 (finite sample) or m2 (grid limit)");
    q_cmd->add_option("--n", q_n, "sample size per replication (m1)");
    q_cmd->add_option("--reps", q_reps, "Monte Carlo replications");
    q_cmd->add_option("--step", q_step, "grid step (m2)");
    q_cmd->add_option("--hurst", q_hurst, "Hurst index (0.5 for SRD)");
    q_cmd->add_option("--var", q_var, "marginal noise variance (m1)");
    q_cmd->add_option("--probs", q_probs, "comma-separated probabilities");
    q_cmd->add_option("--seed", q_seed, "random seed");
    q_cmd->add_option("--threads", q_threads, "worker cap (0: hardware)");

    // hurst
    auto* h_cmd = app.add_subcommand("hurst", "Wavelet Hurst-index estimate");
    std::string h_input, h_output;
    std::size_t h_vm = 4;
    h_cmd->add_option("--input", h_input, "CSV input path")->required();
    h_cmd->add_option("--output", h_output, "JSON output path (default stdout)");
    h_cmd->add_option("--vanishing-moments", h_vm, "Daubechies order (2-4)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2; // normalize usage failures to exit code 2
    }

    if (gen->parsed()) {
        monotrend::DependenceSpec spec;
        if (!gen_spec.empty()) spec = spec_from_flag(gen_spec);
        std::vector<double> ts(gen_n), ys(gen_n);
        for (std::size_t i = 0; i < gen_n; ++i) {
            ts[i] = static_cast<double>(i + 1) / static_cast<double>(gen_n);
            ys[i] = trend_value(gen_trend, ts[i]);
        }
        if (!gen_no_noise) {
            const monotrend::NoiseSample noise = monotrend::generate(spec, gen_n, gen_seed);
            for (std::size_t i = 0; i < gen_n; ++i) ys[i] += noise.values[i];
        }
        monotrend::write_csv_file(gen_output, ts, ys);
        json sidecar;
        sidecar["command"] = "generate";
        sidecar["n"] = gen_n;
        sidecar["trend"] = gen_trend;
        sidecar["seed"] = gen_seed;
        sidecar["noise"] =
            gen_no_noise ? json(nullptr) : json::parse(monotrend::spec_to_json(spec));
        emit(gen_output + ".json", sidecar.dump(2) + "\n");
        return 0;
    }

    if (fit_cmd->parsed()) {
        const monotrend::DataSet data = monotrend::read_csv_file(fit_input);
        const monotrend::Series series = data.series();
        const monotrend::IsotonicFit fit = monotrend::fit_isotonic(series);
        json j;
        j["fitted"] = fit.fitted;
        j["jump_indices"] = fit.jump_indices;
        j["blocks"] = json::array();
        for (const auto& b : fit.blocks) {
            j["blocks"].push_back({{"start", b.start}, {"end", b.end}, {"level", b.level}});
        }
        j["points"] = json::array();
        for (std::size_t i = 0; i < series.n(); ++i) {
            j["points"].push_back({data.ts[i], fit.fitted[i]});
        }
        emit(fit_output, j.dump(2) + "\n");
        return 0;
    }

    if (ci_cmd->parsed()) {
        const monotrend::DataSet data = monotrend::read_csv_file(ci_input);
        const monotrend::Series series = data.series();
        const monotrend::IsotonicFit fit = monotrend::fit_isotonic(series);
        const std::vector<double> resid = residuals_of(series, fit);
        const monotrend::LookupMode mode = lookup_mode(ci_mode);
        const monotrend::QuantileTable table = resolve_table(ci_table, ci_method == "psi");

        monotrend::ConfidenceInterval ci;
        if (ci_method == "ln-srd" || ci_method == "tn-srd") {
            const double tau2 = monotrend::estimate_tau2(resid).value;
            ci = ci_method == "ln-srd"
                     ? monotrend::ci_ln_srd(series, ci_t0, ci_alpha, table, tau2,
                                            ci_quantile)
                     : monotrend::ci_tn_srd(series, ci_t0, ci_alpha, table, tau2,
                                            ci_quantile);
        } else if (ci_method == "ln-lrd") {
            const double hurst = std::isnan(ci_hurst)
                                     ? monotrend::estimate_hurst(resid).value
                                     : ci_hurst;
            const double a_hat = std::sqrt(monotrend::estimate_sigma2(resid));
            const double h = monotrend::cv_bandwidth(
                series, ci_t0, monotrend::default_bandwidth_grid(series.n()), ci_seed);
            const monotrend::DerivativeEstimate deriv =
                monotrend::estimate_derivative(fit, ci_t0, h);
            ci = monotrend::ci_ln_lrd(series, ci_t0, ci_alpha, table, hurst, a_hat,
                                      deriv.value / 2.0, mode, ci_quantile);
        } else if (ci_method == "psi") {
            const double hurst = std::isnan(ci_hurst) ? 0.5 : ci_hurst;
            ci = monotrend::ci_psi(series, ci_t0, ci_alpha, table, mode, hurst,
                                   monotrend::kNoOverride, monotrend::kNoOverride,
                                   ci_quantile);
        } else {
            throw CLI::ValidationError("--method", "unknown method: " + ci_method);
        }
        json j = json::parse(monotrend::interval_to_json(ci));
        j["table_provenance"] = monotrend::to_string(table.provenance);
        emit(ci_output, j.dump(2) + "\n");
        return 0;
    }

    if (band_cmd->parsed()) {
        const monotrend::DataSet data = monotrend::read_csv_file(band_input);
        const monotrend::Series series = data.series();
        monotrend::CiMethod method;
        if (band_method == "ln-srd") {
            method = monotrend::CiMethod::LN_SRD;
        } else if (band_method == "tn-srd") {
            method = monotrend::CiMethod::TN_SRD;
        } else {
            throw CLI::ValidationError("--method", "unknown method: " + band_method);
        }
        const monotrend::QuantileTable table = resolve_table(band_table, false);
        const monotrend::ConfidenceBand bd =
            monotrend::band(series, band_alpha, band_a, band_b, table, band_k, method,
                            false, band_quantile);
        json j = json::parse(monotrend::band_to_json(bd));
        j["table_provenance"] = monotrend::to_string(table.provenance);
        emit(band_output, j.dump(2) + "\n");
        return 0;
    }

    if (q_cmd->parsed()) {
        std::vector<double> probs;
        std::stringstream ss(q_probs);
        std::string field;
        while (std::getline(ss, field, ',')) probs.push_back(std::stod(field));
        const monotrend::SimulationResult result =
            q_mode == "m1"
                ? monotrend::simulate_m1(q_n, q_reps, q_hurst, q_var, probs, q_seed,
                                         q_threads)
                : monotrend::simulate_m2(q_step, q_reps, q_hurst, probs, q_seed,
                                         q_threads);
        json j;
        j["l_table"] = json::parse(monotrend::table_to_json(result.l_table));
        j["psi_table"] = json::parse(monotrend::table_to_json(result.psi_table));
        j["psi_infinite_count"] = result.sample.psi_infinite_count;
        j["redrawn"] = result.sample.redrawn;
        emit(q_output, j.dump(2) + "\n");
        return 0;
    }

    if (h_cmd->parsed()) {
        const monotrend::DataSet data = monotrend::read_csv_file(h_input);
        const monotrend::HurstEstimate est = monotrend::estimate_hurst(data.ys, h_vm);
        json j;
        j["hurst"] = est.value;
        j["regression_slope"] = est.regression_slope;
        j["octave_lo"] = est.octave_lo;
        j["octave_hi"] = est.octave_hi;
        j["log_variances"] = json::array();
        for (const auto& [octave, v] : est.log_variances) {
            j["log_variances"].push_back({octave, v});
        }
        emit(h_output, j.dump(2) + "\n");
        return 0;
    }

    return 2;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const monotrend::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const monotrend::NumericalFailure& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 4;
    } catch (const monotrend::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
}
