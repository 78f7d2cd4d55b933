// Command line front end: parameter sweeps to CSV and single-shot runs.
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "phone/channel.hpp"
#include "phone/factorization.hpp"
#include "phone/rng.hpp"
#include "phone/sweep.hpp"

namespace {

std::vector<int> parse_int_list(const std::string& csv) {
    std::vector<int> out;
    std::istringstream is(csv);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(std::stoi(tok));
    }
    return out;
}

phone::SweepParam parse_param(const std::string& s) {
    if (s == "nt") return phone::SweepParam::NTx;
    if (s == "nrf") return phone::SweepParam::NRf;
    if (s == "k") return phone::SweepParam::NUsers;
    throw CLI::ValidationError("--param must be one of nt, nrf, k");
}

std::vector<phone::Algorithm> parse_algorithms(const std::string& csv) {
    std::vector<phone::Algorithm> out;
    std::istringstream is(csv);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        if (tok.empty()) continue;
        if (tok == "phone")
            out.push_back(phone::Algorithm::Phone);
        else if (tok == "omp_full")
            out.push_back(phone::Algorithm::OmpFull);
        else if (tok == "omp_partial")
            out.push_back(phone::Algorithm::OmpPartial);
        else
            throw CLI::ValidationError("unknown algorithm: " + tok);
    }
    if (out.empty()) throw CLI::ValidationError("--algorithms is empty");
    return out;
}

// Diagnostics: iteration trace of one representative run (first sweep
// value, trial 0) so convergence can be inspected without rerunning.
void write_trace(const std::string& path, const phone::SystemConfig& cfg,
                 std::uint64_t chan_seed) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open trace file " + path);
    phone::ChannelSet ch = phone::sample_channel(cfg, chan_seed);
    phone::PhoneResult pr = phone::phone(
        ch, cfg, phone::mix_seed(chan_seed, 1), phone::Structure::Partial);
    out << "stage,step,eta,step_norm,mu,distance,sdr_objective\n";
    char buf[256];
    for (const auto& it : pr.upper.trace) {
        std::snprintf(buf, sizeof(buf), "digital,%d,%.12g,%.12g,%.12g,,\n",
                      it.iter, it.eta, it.step_norm, it.mu);
        out << buf;
    }
    for (const auto& alt : pr.factorization.trace) {
        std::snprintf(buf, sizeof(buf), "factorization,%d,,,,%.12g,%.12g\n",
                      alt.alternation, alt.distance, alt.sdr_objective);
        out << buf;
    }
}

int run_sweep_cmd(const std::string& config_path, const std::string& param,
                  const std::string& values, int trials,
                  const std::string& algorithms, std::uint64_t seed,
                  const std::string& out_path, const std::string& trace_path) {
    phone::SystemConfig base;
    phone::SweepSpec spec;
    try {
        base = phone::load_config(config_path);
        spec.parameter = parse_param(param);
        spec.values = parse_int_list(values);
        spec.trials = trials;
        spec.algorithms = parse_algorithms(algorithms);
        spec.base_seed = seed;
        if (spec.values.empty())
            throw std::invalid_argument("--values is empty");
        if (trials < 1) throw std::invalid_argument("--trials must be >= 1");
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    std::vector<phone::MetricsRecord> records = phone::run_sweep(base, spec);
    phone::write_csv(records, out_path);

    if (!trace_path.empty()) {
        phone::SystemConfig cfg =
            phone::config_at(base, spec.parameter, spec.values.front());
        write_trace(trace_path, cfg,
                    phone::cell_seed(seed, spec.values.front(), 0));
    }

    int failed = 0;
    for (const auto& r : records)
        if (r.failed) ++failed;
    if (failed > 0) {
        std::cerr << failed << " of " << records.size() << " rows failed\n";
        return 3;
    }
    std::cout << records.size() << " rows written to " << out_path << "\n";
    return 0;
}

int run_single_cmd(const std::string& config_path, std::uint64_t seed) {
    phone::SystemConfig cfg;
    try {
        cfg = phone::load_config(config_path);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    std::vector<phone::MetricsRecord> recs =
        phone::run_single(cfg, {phone::Algorithm::Phone}, seed);
    const phone::MetricsRecord& r = recs.front();
    auto kv = [](const char* key, double v) {
        std::printf("%s=%.12g\n", key, v);
    };
    std::printf("algorithm=%s\n", r.algorithm.c_str());
    std::printf("structure=%s\n", r.structure.c_str());
    std::printf("seed=%llu\n", static_cast<unsigned long long>(r.seed));
    kv("sum_rate_bps", r.sum_rate_bps);
    kv("p_pa_w", r.p_pa_w);
    kv("p_rf_w", r.p_rf_w);
    kv("p_ce_w", r.p_ce_w);
    kv("p_cd_w", r.p_cd_w);
    kv("p_lp_bb_w", r.p_lp_bb_w);
    kv("p_lp_rf_w", r.p_lp_rf_w);
    kv("p_complex_w", r.p_complex_w);
    kv("p_fix_w", r.p_fix_w);
    kv("p_total_w", r.p_total_w);
    kv("ee_bit_per_joule", r.ee_bit_per_joule);
    kv("se_bit_per_s_per_hz", r.se_bit_per_s_per_hz);
    kv("cost_total", r.cost_total);
    kv("cost_eff", r.cost_eff);
    std::printf("converged=%d\n", r.converged ? 1 : 0);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hybrid precoding energy-efficiency experiments"};
    app.require_subcommand(1);

    std::string config_path, param = "nt", values, algorithms = "phone,omp_full,omp_partial";
    std::string out_path = "sweep.csv", trace_path;
    int trials = 1;
    std::uint64_t seed = 0;

    CLI::App* sweep = app.add_subcommand("sweep", "parameter sweep to CSV");
    sweep->add_option("--config", config_path, "config file")->required();
    sweep->add_option("--param", param, "swept parameter: nt, nrf or k");
    sweep->add_option("--values", values, "comma separated sweep values")
        ->required();
    sweep->add_option("--trials", trials, "Monte Carlo trials per value");
    sweep->add_option("--algorithms", algorithms,
                      "comma list of phone, omp_full, omp_partial");
    sweep->add_option("--seed", seed, "base seed");
    sweep->add_option("--out", out_path, "output CSV path")->required();
    sweep->add_option("--trace", trace_path,
                      "optional iteration-trace diagnostics file");

    CLI::App* single = app.add_subcommand("single", "one run, key=value output");
    single->add_option("--config", config_path, "config file")->required();
    single->add_option("--seed", seed, "base seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sweep->parsed())
            return run_sweep_cmd(config_path, param, values, trials,
                                 algorithms, seed, out_path, trace_path);
        return run_single_cmd(config_path, seed);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
