#include "phone/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "phone/channel.hpp"
#include "phone/factorization.hpp"
#include "phone/omp_baseline.hpp"
#include "phone/power.hpp"
#include "phone/rate.hpp"
#include "phone/rng.hpp"

namespace phone {

const char* to_string(SweepParam p) {
    switch (p) {
        case SweepParam::NTx: return "nt";
        case SweepParam::NRf: return "nrf";
        default: return "k";
    }
}

const char* to_string(Algorithm a) {
    switch (a) {
        case Algorithm::Phone: return "phone";
        case Algorithm::OmpFull: return "omp_full";
        default: return "omp_partial";
    }
}

SystemConfig config_at(const SystemConfig& base, SweepParam param, int value) {
    SystemConfig cfg = base;
    switch (param) {
        case SweepParam::NTx:
            cfg.n_tx = value;
            if (base.array_rows * base.array_cols != value) {
                cfg.array_rows = 0;  // re-derive the panel shape
                cfg.array_cols = 0;
            }
            break;
        case SweepParam::NRf:
            cfg.n_rf = value;
            break;
        case SweepParam::NUsers:
            cfg.n_users = value;
            break;
    }
    cfg.finalize();
    return cfg;
}

std::uint64_t cell_seed(std::uint64_t base_seed, int value, int trial) {
    return mix_seed(base_seed, static_cast<std::uint64_t>(value),
                    static_cast<std::uint64_t>(trial));
}

namespace {

MetricsRecord evaluate_cell(const SystemConfig& cfg, SweepParam param,
                            int value, int trial, Algorithm algo,
                            const ChannelSet& ch, std::uint64_t chan_seed) {
    MetricsRecord rec;
    rec.algorithm = to_string(algo);
    rec.param = to_string(param);
    rec.value = value;
    rec.trial = trial;
    rec.seed = chan_seed;

    Structure structure =
        algo == Algorithm::OmpFull ? Structure::Full : Structure::Partial;
    rec.structure = to_string(structure);

    std::uint64_t algo_seed =
        mix_seed(chan_seed, static_cast<std::uint64_t>(algo) + 1);

    HybridPrecoder precoder;
    double theta = 0;
    bool converged = true;
    if (algo == Algorithm::Phone) {
        PhoneResult pr = phone(ch, cfg, algo_seed, Structure::Partial);
        precoder = pr.precoder;
        converged = pr.upper.converged && pr.factorization.converged;
        theta = phone_complexity_flops(cfg);
    } else {
        DigitalPrecoder target = zf_target(ch, cfg);
        precoder = omp_hybrid(ch, target, cfg, structure);
        theta = omp_complexity_flops(cfg);
    }

    Eigen::MatrixXcd eff = precoder.effective(cfg.n_tx);
    rec.sum_rate_bps = sum_rate(ch, eff, cfg);
    PowerBreakdown pb =
        total_power(cfg, eff, rec.sum_rate_bps, structure, theta);
    rec.p_pa_w = pb.p_pa;
    rec.p_rf_w = pb.p_rf;
    rec.p_ce_w = pb.p_ce;
    rec.p_cd_w = pb.p_cd;
    rec.p_lp_bb_w = pb.p_lp_bb;
    rec.p_lp_rf_w = pb.p_lp_rf;
    rec.p_complex_w = pb.p_complex;
    rec.p_fix_w = pb.p_fix;
    rec.p_total_w = pb.p_total;
    rec.ee_bit_per_joule = energy_efficiency(rec.sum_rate_bps, pb);
    rec.se_bit_per_s_per_hz = rec.sum_rate_bps / cfg.bandwidth_hz;
    CostBreakdown cb = total_cost(cfg, pb, structure);
    rec.cost_total = cb.c_total;
    rec.cost_eff = cost_efficiency(cfg, rec.sum_rate_bps, pb, structure);
    rec.converged = converged;
    return rec;
}

}  // namespace

std::vector<MetricsRecord> run_sweep(const SystemConfig& base,
                                     const SweepSpec& spec, bool parallel) {
    if (spec.values.empty())
        throw std::invalid_argument("run_sweep: empty value list");
    if (spec.trials < 1)
        throw std::invalid_argument("run_sweep: trials must be >= 1");

    const int n_values = static_cast<int>(spec.values.size());
    const int n_algos = static_cast<int>(spec.algorithms.size());
    const int n_cells = n_values * spec.trials;
    std::vector<MetricsRecord> records(
        static_cast<std::size_t>(n_cells) * n_algos);

#pragma omp parallel for schedule(dynamic) if (parallel)
    for (int cell = 0; cell < n_cells; ++cell) {
        int vi = cell / spec.trials;
        int trial = cell % spec.trials;
        int value = spec.values[vi];
        std::uint64_t chan_seed = cell_seed(spec.base_seed, value, trial);
        SystemConfig cfg;
        ChannelSet ch;
        bool cell_ok = true;
        try {
            cfg = config_at(base, spec.parameter, value);
            ch = sample_channel(cfg, chan_seed);
        } catch (const std::exception&) {
            cell_ok = false;
        }
        for (int ai = 0; ai < n_algos; ++ai) {
            MetricsRecord& rec =
                records[static_cast<std::size_t>(cell) * n_algos + ai];
            if (!cell_ok) {
                rec.algorithm = to_string(spec.algorithms[ai]);
                rec.param = to_string(spec.parameter);
                rec.value = value;
                rec.trial = trial;
                rec.seed = chan_seed;
                rec.failed = true;
                continue;
            }
            try {
                rec = evaluate_cell(cfg, spec.parameter, value, trial,
                                    spec.algorithms[ai], ch, chan_seed);
            } catch (const std::exception&) {
                rec.failed = true;
                rec.algorithm = to_string(spec.algorithms[ai]);
                rec.param = to_string(spec.parameter);
                rec.value = value;
                rec.trial = trial;
                rec.seed = chan_seed;
            }
        }
    }
    return records;
}

std::vector<MetricsRecord> run_single(const SystemConfig& cfg,
                                      const std::vector<Algorithm>& algorithms,
                                      std::uint64_t seed) {
    std::vector<MetricsRecord> out;
    std::uint64_t chan_seed = cell_seed(seed, cfg.n_tx, 0);
    ChannelSet ch = sample_channel(cfg, chan_seed);
    for (Algorithm a : algorithms)
        out.push_back(
            evaluate_cell(cfg, SweepParam::NTx, cfg.n_tx, 0, a, ch, chan_seed));
    return out;
}

std::vector<PowerSavingPoint> power_saving_ratio(
    const std::vector<MetricsRecord>& records, const std::string& reference,
    const std::string& algorithm) {
    struct Acc {
        double p_ref = 0, r_ref = 0, p_alg = 0, r_alg = 0;
        int n_ref = 0, n_alg = 0;
    };
    std::map<int, Acc> by_value;
    for (const auto& r : records) {
        if (r.failed) continue;
        Acc& a = by_value[r.value];
        if (r.algorithm == reference) {
            a.p_ref += r.p_total_w;
            a.r_ref += r.sum_rate_bps;
            ++a.n_ref;
        }
        if (r.algorithm == algorithm) {
            a.p_alg += r.p_total_w;
            a.r_alg += r.sum_rate_bps;
            ++a.n_alg;
        }
    }
    std::vector<PowerSavingPoint> out;
    for (const auto& [value, a] : by_value) {
        PowerSavingPoint p;
        p.value = value;
        if (a.n_ref == 0 || a.n_alg == 0 || a.r_ref <= 0 || a.r_alg <= 0) {
            p.ratio = std::nan("");
        } else {
            double per_bit_ref = (a.p_ref / a.n_ref) / (a.r_ref / a.n_ref);
            double per_bit_alg = (a.p_alg / a.n_alg) / (a.r_alg / a.n_alg);
            p.ratio = (per_bit_ref - per_bit_alg) / per_bit_ref;
        }
        out.push_back(p);
    }
    return out;
}

std::string csv_header() {
    return "algorithm,structure,param,value,trial,seed,sum_rate_bps,p_pa_w,"
           "p_rf_w,p_ce_w,p_cd_w,p_lp_bb_w,p_lp_rf_w,p_complex_w,p_fix_w,"
           "p_total_w,ee_bit_per_joule,se_bit_per_s_per_hz,cost_total,"
           "cost_eff,converged";
}

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace

std::string to_csv_row(const MetricsRecord& r) {
    std::ostringstream os;
    os << r.algorithm << ',' << r.structure << ',' << r.param << ',' << r.value
       << ',' << r.trial << ',' << r.seed << ',' << fmt(r.sum_rate_bps) << ','
       << fmt(r.p_pa_w) << ',' << fmt(r.p_rf_w) << ',' << fmt(r.p_ce_w) << ','
       << fmt(r.p_cd_w) << ',' << fmt(r.p_lp_bb_w) << ',' << fmt(r.p_lp_rf_w)
       << ',' << fmt(r.p_complex_w) << ',' << fmt(r.p_fix_w) << ','
       << fmt(r.p_total_w) << ',' << fmt(r.ee_bit_per_joule) << ','
       << fmt(r.se_bit_per_s_per_hz) << ',' << fmt(r.cost_total) << ','
       << fmt(r.cost_eff) << ',' << (r.converged ? 1 : 0);
    return os.str();
}

void write_csv(const std::vector<MetricsRecord>& records,
               const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_csv: cannot open " + path);
    out << csv_header() << '\n';
    for (const auto& r : records) out << to_csv_row(r) << '\n';
    if (!out) throw std::runtime_error("write_csv: write failed: " + path);
}

std::vector<MetricsRecord> read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line != csv_header())
        throw std::runtime_error("read_csv: bad header");
    std::vector<MetricsRecord> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tok;
        std::vector<std::string> f;
        while (std::getline(ls, tok, ',')) f.push_back(tok);
        if (f.size() != 21) throw std::runtime_error("read_csv: bad row");
        MetricsRecord r;
        r.algorithm = f[0];
        r.structure = f[1];
        r.param = f[2];
        r.value = std::stoi(f[3]);
        r.trial = std::stoi(f[4]);
        r.seed = std::stoull(f[5]);
        r.sum_rate_bps = std::stod(f[6]);
        r.p_pa_w = std::stod(f[7]);
        r.p_rf_w = std::stod(f[8]);
        r.p_ce_w = std::stod(f[9]);
        r.p_cd_w = std::stod(f[10]);
        r.p_lp_bb_w = std::stod(f[11]);
        r.p_lp_rf_w = std::stod(f[12]);
        r.p_complex_w = std::stod(f[13]);
        r.p_fix_w = std::stod(f[14]);
        r.p_total_w = std::stod(f[15]);
        r.ee_bit_per_joule = std::stod(f[16]);
        r.se_bit_per_s_per_hz = std::stod(f[17]);
        r.cost_total = std::stod(f[18]);
        r.cost_eff = std::stod(f[19]);
        r.converged = f[20] == "1";
        out.push_back(r);
    }
    return out;
}

}  // namespace phone
