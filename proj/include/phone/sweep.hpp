#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "phone/config.hpp"

namespace phone {

enum class SweepParam { NTx, NRf, NUsers };
enum class Algorithm { Phone, OmpFull, OmpPartial };

const char* to_string(SweepParam p);
const char* to_string(Algorithm a);

struct SweepSpec {
    SweepParam parameter = SweepParam::NTx;
    std::vector<int> values;
    int trials = 1;
    std::uint64_t base_seed = 0;
    std::vector<Algorithm> algorithms = {Algorithm::Phone, Algorithm::OmpFull,
                                         Algorithm::OmpPartial};
};

struct MetricsRecord {
    std::string algorithm;
    std::string structure;
    std::string param;
    int value = 0;
    int trial = 0;
    std::uint64_t seed = 0;  // channel seed shared by all algorithms of the cell
    double sum_rate_bps = 0;
    double p_pa_w = 0, p_rf_w = 0, p_ce_w = 0, p_cd_w = 0, p_lp_bb_w = 0,
           p_lp_rf_w = 0, p_complex_w = 0, p_fix_w = 0, p_total_w = 0;
    double ee_bit_per_joule = 0;
    double se_bit_per_s_per_hz = 0;
    double cost_total = 0;
    double cost_eff = 0;
    bool converged = false;
    bool failed = false;  // row-level failure; not serialized, drives exit code
};

/// Config for one sweep point: the swept parameter substituted, auto
/// fields re-derived, invariants re-checked.
SystemConfig config_at(const SystemConfig& base, SweepParam param, int value);

/// Channel seed of a sweep cell; algorithm seeds are derived from it.
std::uint64_t cell_seed(std::uint64_t base_seed, int value, int trial);

/// Runs every (value, trial, algorithm) cell. One channel draw is shared
/// by all algorithms of a cell (paired comparison). Cells execute on the
/// OpenMP pool when parallel is true; output order is identical either
/// way (value-major, then trial, then algorithm list order).
std::vector<MetricsRecord> run_sweep(const SystemConfig& base,
                                     const SweepSpec& spec,
                                     bool parallel = true);

/// Single evaluation at the base config (no sweep); one record per
/// requested algorithm.
std::vector<MetricsRecord> run_single(const SystemConfig& cfg,
                                      const std::vector<Algorithm>& algorithms,
                                      std::uint64_t seed);

/// Per-sweep-value relative reduction in per-bit power versus a reference
/// algorithm, using trial means. NaN where the reference mean rate is 0.
struct PowerSavingPoint {
    int value = 0;
    double ratio = 0;
};
std::vector<PowerSavingPoint> power_saving_ratio(
    const std::vector<MetricsRecord>& records, const std::string& reference,
    const std::string& algorithm);

std::string csv_header();
std::string to_csv_row(const MetricsRecord& r);
void write_csv(const std::vector<MetricsRecord>& records,
               const std::string& path);
std::vector<MetricsRecord> read_csv(const std::string& path);

}  // namespace phone
