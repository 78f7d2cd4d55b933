#pragma once

#include <Eigen/Dense>

#include "phone/config.hpp"
#include "phone/precoder.hpp"

namespace phone {

/// Itemized transmitter power. Communication power = p_pa + p_rf;
/// computation power = p_ce + p_cd + p_lp_bb + p_lp_rf + p_complex.
struct PowerBreakdown {
    double p_pa = 0;       // amplifiers
    double p_rf = 0;       // RF chains
    double p_ce = 0;       // channel estimation (beam training)
    double p_cd = 0;       // channel coding
    double p_lp_bb = 0;    // baseband linear processing
    double p_lp_rf = 0;    // phase shifters
    double p_complex = 0;  // precoding algorithm execution
    double p_fix = 0;
    double p_total = 0;

    double communication() const { return p_pa + p_rf; }
    double computation() const {
        return p_ce + p_cd + p_lp_bb + p_lp_rf + p_complex;
    }
};

struct CostBreakdown {
    double c_hardware = 0;
    double c_power = 0;
    double c_total = 0;
};

int n_shifters(Structure structure, const SystemConfig& cfg);

/// (1/alpha) * ||B_RF * B_BB||_F^2 for an explicit effective precoder.
double pa_power(const Eigen::MatrixXcd& effective, const SystemConfig& cfg);
double pa_power(const HybridPrecoder& p, const SystemConfig& cfg);

double rf_chain_power(const SystemConfig& cfg);

/// Hierarchical beam-training estimation power; independent of the
/// precoder. Throws if n_aod is not a power of kappa or the bracketed
/// factor comes out negative (inconsistent delta_err).
double channel_estimation_power(const SystemConfig& cfg);

/// Algorithm-execution complexity estimates (flops) fed into p_complex.
double phone_complexity_flops(const SystemConfig& cfg);
double omp_complexity_flops(const SystemConfig& cfg);

struct ComputationPower {
    double p_ce, p_cd, p_lp_bb, p_lp_rf, p_complex;
};

ComputationPower computation_power(const SystemConfig& cfg, double sum_rate_bps,
                                   Structure structure, double theta_flops);

PowerBreakdown total_power(const SystemConfig& cfg,
                           const Eigen::MatrixXcd& effective,
                           double sum_rate_bps, Structure structure,
                           double theta_flops);

PowerBreakdown total_power(const SystemConfig& cfg, const HybridPrecoder& p,
                           double sum_rate_bps, double theta_flops);

double energy_efficiency(double sum_rate_bps, const PowerBreakdown& pb);

CostBreakdown total_cost(const SystemConfig& cfg, const PowerBreakdown& pb,
                         Structure structure);

double cost_efficiency(const SystemConfig& cfg, double sum_rate_bps,
                       const PowerBreakdown& pb, Structure structure);

}  // namespace phone
