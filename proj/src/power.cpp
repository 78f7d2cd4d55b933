#include "phone/power.hpp"

#include <cmath>
#include <stdexcept>

namespace phone {

int n_shifters(Structure structure, const SystemConfig& cfg) {
    return structure == Structure::Partial ? cfg.n_tx : cfg.n_tx * cfg.n_rf;
}

double pa_power(const Eigen::MatrixXcd& effective, const SystemConfig& cfg) {
    return effective.squaredNorm() / cfg.pa_efficiency;
}

double pa_power(const HybridPrecoder& p, const SystemConfig& cfg) {
    return pa_power(p.effective(cfg.n_tx), cfg);
}

double rf_chain_power(const SystemConfig& cfg) {
    return cfg.n_rf * cfg.p_one_rf_w;
}

double channel_estimation_power(const SystemConfig& cfg) {
    const int kappa = cfg.kappa;
    int stages = 0;
    {
        long long v = 1;
        while (v < cfg.n_aod) {
            v *= kappa;
            ++stages;
        }
        if (v != cfg.n_aod)
            throw std::invalid_argument(
                "channel_estimation_power: n_aod must be a power of kappa");
    }
    const double k2 = static_cast<double>(kappa) * kappa;
    double bracket = (k2 - 1.0) * stages / cfg.delta_err - 2.0;
    if (bracket < 0.0)
        throw std::invalid_argument(
            "channel_estimation_power: negative training factor "
            "(delta_err inconsistent with n_aod/kappa)");
    // beamforming gain per stage, capped at the array gain
    double gain_sum = 0.0;
    double g = 1.0;
    for (int s = 1; s <= stages; ++s) {
        g *= kappa;
        gain_sum += 1.0 / std::min(g, static_cast<double>(cfg.n_tx));
    }
    return cfg.ce_scale * cfg.n_users * cfg.n_rays * k2 *
           (2.0 / cfg.snr_avg_linear) * bracket * gain_sum;
}

double phone_complexity_flops(const SystemConfig& cfg) {
    return std::pow(static_cast<double>(cfg.n_tx), 3.0) +
           std::pow(static_cast<double>(cfg.n_users), 3.5);
}

double omp_complexity_flops(const SystemConfig& cfg) {
    // dictionary correlations
    return static_cast<double>(cfg.n_rf) * cfg.n_rays * cfg.n_tx * cfg.n_users;
}

ComputationPower computation_power(const SystemConfig& cfg, double sum_rate_bps,
                                   Structure structure, double theta_flops) {
    if (sum_rate_bps < 0)
        throw std::invalid_argument("computation_power: negative sum rate");
    ComputationPower cp{};
    cp.p_ce = channel_estimation_power(cfg);
    cp.p_cd = cfg.p_cod_w_per_bps * sum_rate_bps;
    cp.p_lp_bb = 2.0 * sum_rate_bps * cfg.n_rf /
                 (cfg.bits_per_symbol * cfg.l_tr_flops_per_w);
    cp.p_lp_rf = n_shifters(structure, cfg) * cfg.p_shifter_w;
    cp.p_complex = theta_flops * cfg.c_cmplx / cfg.l_tr_flops_per_w;
    return cp;
}

PowerBreakdown total_power(const SystemConfig& cfg,
                           const Eigen::MatrixXcd& effective,
                           double sum_rate_bps, Structure structure,
                           double theta_flops) {
    PowerBreakdown pb;
    pb.p_pa = pa_power(effective, cfg);
    pb.p_rf = rf_chain_power(cfg);
    ComputationPower cp = computation_power(cfg, sum_rate_bps, structure, theta_flops);
    pb.p_ce = cp.p_ce;
    pb.p_cd = cp.p_cd;
    pb.p_lp_bb = cp.p_lp_bb;
    pb.p_lp_rf = cp.p_lp_rf;
    pb.p_complex = cp.p_complex;
    pb.p_fix = cfg.p_fix_w;
    pb.p_total = pb.p_pa + pb.p_rf + pb.p_ce + pb.p_cd + pb.p_lp_bb +
                 pb.p_lp_rf + pb.p_complex + pb.p_fix;
    return pb;
}

PowerBreakdown total_power(const SystemConfig& cfg, const HybridPrecoder& p,
                           double sum_rate_bps, double theta_flops) {
    return total_power(cfg, p.effective(cfg.n_tx), sum_rate_bps, p.structure,
                       theta_flops);
}

double energy_efficiency(double sum_rate_bps, const PowerBreakdown& pb) {
    return sum_rate_bps / pb.p_total;
}

CostBreakdown total_cost(const SystemConfig& cfg, const PowerBreakdown& pb,
                         Structure structure) {
    CostBreakdown cb;
    cb.c_hardware = cfg.beta_t * cfg.n_tx +
                    cfg.beta_shifter * n_shifters(structure, cfg) +
                    cfg.beta_rf * cfg.n_rf + cfg.beta_bb;
    cb.c_power = cfg.beta_power * pb.p_total;
    cb.c_total = cb.c_hardware + cb.c_power;
    return cb;
}

double cost_efficiency(const SystemConfig& cfg, double sum_rate_bps,
                       const PowerBreakdown& pb, Structure structure) {
    return sum_rate_bps / total_cost(cfg, pb, structure).c_total;
}

}  // namespace phone
