#include "phone/rate.hpp"

#include <cmath>
#include <stdexcept>

namespace phone {

double user_rate(const ChannelSet& ch, const Eigen::MatrixXcd& effective, int k,
                 const SystemConfig& cfg) {
    const int K = ch.n_users();
    if (k < 0 || k >= K) throw std::out_of_range("user_rate: user index");
    const Eigen::VectorXcd hk = ch.h.col(k);
    double signal = 0.0, interference = 0.0;
    for (int i = 0; i < K; ++i) {
        double p = std::norm(hk.dot(effective.col(i)));  // dot() conjugates hk
        if (i == k)
            signal = p;
        else
            interference += p;
    }
    double sinr = signal / (interference + cfg.noise_power_w());
    return cfg.bandwidth_hz * std::log2(1.0 + sinr);
}

double user_rate(const ChannelSet& ch, const HybridPrecoder& p, int k,
                 const SystemConfig& cfg) {
    return user_rate(ch, p.effective(cfg.n_tx), k, cfg);
}

double sum_rate(const ChannelSet& ch, const Eigen::MatrixXcd& effective,
                const SystemConfig& cfg) {
    double total = 0.0;
    for (int k = 0; k < ch.n_users(); ++k) total += user_rate(ch, effective, k, cfg);
    return total;
}

double sum_rate(const ChannelSet& ch, const HybridPrecoder& p,
                const SystemConfig& cfg) {
    return sum_rate(ch, p.effective(cfg.n_tx), cfg);
}

}  // namespace phone
