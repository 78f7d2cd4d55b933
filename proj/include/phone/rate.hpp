#pragma once

#include <Eigen/Dense>

#include "phone/channel.hpp"
#include "phone/config.hpp"
#include "phone/precoder.hpp"

namespace phone {

/// Rate of user k for the effective precoder F = B_RF * B_BB (N_T x K):
/// W * log2(1 + |h_k^H f_k|^2 / (sum_{i != k} |h_k^H f_i|^2 + sigma_n^2)).
double user_rate(const ChannelSet& ch, const Eigen::MatrixXcd& effective, int k,
                 const SystemConfig& cfg);

double user_rate(const ChannelSet& ch, const HybridPrecoder& p, int k,
                 const SystemConfig& cfg);

double sum_rate(const ChannelSet& ch, const Eigen::MatrixXcd& effective,
                const SystemConfig& cfg);

double sum_rate(const ChannelSet& ch, const HybridPrecoder& p,
                const SystemConfig& cfg);

}  // namespace phone
