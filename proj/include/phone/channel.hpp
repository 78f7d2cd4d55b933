#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "phone/config.hpp"

namespace phone {

/// One multipath draw: the K downlink channel vectors plus the ray
/// parameters they were generated from. Immutable after sampling.
struct ChannelSet {
    Eigen::MatrixXcd h;          // N_T x K, column k = h_k
    Eigen::MatrixXcd ray_gains;  // K x N_ray, rho_{ki}
    Eigen::VectorXd azimuth;     // N_ray
    Eigen::VectorXd elevation;   // N_ray
    std::uint64_t seed = 0;

    int n_users() const { return static_cast<int>(h.cols()); }
    int n_tx() const { return static_cast<int>(h.rows()); }
};

/// Uniform planar array response, unit Euclidean norm. Antenna (m, n) is
/// enumerated row-major over 0 <= m < array_rows, 0 <= n < array_cols.
Eigen::VectorXcd array_response(double azimuth, double elevation,
                                const SystemConfig& cfg);

/// Geometry-based stochastic channel: h_k = sqrt(N_T eps_k / N_ray) *
/// sum_i rho_ki u(theta_i, phi_i). Ray angles are shared across users,
/// gains are i.i.d. CN(0,1) per (user, ray). Deterministic in seed.
ChannelSet sample_channel(const SystemConfig& cfg, std::uint64_t seed);

}  // namespace phone
