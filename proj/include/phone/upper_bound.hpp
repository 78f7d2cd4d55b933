#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "phone/channel.hpp"
#include "phone/config.hpp"
#include "phone/power.hpp"
#include "phone/precoder.hpp"

namespace phone {

/// Relaxed (fully-digital) objective pieces at a given B. The power model
/// uses the partial-structure shifter count and the composed-algorithm
/// complexity, so digital and hybrid evaluations share one accounting.
struct RelaxedEval {
    Eigen::VectorXd signal;        // S_k = |h_k^H b_k|^2
    Eigen::VectorXd interf_denom;  // delta_k = sum_{i!=k}|h_k^H b_i|^2 + sigma^2
    Eigen::VectorXd rates;         // bit/s per user
    double r_sum = 0;
    double p_total = 0;
    double eta = 0;  // r_sum / p_total
};

struct IterationState {
    int iter = 0;
    double eta = 0;
    double step_norm = 0;
    double mu = 0;
};

struct UpperBoundResult {
    DigitalPrecoder precoder;
    std::vector<IterationState> trace;
    RelaxedEval final_eval;
    bool converged = false;
};

RelaxedEval relaxed_eval(const Eigen::MatrixXcd& b, const ChannelSet& ch,
                         const SystemConfig& cfg);

/// delta_i of the relaxed problem; always >= sigma_n^2.
double interference_denominator(const DigitalPrecoder& b, const ChannelSet& ch,
                                int i, const SystemConfig& cfg);

/// Per-user stationarity matrices (phi_k Hermitian positive definite for
/// B != 0, psi_k Hermitian PSD rank one). The gradient of the relaxed
/// energy efficiency with respect to (Re b_k, Im b_k) as independent
/// coordinates is (psi_k - phi_k) b_k / p_total^2.
struct StationarityMatrices {
    std::vector<Eigen::MatrixXcd> phi;
    std::vector<Eigen::MatrixXcd> psi;
};

StationarityMatrices stationarity_matrices(const DigitalPrecoder& b,
                                           const ChannelSet& ch,
                                           const SystemConfig& cfg,
                                           const RelaxedEval& state);

/// Column k = (psi_k b_k - phi_k b_k) / p_total^2.
Eigen::MatrixXcd ee_gradient(const DigitalPrecoder& b, const ChannelSet& ch,
                             const SystemConfig& cfg);

/// Hermitian solve with diagonal jitter fallback; throws if the matrix is
/// not positive definite even after jitter.
Eigen::VectorXcd solve_spd(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& rhs);

/// Preconditioned ascent with a shared line-search step per iteration.
/// The returned eta trace is non-decreasing; candidates exceeding the
/// transmit power budget are rescaled onto the boundary first.
UpperBoundResult optimize_digital(const ChannelSet& ch, const SystemConfig& cfg,
                                  std::uint64_t seed);

}  // namespace phone
