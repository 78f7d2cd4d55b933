#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "phone/channel.hpp"
#include "phone/config.hpp"
#include "phone/precoder.hpp"
#include "phone/sdp.hpp"
#include "phone/upper_bound.hpp"

namespace phone {

struct FactorizationProblem {
    DigitalPrecoder b_opt;
    Structure structure = Structure::Partial;
    double p_max_w = 0;
    double eps2 = 0;  // absolute distance tolerance
    int max_alternations = 50;
};

/// Real homogenized embedding of the baseband fit min ||B_opt - B_RF B_BB||_F
/// under the transmit power ball: x = [Re vec(B_BB); Im vec(B_BB); t] with
/// t^2 = 1, n = 2 K N_RF + 1. For a complex operator A the real form is
/// [[Re A, -Im A], [Im A, Re A]], so x' T x reproduces the squared distance
/// exactly when t = +-1.
struct RealQCQPEmbedding {
    Eigen::MatrixXd T;       // n x n objective
    Eigen::MatrixXd gamma1;  // power ball selector diag(I_{n-1}, 0)
    Eigen::MatrixXd gamma2;  // homogenization selector e_n e_n'
    double power_rhs = 0;    // rhs of Tr(gamma1 X) <= power_rhs
    int n = 0;
};

RealQCQPEmbedding build_embedding(const Eigen::MatrixXcd& b_opt,
                                  const Eigen::MatrixXcd& b_rf,
                                  Structure structure, double p_max_w);

/// Reconstruct B_BB (N_RF x K) from the first n-1 coordinates of x
/// (column-major vec, real block then imaginary block).
Eigen::MatrixXcd de_embed(const Eigen::VectorXd& x_head, int n_rf, int k);

struct BasebandStepResult {
    Eigen::MatrixXcd b_bb;      // N_RF x K
    double sdr_objective = 0;   // Tr(T X_opt), lower bound of the fit
    double rounded_objective = 0;  // squared distance of the kept candidate
    bool rank1_exact = false;
    bool power_rescaled = false;  // no randomized candidate was feasible
};

/// SDR + Gaussian randomization baseband update for a fixed RF matrix.
/// The returned matrix always satisfies ||B_RF * B_BB||_F^2 <= p_max.
BasebandStepResult baseband_step(const FactorizationProblem& prob,
                                 const Eigen::MatrixXcd& b_rf,
                                 const SystemConfig& cfg, std::uint64_t seed);

/// Phase update: phase(B_RF(i, j)) = arg(B_opt(i,:) * B_BB(j,:)^H) for the
/// owning chain j (partial) or for every chain (full). Zero inner products
/// get phase 0. Returns phases in HybridPrecoder layout.
Eigen::MatrixXd rf_step(const Eigen::MatrixXcd& b_opt,
                        const Eigen::MatrixXcd& b_bb, Structure structure,
                        int n_tx);

struct AlternationRecord {
    int alternation = 0;
    double distance = 0;       // accepted ||B_opt - B_RF B_BB||_F
    double sdr_objective = 0;
    double rounding_gap = 0;   // rounded - SDR objective
};

struct FactorizationResult {
    HybridPrecoder precoder;
    std::vector<AlternationRecord> trace;  // accepted distances, non-increasing
    double distance = 0;
    bool converged = false;
};

/// Alternating minimization from a random-phase RF start. A new pair is
/// accepted only when it strictly reduces the distance; otherwise up to 3
/// re-randomized baseband steps are tried before stopping.
FactorizationResult factorize(const FactorizationProblem& prob,
                              const SystemConfig& cfg, std::uint64_t seed);

/// EE-ascent refit of the baseband stage with the RF matrix held fixed.
/// The reduced substitution b = R * b_bb, h_red = Q^H h (thin QR of B_RF)
/// maps the hybrid problem onto the relaxed digital one exactly, so the
/// digital ascent machinery is reused. Returns the input unchanged when
/// the RF columns are numerically dependent.
HybridPrecoder polish_baseband(const HybridPrecoder& p, const ChannelSet& ch,
                               const SystemConfig& cfg, std::uint64_t seed);

struct PhoneResult {
    HybridPrecoder precoder;
    UpperBoundResult upper;
    FactorizationResult factorization;
};

/// Composed pipeline: digital upper-bound ascent, then hybrid factorization.
PhoneResult phone(const ChannelSet& ch, const SystemConfig& cfg,
                  std::uint64_t seed, Structure structure = Structure::Partial);

}  // namespace phone
