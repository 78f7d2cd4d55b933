#pragma once

#include <Eigen/Dense>

#include "phone/config.hpp"

namespace phone {

/// Fully-digital precoder, column k serves user k.
struct DigitalPrecoder {
    Eigen::MatrixXcd b;  // N_T x K

    double frob_norm() const { return b.norm(); }
    double frob_norm_sq() const { return b.squaredNorm(); }
};

/// Analog + digital precoder pair. The analog stage is stored as phases
/// only; materialize_rf() produces the complex matrix with the structural
/// zero pattern applied.
///
/// Partial: phases is (N_T / N_RF) x N_RF, column j = phases of the
/// sub-array owned by chain j; B_RF is block diagonal.
/// Full: phases is N_T x N_RF, every entry of B_RF has unit modulus.
struct HybridPrecoder {
    Structure structure = Structure::Partial;
    Eigen::MatrixXd rf_phases;
    Eigen::MatrixXcd b_bb;  // N_RF x K

    Eigen::MatrixXcd materialize_rf(int n_tx) const;
    Eigen::MatrixXcd effective(int n_tx) const;  // B_RF * B_BB, N_T x K
};

/// Owning chain of antenna row i (0-based) under the ceiling rule
/// j = ceil((i+1) * N_RF / N_T) - 1. With N_RF | N_T these are contiguous
/// equal blocks of N_T / N_RF rows.
inline int owning_chain(int antenna, int n_rf, int n_tx) {
    return static_cast<int>(
        (static_cast<long long>(antenna + 1) * n_rf + n_tx - 1) / n_tx - 1);
}

}  // namespace phone
