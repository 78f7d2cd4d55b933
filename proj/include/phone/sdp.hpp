#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace phone {

/// Small dense trace-form SDP:
///   minimize    Tr(objective * X)
///   subject to  Tr(A_i X)  = b_i   (eq)
///               Tr(C_j X) <= d_j   (ineq)
///               X symmetric PSD.
struct TraceSDP {
    Eigen::MatrixXd objective;
    std::vector<std::pair<Eigen::MatrixXd, double>> eq;
    std::vector<std::pair<Eigen::MatrixXd, double>> ineq;
};

enum class SDPStatus { Optimal, MaxIter, Infeasible };

struct SDPSolution {
    Eigen::MatrixXd X;
    double objective = 0;
    double duality_gap = 0;
    SDPStatus status = SDPStatus::MaxIter;
    int iterations = 0;
};

/// Primal-dual interior point specialized to small dense problems
/// (inequalities handled through scalar slacks). Optimal status implies
/// duality gap, feasibility residuals, and PSD violation all within tol.
SDPSolution solve_sdp(const TraceSDP& prob, double tol = 1e-7);

/// Gaussian randomization rounding: factor X = U diag(lambda) U^T, return
/// L draws x = U diag(sqrt(lambda)) v with v i.i.d. standard normal.
/// Eigenvalues in [-tol_psd, 0) are clamped to zero; anything below
/// -tol_psd throws. Deterministic in seed.
std::vector<Eigen::VectorXd> randomize_rank1(const Eigen::MatrixXd& X, int L,
                                             std::uint64_t seed,
                                             double tol_psd = 1e-7);

}  // namespace phone
