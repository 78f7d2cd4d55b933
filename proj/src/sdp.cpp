#include "phone/sdp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "phone/rng.hpp"

namespace phone {

namespace {

double dot_tr(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    // trace(a * b); exact for symmetric a against general b
    return (a.array() * b.transpose().array()).sum();
}

/// Largest alpha in (0, 1] with X + alpha * dX still PSD (fraction 0.98
/// to the boundary).
double max_psd_step(const Eigen::MatrixXd& X, const Eigen::MatrixXd& dX) {
    Eigen::LLT<Eigen::MatrixXd> llt(X);
    if (llt.info() != Eigen::Success) return 0.0;
    Eigen::MatrixXd L = llt.matrixL();
    Eigen::MatrixXd W = L.triangularView<Eigen::Lower>().solve(dX);
    W = L.triangularView<Eigen::Lower>().solve(W.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
        0.5 * (W + W.transpose()), Eigen::EigenvaluesOnly);
    double lmin = es.eigenvalues().minCoeff();
    if (lmin >= 0.0) return 1.0;
    return std::min(1.0, -0.98 / lmin);
}

struct Direction {
    Eigen::MatrixXd dX, dZ;
    Eigen::VectorXd ds, dzs, dy;
};

}  // namespace

SDPSolution solve_sdp(const TraceSDP& prob, double tol) {
    const int n = static_cast<int>(prob.objective.rows());
    if (n < 1 || prob.objective.cols() != n)
        throw std::invalid_argument("solve_sdp: objective must be square");
    const int me = static_cast<int>(prob.eq.size());
    const int mj = static_cast<int>(prob.ineq.size());
    const int m = me + mj;

    // gather constraint operators and right-hand sides
    std::vector<const Eigen::MatrixXd*> A(m);
    Eigen::VectorXd rhs(m);
    for (int i = 0; i < me; ++i) {
        A[i] = &prob.eq[i].first;
        rhs(i) = prob.eq[i].second;
    }
    for (int j = 0; j < mj; ++j) {
        A[me + j] = &prob.ineq[j].first;
        rhs(me + j) = prob.ineq[j].second;
    }
    for (int r = 0; r < m; ++r)
        if (A[r]->rows() != n || A[r]->cols() != n)
            throw std::invalid_argument("solve_sdp: constraint dimension mismatch");

    const Eigen::MatrixXd& C = prob.objective;
    Eigen::MatrixXd X = Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd Z = Eigen::MatrixXd::Identity(n, n) *
                        std::max(1.0, C.norm() / std::sqrt(double(n)));
    Eigen::VectorXd y = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd s(mj), zs(mj);
    for (int j = 0; j < mj; ++j) {
        s(j) = std::max(1.0, rhs(me + j));
        zs(j) = 1.0;
    }

    const double bnorm = 1.0 + rhs.cwiseAbs().maxCoeff();
    const double cnorm = 1.0 + C.norm();
    const int max_iters = 200;

    SDPSolution sol;
    for (int iter = 0; iter < max_iters; ++iter) {
        // residuals
        Eigen::VectorXd rp(m);
        for (int r = 0; r < m; ++r) {
            rp(r) = rhs(r) - dot_tr(*A[r], X);
            if (r >= me) rp(r) -= s(r - me);
        }
        Eigen::MatrixXd Rd = C - Z;
        for (int r = 0; r < m; ++r) Rd.noalias() -= y(r) * (*A[r]);
        Eigen::VectorXd rd_s(mj);
        for (int j = 0; j < mj; ++j) rd_s(j) = -y(me + j) - zs(j);

        double gap = dot_tr(X, Z) + (mj ? s.dot(zs) : 0.0);
        double mu = gap / (n + mj);
        double pobj = dot_tr(C, X);
        double dobj = rhs.dot(y);
        double pinf = m ? rp.cwiseAbs().maxCoeff() / bnorm : 0.0;
        double dinf = std::max(Rd.norm() / cnorm,
                               mj ? rd_s.cwiseAbs().maxCoeff() / cnorm : 0.0);
        double relgap = gap / (1.0 + std::abs(pobj));

        sol.iterations = iter;
        if (pinf <= tol && dinf <= tol && relgap <= tol) {
            sol.status = SDPStatus::Optimal;
            break;
        }
        if (y.norm() > 1e9 * bnorm && pinf > 1e3 * tol) {
            sol.status = SDPStatus::Infeasible;
            break;
        }

        Eigen::LDLT<Eigen::MatrixXd> zfac(Z);
        Eigen::MatrixXd Zinv =
            zfac.solve(Eigen::MatrixXd::Identity(n, n));

        // Schur complement M and the dy-independent parts
        std::vector<Eigen::MatrixXd> W(m);  // Zinv * A_q * X
        for (int q = 0; q < m; ++q) W[q] = Zinv * (*A[q]) * X;
        Eigen::MatrixXd M(m, m);
        for (int r = 0; r < m; ++r)
            for (int q = 0; q < m; ++q) M(r, q) = dot_tr(*A[r], W[q]);
        for (int j = 0; j < mj; ++j) M(me + j, me + j) += s(j) / zs(j);
        Eigen::PartialPivLU<Eigen::MatrixXd> mfac(M);

        Eigen::MatrixXd ZinvRdX = Zinv * Rd * X;
        auto solve_direction = [&](double mu_target) {
            Direction d;
            Eigen::VectorXd r2(m);
            Eigen::MatrixXd base = mu_target * Zinv - X - ZinvRdX;
            for (int r = 0; r < m; ++r) r2(r) = rp(r) - dot_tr(*A[r], base);
            for (int j = 0; j < mj; ++j)
                r2(me + j) -=
                    mu_target / zs(j) - s(j) - (s(j) / zs(j)) * rd_s(j);
            d.dy = mfac.solve(r2);
            d.dZ = Rd;
            for (int r = 0; r < m; ++r) d.dZ.noalias() -= d.dy(r) * (*A[r]);
            d.dX = mu_target * Zinv - X - Zinv * d.dZ * X;
            d.dX = 0.5 * (d.dX + d.dX.transpose()).eval();
            d.ds.resize(mj);
            d.dzs.resize(mj);
            for (int j = 0; j < mj; ++j) {
                d.dzs(j) = rd_s(j) - d.dy(me + j);
                d.ds(j) =
                    mu_target / zs(j) - s(j) - (s(j) / zs(j)) * d.dzs(j);
            }
            return d;
        };

        auto step_lengths = [&](const Direction& d) {
            double ap = max_psd_step(X, d.dX);
            double ad = max_psd_step(Z, d.dZ);
            for (int j = 0; j < mj; ++j) {
                if (d.ds(j) < 0) ap = std::min(ap, -0.98 * s(j) / d.ds(j));
                if (d.dzs(j) < 0) ad = std::min(ad, -0.98 * zs(j) / d.dzs(j));
            }
            return std::pair<double, double>(ap, ad);
        };

        // predictor (affine) to pick the centering weight
        Direction aff = solve_direction(0.0);
        auto [ap_aff, ad_aff] = step_lengths(aff);
        double gap_aff = dot_tr(X + ap_aff * aff.dX, Z + ad_aff * aff.dZ);
        for (int j = 0; j < mj; ++j)
            gap_aff += (s(j) + ap_aff * aff.ds(j)) * (zs(j) + ad_aff * aff.dzs(j));
        gap_aff = std::max(gap_aff, 0.0);
        double sigma = std::pow(gap_aff / gap, 3.0);
        sigma = std::min(std::max(sigma, 1e-4), 0.9);

        Direction dir = solve_direction(sigma * mu);
        auto [ap, ad] = step_lengths(dir);
        if (ap <= 1e-14 && ad <= 1e-14) {
            sol.status = SDPStatus::MaxIter;  // stalled
            break;
        }
        X += ap * dir.dX;
        X = 0.5 * (X + X.transpose()).eval();
        Z += ad * dir.dZ;
        Z = 0.5 * (Z + Z.transpose()).eval();
        y += ad * dir.dy;
        s += ap * dir.ds;
        zs += ad * dir.dzs;
    }

    sol.X = 0.5 * (X + X.transpose());
    sol.objective = dot_tr(C, sol.X);
    sol.duality_gap = dot_tr(sol.X, Z) + (mj ? s.dot(zs) : 0.0);
    return sol;
}

std::vector<Eigen::VectorXd> randomize_rank1(const Eigen::MatrixXd& X, int L,
                                             std::uint64_t seed, double tol_psd) {
    const int n = static_cast<int>(X.rows());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(X);
    Eigen::VectorXd lam = es.eigenvalues();
    if (lam.minCoeff() < -tol_psd * std::max(1.0, lam.cwiseAbs().maxCoeff()))
        throw std::invalid_argument("randomize_rank1: X is not PSD");
    Eigen::VectorXd sq = lam.cwiseMax(0.0).cwiseSqrt();

    Rng rng(seed);
    std::vector<Eigen::VectorXd> out;
    out.reserve(L);
    Eigen::VectorXd v(n);
    for (int l = 0; l < L; ++l) {
        for (int i = 0; i < n; ++i) v(i) = rng.gaussian();
        out.push_back(es.eigenvectors() * (sq.asDiagonal() * v));
    }
    return out;
}

}  // namespace phone
