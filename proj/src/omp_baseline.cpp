#include "phone/omp_baseline.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace phone {

DigitalPrecoder zf_target(const ChannelSet& ch, const SystemConfig& cfg) {
    const int K = ch.n_users();
    Eigen::MatrixXcd H = ch.h.adjoint();  // K x N_T, row k = h_k^H
    Eigen::MatrixXcd gram = H * H.adjoint();
    Eigen::LLT<Eigen::MatrixXcd> llt(gram);
    if (llt.info() != Eigen::Success) {
        gram.diagonal().array() += 1e-10 * gram.real().trace() / K;
        llt.compute(gram);
        if (llt.info() != Eigen::Success)
            throw std::runtime_error("zf_target: singular channel Gram");
    }
    DigitalPrecoder dp;
    dp.b = H.adjoint() * llt.solve(Eigen::MatrixXcd::Identity(K, K));
    const double per_user = cfg.p_max_w() / K;
    for (int k = 0; k < K; ++k) {
        double n = dp.b.col(k).norm();
        if (n > 0) dp.b.col(k) *= std::sqrt(per_user) / n;
    }
    return dp;
}

HybridPrecoder omp_hybrid(const ChannelSet& ch, const DigitalPrecoder& target,
                          const SystemConfig& cfg, Structure structure) {
    const int n_tx = cfg.n_tx;
    const int n_rf = cfg.n_rf;
    const int n_rays = cfg.n_rays;
    if (n_rays < n_rf)
        throw std::invalid_argument("omp_hybrid: dictionary smaller than n_rf");

    // dictionary of unit-norm ray responses
    Eigen::MatrixXcd dict(n_tx, n_rays);
    for (int i = 0; i < n_rays; ++i)
        dict.col(i) = array_response(ch.azimuth(i), ch.elevation(i), cfg);

    const int block = n_tx / n_rf;
    const double sqrt_nt = std::sqrt(static_cast<double>(n_tx));

    HybridPrecoder p;
    p.structure = structure;
    p.rf_phases.resize(structure == Structure::Partial ? block : n_tx, n_rf);
    p.b_bb = Eigen::MatrixXcd::Zero(n_rf, target.b.cols());

    Eigen::MatrixXcd residual = target.b;
    std::vector<int> selected;
    std::vector<bool> used(n_rays, false);
    Eigen::MatrixXcd rf = Eigen::MatrixXcd::Zero(n_tx, n_rf);
    for (int round = 0; round < n_rf; ++round) {
        // atom with the largest total correlation against the residual
        int best = -1;
        double best_corr = -1.0;
        for (int i = 0; i < n_rays; ++i) {
            if (used[i]) continue;
            double corr = (dict.col(i).adjoint() * residual).squaredNorm();
            if (corr > best_corr) {
                best_corr = corr;
                best = i;
            }
        }
        used[best] = true;
        selected.push_back(best);

        // chain `round` takes the new atom's phases
        if (structure == Structure::Partial) {
            for (int r = 0; r < block; ++r) {
                int antenna = round * block + r;
                double ph = std::arg(dict(antenna, best));
                p.rf_phases(r, round) = ph;
                rf(antenna, round) = std::complex<double>(std::cos(ph), std::sin(ph));
            }
        } else {
            // dictionary atoms have unit-modulus entries, so phasing equals
            // scaling the atom by sqrt(N_T)
            for (int i = 0; i < n_tx; ++i) {
                double ph = std::arg(dict(i, best));
                p.rf_phases(i, round) = ph;
            }
            rf.col(round) = sqrt_nt * dict.col(best);
        }

        // least-squares baseband refit on the chains assigned so far
        Eigen::MatrixXcd rf_active = rf.leftCols(round + 1);
        Eigen::MatrixXcd bb =
            rf_active.colPivHouseholderQr().solve(target.b);
        p.b_bb.topRows(round + 1) = bb;
        residual = target.b - rf_active * bb;
    }

    // power cap
    Eigen::MatrixXcd eff = rf * p.b_bb;
    double power = eff.squaredNorm();
    if (power > cfg.p_max_w())
        p.b_bb *= std::sqrt(cfg.p_max_w() / power);
    return p;
}

}  // namespace phone
