#include "phone/factorization.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "phone/power.hpp"
#include "phone/rate.hpp"
#include "phone/rng.hpp"

namespace phone {

RealQCQPEmbedding build_embedding(const Eigen::MatrixXcd& b_opt,
                                  const Eigen::MatrixXcd& b_rf,
                                  Structure structure, double p_max_w) {
    const int n_tx = static_cast<int>(b_rf.rows());
    const int n_rf = static_cast<int>(b_rf.cols());
    const int K = static_cast<int>(b_opt.cols());
    const int half = K * n_rf;
    const int n = 2 * half + 1;

    RealQCQPEmbedding emb;
    emb.n = n;
    emb.T = Eigen::MatrixXd::Zero(n, n);

    // Gram of I_K (x) B_RF is I_K (x) (B_RF^H B_RF)
    Eigen::MatrixXcd gram = b_rf.adjoint() * b_rf;
    Eigen::MatrixXcd cross = b_rf.adjoint() * b_opt;  // N_RF x K
    for (int k = 0; k < K; ++k) {
        int off = k * n_rf;
        emb.T.block(off, off, n_rf, n_rf) = gram.real();
        emb.T.block(off, half + off, n_rf, n_rf) = -gram.imag();
        emb.T.block(half + off, off, n_rf, n_rf) = gram.imag();
        emb.T.block(half + off, half + off, n_rf, n_rf) = gram.real();
        emb.T.block(off, n - 1, n_rf, 1) = -cross.col(k).real();
        emb.T.block(half + off, n - 1, n_rf, 1) = -cross.col(k).imag();
    }
    emb.T.row(n - 1).head(n - 1) = emb.T.col(n - 1).head(n - 1);
    emb.T(n - 1, n - 1) = b_opt.squaredNorm();

    emb.gamma1 = Eigen::MatrixXd::Identity(n, n);
    emb.gamma1(n - 1, n - 1) = 0.0;
    emb.gamma2 = Eigen::MatrixXd::Zero(n, n);
    emb.gamma2(n - 1, n - 1) = 1.0;
    // Partial: ||B_RF B_BB||_F^2 = (N_T/N_RF) ||B_BB||_F^2, so the ball on
    // ||B_BB|| is exact. Full: no fixed relation exists; the same ball with
    // radius p_max is used as relaxation geometry and candidates are
    // filtered on the exact constraint afterwards.
    emb.power_rhs = structure == Structure::Partial
                        ? p_max_w * n_rf / static_cast<double>(n_tx)
                        : p_max_w;
    return emb;
}

Eigen::MatrixXcd de_embed(const Eigen::VectorXd& x_head, int n_rf, int k) {
    const int half = n_rf * k;
    if (x_head.size() != 2 * half)
        throw std::invalid_argument("de_embed: bad vector length");
    Eigen::MatrixXcd b(n_rf, k);
    for (int c = 0; c < k; ++c)
        for (int r = 0; r < n_rf; ++r) {
            int idx = c * n_rf + r;
            b(r, c) = std::complex<double>(x_head(idx), x_head(half + idx));
        }
    return b;
}

BasebandStepResult baseband_step(const FactorizationProblem& prob,
                                 const Eigen::MatrixXcd& b_rf,
                                 const SystemConfig& cfg, std::uint64_t seed) {
    const int K = static_cast<int>(prob.b_opt.b.cols());
    const int n_rf = static_cast<int>(b_rf.cols());
    const double p_max = prob.p_max_w;

    RealQCQPEmbedding emb =
        build_embedding(prob.b_opt.b, b_rf, prob.structure, p_max);
    TraceSDP sdp;
    sdp.objective = emb.T;
    sdp.eq.emplace_back(emb.gamma2, 1.0);
    sdp.ineq.emplace_back(emb.gamma1, emb.power_rhs);
    SDPSolution sol = solve_sdp(sdp, cfg.sdp_tol);

    BasebandStepResult res;
    res.sdr_objective = sol.objective;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sol.X);
    const auto& lam = es.eigenvalues();
    const int n = emb.n;
    std::vector<Eigen::VectorXd> candidates;
    if (n >= 2 && lam(n - 2) <= 1e-8 * std::max(lam(n - 1), 1e-300)) {
        res.rank1_exact = true;
        candidates.push_back(std::sqrt(std::max(lam(n - 1), 0.0)) *
                             es.eigenvectors().col(n - 1));
    } else {
        candidates = randomize_rank1(sol.X, cfg.n_randomizations, seed,
                                     std::max(1e-7, 10 * cfg.sdp_tol));
    }

    double best_feasible = std::numeric_limits<double>::infinity();
    double best_any = std::numeric_limits<double>::infinity();
    Eigen::MatrixXcd best_feasible_bb, best_any_bb;
    double best_any_power = 0;
    for (const auto& x : candidates) {
        double t = x(n - 1);
        if (std::abs(t) < 1e-12) continue;
        Eigen::MatrixXcd bb = de_embed((x.head(n - 1) / t).eval(), n_rf, K);
        Eigen::MatrixXcd eff = b_rf * bb;
        double power = eff.squaredNorm();
        double dist2 = (prob.b_opt.b - eff).squaredNorm();
        if (power <= p_max * (1.0 + 1e-9)) {
            if (dist2 < best_feasible) {
                best_feasible = dist2;
                best_feasible_bb = bb;
            }
        }
        if (dist2 < best_any) {
            best_any = dist2;
            best_any_bb = bb;
            best_any_power = power;
        }
    }

    if (std::isfinite(best_feasible)) {
        res.b_bb = best_feasible_bb;
        res.rounded_objective = best_feasible;
    } else if (std::isfinite(best_any)) {
        // every candidate violated the cap; scale onto the boundary
        res.power_rescaled = true;
        res.b_bb = best_any_bb * std::sqrt(p_max / best_any_power);
        res.rounded_objective =
            (prob.b_opt.b - b_rf * res.b_bb).squaredNorm();
    } else {
        throw std::runtime_error("baseband_step: no usable candidate");
    }
    return res;
}

Eigen::MatrixXd rf_step(const Eigen::MatrixXcd& b_opt,
                        const Eigen::MatrixXcd& b_bb, Structure structure,
                        int n_tx) {
    const int n_rf = static_cast<int>(b_bb.rows());
    auto phase_of = [](std::complex<double> v) {
        return std::abs(v) == 0.0 ? 0.0 : std::arg(v);
    };
    if (structure == Structure::Partial) {
        const int block = n_tx / n_rf;
        Eigen::MatrixXd phases(block, n_rf);
        for (int i = 0; i < n_tx; ++i) {
            int j = owning_chain(i, n_rf, n_tx);
            std::complex<double> inner = b_opt.row(i).dot(b_bb.row(j));
            phases(i - j * block, j) = phase_of(std::conj(inner));
        }
        return phases;
    }
    Eigen::MatrixXd phases(n_tx, n_rf);
    for (int i = 0; i < n_tx; ++i)
        for (int j = 0; j < n_rf; ++j) {
            std::complex<double> inner = b_opt.row(i).dot(b_bb.row(j));
            phases(i, j) = phase_of(std::conj(inner));
        }
    return phases;
}

FactorizationResult factorize(const FactorizationProblem& prob,
                              const SystemConfig& cfg, std::uint64_t seed) {
    const int n_tx = static_cast<int>(prob.b_opt.b.rows());
    const int n_rf = cfg.n_rf;
    const double p_max = prob.p_max_w;

    HybridPrecoder current;
    current.structure = prob.structure;
    {
        Rng rng(mix_seed(seed, 0x1f));
        int rows = prob.structure == Structure::Partial ? n_tx / n_rf : n_tx;
        current.rf_phases.resize(rows, n_rf);
        for (int j = 0; j < n_rf; ++j)
            for (int r = 0; r < rows; ++r)
                current.rf_phases(r, j) = rng.uniform(0.0, 2.0 * M_PI);
    }
    current.b_bb = Eigen::MatrixXcd::Zero(n_rf, prob.b_opt.b.cols());

    FactorizationResult res;
    res.precoder = current;
    double best_dist = std::numeric_limits<double>::infinity();

    int fails = 0;
    std::uint64_t sub_seed = mix_seed(seed, 0x2f);
    for (int alt = 1; alt <= prob.max_alternations; ++alt) {
        Eigen::MatrixXcd rf = current.materialize_rf(n_tx);
        BasebandStepResult bb = baseband_step(prob, rf, cfg, sub_seed);
        double dist_bb = std::sqrt(bb.rounded_objective);

        Eigen::MatrixXd new_phases =
            rf_step(prob.b_opt.b, bb.b_bb, prob.structure, n_tx);
        HybridPrecoder cand;
        cand.structure = prob.structure;
        cand.rf_phases = new_phases;
        cand.b_bb = bb.b_bb;
        Eigen::MatrixXcd cand_eff = cand.effective(n_tx);
        double cand_power = cand_eff.squaredNorm();
        if (cand_power > p_max * (1.0 + 1e-9)) {
            // only reachable for the full structure: phases changed the norm
            cand.b_bb *= std::sqrt(p_max / cand_power);
            cand_eff = cand.effective(n_tx);
        }
        double dist_cand = (prob.b_opt.b - cand_eff).norm();

        // pick whichever pairing of this round is closer
        double round_dist;
        HybridPrecoder round_best;
        if (dist_bb <= dist_cand) {
            round_dist = dist_bb;
            round_best = current;
            round_best.b_bb = bb.b_bb;
        } else {
            round_dist = dist_cand;
            round_best = cand;
        }

        if (round_dist < best_dist * (1.0 - 1e-12) ||
            !std::isfinite(best_dist)) {
            best_dist = round_dist;
            res.precoder = round_best;
            current = round_best;
            res.trace.push_back({alt, best_dist, bb.sdr_objective,
                                 bb.rounded_objective - bb.sdr_objective});
            fails = 0;
        } else {
            if (++fails > 3) break;
            sub_seed = mix_seed(sub_seed, 0x3f);  // re-randomize and retry
            continue;
        }
        if (best_dist < prob.eps2) break;
    }

    res.distance = best_dist;
    res.converged = best_dist < prob.eps2;
    return res;
}

PhoneResult phone(const ChannelSet& ch, const SystemConfig& cfg,
                  std::uint64_t seed, Structure structure) {
    PhoneResult out;
    out.upper = optimize_digital(ch, cfg, mix_seed(seed, 0xA1));

    FactorizationProblem prob;
    prob.b_opt = out.upper.precoder;
    prob.structure = structure;
    prob.p_max_w = cfg.p_max_w();
    prob.eps2 = cfg.eps2_rel * out.upper.precoder.frob_norm();
    prob.max_alternations = cfg.max_alternations;

    // The distance landscape is nearly flat around its optimum while the
    // achieved efficiency of equi-distance factors varies widely, so the
    // alternation is restarted from several random phase draws, each factor
    // gets a baseband polish, and the candidate with the best energy
    // efficiency is kept.
    double best_ee = -1.0;
    const double theta = phone_complexity_flops(cfg);
    auto ee_of = [&](const HybridPrecoder& p) {
        Eigen::MatrixXcd eff = p.effective(cfg.n_tx);
        double r_sum = sum_rate(ch, eff, cfg);
        PowerBreakdown pb = total_power(cfg, eff, r_sum, structure, theta);
        return energy_efficiency(r_sum, pb);
    };
    for (int r = 0; r < cfg.n_restarts; ++r) {
        FactorizationResult fr =
            factorize(prob, cfg, mix_seed(seed, 0xB2, r));
        HybridPrecoder polished = polish_baseband(
            fr.precoder, ch, cfg, mix_seed(seed, 0xC3, r));
        double ee_raw = ee_of(fr.precoder);
        double ee_pol = ee_of(polished);
        if (ee_pol > ee_raw) fr.precoder = std::move(polished);
        double ee = std::max(ee_raw, ee_pol);
        if (ee > best_ee) {
            best_ee = ee;
            out.factorization = std::move(fr);
        }
    }
    out.precoder = out.factorization.precoder;
    return out;
}

HybridPrecoder polish_baseband(const HybridPrecoder& p, const ChannelSet& ch,
                               const SystemConfig& cfg, std::uint64_t seed) {
    const int n_rf = cfg.n_rf;
    Eigen::MatrixXcd rf = p.materialize_rf(cfg.n_tx);

    // Substitute b = R * b_bb, h_red = Q^H h: rates and amplifier power of
    // the reduced digital problem then equal those of the hybrid with this
    // RF matrix held fixed, so the relaxed-objective ascent applies as is.
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(rf);
    Eigen::MatrixXcd q = qr.householderQ() *
                         Eigen::MatrixXcd::Identity(cfg.n_tx, n_rf);
    Eigen::MatrixXcd r_fac = qr.matrixQR()
                                 .topRows(n_rf)
                                 .triangularView<Eigen::Upper>();
    double dmin = r_fac.diagonal().cwiseAbs().minCoeff();
    if (dmin < 1e-10 * rf.norm()) return p;  // RF columns degenerate

    ChannelSet reduced;
    reduced.h = q.adjoint() * ch.h;
    reduced.seed = ch.seed;
    UpperBoundResult red = optimize_digital(reduced, cfg, seed);

    HybridPrecoder out = p;
    out.b_bb = r_fac.template triangularView<Eigen::Upper>().solve(
        red.precoder.b);
    return out;
}

}  // namespace phone
