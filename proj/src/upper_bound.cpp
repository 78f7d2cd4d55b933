#include "phone/upper_bound.hpp"

#include <cmath>
#include <stdexcept>

#include "phone/rng.hpp"

namespace phone {

namespace {

constexpr double kLog2E = 1.4426950408889634;  // 1/ln(2)

/// Rate-proportional power coefficient: P_COD + 2 N_RF / (ell L_TR).
double rate_power_coeff(const SystemConfig& cfg) {
    return cfg.p_cod_w_per_bps +
           2.0 * cfg.n_rf / (cfg.bits_per_symbol * cfg.l_tr_flops_per_w);
}

/// Precoder-independent part of the relaxed power model.
double fixed_power(const SystemConfig& cfg) {
    return cfg.n_tx * cfg.p_shifter_w + cfg.n_rf * cfg.p_one_rf_w +
           channel_estimation_power(cfg) +
           phone_complexity_flops(cfg) * cfg.c_cmplx / cfg.l_tr_flops_per_w +
           cfg.p_fix_w;
}

}  // namespace

RelaxedEval relaxed_eval(const Eigen::MatrixXcd& b, const ChannelSet& ch,
                         const SystemConfig& cfg) {
    const int K = ch.n_users();
    const double sigma2 = cfg.noise_power_w();
    RelaxedEval ev;
    ev.signal.resize(K);
    ev.interf_denom.resize(K);
    ev.rates.resize(K);
    for (int k = 0; k < K; ++k) {
        const Eigen::VectorXcd hk = ch.h.col(k);
        double s = 0, interf = 0;
        for (int i = 0; i < K; ++i) {
            double p = std::norm(hk.dot(b.col(i)));
            if (i == k)
                s = p;
            else
                interf += p;
        }
        ev.signal(k) = s;
        ev.interf_denom(k) = interf + sigma2;
        ev.rates(k) = cfg.bandwidth_hz * std::log2(1.0 + s / ev.interf_denom(k));
    }
    ev.r_sum = ev.rates.sum();
    ev.p_total = b.squaredNorm() / cfg.pa_efficiency + fixed_power(cfg) +
                 rate_power_coeff(cfg) * ev.r_sum;
    ev.eta = ev.r_sum / ev.p_total;
    return ev;
}

double interference_denominator(const DigitalPrecoder& b, const ChannelSet& ch,
                                int i, const SystemConfig& cfg) {
    if (i < 0 || i >= ch.n_users())
        throw std::out_of_range("interference_denominator: user index");
    const Eigen::VectorXcd hi = ch.h.col(i);
    double interf = 0;
    for (int j = 0; j < ch.n_users(); ++j) {
        if (j == i) continue;
        interf += std::norm(hi.dot(b.b.col(j)));
    }
    return interf + cfg.noise_power_w();
}

StationarityMatrices stationarity_matrices(const DigitalPrecoder& b,
                                           const ChannelSet& ch,
                                           const SystemConfig& cfg,
                                           const RelaxedEval& state) {
    const int K = ch.n_users();
    const int nt = ch.n_tx();
    // p_total - c1 * r_sum = PA power + fixed part, strictly positive
    const double net_power = state.p_total - rate_power_coeff(cfg) * state.r_sum;
    const double c = 2.0 * net_power * cfg.bandwidth_hz * kLog2E;

    // per-user interference sensitivity weight
    Eigen::VectorXd w(K);
    for (int i = 0; i < K; ++i) {
        double d = state.interf_denom(i);
        w(i) = state.signal(i) / (d * (d + state.signal(i)));
    }

    StationarityMatrices sm;
    sm.phi.reserve(K);
    sm.psi.reserve(K);
    const double own = 2.0 * state.r_sum / cfg.pa_efficiency;
    for (int k = 0; k < K; ++k) {
        Eigen::MatrixXcd phi =
            own * Eigen::MatrixXcd::Identity(nt, nt);
        for (int i = 0; i < K; ++i) {
            if (i == k) continue;
            phi.noalias() += (c * w(i)) * (ch.h.col(i) * ch.h.col(i).adjoint());
        }
        const Eigen::VectorXcd hk = ch.h.col(k);
        Eigen::MatrixXcd psi =
            (c / (state.signal(k) + state.interf_denom(k))) * (hk * hk.adjoint());
        sm.phi.push_back(std::move(phi));
        sm.psi.push_back(std::move(psi));
    }
    return sm;
}

Eigen::MatrixXcd ee_gradient(const DigitalPrecoder& b, const ChannelSet& ch,
                             const SystemConfig& cfg) {
    RelaxedEval ev = relaxed_eval(b.b, ch, cfg);
    StationarityMatrices sm = stationarity_matrices(b, ch, cfg, ev);
    const int K = ch.n_users();
    Eigen::MatrixXcd g(ch.n_tx(), K);
    const double p2 = ev.p_total * ev.p_total;
    for (int k = 0; k < K; ++k)
        g.col(k) = (sm.psi[k] * b.b.col(k) - sm.phi[k] * b.b.col(k)) / p2;
    return g;
}

Eigen::VectorXcd solve_spd(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& rhs) {
    Eigen::LLT<Eigen::MatrixXcd> llt(a);
    if (llt.info() == Eigen::Success) return llt.solve(rhs);
    const int n = static_cast<int>(a.rows());
    double jitter = 1e-12 * a.real().trace() / n;
    if (jitter <= 0) jitter = 1e-300;
    Eigen::MatrixXcd aj = a;
    for (int attempt = 0; attempt < 8; ++attempt) {
        aj.diagonal().array() += jitter;
        llt.compute(aj);
        if (llt.info() == Eigen::Success) return llt.solve(rhs);
        jitter *= 100.0;
    }
    throw std::runtime_error("solve_spd: matrix not positive definite");
}

UpperBoundResult optimize_digital(const ChannelSet& ch, const SystemConfig& cfg,
                                  std::uint64_t seed) {
    const int K = ch.n_users();
    const int nt = ch.n_tx();
    const double p_max = cfg.p_max_w();
    const double eps1 = cfg.eps1_eff();

    Rng rng(seed);
    Eigen::MatrixXcd b(nt, K);
    for (int k = 0; k < K; ++k)
        for (int i = 0; i < nt; ++i) b(i, k) = rng.cgaussian();
    b *= std::sqrt(p_max / 2.0) / b.norm();  // interior starting point

    auto project = [p_max](Eigen::MatrixXcd& m) {
        double n2 = m.squaredNorm();
        if (n2 > p_max) m *= std::sqrt(p_max / n2);
    };

    UpperBoundResult res;
    RelaxedEval ev = relaxed_eval(b, ch, cfg);

    // line-search grid 0, varpi, 2*varpi, ..., 1 (1 always included)
    std::vector<double> grid;
    for (double mu = 0.0; mu < 1.0 - 1e-12; mu += cfg.step_interval)
        grid.push_back(mu);
    grid.push_back(1.0);

    DigitalPrecoder dp;
    bool converged = false;
    int iter = 0;
    for (; iter < cfg.max_iters; ++iter) {
        dp.b = b;
        StationarityMatrices sm = stationarity_matrices(dp, ch, cfg, ev);
        Eigen::MatrixXcd target(nt, K);  // phi_k^{-1} psi_k b_k
        for (int k = 0; k < K; ++k)
            target.col(k) = solve_spd(sm.phi[k], sm.psi[k] * b.col(k));

        double best_eta = ev.eta;
        double best_mu = 0.0;
        Eigen::MatrixXcd best_b = b;
        RelaxedEval best_ev = ev;
        for (double mu : grid) {
            if (mu == 0.0) continue;  // incumbent already scored
            Eigen::MatrixXcd cand = mu * target + (1.0 - mu) * b;
            project(cand);
            RelaxedEval cand_ev = relaxed_eval(cand, ch, cfg);
            if (cand_ev.eta > best_eta) {
                best_eta = cand_ev.eta;
                best_mu = mu;
                best_b = cand;
                best_ev = cand_ev;
            }
        }

        double step = (best_b - b).norm();
        b = best_b;
        ev = best_ev;
        res.trace.push_back({iter, ev.eta, step, best_mu});
        if (step <= eps1) {
            converged = true;
            break;
        }
    }

    res.precoder.b = b;
    res.final_eval = ev;
    res.converged = converged;
    return res;
}

}  // namespace phone
