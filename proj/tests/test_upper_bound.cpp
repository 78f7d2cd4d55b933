#include <cmath>
#include <complex>

#include "doctest.h"
#include "phone/channel.hpp"
#include "phone/power.hpp"
#include "phone/rng.hpp"
#include "phone/upper_bound.hpp"

using namespace phone;

namespace {

SystemConfig make_cfg(int n_tx, int n_rf, int k) {
    SystemConfig cfg;
    cfg.n_tx = n_tx;
    cfg.n_rf = n_rf;
    cfg.n_users = k;
    cfg.path_gain = 1.0;
    cfg.finalize();
    return cfg;
}

Eigen::MatrixXcd random_point(const SystemConfig& cfg, std::uint64_t seed) {
    Rng rng(seed);
    Eigen::MatrixXcd b(cfg.n_tx, cfg.n_users);
    for (int j = 0; j < cfg.n_users; ++j)
        for (int i = 0; i < cfg.n_tx; ++i) b(i, j) = rng.cgaussian();
    b *= std::sqrt(cfg.p_max_w()) * rng.uniform(0.2, 0.9) / b.norm();
    return b;
}

}  // namespace

TEST_CASE("relaxed evaluation at zero reduces to the fixed power floor") {
    SystemConfig cfg;
    cfg.finalize();
    ChannelSet ch = sample_channel(cfg, 2);
    RelaxedEval ev =
        relaxed_eval(Eigen::MatrixXcd::Zero(cfg.n_tx, cfg.n_users), ch, cfg);
    CHECK(ev.r_sum == 0.0);
    CHECK(ev.eta == 0.0);
    double fixed = cfg.n_tx * cfg.p_shifter_w + cfg.n_rf * cfg.p_one_rf_w +
                   channel_estimation_power(cfg) +
                   phone_complexity_flops(cfg) * cfg.c_cmplx /
                       cfg.l_tr_flops_per_w +
                   cfg.p_fix_w;
    CHECK(ev.p_total == doctest::Approx(fixed).epsilon(1e-12));
}

TEST_CASE("analytic gradient matches central finite differences") {
    SystemConfig cfg = make_cfg(8, 2, 2);
    ChannelSet ch = sample_channel(cfg, 42);
    auto eta_of = [&](const Eigen::MatrixXcd& b) {
        return relaxed_eval(b, ch, cfg).eta;
    };
    for (int pt = 0; pt < 20; ++pt) {
        DigitalPrecoder dp;
        dp.b = random_point(cfg, 100 + pt);
        Eigen::MatrixXcd g = ee_gradient(dp, ch, cfg);

        double scale = dp.b.norm();
        double h = 1e-6 * scale;
        double num2 = 0.0, den2 = 0.0;
        for (int j = 0; j < cfg.n_users; ++j)
            for (int i = 0; i < cfg.n_tx; ++i) {
                Eigen::MatrixXcd bp = dp.b, bm = dp.b;
                bp(i, j) += h;
                bm(i, j) -= h;
                double d_re = (eta_of(bp) - eta_of(bm)) / (2.0 * h);
                bp = dp.b;
                bm = dp.b;
                bp(i, j) += std::complex<double>(0.0, h);
                bm(i, j) -= std::complex<double>(0.0, h);
                double d_im = (eta_of(bp) - eta_of(bm)) / (2.0 * h);
                num2 += std::norm(std::complex<double>(d_re, d_im) - g(i, j));
                den2 += d_re * d_re + d_im * d_im;
            }
        CHECK(std::sqrt(num2 / den2) <= 1e-4);
    }
}

TEST_CASE("stationarity matrices are Hermitian with the stated definiteness") {
    SystemConfig cfg = make_cfg(8, 4, 3);
    ChannelSet ch = sample_channel(cfg, 7);
    DigitalPrecoder dp;
    dp.b = random_point(cfg, 9);
    RelaxedEval ev = relaxed_eval(dp.b, ch, cfg);
    StationarityMatrices sm = stationarity_matrices(dp, ch, cfg, ev);
    for (int k = 0; k < 3; ++k) {
        CHECK((sm.phi[k] - sm.phi[k].adjoint()).norm() < 1e-10 * sm.phi[k].norm());
        CHECK((sm.psi[k] - sm.psi[k].adjoint()).norm() < 1e-10 * sm.psi[k].norm());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es_phi(sm.phi[k]);
        CHECK(es_phi.eigenvalues().minCoeff() > 0.0);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es_psi(sm.psi[k]);
        CHECK(es_psi.eigenvalues().minCoeff() > -1e-10 * sm.psi[k].norm());
        // rank one: all but the largest eigenvalue vanish
        Eigen::VectorXd ev_psi = es_psi.eigenvalues();
        for (int i = 0; i + 1 < ev_psi.size(); ++i)
            CHECK(std::abs(ev_psi(i)) < 1e-10 * ev_psi.maxCoeff());
    }
}

TEST_CASE("the ascent trace is monotone and the result is feasible") {
    SystemConfig cfg = make_cfg(8, 4, 3);
    ChannelSet ch = sample_channel(cfg, 11);
    for (int inst = 0; inst < 10; ++inst) {
        ChannelSet c = sample_channel(cfg, 300 + inst);
        UpperBoundResult r = optimize_digital(c, cfg, 17 + inst);
        REQUIRE(!r.trace.empty());
        for (size_t i = 1; i < r.trace.size(); ++i)
            CHECK(r.trace[i].eta >=
                  r.trace[i - 1].eta * (1.0 - 1e-9) - 1e-30);
        CHECK(r.precoder.frob_norm_sq() <= cfg.p_max_w() * (1.0 + 1e-12));
        CHECK(r.final_eval.eta == r.trace.back().eta);
    }
}

TEST_CASE("scalar problem matches a brute-force power grid") {
    SystemConfig cfg;
    cfg.n_tx = 1;
    cfg.n_rf = 1;
    cfg.n_users = 1;
    cfg.path_gain = 1.0;
    cfg.array_rows = 1;
    cfg.array_cols = 1;
    cfg.finalize();
    ChannelSet ch = sample_channel(cfg, 5);
    double h2 = std::norm(ch.h(0, 0));
    double sigma2 = cfg.noise_power_w();
    double fixed = relaxed_eval(Eigen::MatrixXcd::Zero(1, 1), ch, cfg).p_total;
    double c1 = cfg.p_cod_w_per_bps +
                2.0 * cfg.n_rf / (cfg.bits_per_symbol * cfg.l_tr_flops_per_w);

    double best = 0.0;
    const int grid = 200000;
    for (int i = 1; i <= grid; ++i) {
        double p = cfg.p_max_w() * i / grid;
        double r = cfg.bandwidth_hz * std::log2(1.0 + p * h2 / sigma2);
        double eta = r / (p / cfg.pa_efficiency + fixed + c1 * r);
        if (eta > best) best = eta;
    }

    UpperBoundResult r = optimize_digital(ch, cfg, 3);
    CHECK(r.final_eval.eta == doctest::Approx(best).epsilon(0.01));
    CHECK(r.final_eval.eta <= best * (1.0 + 1e-9));
}

TEST_CASE("the digital ascent is deterministic in its seed") {
    SystemConfig cfg = make_cfg(8, 4, 2);
    ChannelSet ch = sample_channel(cfg, 77);
    UpperBoundResult a = optimize_digital(ch, cfg, 5);
    UpperBoundResult b = optimize_digital(ch, cfg, 5);
    CHECK((a.precoder.b - b.precoder.b).norm() == 0.0);
    CHECK(a.final_eval.eta == b.final_eval.eta);
}

TEST_CASE("interference denominator bounds and index checks") {
    SystemConfig cfg = make_cfg(4, 2, 2);
    ChannelSet ch = sample_channel(cfg, 13);
    DigitalPrecoder dp;
    dp.b = random_point(cfg, 21);
    for (int i = 0; i < 2; ++i)
        CHECK(interference_denominator(dp, ch, i, cfg) >= cfg.noise_power_w());
    CHECK_THROWS_AS(interference_denominator(dp, ch, 2, cfg),
                    std::out_of_range);
}
