#include <cmath>
#include <complex>

#include "doctest.h"
#include "phone/channel.hpp"
#include "phone/factorization.hpp"
#include "phone/power.hpp"
#include "phone/rate.hpp"
#include "phone/rng.hpp"

using namespace phone;

namespace {

SystemConfig make_cfg(int n_tx, int n_rf, int k) {
    SystemConfig cfg;
    cfg.n_tx = n_tx;
    cfg.n_rf = n_rf;
    cfg.n_users = k;
    cfg.path_gain = 1.0;
    cfg.n_restarts = 2;  // keep the unit tests fast
    cfg.finalize();
    return cfg;
}

Eigen::MatrixXcd random_cplx(int rows, int cols, std::uint64_t seed) {
    Rng rng(seed);
    Eigen::MatrixXcd m(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) m(i, j) = rng.cgaussian();
    return m;
}

HybridPrecoder random_partial(const SystemConfig& cfg, std::uint64_t seed) {
    Rng rng(seed);
    HybridPrecoder p;
    p.structure = Structure::Partial;
    p.rf_phases.resize(cfg.sub_array_size(), cfg.n_rf);
    for (int j = 0; j < cfg.n_rf; ++j)
        for (int i = 0; i < cfg.sub_array_size(); ++i)
            p.rf_phases(i, j) = rng.uniform(0.0, 2.0 * M_PI);
    p.b_bb = random_cplx(cfg.n_rf, cfg.n_users, seed + 1);
    return p;
}

}  // namespace

TEST_CASE("real embedding reproduces the squared distance exactly") {
    SystemConfig cfg = make_cfg(8, 4, 2);
    HybridPrecoder p = random_partial(cfg, 3);
    Eigen::MatrixXcd rf = p.materialize_rf(8);
    Eigen::MatrixXcd b_opt = random_cplx(8, 2, 5);
    RealQCQPEmbedding emb =
        build_embedding(b_opt, rf, Structure::Partial, cfg.p_max_w());
    REQUIRE(emb.n == 2 * 2 * 4 + 1);

    Eigen::VectorXd x(emb.n);
    for (int c = 0; c < 2; ++c)
        for (int r = 0; r < 4; ++r) {
            x(c * 4 + r) = p.b_bb(r, c).real();
            x(8 + c * 4 + r) = p.b_bb(r, c).imag();
        }
    x(emb.n - 1) = 1.0;
    double want = (b_opt - rf * p.b_bb).squaredNorm();
    CHECK(x.dot(emb.T * x) == doctest::Approx(want).epsilon(1e-10));
    // power selector picks out ||B_BB||^2 (exact ball for the partial case)
    CHECK(x.dot(emb.gamma1 * x) ==
          doctest::Approx(p.b_bb.squaredNorm()).epsilon(1e-12));
    CHECK(emb.power_rhs ==
          doctest::Approx(cfg.p_max_w() * 4.0 / 8.0).epsilon(1e-12));
}

TEST_CASE("embedding and de-embedding round trip") {
    Eigen::MatrixXcd bb = random_cplx(3, 2, 9);
    Eigen::VectorXd x(12);
    for (int c = 0; c < 2; ++c)
        for (int r = 0; r < 3; ++r) {
            x(c * 3 + r) = bb(r, c).real();
            x(6 + c * 3 + r) = bb(r, c).imag();
        }
    CHECK((de_embed(x, 3, 2) - bb).norm() == 0.0);
    CHECK_THROWS_AS(de_embed(x.head(11), 3, 2), std::invalid_argument);
}

TEST_CASE("partial structure power identity") {
    // ||B_RF B_BB||^2 = (N_T / N_RF) ||B_BB||^2 for any phases
    SystemConfig cfg = make_cfg(12, 4, 3);
    HybridPrecoder p = random_partial(cfg, 13);
    CHECK(p.effective(12).squaredNorm() ==
          doctest::Approx(3.0 * p.b_bb.squaredNorm()).epsilon(1e-12));
    // and the Gram of B_RF is (N_T / N_RF) * I
    Eigen::MatrixXcd rf = p.materialize_rf(12);
    Eigen::MatrixXcd gram = rf.adjoint() * rf;
    CHECK((gram - 3.0 * Eigen::MatrixXcd::Identity(4, 4)).norm() < 1e-12);
}

TEST_CASE("phase update matches its closed form") {
    SystemConfig cfg = make_cfg(8, 2, 2);
    Eigen::MatrixXcd b_opt = random_cplx(8, 2, 17);
    Eigen::MatrixXcd b_bb = random_cplx(2, 2, 19);
    Eigen::MatrixXd phases = rf_step(b_opt, b_bb, Structure::Partial, 8);
    REQUIRE(phases.rows() == 4);
    REQUIRE(phases.cols() == 2);
    for (int i = 0; i < 8; ++i) {
        int j = i / 4;
        std::complex<double> inner = 0.0;
        for (int c = 0; c < 2; ++c) inner += b_opt(i, c) * std::conj(b_bb(j, c));
        CHECK(phases(i - j * 4, j) == doctest::Approx(std::arg(inner)).epsilon(1e-12));
    }
    // a zero inner product maps to phase 0
    Eigen::MatrixXd z = rf_step(Eigen::MatrixXcd::Zero(8, 2), b_bb,
                                Structure::Partial, 8);
    CHECK(z.norm() == 0.0);
}

TEST_CASE("phase update is optimal for fixed baseband") {
    // scanning any single phase cannot reduce the distance further
    SystemConfig cfg = make_cfg(8, 2, 2);
    Eigen::MatrixXcd b_opt = random_cplx(8, 2, 23);
    Eigen::MatrixXcd b_bb = random_cplx(2, 2, 29);
    Eigen::MatrixXd phases = rf_step(b_opt, b_bb, Structure::Partial, 8);
    HybridPrecoder p;
    p.structure = Structure::Partial;
    p.rf_phases = phases;
    p.b_bb = b_bb;
    double base = (b_opt - p.effective(8)).norm();
    for (int trial = 0; trial < 30; ++trial) {
        HybridPrecoder q = p;
        Rng rng(500 + trial);
        int i = static_cast<int>(rng.uniform(0.0, 4.0));
        int j = static_cast<int>(rng.uniform(0.0, 2.0));
        q.rf_phases(i, j) = rng.uniform(0.0, 2.0 * M_PI);
        CHECK((b_opt - q.effective(8)).norm() >= base - 1e-12);
    }
}

TEST_CASE("baseband step is feasible and never beats its own bound") {
    SystemConfig cfg = make_cfg(8, 4, 2);
    for (int inst = 0; inst < 5; ++inst) {
        FactorizationProblem prob;
        prob.b_opt.b = random_cplx(8, 2, 700 + inst);
        prob.b_opt.b *=
            std::sqrt(cfg.p_max_w()) * 0.8 / prob.b_opt.b.norm();
        prob.structure = Structure::Partial;
        prob.p_max_w = cfg.p_max_w();
        HybridPrecoder p = random_partial(cfg, 800 + inst);
        Eigen::MatrixXcd rf = p.materialize_rf(8);
        BasebandStepResult r = baseband_step(prob, rf, cfg, 31 + inst);
        CHECK((rf * r.b_bb).squaredNorm() <= cfg.p_max_w() * (1.0 + 1e-9));
        CHECK(r.rounded_objective >=
              r.sdr_objective - 1e-6 * std::abs(r.sdr_objective) - 1e-12);
        CHECK(r.rounded_objective ==
              doctest::Approx((prob.b_opt.b - rf * r.b_bb).squaredNorm())
                  .epsilon(1e-9));
    }
}

TEST_CASE("square RF stage factors exactly") {
    // N_T = N_RF: B_RF is invertible, so a feasible target splits exactly
    SystemConfig cfg = make_cfg(2, 2, 2);
    FactorizationProblem prob;
    prob.b_opt.b = random_cplx(2, 2, 41);
    prob.b_opt.b *= std::sqrt(cfg.p_max_w()) * 0.7 / prob.b_opt.b.norm();
    prob.structure = Structure::Partial;
    prob.p_max_w = cfg.p_max_w();
    prob.eps2 = 1e-3 * prob.b_opt.b.norm();
    prob.max_alternations = cfg.max_alternations;
    FactorizationResult r = factorize(prob, cfg, 6);
    CHECK(r.converged);
    CHECK(r.distance < 1e-3 * prob.b_opt.b.norm());
}

TEST_CASE("a planted factorization is recovered to tolerance") {
    SystemConfig cfg = make_cfg(8, 4, 2);
    HybridPrecoder plant = random_partial(cfg, 47);
    plant.b_bb *= std::sqrt(cfg.p_max_w() * 4.0 / 8.0) * 0.9 / plant.b_bb.norm();
    FactorizationProblem prob;
    prob.b_opt.b = plant.effective(8);
    prob.structure = Structure::Partial;
    prob.p_max_w = cfg.p_max_w();
    prob.eps2 = cfg.eps2_rel * prob.b_opt.b.norm();
    prob.max_alternations = cfg.max_alternations;
    FactorizationResult r = factorize(prob, cfg, 8);
    CHECK(r.distance <= prob.eps2 * 10.0);  // close even if not flagged
    // the accepted-distance trace is strictly decreasing
    for (size_t i = 1; i < r.trace.size(); ++i)
        CHECK(r.trace[i].distance < r.trace[i - 1].distance);
}

TEST_CASE("scalar factorization is exact") {
    SystemConfig cfg = make_cfg(1, 1, 1);
    FactorizationProblem prob;
    prob.b_opt.b = random_cplx(1, 1, 51);
    prob.b_opt.b *= std::sqrt(cfg.p_max_w()) * 0.5 / prob.b_opt.b.norm();
    prob.structure = Structure::Partial;
    prob.p_max_w = cfg.p_max_w();
    // exact up to the interior-point tolerance of the baseband step
    prob.eps2 = 1e-3 * prob.b_opt.b.norm();
    prob.max_alternations = 10;
    FactorizationResult r = factorize(prob, cfg, 3);
    CHECK(r.converged);
    CHECK(r.distance < 1e-3 * prob.b_opt.b.norm());
}

TEST_CASE("materialized RF matrix has the block unit-modulus pattern") {
    SystemConfig cfg = make_cfg(8, 4, 2);
    HybridPrecoder p = random_partial(cfg, 57);
    Eigen::MatrixXcd rf = p.materialize_rf(8);
    const double entry = 1.0;  // unit modulus per connected element
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 4; ++j) {
            if (i / 2 == j)
                CHECK(std::abs(std::abs(rf(i, j)) - entry) < 1e-12);
            else
                CHECK(rf(i, j) == std::complex<double>(0.0, 0.0));
        }
}

TEST_CASE("baseband polish keeps the RF stage and stays feasible") {
    SystemConfig cfg = make_cfg(8, 4, 2);
    ChannelSet ch = sample_channel(cfg, 61);
    HybridPrecoder p = random_partial(cfg, 63);
    p.b_bb *= std::sqrt(cfg.p_max_w() * 4.0 / 8.0) * 0.5 / p.b_bb.norm();
    HybridPrecoder polished = polish_baseband(p, ch, cfg, 5);
    CHECK((polished.rf_phases - p.rf_phases).norm() == 0.0);
    CHECK(polished.effective(8).squaredNorm() <=
          cfg.p_max_w() * (1.0 + 1e-9));
    HybridPrecoder again = polish_baseband(p, ch, cfg, 5);
    CHECK((again.b_bb - polished.b_bb).norm() == 0.0);
    // polishing raises (or preserves) the achieved rate-power ratio here
    auto ee_of = [&](const HybridPrecoder& q) {
        Eigen::MatrixXcd eff = q.effective(8);
        double r = sum_rate(ch, eff, cfg);
        PowerBreakdown pb =
            total_power(cfg, eff, r, Structure::Partial, 0.0);
        return energy_efficiency(r, pb);
    };
    CHECK(ee_of(polished) >= ee_of(p) * (1.0 - 1e-9));
}

TEST_CASE("composed pipeline is feasible, bounded, and deterministic") {
    SystemConfig cfg = make_cfg(8, 4, 2);
    ChannelSet ch = sample_channel(cfg, 71);
    PhoneResult a = phone::phone(ch, cfg, 19);
    CHECK(a.precoder.effective(8).squaredNorm() <=
          cfg.p_max_w() * (1.0 + 1e-9));

    Eigen::MatrixXcd eff = a.precoder.effective(8);
    double r_sum = sum_rate(ch, eff, cfg);
    PowerBreakdown pb = total_power(cfg, eff, r_sum, Structure::Partial,
                                    phone_complexity_flops(cfg));
    double ee = energy_efficiency(r_sum, pb);
    CHECK(ee <= a.upper.final_eval.eta * (1.0 + 1e-6));

    PhoneResult b = phone::phone(ch, cfg, 19);
    CHECK((a.precoder.b_bb - b.precoder.b_bb).norm() == 0.0);
    CHECK((a.precoder.rf_phases - b.precoder.rf_phases).norm() == 0.0);
}
