#include <cmath>
#include <complex>

#include "doctest.h"
#include "phone/channel.hpp"
#include "phone/rng.hpp"

using namespace phone;

namespace {

SystemConfig small_cfg(int n_tx, int rows, int cols) {
    SystemConfig cfg;
    cfg.n_tx = n_tx;
    cfg.n_rf = 1;
    cfg.n_users = 1;
    cfg.array_rows = rows;
    cfg.array_cols = cols;
    cfg.finalize();
    return cfg;
}

}  // namespace

TEST_CASE("array response of a 2x1 panel at half wavelength") {
    SystemConfig cfg = small_cfg(2, 2, 1);
    // elevation pi/2 kills the column term; azimuth pi/2 makes the row
    // phase increment exactly pi
    Eigen::VectorXcd u = array_response(M_PI / 2.0, M_PI / 2.0, cfg);
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(u(0) - std::complex<double>(s, 0)) < 1e-12);
    CHECK(std::abs(u(1) - std::polar(s, M_PI)) < 1e-12);
}

TEST_CASE("array response entry formula on a 2x2 panel") {
    SystemConfig cfg = small_cfg(4, 2, 2);
    const double az = 0.7, el = 1.1;
    Eigen::VectorXcd u = array_response(az, el, cfg);
    const double k = 2.0 * M_PI * cfg.spacing_over_lambda;
    for (int m = 0; m < 2; ++m)
        for (int n = 0; n < 2; ++n) {
            double phase =
                k * (m * std::sin(az) * std::sin(el) + n * std::cos(el));
            std::complex<double> want = std::polar(0.5, phase);
            CHECK(std::abs(u(m * 2 + n) - want) < 1e-12);
        }
}

TEST_CASE("array response has unit norm for any angle") {
    SystemConfig cfg = small_cfg(12, 3, 4);
    Rng rng(7);
    for (int i = 0; i < 25; ++i) {
        double az = rng.uniform(0.0, 2.0 * M_PI);
        double el = rng.uniform(0.0, M_PI);
        CHECK(array_response(az, el, cfg).norm() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("single-ray channel collapses to a scaled steering vector") {
    SystemConfig cfg;
    cfg.n_rays = 1;
    cfg.path_gain = 1.0;
    cfg.n_users = 2;
    cfg.n_rf = 2;
    cfg.n_tx = 16;
    cfg.finalize();
    ChannelSet ch = sample_channel(cfg, 99);
    // h_k = sqrt(N_T) * rho_k1 * u, and |u| = 1, so |h_k| = sqrt(N_T)|rho|
    for (int k = 0; k < 2; ++k) {
        double want = std::sqrt(16.0) * std::abs(ch.ray_gains(k, 0));
        CHECK(ch.h.col(k).norm() == doctest::Approx(want).epsilon(1e-12));
    }
    Eigen::VectorXcd u = array_response(ch.azimuth(0), ch.elevation(0), cfg);
    Eigen::VectorXcd want0 = std::sqrt(16.0) * ch.ray_gains(0, 0) * u;
    CHECK((ch.h.col(0) - want0).norm() < 1e-12);
}

TEST_CASE("channel second moment matches N_T * eps") {
    SystemConfig cfg;
    cfg.n_tx = 16;
    cfg.n_rf = 4;
    cfg.n_users = 1;
    cfg.path_gain = 0.5;
    cfg.finalize();
    // E||h||^2 = N_T * eps regardless of the ray geometry
    const double want = 16.0 * 0.5;
    double acc = 0.0;
    const int draws = 20000;
    for (int i = 0; i < draws; ++i)
        acc += sample_channel(cfg, 1000 + i).h.col(0).squaredNorm();
    double ratio = acc / draws / want;
    CHECK(ratio > 0.95);
    CHECK(ratio < 1.05);
}

TEST_CASE("ray angles are shared across users, gains are not") {
    SystemConfig cfg;
    cfg.finalize();
    ChannelSet ch = sample_channel(cfg, 4);
    CHECK(ch.azimuth.size() == cfg.n_rays);
    CHECK(ch.ray_gains.rows() == cfg.n_users);
    CHECK((ch.ray_gains.row(0) - ch.ray_gains.row(1)).norm() > 1e-6);
    for (int i = 0; i < cfg.n_rays; ++i) {
        CHECK(ch.azimuth(i) >= 0.0);
        CHECK(ch.azimuth(i) < 2.0 * M_PI);
        CHECK(ch.elevation(i) >= M_PI / 4.0);
        CHECK(ch.elevation(i) <= 3.0 * M_PI / 4.0);
    }
}

TEST_CASE("channel sampling is deterministic in the seed") {
    SystemConfig cfg;
    cfg.finalize();
    ChannelSet a = sample_channel(cfg, 123);
    ChannelSet b = sample_channel(cfg, 123);
    ChannelSet c = sample_channel(cfg, 124);
    CHECK((a.h - b.h).norm() == 0.0);
    CHECK((a.h - c.h).norm() > 1e-9);
}
