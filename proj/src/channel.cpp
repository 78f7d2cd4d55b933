#include "phone/channel.hpp"

#include <cmath>

#include "phone/rng.hpp"

namespace phone {

Eigen::VectorXcd array_response(double azimuth, double elevation,
                                const SystemConfig& cfg) {
    const int M = cfg.array_rows;
    const int N = cfg.array_cols;
    const int nt = cfg.n_tx;
    const double scale = 1.0 / std::sqrt(static_cast<double>(nt));
    const double k = 2.0 * M_PI * cfg.spacing_over_lambda;
    const double sin_az_sin_el = std::sin(azimuth) * std::sin(elevation);
    const double cos_el = std::cos(elevation);
    Eigen::VectorXcd u(nt);
    for (int m = 0; m < M; ++m) {
        for (int n = 0; n < N; ++n) {
            double phase = k * (m * sin_az_sin_el + n * cos_el);
            u(m * N + n) = scale * std::complex<double>(std::cos(phase), std::sin(phase));
        }
    }
    return u;
}

ChannelSet sample_channel(const SystemConfig& cfg, std::uint64_t seed) {
    const int K = cfg.n_users;
    const int nt = cfg.n_tx;
    const int nray = cfg.n_rays;
    Rng rng(seed);

    ChannelSet ch;
    ch.seed = seed;
    ch.azimuth.resize(nray);
    ch.elevation.resize(nray);
    for (int i = 0; i < nray; ++i) {
        ch.azimuth(i) = rng.uniform(0.0, 2.0 * M_PI);
        // broadside-centered sector keeps cos(elevation) away from endfire
        ch.elevation(i) = rng.uniform(M_PI / 4.0, 3.0 * M_PI / 4.0);
    }
    ch.ray_gains.resize(K, nray);
    for (int k = 0; k < K; ++k)
        for (int i = 0; i < nray; ++i) ch.ray_gains(k, i) = rng.cgaussian();

    Eigen::MatrixXcd steering(nt, nray);
    for (int i = 0; i < nray; ++i)
        steering.col(i) = array_response(ch.azimuth(i), ch.elevation(i), cfg);

    const double eps = cfg.path_gain_eff();
    const double amp = std::sqrt(nt * eps / nray);
    ch.h.resize(nt, K);
    for (int k = 0; k < K; ++k)
        ch.h.col(k) = amp * (steering * ch.ray_gains.row(k).transpose());
    return ch;
}

}  // namespace phone
