#pragma once

#include <cstdint>
#include <string>

namespace phone {

/// Connection pattern of the analog stage.
enum class Structure { Partial, Full };

inline const char* to_string(Structure s) {
    return s == Structure::Partial ? "partial" : "full";
}

/// All scalar parameters of one simulation run. Single source of truth:
/// everything downstream (channels, power accounting, algorithm knobs)
/// reads from here. Fields set to 0 where marked "auto" are derived in
/// finalize().
struct SystemConfig {
    // dimensions
    int n_users = 5;        // K
    int n_tx = 100;         // N_T
    int n_rf = 5;           // N_RF
    int n_rays = 20;        // N_ray

    // link
    double bandwidth_hz = 200e3;          // W
    double noise_psd_dbm_per_hz = -174.0;
    double p_max_dbm = 33.0;

    // power model
    double pa_efficiency = 0.38;          // alpha
    double p_one_rf_w = 12.9;
    double p_shifter_w = 0.088;
    double p_fix_w = 1.0;
    double p_cod_w_per_bps = 0.1e-9;
    double l_tr_flops_per_w = 12.8e9;
    double bits_per_symbol = 1.0;         // ell
    double c_cmplx = 1.0;

    // channel estimation (beam training)
    int kappa = 2;
    int n_aod = 64;          // AOD quantization points (distinct from array columns)
    double delta_err = 0.1;
    double snr_avg_linear = 1e4;   // gamma_bar, linear scale
    double ce_scale = 1.0;

    // channel geometry
    double path_gain = 0.0;        // epsilon_k; 0 = derive from snr_avg_linear
    int array_rows = 0;            // M; 0 = auto (nearest-square factor of n_tx)
    int array_cols = 0;            // N; 0 = auto
    double spacing_over_lambda = 0.5;   // d / lambda

    // cost coefficients
    double beta_power = 0.9;
    double beta_t = 188.0;
    double beta_shifter = 1800.0;
    double beta_rf = 7800.0;
    double beta_bb = 6800.0;

    // algorithm knobs
    double eps1 = 0.0;             // 0 = auto: 1e-3 * sqrt(p_max_w)
    double eps2_rel = 1e-2;        // factorization tolerance, relative to ||B_opt||_F
    double step_interval = 0.1;    // varpi, line-search grid spacing
    int max_iters = 200;
    int max_alternations = 50;
    int n_restarts = 8;            // factorization restarts, best EE kept
    int n_randomizations = 100;    // L
    double sdp_tol = 1e-7;

    // listed in the reference parameter set but unused by any formula
    double tau_legacy = 1.0;

    // ---- derived quantities ----
    double p_max_w() const;
    double noise_power_w() const;       // sigma_n^2 = PSD(linear W/Hz) * W
    double path_gain_eff() const;       // path_gain, or the derived default
    double eps1_eff() const;

    /// Fills auto fields (array dims, path gain) and checks every invariant.
    /// Throws std::invalid_argument naming the offending key.
    void finalize();

    /// finalize() must have been called (array dims set).
    int sub_array_size() const { return n_tx / n_rf; }
};

/// Parse a flat "key = value" text file ('#' comments, blank lines ok) on
/// top of the defaults above, then finalize. Unknown keys are an error.
SystemConfig load_config(const std::string& path);

/// Same, but from an already-read buffer (used by tests and load_config).
SystemConfig parse_config(const std::string& text);

double dbm_to_watt(double dbm);

}  // namespace phone
