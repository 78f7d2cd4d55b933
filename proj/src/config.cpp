#include "phone/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace phone {

double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double SystemConfig::p_max_w() const { return dbm_to_watt(p_max_dbm); }

double SystemConfig::noise_power_w() const {
    return dbm_to_watt(noise_psd_dbm_per_hz) * bandwidth_hz;
}

double SystemConfig::path_gain_eff() const {
    if (path_gain > 0.0) return path_gain;
    // Calibrated so the per-user receive SNR at the equal split p_max/K,
    // including the full array gain N_T, equals snr_avg_linear.
    return snr_avg_linear * noise_power_w() * n_users / (p_max_w() * n_tx);
}

double SystemConfig::eps1_eff() const {
    return eps1 > 0.0 ? eps1 : 1e-3 * std::sqrt(p_max_w());
}

namespace {

void fail(const std::string& key, const std::string& why) {
    throw std::invalid_argument("config: " + key + ": " + why);
}

void require(bool ok, const std::string& key, const std::string& why) {
    if (!ok) fail(key, why);
}

bool is_power_of(int value, int base, int* exponent = nullptr) {
    if (value < 1 || base < 2) return false;
    int e = 0;
    long long v = 1;
    while (v < value) {
        v *= base;
        ++e;
    }
    if (exponent) *exponent = e;
    return v == value;
}

}  // namespace

void SystemConfig::finalize() {
    require(n_users >= 1, "n_users", "must be >= 1");
    require(n_tx >= 1, "n_tx", "must be >= 1");
    require(n_rf >= 1, "n_rf", "must be >= 1");
    require(n_rays >= 1, "n_rays", "must be >= 1");
    require(n_users <= n_rf, "n_users", "K <= N_RF required");
    require(n_rf <= n_tx, "n_rf", "N_RF <= N_T required");
    require(n_tx % n_rf == 0, "n_tx", "N_T must be divisible by N_RF");

    if (array_rows == 0 && array_cols == 0) {
        // nearest-square factorization M * N = N_T with M <= N
        int m = static_cast<int>(std::sqrt(static_cast<double>(n_tx)));
        while (m > 1 && n_tx % m != 0) --m;
        array_rows = m;
        array_cols = n_tx / m;
    }
    require(array_rows >= 1 && array_cols >= 1, "array_rows", "must be >= 1");
    require(array_rows * array_cols == n_tx, "array_rows",
            "array_rows * array_cols must equal n_tx");

    require(bandwidth_hz > 0, "bandwidth_hz", "must be > 0");
    require(pa_efficiency > 0 && pa_efficiency <= 1, "pa_efficiency",
            "must be in (0, 1]");
    require(p_one_rf_w > 0, "p_one_rf_w", "must be > 0");
    require(p_shifter_w > 0, "p_shifter_w", "must be > 0");
    require(p_fix_w > 0, "p_fix_w", "must be > 0");
    require(p_cod_w_per_bps > 0, "p_cod_w_per_bps", "must be > 0");
    require(l_tr_flops_per_w > 0, "l_tr_flops_per_w", "must be > 0");
    require(bits_per_symbol > 0, "bits_per_symbol", "must be > 0");
    require(c_cmplx > 0, "c_cmplx", "must be > 0");
    require(kappa >= 2, "kappa", "must be >= 2");
    require(is_power_of(n_aod, kappa), "n_aod", "must be a power of kappa");
    require(delta_err > 0 && delta_err < 1, "delta_err", "must be in (0, 1)");
    require(snr_avg_linear > 0, "snr_avg_linear", "must be > 0");
    require(ce_scale > 0, "ce_scale", "must be > 0");
    require(path_gain >= 0, "path_gain", "must be >= 0 (0 = auto)");
    require(spacing_over_lambda > 0, "spacing_over_lambda", "must be > 0");
    require(beta_power >= 0, "beta_power", "must be >= 0");
    require(beta_t >= 0, "beta_t", "must be >= 0");
    require(beta_shifter >= 0, "beta_shifter", "must be >= 0");
    require(beta_rf >= 0, "beta_rf", "must be >= 0");
    require(beta_bb >= 0, "beta_bb", "must be >= 0");
    require(eps1 >= 0, "eps1", "must be >= 0 (0 = auto)");
    require(eps2_rel > 0, "eps2_rel", "must be > 0");
    require(step_interval > 0 && step_interval <= 1, "step_interval",
            "must be in (0, 1]");
    require(max_iters >= 1, "max_iters", "must be >= 1");
    require(max_alternations >= 1, "max_alternations", "must be >= 1");
    require(n_restarts >= 1, "n_restarts", "must be >= 1");
    require(n_randomizations >= 1, "n_randomizations", "must be >= 1");
    require(sdp_tol > 0, "sdp_tol", "must be > 0");

    // Materialize the calibrated path gain: link-budget calibration is done
    // once for the configured system, so subsequent parameter substitutions
    // (e.g. antenna-count sweeps) keep the propagation environment fixed.
    if (path_gain == 0.0) path_gain = path_gain_eff();
}

SystemConfig parse_config(const std::string& text) {
    SystemConfig cfg;
    std::map<std::string, std::function<void(const std::string&)>> setters;
    auto num = [](double* dst) {
        return [dst](const std::string& v) { *dst = std::stod(v); };
    };
    auto integer = [](int* dst) {
        return [dst](const std::string& v) { *dst = std::stoi(v); };
    };
    setters["n_users"] = integer(&cfg.n_users);
    setters["n_tx"] = integer(&cfg.n_tx);
    setters["n_rf"] = integer(&cfg.n_rf);
    setters["n_rays"] = integer(&cfg.n_rays);
    setters["bandwidth_hz"] = num(&cfg.bandwidth_hz);
    setters["noise_psd_dbm_per_hz"] = num(&cfg.noise_psd_dbm_per_hz);
    setters["p_max_dbm"] = num(&cfg.p_max_dbm);
    setters["pa_efficiency"] = num(&cfg.pa_efficiency);
    setters["p_one_rf_w"] = num(&cfg.p_one_rf_w);
    setters["p_shifter_w"] = num(&cfg.p_shifter_w);
    setters["p_fix_w"] = num(&cfg.p_fix_w);
    setters["p_cod_w_per_bps"] = num(&cfg.p_cod_w_per_bps);
    setters["l_tr_flops_per_w"] = num(&cfg.l_tr_flops_per_w);
    setters["bits_per_symbol"] = num(&cfg.bits_per_symbol);
    setters["c_cmplx"] = num(&cfg.c_cmplx);
    setters["kappa"] = integer(&cfg.kappa);
    setters["n_aod"] = integer(&cfg.n_aod);
    setters["delta_err"] = num(&cfg.delta_err);
    setters["snr_avg_linear"] = num(&cfg.snr_avg_linear);
    setters["ce_scale"] = num(&cfg.ce_scale);
    setters["path_gain"] = num(&cfg.path_gain);
    setters["array_rows"] = integer(&cfg.array_rows);
    setters["array_cols"] = integer(&cfg.array_cols);
    setters["spacing_over_lambda"] = num(&cfg.spacing_over_lambda);
    setters["beta_power"] = num(&cfg.beta_power);
    setters["beta_t"] = num(&cfg.beta_t);
    setters["beta_shifter"] = num(&cfg.beta_shifter);
    setters["beta_rf"] = num(&cfg.beta_rf);
    setters["beta_bb"] = num(&cfg.beta_bb);
    setters["eps1"] = num(&cfg.eps1);
    setters["eps2_rel"] = num(&cfg.eps2_rel);
    setters["step_interval"] = num(&cfg.step_interval);
    setters["max_iters"] = integer(&cfg.max_iters);
    setters["max_alternations"] = integer(&cfg.max_alternations);
    setters["n_restarts"] = integer(&cfg.n_restarts);
    setters["n_randomizations"] = integer(&cfg.n_randomizations);
    setters["sdp_tol"] = num(&cfg.sdp_tol);
    setters["tau_legacy"] = num(&cfg.tau_legacy);

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto strip = [](std::string s) {
            auto b = s.find_first_not_of(" \t\r");
            if (b == std::string::npos) return std::string();
            auto e = s.find_last_not_of(" \t\r");
            return s.substr(b, e - b + 1);
        };
        line = strip(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                        ": expected key = value");
        std::string key = strip(line.substr(0, eq));
        std::string value = strip(line.substr(eq + 1));
        auto it = setters.find(key);
        if (it == setters.end())
            throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                        ": unknown key '" + key + "'");
        try {
            it->second(value);
        } catch (const std::exception&) {
            throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                        ": bad value for '" + key + "'");
        }
    }
    cfg.finalize();
    return cfg;
}

SystemConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

}  // namespace phone
