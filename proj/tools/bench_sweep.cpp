// Times the sweep executor in serial and OpenMP mode on the same workload
// and checks that both produce identical rows.
#include <chrono>
#include <cstdio>
#include <string>

#include "phone/sweep.hpp"

int main(int argc, char** argv) {
    phone::SystemConfig cfg;
    cfg.n_tx = argc > 1 ? std::stoi(argv[1]) : 40;
    cfg.n_rf = argc > 2 ? std::stoi(argv[2]) : 4;
    cfg.n_users = argc > 3 ? std::stoi(argv[3]) : 3;
    cfg.finalize();

    phone::SweepSpec spec;
    spec.parameter = phone::SweepParam::NTx;
    spec.values = {cfg.n_tx};
    spec.trials = argc > 4 ? std::stoi(argv[4]) : 4;
    spec.base_seed = 7;

    auto time_run = [&](bool parallel) {
        auto t0 = std::chrono::steady_clock::now();
        auto records = phone::run_sweep(cfg, spec, parallel);
        auto t1 = std::chrono::steady_clock::now();
        double s = std::chrono::duration<double>(t1 - t0).count();
        return std::make_pair(s, records);
    };

    auto [t_serial, serial] = time_run(false);
    auto [t_parallel, parallel] = time_run(true);

    bool match = serial.size() == parallel.size();
    for (std::size_t i = 0; match && i < serial.size(); ++i)
        match = phone::to_csv_row(serial[i]) == phone::to_csv_row(parallel[i]);

    std::printf("cells: %d x %d algorithms\n", spec.trials,
                static_cast<int>(spec.algorithms.size()));
    std::printf("serial:   %.3f s\n", t_serial);
    std::printf("parallel: %.3f s\n", t_parallel);
    std::printf("speedup:  %.2fx\n", t_serial / t_parallel);
    std::printf("outputs identical: %s\n", match ? "yes" : "NO");
    return match ? 0 : 1;
}
