#include "phone/precoder.hpp"

#include <cmath>
#include <stdexcept>

namespace phone {

Eigen::MatrixXcd HybridPrecoder::materialize_rf(int n_tx) const {
    const int n_rf = static_cast<int>(rf_phases.cols());
    Eigen::MatrixXcd rf = Eigen::MatrixXcd::Zero(n_tx, n_rf);
    if (structure == Structure::Partial) {
        const int block = n_tx / n_rf;
        if (rf_phases.rows() != block)
            throw std::invalid_argument("rf_phases: bad sub-array size");
        for (int j = 0; j < n_rf; ++j)
            for (int r = 0; r < block; ++r) {
                double p = rf_phases(r, j);
                rf(j * block + r, j) = std::complex<double>(std::cos(p), std::sin(p));
            }
    } else {
        if (rf_phases.rows() != n_tx)
            throw std::invalid_argument("rf_phases: bad row count");
        for (int j = 0; j < n_rf; ++j)
            for (int i = 0; i < n_tx; ++i) {
                double p = rf_phases(i, j);
                rf(i, j) = std::complex<double>(std::cos(p), std::sin(p));
            }
    }
    return rf;
}

Eigen::MatrixXcd HybridPrecoder::effective(int n_tx) const {
    return materialize_rf(n_tx) * b_bb;
}

}  // namespace phone
