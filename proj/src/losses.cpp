#include "dopamine/losses.hpp"

#include <cmath>
#include <stdexcept>

namespace dopamine {

double bce_loss(const Matrix& probs, const std::vector<int>& labels) {
    if (probs.rows() != static_cast<Eigen::Index>(labels.size()))
        throw std::invalid_argument("bce_loss: label count mismatch");
    if (probs.rows() == 0) throw std::invalid_argument("bce_loss: empty batch");
    double total = 0.0;
    for (Eigen::Index i = 0; i < probs.rows(); ++i) {
        const int y = labels[i];
        if (y < 0 || y >= probs.cols()) throw std::invalid_argument("bce_loss: label out of range");
        total += -std::log(std::max(probs(i, y), 1e-12));
    }
    return total / static_cast<double>(probs.rows());
}

double mse_loss(const Matrix& preds, const Matrix& targets) {
    if (preds.rows() != targets.rows() || preds.cols() != targets.cols())
        throw std::invalid_argument("mse_loss: shape mismatch");
    if (preds.size() == 0) throw std::invalid_argument("mse_loss: empty input");
    return (preds - targets).squaredNorm() / static_cast<double>(preds.size());
}

double seq_mse_loss(const std::vector<Matrix>& preds, const std::vector<Matrix>& targets) {
    if (preds.size() != targets.size())
        throw std::invalid_argument("seq_mse_loss: step count mismatch");
    if (preds.empty()) throw std::invalid_argument("seq_mse_loss: empty sequence");
    double total = 0.0;
    for (size_t t = 0; t < preds.size(); ++t) total += mse_loss(preds[t], targets[t]);
    return total / static_cast<double>(preds.size());
}

}  // namespace dopamine
