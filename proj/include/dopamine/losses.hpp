#pragma once

#include <vector>

#include "dopamine/network.hpp"

namespace dopamine {

/// Mean over samples of -log(prob of true class). Probabilities are clamped
/// below at 1e-12 before the log.
double bce_loss(const Matrix& probs, const std::vector<int>& labels);

/// Mean of squared differences over all elements.
double mse_loss(const Matrix& preds, const Matrix& targets);

/// Window-mean MSE over a per-step prediction sequence.
double seq_mse_loss(const std::vector<Matrix>& preds, const std::vector<Matrix>& targets);

}  // namespace dopamine
