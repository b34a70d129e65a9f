#pragma once

#include <cstdint>
#include <vector>

#include "dopamine/network.hpp"

namespace dopamine {

/// dL/d(param) for every entry of NetworkState::params, same shapes and order.
using GradientSet = std::vector<Matrix>;

struct LossAndGrads {
    double loss = 0.0;
    GradientSet grads;
};

/// Reverse-mode gradients for an MLP (ReLU hidden layers, configured head,
/// BCE for classification heads / MSE for linear heads).
LossAndGrads mlp_backprop(const NetworkState& net, const Batch& batch);

/// Truncated BPTT over one lookback window: forward pass storing all hidden
/// states, backward pass through time, loss summed over window steps (mean
/// over batch and output dims within a step).
LossAndGrads bptt(const NetworkState& net, const SeqBatch& batch);

/// The per-step history bptt's backward sweep consumes — the O(N*T) transient
/// that weight perturbation never allocates. Exposed so the timing study can
/// clock the two phases separately; bptt() composes them.
struct BpttHistory {
    std::vector<Matrix> pres;     // pre-activations per step
    std::vector<Matrix> hiddens;  // h_0 .. h_T
    std::vector<Matrix> dpreds;   // dL/d(prediction_t)
    double loss = 0.0;
};

BpttHistory bptt_forward(const NetworkState& net, const SeqBatch& batch);
GradientSet bptt_backward(const NetworkState& net, const SeqBatch& batch,
                          const BpttHistory& history);

/// Bytes of transient history bptt() must hold live for a window of length T:
/// the stored pre-activations and hidden states that weight-perturbation
/// training never allocates. Used by the timing study's memory cap.
std::uint64_t bptt_transient_bytes(const NetworkState& net, int lookback, int batch_size);

/// theta <- theta - eta * grad
void sgd_step(NetworkState& net, const GradientSet& grads, double eta);

struct AdamConfig {
    double eta = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

struct AdamState {
    AdamConfig cfg;
    std::vector<Matrix> m;
    std::vector<Matrix> v;
    long step = 0;

    static AdamState init(const AdamConfig& cfg, const NetworkState& net);
};

/// Bias-corrected Adam update (Kingma & Ba form).
void adam_step(AdamState& state, NetworkState& net, const GradientSet& grads);

}  // namespace dopamine
