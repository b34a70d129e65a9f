#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dopamine/network.hpp"

namespace dopamine {

/// Per-layer Gaussian noise xi with shared scale sigma^2; shapes mirror the
/// network's parameter list.
struct PerturbationDraw {
    std::vector<Matrix> noise;
    double sigma_sq = 0.0;
};

/// Draws xi ~ N(0, sigma^2 I) for every layer. Deterministic given the
/// stream state. Throws on sigma_sq <= 0.
PerturbationDraw sample_perturbation(const NetworkState& net, double sigma_sq,
                                     GaussianStream& rng);

/// A loss evaluator over a network; the batch is bound inside the closure.
using LossFn = std::function<double(const NetworkState&)>;

/// Regret R = L(theta + xi) - L(theta): exactly two loss evaluations, and the
/// network's parameters are left bit-identical. Throws on non-finite loss.
double regret(const NetworkState& net, const PerturbationDraw& draw, const LossFn& loss);

/// Truncated regret over a lookback window: the sum over window steps of
/// (perturbed step loss - unperturbed step loss). Equals regret() when the
/// loss closure window-sums the per-step losses. Throws on an empty window.
double truncated_regret(const NetworkState& net, const PerturbationDraw& draw,
                        const SeqBatch& batch);

/// theta <- theta - (eta / sigma^2) * R * xi, all layers simultaneously.
void wp_update(NetworkState& net, const PerturbationDraw& draw, double regret_value,
               double eta);

enum class PerturbVariant { wp, spectral_wp, dopamine1, dopamine2 };

const char* variant_name(PerturbVariant v);

struct PerturbConfig {
    PerturbVariant variant = PerturbVariant::wp;
    double eta0 = 1e-3;
    double sigma_sq = 1e-4;
    double s0 = 0.0;
    double beta_s = 0.999;   // in (0,1); the beta_eta < beta_s heuristic is
    double beta_eta = 1e-4;  // recorded but not enforced
    double lambda = 0.0;     // target spectral radius; 0 disables resets
    int spectral_interval = 1;
    std::optional<double> eta_floor;  // optional clamp, off by default
    bool per_layer_s = false;         // advance s inside the layer loop
    int draws_per_step = 1;

    void validate(bool adaptive) const;
};

/// Optimizer state: auxiliary moving average s (shared per step) and one
/// learning rate per layer.
struct DopamineState {
    PerturbConfig cfg;
    double s = 0.0;
    std::vector<double> eta;
    long step = 0;

    static DopamineState init(const PerturbConfig& cfg, const NetworkState& net);
};

/// s_t = beta_s * s_{t-1} - (1 - beta_s) * R_t
double dopamine_s_update(double s_prev, double regret_value, double beta_s);

/// eta_t = (1 - beta_eta) * eta_{t-1} - beta_eta * s_t   (learning rate
/// follows the reward-prediction error)
double dopamine1_eta(double eta_prev, double s, double beta_eta);

/// eta_t = (1 - beta_eta) * eta_{t-1} + beta_eta * s_t   (learning rate
/// exponentially decays toward the reward-prediction error)
double dopamine2_eta(double eta_prev, double s, double beta_eta);

struct StepResult {
    double regret_value = 0.0;
    double loss_before = 0.0;  // unperturbed loss L(theta_t)
};

/// One optimizer step: sample xi per layer, compute one global R (two loss
/// evaluations), advance s once, advance each layer's eta, update every layer
/// by -eta^l * R * xi^l / sigma^2, then reset the recurrent matrix's spectral
/// radius when configured. Plain WP and Spectral WP take the same path with
/// the learning-rate recurrences skipped.
StepResult dopamine_step(DopamineState& state, NetworkState& net, const LossFn& loss,
                         GaussianStream& rng);

/// The post-regret phase of dopamine_step — s and eta recurrences, the Eq. 7
/// parameter update, step count, spectral reset. Touches no sequence data:
/// its cost depends only on parameter count. Exposed for the timing study.
void dopamine_apply(DopamineState& state, NetworkState& net, const PerturbationDraw& draw,
                    double regret_value);

}  // namespace dopamine
