#include "dopamine/perturb.hpp"

#include <cmath>
#include <stdexcept>

#include "dopamine/spectral.hpp"

namespace dopamine {

PerturbationDraw sample_perturbation(const NetworkState& net, double sigma_sq,
                                     GaussianStream& rng) {
    if (!(sigma_sq > 0.0)) throw std::invalid_argument("sample_perturbation: sigma^2 must be > 0");
    const double sigma = std::sqrt(sigma_sq);
    PerturbationDraw draw;
    draw.sigma_sq = sigma_sq;
    draw.noise.reserve(net.params.size());
    for (const auto& p : net.params) {
        Matrix xi(p.rows(), p.cols());
        for (Eigen::Index i = 0; i < xi.rows(); ++i)
            for (Eigen::Index j = 0; j < xi.cols(); ++j) xi(i, j) = sigma * rng.next();
        draw.noise.push_back(std::move(xi));
    }
    return draw;
}

namespace {

void check_draw(const NetworkState& net, const PerturbationDraw& draw) {
    if (draw.noise.size() != net.params.size())
        throw std::invalid_argument("perturbation draw does not match network layout");
    for (size_t i = 0; i < draw.noise.size(); ++i)
        if (draw.noise[i].rows() != net.params[i].rows() ||
            draw.noise[i].cols() != net.params[i].cols())
            throw std::invalid_argument("perturbation draw shape mismatch at layer " +
                                        net.params[i].name);
}

/// L(theta) and L(theta + xi): the exactly-two evaluations behind every
/// regret. The incoming network is never modified.
std::pair<double, double> loss_pair(const NetworkState& net, const PerturbationDraw& draw,
                                    const LossFn& loss) {
    check_draw(net, draw);
    const double base = loss(net);
    NetworkState perturbed = net;
    for (size_t i = 0; i < perturbed.params.size(); ++i) perturbed.params[i].w += draw.noise[i];
    const double shifted = loss(perturbed);
    if (!std::isfinite(base) || !std::isfinite(shifted))
        throw std::domain_error("regret: non-finite loss");
    return {base, shifted};
}

/// Shared Eq. 7 kernel. Plain WP calls it with a constant eta vector, so the
/// beta_eta = 0 reduction is bit-identical by construction.
void apply_update(NetworkState& net, const PerturbationDraw& draw, double regret_value,
                  const std::vector<double>& eta) {
    for (size_t i = 0; i < net.params.size(); ++i) {
        const double scale = eta[i] * regret_value / draw.sigma_sq;
        net.params[i].w -= scale * draw.noise[i];
    }
}

}  // namespace

double regret(const NetworkState& net, const PerturbationDraw& draw, const LossFn& loss) {
    const auto [base, shifted] = loss_pair(net, draw, loss);
    return shifted - base;
}

double truncated_regret(const NetworkState& net, const PerturbationDraw& draw,
                        const SeqBatch& batch) {
    if (batch.steps.empty()) throw std::invalid_argument("truncated_regret: empty window");
    check_draw(net, draw);
    const std::vector<double> base = rnn_step_losses(net, batch);
    NetworkState perturbed = net;
    for (size_t i = 0; i < perturbed.params.size(); ++i) perturbed.params[i].w += draw.noise[i];
    const std::vector<double> shifted = rnn_step_losses(perturbed, batch);
    double r = 0.0;
    for (size_t t = 0; t < base.size(); ++t) r += shifted[t] - base[t];
    if (!std::isfinite(r)) throw std::domain_error("truncated_regret: non-finite loss");
    return r;
}

void wp_update(NetworkState& net, const PerturbationDraw& draw, double regret_value,
               double eta) {
    check_draw(net, draw);
    apply_update(net, draw, regret_value, std::vector<double>(net.params.size(), eta));
}

const char* variant_name(PerturbVariant v) {
    switch (v) {
        case PerturbVariant::wp: return "wp";
        case PerturbVariant::spectral_wp: return "swp";
        case PerturbVariant::dopamine1: return "dopamine1";
        case PerturbVariant::dopamine2: return "dopamine2";
    }
    return "?";
}

void PerturbConfig::validate(bool adaptive) const {
    if (!(sigma_sq > 0.0)) throw std::invalid_argument("PerturbConfig: sigma^2 must be > 0");
    if (draws_per_step < 1) throw std::invalid_argument("PerturbConfig: draws_per_step >= 1");
    if (spectral_interval < 1) throw std::invalid_argument("PerturbConfig: spectral_interval >= 1");
    if (variant == PerturbVariant::spectral_wp && !(lambda > 0.0))
        throw std::invalid_argument("PerturbConfig: spectral WP needs lambda > 0");
    if (adaptive) {
        // beta_eta = 0 is admitted deliberately: it is the WP-reduction case.
        if (!(beta_s > 0.0) || !(beta_s < 1.0))
            throw std::invalid_argument("PerturbConfig: beta_s must lie in (0,1)");
        if (!(beta_eta >= 0.0) || !(beta_eta < 1.0))
            throw std::invalid_argument("PerturbConfig: beta_eta must lie in [0,1)");
    }
}

DopamineState DopamineState::init(const PerturbConfig& cfg, const NetworkState& net) {
    const bool adaptive =
        cfg.variant == PerturbVariant::dopamine1 || cfg.variant == PerturbVariant::dopamine2;
    cfg.validate(adaptive);
    DopamineState state;
    state.cfg = cfg;
    state.s = cfg.s0;
    state.eta.assign(net.params.size(), cfg.eta0);
    return state;
}

double dopamine_s_update(double s_prev, double regret_value, double beta_s) {
    return beta_s * s_prev - (1.0 - beta_s) * regret_value;
}

double dopamine1_eta(double eta_prev, double s, double beta_eta) {
    return (1.0 - beta_eta) * eta_prev - beta_eta * s;
}

double dopamine2_eta(double eta_prev, double s, double beta_eta) {
    return (1.0 - beta_eta) * eta_prev + beta_eta * s;
}

namespace {

void advance_rates(DopamineState& state, double r) {
    const PerturbConfig& cfg = state.cfg;
    const bool adaptive =
        cfg.variant == PerturbVariant::dopamine1 || cfg.variant == PerturbVariant::dopamine2;
    if (!adaptive) return;
    if (!cfg.per_layer_s) state.s = dopamine_s_update(state.s, r, cfg.beta_s);
    for (size_t l = 0; l < state.eta.size(); ++l) {
        // Algorithm-fidelity mode: the pseudocode nests the s update inside
        // the layer loop.
        if (cfg.per_layer_s) state.s = dopamine_s_update(state.s, r, cfg.beta_s);
        state.eta[l] = cfg.variant == PerturbVariant::dopamine1
                           ? dopamine1_eta(state.eta[l], state.s, cfg.beta_eta)
                           : dopamine2_eta(state.eta[l], state.s, cfg.beta_eta);
        if (cfg.eta_floor && state.eta[l] < *cfg.eta_floor) state.eta[l] = *cfg.eta_floor;
    }
}

void maybe_reset_spectral(DopamineState& state, NetworkState& net) {
    const PerturbConfig& cfg = state.cfg;
    const int rec = net.recurrent_index();
    if (cfg.lambda > 0.0 && rec >= 0 && state.step % cfg.spectral_interval == 0)
        net.params[rec].w = spectral_reset(net.params[rec].w, cfg.lambda);
}

}  // namespace

void dopamine_apply(DopamineState& state, NetworkState& net, const PerturbationDraw& draw,
                    double regret_value) {
    if (state.eta.size() != net.params.size())
        throw std::invalid_argument("dopamine_apply: state does not match network layout");
    advance_rates(state, regret_value);
    apply_update(net, draw, regret_value, state.eta);
    state.step += 1;
    maybe_reset_spectral(state, net);
}

StepResult dopamine_step(DopamineState& state, NetworkState& net, const LossFn& loss,
                         GaussianStream& rng) {
    const PerturbConfig& cfg = state.cfg;
    if (state.eta.size() != net.params.size())
        throw std::invalid_argument("dopamine_step: state does not match network layout");

    PerturbationDraw draw = sample_perturbation(net, cfg.sigma_sq, rng);
    const auto [base, shifted] = loss_pair(net, draw, loss);
    const double loss_before = base;
    double r = shifted - base;

    if (cfg.draws_per_step == 1) {
        dopamine_apply(state, net, draw, r);
        return {r, loss_before};
    }

    // Variance-reduction knob: average R_k * xi_k over the extra draws and
    // step along the mean direction.
    const double inv_k = 1.0 / static_cast<double>(cfg.draws_per_step);
    std::vector<Matrix> mean_dir;
    mean_dir.reserve(net.params.size());
    for (size_t l = 0; l < net.params.size(); ++l) mean_dir.push_back(r * inv_k * draw.noise[l]);
    double r_sum = r;
    for (int k = 1; k < cfg.draws_per_step; ++k) {
        const PerturbationDraw extra = sample_perturbation(net, cfg.sigma_sq, rng);
        const auto [b2, s2] = loss_pair(net, extra, loss);
        const double rk = s2 - b2;
        r_sum += rk;
        for (size_t l = 0; l < net.params.size(); ++l) mean_dir[l] += rk * inv_k * extra.noise[l];
    }
    r = r_sum * inv_k;

    advance_rates(state, r);
    for (size_t l = 0; l < net.params.size(); ++l)
        net.params[l].w -= (state.eta[l] / cfg.sigma_sq) * mean_dir[l];
    state.step += 1;
    maybe_reset_spectral(state, net);
    return {r, loss_before};
}

}  // namespace dopamine
