#include "dopamine/analysis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "dopamine/gradients.hpp"
#include "dopamine/losses.hpp"
#include "dopamine/spectral.hpp"

namespace dopamine {

namespace {

std::vector<Matrix> draw_directions(const NetworkState& net, GaussianStream& rng) {
    std::vector<Matrix> dirs;
    dirs.reserve(net.params.size());
    for (const auto& p : net.params) {
        Matrix d(p.rows(), p.cols());
        for (Eigen::Index i = 0; i < d.rows(); ++i)
            for (Eigen::Index j = 0; j < d.cols(); ++j) d(i, j) = rng.next();
        dirs.push_back(std::move(d));
    }
    return dirs;
}

/// Rescales each direction block to the matching parameter block's Frobenius
/// norm (the "filter normalization" of the random-direction method). Zero
/// parameter blocks zero the direction, pinning the slice to trained scale.
void filter_normalize(std::vector<Matrix>& dirs, const NetworkState& net) {
    for (size_t l = 0; l < dirs.size(); ++l) {
        const double dn = dirs[l].norm();
        dirs[l] *= dn > 0.0 ? net.params[l].w.norm() / dn : 0.0;
    }
}

std::vector<double> axis_values(double lo, double hi, int steps) {
    std::vector<double> v(steps);
    for (int i = 0; i < steps; ++i) {
        // Endpoint blend instead of lo + i*step: symmetric ranges then hit
        // the midpoint exactly at 0, putting theta* itself on the grid.
        const double t = static_cast<double>(i) / static_cast<double>(steps - 1);
        v[i] = lo * (1.0 - t) + hi * t;
    }
    return v;
}

}  // namespace

LandscapeGrid loss_landscape(const NetworkState& net, const LossFn& loss,
                             const LandscapeOptions& opt) {
    if (opt.steps0 < 2 || opt.steps1 < 2)
        throw std::invalid_argument("loss_landscape: need at least 2 steps per axis");
    if (!(opt.hi0 > opt.lo0) || !(opt.hi1 > opt.lo1))
        throw std::invalid_argument("loss_landscape: empty axis range");

    LandscapeGrid grid;
    grid.seed = opt.seed;
    {
        GaussianStream g1(derive_seed(opt.seed, StreamKind::directions, 0));
        GaussianStream g2(derive_seed(opt.seed, StreamKind::directions, 1));
        grid.dir1 = draw_directions(net, g1);
        grid.dir2 = draw_directions(net, g2);
    }
    if (opt.filter_normalize) {
        filter_normalize(grid.dir1, net);
        filter_normalize(grid.dir2, net);
    }
    grid.alphas = axis_values(opt.lo0, opt.hi0, opt.steps0);
    grid.betas = axis_values(opt.lo1, opt.hi1, opt.steps1);

    grid.losses.resize(opt.steps0, opt.steps1);
    NetworkState shifted = net;
    for (int i = 0; i < opt.steps0; ++i) {
        const double a = grid.alphas[i];
        for (int j = 0; j < opt.steps1; ++j) {
            const double b = grid.betas[j];
            for (size_t l = 0; l < net.params.size(); ++l)
                shifted.params[l].w = net.params[l].w + a * grid.dir1[l] + b * grid.dir2[l];
            const double val = loss(shifted);
            grid.losses(i, j) = std::isfinite(val) ? val
                                                   : std::numeric_limits<double>::infinity();
        }
    }
    return grid;
}

namespace {

/// Two-sided 95% Student-t critical values for df = 1..30; normal beyond.
double t_critical(int df) {
    static constexpr double table[30] = {
        12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
        2.201,  2.179, 2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086,
        2.080,  2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042};
    if (df < 1) throw std::invalid_argument("t_critical: df < 1");
    return df <= 30 ? table[df - 1] : 1.96;
}

}  // namespace

RunSummary summarize_runs(const std::vector<double>& values, bool student_t) {
    const int n = static_cast<int>(values.size());
    if (n < 2) throw std::invalid_argument("summarize_runs: need at least 2 runs for a CI");
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= n;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / (n - 1));
    const double crit = student_t ? t_critical(n - 1) : 1.96;
    const double half = crit * sd / std::sqrt(static_cast<double>(n));
    return {mean, mean - half, mean + half, n};
}

double median(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("median: empty input");
    std::sort(values.begin(), values.end());
    const size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct TrialStats {
    double mean = 0.0, sem = 0.0, med = 0.0;
};

TrialStats trial_stats(const std::vector<double>& times) {
    TrialStats s;
    const int n = static_cast<int>(times.size());
    for (double t : times) s.mean += t;
    s.mean /= n;
    if (n > 1) {
        double ss = 0.0;
        for (double t : times) ss += (t - s.mean) * (t - s.mean);
        s.sem = std::sqrt(ss / (n - 1)) / std::sqrt(static_cast<double>(n));
    }
    s.med = median(times);
    return s;
}

SeqBatch synthetic_batch(int T, int batch, int dim, std::uint64_t seed) {
    GaussianStream g(derive_seed(seed, StreamKind::data_noise, static_cast<uint64_t>(T)));
    SeqBatch b;
    b.steps.resize(T);
    b.step_targets.resize(T);
    for (int t = 0; t < T; ++t) {
        b.steps[t].resize(batch, dim);
        b.step_targets[t].resize(batch, dim);
        for (int i = 0; i < batch; ++i)
            for (int j = 0; j < dim; ++j) {
                b.steps[t](i, j) = g.next();
                b.step_targets[t](i, j) = g.next();
            }
    }
    return b;
}

enum class TimedKind { perturb, bptt_sgd, bptt_adam };

TimedKind parse_timed(const std::string& name) {
    if (name == "wp" || name == "swp" || name == "dopamine1" || name == "dopamine2")
        return TimedKind::perturb;
    if (name == "bptt-sgd") return TimedKind::bptt_sgd;
    if (name == "bptt-adam") return TimedKind::bptt_adam;
    throw std::invalid_argument("time_optimizer: unknown optimizer '" + name + "'");
}

PerturbConfig timing_perturb_config(const std::string& name) {
    PerturbConfig cfg;
    cfg.eta0 = 1e-4;
    cfg.sigma_sq = 1e-4;
    cfg.beta_s = 0.9998;
    cfg.beta_eta = 1e-4;
    if (name == "swp") {
        cfg.variant = PerturbVariant::spectral_wp;
        cfg.lambda = 1.0;
    } else if (name == "dopamine1") {
        cfg.variant = PerturbVariant::dopamine1;
    } else if (name == "dopamine2") {
        cfg.variant = PerturbVariant::dopamine2;
    }
    return cfg;
}

}  // namespace

std::vector<TimingRecord> time_optimizer(const std::string& optimizer, const TimingOptions& opt) {
    if (opt.repeats < 1) throw std::invalid_argument("time_optimizer: repeats >= 1");
    const TimedKind kind = parse_timed(optimizer);

    RnnSpec spec;
    spec.input_dim = 3;
    spec.hidden_dim = opt.hidden_dim;
    spec.output_dim = 3;
    spec.use_bias = true;

    std::vector<TimingRecord> records;
    for (int T : opt.seq_lens) {
        if (T < 1) throw std::invalid_argument("time_optimizer: sequence lengths must be >= 1");

        GaussianStream init(derive_seed(opt.seed, StreamKind::init));
        NetworkState net = make_rnn(spec, init);
        // He init sits exactly at the critical forward gain of a ReLU RNN, so
        // at T in the thousands an above-unity fluctuation overflows the
        // forward pass. Pin the recurrent radius below 1: we are measuring
        // cost per step, not training dynamics.
        spectral_reset(net.params[net.recurrent_index()].w, 0.9);
        const NetworkState pristine = net;

        if (kind != TimedKind::perturb &&
            bptt_transient_bytes(net, T, opt.batch_size) > opt.memory_cap_bytes) {
            for (const char* phase : {"update-only", "forward+update"})
                records.push_back({optimizer, T, phase, 0.0, 0.0, 0.0, 0, true});
            continue;
        }

        const SeqBatch batch = synthetic_batch(T, opt.batch_size, 3, opt.seed);
        GaussianStream perturb_rng(derive_seed(opt.seed, StreamKind::perturb,
                                               static_cast<uint64_t>(T)));
        DopamineState dstate;
        AdamState astate;
        if (kind == TimedKind::perturb)
            dstate = DopamineState::init(timing_perturb_config(optimizer), net);
        else if (kind == TimedKind::bptt_adam)
            astate = AdamState::init(AdamConfig{}, net);
        const LossFn loss = [&batch](const NetworkState& m) { return rnn_seq_mse(m, batch); };

        // The update phase of the perturbation family is microseconds-scale;
        // run it in a burst per trial so clock granularity cannot dominate.
        const int burst = kind == TimedKind::perturb ? 50 : 1;

        std::vector<double> update_times, full_times;
        for (int trial = -opt.warmup; trial < opt.repeats; ++trial) {
            // Restart from the pristine weights so compounded updates cannot
            // drift the recurrent gain over the course of the study.
            for (size_t l = 0; l < net.params.size(); ++l)
                net.params[l].w = pristine.params[l].w;
            double update_s = 0.0, full_s = 0.0;
            if (kind == TimedKind::perturb) {
                PerturbationDraw draw = sample_perturbation(net, dstate.cfg.sigma_sq, perturb_rng);
                const double r = regret(net, draw, loss);
                const auto t0 = Clock::now();
                for (int k = 0; k < burst; ++k) dopamine_apply(dstate, net, draw, r);
                update_s = seconds_since(t0) / burst;

                const auto t1 = Clock::now();
                dopamine_step(dstate, net, loss, perturb_rng);
                full_s = seconds_since(t1);
            } else {
                BpttHistory hist = bptt_forward(net, batch);
                const auto t0 = Clock::now();
                GradientSet grads = bptt_backward(net, batch, hist);
                if (kind == TimedKind::bptt_sgd)
                    sgd_step(net, grads, 1e-3);
                else
                    adam_step(astate, net, grads);
                update_s = seconds_since(t0);

                const auto t1 = Clock::now();
                LossAndGrads lg = bptt(net, batch);
                if (kind == TimedKind::bptt_sgd)
                    sgd_step(net, lg.grads, 1e-3);
                else
                    adam_step(astate, net, lg.grads);
                full_s = seconds_since(t1);
            }
            if (trial >= 0) {
                update_times.push_back(update_s);
                full_times.push_back(full_s);
            }
        }

        const TrialStats us = trial_stats(update_times);
        const TrialStats fs = trial_stats(full_times);
        records.push_back({optimizer, T, "update-only", us.mean, us.sem, us.med,
                           static_cast<int>(update_times.size()), false});
        records.push_back({optimizer, T, "forward+update", fs.mean, fs.sem, fs.med,
                           static_cast<int>(full_times.size()), false});
    }
    return records;
}

std::vector<TimingRecord> time_optimizers(const TimingOptions& opt) {
    std::vector<TimingRecord> all;
    for (const auto& name : opt.optimizers) {
        auto part = time_optimizer(name, opt);
        all.insert(all.end(), part.begin(), part.end());
    }
    return all;
}

}  // namespace dopamine
