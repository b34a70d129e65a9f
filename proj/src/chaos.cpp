#include "dopamine/chaos.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace dopamine {

namespace {

using State = std::array<double, 3>;

State rossler_deriv(const RosslerParams& p, const State& s) {
    const auto [x, y, z] = s;
    return {-(y + z), x + p.a * y, p.b + x * z - p.c * z};
}

State lorenz_deriv(const LorenzParams& p, const State& s) {
    const auto [x, y, z] = s;
    if (p.printed_variant) {
        // The source's appendix prints this inconsistent system (its final
        // term's "b" is read as beta); kept for inspection only.
        return {p.sigma * (x - y), p.rho * x - x * z, p.beta * y - p.beta * z};
    }
    return {p.sigma * (y - x), x * (p.rho - z) - y, x * y - p.beta * z};
}

template <typename Deriv>
Trajectory integrate(Deriv&& f, State s, double dt, int steps, Integrator method) {
    if (!(dt > 0.0)) throw std::invalid_argument("trajectory: dt must be > 0");
    if (steps < 1) throw std::invalid_argument("trajectory: need at least one state");
    Trajectory traj;
    traj.dt = dt;
    traj.states.resize(steps, 3);
    for (int k = 0; k < steps; ++k) {
        traj.states(k, 0) = s[0];
        traj.states(k, 1) = s[1];
        traj.states(k, 2) = s[2];
        if (!std::isfinite(s[0]) || !std::isfinite(s[1]) || !std::isfinite(s[2]))
            throw std::domain_error("trajectory: state diverged at step " + std::to_string(k));
        if (k + 1 == steps) break;
        if (method == Integrator::euler) {
            const State d = f(s);
            for (int i = 0; i < 3; ++i) s[i] += dt * d[i];
        } else {
            const State k1 = f(s);
            State s2, s3, s4;
            for (int i = 0; i < 3; ++i) s2[i] = s[i] + 0.5 * dt * k1[i];
            const State k2 = f(s2);
            for (int i = 0; i < 3; ++i) s3[i] = s[i] + 0.5 * dt * k2[i];
            const State k3 = f(s3);
            for (int i = 0; i < 3; ++i) s4[i] = s[i] + dt * k3[i];
            const State k4 = f(s4);
            for (int i = 0; i < 3; ++i)
                s[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    return traj;
}

}  // namespace

Trajectory rossler_trajectory(const RosslerParams& p, std::array<double, 3> init, double dt,
                              int steps, Integrator method) {
    return integrate([&p](const State& s) { return rossler_deriv(p, s); }, init, dt, steps,
                     method);
}

Trajectory lorenz_trajectory(const LorenzParams& p, std::array<double, 3> init, double dt,
                             int steps, Integrator method) {
    return integrate([&p](const State& s) { return lorenz_deriv(p, s); }, init, dt, steps,
                     method);
}

WindowedDataset make_windows(const Trajectory& traj, int lookback, bool normalize) {
    const int len = static_cast<int>(traj.states.rows());
    if (lookback < 1) throw std::invalid_argument("make_windows: lookback must be >= 1");
    if (len <= lookback) throw std::invalid_argument("make_windows: series too short for window");

    WindowedDataset data;
    data.normalized = normalize;
    Matrix series = traj.states;
    for (int c = 0; c < 3; ++c) {
        data.lo[c] = series.col(c).minCoeff();
        data.hi[c] = series.col(c).maxCoeff();
    }
    if (normalize) {
        for (int c = 0; c < 3; ++c) {
            const double span = data.hi[c] - data.lo[c];
            if (span > 0.0)
                series.col(c) = (series.col(c).array() - data.lo[c]) / span;
            else
                series.col(c).setZero();
        }
    }

    const int count = len - lookback;
    data.all.steps.resize(lookback);
    data.all.step_targets.resize(lookback);
    for (int t = 0; t < lookback; ++t) {
        data.all.steps[t] = series.middleRows(t, count);
        data.all.step_targets[t] = series.middleRows(t + 1, count);
    }
    return data;
}

Matrix denormalize(const Matrix& states, const WindowedDataset& data) {
    if (states.cols() != 3) throw std::invalid_argument("denormalize: expected 3 columns");
    if (!data.normalized) return states;
    Matrix out = states;
    for (int c = 0; c < 3; ++c)
        out.col(c) = out.col(c).array() * (data.hi[c] - data.lo[c]) + data.lo[c];
    return out;
}

SeqBatch sample_windows(const WindowedDataset& data, int count, SplitMix64& rng) {
    const int avail = data.count();
    const int T = data.all.lookback();
    if (count >= avail || count < 1) return data.all;

    std::vector<int> idx(avail);
    std::iota(idx.begin(), idx.end(), 0);
    for (int i = 0; i < count; ++i) {
        const int j = i + static_cast<int>(rng.next_u64() % static_cast<uint64_t>(avail - i));
        std::swap(idx[i], idx[j]);
    }

    SeqBatch out;
    out.steps.resize(T);
    out.step_targets.resize(T);
    for (int t = 0; t < T; ++t) {
        out.steps[t].resize(count, data.all.steps[t].cols());
        out.step_targets[t].resize(count, data.all.step_targets[t].cols());
        for (int i = 0; i < count; ++i) {
            out.steps[t].row(i) = data.all.steps[t].row(idx[i]);
            out.step_targets[t].row(i) = data.all.step_targets[t].row(idx[i]);
        }
    }
    return out;
}

Batch xor_dataset(int per_cluster, double noise_sd, std::uint64_t seed) {
    if (per_cluster < 1) throw std::invalid_argument("xor_dataset: need >= 1 point per cluster");
    if (noise_sd < 0.0) throw std::invalid_argument("xor_dataset: negative noise");
    static constexpr double corners[4][2] = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
    static constexpr int corner_labels[4] = {0, 1, 1, 0};

    GaussianStream g(derive_seed(seed, StreamKind::data_noise));
    Batch batch;
    batch.inputs.resize(4 * per_cluster, 2);
    batch.labels.reserve(4 * per_cluster);
    Eigen::Index row = 0;
    for (int c = 0; c < 4; ++c) {
        for (int k = 0; k < per_cluster; ++k, ++row) {
            batch.inputs(row, 0) = corners[c][0] + noise_sd * g.next();
            batch.inputs(row, 1) = corners[c][1] + noise_sd * g.next();
            batch.labels.push_back(corner_labels[c]);
        }
    }
    return batch;
}

XorSplit split_xor(const Batch& full, std::uint64_t seed) {
    const Eigen::Index n = full.size();
    if (n < 2) throw std::invalid_argument("split_xor: need at least 2 samples");
    std::vector<Eigen::Index> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    SplitMix64 rng(derive_seed(seed, StreamKind::split));
    for (Eigen::Index i = n - 1; i > 0; --i) {
        const Eigen::Index j =
            static_cast<Eigen::Index>(rng.next_u64() % static_cast<uint64_t>(i + 1));
        std::swap(idx[i], idx[j]);
    }
    const Eigen::Index n_train = (n + 1) / 2;
    XorSplit split;
    split.train.inputs.resize(n_train, full.inputs.cols());
    split.test.inputs.resize(n - n_train, full.inputs.cols());
    for (Eigen::Index i = 0; i < n; ++i) {
        Batch& dst = i < n_train ? split.train : split.test;
        const Eigen::Index r = i < n_train ? i : i - n_train;
        dst.inputs.row(r) = full.inputs.row(idx[i]);
        dst.labels.push_back(full.labels[idx[i]]);
    }
    return split;
}

Batch xor_canonical() {
    Batch batch;
    batch.inputs.resize(4, 2);
    batch.inputs << 0, 0, 0, 1, 1, 0, 1, 1;
    batch.labels = {0, 1, 1, 0};
    return batch;
}

}  // namespace dopamine
