#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "dopamine/network.hpp"
#include "dopamine/rng.hpp"

namespace dopamine {

struct RosslerParams {
    double a = 0.2;
    double b = 0.2;
    double c = 5.7;
};

struct LorenzParams {
    double sigma = 10.0;
    double rho = 28.0;
    double beta = 8.0 / 3.0;
    // Reproduces the source's misprinted equations (y' and z' swap terms)
    // instead of the standard Lorenz-63 system. Off by default.
    bool printed_variant = false;
};

struct Trajectory {
    Matrix states;  // steps x 3, includes the initial condition as row 0
    double dt = 0.0;
};

enum class Integrator { euler, rk4 };

Trajectory rossler_trajectory(const RosslerParams& p, std::array<double, 3> init,
                              double dt, int steps, Integrator method = Integrator::euler);

Trajectory lorenz_trajectory(const LorenzParams& p, std::array<double, 3> init,
                             double dt, int steps, Integrator method = Integrator::euler);

/// Sliding windows over a trajectory with one-step-ahead targets per window
/// step: window i presents states [i, i+T) and targets [i+1, i+T], so the
/// final per-step target is the value immediately following the window.
struct WindowedDataset {
    SeqBatch all;  // row w of steps[t] is window w at offset t
    bool normalized = false;
    std::array<double, 3> lo{};  // per-component min over the source trajectory
    std::array<double, 3> hi{};

    int count() const { return static_cast<int>(all.size()); }
};

/// Cuts a trajectory into all length-T windows (count = steps - T), each with
/// per-step next-state targets. normalize=true min-max rescales every
/// component to [0, 1] using trajectory-wide extrema before windowing.
WindowedDataset make_windows(const Trajectory& traj, int lookback, bool normalize);

/// Maps normalized coordinates back through the stored min-max bounds.
Matrix denormalize(const Matrix& states, const WindowedDataset& data);

/// Subsamples `count` window indices without replacement (Fisher-Yates on the
/// index set) and packs them into one SeqBatch. count >= available returns
/// the full set in order.
SeqBatch sample_windows(const WindowedDataset& data, int count, SplitMix64& rng);

/// Noisy XOR clusters: `per_cluster` points around each corner of {0,1}^2
/// with N(0, noise_sd^2) jitter per coordinate, label = XOR of the corner.
/// noise_sd = 0 with per_cluster = 1 yields exactly the 4 canonical points.
Batch xor_dataset(int per_cluster, double noise_sd, std::uint64_t seed);

/// Seeded random 50/50 split (train gets the extra point when odd).
struct XorSplit {
    Batch train;
    Batch test;
};

XorSplit split_xor(const Batch& full, std::uint64_t seed);

/// The four exact corners (0,0),(0,1),(1,0),(1,1) with XOR labels.
Batch xor_canonical();

}  // namespace dopamine
