#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dopamine/network.hpp"
#include "dopamine/perturb.hpp"

namespace dopamine {

/// 2-D slice of the loss surface along two random directions:
/// losses(i, j) = L(theta* + alpha_i * d1 + beta_j * d2).
struct LandscapeGrid {
    std::vector<double> alphas;
    std::vector<double> betas;
    Matrix losses;  // alphas.size() x betas.size()
    std::vector<Matrix> dir1;
    std::vector<Matrix> dir2;
    std::uint64_t seed = 0;
};

struct LandscapeOptions {
    double lo0 = -20.0, hi0 = 20.0;  // range along direction 1
    double lo1 = -15.0, hi1 = 15.0;  // range along direction 2
    int steps0 = 101;  // points per axis; odd counts put theta* on the grid
    int steps1 = 101;
    bool filter_normalize = false;  // rescale direction blocks to parameter norms
    std::uint64_t seed = 0;
};

/// Evaluates the grid around the network's current parameters. With odd,
/// symmetric axes the center cell is exactly L(theta*): axis values hit 0
/// without rounding error and evaluation perturbs copies, never the passed
/// network. Non-finite cells are recorded as +infinity, not raised.
LandscapeGrid loss_landscape(const NetworkState& net, const LossFn& loss,
                             const LandscapeOptions& opt);

/// Mean and 95% confidence interval over independent run outcomes.
struct RunSummary {
    double mean = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    int n = 0;
};

/// Normal-approximation interval mean +/- 1.96 * sd / sqrt(n) by default;
/// student_t=true swaps in the t critical value for small n. Throws when
/// fewer than 2 values are given.
RunSummary summarize_runs(const std::vector<double>& values, bool student_t = false);

double median(std::vector<double> values);

struct TimingRecord {
    std::string optimizer;
    int seq_len = 0;
    std::string phase;  // "update-only" or "forward+update"
    double mean_s = 0.0;
    double sem_s = 0.0;
    double median_s = 0.0;
    int n = 0;
    bool failed = false;  // memory cap exceeded; statistics are zero
};

struct TimingOptions {
    std::vector<std::string> optimizers;  // subset of {wp,dopamine1,dopamine2,bptt-sgd,bptt-adam}
    std::vector<int> seq_lens;
    int hidden_dim = 64;
    int batch_size = 16;
    int repeats = 5;
    int warmup = 1;
    std::uint64_t memory_cap_bytes = 256ull << 20;  // cap on BPTT history, not RSS
    std::uint64_t seed = 0;
};

/// Wall-clock study of one optimizer's per-iteration cost vs. lookback
/// length: for each T it times the update phase ("update-only", everything
/// after the loss/regret signal is in hand) and the full iteration
/// ("forward+update") separately. BPTT cells whose transient history would
/// exceed the memory cap are recorded with failed=true rather than run.
std::vector<TimingRecord> time_optimizer(const std::string& optimizer, const TimingOptions& opt);

/// time_optimizer over every entry of opt.optimizers, concatenated.
std::vector<TimingRecord> time_optimizers(const TimingOptions& opt);

}  // namespace dopamine
