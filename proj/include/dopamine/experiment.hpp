#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "dopamine/analysis.hpp"
#include "dopamine/network.hpp"
#include "dopamine/perturb.hpp"

namespace dopamine {

/// Flat experiment description. Every field maps 1:1 onto a key=value line in
/// config files, so presets, files, and CLI overrides all meet in one place.
struct ExperimentConfig {
    std::string name;                 // run label; defaults to the preset name
    std::string task = "xor";        // xor | lorenz | rossler
    std::string optimizer = "wp";    // wp | swp | dopamine1 | dopamine2 | sgd | adam

    // network
    int hidden_dim = 4;
    bool bias = false;
    std::string head = "sigmoid_softmax";  // sigmoid_softmax | softmax

    // data
    int lookback = 32;      // window length T (rnn tasks)
    int batch_size = 5000;  // windows per iteration; xor always trains full-batch
    int train_steps = 2000; // optimizer iterations (rnn) or epochs (xor)
    int traj_steps = 100000;
    double dt = 0.01;
    int per_cluster = 50;   // xor points per corner
    double noise_sd = 0.1;

    // perturbation-family hyperparameters
    double eta0 = 1e-3;
    double sigma_sq = 1e-4;
    double s0 = 0.0;
    double beta_s = 0.9998;
    double beta_eta = 1e-4;
    double lambda = 0.0;
    int spectral_interval = 1;

    // gradient-baseline hyperparameters
    double grad_eta = 1e-3;

    int seeds = 20;
    std::uint64_t base_seed = 1;
    int log_every = 0;  // 0: silent

    void validate() const;
};

/// Named configurations transcribed from the reference hyperparameter tables,
/// plus "-scaled" desk-size variants that finish in minutes on one core.
ExperimentConfig preset(const std::string& name);
std::vector<std::string> preset_names();

/// key = value lines, # comments, optional [section] headers (ignored other
/// than requiring known keys). Unknown keys throw.
void apply_config_text(ExperimentConfig& cfg, const std::string& text);
void apply_config_kv(ExperimentConfig& cfg, const std::string& key, const std::string& value);
std::string serialize_config(const ExperimentConfig& cfg);

/// One seed's outcome.
struct RunRecord {
    std::uint64_t seed = 0;
    std::vector<double> loss_curve;  // loss_curve[t] = objective entering step t
    double initial_loss = 0.0;
    double final_loss = 0.0;
    double accuracy = -1.0;  // canonical-corner accuracy, xor only
    std::string status = "ok";  // ok | diverged
    double wall_seconds = 0.0;
};

struct ExperimentResult {
    ExperimentConfig config;
    std::vector<RunRecord> runs;
    RunSummary final_loss_summary;  // over seeds with status == ok
};

/// Trains config.seeds independent runs. When out_dir is nonempty, writes
/// <out_dir>/<name>/config.txt and per-seed subdirectories with
/// loss_curve.csv, predictions.csv, and params.bin.
ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                const std::filesystem::path& out_dir = {});

/// Reads previously written run directories and tabulates final-loss
/// summaries; rows ordered as given.
std::vector<std::string> compare_dirs(const std::vector<std::filesystem::path>& dirs);

/// Rebuilds the evaluation objective of a run from its config and seed: the
/// training split for xor, the fixed evaluation batch for forecasting tasks
/// (identical to the full training batch when batch_size covers the data).
/// The returned closure owns its data.
LossFn make_task_loss(const ExperimentConfig& cfg, std::uint64_t run_seed);

}  // namespace dopamine
