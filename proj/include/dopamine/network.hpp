#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "dopamine/rng.hpp"

namespace dopamine {

/// Dense real matrix with row-major semantics; 64-bit floats throughout.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class ParamRole { weight, bias, recurrent };

/// One layer's parameters: the unit of perturbation and update.
struct ParamMatrix {
    std::string name;
    ParamRole role = ParamRole::weight;
    Matrix w;

    Eigen::Index rows() const { return w.rows(); }
    Eigen::Index cols() const { return w.cols(); }
};

enum class HeadKind {
    sigmoid_softmax,  ///< elementwise sigmoid, then softmax over the outputs
    softmax,          ///< plain softmax (sanity-comparison switch)
    linear,           ///< raw affine outputs (regression nets)
};

/// Feed-forward architecture. "Affine" networks carry biases, "linear"
/// networks do not; the flag is per affine layer.
struct MlpSpec {
    std::vector<int> layer_dims;    // input, hidden..., output
    std::vector<uint8_t> use_bias;  // one flag per layer transform
    HeadKind head = HeadKind::sigmoid_softmax;

    int n_layers() const { return static_cast<int>(layer_dims.size()) - 1; }
    void validate() const;

    /// 2-4-2 XOR network; affine (biases on) or linear (biases off).
    static MlpSpec xor_default(bool affine);
};

/// Vanilla ReLU RNN with a linear (affine, no nonlinearity) readout.
struct RnnSpec {
    int input_dim = 3;
    int hidden_dim = 512;
    int output_dim = 3;
    bool use_bias = true;

    void validate() const;
};

/// Architecture plus its current parameter matrices.
struct NetworkState {
    std::variant<MlpSpec, RnnSpec> spec;
    std::vector<ParamMatrix> params;

    bool is_rnn() const { return std::holds_alternative<RnnSpec>(spec); }
    const MlpSpec& mlp_spec() const { return std::get<MlpSpec>(spec); }
    const RnnSpec& rnn_spec() const { return std::get<RnnSpec>(spec); }

    /// Index of the matrix tagged recurrent, or -1 when none (MLPs).
    int recurrent_index() const;

    /// Total scalar parameter count.
    long param_count() const;

    /// Checks parameter shapes against the spec and the recurrent-tag
    /// invariant (exactly one for RNNs, none for MLPs). Throws on violation.
    void validate() const;
};

/// Builds an MLP with He-scaled Gaussian weights and zero biases.
NetworkState make_mlp(const MlpSpec& spec, GaussianStream& rng);

/// Builds an RNN with He-scaled Gaussian weights and zero biases. The
/// recurrent matrix is tagged ParamRole::recurrent.
NetworkState make_rnn(const RnnSpec& spec, GaussianStream& rng);

/// Inputs and targets for feed-forward evaluation. Classification batches use
/// `labels`; regression batches (linear head) use `targets`.
struct Batch {
    Matrix inputs;           // samples x features
    std::vector<int> labels;
    Matrix targets;          // samples x outputs (regression only)

    Eigen::Index size() const { return inputs.rows(); }
};

/// A sequence batch: `steps[t]` holds every sample's input at step t, and
/// `step_targets[t]` the matching one-step-ahead target.
struct SeqBatch {
    std::vector<Matrix> steps;
    std::vector<Matrix> step_targets;

    int lookback() const { return static_cast<int>(steps.size()); }
    Eigen::Index size() const { return steps.empty() ? 0 : steps.front().rows(); }
    void validate() const;
};

Matrix relu(const Matrix& x);

/// Applies the classification head row-wise: sigmoid elementwise, then a
/// max-subtracted softmax. Output rows sum to 1 with entries in (0,1).
Matrix sigmoid_softmax_head(const Matrix& logits, int n_classes);

Matrix softmax_rows(const Matrix& logits);

/// Head probabilities (or raw outputs for HeadKind::linear) for a batch.
Matrix mlp_forward(const NetworkState& net, const Batch& batch);

struct RnnForwardResult {
    std::vector<Matrix> predictions;  // per step, samples x output_dim
    Matrix final_hidden;              // samples x hidden_dim
};

/// Unrolls h_t = relu(W_in x_t + W_rec h_{t-1} [+ b]) with a per-step affine
/// readout. h0 defaults to zeros. Only the current hidden state is held.
RnnForwardResult rnn_forward(const NetworkState& net, const SeqBatch& batch,
                             const Matrix* h0 = nullptr);

/// Window-mean MSE of the per-step readout against per-step targets, without
/// materializing predictions (memory beyond inputs stays O(hidden_dim)).
double rnn_seq_mse(const NetworkState& net, const SeqBatch& batch);

/// Per-step MSE losses (each a mean over samples and features).
std::vector<double> rnn_step_losses(const NetworkState& net, const SeqBatch& batch);

}  // namespace dopamine
