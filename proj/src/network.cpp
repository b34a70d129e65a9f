#include "dopamine/network.hpp"

#include <cmath>
#include <stdexcept>

namespace dopamine {

namespace {

// U(-1/sqrt(fan_in), +1/sqrt(fan_in)), the standard framework default. The
// bound matters: gaussian inits of the same variance leave bias-free ReLU
// nets in dead-cone basins far more often, and put the recurrent matrix of
// wide RNNs above the critical spectral radius.
void fill_uniform(Matrix& w, int fan_in, GaussianStream& rng) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    for (Eigen::Index i = 0; i < w.rows(); ++i)
        for (Eigen::Index j = 0; j < w.cols(); ++j)
            w(i, j) = (2.0 * rng.next_uniform() - 1.0) * bound;
}

}  // namespace

void MlpSpec::validate() const {
    if (layer_dims.size() < 2) throw std::invalid_argument("MlpSpec: need input and output dims");
    for (int d : layer_dims)
        if (d < 1) throw std::invalid_argument("MlpSpec: non-positive layer dim");
    if (use_bias.size() != static_cast<size_t>(n_layers()))
        throw std::invalid_argument("MlpSpec: use_bias must have one flag per layer");
    if (head != HeadKind::linear && layer_dims.back() < 2)
        throw std::invalid_argument("MlpSpec: classification head needs >= 2 outputs");
}

MlpSpec MlpSpec::xor_default(bool affine) {
    MlpSpec spec;
    spec.layer_dims = {2, 4, 2};
    spec.use_bias = {static_cast<uint8_t>(affine), static_cast<uint8_t>(affine)};
    spec.head = HeadKind::sigmoid_softmax;
    return spec;
}

void RnnSpec::validate() const {
    if (input_dim < 1 || hidden_dim < 1 || output_dim < 1)
        throw std::invalid_argument("RnnSpec: non-positive dimension");
}

int NetworkState::recurrent_index() const {
    for (size_t i = 0; i < params.size(); ++i)
        if (params[i].role == ParamRole::recurrent) return static_cast<int>(i);
    return -1;
}

long NetworkState::param_count() const {
    long n = 0;
    for (const auto& p : params) n += static_cast<long>(p.w.size());
    return n;
}

void NetworkState::validate() const {
    int n_rec = 0;
    for (const auto& p : params) {
        if (p.w.size() == 0) throw std::invalid_argument("NetworkState: empty parameter " + p.name);
        if (p.role == ParamRole::recurrent) ++n_rec;
    }
    const auto expect_shape = [this](size_t i, Eigen::Index rows, Eigen::Index cols) {
        if (i >= params.size() || params[i].w.rows() != rows || params[i].w.cols() != cols)
            throw std::invalid_argument("NetworkState: parameter " + std::to_string(i) +
                                        " shape mismatch");
    };
    if (is_rnn()) {
        const auto& s = rnn_spec();
        s.validate();
        if (n_rec != 1) throw std::invalid_argument("NetworkState: RNN needs exactly one recurrent matrix");
        size_t i = 0;
        expect_shape(i++, s.input_dim, s.hidden_dim);   // W_in
        expect_shape(i, s.hidden_dim, s.hidden_dim);    // W_rec
        if (params[i++].role != ParamRole::recurrent)
            throw std::invalid_argument("NetworkState: W_rec must carry the recurrent tag");
        if (s.use_bias) expect_shape(i++, 1, s.hidden_dim);
        expect_shape(i++, s.hidden_dim, s.output_dim);  // W_out
        if (s.use_bias) expect_shape(i++, 1, s.output_dim);
        if (params.size() != i)
            throw std::invalid_argument("NetworkState: RNN parameter count mismatch");
    } else {
        mlp_spec().validate();
        if (n_rec != 0) throw std::invalid_argument("NetworkState: MLP cannot carry a recurrent matrix");
        const auto& s = mlp_spec();
        size_t i = 0;
        for (int l = 0; l < s.n_layers(); ++l) {
            expect_shape(i++, s.layer_dims[l], s.layer_dims[l + 1]);
            if (s.use_bias[l]) expect_shape(i++, 1, s.layer_dims[l + 1]);
        }
        if (params.size() != i)
            throw std::invalid_argument("NetworkState: MLP parameter count mismatch");
    }
}

NetworkState make_mlp(const MlpSpec& spec, GaussianStream& rng) {
    spec.validate();
    NetworkState net;
    net.spec = spec;
    for (int l = 0; l < spec.n_layers(); ++l) {
        const int fan_in = spec.layer_dims[l];
        const int fan_out = spec.layer_dims[l + 1];
        ParamMatrix w{"W" + std::to_string(l + 1), ParamRole::weight, Matrix(fan_in, fan_out)};
        fill_uniform(w.w, fan_in, rng);
        net.params.push_back(std::move(w));
        if (spec.use_bias[l]) {
            ParamMatrix b{"b" + std::to_string(l + 1), ParamRole::bias, Matrix::Zero(1, fan_out)};
            net.params.push_back(std::move(b));
        }
    }
    net.validate();
    return net;
}

NetworkState make_rnn(const RnnSpec& spec, GaussianStream& rng) {
    spec.validate();
    NetworkState net;
    net.spec = spec;

    ParamMatrix w_in{"W_in", ParamRole::weight, Matrix(spec.input_dim, spec.hidden_dim)};
    fill_uniform(w_in.w, spec.input_dim, rng);
    net.params.push_back(std::move(w_in));

    ParamMatrix w_rec{"W_rec", ParamRole::recurrent, Matrix(spec.hidden_dim, spec.hidden_dim)};
    fill_uniform(w_rec.w, spec.hidden_dim, rng);
    net.params.push_back(std::move(w_rec));

    if (spec.use_bias) {
        ParamMatrix b_h{"b_h", ParamRole::bias, Matrix::Zero(1, spec.hidden_dim)};
        net.params.push_back(std::move(b_h));
    }

    ParamMatrix w_out{"W_out", ParamRole::weight, Matrix(spec.hidden_dim, spec.output_dim)};
    fill_uniform(w_out.w, spec.hidden_dim, rng);
    net.params.push_back(std::move(w_out));

    if (spec.use_bias) {
        ParamMatrix b_out{"b_out", ParamRole::bias, Matrix::Zero(1, spec.output_dim)};
        net.params.push_back(std::move(b_out));
    }
    net.validate();
    return net;
}

void SeqBatch::validate() const {
    if (steps.empty()) throw std::invalid_argument("SeqBatch: empty window");
    if (step_targets.size() != steps.size())
        throw std::invalid_argument("SeqBatch: steps/targets length mismatch");
    const Eigen::Index n = steps.front().rows();
    for (size_t t = 0; t < steps.size(); ++t)
        if (steps[t].rows() != n || step_targets[t].rows() != n)
            throw std::invalid_argument("SeqBatch: inconsistent sample count across steps");
}

Matrix relu(const Matrix& x) { return x.cwiseMax(0.0); }

Matrix sigmoid_softmax_head(const Matrix& logits, int n_classes) {
    if (logits.cols() != n_classes)
        throw std::invalid_argument("sigmoid_softmax_head: class-count mismatch");
    Matrix s = (1.0 + (-logits.array()).exp()).inverse().matrix();
    return softmax_rows(s);
}

Matrix softmax_rows(const Matrix& logits) {
    Matrix out(logits.rows(), logits.cols());
    for (Eigen::Index i = 0; i < logits.rows(); ++i) {
        const double m = logits.row(i).maxCoeff();
        Eigen::RowVectorXd e = (logits.row(i).array() - m).exp();
        out.row(i) = e / e.sum();
    }
    return out;
}

Matrix mlp_forward(const NetworkState& net, const Batch& batch) {
    const auto& spec = net.mlp_spec();
    if (batch.inputs.cols() != spec.layer_dims.front())
        throw std::invalid_argument("mlp_forward: input feature dim mismatch");
    Matrix act = batch.inputs;
    size_t pi = 0;
    for (int l = 0; l < spec.n_layers(); ++l) {
        Matrix z;
        z.noalias() = act * net.params[pi++].w;
        if (spec.use_bias[l]) z.rowwise() += net.params[pi++].w.row(0);
        act = (l + 1 < spec.n_layers()) ? relu(z) : std::move(z);
    }
    switch (spec.head) {
        case HeadKind::sigmoid_softmax: return sigmoid_softmax_head(act, spec.layer_dims.back());
        case HeadKind::softmax: return softmax_rows(act);
        case HeadKind::linear: return act;
    }
    throw std::logic_error("mlp_forward: unreachable head kind");
}

namespace {

struct RnnViews {
    const Matrix* w_in;
    const Matrix* w_rec;
    const Matrix* b_h;    // nullptr when bias-free
    const Matrix* w_out;
    const Matrix* b_out;  // nullptr when bias-free
};

RnnViews rnn_views(const NetworkState& net) {
    if (!net.is_rnn()) throw std::invalid_argument("expected an RNN network");
    const bool bias = net.rnn_spec().use_bias;
    RnnViews v{};
    size_t i = 0;
    v.w_in = &net.params[i++].w;
    v.w_rec = &net.params[i++].w;
    if (bias) v.b_h = &net.params[i++].w;
    v.w_out = &net.params[i++].w;
    if (bias) v.b_out = &net.params[i++].w;
    return v;
}

}  // namespace

RnnForwardResult rnn_forward(const NetworkState& net, const SeqBatch& batch, const Matrix* h0) {
    batch.validate();
    const auto v = rnn_views(net);
    const auto& spec = net.rnn_spec();
    const Eigen::Index n = batch.size();

    Matrix h = h0 ? *h0 : Matrix::Zero(n, spec.hidden_dim);
    if (h.rows() != n || h.cols() != spec.hidden_dim)
        throw std::invalid_argument("rnn_forward: h0 shape mismatch");

    RnnForwardResult result;
    result.predictions.reserve(batch.steps.size());
    Matrix pre(n, spec.hidden_dim);
    for (const Matrix& x : batch.steps) {
        pre.noalias() = x * (*v.w_in);
        pre.noalias() += h * (*v.w_rec);
        if (v.b_h) pre.rowwise() += v.b_h->row(0);
        h = relu(pre);
        Matrix y;
        y.noalias() = h * (*v.w_out);
        if (v.b_out) y.rowwise() += v.b_out->row(0);
        result.predictions.push_back(std::move(y));
    }
    result.final_hidden = std::move(h);
    return result;
}

double rnn_seq_mse(const NetworkState& net, const SeqBatch& batch) {
    batch.validate();
    const auto v = rnn_views(net);
    const auto& spec = net.rnn_spec();
    const Eigen::Index n = batch.size();

    Matrix h = Matrix::Zero(n, spec.hidden_dim);
    Matrix pre(n, spec.hidden_dim);
    Matrix y(n, spec.output_dim);
    double total = 0.0;
    for (size_t t = 0; t < batch.steps.size(); ++t) {
        pre.noalias() = batch.steps[t] * (*v.w_in);
        pre.noalias() += h * (*v.w_rec);
        if (v.b_h) pre.rowwise() += v.b_h->row(0);
        h = relu(pre);
        y.noalias() = h * (*v.w_out);
        if (v.b_out) y.rowwise() += v.b_out->row(0);
        total += (y - batch.step_targets[t]).squaredNorm() /
                 static_cast<double>(n * spec.output_dim);
    }
    return total / static_cast<double>(batch.steps.size());
}

std::vector<double> rnn_step_losses(const NetworkState& net, const SeqBatch& batch) {
    batch.validate();
    const auto v = rnn_views(net);
    const auto& spec = net.rnn_spec();
    const Eigen::Index n = batch.size();

    Matrix h = Matrix::Zero(n, spec.hidden_dim);
    Matrix pre(n, spec.hidden_dim);
    Matrix y(n, spec.output_dim);
    std::vector<double> losses;
    losses.reserve(batch.steps.size());
    for (size_t t = 0; t < batch.steps.size(); ++t) {
        pre.noalias() = batch.steps[t] * (*v.w_in);
        pre.noalias() += h * (*v.w_rec);
        if (v.b_h) pre.rowwise() += v.b_h->row(0);
        h = relu(pre);
        y.noalias() = h * (*v.w_out);
        if (v.b_out) y.rowwise() += v.b_out->row(0);
        losses.push_back((y - batch.step_targets[t]).squaredNorm() /
                         static_cast<double>(n * spec.output_dim));
    }
    return losses;
}

}  // namespace dopamine
