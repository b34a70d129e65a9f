#include "dopamine/gradients.hpp"

#include <cmath>
#include <stdexcept>

#include "dopamine/losses.hpp"

namespace dopamine {

LossAndGrads mlp_backprop(const NetworkState& net, const Batch& batch) {
    if (net.is_rnn()) throw std::invalid_argument("mlp_backprop: expected an MLP");
    const auto& spec = net.mlp_spec();
    const Eigen::Index n = batch.size();
    if (n == 0) throw std::invalid_argument("mlp_backprop: empty batch");

    // Forward, keeping activations; acts[l] feeds layer l.
    std::vector<Matrix> acts;
    acts.reserve(spec.n_layers() + 1);
    acts.push_back(batch.inputs);
    std::vector<size_t> w_index(spec.n_layers());
    size_t pi = 0;
    Matrix logits;
    for (int l = 0; l < spec.n_layers(); ++l) {
        w_index[l] = pi;
        Matrix z;
        z.noalias() = acts.back() * net.params[pi++].w;
        if (spec.use_bias[l]) z.rowwise() += net.params[pi++].w.row(0);
        if (l + 1 < spec.n_layers())
            acts.push_back(relu(z));
        else
            logits = std::move(z);
    }

    LossAndGrads out;
    Matrix dz;  // dL/d(logits)
    switch (spec.head) {
        case HeadKind::sigmoid_softmax: {
            Matrix s = (1.0 + (-logits.array()).exp()).inverse().matrix();
            Matrix p = softmax_rows(s);
            out.loss = bce_loss(p, batch.labels);
            // Cross-entropy through softmax gives (p - y); chain through the
            // preceding sigmoid.
            Matrix dsoft = p;
            for (Eigen::Index i = 0; i < n; ++i) dsoft(i, batch.labels[i]) -= 1.0;
            dsoft /= static_cast<double>(n);
            dz = dsoft.cwiseProduct(s.cwiseProduct(Matrix::Constant(s.rows(), s.cols(), 1.0) - s));
            break;
        }
        case HeadKind::softmax: {
            Matrix p = softmax_rows(logits);
            out.loss = bce_loss(p, batch.labels);
            dz = p;
            for (Eigen::Index i = 0; i < n; ++i) dz(i, batch.labels[i]) -= 1.0;
            dz /= static_cast<double>(n);
            break;
        }
        case HeadKind::linear: {
            out.loss = mse_loss(logits, batch.targets);
            dz = 2.0 * (logits - batch.targets) / static_cast<double>(logits.size());
            break;
        }
    }

    out.grads.resize(net.params.size());
    for (int l = spec.n_layers() - 1; l >= 0; --l) {
        const size_t wi = w_index[l];
        out.grads[wi].noalias() = acts[l].transpose() * dz;
        if (spec.use_bias[l]) out.grads[wi + 1] = dz.colwise().sum();
        if (l > 0) {
            Matrix da;
            da.noalias() = dz * net.params[wi].w.transpose();
            dz = da.cwiseProduct((acts[l].array() > 0.0).cast<double>().matrix());
        }
    }
    return out;
}

namespace {

struct RnnLayout {
    size_t w_in, w_rec, b_h, w_out, b_out;  // indices into params; size_t(-1) if absent
    bool bias;
};

RnnLayout rnn_layout(const NetworkState& net) {
    if (!net.is_rnn()) throw std::invalid_argument("bptt: expected an RNN");
    RnnLayout lo{};
    lo.bias = net.rnn_spec().use_bias;
    size_t i = 0;
    lo.w_in = i++;
    lo.w_rec = i++;
    lo.b_h = lo.bias ? i++ : static_cast<size_t>(-1);
    lo.w_out = i++;
    lo.b_out = lo.bias ? i++ : static_cast<size_t>(-1);
    return lo;
}

}  // namespace

BpttHistory bptt_forward(const NetworkState& net, const SeqBatch& batch) {
    batch.validate();
    const auto lo = rnn_layout(net);
    const auto& spec = net.rnn_spec();
    const int T = batch.lookback();
    const Eigen::Index n = batch.size();
    const double step_norm = static_cast<double>(n * spec.output_dim);

    const Matrix& w_in = net.params[lo.w_in].w;
    const Matrix& w_rec = net.params[lo.w_rec].w;
    const Matrix& w_out = net.params[lo.w_out].w;

    // History held live for the backward pass: pre-activations and hidden
    // states per step — the O(N*T) memory BPTT pays and WP does not.
    BpttHistory hist;
    hist.pres.resize(T);
    hist.hiddens.resize(T + 1);
    hist.dpreds.resize(T);
    hist.hiddens[0] = Matrix::Zero(n, spec.hidden_dim);

    for (int t = 0; t < T; ++t) {
        hist.pres[t].noalias() = batch.steps[t] * w_in;
        hist.pres[t].noalias() += hist.hiddens[t] * w_rec;
        if (lo.bias) hist.pres[t].rowwise() += net.params[lo.b_h].w.row(0);
        hist.hiddens[t + 1] = relu(hist.pres[t]);
        Matrix pred;
        pred.noalias() = hist.hiddens[t + 1] * w_out;
        if (lo.bias) pred.rowwise() += net.params[lo.b_out].w.row(0);
        Matrix diff = pred - batch.step_targets[t];
        hist.loss += diff.squaredNorm() / step_norm;
        // d(window-mean MSE)/d(pred_t)
        hist.dpreds[t] = (2.0 / (step_norm * static_cast<double>(T))) * diff;
    }
    hist.loss /= static_cast<double>(T);
    return hist;
}

GradientSet bptt_backward(const NetworkState& net, const SeqBatch& batch,
                          const BpttHistory& hist) {
    const auto lo = rnn_layout(net);
    const auto& spec = net.rnn_spec();
    const int T = batch.lookback();
    const Eigen::Index n = batch.size();
    if (static_cast<int>(hist.pres.size()) != T)
        throw std::invalid_argument("bptt_backward: history/batch mismatch");

    const Matrix& w_rec = net.params[lo.w_rec].w;
    const Matrix& w_out = net.params[lo.w_out].w;

    GradientSet grads(net.params.size());
    for (size_t i = 0; i < net.params.size(); ++i)
        grads[i] = Matrix::Zero(net.params[i].rows(), net.params[i].cols());

    Matrix carry = Matrix::Zero(n, spec.hidden_dim);  // dL/dh_t from steps > t
    for (int t = T - 1; t >= 0; --t) {
        grads[lo.w_out].noalias() += hist.hiddens[t + 1].transpose() * hist.dpreds[t];
        if (lo.bias) grads[lo.b_out] += hist.dpreds[t].colwise().sum();
        Matrix dh;
        dh.noalias() = hist.dpreds[t] * w_out.transpose();
        dh += carry;
        Matrix dpre = dh.cwiseProduct((hist.pres[t].array() > 0.0).cast<double>().matrix());
        grads[lo.w_in].noalias() += batch.steps[t].transpose() * dpre;
        grads[lo.w_rec].noalias() += hist.hiddens[t].transpose() * dpre;
        if (lo.bias) grads[lo.b_h] += dpre.colwise().sum();
        carry.noalias() = dpre * w_rec.transpose();
    }
    return grads;
}

LossAndGrads bptt(const NetworkState& net, const SeqBatch& batch) {
    BpttHistory hist = bptt_forward(net, batch);
    LossAndGrads out;
    out.loss = hist.loss;
    out.grads = bptt_backward(net, batch, hist);
    return out;
}

std::uint64_t bptt_transient_bytes(const NetworkState& net, int lookback, int batch_size) {
    const auto& spec = net.rnn_spec();
    // pres (T) + hiddens (T+1) matrices of batch x hidden doubles.
    const std::uint64_t per_matrix =
        static_cast<std::uint64_t>(batch_size) * static_cast<std::uint64_t>(spec.hidden_dim) * 8u;
    return per_matrix * (2u * static_cast<std::uint64_t>(lookback) + 1u);
}

void sgd_step(NetworkState& net, const GradientSet& grads, double eta) {
    if (!(eta > 0.0)) throw std::invalid_argument("sgd_step: eta must be > 0");
    if (grads.size() != net.params.size())
        throw std::invalid_argument("sgd_step: gradient layout mismatch");
    for (size_t i = 0; i < net.params.size(); ++i) net.params[i].w -= eta * grads[i];
}

AdamState AdamState::init(const AdamConfig& cfg, const NetworkState& net) {
    AdamState state;
    state.cfg = cfg;
    state.m.reserve(net.params.size());
    state.v.reserve(net.params.size());
    for (const auto& p : net.params) {
        state.m.push_back(Matrix::Zero(p.rows(), p.cols()));
        state.v.push_back(Matrix::Zero(p.rows(), p.cols()));
    }
    return state;
}

void adam_step(AdamState& state, NetworkState& net, const GradientSet& grads) {
    if (grads.size() != net.params.size() || state.m.size() != net.params.size())
        throw std::invalid_argument("adam_step: layout mismatch");
    const AdamConfig& c = state.cfg;
    state.step += 1;
    const double bc1 = 1.0 - std::pow(c.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(c.beta2, static_cast<double>(state.step));
    for (size_t i = 0; i < net.params.size(); ++i) {
        state.m[i] = c.beta1 * state.m[i] + (1.0 - c.beta1) * grads[i];
        state.v[i] = c.beta2 * state.v[i] + (1.0 - c.beta2) * grads[i].cwiseProduct(grads[i]);
        const Matrix mhat = state.m[i] / bc1;
        const Matrix vhat = state.v[i] / bc2;
        net.params[i].w.array() -= c.eta * mhat.array() / (vhat.array().sqrt() + c.eps);
    }
}

}  // namespace dopamine
