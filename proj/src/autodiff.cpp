// SPDX-License-Identifier: Apache-2.0
#include "mhstn/autodiff.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_set>

#include "mhstn/errors.hpp"

namespace mhstn {

namespace {

thread_local bool g_grad_enabled = true;

Var make_node(Tensor value, std::vector<Var> inputs, std::function<void(Node&)> backward_fn) {
  auto node = std::make_shared<Node>();
  node->value = std::move(value);
  const bool needs = g_grad_enabled && std::any_of(inputs.begin(), inputs.end(), [](const Var& v) {
                       return v && v->requires_grad;
                     });
  if (needs) {
    node->requires_grad = true;
    node->inputs = std::move(inputs);
    node->backward_fn = std::move(backward_fn);
  }
  return node;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw DimensionError(message);
}

void require_rank(const Var& v, std::size_t rank, const char* what) {
  if (!v) throw ArgumentError(std::string(what) + " is null");
  require(v->value.rank() == rank, std::string(what) + " must have rank " + std::to_string(rank) +
                                       ", got " + shape_string(v->value.shape()));
}

// c[m x n] += a[m x k] * b[k x n]
void gemm_nn(const double* a, const double* b, double* c, std::size_t m, std::size_t k,
             std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    double* ci = c + i * n;
    const double* ai = a + i * k;
    for (std::size_t p = 0; p < k; ++p) {
      const double av = ai[p];
      if (av == 0.0) continue;
      const double* bp = b + p * n;
      for (std::size_t j = 0; j < n; ++j) ci[j] += av * bp[j];
    }
  }
}

// c[k x n] += a^T * g, a[m x k], g[m x n]
void gemm_tn(const double* a, const double* g, double* c, std::size_t m, std::size_t k,
             std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* ai = a + i * k;
    const double* gi = g + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const double av = ai[p];
      if (av == 0.0) continue;
      double* cp = c + p * n;
      for (std::size_t j = 0; j < n; ++j) cp[j] += av * gi[j];
    }
  }
}

// c[m x k] += g[m x n] * b^T, b[k x n]
void gemm_nt(const double* g, const double* b, double* c, std::size_t m, std::size_t k,
             std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* gi = g + i * n;
    double* ci = c + i * k;
    for (std::size_t p = 0; p < k; ++p) {
      const double* bp = b + p * n;
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) acc += gi[j] * bp[j];
      ci[p] += acc;
    }
  }
}

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double activate(double x, Activation act) {
  switch (act) {
    case Activation::linear: return x;
    case Activation::relu: return x > 0.0 ? x : 0.0;
    case Activation::sigmoid: return sigmoid(x);
    case Activation::tanh: return std::tanh(x);
  }
  return x;
}

// Derivative expressed through the activation output.
double activation_slope(double out, Activation act) {
  switch (act) {
    case Activation::linear: return 1.0;
    case Activation::relu: return out > 0.0 ? 1.0 : 0.0;
    case Activation::sigmoid: return out * (1.0 - out);
    case Activation::tanh: return 1.0 - out * out;
  }
  return 1.0;
}

std::span<double> grad_of(Node& n) { return n.value.ensure_grad(); }

}  // namespace

Var constant(Tensor value) {
  auto node = std::make_shared<Node>();
  node->value = std::move(value);
  return node;
}

Var parameter(Tensor value) {
  auto node = std::make_shared<Node>();
  node->value = std::move(value);
  node->requires_grad = true;
  return node;
}

NoGradGuard::NoGradGuard() : previous_(g_grad_enabled) { g_grad_enabled = false; }
NoGradGuard::~NoGradGuard() { g_grad_enabled = previous_; }
bool grad_enabled() noexcept { return g_grad_enabled; }

Var dense(const Var& input, const Var& weights, const Var& bias, Activation activation) {
  require_rank(input, 2, "dense input");
  require_rank(weights, 2, "dense weights");
  const std::size_t batch = input->value.dim(0);
  const std::size_t in = input->value.dim(1);
  const std::size_t out = weights->value.dim(1);
  require(weights->value.dim(0) == in, "dense: input " + shape_string(input->value.shape()) +
                                           " incompatible with weights " +
                                           shape_string(weights->value.shape()));
  if (bias) {
    require(bias->value.size() == out, "dense: bias " + shape_string(bias->value.shape()) +
                                           " incompatible with weights " +
                                           shape_string(weights->value.shape()));
  }
  Tensor result({batch, out});
  double* y = result.values().data();
  if (bias) {
    for (std::size_t b = 0; b < batch; ++b)
      std::copy_n(bias->value.values().data(), out, y + b * out);
  }
  gemm_nn(input->value.values().data(), weights->value.values().data(), y, batch, in, out);
  for (auto& v : result.values()) v = activate(v, activation);

  std::vector<Var> inputs{input, weights};
  if (bias) inputs.push_back(bias);
  return make_node(std::move(result), std::move(inputs),
                   [batch, in, out, activation](Node& self) {
                     const auto g = self.value.grad();
                     const auto y = self.value.values();
                     std::vector<double> dpre(g.size());
                     for (std::size_t i = 0; i < g.size(); ++i)
                       dpre[i] = g[i] * activation_slope(y[i], activation);
                     Node& x = *self.inputs[0];
                     Node& w = *self.inputs[1];
                     if (x.requires_grad)
                       gemm_nt(dpre.data(), w.value.values().data(), grad_of(x).data(), batch, in,
                               out);
                     if (w.requires_grad)
                       gemm_tn(x.value.values().data(), dpre.data(), grad_of(w).data(), batch, in,
                               out);
                     if (self.inputs.size() > 2 && self.inputs[2]->requires_grad) {
                       auto gb = grad_of(*self.inputs[2]);
                       for (std::size_t b = 0; b < batch; ++b)
                         for (std::size_t j = 0; j < out; ++j) gb[j] += dpre[b * out + j];
                     }
                   });
}

Var add(const Var& a, const Var& b) {
  require(a->value.shape() == b->value.shape(), "add: shapes " + shape_string(a->value.shape()) +
                                                    " and " + shape_string(b->value.shape()));
  Tensor result(a->value.shape());
  for (std::size_t i = 0; i < result.size(); ++i) result[i] = a->value[i] + b->value[i];
  return make_node(std::move(result), {a, b}, [](Node& self) {
    const auto g = self.value.grad();
    for (auto& in : self.inputs) {
      if (!in->requires_grad) continue;
      auto gi = grad_of(*in);
      for (std::size_t i = 0; i < g.size(); ++i) gi[i] += g[i];
    }
  });
}

Var concat_features(const Var& a, const Var& b) {
  require_rank(a, 2, "concat lhs");
  require_rank(b, 2, "concat rhs");
  const std::size_t batch = a->value.dim(0);
  require(b->value.dim(0) == batch, "concat: batch sizes differ");
  const std::size_t na = a->value.dim(1);
  const std::size_t nb = b->value.dim(1);
  Tensor result({batch, na + nb});
  for (std::size_t r = 0; r < batch; ++r) {
    std::copy_n(a->value.values().data() + r * na, na, result.values().data() + r * (na + nb));
    std::copy_n(b->value.values().data() + r * nb, nb,
                result.values().data() + r * (na + nb) + na);
  }
  return make_node(std::move(result), {a, b}, [batch, na, nb](Node& self) {
    const auto g = self.value.grad();
    if (self.inputs[0]->requires_grad) {
      auto ga = grad_of(*self.inputs[0]);
      for (std::size_t r = 0; r < batch; ++r)
        for (std::size_t j = 0; j < na; ++j) ga[r * na + j] += g[r * (na + nb) + j];
    }
    if (self.inputs[1]->requires_grad) {
      auto gb = grad_of(*self.inputs[1]);
      for (std::size_t r = 0; r < batch; ++r)
        for (std::size_t j = 0; j < nb; ++j) gb[r * nb + j] += g[r * (na + nb) + na + j];
    }
  });
}

Var slice_features(const Var& input, std::size_t begin, std::size_t count) {
  require_rank(input, 2, "slice input");
  const std::size_t batch = input->value.dim(0);
  const std::size_t n = input->value.dim(1);
  require(begin + count <= n, "slice: columns out of range");
  Tensor result({batch, count});
  for (std::size_t r = 0; r < batch; ++r)
    std::copy_n(input->value.values().data() + r * n + begin, count,
                result.values().data() + r * count);
  return make_node(std::move(result), {input}, [batch, n, begin, count](Node& self) {
    const auto g = self.value.grad();
    auto gi = grad_of(*self.inputs[0]);
    for (std::size_t r = 0; r < batch; ++r)
      for (std::size_t j = 0; j < count; ++j) gi[r * n + begin + j] += g[r * count + j];
  });
}

Var time_step(const Var& sequence, std::size_t t) {
  require_rank(sequence, 3, "sequence");
  const std::size_t batch = sequence->value.dim(0);
  const std::size_t steps = sequence->value.dim(1);
  const std::size_t features = sequence->value.dim(2);
  if (t >= steps) throw ArgumentError("time step out of range");
  Tensor result({batch, features});
  for (std::size_t b = 0; b < batch; ++b)
    std::copy_n(sequence->value.values().data() + (b * steps + t) * features, features,
                result.values().data() + b * features);
  return make_node(std::move(result), {sequence}, [batch, steps, features, t](Node& self) {
    const auto g = self.value.grad();
    auto gi = grad_of(*self.inputs[0]);
    for (std::size_t b = 0; b < batch; ++b)
      for (std::size_t j = 0; j < features; ++j)
        gi[(b * steps + t) * features + j] += g[b * features + j];
  });
}

Var flatten(const Var& input) {
  if (!input || input->value.rank() < 1) throw ArgumentError("flatten of empty tensor");
  const std::size_t batch = input->value.dim(0);
  const std::size_t rest = batch ? input->value.size() / batch : 0;
  Tensor result = input->value.reshaped({batch, rest});
  return make_node(std::move(result), {input}, [](Node& self) {
    const auto g = self.value.grad();
    auto gi = grad_of(*self.inputs[0]);
    for (std::size_t i = 0; i < g.size(); ++i) gi[i] += g[i];
  });
}

Var stack_channels(std::span<const Var> inputs) {
  if (inputs.empty()) throw ArgumentError("stack_channels: no inputs");
  for (const auto& v : inputs) require_rank(v, 2, "stacked representation");
  const std::size_t batch = inputs[0]->value.dim(0);
  const std::size_t n = inputs[0]->value.dim(1);
  const std::size_t channels = inputs.size();
  for (const auto& v : inputs) {
    require(v->value.dim(0) == batch && v->value.dim(1) == n,
            "stack_channels: ragged inputs " + shape_string(inputs[0]->value.shape()) + " vs " +
                shape_string(v->value.shape()));
  }
  Tensor result({batch, n, channels});
  for (std::size_t c = 0; c < channels; ++c) {
    const double* src = inputs[c]->value.values().data();
    for (std::size_t b = 0; b < batch; ++b)
      for (std::size_t i = 0; i < n; ++i)
        result[(b * n + i) * channels + c] = src[b * n + i];
  }
  return make_node(std::move(result), std::vector<Var>(inputs.begin(), inputs.end()),
                   [batch, n, channels](Node& self) {
                     const auto g = self.value.grad();
                     for (std::size_t c = 0; c < channels; ++c) {
                       if (!self.inputs[c]->requires_grad) continue;
                       auto gi = grad_of(*self.inputs[c]);
                       for (std::size_t b = 0; b < batch; ++b)
                         for (std::size_t i = 0; i < n; ++i)
                           gi[b * n + i] += g[(b * n + i) * channels + c];
                     }
                   });
}

std::size_t LstmParams::hidden_size() const { return recurrent_weights->value.dim(0); }
std::size_t LstmParams::input_size() const { return input_weights->value.dim(0); }

LstmState lstm_cell(const Var& x, const Var& h_prev, const Var& c_prev, const LstmParams& params) {
  require_rank(x, 2, "lstm input");
  require_rank(h_prev, 2, "lstm hidden state");
  require_rank(c_prev, 2, "lstm cell state");
  const std::size_t hidden = params.hidden_size();
  const std::size_t features = params.input_size();
  const std::size_t batch = x->value.dim(0);
  require(params.recurrent_weights->value.dim(1) == 4 * hidden &&
              params.input_weights->value.dim(1) == 4 * hidden &&
              params.bias->value.size() == 4 * hidden,
          "lstm: gate parameter sizes disagree with hidden size " + std::to_string(hidden));
  require(x->value.dim(1) == features, "lstm: input " + shape_string(x->value.shape()) +
                                           " incompatible with weights " +
                                           shape_string(params.input_weights->value.shape()));
  require(h_prev->value.shape() == Shape({batch, hidden}) &&
              c_prev->value.shape() == Shape({batch, hidden}),
          "lstm: state shapes " + shape_string(h_prev->value.shape()) + "/" +
              shape_string(c_prev->value.shape()) + " disagree with hidden size " +
              std::to_string(hidden));

  const std::size_t g4 = 4 * hidden;
  // Pre-activations, then gate activations in place: i, f, g, o.
  std::vector<double> gates(batch * g4);
  for (std::size_t b = 0; b < batch; ++b)
    std::copy_n(params.bias->value.values().data(), g4, gates.data() + b * g4);
  gemm_nn(x->value.values().data(), params.input_weights->value.values().data(), gates.data(),
          batch, features, g4);
  gemm_nn(h_prev->value.values().data(), params.recurrent_weights->value.values().data(),
          gates.data(), batch, hidden, g4);

  // Output packs [h | c] per row.
  Tensor packed({batch, 2 * hidden});
  std::vector<double> tanh_c(batch * hidden);
  for (std::size_t b = 0; b < batch; ++b) {
    double* gr = gates.data() + b * g4;
    for (std::size_t j = 0; j < hidden; ++j) {
      const double i = sigmoid(gr[j]);
      const double f = sigmoid(gr[hidden + j]);
      const double g = std::tanh(gr[2 * hidden + j]);
      const double o = sigmoid(gr[3 * hidden + j]);
      gr[j] = i;
      gr[hidden + j] = f;
      gr[2 * hidden + j] = g;
      gr[3 * hidden + j] = o;
      const double c = f * c_prev->value[b * hidden + j] + i * g;
      const double tc = std::tanh(c);
      tanh_c[b * hidden + j] = tc;
      packed[b * 2 * hidden + j] = o * tc;
      packed[b * 2 * hidden + hidden + j] = c;
    }
  }

  Var cell = make_node(
      std::move(packed),
      {x, h_prev, c_prev, params.input_weights, params.recurrent_weights, params.bias},
      [batch, hidden, features, gates = std::move(gates),
       tanh_c = std::move(tanh_c)](Node& self) {
        const std::size_t g4 = 4 * hidden;
        const auto grad = self.value.grad();
        Node& x = *self.inputs[0];
        Node& hp = *self.inputs[1];
        Node& cp = *self.inputs[2];
        Node& wx = *self.inputs[3];
        Node& wh = *self.inputs[4];
        Node& bias = *self.inputs[5];
        std::vector<double> dz(batch * g4);
        std::vector<double> dc_prev(batch * hidden);
        for (std::size_t b = 0; b < batch; ++b) {
          const double* gr = gates.data() + b * g4;
          for (std::size_t j = 0; j < hidden; ++j) {
            const double i = gr[j], f = gr[hidden + j], g = gr[2 * hidden + j],
                         o = gr[3 * hidden + j];
            const double tc = tanh_c[b * hidden + j];
            const double dh = grad[b * 2 * hidden + j];
            const double dc = grad[b * 2 * hidden + hidden + j] + dh * o * (1.0 - tc * tc);
            const double c_old = cp.value[b * hidden + j];
            double* dzr = dz.data() + b * g4;
            dzr[j] = dc * g * i * (1.0 - i);
            dzr[hidden + j] = dc * c_old * f * (1.0 - f);
            dzr[2 * hidden + j] = dc * i * (1.0 - g * g);
            dzr[3 * hidden + j] = dh * tc * o * (1.0 - o);
            dc_prev[b * hidden + j] = dc * f;
          }
        }
        if (x.requires_grad)
          gemm_nt(dz.data(), wx.value.values().data(), grad_of(x).data(), batch, features, g4);
        if (hp.requires_grad)
          gemm_nt(dz.data(), wh.value.values().data(), grad_of(hp).data(), batch, hidden, g4);
        if (cp.requires_grad) {
          auto gc = grad_of(cp);
          for (std::size_t k = 0; k < dc_prev.size(); ++k) gc[k] += dc_prev[k];
        }
        if (wx.requires_grad)
          gemm_tn(x.value.values().data(), dz.data(), grad_of(wx).data(), batch, features, g4);
        if (wh.requires_grad)
          gemm_tn(hp.value.values().data(), dz.data(), grad_of(wh).data(), batch, hidden, g4);
        if (bias.requires_grad) {
          auto gb = grad_of(bias);
          for (std::size_t b = 0; b < batch; ++b)
            for (std::size_t k = 0; k < g4; ++k) gb[k] += dz[b * g4 + k];
        }
      });
  return {slice_features(cell, 0, hidden), slice_features(cell, hidden, hidden)};
}

Var lstm_forward(const Var& sequence, const LstmParams& params) {
  require_rank(sequence, 3, "lstm sequence");
  const std::size_t batch = sequence->value.dim(0);
  const std::size_t steps = sequence->value.dim(1);
  if (steps == 0) throw ArgumentError("lstm_forward: empty sequence");
  const std::size_t hidden = params.hidden_size();
  LstmState state{constant(Tensor({batch, hidden})), constant(Tensor({batch, hidden}))};
  for (std::size_t t = 0; t < steps; ++t)
    state = lstm_cell(time_step(sequence, t), state.h, state.c, params);
  return state.h;
}

Var conv1d(const Var& input, const Var& filters, const Var& bias, Activation activation) {
  require_rank(input, 3, "conv1d input");
  require_rank(filters, 3, "conv1d filters");
  const std::size_t batch = input->value.dim(0);
  const std::size_t length = input->value.dim(1);
  const std::size_t channels = input->value.dim(2);
  const std::size_t kernel = filters->value.dim(0);
  const std::size_t n_filters = filters->value.dim(2);
  require(filters->value.dim(1) == channels,
          "conv1d: input " + shape_string(input->value.shape()) + " incompatible with filters " +
              shape_string(filters->value.shape()));
  require(bias->value.size() == n_filters, "conv1d: bias size mismatch");
  if (length < kernel) {
    throw ArgumentError("conv1d: input length " + std::to_string(length) +
                        " shorter than kernel " + std::to_string(kernel));
  }
  const std::size_t out_len = length - kernel + 1;
  const std::size_t window = kernel * channels;
  Tensor result({batch, out_len, n_filters});
  const double* in = input->value.values().data();
  const double* w = filters->value.values().data();
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t p = 0; p < out_len; ++p) {
      double* y = result.values().data() + (b * out_len + p) * n_filters;
      std::copy_n(bias->value.values().data(), n_filters, y);
      // The window [p, p+kernel) x channels is contiguous in the input.
      gemm_nn(in + (b * length + p) * channels, w, y, 1, window, n_filters);
      for (std::size_t f = 0; f < n_filters; ++f) y[f] = activate(y[f], activation);
    }
  }
  return make_node(
      std::move(result), {input, filters, bias},
      [batch, length, channels, out_len, window, n_filters, activation](Node& self) {
        const auto g = self.value.grad();
        const auto y = self.value.values();
        std::vector<double> dpre(g.size());
        for (std::size_t i = 0; i < g.size(); ++i)
          dpre[i] = g[i] * activation_slope(y[i], activation);
        Node& x = *self.inputs[0];
        Node& w = *self.inputs[1];
        Node& bias = *self.inputs[2];
        for (std::size_t b = 0; b < batch; ++b) {
          for (std::size_t p = 0; p < out_len; ++p) {
            const double* d = dpre.data() + (b * out_len + p) * n_filters;
            const std::size_t offset = (b * length + p) * channels;
            if (x.requires_grad)
              gemm_nt(d, w.value.values().data(), grad_of(x).data() + offset, 1, window,
                      n_filters);
            if (w.requires_grad)
              gemm_tn(x.value.values().data() + offset, d, grad_of(w).data(), 1, window,
                      n_filters);
            if (bias.requires_grad) {
              auto gb = grad_of(bias);
              for (std::size_t f = 0; f < n_filters; ++f) gb[f] += d[f];
            }
          }
        }
      });
}

Var maxpool1d(const Var& input, std::size_t pool) {
  require_rank(input, 3, "maxpool input");
  if (pool == 0) throw ArgumentError("maxpool: pool size must be positive");
  const std::size_t batch = input->value.dim(0);
  const std::size_t length = input->value.dim(1);
  const std::size_t features = input->value.dim(2);
  if (length < pool) {
    throw ArgumentError("maxpool: input length " + std::to_string(length) +
                        " shorter than pool " + std::to_string(pool));
  }
  const std::size_t out_len = length / pool;
  Tensor result({batch, out_len, features});
  std::vector<std::size_t> argmax(result.size());
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t p = 0; p < out_len; ++p) {
      for (std::size_t f = 0; f < features; ++f) {
        std::size_t best = (b * length + p * pool) * features + f;
        for (std::size_t q = 1; q < pool; ++q) {
          const std::size_t idx = (b * length + p * pool + q) * features + f;
          if (input->value[idx] > input->value[best]) best = idx;
        }
        const std::size_t o = (b * out_len + p) * features + f;
        result[o] = input->value[best];
        argmax[o] = best;
      }
    }
  }
  return make_node(std::move(result), {input}, [argmax = std::move(argmax)](Node& self) {
    const auto g = self.value.grad();
    auto gi = grad_of(*self.inputs[0]);
    for (std::size_t o = 0; o < g.size(); ++o) gi[argmax[o]] += g[o];
  });
}

Var mse_loss(const Var& truth, const Var& pred) {
  require(truth->value.shape() == pred->value.shape(),
          "mse_loss: truth " + shape_string(truth->value.shape()) + " vs prediction " +
              shape_string(pred->value.shape()));
  const std::size_t n = truth->value.size();
  if (n == 0) throw ArgumentError("mse_loss: empty tensors");
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = pred->value[i] - truth->value[i];
    acc += d * d;
  }
  return make_node(Tensor::scalar(acc / static_cast<double>(n)), {truth, pred}, [n](Node& self) {
    const double g = self.value.grad()[0];
    Node& truth = *self.inputs[0];
    Node& pred = *self.inputs[1];
    const double scale = 2.0 * g / static_cast<double>(n);
    if (pred.requires_grad) {
      auto gp = grad_of(pred);
      for (std::size_t i = 0; i < n; ++i) gp[i] += scale * (pred.value[i] - truth.value[i]);
    }
    if (truth.requires_grad) {
      auto gt = grad_of(truth);
      for (std::size_t i = 0; i < n; ++i) gt[i] -= scale * (pred.value[i] - truth.value[i]);
    }
  });
}

void backward(const Var& loss) {
  if (!loss) throw StateError("backward: null loss");
  if (loss->value.size() != 1) {
    throw DimensionError("backward: loss must be scalar, got " +
                         shape_string(loss->value.shape()));
  }
  if (!loss->requires_grad || loss->is_leaf()) {
    throw StateError("backward: loss was not produced by a recorded forward pass");
  }

  // Iterative post-order DFS for a topological order.
  std::vector<Node*> order;
  std::unordered_set<Node*> visited;
  std::vector<std::pair<Node*, std::size_t>> stack{{loss.get(), 0}};
  visited.insert(loss.get());
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->inputs.size()) {
      Node* child = node->inputs[next++].get();
      if (child->requires_grad && !child->is_leaf() && visited.insert(child).second)
        stack.emplace_back(child, 0);
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }
  for (Node* n : order) n->value.zero_grad();
  loss->value.ensure_grad()[0] = 1.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Node* n = *it;
    if (!n->value.has_grad()) continue;
    n->backward_fn(*n);
  }
}

void zero_grad(std::span<const Var> params) {
  for (const auto& p : params) p->value.zero_grad();
}

}  // namespace mhstn
