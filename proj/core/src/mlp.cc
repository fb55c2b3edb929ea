#include "stegbd/mlp.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "stegbd/error.h"
#include "stegbd/rng.h"

namespace stegbd {
namespace {

// Four independent accumulators keep the dot product pipelined without
// reassociating across calls, so results stay reproducible.
double dot(const double* a, const double* b, std::size_t n) {
  double s0 = 0, s1 = 0, s2 = 0, s3 = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += a[i] * b[i];
    s1 += a[i + 1] * b[i + 1];
    s2 += a[i + 2] * b[i + 2];
    s3 += a[i + 3] * b[i + 3];
  }
  for (; i < n; ++i) s0 += a[i] * b[i];
  return (s0 + s1) + (s2 + s3);
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

// Scratch buffers for one sample's forward/backward pass.
struct Activations {
  std::vector<double> pre, hidden, probs;
  explicit Activations(const MlpModel& m)
      : pre(m.hidden), hidden(m.hidden), probs(m.classes) {}
};

void forward_into(const MlpModel& m, const double* x, Activations& a) {
  const std::size_t in = m.input_dim;
  for (int j = 0; j < m.hidden; ++j) {
    a.pre[j] = dot(&m.w1[j * in], x, in) + m.b1[j];
    a.hidden[j] = a.pre[j] > 0.0 ? a.pre[j] : 0.0;
  }
  std::vector<double> logits(m.classes);
  for (int k = 0; k < m.classes; ++k)
    logits[k] = dot(&m.w2[k * m.hidden], a.hidden.data(), m.hidden) + m.b2[k];
  a.probs = softmax(logits);
}

// Adds scale * d(loss of this sample)/d(params) into grad; returns the loss.
double backward_into(const MlpModel& m, const double* x, int label,
                     double scale, Activations& a, std::vector<double>& grad) {
  forward_into(m, x, a);
  const double loss = -std::log(std::max(a.probs[label], 1e-300));
  const std::size_t in = m.input_dim;
  double* g_w1 = grad.data();
  double* g_b1 = g_w1 + m.w1.size();
  double* g_w2 = g_b1 + m.b1.size();
  double* g_b2 = g_w2 + m.w2.size();

  std::vector<double> d_hidden(m.hidden, 0.0);
  for (int k = 0; k < m.classes; ++k) {
    const double d = scale * (a.probs[k] - (k == label ? 1.0 : 0.0));
    g_b2[k] += d;
    axpy(d, a.hidden.data(), g_w2 + k * m.hidden, m.hidden);
    axpy(d, &m.w2[k * m.hidden], d_hidden.data(), m.hidden);
  }
  for (int j = 0; j < m.hidden; ++j) {
    if (a.pre[j] <= 0.0) continue;
    g_b1[j] += d_hidden[j];
    axpy(d_hidden[j], x, g_w1 + j * in, in);
  }
  return loss;
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> b, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[at + i]) << (8 * i);
  return v;
}

}  // namespace

MlpModel::MlpModel(int input_dim, int hidden, int classes)
    : input_dim(input_dim),
      hidden(hidden),
      classes(classes),
      w1(static_cast<std::size_t>(hidden) * input_dim, 0.0),
      b1(hidden, 0.0),
      w2(static_cast<std::size_t>(classes) * hidden, 0.0),
      b2(classes, 0.0) {}

double& MlpModel::parameter(std::size_t i) {
  if (i < w1.size()) return w1[i];
  i -= w1.size();
  if (i < b1.size()) return b1[i];
  i -= b1.size();
  if (i < w2.size()) return w2[i];
  return b2.at(i - w2.size());
}

double MlpModel::parameter(std::size_t i) const {
  return const_cast<MlpModel*>(this)->parameter(i);
}

bool MlpModel::all_finite() const {
  auto finite = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double d) { return std::isfinite(d); });
  };
  return finite(w1) && finite(b1) && finite(w2) && finite(b2);
}

void TrainConfig::validate() const {
  if (hidden < 1) throw ConfigError("hidden must be >= 1");
  if (!(lr > 0.0)) throw ConfigError("learning rate must be > 0");
  if (!(momentum >= 0.0 && momentum < 1.0))
    throw ConfigError("momentum must lie in [0, 1)");
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
  if (batch < 1) throw ConfigError("batch must be >= 1");
}

std::vector<double> encode_input(const RasterImage& image) {
  std::vector<double> x;
  x.reserve(static_cast<std::size_t>(image.width()) * image.height() * 3);
  for (Channel c : kAllChannels)
    for (std::uint8_t s : image.plane(c).samples()) x.push_back(s / 255.0 - 0.5);
  return x;
}

std::vector<double> softmax(std::span<const double> logits) {
  const double mx = *std::max_element(logits.begin(), logits.end());
  std::vector<double> p(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    p[i] = std::exp(logits[i] - mx);
    sum += p[i];
  }
  for (double& v : p) v /= sum;
  return p;
}

std::vector<double> forward(const MlpModel& model, const RasterImage& image) {
  const long dim = static_cast<long>(image.width()) * image.height() * 3;
  if (dim != model.input_dim)
    throw DimensionError("image has " + std::to_string(dim) +
                         " inputs, model expects " +
                         std::to_string(model.input_dim));
  const std::vector<double> x = encode_input(image);
  Activations a(model);
  forward_into(model, x.data(), a);
  return a.probs;
}

int predict(const MlpModel& model, const RasterImage& image) {
  const std::vector<double> p = forward(model, image);
  return static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
}

MlpModel init_model(int input_dim, int hidden, int classes,
                    std::uint64_t seed) {
  MlpModel m(input_dim, hidden, classes);
  Rng rng(derive_seed(seed, "train.init"));
  const double r1 = std::sqrt(6.0 / (input_dim + hidden));
  const double r2 = std::sqrt(6.0 / (hidden + classes));
  for (double& w : m.w1) w = rng.uniform(-r1, r1);
  for (double& w : m.w2) w = rng.uniform(-r2, r2);
  return m;
}

TrainResult train(const LabeledDataset& ds, const TrainConfig& cfg) {
  cfg.validate();
  if (ds.empty()) throw ConfigError("cannot train on an empty dataset");
  ds.validate();

  const int input_dim = ds.items[0].image.width() * ds.items[0].image.height() * 3;
  TrainResult result{init_model(input_dim, cfg.hidden, ds.num_classes, cfg.seed),
                     {}};
  MlpModel& m = result.model;

  std::vector<std::vector<double>> inputs;
  inputs.reserve(ds.size());
  for (const auto& it : ds.items) inputs.push_back(encode_input(it.image));

  const std::size_t p = m.parameter_count();
  std::vector<double> grad(p), velocity(p, 0.0);
  std::vector<std::size_t> order(ds.size());
  Rng shuffle(derive_seed(cfg.seed, "train.shuffle"));
  Activations act(m);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    shuffle.shuffle(order.begin(), order.end());
    double total = 0.0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch) {
      const std::size_t end = std::min(order.size(), start + cfg.batch);
      const double scale = 1.0 / static_cast<double>(end - start);
      std::fill(grad.begin(), grad.end(), 0.0);
      for (std::size_t i = start; i < end; ++i) {
        const std::size_t s = order[i];
        total += backward_into(m, inputs[s].data(), ds.items[s].label, scale,
                               act, grad);
      }
      std::size_t offset = 0;
      for (std::vector<double>* w : {&m.w1, &m.b1, &m.w2, &m.b2}) {
        double* v = velocity.data() + offset;
        const double* g = grad.data() + offset;
        for (std::size_t i = 0; i < w->size(); ++i) {
          v[i] = cfg.momentum * v[i] + g[i];
          (*w)[i] -= cfg.lr * v[i];
        }
        offset += w->size();
      }
    }
    result.epoch_loss.push_back(total / static_cast<double>(ds.size()));
  }
  return result;
}

LossGradient loss_and_gradient(const MlpModel& model,
                               std::span<const LabeledImage> items) {
  LossGradient out;
  out.grad.assign(model.parameter_count(), 0.0);
  if (items.empty()) return out;
  const double scale = 1.0 / static_cast<double>(items.size());
  Activations act(model);
  for (const auto& it : items) {
    const std::vector<double> x = encode_input(it.image);
    out.loss += scale * backward_into(model, x.data(), it.label, scale, act,
                                      out.grad);
  }
  return out;
}

double grad_check(const MlpModel& model, std::span<const LabeledImage> batch,
                  std::uint64_t seed, int samples) {
  constexpr double kStep = 1e-4;
  constexpr double kAbsFloor = 1e-7;
  const LossGradient analytic = loss_and_gradient(model, batch);
  MlpModel probe = model;
  Rng rng(derive_seed(seed, "grad_check"));
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const std::size_t i = rng.below(model.parameter_count());
    const double saved = probe.parameter(i);
    probe.parameter(i) = saved + kStep;
    const double up = loss_and_gradient(probe, batch).loss;
    probe.parameter(i) = saved - kStep;
    const double down = loss_and_gradient(probe, batch).loss;
    probe.parameter(i) = saved;
    const double numeric = (up - down) / (2.0 * kStep);
    const double a = analytic.grad[i];
    const double denom = std::max(std::abs(a), std::abs(numeric));
    const double err = denom < kAbsFloor ? std::abs(a - numeric)
                                         : std::abs(a - numeric) / denom;
    worst = std::max(worst, err);
  }
  return worst;
}

std::vector<std::uint8_t> serialize_model(const MlpModel& m) {
  std::vector<std::uint8_t> out = {'M', 'L', 'P', '1'};
  put_u32(out, static_cast<std::uint32_t>(m.input_dim));
  put_u32(out, static_cast<std::uint32_t>(m.hidden));
  put_u32(out, static_cast<std::uint32_t>(m.classes));
  out.reserve(16 + 8 * m.parameter_count());
  for (std::size_t i = 0; i < m.parameter_count(); ++i) {
    const auto bits = std::bit_cast<std::uint64_t>(m.parameter(i));
    for (int k = 0; k < 8; ++k) out.push_back(static_cast<std::uint8_t>(bits >> (8 * k)));
  }
  return out;
}

MlpModel deserialize_model(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 16 || bytes[0] != 'M' || bytes[1] != 'L' ||
      bytes[2] != 'P' || bytes[3] != '1')
    throw FormatError("not an MLP1 checkpoint");
  const std::uint32_t in = get_u32(bytes, 4);
  const std::uint32_t hidden = get_u32(bytes, 8);
  const std::uint32_t classes = get_u32(bytes, 12);
  if (in == 0 || hidden == 0 || classes == 0 || in > (1u << 24) ||
      hidden > (1u << 16) || classes > (1u << 16))
    throw FormatError("checkpoint dimensions out of range");
  MlpModel m(static_cast<int>(in), static_cast<int>(hidden),
             static_cast<int>(classes));
  if (bytes.size() != 16 + 8 * m.parameter_count())
    throw FormatError("checkpoint is " + std::to_string(bytes.size()) +
                      " bytes, expected " +
                      std::to_string(16 + 8 * m.parameter_count()));
  for (std::size_t i = 0; i < m.parameter_count(); ++i) {
    std::uint64_t bits = 0;
    for (int k = 0; k < 8; ++k)
      bits |= static_cast<std::uint64_t>(bytes[16 + 8 * i + k]) << (8 * k);
    m.parameter(i) = std::bit_cast<double>(bits);
  }
  return m;
}

}  // namespace stegbd
