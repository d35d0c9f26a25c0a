#include "wavepack/classify.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "wavepack/errors.hpp"
#include "wavepack/packets.hpp"
#include "wavepack/rng.hpp"
#include "wavepack/util.hpp"

namespace wavepack {

namespace {
constexpr double kSigmaFloor = 1e-8;

void check_features(const FeatureMatrix& f, const char* who) {
  if (f.samples <= 0 || f.dim <= 0)
    throw std::invalid_argument(std::string(who) + ": empty feature matrix");
  if (f.x.size() != static_cast<std::size_t>(f.samples * f.dim) ||
      f.y.size() != static_cast<std::size_t>(f.samples) ||
      f.channel_of.size() != static_cast<std::size_t>(f.dim))
    throw std::invalid_argument(std::string(who) + ": inconsistent feature matrix buffers");
}
}  // namespace

NormStats fit_norm(const FeatureMatrix& train) {
  check_features(train, "fit_norm");
  NormStats norm;
  norm.mean.assign(static_cast<std::size_t>(train.channels), 0.0);
  norm.std.assign(static_cast<std::size_t>(train.channels), 0.0);
  std::vector<std::int64_t> counts(static_cast<std::size_t>(train.channels), 0);

  for (std::int64_t i = 0; i < train.samples; ++i) {
    const double* row = train.row(i);
    for (std::int64_t d = 0; d < train.dim; ++d) {
      const std::size_t c = static_cast<std::size_t>(train.channel_of[static_cast<std::size_t>(d)]);
      norm.mean[c] += row[d];
      ++counts[c];
    }
  }
  for (std::size_t c = 0; c < norm.mean.size(); ++c) {
    if (counts[c] == 0) throw std::invalid_argument("fit_norm: channel with no features");
    norm.mean[c] /= static_cast<double>(counts[c]);
  }
  for (std::int64_t i = 0; i < train.samples; ++i) {
    const double* row = train.row(i);
    for (std::int64_t d = 0; d < train.dim; ++d) {
      const std::size_t c = static_cast<std::size_t>(train.channel_of[static_cast<std::size_t>(d)]);
      const double delta = row[d] - norm.mean[c];
      norm.std[c] += delta * delta;
    }
  }
  for (std::size_t c = 0; c < norm.std.size(); ++c) {
    norm.std[c] = std::sqrt(norm.std[c] / static_cast<double>(counts[c]));
    if (norm.std[c] < kSigmaFloor) {
      std::cerr << "warning: channel " << c << " has near-zero variance; flooring std at "
                << kSigmaFloor << "\n";
      norm.std[c] = kSigmaFloor;
    }
  }
  return norm;
}

void apply_norm(FeatureMatrix& features, const NormStats& norm) {
  check_features(features, "apply_norm");
  if (norm.mean.size() != static_cast<std::size_t>(features.channels))
    throw std::invalid_argument("apply_norm: channel count mismatch");
  for (std::int64_t i = 0; i < features.samples; ++i) {
    double* row = features.row(i);
    for (std::int64_t d = 0; d < features.dim; ++d) {
      const std::size_t c =
          static_cast<std::size_t>(features.channel_of[static_cast<std::size_t>(d)]);
      row[d] = (row[d] - norm.mean[c]) / norm.std[c];
    }
  }
}

LinearModel init_model(std::int64_t classes, std::int64_t dim, Rng& rng) {
  if (classes < 2 || dim < 1) throw std::invalid_argument("init_model: need >=2 classes, dim >=1");
  LinearModel m;
  m.classes = classes;
  m.dim = dim;
  m.weights.resize(static_cast<std::size_t>(classes * dim));
  m.bias.assign(static_cast<std::size_t>(classes), 0.0);
  const double bound = 1.0 / std::sqrt(static_cast<double>(dim));
  for (double& w : m.weights) w = (2.0 * rng.uniform01() - 1.0) * bound;
  return m;
}

std::vector<double> forward(const LinearModel& model, const double* features,
                            std::int64_t count) {
  std::vector<double> probs(static_cast<std::size_t>(count * model.classes));
  for (std::int64_t i = 0; i < count; ++i) {
    const double* row = features + i * model.dim;
    double* p = probs.data() + i * model.classes;
    double max_logit = -std::numeric_limits<double>::infinity();
    for (std::int64_t k = 0; k < model.classes; ++k) {
      double z = model.bias[static_cast<std::size_t>(k)];
      const double* w = model.weights.data() + k * model.dim;
      for (std::int64_t d = 0; d < model.dim; ++d) z += w[d] * row[d];
      p[k] = z;
      max_logit = std::max(max_logit, z);
    }
    double denom = 0.0;
    for (std::int64_t k = 0; k < model.classes; ++k) {
      p[k] = std::exp(p[k] - max_logit);
      denom += p[k];
    }
    for (std::int64_t k = 0; k < model.classes; ++k) p[k] /= denom;
  }
  return probs;
}

LossGrad loss_grad(const LinearModel& model, const double* features, const int* labels,
                   std::int64_t count) {
  if (count < 1) throw std::invalid_argument("loss_grad: empty batch");
  LossGrad out;
  out.d_weights.assign(model.weights.size(), 0.0);
  out.d_bias.assign(model.bias.size(), 0.0);
  const std::vector<double> probs = forward(model, features, count);
  const double inv_n = 1.0 / static_cast<double>(count);
  for (std::int64_t i = 0; i < count; ++i) {
    const int label = labels[i];
    if (label < 0 || label >= model.classes)
      throw std::invalid_argument("loss_grad: label out of range");
    const double* p = probs.data() + i * model.classes;
    const double* row = features + i * model.dim;
    out.loss -= std::log(std::max(p[label], 1e-300)) * inv_n;
    for (std::int64_t k = 0; k < model.classes; ++k) {
      const double err = (p[k] - (k == label ? 1.0 : 0.0)) * inv_n;
      out.d_bias[static_cast<std::size_t>(k)] += err;
      double* dw = out.d_weights.data() + k * model.dim;
      for (std::int64_t d = 0; d < model.dim; ++d) dw[d] += err * row[d];
    }
  }
  return out;
}

AdamState init_adam(const LinearModel& model) {
  AdamState s;
  s.m_weights.assign(model.weights.size(), 0.0);
  s.v_weights.assign(model.weights.size(), 0.0);
  s.m_bias.assign(model.bias.size(), 0.0);
  s.v_bias.assign(model.bias.size(), 0.0);
  return s;
}

void adam_step(LinearModel& model, AdamState& state, const LossGrad& grad) {
  if (grad.d_weights.size() != model.weights.size() || grad.d_bias.size() != model.bias.size())
    throw std::invalid_argument("adam_step: gradient shape mismatch");
  ++state.step;
  const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
  const auto update = [&](std::vector<double>& param, std::vector<double>& m,
                          std::vector<double>& v, const std::vector<double>& g) {
    for (std::size_t i = 0; i < param.size(); ++i) {
      m[i] = state.beta1 * m[i] + (1.0 - state.beta1) * g[i];
      v[i] = state.beta2 * v[i] + (1.0 - state.beta2) * g[i] * g[i];
      const double mhat = m[i] / bc1;
      const double vhat = v[i] / bc2;
      param[i] -= state.alpha * mhat / (std::sqrt(vhat) + state.epsilon);
    }
  };
  update(model.weights, state.m_weights, state.v_weights, grad.d_weights);
  update(model.bias, state.m_bias, state.v_bias, grad.d_bias);
}

namespace {

// Accuracy and mean loss over a whole split.
std::pair<double, double> score_split(const LinearModel& model, const FeatureMatrix& set) {
  const std::vector<double> probs = forward(model, set.x.data(), set.samples);
  std::int64_t correct = 0;
  double loss = 0.0;
  for (std::int64_t i = 0; i < set.samples; ++i) {
    const double* p = probs.data() + i * model.classes;
    std::int64_t argmax = 0;
    for (std::int64_t k = 1; k < model.classes; ++k)
      if (p[k] > p[argmax]) argmax = k;  // ties keep the lowest index
    if (argmax == set.y[static_cast<std::size_t>(i)]) ++correct;
    loss -= std::log(std::max(p[set.y[static_cast<std::size_t>(i)]], 1e-300));
  }
  return {static_cast<double>(correct) / static_cast<double>(set.samples),
          loss / static_cast<double>(set.samples)};
}

}  // namespace

TrainResult train(const FeatureMatrix& train_set, const FeatureMatrix& val_set,
                  const TrainConfig& config) {
  check_features(train_set, "train");
  check_features(val_set, "train(val)");
  if (train_set.dim != val_set.dim)
    throw std::invalid_argument("train: train/val feature dimensions differ");
  const int classes =
      1 + std::max(*std::max_element(train_set.y.begin(), train_set.y.end()),
                   *std::max_element(val_set.y.begin(), val_set.y.end()));
  if (classes < 2) throw std::invalid_argument("train: need at least two classes");

  Rng rng(config.seed);
  TrainResult result;
  LinearModel model = init_model(classes, train_set.dim, rng);
  AdamState adam = init_adam(model);
  adam.alpha = config.learning_rate;

  std::vector<std::int64_t> order(static_cast<std::size_t>(train_set.samples));
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<std::int64_t>(i);

  std::vector<double> batch_x(static_cast<std::size_t>(config.batch_size * train_set.dim));
  std::vector<int> batch_y(static_cast<std::size_t>(config.batch_size));

  result.best_val_accuracy = -1.0;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    rng.shuffle(order);
    for (std::int64_t start = 0; start < train_set.samples; start += config.batch_size) {
      const std::int64_t count = std::min(config.batch_size, train_set.samples - start);
      for (std::int64_t j = 0; j < count; ++j) {
        const std::int64_t src = order[static_cast<std::size_t>(start + j)];
        std::copy(train_set.row(src), train_set.row(src) + train_set.dim,
                  batch_x.data() + j * train_set.dim);
        batch_y[static_cast<std::size_t>(j)] = train_set.y[static_cast<std::size_t>(src)];
      }
      const LossGrad grad = loss_grad(model, batch_x.data(), batch_y.data(), count);
      if (!std::isfinite(grad.loss))
        throw invariant_error("training diverged: non-finite loss at epoch " +
                              std::to_string(epoch));
      adam_step(model, adam, grad);
    }

    const auto [train_acc, train_loss] = score_split(model, train_set);
    const auto [val_acc, val_loss] = score_split(model, val_set);
    result.history.push_back({epoch, "train", train_acc, train_loss});
    result.history.push_back({epoch, "val", val_acc, val_loss});
    if (val_acc > result.best_val_accuracy) {
      result.best_val_accuracy = val_acc;
      result.best_epoch = epoch;
      result.model = model;
    }
  }
  return result;
}

Evaluation evaluate(const LinearModel& model, const FeatureMatrix& test_set) {
  check_features(test_set, "evaluate");
  if (test_set.dim != model.dim)
    throw std::invalid_argument("evaluate: feature dimension does not match the model");
  Evaluation ev;
  ev.classes = model.classes;
  ev.confusion.assign(static_cast<std::size_t>(model.classes * model.classes), 0);
  const std::vector<double> probs = forward(model, test_set.x.data(), test_set.samples);
  std::int64_t correct = 0;
  for (std::int64_t i = 0; i < test_set.samples; ++i) {
    const double* p = probs.data() + i * model.classes;
    std::int64_t argmax = 0;
    for (std::int64_t k = 1; k < model.classes; ++k)
      if (p[k] > p[argmax]) argmax = k;
    const int truth = test_set.y[static_cast<std::size_t>(i)];
    if (truth < 0 || truth >= model.classes)
      throw std::invalid_argument("evaluate: label out of range");
    ++ev.confusion[static_cast<std::size_t>(truth * model.classes + argmax)];
    if (argmax == truth) ++correct;
    ev.loss -= std::log(std::max(p[truth], 1e-300));
  }
  ev.accuracy = static_cast<double>(correct) / static_cast<double>(test_set.samples);
  ev.loss /= static_cast<double>(test_set.samples);
  return ev;
}

std::vector<double> export_weight_map(const LinearModel& model, int class_index, int level,
                                      std::int64_t ph, std::int64_t pw, std::int64_t channels) {
  const std::int64_t packets = std::int64_t{1} << (2 * level);
  if (model.dim != packets * ph * pw * channels)
    throw std::invalid_argument("export_weight_map: feature_dim does not factor as packets*ph*pw*channels");
  if (class_index < 0 || class_index >= model.classes)
    throw std::invalid_argument("export_weight_map: class index out of range");

  // Feature layout is [packet][channel][ph][pw]; average the channel axis.
  const double* w = model.weights.data() + class_index * model.dim;
  std::vector<double> averaged(static_cast<std::size_t>(packets * ph * pw), 0.0);
  const double inv_c = 1.0 / static_cast<double>(channels);
  for (std::int64_t p = 0; p < packets; ++p)
    for (std::int64_t c = 0; c < channels; ++c) {
      const double* src = w + ((p * channels + c) * ph * pw);
      double* dst = averaged.data() + p * ph * pw;
      for (std::int64_t i = 0; i < ph * pw; ++i) dst[i] += src[i] * inv_c;
    }

  // Re-order packets by frequency for display.
  const std::vector<std::int64_t> perm = freq_order_permutation(level);
  std::vector<double> out(averaged.size());
  for (std::int64_t slot = 0; slot < packets; ++slot) {
    const double* src = averaged.data() + perm[static_cast<std::size_t>(slot)] * ph * pw;
    std::copy(src, src + ph * pw, out.data() + slot * ph * pw);
  }
  return out;
}

namespace {

void write_string(std::ostream& os, const std::string& s) {
  write_u32le(os, static_cast<std::uint32_t>(s.size()));
  os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string read_string(std::istream& is) {
  const std::uint32_t n = read_u32le(is);
  if (n > 4096) throw io_error("WLM1: implausible string length");
  std::string s(n, '\0');
  is.read(s.data(), static_cast<std::streamsize>(n));
  if (!is) throw io_error("WLM1: truncated string");
  return s;
}

}  // namespace

void write_wlm1(const LinearModel& model, const NormStats& norm, const ModelMeta& meta,
                std::ostream& os) {
  write_magic(os, "WLM1");
  write_u32le(os, static_cast<std::uint32_t>(model.classes));
  write_u32le(os, static_cast<std::uint32_t>(model.dim));
  write_u32le(os, static_cast<std::uint32_t>(norm.mean.size()));
  write_string(os, meta.feature_kind);
  write_string(os, meta.wavelet);
  write_u32le(os, static_cast<std::uint32_t>(meta.level));
  write_u32le(os, static_cast<std::uint32_t>(meta.image_height));
  write_u32le(os, static_cast<std::uint32_t>(meta.image_width));
  write_u32le(os, static_cast<std::uint32_t>(meta.channels));
  for (const double w : model.weights) write_f64le(os, w);
  for (const double b : model.bias) write_f64le(os, b);
  for (const double m : norm.mean) write_f64le(os, m);
  for (const double s : norm.std) write_f64le(os, s);
  if (!os) throw io_error("WLM1 write failed");
}

LoadedModel read_wlm1(std::istream& is) {
  expect_magic(is, "WLM1", "linear model");
  LoadedModel out;
  out.model.classes = read_u32le(is);
  out.model.dim = read_u32le(is);
  const std::uint32_t norm_channels = read_u32le(is);
  out.meta.feature_kind = read_string(is);
  out.meta.wavelet = read_string(is);
  out.meta.level = static_cast<int>(read_u32le(is));
  out.meta.image_height = read_u32le(is);
  out.meta.image_width = read_u32le(is);
  out.meta.channels = read_u32le(is);
  if (out.model.classes < 2 || out.model.dim < 1 || norm_channels < 1)
    throw io_error("WLM1: implausible header fields");
  out.model.weights.resize(static_cast<std::size_t>(out.model.classes * out.model.dim));
  out.model.bias.resize(static_cast<std::size_t>(out.model.classes));
  out.norm.mean.resize(norm_channels);
  out.norm.std.resize(norm_channels);
  for (double& w : out.model.weights) w = read_f64le(is);
  for (double& b : out.model.bias) b = read_f64le(is);
  for (double& m : out.norm.mean) m = read_f64le(is);
  for (double& s : out.norm.std) s = read_f64le(is);
  return out;
}

void write_history_csv(const std::vector<HistoryEntry>& history, std::ostream& os) {
  os << "epoch,split,accuracy,loss\n";
  for (const HistoryEntry& h : history)
    os << h.epoch << ',' << h.split << ',' << format_g17(h.accuracy) << ','
       << format_g17(h.loss) << '\n';
}

}  // namespace wavepack
