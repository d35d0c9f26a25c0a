#pragma once

// Feature normalization and multinomial softmax regression trained with
// Adam. The classifier is deliberately linear so that trained weights can be
// reshaped back into packet geometry and inspected as frequency heat maps.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace wavepack {

class Rng;

// Dense feature matrix, row per sample. `channel_of[d]` records which image
// channel feature dimension d came from, so normalization can be computed
// per color channel the way the training pipeline expects.
struct FeatureMatrix {
  std::int64_t samples = 0;
  std::int64_t dim = 0;
  std::int64_t channels = 1;
  std::vector<double> x;             // [samples][dim]
  std::vector<int> y;                // class index per sample
  std::vector<std::int64_t> channel_of;  // [dim] → channel index

  double* row(std::int64_t i) { return x.data() + i * dim; }
  const double* row(std::int64_t i) const { return x.data() + i * dim; }
};

// Per-channel mean/std fitted on the training split only.
struct NormStats {
  std::vector<double> mean;  // [channels]
  std::vector<double> std;   // [channels], floored at 1e-8
};

// Fits per-channel statistics; zero-variance channels are floored at 1e-8
// and reported on stderr. apply_norm standardizes in place using the stored
// channel assignment of the matrix.
NormStats fit_norm(const FeatureMatrix& train);
void apply_norm(FeatureMatrix& features, const NormStats& norm);

struct LinearModel {
  std::int64_t classes = 0;
  std::int64_t dim = 0;
  std::vector<double> weights;  // [classes][dim]
  std::vector<double> bias;     // [classes]
};

// Seeded uniform init in ±1/√dim; bias starts at zero.
LinearModel init_model(std::int64_t classes, std::int64_t dim, Rng& rng);

// Row-wise softmax probabilities for `count` samples; each row sums to 1.
std::vector<double> forward(const LinearModel& model, const double* features,
                            std::int64_t count);

// Mean cross-entropy over the batch plus gradients shaped like the model.
struct LossGrad {
  double loss = 0.0;
  std::vector<double> d_weights;  // [classes][dim]
  std::vector<double> d_bias;     // [classes]
};
LossGrad loss_grad(const LinearModel& model, const double* features, const int* labels,
                   std::int64_t count);

// Adam with bias correction; α=0.001, β₁=0.9, β₂=0.999, ε=1e-8.
struct AdamState {
  double alpha = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::int64_t step = 0;
  std::vector<double> m_weights, v_weights;
  std::vector<double> m_bias, v_bias;
};
AdamState init_adam(const LinearModel& model);
void adam_step(LinearModel& model, AdamState& state, const LossGrad& grad);

struct TrainConfig {
  int epochs = 10;
  std::int64_t batch_size = 512;
  double learning_rate = 0.001;
  std::uint64_t seed = 0;
};

// One history row per epoch and split: "epoch,split,accuracy,loss".
struct HistoryEntry {
  int epoch = 0;
  std::string split;
  double accuracy = 0.0;
  double loss = 0.0;
};

struct TrainResult {
  LinearModel model;  // best-validation-accuracy checkpoint
  std::vector<HistoryEntry> history;
  double best_val_accuracy = 0.0;
  int best_epoch = 0;
};

// Mini-batch training with a per-epoch seeded shuffle. Aborts with
// invariant_error if the loss goes non-finite.
TrainResult train(const FeatureMatrix& train_set, const FeatureMatrix& val_set,
                  const TrainConfig& config);

struct Evaluation {
  double accuracy = 0.0;
  double loss = 0.0;
  // confusion[true][predicted], rows are true labels
  std::vector<std::int64_t> confusion;
  std::int64_t classes = 0;
};
Evaluation evaluate(const LinearModel& model, const FeatureMatrix& test_set);

// Reshapes one class row of the weight matrix back into packet geometry
// [4^Q][ph][pw][channels], averages over channels, and re-orders packets by
// frequency for display. Output layout: [4^Q][ph][pw].
std::vector<double> export_weight_map(const LinearModel& model, int class_index, int level,
                                      std::int64_t ph, std::int64_t pw, std::int64_t channels);

// Provenance carried in the model file so evaluate can rebuild features the
// same way train did.
struct ModelMeta {
  std::string feature_kind;  // "packet" or "pixel"
  std::string wavelet;       // empty for pixel features
  int level = 0;             // 0 for pixel features
  std::int64_t image_height = 0;
  std::int64_t image_width = 0;
  std::int64_t channels = 0;
};

// Little-endian binary model file, magic "WLM1": dimensions, weights, bias,
// normalization statistics, and feature provenance.
void write_wlm1(const LinearModel& model, const NormStats& norm, const ModelMeta& meta,
                std::ostream& os);
struct LoadedModel {
  LinearModel model;
  NormStats norm;
  ModelMeta meta;
};
LoadedModel read_wlm1(std::istream& is);

void write_history_csv(const std::vector<HistoryEntry>& history, std::ostream& os);

}  // namespace wavepack
