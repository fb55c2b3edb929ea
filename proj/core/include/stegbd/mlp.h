#ifndef STEGBD_MLP_H_
#define STEGBD_MLP_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "stegbd/image_io.h"

namespace stegbd {

// One hidden ReLU layer followed by a softmax output. Weight grids are
// row-major: w1 is hidden x input_dim, w2 is classes x hidden.
struct MlpModel {
  int input_dim = 0;
  int hidden = 0;
  int classes = 0;
  std::vector<double> w1, b1, w2, b2;

  MlpModel() = default;
  // All-zero model.
  MlpModel(int input_dim, int hidden, int classes);

  std::size_t parameter_count() const {
    return w1.size() + b1.size() + w2.size() + b2.size();
  }
  // Flat view order: w1, b1, w2, b2.
  double& parameter(std::size_t i);
  double parameter(std::size_t i) const;

  bool all_finite() const;

  bool operator==(const MlpModel&) const = default;
};

struct TrainConfig {
  int hidden = 128;
  double lr = 0.05;
  double momentum = 0.9;
  int epochs = 30;
  int batch = 32;
  std::uint64_t seed = 0;

  // Throws ConfigError.
  void validate() const;
};

struct TrainResult {
  MlpModel model;
  std::vector<double> epoch_loss;  // mean cross-entropy per epoch
};

// Network input for an image: planes R, G, B in order, each row-major,
// mapped to x / 255 - 0.5.
std::vector<double> encode_input(const RasterImage& image);

// Class probabilities. Throws DimensionError if the image does not match
// model.input_dim.
std::vector<double> forward(const MlpModel& model, const RasterImage& image);

// argmax of forward; ties go to the lowest class index.
int predict(const MlpModel& model, const RasterImage& image);

// Numerically stable softmax (max-subtracted).
std::vector<double> softmax(std::span<const double> logits);

// Xavier-uniform init, per-epoch seeded shuffle, minibatch SGD with momentum
// on mean cross-entropy. A pure function of (ds, cfg). Throws ConfigError on
// an empty dataset.
TrainResult train(const LabeledDataset& ds, const TrainConfig& cfg);

struct LossGradient {
  double loss = 0.0;
  std::vector<double> grad;  // same flat order as MlpModel::parameter
};

// Mean cross-entropy over `items` and its analytic gradient.
LossGradient loss_and_gradient(const MlpModel& model,
                               std::span<const LabeledImage> items);

// Largest relative error between the analytic gradient and central finite
// differences (step 1e-4) over `samples` parameters picked with `seed`.
// Where both gradients are below 1e-7 the absolute difference is used.
double grad_check(const MlpModel& model, std::span<const LabeledImage> batch,
                  std::uint64_t seed = 0, int samples = 64);

// Xavier-uniform initialised model.
MlpModel init_model(int input_dim, int hidden, int classes, std::uint64_t seed);

// Checkpoint: "MLP1", then input_dim, hidden, classes as u32 little-endian,
// then every parameter as a little-endian IEEE double (w1, b1, w2, b2).
std::vector<std::uint8_t> serialize_model(const MlpModel& model);
// Throws FormatError on a bad magic, truncated stream or trailing bytes.
MlpModel deserialize_model(std::span<const std::uint8_t> bytes);

}  // namespace stegbd

#endif  // STEGBD_MLP_H_
