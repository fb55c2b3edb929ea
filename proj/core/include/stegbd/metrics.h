#ifndef STEGBD_METRICS_H_
#define STEGBD_METRICS_H_

#include <functional>
#include <string>
#include <vector>

#include "stegbd/mlp.h"
#include "stegbd/poisoner.h"

namespace stegbd {

// Anything that maps an image to a class label. MlpModel overloads wrap
// predict(); tests substitute stubs.
using Predictor = std::function<int(const RasterImage&)>;

Predictor as_predictor(const MlpModel& model);

// Fraction of items predicted correctly. Throws ConfigError on an empty set.
double accuracy(const Predictor& model, const LabeledDataset& ds);
double accuracy(const MlpModel& model, const LabeledDataset& ds);

struct AsrResult {
  std::vector<Channel> channel_set;
  int target = 0;
  std::size_t numerator = 0;
  std::size_t denominator = 0;
  double rate = 0.0;
};

// "R", "R&G&B", ... ("none" for the empty set).
std::string channel_set_name(const std::vector<Channel>& set);

// Label the attack promises for an image triggered in `which`. N-to-One:
// the single target. N-to-N: targets[c] for a single channel c; any other
// set throws ConfigError.
int expected_target(const AttackConfig& cfg, const std::vector<Channel>& which);

// Attack success rate over the test items whose ground truth differs from
// the expected target, each triggered in `which`.
AsrResult asr(const Predictor& model, const LabeledDataset& ds_clean_test,
              const AttackConfig& cfg, const std::vector<Channel>& which);
AsrResult asr(const MlpModel& model, const LabeledDataset& ds_clean_test,
              const AttackConfig& cfg, const std::vector<Channel>& which);

// Percentage points; positive when the backdoored model is worse.
double accuracy_drop(double acc_clean_model, double acc_backdoored_model);

// Channel sets evaluated for an attack: every single channel, plus all N
// together for N-to-One with N > 1.
std::vector<std::vector<Channel>> relevant_channel_sets(const AttackConfig& cfg);

struct SweepRow {
  double ratio = 0.0;
  std::vector<AsrResult> asr;  // one per relevant_channel_sets entry
  double clean_accuracy = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
};

// For ratio i: poison with seed base.seed + i, train with train.seed + i,
// then measure every relevant channel set and clean accuracy. Throws
// ConfigError unless ratios are strictly increasing in (0, 1).
SweepResult sweep(const LabeledDataset& ds_train, const LabeledDataset& ds_test,
                  const AttackConfig& base, const TrainConfig& train_cfg,
                  const std::vector<double>& ratios);

// Aligned table: one row per channel set, columns min / max / avg of the
// rate across `repeats` (each repeat lists the same channel sets in order).
std::string format_asr_table(const std::vector<std::vector<AsrResult>>& repeats);

std::string format_sweep_table(const SweepResult& result);

// "#DATA metric,channel_set,ratio,value"
std::string data_line(const std::string& metric, const std::string& channel_set,
                      double ratio, double value);

struct DataLine {
  std::string metric;
  std::string channel_set;
  double ratio = 0.0;
  double value = 0.0;
};

// Parses every "#DATA " line of `text`; other lines are ignored. Throws
// FormatError on a malformed data line.
std::vector<DataLine> parse_data_lines(const std::string& text);

}  // namespace stegbd

#endif  // STEGBD_METRICS_H_
