#ifndef STEGBD_TOOLS_RUN_CONFIG_H_
#define STEGBD_TOOLS_RUN_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stegbd/image_io.h"
#include "stegbd/mlp.h"
#include "stegbd/poisoner.h"

namespace stegbd::cli {

enum class DatasetFormat { kCifar10Bin, kPpmDir };

// Parsed form of a run-config document: one `key = value` per line, `#`
// starts a comment. Every key is optional except where a command needs it;
// unknown keys and malformed values are ConfigErrors.
//
//   seed                    experiment seed; every stochastic step derives
//                           its stream from it
//   dataset.source          synthetic | cifar10-bin | ppm-dir
//   dataset.train / .test   paths for file-backed sources
//   dataset.train_count / .test_count / .classes / .width / .height
//   attack.mode             n-to-n | n-to-one
//   attack.channels         e.g. R,G,B
//   attack.targets          e.g. 0,1,2 (one label for n-to-one)
//   attack.payloads         one per channel: hex:.. or text:..
//   attack.delta            quantization step
//   attack.positions        a:b list, e.g. 3:4,4:3
//   attack.bits_per_block   picks default positions when positions unset
//   attack.ratio            injection ratio
//   attack.ratios           strictly increasing list for sweep
//   train.hidden / .lr / .momentum / .epochs / .batch
//   train.on                poisoned | clean
//   output.dataset / .format / .model / .loss_log / .report
struct RunConfig {
  std::uint64_t seed = 0;

  DatasetManifest train_data;
  DatasetManifest test_data;

  bool has_attack = false;
  AttackConfig attack;
  std::vector<double> ratios;

  TrainConfig train;
  bool train_on_poisoned = true;

  std::filesystem::path output_dataset;
  std::optional<DatasetFormat> output_format;
  std::filesystem::path output_model;
  std::filesystem::path output_loss_log;
  std::filesystem::path output_report;
};

// Throws ConfigError naming the offending line.
RunConfig parse_run_config(std::string_view text);
RunConfig load_run_config(const std::filesystem::path& path);

std::vector<std::string> split_list(std::string_view s, char sep = ',');

}  // namespace stegbd::cli

#endif  // STEGBD_TOOLS_RUN_CONFIG_H_
