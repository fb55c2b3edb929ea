#ifndef STEGBD_TOOLS_COMMANDS_H_
#define STEGBD_TOOLS_COMMANDS_H_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "stegbd/stego.h"

namespace stegbd::cli {

// Process exit codes.
enum ExitStatus : int { kOk = 0, kValidationError = 1, kRuntimeError = 2 };

struct EmbedArgs {
  std::filesystem::path in_image;
  std::filesystem::path out_image;
  Channel channel = Channel::kRed;
  std::vector<std::uint8_t> payload;
  double delta = kDefaultDelta;
  std::vector<CoeffPos> positions = default_positions(1);
};

struct ExtractArgs {
  std::filesystem::path in_image;
  Channel channel = Channel::kRed;
  std::size_t length = 0;
  double delta = kDefaultDelta;
  std::vector<CoeffPos> positions = default_positions(1);
};

// Each command writes its human table and "#DATA " lines to `out` and
// diagnostics to `err`, and never throws.
int cmd_embed(const EmbedArgs& args, std::ostream& out, std::ostream& err);
int cmd_extract(const ExtractArgs& args, std::ostream& out, std::ostream& err);
int cmd_poison(const std::filesystem::path& config, std::ostream& out,
               std::ostream& err);
int cmd_train(const std::filesystem::path& config, std::ostream& out,
              std::ostream& err);
// `models` are repeats of the same experiment; the table reports min / max /
// avg across them. Without `clean_model` a clean baseline is trained from
// the config to report the accuracy drop.
int cmd_eval(const std::filesystem::path& config,
             const std::vector<std::filesystem::path>& models,
             const std::filesystem::path& clean_model, std::ostream& out,
             std::ostream& err);
int cmd_sweep(const std::filesystem::path& config, std::ostream& out,
              std::ostream& err);

// Runs the CLI on argv; returns the exit status.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace stegbd::cli

#endif  // STEGBD_TOOLS_COMMANDS_H_
