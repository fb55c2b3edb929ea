#ifndef STEGBD_POISONER_H_
#define STEGBD_POISONER_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stegbd/image_io.h"
#include "stegbd/stego.h"

namespace stegbd {

enum class AttackMode { kNtoN, kNtoOne };

std::string_view mode_name(AttackMode m);
// "n-to-n" / "n-to-one" (case-insensitive; "NtoN"/"NtoOne" also accepted).
AttackMode parse_mode(std::string_view s);

// Embedding strength used for poisoning. The codec's 20 is enough to carry a
// payload but too faint for a small MLP to learn in 30 epochs.
inline constexpr double kDefaultAttackDelta = 144.0;

struct AttackConfig {
  AttackMode mode = AttackMode::kNtoN;
  std::vector<Channel> channels;
  // N-to-N: one label per channel, pairwise distinct. N-to-One: one label.
  std::vector<int> targets;
  double injection_ratio = 0.1;
  std::uint64_t seed = 0;
  // One trigger per entry of `channels`, same order; embeds[i].channel must
  // equal channels[i].
  std::vector<EmbedSpec> embeds;

  int n() const { return static_cast<int>(channels.size()); }
  bool uses(Channel c) const;
  const EmbedSpec& spec_for(Channel c) const;
  // Label carried by instances triggered in `c` (the single target under
  // N-to-One).
  int target_for(Channel c) const;

  // Throws ConfigError on any violated invariant, including targets that do
  // not fit `num_classes` (pass 0 to skip that check).
  void validate(int num_classes = 0) const;
};

// R, G, B (first n_channels), targets (0, 1, 2) or (0), payloads "TR", "TG",
// "TB", delta kDefaultAttackDelta, one bit per block at (3,4). Ratio 10% for
// N-to-N and 3% for N-to-One.
AttackConfig default_attack(AttackMode mode, int n_channels = 3);

struct PoisonSkip {
  std::size_t index = 0;  // into the clean dataset
  Channel channel = Channel::kRed;
  std::string reason;
};

struct PoisonReport {
  std::size_t candidate_count = 0;
  std::size_t injected_count = 0;
  std::vector<std::size_t> candidates;  // ascending
  std::vector<PoisonSkip> skipped;
  std::array<std::size_t, 3> per_channel{};  // injected, by channel index
};

// embed(x, cfg.spec_for(channel)). Throws ConfigError if the attack does not
// use `channel`; propagates CapacityError / VerificationError.
RasterImage make_backdoor_instance(const RasterImage& x, Channel channel,
                                   const AttackConfig& cfg);

// Samples n = round(r |ds|) distinct candidates and appends one backdoor
// instance per candidate and channel after the untouched clean items, in
// (candidate, channel) order. Candidates whose embedding fails verification
// are skipped and reported.
std::pair<LabeledDataset, PoisonReport> poison(const LabeledDataset& ds,
                                               const AttackConfig& cfg);

// Copy of ds_test with triggers embedded, one after another, in exactly
// `which` (a subset of cfg.channels). Labels are kept.
LabeledDataset make_test_instances(const LabeledDataset& ds_test,
                                   const AttackConfig& cfg,
                                   const std::vector<Channel>& which);

}  // namespace stegbd

#endif  // STEGBD_POISONER_H_
