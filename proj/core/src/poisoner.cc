#include "stegbd/poisoner.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

#include "stegbd/error.h"
#include "stegbd/rng.h"

namespace stegbd {

std::string_view mode_name(AttackMode m) {
  return m == AttackMode::kNtoN ? "n-to-n" : "n-to-one";
}

AttackMode parse_mode(std::string_view s) {
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "n-to-n" || lower == "nton") return AttackMode::kNtoN;
  if (lower == "n-to-one" || lower == "ntoone") return AttackMode::kNtoOne;
  throw ConfigError("unknown attack mode '" + std::string(s) + "'");
}

bool AttackConfig::uses(Channel c) const {
  return std::find(channels.begin(), channels.end(), c) != channels.end();
}

const EmbedSpec& AttackConfig::spec_for(Channel c) const {
  for (std::size_t i = 0; i < channels.size(); ++i)
    if (channels[i] == c) return embeds.at(i);
  throw ConfigError("attack does not use channel " +
                    std::string(channel_name(c)));
}

int AttackConfig::target_for(Channel c) const {
  if (mode == AttackMode::kNtoOne) return targets.at(0);
  for (std::size_t i = 0; i < channels.size(); ++i)
    if (channels[i] == c) return targets.at(i);
  throw ConfigError("attack does not use channel " +
                    std::string(channel_name(c)));
}

void AttackConfig::validate(int num_classes) const {
  if (channels.empty() || channels.size() > 3)
    throw ConfigError("attack needs 1 to 3 channels");
  for (std::size_t i = 0; i < channels.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (channels[i] == channels[j])
        throw ConfigError("attack channels must be distinct");
  if (mode == AttackMode::kNtoN) {
    if (targets.size() != channels.size())
      throw ConfigError("n-to-n needs one target per channel");
    for (std::size_t i = 0; i < targets.size(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (targets[i] == targets[j])
          throw ConfigError("n-to-n targets must be pairwise distinct");
  } else if (targets.size() != 1) {
    throw ConfigError("n-to-one needs exactly one target");
  }
  for (int t : targets) {
    if (t < 0 || (num_classes > 0 && t >= num_classes))
      throw ConfigError("target label " + std::to_string(t) +
                        " outside the dataset's classes");
  }
  if (!(injection_ratio > 0.0 && injection_ratio < 1.0))
    throw ConfigError("injection ratio must lie in (0, 1)");
  if (embeds.size() != channels.size())
    throw ConfigError("need one embed spec per channel");
  for (std::size_t i = 0; i < embeds.size(); ++i) {
    if (embeds[i].channel != channels[i])
      throw ConfigError("embed spec channel does not match attack channel");
    embeds[i].validate();
  }
}

AttackConfig default_attack(AttackMode mode, int n_channels) {
  if (n_channels < 1 || n_channels > 3)
    throw ConfigError("n_channels must be 1..3");
  static constexpr std::array<std::string_view, 3> kPayloads = {"TR", "TG",
                                                                "TB"};
  AttackConfig cfg;
  cfg.mode = mode;
  cfg.injection_ratio = mode == AttackMode::kNtoN ? 0.10 : 0.03;
  for (int i = 0; i < n_channels; ++i) {
    cfg.channels.push_back(kAllChannels[i]);
    if (mode == AttackMode::kNtoN || i == 0) cfg.targets.push_back(i);
    EmbedSpec spec;
    spec.channel = kAllChannels[i];
    spec.payload.assign(kPayloads[i].begin(), kPayloads[i].end());
    spec.delta = kDefaultAttackDelta;
    cfg.embeds.push_back(std::move(spec));
  }
  return cfg;
}

RasterImage make_backdoor_instance(const RasterImage& x, Channel channel,
                                   const AttackConfig& cfg) {
  return embed(x, cfg.spec_for(channel));
}

std::pair<LabeledDataset, PoisonReport> poison(const LabeledDataset& ds,
                                               const AttackConfig& cfg) {
  cfg.validate(ds.num_classes);
  PoisonReport report;
  const auto n = static_cast<std::size_t>(
      std::llround(cfg.injection_ratio * static_cast<double>(ds.size())));

  std::vector<std::size_t> pool(ds.size());
  std::iota(pool.begin(), pool.end(), 0);
  Rng rng(derive_seed(cfg.seed, "poison.candidates"));
  for (std::size_t i = 0; i < n; ++i)
    std::swap(pool[i], pool[i + rng.below(pool.size() - i)]);
  report.candidates.assign(pool.begin(), pool.begin() + n);
  std::sort(report.candidates.begin(), report.candidates.end());
  report.candidate_count = n;

  LabeledDataset out = ds;
  out.items.reserve(ds.size() + n * cfg.channels.size());
  for (std::size_t idx : report.candidates) {
    for (Channel c : cfg.channels) {
      try {
        out.items.push_back({make_backdoor_instance(ds.items[idx].image, c, cfg),
                             cfg.target_for(c)});
        ++report.injected_count;
        ++report.per_channel[index_of(c)];
      } catch (const VerificationError& e) {
        report.skipped.push_back({idx, c, e.what()});
      }
    }
  }
  return {std::move(out), std::move(report)};
}

LabeledDataset make_test_instances(const LabeledDataset& ds_test,
                                   const AttackConfig& cfg,
                                   const std::vector<Channel>& which) {
  for (Channel c : which)
    if (!cfg.uses(c))
      throw ConfigError("channel " + std::string(channel_name(c)) +
                        " is not part of the attack");
  LabeledDataset out = ds_test;
  for (auto& item : out.items)
    for (Channel c : which) item.image = embed(item.image, cfg.spec_for(c));
  return out;
}

}  // namespace stegbd
