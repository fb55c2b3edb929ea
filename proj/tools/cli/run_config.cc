#include "run_config.h"

#include <charconv>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "stegbd/error.h"
#include "stegbd/rng.h"

namespace stegbd::cli {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

template <typename T>
T parse_number(std::string_view key, std::string_view v) {
  T out{};
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ConfigError(std::string(key) + ": '" + std::string(v) +
                      "' is not a valid number");
  return out;
}

double parse_real(std::string_view key, std::string_view v) {
  return parse_number<double>(key, v);
}

}  // namespace

std::vector<std::string> split_list(std::string_view s, char sep) {
  std::vector<std::string> out;
  while (true) {
    auto at = s.find(sep);
    out.emplace_back(trim(s.substr(0, at)));
    if (at == std::string_view::npos) break;
    s = s.substr(at + 1);
  }
  if (out.size() == 1 && out[0].empty()) out.clear();
  return out;
}

RunConfig parse_run_config(std::string_view text) {
  std::map<std::string, std::string> kv;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view l = line;
    if (auto hash = l.find('#'); hash != std::string_view::npos)
      l = l.substr(0, hash);
    l = trim(l);
    if (l.empty()) continue;
    auto eq = l.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(line_no) +
                        ": expected key = value");
    std::string key(trim(l.substr(0, eq)));
    std::string value(trim(l.substr(eq + 1)));
    if (key.empty())
      throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    if (!kv.emplace(key, value).second)
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key " +
                        key);
  }

  RunConfig cfg;
  std::set<std::string> used;
  auto get = [&](const std::string& key) -> std::optional<std::string> {
    used.insert(key);
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    return it->second;
  };

  if (auto v = get("seed")) cfg.seed = parse_number<std::uint64_t>("seed", *v);

  // dataset
  DatasetSource source = DatasetSource::kSynthetic;
  if (auto v = get("dataset.source")) source = parse_source(*v);
  cfg.train_data.source = cfg.test_data.source = source;
  cfg.train_data.split = Split::kTrain;
  cfg.test_data.split = Split::kTest;
  if (auto v = get("dataset.train")) cfg.train_data.path = *v;
  if (auto v = get("dataset.test")) cfg.test_data.path = *v;
  cfg.train_data.seed = cfg.test_data.seed = derive_seed(cfg.seed, "dataset");
  cfg.train_data.count = 1200;
  cfg.test_data.count = 300;
  cfg.train_data.num_classes = cfg.test_data.num_classes = 6;
  if (auto v = get("dataset.train_count"))
    cfg.train_data.count = parse_number<std::size_t>("dataset.train_count", *v);
  if (auto v = get("dataset.test_count"))
    cfg.test_data.count = parse_number<std::size_t>("dataset.test_count", *v);
  if (auto v = get("dataset.classes"))
    cfg.train_data.num_classes = cfg.test_data.num_classes =
        parse_number<int>("dataset.classes", *v);
  if (auto v = get("dataset.width"))
    cfg.train_data.width = cfg.test_data.width = parse_number<int>("dataset.width", *v);
  if (auto v = get("dataset.height"))
    cfg.train_data.height = cfg.test_data.height =
        parse_number<int>("dataset.height", *v);
  if (source == DatasetSource::kSynthetic) {
    cfg.train_data.validate();
    cfg.test_data.validate();
  }

  // attack
  if (auto v = get("attack.mode")) {
    cfg.has_attack = true;
    const AttackMode mode = parse_mode(*v);
    std::vector<Channel> channels = {Channel::kRed, Channel::kGreen,
                                     Channel::kBlue};
    if (auto c = get("attack.channels")) {
      channels.clear();
      for (const auto& s : split_list(*c)) channels.push_back(parse_channel(s));
    }
    if (channels.empty() || channels.size() > 3)
      throw ConfigError("attack.channels must list 1 to 3 channels");
    AttackConfig a = default_attack(mode, static_cast<int>(channels.size()));
    a.channels = channels;
    for (std::size_t i = 0; i < channels.size(); ++i)
      a.embeds[i].channel = channels[i];
    if (auto t = get("attack.targets")) {
      a.targets.clear();
      for (const auto& s : split_list(*t))
        a.targets.push_back(parse_number<int>("attack.targets", s));
    }
    if (auto p = get("attack.payloads")) {
      auto items = split_list(*p);
      if (items.size() != channels.size())
        throw ConfigError("attack.payloads needs one payload per channel");
      for (std::size_t i = 0; i < items.size(); ++i)
        a.embeds[i].payload = parse_payload(items[i]);
    }
    std::optional<std::vector<CoeffPos>> positions;
    if (auto p = get("attack.positions")) positions = parse_positions(*p);
    if (auto b = get("attack.bits_per_block")) {
      const int bpb = parse_number<int>("attack.bits_per_block", *b);
      if (positions && static_cast<int>(positions->size()) != bpb)
        throw ConfigError("attack.bits_per_block disagrees with attack.positions");
      if (!positions) positions = default_positions(bpb);
    }
    for (auto& e : a.embeds) {
      if (auto d = get("attack.delta")) e.delta = parse_real("attack.delta", *d);
      if (positions) e.positions = *positions;
    }
    if (auto r = get("attack.ratio")) a.injection_ratio = parse_real("attack.ratio", *r);
    if (auto r = get("attack.ratios"))
      for (const auto& s : split_list(*r))
        cfg.ratios.push_back(parse_real("attack.ratios", s));
    a.seed = derive_seed(cfg.seed, "attack");
    a.validate(source == DatasetSource::kSynthetic ? cfg.train_data.num_classes
                                                   : 0);
    cfg.attack = std::move(a);
  }

  // train
  if (auto v = get("train.hidden")) cfg.train.hidden = parse_number<int>("train.hidden", *v);
  if (auto v = get("train.lr")) cfg.train.lr = parse_real("train.lr", *v);
  if (auto v = get("train.momentum")) cfg.train.momentum = parse_real("train.momentum", *v);
  if (auto v = get("train.epochs")) cfg.train.epochs = parse_number<int>("train.epochs", *v);
  if (auto v = get("train.batch")) cfg.train.batch = parse_number<int>("train.batch", *v);
  cfg.train.seed = derive_seed(cfg.seed, "train");
  cfg.train.validate();
  if (auto v = get("train.on")) {
    if (*v == "poisoned") {
      cfg.train_on_poisoned = true;
    } else if (*v == "clean") {
      cfg.train_on_poisoned = false;
    } else {
      throw ConfigError("train.on must be 'poisoned' or 'clean'");
    }
  }

  // outputs
  if (auto v = get("output.dataset")) cfg.output_dataset = *v;
  if (auto v = get("output.format")) {
    if (*v == "cifar10-bin") {
      cfg.output_format = DatasetFormat::kCifar10Bin;
    } else if (*v == "ppm-dir") {
      cfg.output_format = DatasetFormat::kPpmDir;
    } else {
      throw ConfigError("output.format must be cifar10-bin or ppm-dir");
    }
  }
  if (auto v = get("output.model")) cfg.output_model = *v;
  if (auto v = get("output.loss_log")) cfg.output_loss_log = *v;
  if (auto v = get("output.report")) cfg.output_report = *v;

  for (const auto& [key, value] : kv) {
    if (!used.contains(key)) {
      // attack.* keys are only consulted once attack.mode is present.
      if (key.starts_with("attack.") && !cfg.has_attack)
        throw ConfigError("key " + key + " requires attack.mode");
      throw ConfigError("unknown key " + key);
    }
  }
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  return parse_run_config(std::string(bytes.begin(), bytes.end()));
}

}  // namespace stegbd::cli
