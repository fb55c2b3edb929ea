#include "stegbd/metrics.h"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "stegbd/error.h"

namespace stegbd {

Predictor as_predictor(const MlpModel& model) {
  return [&model](const RasterImage& img) { return predict(model, img); };
}

double accuracy(const Predictor& model, const LabeledDataset& ds) {
  if (ds.empty()) throw ConfigError("accuracy of an empty dataset");
  std::size_t hits = 0;
  for (const auto& it : ds.items) hits += model(it.image) == it.label;
  return static_cast<double>(hits) / static_cast<double>(ds.size());
}

double accuracy(const MlpModel& model, const LabeledDataset& ds) {
  return accuracy(as_predictor(model), ds);
}

std::string channel_set_name(const std::vector<Channel>& set) {
  if (set.empty()) return "none";
  std::string out;
  for (Channel c : set) {
    if (!out.empty()) out += '&';
    out += channel_name(c);
  }
  return out;
}

int expected_target(const AttackConfig& cfg, const std::vector<Channel>& which) {
  if (which.empty()) throw ConfigError("ASR needs at least one triggered channel");
  if (cfg.mode == AttackMode::kNtoOne) return cfg.targets.at(0);
  if (which.size() != 1)
    throw ConfigError("n-to-n defines no target for a multi-channel trigger (" +
                      channel_set_name(which) + ")");
  return cfg.target_for(which[0]);
}

AsrResult asr(const Predictor& model, const LabeledDataset& ds_clean_test,
              const AttackConfig& cfg, const std::vector<Channel>& which) {
  AsrResult r;
  r.channel_set = which;
  r.target = expected_target(cfg, which);
  LabeledDataset kept;
  kept.num_classes = ds_clean_test.num_classes;
  for (const auto& it : ds_clean_test.items)
    if (it.label != r.target) kept.items.push_back(it);
  if (kept.empty())
    throw ConfigError("no test items outside the target class");
  const LabeledDataset triggered = make_test_instances(kept, cfg, which);
  for (const auto& it : triggered.items) r.numerator += model(it.image) == r.target;
  r.denominator = triggered.size();
  r.rate = static_cast<double>(r.numerator) / static_cast<double>(r.denominator);
  return r;
}

AsrResult asr(const MlpModel& model, const LabeledDataset& ds_clean_test,
              const AttackConfig& cfg, const std::vector<Channel>& which) {
  return asr(as_predictor(model), ds_clean_test, cfg, which);
}

double accuracy_drop(double acc_clean_model, double acc_backdoored_model) {
  return (acc_clean_model - acc_backdoored_model) * 100.0;
}

std::vector<std::vector<Channel>> relevant_channel_sets(const AttackConfig& cfg) {
  std::vector<std::vector<Channel>> sets;
  for (Channel c : cfg.channels) sets.push_back({c});
  if (cfg.mode == AttackMode::kNtoOne && cfg.n() > 1) sets.push_back(cfg.channels);
  return sets;
}

SweepResult sweep(const LabeledDataset& ds_train, const LabeledDataset& ds_test,
                  const AttackConfig& base, const TrainConfig& train_cfg,
                  const std::vector<double>& ratios) {
  if (ratios.empty()) throw ConfigError("sweep needs at least one ratio");
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    if (!(ratios[i] > 0.0 && ratios[i] < 1.0))
      throw ConfigError("sweep ratios must lie in (0, 1)");
    if (i > 0 && !(ratios[i] > ratios[i - 1]))
      throw ConfigError("sweep ratios must be strictly increasing");
  }
  SweepResult result;
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    AttackConfig cfg = base;
    cfg.injection_ratio = ratios[i];
    cfg.seed = base.seed + i;
    TrainConfig tc = train_cfg;
    tc.seed = train_cfg.seed + i;
    const auto poisoned = poison(ds_train, cfg).first;
    const MlpModel model = train(poisoned, tc).model;
    SweepRow row;
    row.ratio = ratios[i];
    for (const auto& set : relevant_channel_sets(cfg))
      row.asr.push_back(asr(model, ds_test, cfg, set));
    row.clean_accuracy = accuracy(model, ds_test);
    result.rows.push_back(std::move(row));
  }
  return result;
}

namespace {

std::string percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f%%", v * 100.0);
  return buf;
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

std::string pad_right(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

std::string render(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> widths;
  for (const auto& r : rows) {
    widths.resize(std::max(widths.size(), r.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i)
      widths[i] = std::max(widths[i], r[i].size());
  }
  std::string out;
  for (const auto& r : rows) {
    std::string line;
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i > 0) line += "  ";
      line += i == 0 ? pad_right(r[i], widths[i]) : pad(r[i], widths[i]);
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + '\n';
  }
  return out;
}

}  // namespace

std::string format_asr_table(const std::vector<std::vector<AsrResult>>& repeats) {
  std::vector<std::vector<std::string>> rows = {
      {"trigger", "target", "min", "max", "avg"}};
  if (repeats.empty()) return render(rows);
  for (std::size_t s = 0; s < repeats[0].size(); ++s) {
    double lo = 1.0, hi = 0.0, sum = 0.0;
    for (const auto& rep : repeats) {
      const double v = rep.at(s).rate;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      sum += v;
    }
    rows.push_back({channel_set_name(repeats[0][s].channel_set),
                    std::to_string(repeats[0][s].target), percent(lo),
                    percent(hi), percent(sum / repeats.size())});
  }
  return render(rows);
}

std::string format_sweep_table(const SweepResult& result) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header = {"ratio"};
  if (!result.rows.empty())
    for (const auto& a : result.rows[0].asr)
      header.push_back("ASR " + channel_set_name(a.channel_set));
  header.push_back("clean acc");
  rows.push_back(header);
  for (const auto& row : result.rows) {
    std::vector<std::string> r = {percent(row.ratio)};
    for (const auto& a : row.asr) r.push_back(percent(a.rate));
    r.push_back(percent(row.clean_accuracy));
    rows.push_back(r);
  }
  return render(rows);
}

std::string data_line(const std::string& metric, const std::string& channel_set,
                      double ratio, double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), ",%.6g,%.17g", ratio, value);
  return "#DATA " + metric + "," + channel_set + buf;
}

std::vector<DataLine> parse_data_lines(const std::string& text) {
  std::vector<DataLine> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.starts_with("#DATA ")) continue;
    std::vector<std::string> f;
    std::istringstream fields(line.substr(6));
    std::string field;
    while (std::getline(fields, field, ',')) f.push_back(field);
    if (f.size() != 4) throw FormatError("bad data line: " + line);
    try {
      out.push_back({f[0], f[1], std::stod(f[2]), std::stod(f[3])});
    } catch (const std::exception&) {
      throw FormatError("bad number in data line: " + line);
    }
  }
  return out;
}

}  // namespace stegbd
