#include "commands.h"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include "run_config.h"
#include "stegbd/error.h"
#include "stegbd/image_io.h"
#include "stegbd/metrics.h"
#include "stegbd/mlp.h"
#include "stegbd/poisoner.h"

namespace stegbd::cli {
namespace fs = std::filesystem;
namespace {

// Maps library errors onto exit codes; configuration problems are
// validation errors, everything else is a runtime/data error.
int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
}

// A single image on disk: a PPM or one 3073-byte CIFAR-10 record (whose
// label is carried through unchanged).
struct ImageFile {
  RasterImage image;
  bool cifar = false;
  int label = 0;
};

ImageFile read_image_file(const fs::path& path) {
  const auto bytes = read_file(path);
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '6')
    return {read_ppm(bytes), false, 0};
  if (bytes.size() == kCifarRecordBytes) {
    auto ds = read_cifar10_bin(bytes);
    return {std::move(ds.items[0].image), true, ds.items[0].label};
  }
  throw FormatError(path.string() +
                    " is neither a P6 PPM nor a single CIFAR-10 record");
}

void write_image_file(const fs::path& path, const ImageFile& f) {
  if (f.cifar) {
    LabeledDataset ds;
    ds.num_classes = kCifarClasses;
    ds.items.push_back({f.image, f.label});
    write_file(path, write_cifar10_bin(ds));
  } else {
    write_file(path, write_ppm(f.image));
  }
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

void require_attack(const RunConfig& cfg) {
  if (!cfg.has_attack) throw ConfigError("config needs attack.mode");
}

void require_file_paths(const RunConfig& cfg, bool need_test) {
  if (cfg.train_data.source == DatasetSource::kSynthetic) return;
  cfg.train_data.validate();
  if (need_test) cfg.test_data.validate();
}

LabeledDataset load_checked(const DatasetManifest& m, const RunConfig& cfg) {
  LabeledDataset ds = load_dataset(m);
  ds.validate();
  if (cfg.has_attack) cfg.attack.validate(ds.num_classes);
  return ds;
}

void write_dataset(const LabeledDataset& ds, const RunConfig& cfg) {
  DatasetFormat format;
  if (cfg.output_format) {
    format = *cfg.output_format;
  } else {
    const bool fits_cifar = !ds.empty() &&
                            ds.items[0].image.width() == kCifarSide &&
                            ds.items[0].image.height() == kCifarSide &&
                            ds.num_classes <= kCifarClasses;
    format = fits_cifar ? DatasetFormat::kCifar10Bin : DatasetFormat::kPpmDir;
  }
  if (format == DatasetFormat::kCifar10Bin) {
    write_file(cfg.output_dataset, write_cifar10_bin(ds));
  } else {
    write_ppm_dir(ds, cfg.output_dataset);
  }
}

std::string poison_report_text(const PoisonReport& r, const AttackConfig& a) {
  std::ostringstream s;
  s << "mode        " << mode_name(a.mode) << '\n'
    << "ratio       " << fixed(a.injection_ratio * 100.0, 2) << "%\n"
    << "candidates  " << r.candidate_count << '\n'
    << "injected    " << r.injected_count << '\n'
    << "skipped     " << r.skipped.size() << '\n';
  for (Channel c : a.channels)
    s << "channel " << channel_name(c) << "   " << r.per_channel[index_of(c)]
      << " -> label " << a.target_for(c) << '\n';
  for (const auto& sk : r.skipped)
    s << "skip image " << sk.index << " channel " << channel_name(sk.channel)
      << ": " << sk.reason << '\n';
  const double ratio = a.injection_ratio;
  s << data_line("candidates", "all", ratio, r.candidate_count) << '\n'
    << data_line("injected", "all", ratio, r.injected_count) << '\n'
    << data_line("skipped", "all", ratio, r.skipped.size()) << '\n';
  for (Channel c : a.channels)
    s << data_line("injected", std::string(channel_name(c)), ratio,
                   r.per_channel[index_of(c)])
      << '\n';
  return s.str();
}

LabeledDataset training_set(const RunConfig& cfg, const LabeledDataset& clean,
                            std::ostream& err) {
  if (!cfg.train_on_poisoned || !cfg.has_attack) return clean;
  auto [poisoned, report] = poison(clean, cfg.attack);
  if (!report.skipped.empty())
    err << "warning: " << report.skipped.size()
        << " backdoor instances skipped (verification failed)\n";
  return std::move(poisoned);
}

}  // namespace

int cmd_embed(const EmbedArgs& args, std::ostream& out, std::ostream& err) {
  EmbedSpec spec{args.channel, args.payload, args.delta, args.positions};
  try {
    spec.validate();
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  }
  return guarded(err, [&] {
    ImageFile f = read_image_file(args.in_image);
    const RasterImage clean = f.image;
    try {
      f.image = embed(clean, spec);
    } catch (const ConfigError& e) {
      // Embedding problems are data errors here; the spec already validated.
      throw Error(e.what());
    }
    write_image_file(args.out_image, f);
    const std::size_t bits = spec.payload.size() * 8;
    const double db = psnr(clean, f.image);
    out << "capacity used: " << bits << " of " << capacity(clean, spec)
        << " bits\n"
        << "psnr: " << (std::isinf(db) ? std::string("inf") : fixed(db, 2))
        << " dB\n"
        << data_line("capacity_used", std::string(channel_name(spec.channel)),
                     0, static_cast<double>(bits))
        << '\n';
    return kOk;
  });
}

int cmd_extract(const ExtractArgs& args, std::ostream& out, std::ostream& err) {
  EmbedSpec spec{args.channel, {}, args.delta, args.positions};
  try {
    spec.validate();
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  }
  return guarded(err, [&] {
    const ImageFile f = read_image_file(args.in_image);
    const std::size_t cap = capacity(f.image, spec);
    if (args.length * 8 > cap) {
      err << "error: cannot read " << args.length * 8
          << " bits; capacity is " << cap << " bits\n";
      return static_cast<int>(kValidationError);
    }
    out << to_hex(extract(f.image, spec, args.length)) << '\n';
    return static_cast<int>(kOk);
  });
}

int cmd_poison(const fs::path& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = load_run_config(config);
    require_attack(cfg);
    if (cfg.output_dataset.empty())
      throw ConfigError("poison needs output.dataset");
    require_file_paths(cfg, false);
    const LabeledDataset clean = load_checked(cfg.train_data, cfg);
    auto [poisoned, report] = poison(clean, cfg.attack);
    write_dataset(poisoned, cfg);
    const std::string text = poison_report_text(report, cfg.attack);
    out << text;
    if (!cfg.output_report.empty())
      write_file(cfg.output_report,
                 std::vector<std::uint8_t>(text.begin(), text.end()));
    return static_cast<int>(kOk);
  });
}

int cmd_train(const fs::path& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = load_run_config(config);
    if (cfg.output_model.empty()) throw ConfigError("train needs output.model");
    require_file_paths(cfg, false);
    const LabeledDataset clean = load_checked(cfg.train_data, cfg);
    const LabeledDataset data = training_set(cfg, clean, err);
    const TrainResult result = train(data, cfg.train);
    write_file(cfg.output_model, serialize_model(result.model));
    if (!cfg.output_loss_log.empty()) {
      std::string log = "epoch,loss\n";
      for (std::size_t e = 0; e < result.epoch_loss.size(); ++e) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%zu,%.17g\n", e + 1,
                      result.epoch_loss[e]);
        log += buf;
      }
      write_file(cfg.output_loss_log,
                 std::vector<std::uint8_t>(log.begin(), log.end()));
    }
    const double ratio = cfg.has_attack ? cfg.attack.injection_ratio : 0.0;
    const double train_acc = accuracy(result.model, data);
    out << "trained on " << data.size() << " images for " << cfg.train.epochs
        << " epochs\n"
        << "final loss      " << fixed(result.epoch_loss.back(), 6) << '\n'
        << "train accuracy  " << fixed(train_acc * 100.0, 2) << "%\n"
        << data_line("final_loss", "none", ratio, result.epoch_loss.back()) << '\n'
        << data_line("train_accuracy", "none", ratio, train_acc) << '\n';
    return static_cast<int>(kOk);
  });
}

int cmd_eval(const fs::path& config, const std::vector<fs::path>& models,
             const fs::path& clean_model, std::ostream& out,
             std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = load_run_config(config);
    require_attack(cfg);
    if (models.empty()) throw ConfigError("eval needs at least one --model");
    require_file_paths(cfg, true);
    const LabeledDataset test = load_checked(cfg.test_data, cfg);

    std::vector<MlpModel> loaded;
    for (const auto& p : models) loaded.push_back(deserialize_model(read_file(p)));

    std::vector<std::vector<AsrResult>> repeats;
    double acc_sum = 0.0;
    for (const auto& m : loaded) {
      std::vector<AsrResult> rep;
      for (const auto& set : relevant_channel_sets(cfg.attack))
        rep.push_back(asr(m, test, cfg.attack, set));
      repeats.push_back(std::move(rep));
      acc_sum += accuracy(m, test);
    }
    const double acc = acc_sum / static_cast<double>(loaded.size());

    double clean_acc;
    if (!clean_model.empty()) {
      clean_acc = accuracy(deserialize_model(read_file(clean_model)), test);
    } else {
      require_file_paths(cfg, false);
      const LabeledDataset train_clean = load_checked(cfg.train_data, cfg);
      clean_acc = accuracy(train(train_clean, cfg.train).model, test);
    }

    const double ratio = cfg.attack.injection_ratio;
    out << "attack " << mode_name(cfg.attack.mode) << ", ratio "
        << fixed(ratio * 100.0, 2) << "%, " << loaded.size() << " model(s)\n"
        << format_asr_table(repeats)
        << "clean accuracy (backdoored)  " << fixed(acc * 100.0, 2) << "%\n"
        << "clean accuracy (clean model) " << fixed(clean_acc * 100.0, 2) << "%\n"
        << "accuracy drop                " << fixed(accuracy_drop(clean_acc, acc), 2)
        << " points\n";
    for (std::size_t s = 0; s < repeats[0].size(); ++s) {
      double sum = 0.0;
      for (const auto& rep : repeats) sum += rep[s].rate;
      out << data_line("asr", channel_set_name(repeats[0][s].channel_set), ratio,
                       sum / static_cast<double>(repeats.size()))
          << '\n';
    }
    out << data_line("clean_accuracy", "none", ratio, acc) << '\n'
        << data_line("baseline_accuracy", "none", ratio, clean_acc) << '\n'
        << data_line("accuracy_drop", "none", ratio, accuracy_drop(clean_acc, acc))
        << '\n';
    return static_cast<int>(kOk);
  });
}

int cmd_sweep(const fs::path& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = load_run_config(config);
    require_attack(cfg);
    if (cfg.ratios.empty()) throw ConfigError("sweep needs attack.ratios");
    require_file_paths(cfg, true);
    const LabeledDataset train_ds = load_checked(cfg.train_data, cfg);
    const LabeledDataset test_ds = load_checked(cfg.test_data, cfg);
    const SweepResult result =
        sweep(train_ds, test_ds, cfg.attack, cfg.train, cfg.ratios);
    out << "attack " << mode_name(cfg.attack.mode) << " injection-ratio sweep\n"
        << format_sweep_table(result);
    for (const auto& row : result.rows) {
      for (const auto& a : row.asr)
        out << data_line("asr", channel_set_name(a.channel_set), row.ratio, a.rate)
            << '\n';
      out << data_line("clean_accuracy", "none", row.ratio, row.clean_accuracy)
          << '\n';
    }
    return static_cast<int>(kOk);
  });
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Steganographic multi-channel backdoor toolkit"};
  app.require_subcommand(1);

  std::string channel = "R";
  std::string payload;
  std::string positions = "3:4";
  int bits_per_block = 0;
  double delta = kDefaultDelta;
  EmbedArgs embed_args;
  ExtractArgs extract_args;
  std::string config;
  std::vector<std::string> models;
  std::string clean_model;

  auto add_codec_flags = [&](CLI::App* sub) {
    sub->add_option("--channel", channel, "R, G or B")->capture_default_str();
    sub->add_option("--delta", delta, "quantization step")->capture_default_str();
    sub->add_option("--positions", positions, "coefficient positions, a:b list")
        ->capture_default_str();
    sub->add_option("--bits-per-block", bits_per_block,
                    "use the default positions for this many bits per block");
  };

  auto* embed_cmd = app.add_subcommand("embed", "hide a payload in one image");
  embed_cmd->add_option("--in", embed_args.in_image, "input PPM or CIFAR record")
      ->required();
  embed_cmd->add_option("--out", embed_args.out_image, "output path")->required();
  embed_cmd->add_option("--payload", payload, "hex:<digits> or text:<string>")
      ->required();
  add_codec_flags(embed_cmd);

  auto* extract_cmd = app.add_subcommand("extract", "read a payload as hex");
  extract_cmd->add_option("--in", extract_args.in_image, "input image")->required();
  extract_cmd->add_option("--length", extract_args.length, "payload bytes")
      ->required();
  add_codec_flags(extract_cmd);

  auto* poison_cmd = app.add_subcommand("poison", "write a poisoned dataset");
  auto* train_cmd = app.add_subcommand("train", "train a model checkpoint");
  auto* eval_cmd = app.add_subcommand("eval", "ASR table and accuracy drop");
  auto* sweep_cmd = app.add_subcommand("sweep", "injection-ratio sweep");
  for (auto* sub : {poison_cmd, train_cmd, eval_cmd, sweep_cmd})
    sub->add_option("config", config, "run-config file")->required();
  eval_cmd->add_option("--model", models, "model checkpoint (repeatable)")
      ->required();
  eval_cmd->add_option("--clean-model", clean_model,
                       "clean-trained checkpoint for the accuracy drop");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  }

  auto codec_settings = [&](Channel& ch, double& d,
                            std::vector<CoeffPos>& pos) -> bool {
    try {
      ch = parse_channel(channel);
      d = delta;
      pos = bits_per_block > 0 ? default_positions(bits_per_block)
                               : parse_positions(positions);
      return true;
    } catch (const ConfigError& e) {
      err << "error: " << e.what() << '\n';
      return false;
    }
  };

  if (embed_cmd->parsed()) {
    if (!codec_settings(embed_args.channel, embed_args.delta, embed_args.positions))
      return kValidationError;
    try {
      embed_args.payload = parse_payload(payload);
    } catch (const ConfigError& e) {
      err << "error: " << e.what() << '\n';
      return kValidationError;
    }
    return cmd_embed(embed_args, out, err);
  }
  if (extract_cmd->parsed()) {
    if (!codec_settings(extract_args.channel, extract_args.delta,
                        extract_args.positions))
      return kValidationError;
    return cmd_extract(extract_args, out, err);
  }
  if (poison_cmd->parsed()) return cmd_poison(config, out, err);
  if (train_cmd->parsed()) return cmd_train(config, out, err);
  if (eval_cmd->parsed()) {
    std::vector<fs::path> paths(models.begin(), models.end());
    return cmd_eval(config, paths, clean_model, out, err);
  }
  if (sweep_cmd->parsed()) return cmd_sweep(config, out, err);
  return kValidationError;
}

}  // namespace stegbd::cli
