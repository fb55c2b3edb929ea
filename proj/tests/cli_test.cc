#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "commands.h"
#include "run_config.h"
#include "stegbd/error.h"
#include "stegbd/image_io.h"
#include "stegbd/metrics.h"
#include "stegbd/mlp.h"
#include "test_support.h"

namespace stegbd::cli {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("stegbd_cli_" + std::string(::testing::UnitTest::GetInstance()
                                            ->current_test_info()
                                            ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write_text(const std::string& name, const std::string& text) {
    write_file(dir_ / name, std::vector<std::uint8_t>(text.begin(), text.end()));
    return dir_ / name;
  }

  int run(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    std::vector<char*> argv;
    static std::string prog = "stegbd";
    argv.push_back(prog.data());
    for (auto& a : args) argv.push_back(a.data());
    return run_cli(static_cast<int>(argv.size()), argv.data(), out_, err_);
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

TEST(RunConfig, ParsesEverything) {
  const RunConfig c = parse_run_config(R"(# experiment
seed = 11
dataset.source = synthetic
dataset.train_count = 60
dataset.test_count = 30
dataset.classes = 4
attack.mode = n-to-one
attack.channels = R,B
attack.targets = 3
attack.payloads = hex:abcd, text:ZZ
attack.delta = 60
attack.bits_per_block = 2
attack.ratio = 0.05
train.hidden = 16
train.epochs = 2
train.on = clean
output.model = m.bin
)");
  EXPECT_EQ(c.seed, 11u);
  EXPECT_EQ(c.train_data.count, 60u);
  EXPECT_EQ(c.test_data.split, Split::kTest);
  EXPECT_EQ(c.train_data.num_classes, 4);
  ASSERT_TRUE(c.has_attack);
  EXPECT_EQ(c.attack.mode, AttackMode::kNtoOne);
  EXPECT_EQ(c.attack.channels, (std::vector<Channel>{Channel::kRed, Channel::kBlue}));
  EXPECT_EQ(c.attack.targets, std::vector<int>{3});
  EXPECT_EQ(c.attack.spec_for(Channel::kRed).payload, (std::vector<std::uint8_t>{0xab, 0xcd}));
  EXPECT_EQ(c.attack.spec_for(Channel::kBlue).payload, (std::vector<std::uint8_t>{'Z', 'Z'}));
  EXPECT_EQ(c.attack.spec_for(Channel::kBlue).positions, default_positions(2));
  EXPECT_DOUBLE_EQ(c.attack.spec_for(Channel::kBlue).delta, 60.0);
  EXPECT_DOUBLE_EQ(c.attack.injection_ratio, 0.05);
  EXPECT_EQ(c.train.hidden, 16);
  EXPECT_FALSE(c.train_on_poisoned);
  EXPECT_EQ(c.output_model, "m.bin");
}

TEST(RunConfig, DefaultsAndSeedDerivation) {
  const RunConfig a = parse_run_config("seed = 1\nattack.mode = n-to-n\n");
  const RunConfig b = parse_run_config("seed = 2\nattack.mode = n-to-n\n");
  EXPECT_EQ(a.attack.targets, (std::vector<int>{0, 1, 2}));
  EXPECT_DOUBLE_EQ(a.attack.spec_for(Channel::kRed).delta, kDefaultAttackDelta);
  EXPECT_NE(a.attack.seed, b.attack.seed);
  EXPECT_NE(a.train.seed, b.train.seed);
  EXPECT_NE(a.train_data.seed, b.train_data.seed);
  EXPECT_FALSE(parse_run_config("").has_attack);
}

TEST(RunConfig, Errors) {
  EXPECT_THROW(parse_run_config("bogus = 1\n"), ConfigError);
  EXPECT_THROW(parse_run_config("seed = 1\nseed = 2\n"), ConfigError);
  EXPECT_THROW(parse_run_config("seed 1\n"), ConfigError);
  EXPECT_THROW(parse_run_config("seed = -4\n"), ConfigError);
  EXPECT_THROW(parse_run_config("attack.ratio = 0.1\n"), ConfigError);
  EXPECT_THROW(parse_run_config("attack.mode = n-to-n\nattack.targets = 0,0,1\n"), ConfigError);
  EXPECT_THROW(parse_run_config("attack.mode = n-to-n\nattack.ratio = abc\n"), ConfigError);
  EXPECT_THROW(parse_run_config("train.lr = 0\n"), ConfigError);
  EXPECT_THROW(load_run_config("/nonexistent/run.cfg"), Error);
  EXPECT_EQ(split_list(" a, b ,c"), (std::vector<std::string>{"a", "b", "c"}));
}

TEST_F(CliTest, EmbedExtractRoundTripPpm) {
  write_file(dir_ / "in.ppm", write_ppm(stegbd::testing::random_image(1)));
  const std::string in = (dir_ / "in.ppm").string(), out = (dir_ / "out.ppm").string();
  ASSERT_EQ(run({"embed", "--in", in, "--out", out, "--channel", "G", "--payload", "hex:dead"}), 0)
      << err_.str();
  EXPECT_NE(out_.str().find("psnr"), std::string::npos);
  ASSERT_EQ(run({"extract", "--in", out, "--channel", "G", "--length", "2"}), 0);
  EXPECT_EQ(out_.str(), "dead\n");
  ASSERT_EQ(run({"extract", "--in", out, "--channel", "G", "--length", "2"}), 0);
  EXPECT_EQ(out_.str(), "dead\n");
}

TEST_F(CliTest, EmbedCifarRecordKeepsLabel) {
  LabeledDataset one{{{stegbd::testing::random_image(2), 6}}, 10};
  write_file(dir_ / "in.bin", write_cifar10_bin(one));
  const std::string in = (dir_ / "in.bin").string(), out = (dir_ / "out.bin").string();
  ASSERT_EQ(run({"embed", "--in", in, "--out", out, "--bits-per-block", "2",
                 "--payload", "text:ABCD"}),
            0)
      << err_.str();
  const LabeledDataset back = read_cifar10_bin(read_file(out));
  EXPECT_EQ(back.items[0].label, 6);
  ASSERT_EQ(run({"extract", "--in", out, "--bits-per-block", "2", "--length", "4"}), 0);
  EXPECT_EQ(out_.str(), "41424344\n");
}

TEST_F(CliTest, ExitCodes) {
  write_file(dir_ / "in.ppm", write_ppm(stegbd::testing::random_image(3)));
  const std::string in = (dir_ / "in.ppm").string(), out = (dir_ / "o.ppm").string();
  EXPECT_EQ(run({"embed", "--in", in, "--out", out, "--payload", "hex:010203"}), 2);
  EXPECT_NE(err_.str().find("16 bits"), std::string::npos);
  EXPECT_EQ(run({"embed", "--in", (dir_ / "none.ppm").string(), "--out", out,
                 "--payload", "x"}),
            2);
  EXPECT_EQ(run({"extract", "--in", in, "--length", "3"}), 1);
  EXPECT_EQ(run({"embed", "--in", in, "--out", out, "--payload", "hex:zz"}), 1);
  EXPECT_EQ(run({"embed", "--in", in, "--out", out, "--payload", "x", "--channel", "Q"}), 1);
  EXPECT_EQ(run({"embed", "--in", in, "--out", out, "--payload", "x", "--delta", "-1"}), 1);
  EXPECT_EQ(run({"frobnicate"}), 1);
  EXPECT_EQ(run({}), 1);
  EXPECT_EQ(run({"--help"}), 0);
  EXPECT_NE(out_.str().find("sweep"), std::string::npos);
  EXPECT_EQ(run({"train", (dir_ / "missing.cfg").string()}), 2);
  const auto bad = write_text("bad.cfg", "seed = x\n");
  EXPECT_EQ(run({"train", bad.string()}), 1);
  const auto no_attack = write_text("plain.cfg", "seed = 1\n");
  EXPECT_EQ(run({"poison", no_attack.string()}), 1);
  EXPECT_EQ(run({"sweep", no_attack.string()}), 1);
}

TEST_F(CliTest, PoisonTrainEvalPipeline) {
  const std::string base =
      "seed = 4\n"
      "dataset.train_count = 60\n"
      "dataset.test_count = 30\n"
      "dataset.classes = 3\n"
      "attack.mode = n-to-n\n"
      "train.hidden = 16\n"
      "train.epochs = 3\n";
  const auto cfg = write_text(
      "run.cfg", base + "output.dataset = " + (dir_ / "poisoned").string() +
                     "\noutput.format = ppm-dir\n" + "output.model = " +
                     (dir_ / "m.bin").string() + "\noutput.loss_log = " +
                     (dir_ / "loss.csv").string() + "\n");

  ASSERT_EQ(run({"poison", cfg.string()}), 0) << err_.str();
  const auto poison_lines = parse_data_lines(out_.str());
  ASSERT_FALSE(poison_lines.empty());
  EXPECT_EQ(poison_lines[0].metric, "candidates");
  EXPECT_EQ(poison_lines[0].value, 6.0);
  const LabeledDataset poisoned = read_ppm_dir(dir_ / "poisoned");
  EXPECT_EQ(poisoned.size(), 60u + 18u);

  ASSERT_EQ(run({"train", cfg.string()}), 0) << err_.str();
  const auto model_bytes = read_file(dir_ / "m.bin");
  const auto log = read_file(dir_ / "loss.csv");
  const std::string log_text(log.begin(), log.end());
  EXPECT_EQ(log_text.rfind("epoch,loss\n", 0), 0u);
  EXPECT_EQ(std::count(log_text.begin(), log_text.end(), '\n'), 4);

  // Re-running is bit-identical.
  ASSERT_EQ(run({"train", cfg.string()}), 0);
  EXPECT_EQ(read_file(dir_ / "m.bin"), model_bytes);

  const std::string m = (dir_ / "m.bin").string();
  ASSERT_EQ(run({"eval", cfg.string(), "--model", m, "--model", m}), 0) << err_.str();
  const auto eval_lines = parse_data_lines(out_.str());
  int asr_lines = 0;
  for (const auto& l : eval_lines) {
    if (l.metric == "asr") {
      ++asr_lines;
      EXPECT_GE(l.value, 0.0);
      EXPECT_LE(l.value, 1.0);
    }
  }
  EXPECT_EQ(asr_lines, 3);
  EXPECT_NE(out_.str().find("trigger"), std::string::npos);
  EXPECT_EQ(run({"eval", cfg.string(), "--model", (dir_ / "none.bin").string()}), 2);
}

TEST_F(CliTest, SweepEmitsRowPerRatio) {
  const auto cfg = write_text("sweep.cfg",
                              "seed = 2\n"
                              "dataset.train_count = 60\n"
                              "dataset.test_count = 30\n"
                              "dataset.classes = 3\n"
                              "attack.mode = n-to-one\n"
                              "attack.ratios = 0.05, 0.1\n"
                              "train.hidden = 8\n"
                              "train.epochs = 2\n");
  ASSERT_EQ(run({"sweep", cfg.string()}), 0) << err_.str();
  int clean = 0;
  for (const auto& l : parse_data_lines(out_.str())) clean += l.metric == "clean_accuracy";
  EXPECT_EQ(clean, 2);
}

}  // namespace
}  // namespace stegbd::cli
