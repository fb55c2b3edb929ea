#include <gtest/gtest.h>

#include <array>
#include <filesystem>
#include <string>

#include "stegbd/error.h"
#include "stegbd/image_io.h"
#include "test_support.h"

namespace stegbd {
namespace {

namespace fs = std::filesystem;

std::vector<std::uint8_t> bytes_of(const std::string& s) {
  return {s.begin(), s.end()};
}

std::vector<std::uint8_t> random_cifar_stream(std::uint64_t seed, int records) {
  Rng rng(seed);
  std::vector<std::uint8_t> s(kCifarRecordBytes * records);
  for (std::size_t i = 0; i < s.size(); ++i)
    s[i] = static_cast<std::uint8_t>(i % kCifarRecordBytes == 0 ? rng.below(10)
                                                                : rng.below(256));
  return s;
}

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("stegbd_test_" + name);
  fs::remove_all(p);
  return p;
}

TEST(Cifar, ReadsTenRecords) {
  const auto s = random_cifar_stream(1, 10);
  ASSERT_EQ(s.size(), 30730u);
  const LabeledDataset ds = read_cifar10_bin(s);
  ASSERT_EQ(ds.size(), 10u);
  EXPECT_EQ(ds.num_classes, 10);
  EXPECT_EQ(ds.items[3].image.width(), 32);
  EXPECT_EQ(ds.items[3].label, s[3 * kCifarRecordBytes]);
  // Planar layout: byte 1 + 1024 + 32*y + x is green (x, y).
  EXPECT_EQ(ds.items[0].image.plane(Channel::kGreen).at(5, 2), s[1 + 1024 + 64 + 5]);
}

TEST(Cifar, ByteExactRoundTrip) {
  const auto s = random_cifar_stream(2, 7);
  EXPECT_EQ(write_cifar10_bin(read_cifar10_bin(s)), s);
}

TEST(Cifar, Errors) {
  EXPECT_THROW(read_cifar10_bin(std::vector<std::uint8_t>(3072)), FormatError);
  auto s = random_cifar_stream(3, 2);
  s[kCifarRecordBytes] = 10;
  EXPECT_THROW(read_cifar10_bin(s), FormatError);
  LabeledDataset wrong;
  wrong.num_classes = 2;
  wrong.items.push_back({RasterImage(16, 16), 0});
  EXPECT_THROW(write_cifar10_bin(wrong), FormatError);
}

TEST(Cifar, WriteForms) {
  EXPECT_TRUE(write_cifar10_bin(LabeledDataset{{}, 10}).empty());
  LabeledDataset one{{{RasterImage(32, 32), 7}}, 10};
  const auto s = write_cifar10_bin(one);
  ASSERT_EQ(s.size(), kCifarRecordBytes);
  EXPECT_EQ(s[0], 7);
  for (std::size_t i = 1; i < s.size(); ++i) ASSERT_EQ(s[i], 0);
}

TEST(Ppm, MinimalImage) {
  std::string text = "P6\n8 8\n255\n";
  text += std::string(8 * 8 * 3, '\x10');
  text[11] = '\x01';  // R of pixel (0,0)
  text[12] = '\x02';  // G of pixel (0,0)
  const RasterImage img = read_ppm(bytes_of(text));
  EXPECT_EQ(img.width(), 8);
  EXPECT_EQ(img.plane(Channel::kRed).at(0, 0), 1);
  EXPECT_EQ(img.plane(Channel::kGreen).at(0, 0), 2);
  EXPECT_EQ(img.plane(Channel::kBlue).at(0, 0), 16);
  EXPECT_EQ(write_ppm(img), bytes_of(text));
}

TEST(Ppm, CommentsAndWhitespace) {
  std::string text = "P6 # comment\n16\t8\n# another\n255\n";
  text += std::string(16 * 8 * 3, 'a');
  const RasterImage img = read_ppm(bytes_of(text));
  EXPECT_EQ(img.width(), 16);
  EXPECT_EQ(img.height(), 8);
}

TEST(Ppm, RoundTrip) {
  const RasterImage img = testing::random_image(6, 64, 40);
  EXPECT_EQ(read_ppm(write_ppm(img)), img);
}

TEST(Ppm, Errors) {
  std::string p5 = "P5\n8 8\n255\n" + std::string(64, 'a');
  EXPECT_THROW(read_ppm(bytes_of(p5)), FormatError);
  std::string shortdata = "P6\n8 8\n255\n" + std::string(100, 'a');
  EXPECT_THROW(read_ppm(bytes_of(shortdata)), FormatError);
  std::string maxval = "P6\n8 8\n65535\n" + std::string(384, 'a');
  EXPECT_THROW(read_ppm(bytes_of(maxval)), FormatError);
  std::string odd = "P6\n10 8\n255\n" + std::string(240, 'a');
  EXPECT_THROW(read_ppm(bytes_of(odd)), DimensionError);
  EXPECT_THROW(read_ppm(bytes_of("P6")), FormatError);
}

TEST(PpmDir, RoundTrip) {
  const fs::path root = scratch_dir("ppmdir");
  const LabeledDataset ds = synth_dataset(4, 12, 3, 16, 16);
  write_ppm_dir(ds, root);
  EXPECT_TRUE(fs::exists(root / "2" / "000005.ppm"));
  const LabeledDataset back = read_ppm_dir(root);
  EXPECT_EQ(back.num_classes, 3);
  ASSERT_EQ(back.size(), ds.size());
  // Read back class by class.
  std::size_t k = 0;
  for (int label = 0; label < 3; ++label)
    for (std::size_t i = label; i < ds.size(); i += 3, ++k)
      EXPECT_EQ(back.items[k], ds.items[i]);
  fs::remove_all(root);
}

TEST(PpmDir, MissingRoot) {
  EXPECT_THROW(read_ppm_dir(scratch_dir("absent")), Error);
}

TEST(Synth, DeterministicAndBalanced) {
  const LabeledDataset a = synth_dataset(9, 30, 3, 32, 32);
  EXPECT_EQ(a, synth_dataset(9, 30, 3, 32, 32));
  EXPECT_NE(a, synth_dataset(10, 30, 3, 32, 32));
  std::array<int, 3> counts{};
  for (const auto& it : a.items) ++counts[it.label];
  EXPECT_EQ(counts, (std::array<int, 3>{10, 10, 10}));
  a.validate();
}

TEST(Synth, TopHalfIsSmooth) {
  const LabeledDataset a = synth_dataset(1, 3, 3, 32, 32);
  const ChannelPlane& p = a.items[0].image.plane(Channel::kRed);
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 8; ++x) EXPECT_EQ(p.at(x, y), p.at(0, 0));
}

// Nearest-centroid oracle: independent of the trainer, checks that the
// classes are separable.
TEST(Synth, NearestCentroidSeparates) {
  const LabeledDataset train = synth_dataset(21, 600, 6, 32, 32);
  const LabeledDataset test = synth_dataset(22, 300, 6, 32, 32);
  const std::size_t dim = 3 * 32 * 32;
  std::vector<std::vector<double>> centroid(6, std::vector<double>(dim, 0.0));
  std::vector<int> count(6, 0);
  auto flat = [&](const RasterImage& img) {
    std::vector<double> v;
    for (Channel c : kAllChannels)
      for (auto s : img.plane(c).samples()) v.push_back(s);
    return v;
  };
  for (const auto& it : train.items) {
    const auto v = flat(it.image);
    for (std::size_t d = 0; d < dim; ++d) centroid[it.label][d] += v[d];
    ++count[it.label];
  }
  for (int k = 0; k < 6; ++k)
    for (auto& c : centroid[k]) c /= count[k];
  int correct = 0;
  for (const auto& it : test.items) {
    const auto v = flat(it.image);
    int best = 0;
    double best_d = 1e300;
    for (int k = 0; k < 6; ++k) {
      double d = 0.0;
      for (std::size_t i = 0; i < dim; ++i) d += (v[i] - centroid[k][i]) * (v[i] - centroid[k][i]);
      if (d < best_d) best_d = d, best = k;
    }
    correct += best == it.label;
  }
  EXPECT_GE(correct / 300.0, 0.95);
}

TEST(Dataset, Validate) {
  LabeledDataset ds{{{RasterImage(8, 8), 3}}, 3};
  EXPECT_THROW(ds.validate(), ConfigError);
  ds.items[0].label = 0;
  ds.items.push_back({RasterImage(16, 8), 1});
  EXPECT_THROW(ds.validate(), DimensionError);
}

TEST(Manifest, SyntheticSplitsDiffer) {
  DatasetManifest m;
  m.seed = 5;
  m.count = 12;
  m.num_classes = 3;
  const LabeledDataset train = load_dataset(m);
  m.split = Split::kTest;
  const LabeledDataset test = load_dataset(m);
  EXPECT_NE(train, test);
  EXPECT_EQ(train.size(), 12u);
}

TEST(Manifest, FileSourcesAndErrors) {
  const fs::path dir = scratch_dir("manifest");
  fs::create_directories(dir);
  const auto s = random_cifar_stream(8, 3);
  write_file(dir / "train.bin", s);
  DatasetManifest m;
  m.source = DatasetSource::kCifar10Bin;
  m.path = dir / "train.bin";
  EXPECT_EQ(load_dataset(m).size(), 3u);
  m.path = dir / "missing.bin";
  EXPECT_THROW(m.validate(), ConfigError);
  EXPECT_EQ(parse_source("ppm-dir"), DatasetSource::kPpmDir);
  EXPECT_THROW(parse_source("png"), ConfigError);
  fs::remove_all(dir);
}

}  // namespace
}  // namespace stegbd
