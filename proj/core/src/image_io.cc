#include "stegbd/image_io.h"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <map>
#include <string>

#include "stegbd/error.h"
#include "stegbd/rng.h"

namespace stegbd {
namespace fs = std::filesystem;

void LabeledDataset::validate() const {
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto& it = items[i];
    if (it.label < 0 || it.label >= num_classes)
      throw ConfigError("item " + std::to_string(i) + " has label " +
                        std::to_string(it.label) + " outside [0, " +
                        std::to_string(num_classes) + ")");
    if (it.image.width() != items[0].image.width() ||
        it.image.height() != items[0].image.height())
      throw DimensionError("dataset images differ in size");
  }
}

LabeledDataset read_cifar10_bin(std::span<const std::uint8_t> bytes) {
  if (bytes.size() % kCifarRecordBytes != 0) {
    throw FormatError("CIFAR-10 stream of " + std::to_string(bytes.size()) +
                      " bytes is not a whole number of 3073-byte records");
  }
  constexpr std::size_t kPlane = kCifarSide * kCifarSide;
  LabeledDataset ds;
  ds.num_classes = kCifarClasses;
  const std::size_t n = bytes.size() / kCifarRecordBytes;
  ds.items.reserve(n);
  for (std::size_t r = 0; r < n; ++r) {
    auto rec = bytes.subspan(r * kCifarRecordBytes, kCifarRecordBytes);
    if (rec[0] >= kCifarClasses)
      throw FormatError("record " + std::to_string(r) + " has label byte " +
                        std::to_string(rec[0]));
    std::array<ChannelPlane, 3> planes;
    for (int c = 0; c < 3; ++c) {
      auto src = rec.subspan(1 + c * kPlane, kPlane);
      planes[c] = ChannelPlane(kCifarSide, kCifarSide,
                               std::vector<std::uint8_t>(src.begin(), src.end()));
    }
    ds.items.push_back({RasterImage(std::move(planes)), rec[0]});
  }
  return ds;
}

std::vector<std::uint8_t> write_cifar10_bin(const LabeledDataset& ds) {
  if (ds.num_classes > kCifarClasses)
    throw FormatError("CIFAR-10 format holds at most 10 classes");
  std::vector<std::uint8_t> out;
  out.reserve(ds.size() * kCifarRecordBytes);
  for (const auto& it : ds.items) {
    if (it.image.width() != kCifarSide || it.image.height() != kCifarSide)
      throw FormatError("CIFAR-10 images must be 32x32");
    if (it.label < 0 || it.label >= kCifarClasses)
      throw FormatError("label does not fit the CIFAR-10 format");
    out.push_back(static_cast<std::uint8_t>(it.label));
    for (Channel c : kAllChannels) {
      auto s = it.image.plane(c).samples();
      out.insert(out.end(), s.begin(), s.end());
    }
  }
  return out;
}

namespace {

class HeaderReader {
 public:
  explicit HeaderReader(std::span<const std::uint8_t> b) : b_(b) {}

  void skip_space_and_comments() {
    while (pos_ < b_.size()) {
      if (b_[pos_] == '#') {
        while (pos_ < b_.size() && b_[pos_] != '\n') ++pos_;
      } else if (std::isspace(b_[pos_])) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  long number() {
    skip_space_and_comments();
    long v = 0;
    std::size_t start = pos_;
    while (pos_ < b_.size() && std::isdigit(b_[pos_])) {
      v = v * 10 + (b_[pos_] - '0');
      if (v > 1'000'000) throw FormatError("PPM header value too large");
      ++pos_;
    }
    if (pos_ == start) throw FormatError("PPM header: expected a number");
    return v;
  }

  std::size_t pos() const { return pos_; }
  void advance() { ++pos_; }
  bool at_space() const { return pos_ < b_.size() && std::isspace(b_[pos_]); }

 private:
  std::span<const std::uint8_t> b_;
  std::size_t pos_ = 0;
};

}  // namespace

RasterImage read_ppm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '6')
    throw FormatError("not a binary PPM (magic must be P6)");
  if (bytes.size() < 3 || !std::isspace(bytes[2]))
    throw FormatError("PPM magic must be followed by whitespace");
  HeaderReader h(bytes.subspan(2));
  const long width = h.number();
  const long height = h.number();
  const long maxval = h.number();
  if (maxval != 255)
    throw FormatError("PPM maxval " + std::to_string(maxval) +
                      " unsupported (need 255)");
  if (!h.at_space()) throw FormatError("PPM header not terminated");
  h.advance();
  if (width <= 0 || height <= 0) throw FormatError("PPM has zero size");
  if (width % kBlockSize != 0 || height % kBlockSize != 0)
    throw DimensionError("PPM size " + std::to_string(width) + "x" +
                         std::to_string(height) +
                         " is not a multiple of 8");
  const std::size_t offset = 2 + h.pos();
  const std::size_t pixels = static_cast<std::size_t>(width) * height;
  if (bytes.size() - offset != pixels * 3)
    throw FormatError("PPM pixel data is " +
                      std::to_string(bytes.size() - offset) +
                      " bytes, expected " + std::to_string(pixels * 3));
  RasterImage img(static_cast<int>(width), static_cast<int>(height));
  for (int c = 0; c < 3; ++c) {
    auto dst = img.plane(kAllChannels[c]).samples();
    for (std::size_t i = 0; i < pixels; ++i) dst[i] = bytes[offset + 3 * i + c];
  }
  return img;
}

std::vector<std::uint8_t> write_ppm(const RasterImage& image) {
  const std::string header = "P6\n" + std::to_string(image.width()) + " " +
                             std::to_string(image.height()) + "\n255\n";
  const std::size_t pixels =
      static_cast<std::size_t>(image.width()) * image.height();
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.resize(header.size() + pixels * 3);
  for (int c = 0; c < 3; ++c) {
    auto src = image.plane(kAllChannels[c]).samples();
    for (std::size_t i = 0; i < pixels; ++i)
      out[header.size() + 3 * i + c] = src[i];
  }
  return out;
}

std::vector<std::uint8_t> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const fs::path& path, std::span<const std::uint8_t> bytes) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw FormatError("write failed: " + path.string());
}

LabeledDataset read_ppm_dir(const fs::path& root) {
  if (!fs::is_directory(root))
    throw FormatError(root.string() + " is not a directory");
  std::map<int, std::vector<fs::path>> by_class;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (!entry.is_directory()) continue;
    const std::string name = entry.path().filename().string();
    if (name.empty() || !std::all_of(name.begin(), name.end(), ::isdigit))
      throw FormatError("class directory '" + name + "' is not an index");
    const int label = std::stoi(name);
    auto& files = by_class[label];
    for (const auto& f : fs::directory_iterator(entry.path()))
      if (f.is_regular_file() && f.path().extension() == ".ppm")
        files.push_back(f.path());
    std::sort(files.begin(), files.end());
  }
  LabeledDataset ds;
  ds.num_classes = by_class.empty() ? 0 : by_class.rbegin()->first + 1;
  for (const auto& [label, files] : by_class)
    for (const auto& f : files) ds.items.push_back({read_ppm(read_file(f)), label});
  ds.validate();
  return ds;
}

void write_ppm_dir(const LabeledDataset& ds, const fs::path& root) {
  for (std::size_t i = 0; i < ds.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "%06zu.ppm", i);
    write_file(root / std::to_string(ds.items[i].label) / name,
               write_ppm(ds.items[i].image));
  }
}

LabeledDataset synth_dataset(std::uint64_t seed, std::size_t n,
                             int num_classes, int width, int height) {
  if (num_classes < 2) throw ConfigError("synthetic data needs >= 2 classes");
  RasterImage shape(width, height);  // validates geometry
  const int bx = width / kBlockSize;
  const int by = height / kBlockSize;
  const int smooth_rows = by / 2;

  std::vector<RasterImage> bases;
  bases.reserve(num_classes);
  for (int k = 0; k < num_classes; ++k) {
    Rng rng(derive_seed(static_cast<std::uint64_t>(k), "synth.base"));
    RasterImage base(width, height);
    for (Channel c : kAllChannels) {
      ChannelPlane& p = base.plane(c);
      for (int j = 0; j < by; ++j) {
        for (int i = 0; i < bx; ++i) {
          const auto v = static_cast<std::uint8_t>(
              rng.between(kSynthBaseMin, kSynthBaseMax));
          for (int y = 0; y < kBlockSize; ++y)
            for (int x = 0; x < kBlockSize; ++x)
              p.at(i * kBlockSize + x, j * kBlockSize + y) = v;
        }
      }
    }
    bases.push_back(std::move(base));
  }

  Rng noise(derive_seed(seed, "synth.noise"));
  LabeledDataset ds;
  ds.num_classes = num_classes;
  ds.items.reserve(n);
  const int textured_from = smooth_rows * kBlockSize;
  for (std::size_t i = 0; i < n; ++i) {
    const int label = static_cast<int>(i % num_classes);
    RasterImage img = bases[label];
    for (Channel c : kAllChannels) {
      ChannelPlane& p = img.plane(c);
      for (int y = textured_from; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
          const auto v = p.at(x, y) + noise.between(-kSynthNoiseAmplitude,
                                                    kSynthNoiseAmplitude);
          p.at(x, y) = static_cast<std::uint8_t>(std::clamp<std::int64_t>(v, 0, 255));
        }
      }
    }
    ds.items.push_back({std::move(img), label});
  }
  return ds;
}

std::string_view source_name(DatasetSource s) {
  switch (s) {
    case DatasetSource::kCifar10Bin:
      return "cifar10-bin";
    case DatasetSource::kPpmDir:
      return "ppm-dir";
    case DatasetSource::kSynthetic:
      return "synthetic";
  }
  return "?";
}

DatasetSource parse_source(std::string_view s) {
  if (s == "cifar10-bin") return DatasetSource::kCifar10Bin;
  if (s == "ppm-dir") return DatasetSource::kPpmDir;
  if (s == "synthetic") return DatasetSource::kSynthetic;
  throw ConfigError("unknown dataset source '" + std::string(s) + "'");
}

void DatasetManifest::validate() const {
  if (source == DatasetSource::kSynthetic) {
    if (num_classes < 2) throw ConfigError("synthetic: classes must be >= 2");
    if (count == 0) throw ConfigError("synthetic: count must be > 0");
    if (width <= 0 || height <= 0 || width % kBlockSize != 0 ||
        height % kBlockSize != 0)
      throw ConfigError("synthetic: width/height must be multiples of 8");
    return;
  }
  if (path.empty() || !fs::exists(path))
    throw ConfigError("dataset path '" + path.string() + "' does not exist");
}

LabeledDataset load_dataset(const DatasetManifest& m) {
  m.validate();
  switch (m.source) {
    case DatasetSource::kCifar10Bin:
      return read_cifar10_bin(read_file(m.path));
    case DatasetSource::kPpmDir:
      return read_ppm_dir(m.path);
    case DatasetSource::kSynthetic:
      return synth_dataset(
          derive_seed(m.seed, m.split == Split::kTrain ? "split.train"
                                                       : "split.test"),
          m.count, m.num_classes, m.width, m.height);
  }
  throw ConfigError("unreachable dataset source");
}

}  // namespace stegbd
