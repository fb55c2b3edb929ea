#ifndef STEGBD_IMAGE_IO_H_
#define STEGBD_IMAGE_IO_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "stegbd/image.h"

namespace stegbd {

struct LabeledImage {
  RasterImage image;
  int label = 0;
  bool operator==(const LabeledImage&) const = default;
};

struct LabeledDataset {
  std::vector<LabeledImage> items;
  int num_classes = 0;

  std::size_t size() const { return items.size(); }
  bool empty() const { return items.empty(); }

  // Throws ConfigError on a label outside [0, num_classes) and
  // DimensionError if image sizes differ.
  void validate() const;

  bool operator==(const LabeledDataset&) const = default;
};

inline constexpr std::size_t kCifarRecordBytes = 1 + 3 * 32 * 32;
inline constexpr int kCifarSide = 32;
inline constexpr int kCifarClasses = 10;

// Records of 1 label byte followed by the R, G and B planes (row-major
// 32x32 each). Throws FormatError on a length that is not a multiple of 3073
// or a label byte > 9.
LabeledDataset read_cifar10_bin(std::span<const std::uint8_t> bytes);

// Inverse of read_cifar10_bin. Throws FormatError unless every image is
// 32x32 and num_classes <= 10.
std::vector<std::uint8_t> write_cifar10_bin(const LabeledDataset& ds);

// Binary P6, maxval 255. Header comments are accepted on read; writes emit
// the canonical "P6\n<w> <h>\n255\n" header. Throws FormatError on a bad
// header or truncated data, DimensionError if a side is not a multiple of 8.
RasterImage read_ppm(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> write_ppm(const RasterImage& image);

// <root>/<class_index>/<name>.ppm. Items are read class by class, file names
// sorted within a class; num_classes is one past the largest class index.
LabeledDataset read_ppm_dir(const std::filesystem::path& root);
// Writes item i as <root>/<label>/<i, zero padded to 6>.ppm.
void write_ppm_dir(const LabeledDataset& ds, const std::filesystem::path& root);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path,
                std::span<const std::uint8_t> bytes);

// Generator parameters for the synthetic dataset.
inline constexpr int kSynthNoiseAmplitude = 24;
inline constexpr int kSynthBaseMin = 56;
inline constexpr int kSynthBaseMax = 199;

// Seeded synthetic dataset. Item i has label i mod num_classes. Each class
// owns a solid-colour block pattern (one colour per 8x8 block and channel,
// fixed by the class index alone so train and test splits share it). The
// top half of the block rows is left smooth; the bottom half gets uniform
// integer noise in [-24, 24] per sample, clamped to [0, 255].
LabeledDataset synth_dataset(std::uint64_t seed, std::size_t n,
                             int num_classes, int width, int height);

enum class DatasetSource { kCifar10Bin, kPpmDir, kSynthetic };
enum class Split { kTrain, kTest };

std::string_view source_name(DatasetSource s);
DatasetSource parse_source(std::string_view s);

struct DatasetManifest {
  DatasetSource source = DatasetSource::kSynthetic;
  Split split = Split::kTrain;
  std::filesystem::path path;  // file-backed sources
  // synthetic source
  std::uint64_t seed = 0;
  std::size_t count = 0;
  int num_classes = 0;
  int width = 32;
  int height = 32;

  // Throws ConfigError if a file-backed path does not exist or synthetic
  // parameters are invalid.
  void validate() const;
};

LabeledDataset load_dataset(const DatasetManifest& manifest);

}  // namespace stegbd

#endif  // STEGBD_IMAGE_IO_H_
