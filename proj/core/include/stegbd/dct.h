#ifndef STEGBD_DCT_H_
#define STEGBD_DCT_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace stegbd {

inline constexpr int kBlockSize = 8;
inline constexpr int kBlockArea = kBlockSize * kBlockSize;

struct SpatialDomain {};
struct FrequencyDomain {};

// An 8x8 grid of reals. Entry (i, j) is the i-th column, j-th row; for a
// PixelBlock that is pixel (x, y), for a CoeffBlock frequency (alpha, beta)
// where alpha pairs with x and beta with y.
template <typename Domain>
struct Block8 {
  std::array<double, kBlockArea> values{};

  double& at(int i, int j) { return values[j * kBlockSize + i]; }
  double at(int i, int j) const { return values[j * kBlockSize + i]; }

  bool operator==(const Block8&) const = default;
};

using PixelBlock = Block8<SpatialDomain>;
using CoeffBlock = Block8<FrequencyDomain>;

// One 8-bit colour channel. Width and height are multiples of 8.
class ChannelPlane {
 public:
  ChannelPlane() = default;
  // Zero-filled plane. Throws DimensionError unless both sides are positive
  // multiples of 8.
  ChannelPlane(int width, int height);
  ChannelPlane(int width, int height, std::vector<std::uint8_t> samples);

  int width() const { return width_; }
  int height() const { return height_; }
  int blocks_x() const { return width_ / kBlockSize; }
  int blocks_y() const { return height_ / kBlockSize; }
  int block_count() const { return blocks_x() * blocks_y(); }

  std::uint8_t& at(int x, int y) { return samples_[y * width_ + x]; }
  std::uint8_t at(int x, int y) const { return samples_[y * width_ + x]; }

  std::span<const std::uint8_t> samples() const { return samples_; }
  std::span<std::uint8_t> samples() { return samples_; }

  bool operator==(const ChannelPlane&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> samples_;
};

// DCT coefficient-matrix entry: 1/sqrt(2) for v == 0, else
// cos((2u+1) v pi / 16). u is the spatial index, v the frequency index.
double theta(int u, int v);

// Forward 8x8 DCT,
//   J(a, b) = 1/4 sum_x sum_y g(x, y) theta(x, a) theta(y, b).
// This normalisation is orthonormal.
CoeffBlock fdct(const PixelBlock& block);

// Exact inverse of fdct (sums over the frequency indices).
PixelBlock idct(const CoeffBlock& coeffs);

// Splits a plane into its 8x8 blocks in row-major block order: block i covers
// columns 8*(i mod bx) .. +7 and rows 8*(i / bx) .. +7.
std::vector<PixelBlock> partition(const ChannelPlane& plane);

// Inverse of partition. Real values are rounded to nearest and clamped to
// [0, 255]. Throws DimensionError if the block count does not match.
ChannelPlane reassemble(std::span<const PixelBlock> blocks, int width,
                        int height);

// Copies block `index` of `plane` (same geometry as partition).
PixelBlock extract_block(const ChannelPlane& plane, int index);

// Writes `block` into `plane` at `index` with reassemble's rounding rule.
void store_block(ChannelPlane& plane, int index, const PixelBlock& block);

std::uint8_t round_clamp_sample(double v);

}  // namespace stegbd

#endif  // STEGBD_DCT_H_
