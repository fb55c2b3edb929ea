#include "stegbd/dct.h"

#include <cmath>
#include <numbers>
#include <string>

#include "stegbd/error.h"

namespace stegbd {
namespace {

void check_plane_dims(int width, int height) {
  if (width <= 0 || height <= 0 || width % kBlockSize != 0 ||
      height % kBlockSize != 0) {
    throw DimensionError("plane dimensions " + std::to_string(width) + "x" +
                         std::to_string(height) +
                         " are not positive multiples of 8");
  }
}

// basis[a][x] = theta(x, a) / 2. The 1/4 of the transform splits evenly over
// the two separable passes.
struct Basis {
  double m[kBlockSize][kBlockSize];
  Basis() {
    for (int a = 0; a < kBlockSize; ++a)
      for (int x = 0; x < kBlockSize; ++x) m[a][x] = 0.5 * theta(x, a);
  }
};

const Basis& basis() {
  static const Basis b;
  return b;
}

}  // namespace

ChannelPlane::ChannelPlane(int width, int height)
    : width_(width), height_(height) {
  check_plane_dims(width, height);
  samples_.assign(static_cast<std::size_t>(width) * height, 0);
}

ChannelPlane::ChannelPlane(int width, int height,
                           std::vector<std::uint8_t> samples)
    : width_(width), height_(height), samples_(std::move(samples)) {
  check_plane_dims(width, height);
  if (samples_.size() != static_cast<std::size_t>(width) * height) {
    throw DimensionError("plane sample count " +
                         std::to_string(samples_.size()) + " != " +
                         std::to_string(width) + "x" + std::to_string(height));
  }
}

double theta(int u, int v) {
  if (v == 0) return 1.0 / std::numbers::sqrt2;
  return std::cos((2.0 * u + 1.0) * v * std::numbers::pi / 16.0);
}

CoeffBlock fdct(const PixelBlock& block) {
  const auto& b = basis().m;
  // rows[a][y] = sum_x b[a][x] g(x, y)
  double rows[kBlockSize][kBlockSize];
  for (int a = 0; a < kBlockSize; ++a) {
    for (int y = 0; y < kBlockSize; ++y) {
      double s = 0.0;
      for (int x = 0; x < kBlockSize; ++x) s += b[a][x] * block.at(x, y);
      rows[a][y] = s;
    }
  }
  CoeffBlock out;
  for (int a = 0; a < kBlockSize; ++a) {
    for (int c = 0; c < kBlockSize; ++c) {
      double s = 0.0;
      for (int y = 0; y < kBlockSize; ++y) s += b[c][y] * rows[a][y];
      out.at(a, c) = s;
    }
  }
  return out;
}

PixelBlock idct(const CoeffBlock& coeffs) {
  const auto& b = basis().m;
  // cols[x][c] = sum_a b[a][x] J(a, c)
  double cols[kBlockSize][kBlockSize];
  for (int x = 0; x < kBlockSize; ++x) {
    for (int c = 0; c < kBlockSize; ++c) {
      double s = 0.0;
      for (int a = 0; a < kBlockSize; ++a) s += b[a][x] * coeffs.at(a, c);
      cols[x][c] = s;
    }
  }
  PixelBlock out;
  for (int x = 0; x < kBlockSize; ++x) {
    for (int y = 0; y < kBlockSize; ++y) {
      double s = 0.0;
      for (int c = 0; c < kBlockSize; ++c) s += b[c][y] * cols[x][c];
      out.at(x, y) = s;
    }
  }
  return out;
}

PixelBlock extract_block(const ChannelPlane& plane, int index) {
  const int bx = index % plane.blocks_x();
  const int by = index / plane.blocks_x();
  PixelBlock out;
  for (int y = 0; y < kBlockSize; ++y)
    for (int x = 0; x < kBlockSize; ++x)
      out.at(x, y) = plane.at(bx * kBlockSize + x, by * kBlockSize + y);
  return out;
}

std::uint8_t round_clamp_sample(double v) {
  double r = std::nearbyint(v);
  if (r < 0.0) return 0;
  if (r > 255.0) return 255;
  return static_cast<std::uint8_t>(r);
}

void store_block(ChannelPlane& plane, int index, const PixelBlock& block) {
  const int bx = index % plane.blocks_x();
  const int by = index / plane.blocks_x();
  for (int y = 0; y < kBlockSize; ++y)
    for (int x = 0; x < kBlockSize; ++x)
      plane.at(bx * kBlockSize + x, by * kBlockSize + y) =
          round_clamp_sample(block.at(x, y));
}

std::vector<PixelBlock> partition(const ChannelPlane& plane) {
  check_plane_dims(plane.width(), plane.height());
  std::vector<PixelBlock> blocks;
  blocks.reserve(plane.block_count());
  for (int i = 0; i < plane.block_count(); ++i)
    blocks.push_back(extract_block(plane, i));
  return blocks;
}

ChannelPlane reassemble(std::span<const PixelBlock> blocks, int width,
                        int height) {
  ChannelPlane plane(width, height);
  if (blocks.size() != static_cast<std::size_t>(plane.block_count())) {
    throw DimensionError("expected " + std::to_string(plane.block_count()) +
                         " blocks for " + std::to_string(width) + "x" +
                         std::to_string(height) + ", got " +
                         std::to_string(blocks.size()));
  }
  for (int i = 0; i < plane.block_count(); ++i) store_block(plane, i, blocks[i]);
  return plane;
}

}  // namespace stegbd
