#ifndef STEGBD_TESTS_TEST_SUPPORT_H_
#define STEGBD_TESTS_TEST_SUPPORT_H_

#include <cmath>
#include <cstdint>
#include <numbers>

#include "stegbd/dct.h"
#include "stegbd/image.h"
#include "stegbd/rng.h"

namespace stegbd::testing {

inline RasterImage random_image(std::uint64_t seed, int w = 32, int h = 32) {
  Rng rng(seed);
  RasterImage img(w, h);
  for (Channel c : kAllChannels)
    for (auto& s : img.plane(c).samples())
      s = static_cast<std::uint8_t>(rng.below(256));
  return img;
}

inline PixelBlock random_block(Rng& rng) {
  PixelBlock b;
  for (auto& v : b.values) v = static_cast<double>(rng.below(256));
  return b;
}

// Direct quadruple-loop transform, written independently of the library's
// separable implementation.
inline CoeffBlock naive_fdct(const PixelBlock& g) {
  CoeffBlock out;
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) {
      double sum = 0.0;
      for (int x = 0; x < 8; ++x)
        for (int y = 0; y < 8; ++y) {
          const double tx = a == 0 ? std::numbers::sqrt2 / 2
                                   : std::cos((2 * x + 1) * a * std::numbers::pi / 16);
          const double ty = b == 0 ? std::numbers::sqrt2 / 2
                                   : std::cos((2 * y + 1) * b * std::numbers::pi / 16);
          sum += g.at(x, y) * tx * ty;
        }
      out.at(a, b) = sum / 4.0;
    }
  return out;
}

}  // namespace stegbd::testing

#endif  // STEGBD_TESTS_TEST_SUPPORT_H_
