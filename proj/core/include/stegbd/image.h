#ifndef STEGBD_IMAGE_H_
#define STEGBD_IMAGE_H_

#include <array>
#include <string>
#include <string_view>

#include "stegbd/dct.h"

namespace stegbd {

enum class Channel { kRed = 0, kGreen = 1, kBlue = 2 };

inline constexpr std::array<Channel, 3> kAllChannels = {
    Channel::kRed, Channel::kGreen, Channel::kBlue};

inline int index_of(Channel c) { return static_cast<int>(c); }

// "R", "G" or "B".
std::string_view channel_name(Channel c);

// Accepts R/G/B and red/green/blue in any case; throws ConfigError otherwise.
Channel parse_channel(std::string_view s);

// Planar RGB image; all three planes share the same geometry.
class RasterImage {
 public:
  RasterImage() = default;
  // Black image. Throws DimensionError unless sides are multiples of 8.
  RasterImage(int width, int height);
  // Throws DimensionError if the planes disagree in size.
  explicit RasterImage(std::array<ChannelPlane, 3> planes);

  int width() const { return planes_[0].width(); }
  int height() const { return planes_[0].height(); }

  const ChannelPlane& plane(Channel c) const { return planes_[index_of(c)]; }
  ChannelPlane& plane(Channel c) { return planes_[index_of(c)]; }

  bool operator==(const RasterImage&) const = default;

 private:
  std::array<ChannelPlane, 3> planes_;
};

}  // namespace stegbd

#endif  // STEGBD_IMAGE_H_
