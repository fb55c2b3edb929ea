#include "stegbd/image.h"

#include <algorithm>
#include <cctype>

#include "stegbd/error.h"

namespace stegbd {

std::string_view channel_name(Channel c) {
  switch (c) {
    case Channel::kRed:
      return "R";
    case Channel::kGreen:
      return "G";
    case Channel::kBlue:
      return "B";
  }
  return "?";
}

Channel parse_channel(std::string_view s) {
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "r" || lower == "red") return Channel::kRed;
  if (lower == "g" || lower == "green") return Channel::kGreen;
  if (lower == "b" || lower == "blue") return Channel::kBlue;
  throw ConfigError("unknown channel '" + std::string(s) + "'");
}

RasterImage::RasterImage(int width, int height)
    : planes_{ChannelPlane(width, height), ChannelPlane(width, height),
              ChannelPlane(width, height)} {}

RasterImage::RasterImage(std::array<ChannelPlane, 3> planes)
    : planes_(std::move(planes)) {
  for (const auto& p : planes_) {
    if (p.width() != planes_[0].width() || p.height() != planes_[0].height())
      throw DimensionError("channel planes differ in size");
  }
  if (planes_[0].width() == 0) throw DimensionError("empty image");
}

}  // namespace stegbd
