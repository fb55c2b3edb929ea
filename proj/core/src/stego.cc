#include "stegbd/stego.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "stegbd/error.h"

namespace stegbd {
namespace {

// Tolerance, in units of delta, under which two quantizer candidates count
// as equidistant.
constexpr double kTieEps = 1e-9;

// Re-embedding passes allowed for the block selection to settle.
constexpr int kMaxPasses = 8;

constexpr std::array<CoeffPos, 8> kMidFrequency = {{
    {3, 4}, {4, 3}, {2, 5}, {5, 2}, {3, 3}, {4, 4}, {2, 4}, {4, 2}}};

long long parity(long long q) { return ((q % 2) + 2) % 2; }

std::size_t blocks_needed(std::size_t bits, int bits_per_block) {
  return (bits + bits_per_block - 1) / bits_per_block;
}

// The blocks that carry bits, in the order bits are written to them.
std::vector<int> selected_blocks(const ChannelPlane& plane,
                                 const EmbedSpec& spec, std::size_t bits) {
  std::vector<int> order = block_order(plane, spec.positions);
  order.resize(blocks_needed(bits, spec.bits_per_block()));
  std::sort(order.begin(), order.end());
  return order;
}

std::vector<int> read_bits(const ChannelPlane& plane, const EmbedSpec& spec,
                           std::size_t bits) {
  std::vector<int> out;
  out.reserve(bits);
  for (int b : selected_blocks(plane, spec, bits)) {
    CoeffBlock c = fdct(extract_block(plane, b));
    for (const auto& p : spec.positions) {
      if (out.size() == bits) break;
      out.push_back(qim_extract_coeff(c.at(p.alpha, p.beta), spec.delta));
    }
  }
  return out;
}

ChannelPlane write_bits(const ChannelPlane& plane, const EmbedSpec& spec,
                        std::span<const int> bits,
                        std::span<const int> blocks) {
  ChannelPlane out = plane;
  std::size_t k = 0;
  for (int b : blocks) {
    CoeffBlock c = fdct(extract_block(plane, b));
    for (const auto& p : spec.positions) {
      if (k == bits.size()) break;
      c.at(p.alpha, p.beta) =
          qim_embed_coeff(c.at(p.alpha, p.beta), spec.delta, bits[k++]);
    }
    store_block(out, b, idct(c));
  }
  return out;
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::vector<CoeffPos> default_positions(int bits_per_block) {
  if (bits_per_block < 1 ||
      bits_per_block > static_cast<int>(kMidFrequency.size())) {
    throw ConfigError("bits_per_block must be in 1.." +
                      std::to_string(kMidFrequency.size()));
  }
  return {kMidFrequency.begin(), kMidFrequency.begin() + bits_per_block};
}

void EmbedSpec::validate() const {
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw ConfigError("delta must be a positive finite number");
  if (positions.empty()) throw ConfigError("no coefficient positions");
  for (std::size_t i = 0; i < positions.size(); ++i) {
    const auto& p = positions[i];
    if (p.alpha < 0 || p.alpha >= kBlockSize || p.beta < 0 ||
        p.beta >= kBlockSize)
      throw ConfigError("coefficient position out of range");
    if (p.alpha == 0 && p.beta == 0)
      throw ConfigError("the DC coefficient (0,0) cannot carry payload");
    for (std::size_t j = 0; j < i; ++j)
      if (positions[j] == p) throw ConfigError("duplicate coefficient position");
  }
}

std::vector<int> block_order(const ChannelPlane& plane,
                             std::span<const CoeffPos> excluded) {
  const int n = plane.block_count();
  std::vector<long long> key(n);
  for (int i = 0; i < n; ++i) {
    CoeffBlock c = fdct(extract_block(plane, i));
    c.at(0, 0) = 0.0;
    for (const auto& p : excluded) c.at(p.alpha, p.beta) = 0.0;
    double energy = 0.0;
    for (double v : c.values) energy += std::abs(v);
    key[i] = std::llround(energy * 1e6);
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return key[a] < key[b]; });
  return order;
}

double qim_embed_coeff(double c, double delta, int bit) {
  const double v = c / delta;
  auto lower = static_cast<long long>(std::floor(v));
  if (parity(lower) != bit) --lower;
  const long long upper = lower + 2;
  const double d_lower = v - static_cast<double>(lower);
  const double d_upper = static_cast<double>(upper) - v;
  const long long q = (d_upper <= d_lower + kTieEps) ? upper : lower;
  return static_cast<double>(q) * delta;
}

int qim_extract_coeff(double c, double delta) {
  auto q = static_cast<long long>(std::floor(c / delta + 0.5 + kTieEps));
  return static_cast<int>(parity(q));
}

std::size_t capacity(const RasterImage& image, const EmbedSpec& spec) {
  return static_cast<std::size_t>(image.plane(spec.channel).block_count()) *
         spec.bits_per_block();
}

RasterImage embed(const RasterImage& image, const EmbedSpec& spec) {
  spec.validate();
  const std::vector<int> bits = payload_bits(spec.payload);
  if (bits.empty()) return image;
  const std::size_t cap = capacity(image, spec);
  if (bits.size() > cap) {
    throw CapacityError("payload of " + std::to_string(bits.size()) +
                        " bits exceeds capacity of " + std::to_string(cap) +
                        " bits");
  }

  RasterImage out = image;
  ChannelPlane current = image.plane(spec.channel);
  for (int pass = 0; pass < kMaxPasses; ++pass) {
    const std::vector<int> blocks =
        selected_blocks(current, spec, bits.size());
    current = write_bits(current, spec, bits, blocks);
    if (selected_blocks(current, spec, bits.size()) == blocks &&
        read_bits(current, spec, bits.size()) == bits) {
      out.plane(spec.channel) = std::move(current);
      return out;
    }
  }
  throw VerificationError("payload does not survive 8-bit rounding in channel " +
                          std::string(channel_name(spec.channel)) +
                          " at delta " + std::to_string(spec.delta));
}

std::vector<std::uint8_t> extract(const RasterImage& image,
                                  const EmbedSpec& spec, std::size_t length) {
  spec.validate();
  const std::size_t bits = 8 * length;
  const std::size_t cap = capacity(image, spec);
  if (bits > cap) {
    throw CapacityError("cannot read " + std::to_string(bits) +
                        " bits; capacity is " + std::to_string(cap) + " bits");
  }
  std::vector<int> got = read_bits(image.plane(spec.channel), spec, bits);
  std::vector<std::uint8_t> out(length, 0);
  for (std::size_t i = 0; i < bits; ++i)
    out[i / 8] |= static_cast<std::uint8_t>(got[i] << (7 - i % 8));
  return out;
}

std::vector<std::uint8_t> extract(const RasterImage& image,
                                  const EmbedSpec& spec) {
  return extract(image, spec, spec.payload.size());
}

double psnr(const RasterImage& a, const RasterImage& b) {
  if (a.width() != b.width() || a.height() != b.height())
    throw DimensionError("psnr: image sizes differ");
  double sse = 0.0;
  std::size_t n = 0;
  for (Channel c : kAllChannels) {
    auto sa = a.plane(c).samples();
    auto sb = b.plane(c).samples();
    for (std::size_t i = 0; i < sa.size(); ++i) {
      const double d = static_cast<double>(sa[i]) - sb[i];
      sse += d * d;
    }
    n += sa.size();
  }
  if (sse == 0.0) return std::numeric_limits<double>::infinity();
  const double mse = sse / static_cast<double>(n);
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

std::vector<int> payload_bits(std::span<const std::uint8_t> payload) {
  std::vector<int> bits;
  bits.reserve(payload.size() * 8);
  for (std::uint8_t byte : payload)
    for (int i = 7; i >= 0; --i) bits.push_back((byte >> i) & 1);
  return bits;
}

std::vector<std::uint8_t> parse_payload(std::string_view s) {
  if (s.starts_with("hex:")) {
    s.remove_prefix(4);
    if (s.size() % 2 != 0)
      throw ConfigError("hex payload needs an even number of digits");
    std::vector<std::uint8_t> out;
    for (std::size_t i = 0; i < s.size(); i += 2) {
      int hi = hex_value(s[i]);
      int lo = hex_value(s[i + 1]);
      if (hi < 0 || lo < 0) throw ConfigError("bad hex digit in payload");
      out.push_back(static_cast<std::uint8_t>(hi << 4 | lo));
    }
    return out;
  }
  if (s.starts_with("text:")) s.remove_prefix(5);
  return {s.begin(), s.end()};
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xf]);
  }
  return out;
}

std::vector<CoeffPos> parse_positions(std::string_view s) {
  std::vector<CoeffPos> out;
  while (!s.empty()) {
    auto comma = s.find(',');
    std::string_view item = s.substr(0, comma);
    s = comma == std::string_view::npos ? std::string_view{}
                                        : s.substr(comma + 1);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    auto colon = item.find(':');
    if (item.size() != 3 || colon != 1 || item[0] < '0' || item[0] > '7' ||
        item[2] < '0' || item[2] > '7')
      throw ConfigError("bad coefficient position '" + std::string(item) +
                        "' (expected a:b with digits 0-7)");
    out.push_back({item[0] - '0', item[2] - '0'});
  }
  if (out.empty()) throw ConfigError("empty position list");
  return out;
}

std::string format_positions(std::span<const CoeffPos> positions) {
  std::string out;
  for (const auto& p : positions) {
    if (!out.empty()) out += ',';
    out += std::to_string(p.alpha) + ":" + std::to_string(p.beta);
  }
  return out;
}

}  // namespace stegbd
