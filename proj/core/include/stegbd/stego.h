#ifndef STEGBD_STEGO_H_
#define STEGBD_STEGO_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stegbd/image.h"

namespace stegbd {

// A DCT coefficient coordinate; alpha pairs with the horizontal pixel index.
struct CoeffPos {
  int alpha = 0;
  int beta = 0;
  bool operator==(const CoeffPos&) const = default;
};

inline constexpr double kDefaultDelta = 20.0;

// Mid-frequency positions used when only a bits-per-block count is given.
// 1 -> {(3,4)}, 2 -> {(3,4),(4,3)}, up to 8 positions.
std::vector<CoeffPos> default_positions(int bits_per_block);

// Everything that defines one trigger.
struct EmbedSpec {
  Channel channel = Channel::kRed;
  std::vector<std::uint8_t> payload;
  double delta = kDefaultDelta;
  std::vector<CoeffPos> positions = default_positions(1);

  int bits_per_block() const { return static_cast<int>(positions.size()); }

  // Throws ConfigError: delta <= 0, empty/duplicate positions, DC position,
  // or coordinates outside 0..7.
  void validate() const;
};

// Block indices of `plane` sorted ascending by AC energy
//   sum over (a,b) != (0,0), (a,b) not in `excluded` of |J(a,b)|,
// ties by ascending index. Energies are compared at 1e-6 resolution so
// rounding residue on flat blocks counts as a tie.
std::vector<int> block_order(const ChannelPlane& plane,
                             std::span<const CoeffPos> excluded = {});

// Nearest multiple q*delta of c with q mod 2 == bit; ties toward +inf.
double qim_embed_coeff(double c, double delta, int bit);

// round(c / delta) mod 2, halves rounded toward +inf.
int qim_extract_coeff(double c, double delta);

// Bits the spec can carry in one channel of `image`.
std::size_t capacity(const RasterImage& image, const EmbedSpec& spec);

// Hides spec.payload (MSB-first) in spec.channel. The lowest-energy
// ceil(bits / bits_per_block) blocks are selected, and bits are written into
// the selected blocks in ascending block index. Other planes are untouched.
// Throws CapacityError if the payload does not fit and VerificationError if
// the result does not decode back to the payload.
RasterImage embed(const RasterImage& image, const EmbedSpec& spec);

// Reads `length` bytes with the same selection rule as embed. Throws
// CapacityError if 8*length exceeds capacity.
std::vector<std::uint8_t> extract(const RasterImage& image,
                                  const EmbedSpec& spec, std::size_t length);

// Reads spec.payload.size() bytes.
std::vector<std::uint8_t> extract(const RasterImage& image,
                                  const EmbedSpec& spec);

// Peak signal-to-noise ratio over all samples of all channels, in dB.
// Identical images give +infinity. Throws DimensionError on size mismatch.
double psnr(const RasterImage& a, const RasterImage& b);

std::vector<int> payload_bits(std::span<const std::uint8_t> payload);

// "hex:<digits>" or "text:<utf-8>"; anything without a prefix is text.
std::vector<std::uint8_t> parse_payload(std::string_view s);

std::string to_hex(std::span<const std::uint8_t> bytes);

// "3:4,4:3" -> {(3,4),(4,3)}.
std::vector<CoeffPos> parse_positions(std::string_view s);
std::string format_positions(std::span<const CoeffPos> positions);

}  // namespace stegbd

#endif  // STEGBD_STEGO_H_
