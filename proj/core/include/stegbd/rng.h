#ifndef STEGBD_RNG_H_
#define STEGBD_RNG_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace stegbd {

// All randomness in the library flows through Rng. The standard
// distributions are implementation-defined, so the mappings from raw engine
// output to integers and reals are spelled out here to keep runs
// bit-reproducible across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound);

  // Uniform integer in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi);

  // Uniform real in [0, 1) with 53 random bits.
  double unit();

  // Uniform real in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  template <typename It>
  void shuffle(It first, It last) {
    auto n = static_cast<std::uint64_t>(last - first);
    for (std::uint64_t i = n; i > 1; --i) {
      std::uint64_t j = below(i);
      std::swap(first[i - 1], first[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

// Seed for an independent stream identified by `tag`, derived from a single
// experiment seed.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag);

}  // namespace stegbd

#endif  // STEGBD_RNG_H_
