#ifndef ELX_RNG_HPP
#define ELX_RNG_HPP

#include <cmath>
#include <cstdint>

namespace elx {

// xoshiro256** seeded through splitmix64. All variate transforms are spelled
// out here so that trajectories are bit-identical across platforms and
// standard-library versions; simulation outputs record the seed they used.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& word : state_) word = splitmix64(x);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // uniform on [0,1), 53-bit resolution
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // strictly positive exponential variate with the given rate
  double exponential(double rate) {
    double u;
    do {
      u = uniform();
    } while (u == 0.0);
    return -std::log(u) / rate;
  }

  bool coin() { return (next_u64() & 1u) != 0; }

  // derive an independent stream for replica r of a base seed
  static std::uint64_t stream_seed(std::uint64_t base, std::uint64_t replica) {
    std::uint64_t x = base + 0x9E3779B97F4A7C15ULL * (replica + 1);
    return splitmix64(x);
  }

 private:
  static std::uint64_t rotl(std::uint64_t v, int k) {
    return (v << k) | (v >> (64 - k));
  }
  static std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_[4];
};

}  // namespace elx

#endif
