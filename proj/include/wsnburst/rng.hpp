#pragma once

#include <concepts>
#include <cstdint>
#include <random>

namespace wsnburst {

// splitmix64 finalizer; used to derive independent substream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Child seed for `tag` under `parent`. Stable: the same (parent, tag) always
// yields the same child, independent of how many other children exist.
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t tag) noexcept {
  return splitmix64(parent ^ splitmix64(tag ^ 0x6a09e667f3bcc909ULL));
}

constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t a, std::uint64_t b) noexcept {
  return derive_seed(derive_seed(parent, a), b);
}

// Anything that hands out uniforms on the open interval (0,1).
template <typename S>
concept UniformSource = requires(S& s) {
  { s.uniform() } -> std::convertible_to<double>;
};

// A named random substream. Uniforms are 53-bit and never exactly 0 or 1.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}

  double uniform() {
    for (;;) {
      const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
      if (u > 0.0) return u;
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace wsnburst
