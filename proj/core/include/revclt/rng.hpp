#pragma once

#include <cmath>
#include <cstdint>

namespace revclt {

// Counter-based stream keyed by (seed, stream_id): draw i is a fixed hash of
// (key, i), so replicates can run on any thread layout and still reproduce
// bit-identical sequences. The per-draw mix is the splitmix64 finalizer.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id) noexcept
      : key_(mix(seed ^ mix(stream_id + kGolden))) {}

  std::uint64_t next_u64() noexcept { return mix(key_ + (++counter_) * kGolden); }

  // uniform on the open interval (0,1); safe to pass to log()
  double next_unit() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  bool next_bool() noexcept { return (next_u64() >> 63) != 0; }

  double next_sign() noexcept { return next_bool() ? 1.0 : -1.0; }

  // standard exponential
  double next_exp() noexcept { return -std::log(next_unit()); }

  // standard normal (Box-Muller, one value per two uniforms; no state kept
  // so that the draw count stays deterministic)
  double next_normal() noexcept {
    const double u1 = next_unit();
    const double u2 = next_unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  static constexpr double kPi = 3.141592653589793238462643383279502884;

  static std::uint64_t mix(std::uint64_t z) noexcept {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Stream id for replicate r of a named sub-experiment, so that different
// experiments sharing one seed do not share draw sequences.
inline std::uint64_t replicate_stream(std::uint64_t purpose,
                                      std::uint64_t replicate) noexcept {
  return (purpose << 32) ^ replicate;
}

}  // namespace revclt
