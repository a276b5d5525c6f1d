#pragma once

#include <cmath>
#include <cstdint>

namespace sigcurate {

// Deterministic, platform-independent random streams. All randomness in the
// library flows through this generator so that identical seeds give identical
// results regardless of compiler or standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {
    // warm up so nearby seeds decorrelate
    next_u64();
    next_u64();
  }

  // Derives an independent stream from (root, purpose, index). Used for
  // per-level weight matrices, per-draw sampling streams, retries, etc.
  static Rng substream(std::uint64_t root, std::uint64_t purpose,
                       std::uint64_t index = 0) {
    std::uint64_t s = root;
    s = mix(s + 0x9e3779b97f4a7c15ULL * (purpose + 1));
    s = mix(s + 0x9e3779b97f4a7c15ULL * (index + 1));
    return Rng(s);
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  // uniform in [0, 1)
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // uniform integer in [0, n), n >= 1
  std::size_t uniform_index(std::size_t n) {
    return static_cast<std::size_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  // standard normal via Box-Muller
  double normal() {
    double u1 = 1.0 - uniform01();  // (0, 1], keeps log finite
    double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

// Stream purposes, kept distinct so adding a consumer never shifts another's draws.
namespace stream {
constexpr std::uint64_t kRfsfWeights = 1;
constexpr std::uint64_t kTrpProjections = 2;
constexpr std::uint64_t kStochasticGreedy = 3;
constexpr std::uint64_t kKdpp = 4;
constexpr std::uint64_t kCurveRandom = 5;
}  // namespace stream

}  // namespace sigcurate
