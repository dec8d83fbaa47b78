#pragma once

#include <array>
#include <cstdint>

#include "jcr/types.hpp"

namespace jcr {

// Philox4x32-10 counter-based generator (Salmon et al., Random123).
// The output block is a pure function of (key, counter).
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter ctr, Key key);
};

// A replayable random stream identified by (root_seed, stream_id).
//
// Splitting rule: the 64-bit root seed is the Philox key; the 64-bit stream
// id occupies the upper two counter words and the lower two words count
// blocks inside the stream. Streams with distinct ids never overlap.
class RandomStream {
 public:
  RandomStream(std::uint64_t root_seed, std::uint64_t stream_id);

  std::uint32_t next_u32();
  std::uint64_t next_u64();
  // Uniform on (0, 1), 53-bit resolution, never exactly 0.
  double uniform();
  double normal();
  // Circular complex Gaussian with E|z|^2 = variance.
  Complex complex_normal(double variance);

  std::uint64_t root_seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_; }

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_index_ = 0;
  Philox4x32::Counter buffer_{};
  int used_ = 4;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

// Stream ids used by the simulation pipeline. A sweep cell seeded with index
// s draws its scatterer phases from stream (s, kScenePhase) and its noise
// from (s, kNoise), so every bit depth and method at the same seed index sees
// identical realizations.
enum class StreamPurpose : std::uint32_t { kScenePhase = 1, kNoise = 2, kAux = 3 };

inline std::uint64_t stream_id(std::uint64_t seed_index, StreamPurpose purpose) {
  return (seed_index << 8) | static_cast<std::uint64_t>(purpose);
}

}  // namespace jcr
