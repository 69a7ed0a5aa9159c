#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace dyncop {

/// Deterministic random stream addressed by (seed, stream_id).
///
/// Generator: xoshiro256** whose 256-bit state is filled by SplitMix64 from a
/// key that mixes `seed` and `stream_id`. Uniforms use the top 53 bits offset
/// by half an ulp, so they lie strictly inside (0, 1). Normals are produced
/// by inversion through std_normal_quantile. This algorithm is fixed: a
/// stream replays bit-identically for a given (seed, stream_id).
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  std::uint64_t next_u64() noexcept;
  double uniform_open() noexcept;
  double std_normal();

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::array<std::uint64_t, 4> state_{};
};

std::vector<double> sample_std_normal(RngStream& stream, std::size_t count);

}  // namespace dyncop
