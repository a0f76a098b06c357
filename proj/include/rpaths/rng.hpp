#pragma once

#include <array>
#include <cstdint>

namespace rpaths {

// Seedable 64-bit generator (xoshiro256++) with substreams. Identical
// (seed, stream_id) pairs reproduce identical draw sequences across runs,
// platforms and thread counts; parallel code hands each task its own
// stream_id instead of sharing generator state.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t next_u64();

  // Uniform on the open interval (0,1); never returns 0 or 1, so logs of
  // draws are always finite.
  double uniform01();

  // Standard normal via the Marsaglia polar method (no libm trig).
  double normal();

  double exponential();  // rate 1
  double gumbel();       // standard Gumbel, CDF exp(-exp(-x))

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_; }

 private:
  std::array<std::uint64_t, 4> s_{};
  std::uint64_t seed_ = 0;
  std::uint64_t stream_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Deterministic substream factory: task i of a batch draws from at(i).
// Disjoint batches use disjoint [base, base+n) stream ranges.
struct StreamFamily {
  std::uint64_t seed = 0;
  std::uint64_t base = 0;

  Rng at(std::uint64_t i) const { return Rng(seed, base + i); }
  StreamFamily sub(std::uint64_t offset) const { return {seed, base + offset}; }
};

}  // namespace rpaths
