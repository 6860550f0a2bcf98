#ifndef VLCSTAT_RANDOM_STREAM_HPP
#define VLCSTAT_RANDOM_STREAM_HPP

#include <cmath>
#include <cstdint>
#include <random>

#include "vlcstat/common.hpp"

namespace vlcstat {

/// Reproducible random source. The same (seed, stream_id) pair always
/// produces the same sequence; distinct stream ids give independent
/// substreams for concurrent sampling.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream_id = 0)
      : seed_(seed), stream_id_(stream_id) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream_id & 0xffffffffu),
                      static_cast<std::uint32_t>(stream_id >> 32)};
    engine_.seed(seq);
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  /// Derive an independent stream tied to the same seed.
  RandomStream substream(std::uint64_t id) const {
    return RandomStream(seed_, stream_id_ ^ (0x9e3779b97f4a7c15ull * (id + 1)));
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform variate strictly inside (0, 1).
  double next_uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller; consumes exactly two uniforms.
  double next_normal() {
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
  std::uint64_t stream_id_;
};

}  // namespace vlcstat

#endif  // VLCSTAT_RANDOM_STREAM_HPP
