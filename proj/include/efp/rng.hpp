#pragma once

#include <cstdint>
#include <random>

namespace efp {

/// Deterministic random stream keyed by (seed, stream, substream).
///
/// Particle dynamics use one stream per particle, keyed additionally by the
/// outer iteration, so parallel execution reproduces the serial result no
/// matter how work is scheduled.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0,
                     std::uint64_t substream = 0)
      : engine_(mix_seed(seed, stream, substream)) {}

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }  // [0, 1)
  std::uint64_t next_u64() { return engine_(); }

  static std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

 private:
  static std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream,
                                std::uint64_t substream) {
    std::uint64_t s = splitmix64(seed);
    s = splitmix64(s ^ (stream + 0x632be59bd9b4e019ULL));
    s = splitmix64(s ^ (substream + 0x9e6c63d0876a9a47ULL));
    return s;
  }

  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace efp
