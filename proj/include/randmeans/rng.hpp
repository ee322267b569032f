#ifndef RANDMEANS_RNG_HPP
#define RANDMEANS_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace randmeans {

// Reproducible random stream addressed by (seed, stream_id).  Parallel or
// replicated computations give replicate r the stream (seed, r); results
// are then independent of scheduling and bitwise reproducible, because
// both std::mt19937_64 and std::seed_seq are fully pinned by the
// standard and all variate transforms below are explicit formulas.
class RngStream {
public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id)
      : seed_(seed), stream_id_(stream_id) {
    std::seed_seq seq{
        static_cast<std::uint32_t>(seed & 0xffffffffu),
        static_cast<std::uint32_t>(seed >> 32),
        static_cast<std::uint32_t>(stream_id & 0xffffffffu),
        static_cast<std::uint32_t>(stream_id >> 32)};
    engine_.seed(seq);
  }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on the open interval (0, 1): 53-bit resolution, never 0 or 1,
  // so inverse-CDF transforms below cannot hit log(0) or acos out of range.
  double uniform01() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; consumes exactly two uniforms per call.
  double normal() {
    const double u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

} // namespace randmeans

#endif
