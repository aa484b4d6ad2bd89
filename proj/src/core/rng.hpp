#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>

namespace rg {

// Deterministic random stream. Every draw is derived from raw mt19937_64
// output, so the entire generator state is the engine state: serialize()
// followed by deserialize() resumes the exact sequence. normal() uses
// Box-Muller without a cached spare for the same reason.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  // Independent named substream of a master seed (learner / sampler / eval
  // streams must not interleave).
  static Rng substream(uint64_t seed, uint64_t stream) {
    std::seed_seq seq{static_cast<unsigned>(seed & 0xffffffffu),
                      static_cast<unsigned>(seed >> 32),
                      static_cast<unsigned>(stream & 0xffffffffu),
                      static_cast<unsigned>(stream >> 32)};
    Rng r(0);
    r.engine_.seed(seq);
    return r;
  }

  // Uniform on [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform index in [0, n); n must be positive.
  size_t uniform_index(size_t n) {
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t r = engine_();
    while (r >= limit) r = engine_();
    return static_cast<size_t>(r % n);
  }

  double normal(double mean = 0.0, double stddev = 1.0) {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double z = std::sqrt(-2.0 * std::log(u1)) *
                     std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
    return mean + stddev * z;
  }

  std::string serialize() const {
    std::ostringstream os;
    os << engine_;
    return os.str();
  }

  void deserialize(const std::string& s) {
    std::istringstream is(s);
    is >> engine_;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace rg
