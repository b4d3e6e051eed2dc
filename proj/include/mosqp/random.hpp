#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace mosqp {

/// Deterministic uniform source.  The mapping from engine output to [0, 1)
/// is fixed here (53 high bits) instead of going through
/// std::uniform_real_distribution, whose algorithm varies between standard
/// libraries.
class UniformSource {
 public:
  explicit UniformSource(std::uint64_t seed) : engine_(seed) {}
  UniformSource(std::initializer_list<std::uint32_t> seeds) {
    std::seed_seq seq(seeds);
    engine_.seed(seq);
  }

  double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * next(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace mosqp
