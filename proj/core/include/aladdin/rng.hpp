#pragma once

#include <cstdint>
#include <random>

namespace aladdin {

// Seeded generator for the simulator. The engine is std::mt19937_64, whose
// output sequence is fixed by the C++ standard; the distributions below are
// implemented here rather than taken from <random> because the standard
// distributions are implementation-defined and would make logs differ
// across standard libraries.
class SimRng {
 public:
  explicit SimRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform integer in [lo, hi], inclusive. Rejection sampling, no modulo bias.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  // Uniform double in [0, 1) built from the top 53 bits.
  double uniform01();

  bool bernoulli(double p) { return uniform01() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace aladdin
