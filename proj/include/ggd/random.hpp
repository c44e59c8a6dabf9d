#pragma once

#include <cstdint>
#include <random>

namespace ggd {

// Seeded generator with a fixed, documented stream layout:
//   * the engine is std::mt19937_64 (its output sequence is fixed by the standard),
//   * uniforms take the top 53 bits: u = (k + 0.5) / 2^53, so 0 < u < 1,
//   * normals use the Marsaglia polar method,
//   * gamma variates use Marsaglia-Tsang squeeze/rejection, with the
//     Gamma(k + 1) * U^(1/k) boost for shape k < 1,
//   * beta variates are X / (X + Y) with X ~ Gamma(a), Y ~ Gamma(b).
// Nothing here goes through <random> distributions, whose algorithms are
// implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Independent stream for draw `index` of a run seeded with `seed`. Streams
  // are derived with SplitMix64, so draw i never depends on how many draws
  // came before it.
  static Rng stream(std::uint64_t seed, std::uint64_t index);

  double uniform();
  double normal();
  double gamma(double shape);
  double beta(double a, double b);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);

// One Beta(a, b) variate in the open interval (0, 1).
double sample_beta(double a, double b, Rng& rng);

}  // namespace ggd
