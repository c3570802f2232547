#pragma once

#include <cstdint>
#include <random>

namespace bsom {

/// All randomness flows through std::mt19937_64 seeded with the run's 64-bit
/// seed. The engine's output sequence is fixed by the C++ standard; bounded
/// draws use rejection sampling below rather than std::uniform_int_distribution,
/// whose algorithm differs between standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform integer in [0, bound). `bound` must be positive.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t draw;
    do {
      draw = engine_();
    } while (draw >= limit);
    return draw % bound;
  }

  /// Fisher-Yates, last element first.
  template <class Vec>
  void shuffle(Vec& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      auto k = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[k]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace bsom
