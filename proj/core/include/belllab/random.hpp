#ifndef BELLLAB_RANDOM_HPP
#define BELLLAB_RANDOM_HPP

#include <array>
#include <cstdint>
#include <limits>

namespace belllab {

/// Philox4x32-10 counter-based generator. Each (seed, stream) pair names an
/// independent sequence, so a run can own stream = run index and draw the
/// same numbers no matter which thread simulates it.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::uint64_t stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()();

  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  /// Uniform integer in [0, bound), unbiased. bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  /// One Philox block: exposed for known-answer tests.
  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> counter,
                                            std::array<std::uint32_t, 2> key);

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> counter_;
  std::array<std::uint32_t, 4> buffer_{};
  int buffered_ = 0;
};

}  // namespace belllab

#endif  // BELLLAB_RANDOM_HPP
