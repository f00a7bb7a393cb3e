#ifndef BELLLAB_KERNEL_HPP
#define BELLLAB_KERNEL_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "belllab/numeric.hpp"
#include "belllab/scenario.hpp"
#include "belllab/simplex.hpp"

namespace belllab {

/// Exact distribution over the four joint outcomes, indexed by
/// Outcome::index().
using OutcomeDistribution = std::array<Rational, kOutcomeCount>;

/// p(O_A, O_B | lambda, M_A, M_B). Each row is a distribution over the four
/// joint outcomes; the kernel sees the context only through the sector.
class OutcomeKernel {
 public:
  using Row = OutcomeDistribution;
  using LambdaRows = std::array<Row, kSectorCount>;

  /// rows[lambda][sector]. Throws std::invalid_argument if a row has a
  /// negative entry or does not sum to exactly 1.
  explicit OutcomeKernel(std::vector<LambdaRows> rows);

  /// Deterministic kernel: row (lambda, s) is a point mass on f(lambda, s).
  static OutcomeKernel deterministic(
      std::uint32_t lambda_count,
      const std::function<Outcome(std::uint32_t, SettingsPair)>& f);

  /// lambda -> outcome index lambda for every setting; requires
  /// lambda_count <= 4. Distinct lattice points give distinct statistics.
  static OutcomeKernel injective(std::uint32_t lambda_count);

  /// Lambda = 4, lambda = (a, b) read out directly as (O_A, O_B).
  static OutcomeKernel readout();

  /// Every row uniform over the four outcomes; statistics ignore lambda.
  static OutcomeKernel constant(std::uint32_t lambda_count);

  /// Random rows with entries k / granularity, reproducible from the seed.
  static OutcomeKernel random(std::uint32_t lambda_count, std::uint64_t seed,
                              std::uint32_t granularity = 6);

  std::uint32_t lambda_count() const {
    return static_cast<std::uint32_t>(rows_.size());
  }
  const Row& row(std::uint32_t lambda, SettingsPair s) const {
    return rows_[lambda][s.sector()];
  }
  const std::vector<LambdaRows>& rows() const { return rows_; }

  /// sum_lambda row(lambda, s) * q(lambda). Throws std::invalid_argument on
  /// a Lambda mismatch.
  OutcomeDistribution statistics(const LatticeDistribution& q,
                                 SettingsPair s) const;

  friend bool operator==(const OutcomeKernel&, const OutcomeKernel&) = default;

 private:
  std::vector<LambdaRows> rows_;
};

/// Integer-valued image of one kernel sector: statistics of a lattice point
/// q are weights * q up to the common factor 1 / (scale * L). Used where
/// millions of statistics must be compared exactly.
class ScaledSectorKernel {
 public:
  ScaledSectorKernel(const OutcomeKernel& kernel, SettingsPair s);

  using Key = std::array<BigInt, kOutcomeCount>;
  Key key(const LatticeDistribution& q) const;

 private:
  std::vector<std::array<BigInt, kOutcomeCount>> weights_;
};

}  // namespace belllab

#endif  // BELLLAB_KERNEL_HPP
