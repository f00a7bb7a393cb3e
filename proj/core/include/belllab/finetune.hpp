#ifndef BELLLAB_FINETUNE_HPP
#define BELLLAB_FINETUNE_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "belllab/kernel.hpp"
#include "belllab/numeric.hpp"
#include "belllab/scenario.hpp"
#include "belllab/simplex.hpp"

namespace belllab {

enum class FineTuningMode { ConstrainedClosedForm, GeneralBruteForce };

std::string to_string(FineTuningMode mode);

/// Overhead fine-tuning F = 1 - N_f / V^Omega for one (N, Lambda, L).
///
/// 1 - F underflows any float for realistic Omega, so the report always
/// carries log10(1 - F); N_f and F are exact only while their decimal size
/// stays under kExactDigitBudget.
struct FineTuningReport {
  FineTuningMode mode;
  std::uint32_t n;
  std::uint32_t lambda_count;
  std::uint32_t denominator;
  BigInt omega;
  BigInt v_total;
  std::optional<BigInt> n_f;
  /// 1 - F, exact.
  std::optional<Rational> one_minus_f;
  double log10_one_minus_f;
  /// Per-sector v^j, reported for the general mode when V is small.
  std::vector<std::vector<BigInt>> v_per_sector;

  /// F itself as a rational, when exact.
  std::optional<Rational> f() const;
  /// F as a double; 1.0 once 1 - F is below double resolution.
  double f_approx() const;
};

inline constexpr std::size_t kExactDigitBudget = 10'000;

/// Closed form for the constrained model: N_f = V^4, F = 1 - V^(4 - Omega).
FineTuningReport f_constrained(std::uint32_t n, std::uint32_t lambda_count,
                               std::uint32_t denominator);

/// Thrown when a brute-force count would exceed the caller's budget.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(const std::string& what, BigInt required_work)
      : std::runtime_error(what), required_work_(std::move(required_work)) {}
  const BigInt& required_work() const { return required_work_; }

 private:
  BigInt required_work_;
};

struct CountBudget {
  /// Maximum kernel evaluations (lattice points times Lambda times sectors).
  std::uint64_t max_work = 50'000'000;
  /// 0 picks the BELLLAB_THREADS / hardware default.
  unsigned threads = 0;
};

/// v^j: the number of lattice points q whose statistics in sector s equal
/// those of the configuration `config`. Direct scan over all V points.
BigInt count_vj(const OutcomeKernel& kernel, SettingsPair s,
                const LatticeDistribution& config);

/// v^j for every configuration j in rank order, for one sector. Groups the
/// lattice by statistics, so it costs one pass instead of V scans.
std::vector<BigInt> sector_vj(const OutcomeKernel& kernel, SettingsPair s,
                              std::uint32_t denominator,
                              const CountBudget& budget = {});

/// N_f for a scenario with `contexts_per_sector` distributions per sector:
/// prod_sectors sum_j (v^j)^(contexts_per_sector - 1). The real scenario has
/// contexts_per_sector = Omega / 4 = N^2 4^(N-1).
BigInt constrained_configuration_count(const OutcomeKernel& kernel,
                                       std::uint32_t denominator,
                                       std::uint64_t contexts_per_sector,
                                       const CountBudget& budget = {});

/// General model with the condition on statistics as the only constraint.
FineTuningReport f_general(const OutcomeKernel& kernel, std::uint32_t n,
                           std::uint32_t denominator,
                           const CountBudget& budget = {});

struct LimitRow {
  std::uint32_t n;
  double log10_one_minus_f;
};

std::vector<LimitRow> f_general_limit_study(
    const OutcomeKernel& kernel, std::uint32_t denominator,
    const std::vector<std::uint32_t>& n_values, const CountBudget& budget = {});

}  // namespace belllab

#endif  // BELLLAB_FINETUNE_HPP
