#ifndef BELLLAB_MONTECARLO_HPP
#define BELLLAB_MONTECARLO_HPP

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "belllab/entropy.hpp"
#include "belllab/models.hpp"
#include "belllab/scenario.hpp"

namespace belllab {

struct RunRecord {
  std::uint64_t run;
  Context context;
  /// Set only for superdeterministic models satisfying constraint m.
  std::optional<SubEnsemble> e;
  std::uint32_t lambda;
  Outcome outcome;

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

/// Samples N0 runs. Per run, in this order: mechanism outputs and choices
/// from the prior, lambda from the model's distribution at that context,
/// then outcomes from the kernel row. Run r draws only from stream r of the
/// seed, so the output does not depend on the thread count.
///
/// For superdeterministic models the prior must have the model's N.
std::vector<RunRecord> simulate(const AnyModel& model, std::uint64_t runs,
                                std::uint64_t seed, const ChoicePrior& prior,
                                unsigned threads = 0);

/// Runs with the context held fixed; streams start at first_stream.
std::vector<RunRecord> simulate_at(const AnyModel& model, const Context& context,
                                   std::uint64_t runs, std::uint64_t seed,
                                   std::uint64_t first_stream = 0);

using OutcomeCounts = std::array<std::uint64_t, kOutcomeCount>;

/// Outcome counts keyed by context and by sector.
struct EmpiricalTable {
  std::map<std::uint64_t, OutcomeCounts> by_context;  // canonical index
  std::array<OutcomeCounts, kSectorCount> by_sector{};
  std::uint64_t total = 0;

  static EmpiricalTable from_runs(const std::vector<RunRecord>& runs);
};

/// Analytic vs empirical comparison of one (sector, outcome) cell.
struct CellCheck {
  std::size_t sector;
  std::size_t outcome;
  double analytic;
  std::uint64_t visits;
  std::uint64_t count;
  /// (count - visits p) / sqrt(visits p (1 - p)); 0 when p is 0 or 1 and
  /// the count agrees, infinite when it does not.
  double z;
};

/// Sector frequencies against sum_c p(c | sector) statistics(c).
std::vector<CellCheck> sector_convergence(const AnyModel& model,
                                          const ChoicePrior& prior,
                                          const std::vector<RunRecord>& runs);

/// Sub-ensemble check over simulated runs (see verify_coincidence).
CoincidenceReport verify_coincidence(const SuperdetModel& model,
                                     const std::vector<RunRecord>& runs);

/// Thrown by the demo when statistics already ignore the mechanisms.
class NoDependence : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct DependenceReport {
  Context first;
  Context second;
  std::size_t sector;
  std::size_t outcome;  // outcome with the largest analytic gap
  Rational analytic_first;
  Rational analytic_second;
  std::uint64_t runs_per_context;
  double frequency_first;
  double frequency_second;
  double z;  // two-proportion z statistic
  double z_threshold;
  bool detected;
};

inline constexpr double kDefaultDependenceThreshold = 5.0;

/// Runs two same-sector contexts whose analytic statistics differ, runs
/// times each, and tests the gap with a two-proportion z statistic. Throws
/// NoDependence when every same-sector pair agrees exactly.
DependenceReport mechanism_dependence_demo(
    const AnyModel& model, std::uint32_t n, std::uint64_t runs,
    std::uint64_t seed, double z_threshold = kDefaultDependenceThreshold);

/// Header: run,alpha,beta,gA,gB,MA,MB,lambda,OA,OB
void write_runs_csv(std::ostream& out, const std::vector<RunRecord>& runs);

}  // namespace belllab

#endif  // BELLLAB_MONTECARLO_HPP
