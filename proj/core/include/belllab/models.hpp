#ifndef BELLLAB_MODELS_HPP
#define BELLLAB_MODELS_HPP

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "belllab/kernel.hpp"
#include "belllab/numeric.hpp"
#include "belllab/scenario.hpp"
#include "belllab/simplex.hpp"

namespace belllab {

/// Superdeterministic model of the N-mechanism scenario. One hidden-variable
/// table p(lambda | {alpha}, gamma_A, {beta}, gamma_B) per context; the
/// settings add nothing once the context is known. Type I and type II
/// models share this representation.
class SuperdetModel {
 public:
  /// tables are indexed by canonical context index. Throws
  /// std::invalid_argument unless there is exactly one table per context and
  /// every table has the kernel's Lambda and a common denominator.
  SuperdetModel(std::uint32_t n, OutcomeKernel kernel,
                std::vector<LatticeDistribution> tables);

  std::uint32_t mechanism_count() const { return n_; }
  std::uint32_t lambda_count() const { return kernel_.lambda_count(); }
  std::uint32_t denominator() const { return tables_.front().denominator(); }
  const OutcomeKernel& kernel() const { return kernel_; }
  const std::vector<LatticeDistribution>& tables() const { return tables_; }
  const LatticeDistribution& table(std::uint64_t context_index) const {
    return tables_.at(context_index);
  }
  const LatticeDistribution& table(const Context& c) const;

 private:
  std::uint32_t n_;
  OutcomeKernel kernel_;
  std::vector<LatticeDistribution> tables_;
};

/// Per-wing local response p(O = +1 | lambda, M), indexed [lambda][M].
using LocalResponse = std::vector<std::array<Rational, 2>>;
/// Nonlocal wing-A response p(O_A = +1 | lambda, M_A, M_B), [lambda][sector].
using PairResponse = std::vector<std::array<Rational, kSectorCount>>;

/// Retrocausal model: p(O_A|lambda,M_A) p(O_B|lambda,M_B) p(lambda|M_B) times
/// the mechanism and choice priors.
class RetrocausalModel {
 public:
  RetrocausalModel(LocalResponse response_a, LocalResponse response_b,
                   std::array<LatticeDistribution, 2> hidden_given_mb);

  std::uint32_t lambda_count() const {
    return static_cast<std::uint32_t>(response_a_.size());
  }
  const LocalResponse& response_a() const { return response_a_; }
  const LocalResponse& response_b() const { return response_b_; }
  const LatticeDistribution& hidden(Setting mb) const {
    return hidden_[static_cast<std::size_t>(mb)];
  }
  /// The product response written as a joint kernel.
  const OutcomeKernel& kernel() const { return kernel_; }

 private:
  LocalResponse response_a_;
  LocalResponse response_b_;
  std::array<LatticeDistribution, 2> hidden_;
  OutcomeKernel kernel_;
};

/// Nonlocal model: p(O_A|lambda,M_A,M_B) p(O_B|lambda,M_B) p(lambda).
class NonlocalModel {
 public:
  NonlocalModel(PairResponse response_a, LocalResponse response_b,
                LatticeDistribution hidden);

  std::uint32_t lambda_count() const {
    return static_cast<std::uint32_t>(response_a_.size());
  }
  const PairResponse& response_a() const { return response_a_; }
  const LocalResponse& response_b() const { return response_b_; }
  const LatticeDistribution& hidden() const { return hidden_; }
  const OutcomeKernel& kernel() const { return kernel_; }

 private:
  PairResponse response_a_;
  LocalResponse response_b_;
  LatticeDistribution hidden_;
  OutcomeKernel kernel_;
};

using AnyModel = std::variant<SuperdetModel, RetrocausalModel, NonlocalModel>;

std::string_view model_class_name(const AnyModel& m);

/// Hidden-variable distribution the model uses for runs in context c.
const LatticeDistribution& hidden_distribution(const AnyModel& m,
                                               const Context& c);
const OutcomeKernel& kernel_of(const AnyModel& m);

/// p(O_A, O_B | context) = sum_lambda kernel(lambda, M_A, M_B) p(lambda | ...).
/// Superdeterministic models require c to have the model's N.
OutcomeDistribution statistics(const SuperdetModel& m, const Context& c);
OutcomeDistribution statistics(const RetrocausalModel& m, const Context& c);
OutcomeDistribution statistics(const NonlocalModel& m, const Context& c);
OutcomeDistribution statistics(const AnyModel& m, const Context& c);

struct ContextPair {
  std::uint64_t reference;  // canonical index of the sector's first context
  std::uint64_t other;
  std::size_t sector;
};

/// Result of testing whether statistics depend on the settings alone.
struct ConditionReport {
  bool holds = true;
  std::vector<ContextPair> witnesses;  // capped
  std::uint64_t violation_count = 0;   // uncapped
  /// Largest |difference| of any outcome probability over violating pairs.
  Rational max_gap = 0;
};

inline constexpr std::size_t kDefaultWitnessCap = 16;

/// Exact equality of statistics across every same-sector context pair.
ConditionReport check_condition_ii(const SuperdetModel& m,
                                   std::size_t witness_cap = kDefaultWitnessCap);
/// The same sweep for any model class over the N-mechanism contexts.
ConditionReport check_condition_ii(const AnyModel& m, std::uint32_t n,
                                   std::size_t witness_cap = kDefaultWitnessCap);

/// Tables depend on (gamma_A, gamma_B, alpha[gamma_A], beta[gamma_B]) only.
bool check_constraint_m(const SuperdetModel& m);
/// Tables depend on the induced settings only (implies constraint m).
bool check_constraint_n(const SuperdetModel& m);

/// Model whose every context carries its sector's table.
SuperdetModel make_constrained(
    std::uint32_t n, const std::array<LatticeDistribution, kSectorCount>& tables,
    OutcomeKernel kernel);

/// Parameters left after summing the mechanism outputs and choices out of a
/// retrocausal model.
struct ReducedRetrocausal {
  LocalResponse response_a;
  LocalResponse response_b;
  std::array<LatticeDistribution, 2> hidden_given_mb;
  std::array<Rational, 2> p_ma;  // [Mx, Mz]
  std::array<Rational, 2> p_mb;

  /// p(O_A, O_B | M_A, M_B) from the reduced joint.
  OutcomeDistribution statistics(SettingsPair s) const;
  /// Reduced joint p(O_A, O_B, lambda, M_A, M_B).
  Rational joint(Outcome o, std::uint32_t lambda, SettingsPair s) const;
};

struct ReducedNonlocal {
  PairResponse response_a;
  LocalResponse response_b;
  LatticeDistribution hidden;
  std::array<Rational, 2> p_ma;
  std::array<Rational, 2> p_mb;

  OutcomeDistribution statistics(SettingsPair s) const;
  Rational joint(Outcome o, std::uint32_t lambda, SettingsPair s) const;
};

ReducedRetrocausal reduce(const RetrocausalModel& m, const ChoicePrior& prior);
ReducedNonlocal reduce(const NonlocalModel& m, const ChoicePrior& prior);

}  // namespace belllab

#endif  // BELLLAB_MODELS_HPP
