#include "belllab/finetune.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "belllab/parallel.hpp"

namespace belllab {

namespace {

// Sizes of the classes of lattice points sharing one statistics vector, per
// sector, plus each configuration's class (in rank order).
struct SectorClasses {
  std::vector<std::uint64_t> class_sizes;
  std::vector<std::uint32_t> class_of;
};

BigInt required_work(std::uint32_t lambda_count, std::uint32_t denominator) {
  return count_configurations(lambda_count, denominator) * lambda_count * kSectorCount;
}

void enforce_budget(std::uint32_t lambda_count, std::uint32_t denominator,
                    const CountBudget& budget) {
  const BigInt work = required_work(lambda_count, denominator);
  if (work > BigInt(std::to_string(budget.max_work)))
    throw BudgetExceeded("brute-force count needs ~" + work.get_str() +
                             " kernel evaluations, budget is " + std::to_string(budget.max_work),
                         work);
}

SectorClasses classify(const OutcomeKernel& kernel, SettingsPair s, std::uint32_t denominator) {
  const ScaledSectorKernel scaled(kernel, s);
  std::map<ScaledSectorKernel::Key, std::uint32_t> ids;
  SectorClasses out;
  for (const auto& q : enumerate_configurations(kernel.lambda_count(), denominator)) {
    auto [it, inserted] =
        ids.try_emplace(scaled.key(q), static_cast<std::uint32_t>(out.class_sizes.size()));
    if (inserted) out.class_sizes.push_back(0);
    ++out.class_sizes[it->second];
    out.class_of.push_back(it->second);
  }
  return out;
}

std::array<SectorClasses, kSectorCount> classify_all(const OutcomeKernel& kernel,
                                                     std::uint32_t denominator,
                                                     const CountBudget& budget) {
  enforce_budget(kernel.lambda_count(), denominator, budget);
  std::array<SectorClasses, kSectorCount> out;
  parallel_for(kSectorCount, budget.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t s = begin; s < end; ++s)
      out[s] = classify(kernel, SettingsPair::from_sector(s), denominator);
  });
  return out;
}

// sum_j (v^j)^(k - 1) = sum over classes of size c of c * c^(k - 1) = c^k.
BigInt sector_total(const SectorClasses& classes, std::uint64_t contexts_per_sector) {
  BigInt total = 0;
  for (std::uint64_t c : classes.class_sizes) total += pow(BigInt(std::to_string(c)), contexts_per_sector);
  return total;
}

double log10_sector_total(const SectorClasses& classes, double contexts_per_sector) {
  double peak = -std::numeric_limits<double>::infinity();
  for (std::uint64_t c : classes.class_sizes)
    peak = std::max(peak, contexts_per_sector * std::log10(static_cast<double>(c)));
  double acc = 0;
  for (std::uint64_t c : classes.class_sizes)
    acc += std::pow(10.0, contexts_per_sector * std::log10(static_cast<double>(c)) - peak);
  return peak + std::log10(acc);
}

BigInt omega_of(std::uint32_t n) {
  if (n == 0) throw std::invalid_argument("N must be >= 1");
  BigInt omega = BigInt(n) * n;
  mpz_mul_2exp(omega.get_mpz_t(), omega.get_mpz_t(), 2 * static_cast<mp_bitcnt_t>(n));
  return omega;
}

double to_double(const BigInt& v) { return v.get_d(); }

void require_positive(std::uint32_t n, std::uint32_t lambda_count, std::uint32_t denominator) {
  if (n == 0 || lambda_count == 0 || denominator == 0)
    throw std::invalid_argument("N, Lambda and L must all be >= 1");
}

FineTuningReport general_from_classes(const std::array<SectorClasses, kSectorCount>& classes,
                                      std::uint32_t n, std::uint32_t lambda_count,
                                      std::uint32_t denominator) {
  FineTuningReport r{FineTuningMode::GeneralBruteForce, n, lambda_count, denominator,
                     omega_of(n), count_configurations(lambda_count, denominator),
                     std::nullopt, std::nullopt, 0.0, {}};
  const BigInt per_sector = r.omega / 4;
  const double log10_v = log10(r.v_total);
  const double total_digits = to_double(r.omega) * log10_v;

  if (total_digits < static_cast<double>(kExactDigitBudget)) {
    const std::uint64_t k = per_sector.get_ui();
    BigInt n_f = 1;
    for (const auto& c : classes) n_f *= sector_total(c, k);
    Rational ratio(n_f, pow(r.v_total, r.omega.get_ui()));
    ratio.canonicalize();
    r.log10_one_minus_f = log10(ratio);
    r.n_f = std::move(n_f);
    r.one_minus_f = std::move(ratio);
  } else {
    double log10_n_f = 0;
    for (const auto& c : classes) log10_n_f += log10_sector_total(c, to_double(per_sector));
    r.log10_one_minus_f = log10_n_f - to_double(r.omega) * log10_v;
  }
  if (n == 1) r.log10_one_minus_f = 0.0;

  if (r.v_total <= 64) {
    for (const auto& c : classes) {
      std::vector<BigInt> v;
      for (std::uint32_t id : c.class_of) v.emplace_back(std::to_string(c.class_sizes[id]));
      r.v_per_sector.push_back(std::move(v));
    }
  }
  return r;
}

}  // namespace

std::string to_string(FineTuningMode mode) {
  return mode == FineTuningMode::ConstrainedClosedForm ? "constrained-closed-form"
                                                       : "general-bruteforce";
}

std::optional<Rational> FineTuningReport::f() const {
  if (!one_minus_f) return std::nullopt;
  return Rational(1 - *one_minus_f);
}

double FineTuningReport::f_approx() const {
  if (one_minus_f) return Rational(1 - *one_minus_f).get_d();
  return 1.0 - std::pow(10.0, log10_one_minus_f);
}

FineTuningReport f_constrained(std::uint32_t n, std::uint32_t lambda_count,
                               std::uint32_t denominator) {
  require_positive(n, lambda_count, denominator);
  FineTuningReport r{FineTuningMode::ConstrainedClosedForm, n, lambda_count, denominator,
                     omega_of(n), count_configurations(lambda_count, denominator),
                     std::nullopt, std::nullopt, 0.0, {}};
  const double log10_v = log10(r.v_total);
  const BigInt excess = r.omega - 4;  // 1 - F = V^-(Omega - 4)
  if (4 * log10_v < static_cast<double>(kExactDigitBudget)) r.n_f = pow(r.v_total, 4);
  if (to_double(excess) * log10_v < static_cast<double>(kExactDigitBudget)) {
    r.one_minus_f = Rational(BigInt(1), pow(r.v_total, excess.get_ui()));
    r.one_minus_f->canonicalize();
  }
  r.log10_one_minus_f = n == 1 ? 0.0 : -to_double(excess) * log10_v;
  return r;
}

BigInt count_vj(const OutcomeKernel& kernel, SettingsPair s, const LatticeDistribution& config) {
  const OutcomeDistribution target = kernel.statistics(config, s);
  BigInt v = 0;
  for (const auto& q : enumerate_configurations(kernel.lambda_count(), config.denominator()))
    if (kernel.statistics(q, s) == target) ++v;
  return v;
}

std::vector<BigInt> sector_vj(const OutcomeKernel& kernel, SettingsPair s,
                              std::uint32_t denominator, const CountBudget& budget) {
  enforce_budget(kernel.lambda_count(), denominator, budget);
  const SectorClasses classes = classify(kernel, s, denominator);
  std::vector<BigInt> v;
  v.reserve(classes.class_of.size());
  for (std::uint32_t id : classes.class_of) v.emplace_back(std::to_string(classes.class_sizes[id]));
  return v;
}

BigInt constrained_configuration_count(const OutcomeKernel& kernel, std::uint32_t denominator,
                                       std::uint64_t contexts_per_sector,
                                       const CountBudget& budget) {
  if (contexts_per_sector == 0) throw std::invalid_argument("need >= 1 context per sector");
  const auto classes = classify_all(kernel, denominator, budget);
  BigInt n_f = 1;
  for (const auto& c : classes) n_f *= sector_total(c, contexts_per_sector);
  return n_f;
}

FineTuningReport f_general(const OutcomeKernel& kernel, std::uint32_t n,
                           std::uint32_t denominator, const CountBudget& budget) {
  require_positive(n, kernel.lambda_count(), denominator);
  return general_from_classes(classify_all(kernel, denominator, budget), n,
                              kernel.lambda_count(), denominator);
}

std::vector<LimitRow> f_general_limit_study(const OutcomeKernel& kernel,
                                            std::uint32_t denominator,
                                            const std::vector<std::uint32_t>& n_values,
                                            const CountBudget& budget) {
  const auto classes = classify_all(kernel, denominator, budget);
  std::vector<LimitRow> rows;
  rows.reserve(n_values.size());
  for (std::uint32_t n : n_values) {
    require_positive(n, kernel.lambda_count(), denominator);
    rows.push_back(
        {n, general_from_classes(classes, n, kernel.lambda_count(), denominator).log10_one_minus_f});
  }
  return rows;
}

}  // namespace belllab
