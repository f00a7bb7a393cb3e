#include "belllab/kernel.hpp"

#include <random>
#include <stdexcept>

#include "belllab/random.hpp"

namespace belllab {

OutcomeKernel::OutcomeKernel(std::vector<LambdaRows> rows) : rows_(std::move(rows)) {
  if (rows_.empty()) throw std::invalid_argument("kernel needs Lambda >= 1");
  for (std::size_t lambda = 0; lambda < rows_.size(); ++lambda) {
    for (std::size_t s = 0; s < kSectorCount; ++s) {
      Rational total = 0;
      for (auto& p : rows_[lambda][s]) {
        p.canonicalize();
        if (p < 0)
          throw std::invalid_argument("negative kernel entry at lambda " +
                                      std::to_string(lambda));
        total += p;
      }
      if (total != 1)
        throw std::invalid_argument("kernel row (lambda " + std::to_string(lambda) +
                                    ", " + SettingsPair::from_sector(s).to_string() +
                                    ") sums to " + total.get_str());
    }
  }
}

OutcomeKernel OutcomeKernel::deterministic(
    std::uint32_t lambda_count,
    const std::function<Outcome(std::uint32_t, SettingsPair)>& f) {
  std::vector<LambdaRows> rows(lambda_count);
  for (std::uint32_t lambda = 0; lambda < lambda_count; ++lambda)
    for (std::size_t s = 0; s < kSectorCount; ++s) {
      auto& row = rows[lambda][s];
      row.fill(0);
      row[f(lambda, SettingsPair::from_sector(s)).index()] = 1;
    }
  return OutcomeKernel(std::move(rows));
}

OutcomeKernel OutcomeKernel::injective(std::uint32_t lambda_count) {
  if (lambda_count == 0 || lambda_count > kOutcomeCount)
    throw std::invalid_argument("injective kernel needs 1 <= Lambda <= 4");
  return deterministic(lambda_count,
                       [](std::uint32_t lambda, SettingsPair) { return Outcome::from_index(lambda); });
}

OutcomeKernel OutcomeKernel::readout() { return injective(4); }

OutcomeKernel OutcomeKernel::constant(std::uint32_t lambda_count) {
  Row uniform;
  uniform.fill(Rational(1, 4));
  LambdaRows all;
  all.fill(uniform);
  return OutcomeKernel(std::vector<LambdaRows>(lambda_count, all));
}

OutcomeKernel OutcomeKernel::random(std::uint32_t lambda_count, std::uint64_t seed,
                                    std::uint32_t granularity) {
  if (granularity == 0) throw std::invalid_argument("granularity must be positive");
  CounterRng rng(seed, 0);
  std::vector<LambdaRows> rows(lambda_count);
  for (auto& per_lambda : rows)
    for (auto& row : per_lambda) {
      // Stars and bars: a uniform composition of `granularity` into 4 parts.
      std::array<std::uint32_t, kOutcomeCount> parts{};
      for (std::uint32_t unit = 0; unit < granularity; ++unit) ++parts[rng.below(kOutcomeCount)];
      for (std::size_t o = 0; o < kOutcomeCount; ++o) row[o] = Rational(parts[o], granularity);
    }
  return OutcomeKernel(std::move(rows));
}

OutcomeDistribution OutcomeKernel::statistics(const LatticeDistribution& q,
                                              SettingsPair s) const {
  if (q.lambda_count() != lambda_count())
    throw std::invalid_argument("kernel has Lambda = " + std::to_string(lambda_count()) +
                                " but distribution has " + std::to_string(q.lambda_count()));
  OutcomeDistribution out;
  out.fill(0);
  for (std::uint32_t lambda = 0; lambda < lambda_count(); ++lambda) {
    if (q[lambda] == 0) continue;
    const Rational weight = q.probability(lambda);
    const auto& r = row(lambda, s);
    for (std::size_t o = 0; o < kOutcomeCount; ++o) out[o] += r[o] * weight;
  }
  return out;
}

ScaledSectorKernel::ScaledSectorKernel(const OutcomeKernel& kernel, SettingsPair s) {
  BigInt scale = 1;
  for (std::uint32_t lambda = 0; lambda < kernel.lambda_count(); ++lambda)
    for (const auto& p : kernel.row(lambda, s)) mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), p.get_den_mpz_t());
  weights_.resize(kernel.lambda_count());
  for (std::uint32_t lambda = 0; lambda < kernel.lambda_count(); ++lambda)
    for (std::size_t o = 0; o < kOutcomeCount; ++o) {
      const Rational& p = kernel.row(lambda, s)[o];
      weights_[lambda][o] = p.get_num() * (scale / p.get_den());
    }
}

ScaledSectorKernel::Key ScaledSectorKernel::key(const LatticeDistribution& q) const {
  if (q.lambda_count() != weights_.size())
    throw std::invalid_argument("kernel and distribution disagree on Lambda");
  Key k;
  k.fill(0);
  for (std::size_t lambda = 0; lambda < weights_.size(); ++lambda) {
    if (q[lambda] == 0) continue;
    for (std::size_t o = 0; o < kOutcomeCount; ++o) k[o] += weights_[lambda][o] * q[lambda];
  }
  return k;
}

}  // namespace belllab
