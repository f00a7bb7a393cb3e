// Model fixtures shared by unit and acceptance tests.
#ifndef BELLLAB_TESTS_BUILDERS_HPP
#define BELLLAB_TESTS_BUILDERS_HPP

#include <random>

#include "belllab/models.hpp"
#include "oracles.hpp"

namespace belllab::testing {

/// Lambda = 2, N = 2, injective kernel, every table (1,1)/2 except two
/// contexts of sector xx: index 0 gets (2,0)/2 and index 16 gets (0,2)/2.
inline SuperdetModel violating_model() {
  std::vector<LatticeDistribution> tables(context_count(2), LatticeDistribution({1, 1}, 2));
  tables[0] = LatticeDistribution({2, 0}, 2);
  tables[16] = LatticeDistribution({0, 2}, 2);
  return SuperdetModel(2, OutcomeKernel::injective(2), std::move(tables));
}

inline std::array<LatticeDistribution, kSectorCount> random_sector_tables(
    std::mt19937_64& rng, std::uint32_t lambda_count, std::uint32_t denominator) {
  return {random_lattice(rng, lambda_count, denominator), random_lattice(rng, lambda_count, denominator),
          random_lattice(rng, lambda_count, denominator), random_lattice(rng, lambda_count, denominator)};
}

inline SuperdetModel random_superdet(std::mt19937_64& rng, std::uint32_t n,
                                     const OutcomeKernel& kernel, std::uint32_t denominator) {
  const auto all = brute_force_lattice(kernel.lambda_count(), denominator);
  std::vector<LatticeDistribution> tables;
  for (std::uint64_t i = 0; i < context_count(n); ++i)
    tables.push_back(uniform_lattice(rng, all, denominator));
  return SuperdetModel(n, kernel, std::move(tables));
}

inline LocalResponse random_local(std::mt19937_64& rng, std::uint32_t lambda_count) {
  LocalResponse r(lambda_count);
  for (auto& row : r)
    for (auto& p : row) p = random_probability(rng);
  return r;
}

inline RetrocausalModel random_retrocausal(std::mt19937_64& rng, std::uint32_t lambda_count,
                                           std::uint32_t denominator = 6) {
  return RetrocausalModel(random_local(rng, lambda_count), random_local(rng, lambda_count),
                          {random_lattice(rng, lambda_count, denominator),
                           random_lattice(rng, lambda_count, denominator)});
}

inline NonlocalModel random_nonlocal(std::mt19937_64& rng, std::uint32_t lambda_count,
                                     std::uint32_t denominator = 6) {
  PairResponse a(lambda_count);
  for (auto& row : a)
    for (auto& p : row) p = random_probability(rng);
  return NonlocalModel(std::move(a), random_local(rng, lambda_count),
                       random_lattice(rng, lambda_count, denominator));
}

}  // namespace belllab::testing

#endif  // BELLLAB_TESTS_BUILDERS_HPP
