#include "belllab/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "belllab/parallel.hpp"
#include "belllab/random.hpp"

namespace belllab {

namespace {

std::size_t pick(const std::vector<double>& cdf, double u) {
  for (std::size_t i = 0; i + 1 < cdf.size(); ++i)
    if (u < cdf[i]) return i;
  return cdf.size() - 1;
}

std::vector<double> cdf_of(std::span<const Rational> p) {
  std::vector<double> cdf;
  Rational running = 0;
  for (const auto& x : p) {
    running += x;
    cdf.push_back(running.get_d());
  }
  return cdf;
}

std::uint32_t draw_lambda(const LatticeDistribution& d, CounterRng& rng) {
  std::uint64_t ticket = rng.below(d.denominator());
  for (std::uint32_t lambda = 0; lambda < d.lambda_count(); ++lambda) {
    if (ticket < d[lambda]) return lambda;
    ticket -= d[lambda];
  }
  return d.lambda_count() - 1;  // unreachable: numerators sum to L
}

class Sampler {
 public:
  Sampler(const AnyModel& model, const ChoicePrior& prior)
      : model_(model), n_(prior.mechanism_count()) {
    const OutcomeKernel& kernel = kernel_of(model);
    outcome_cdf_.resize(kernel.lambda_count());
    for (std::uint32_t lambda = 0; lambda < kernel.lambda_count(); ++lambda)
      for (std::size_t s = 0; s < kSectorCount; ++s)
        outcome_cdf_[lambda][s] = cdf_of(kernel.row(lambda, SettingsPair::from_sector(s)));
    for (const WingPrior* w : {&prior.a, &prior.b}) {
      std::vector<double> mz;
      for (const auto& p : w->p_mz) mz.push_back(p.get_d());
      p_mz_.push_back(std::move(mz));
      choice_cdf_.push_back(cdf_of(w->choice));
    }
    if (const auto* sd = std::get_if<SuperdetModel>(&model)) {
      if (sd->mechanism_count() != n_)
        throw std::invalid_argument("choice prior and model disagree on N");
      tag_sub_ensembles_ = check_constraint_m(*sd);
    }
  }

  Context draw_context(CounterRng& rng) const {
    std::array<std::vector<Setting>, 2> wings;
    std::array<std::uint32_t, 2> gammas{};
    for (std::size_t w = 0; w < 2; ++w) {
      wings[w].resize(n_);
      for (std::uint32_t i = 0; i < n_; ++i)
        wings[w][i] = rng.uniform() < p_mz_[w][i] ? Setting::Mz : Setting::Mx;
      gammas[w] = static_cast<std::uint32_t>(pick(choice_cdf_[w], rng.uniform())) + 1;
    }
    return {std::move(wings[0]), std::move(wings[1]), gammas[0], gammas[1]};
  }

  RunRecord finish(std::uint64_t run, Context context, CounterRng& rng) const {
    const std::uint32_t lambda = draw_lambda(hidden_distribution(model_, context), rng);
    const SettingsPair s = induced_settings(context);
    const Outcome outcome = Outcome::from_index(pick(outcome_cdf_[lambda][s.sector()], rng.uniform()));
    std::optional<SubEnsemble> e;
    if (tag_sub_ensembles_) e = SubEnsemble{context.gamma_a(), context.gamma_b()};
    return {run, std::move(context), e, lambda, outcome};
  }

 private:
  const AnyModel& model_;
  std::uint32_t n_;
  bool tag_sub_ensembles_ = false;
  std::vector<std::array<std::vector<double>, kSectorCount>> outcome_cdf_;
  std::vector<std::vector<double>> p_mz_;
  std::vector<std::vector<double>> choice_cdf_;
};

double binomial_z(std::uint64_t count, std::uint64_t visits, double p) {
  const double expected = static_cast<double>(visits) * p;
  const double variance = expected * (1.0 - p);
  const double diff = static_cast<double>(count) - expected;
  if (variance <= 0.0)
    return std::abs(diff) < 0.5 ? 0.0 : std::numeric_limits<double>::infinity();
  return diff / std::sqrt(variance);
}

}  // namespace

std::vector<RunRecord> simulate(const AnyModel& model, std::uint64_t runs, std::uint64_t seed,
                                const ChoicePrior& prior, unsigned threads) {
  prior.validate();
  const Sampler sampler(model, prior);
  std::vector<std::optional<RunRecord>> slots(runs);
  parallel_for(runs, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      CounterRng rng(seed, r);
      Context c = sampler.draw_context(rng);
      slots[r] = sampler.finish(r, std::move(c), rng);
    }
  });
  std::vector<RunRecord> out;
  out.reserve(runs);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

std::vector<RunRecord> simulate_at(const AnyModel& model, const Context& context,
                                   std::uint64_t runs, std::uint64_t seed,
                                   std::uint64_t first_stream) {
  const Sampler sampler(model, ChoicePrior::uniform(context.mechanism_count()));
  std::vector<RunRecord> out;
  out.reserve(runs);
  for (std::uint64_t r = 0; r < runs; ++r) {
    CounterRng rng(seed, first_stream + r);
    out.push_back(sampler.finish(first_stream + r, context, rng));
  }
  return out;
}

EmpiricalTable EmpiricalTable::from_runs(const std::vector<RunRecord>& runs) {
  EmpiricalTable t;
  for (const auto& r : runs) {
    const std::size_t o = r.outcome.index();
    ++t.by_context[context_index(r.context)][o];
    ++t.by_sector[induced_settings(r.context).sector()][o];
    ++t.total;
  }
  return t;
}

std::vector<CellCheck> sector_convergence(const AnyModel& model, const ChoicePrior& prior,
                                          const std::vector<RunRecord>& runs) {
  const std::uint32_t n = prior.mechanism_count();
  std::array<OutcomeDistribution, kSectorCount> weighted;
  std::array<Rational, kSectorCount> mass;
  for (auto& w : weighted) w.fill(0);
  mass.fill(0);
  for (auto&& c : enumerate_contexts(n)) {
    const Rational p = prior.probability(c);
    if (p == 0) continue;
    const std::size_t s = induced_settings(c).sector();
    const auto stats = statistics(model, c);
    for (std::size_t o = 0; o < kOutcomeCount; ++o) weighted[s][o] += p * stats[o];
    mass[s] += p;
  }
  const EmpiricalTable table = EmpiricalTable::from_runs(runs);
  std::vector<CellCheck> cells;
  for (std::size_t s = 0; s < kSectorCount; ++s) {
    if (mass[s] == 0) continue;
    std::uint64_t visits = 0;
    for (auto c : table.by_sector[s]) visits += c;
    for (std::size_t o = 0; o < kOutcomeCount; ++o) {
      const double p = Rational(weighted[s][o] / mass[s]).get_d();
      const std::uint64_t count = table.by_sector[s][o];
      cells.push_back({s, o, p, visits, count, binomial_z(count, visits, p)});
    }
  }
  return cells;
}

CoincidenceReport verify_coincidence(const SuperdetModel& model,
                                     const std::vector<RunRecord>& runs) {
  if (!check_constraint_m(model))
    throw SubEnsemblesUndefined(
        "model correlates lambda with unused mechanisms; sub-ensembles are undefined");
  CoincidenceReport report;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    const auto& run = runs[r];
    if (!run.e || run.e->i != run.context.gamma_a() || run.e->j != run.context.gamma_b()) {
      report.consistent = false;
      report.violations.push_back(r);
    }
  }
  return report;
}

DependenceReport mechanism_dependence_demo(const AnyModel& model, std::uint32_t n,
                                           std::uint64_t runs, std::uint64_t seed,
                                           double z_threshold) {
  if (runs == 0) throw std::invalid_argument("runs must be >= 1");
  const ConditionReport condition = check_condition_ii(model, n, 1);
  if (condition.holds)
    throw NoDependence("statistics depend on the settings only; no dependence to demonstrate");
  const ContextPair pair = condition.witnesses.front();
  Context first = context_at(n, pair.reference);
  Context second = context_at(n, pair.other);
  const auto stats_first = statistics(model, first);
  const auto stats_second = statistics(model, second);

  std::size_t outcome = 0;
  Rational best = -1;
  for (std::size_t o = 0; o < kOutcomeCount; ++o) {
    const Rational gap = abs(stats_first[o] - stats_second[o]);
    if (gap > best) {
      best = gap;
      outcome = o;
    }
  }

  auto frequency = [&](const Context& c, std::uint64_t first_stream) {
    std::uint64_t hits = 0;
    for (const auto& r : simulate_at(model, c, runs, seed, first_stream))
      hits += r.outcome.index() == outcome;
    return static_cast<double>(hits) / static_cast<double>(runs);
  };
  const double f1 = frequency(first, 0);
  const double f2 = frequency(second, runs);
  const double pooled = (f1 + f2) / 2.0;
  const double se = std::sqrt(pooled * (1.0 - pooled) * 2.0 / static_cast<double>(runs));
  const double z = se > 0 ? (f1 - f2) / se : 0.0;

  return {std::move(first), std::move(second), pair.sector, outcome,
          stats_first[outcome], stats_second[outcome], runs, f1, f2, z, z_threshold,
          std::abs(z) > z_threshold};
}

void write_runs_csv(std::ostream& out, const std::vector<RunRecord>& runs) {
  out << "run,alpha,beta,gA,gB,MA,MB,lambda,OA,OB\n";
  for (const auto& r : runs) {
    const SettingsPair s = induced_settings(r.context);
    out << r.run << ',' << r.context.alpha_string() << ',' << r.context.beta_string() << ','
        << r.context.gamma_a() << ',' << r.context.gamma_b() << ',' << to_char(s.a) << ','
        << to_char(s.b) << ',' << r.lambda << ',' << r.outcome.a << ',' << r.outcome.b << '\n';
  }
}

}  // namespace belllab
