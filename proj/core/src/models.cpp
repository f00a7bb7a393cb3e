#include "belllab/models.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>

namespace belllab {

namespace {

void require_common_denominator(std::span<const LatticeDistribution> tables,
                                std::uint32_t lambda_count) {
  for (const auto& t : tables) {
    if (t.lambda_count() != lambda_count)
      throw std::invalid_argument("hidden-variable table has Lambda = " +
                                  std::to_string(t.lambda_count()) + ", kernel has " +
                                  std::to_string(lambda_count));
    if (t.denominator() != tables.front().denominator())
      throw std::invalid_argument("hidden-variable tables must share one denominator");
  }
}

void require_probabilities(std::span<const Rational> values, const char* what) {
  for (const auto& p : values)
    if (p < 0 || p > 1) throw std::invalid_argument(std::string(what) + " outside [0, 1]");
}

template <typename ResponseA>
void validate_responses(const ResponseA& a, const LocalResponse& b) {
  if (a.empty()) throw std::invalid_argument("model needs Lambda >= 1");
  if (b.size() != a.size()) throw std::invalid_argument("wing responses disagree on Lambda");
  for (const auto& r : a) require_probabilities(r, "response_a");
  for (const auto& r : b) require_probabilities(r, "response_b");
}

Rational local(const Rational& p_plus, int outcome) {
  return outcome > 0 ? p_plus : 1 - p_plus;
}

OutcomeKernel product_kernel(
    std::size_t lambda_count,
    const std::function<Rational(std::size_t, SettingsPair)>& p_a_plus,
    const std::function<Rational(std::size_t, SettingsPair)>& p_b_plus) {
  std::vector<OutcomeKernel::LambdaRows> rows(lambda_count);
  for (std::size_t lambda = 0; lambda < lambda_count; ++lambda)
    for (std::size_t s = 0; s < kSectorCount; ++s) {
      const SettingsPair settings = SettingsPair::from_sector(s);
      for (std::size_t o = 0; o < kOutcomeCount; ++o) {
        const Outcome out = Outcome::from_index(o);
        rows[lambda][s][o] = local(p_a_plus(lambda, settings), out.a) *
                             local(p_b_plus(lambda, settings), out.b);
      }
    }
  return OutcomeKernel(std::move(rows));
}

Rational max_abs_difference(const OutcomeDistribution& x, const OutcomeDistribution& y) {
  Rational gap = 0;
  for (std::size_t o = 0; o < kOutcomeCount; ++o) gap = std::max<Rational>(gap, abs(x[o] - y[o]));
  return gap;
}

template <typename StatisticsAt>
ConditionReport sweep_sectors(std::uint32_t n, std::size_t witness_cap, StatisticsAt&& stats_at) {
  ConditionReport report;
  const auto sectors = context_indices_by_settings(n);
  for (std::size_t s = 0; s < kSectorCount; ++s) {
    const auto& members = sectors[s];
    if (members.size() < 2) continue;
    const OutcomeDistribution reference = stats_at(members.front());
    for (std::size_t k = 1; k < members.size(); ++k) {
      const OutcomeDistribution other = stats_at(members[k]);
      if (other == reference) continue;
      report.holds = false;
      ++report.violation_count;
      report.max_gap = std::max(report.max_gap, max_abs_difference(reference, other));
      if (report.witnesses.size() < witness_cap)
        report.witnesses.push_back({members.front(), members[k], s});
    }
  }
  return report;
}

// Tables must agree whenever key(context) agrees.
template <typename Key>
bool tables_depend_only_on(const SuperdetModel& m, std::size_t key_count, Key&& key) {
  std::vector<std::optional<std::uint64_t>> first(key_count);
  const std::uint64_t total = context_count(m.mechanism_count());
  for (std::uint64_t i = 0; i < total; ++i) {
    const Context c = context_at(m.mechanism_count(), i);
    auto& slot = first[key(c)];
    if (!slot) {
      slot = i;
    } else if (m.table(*slot) != m.table(i)) {
      return false;
    }
  }
  return true;
}

std::array<Rational, 2> setting_marginal(const WingPrior& w) {
  // Sum over every output string and choice of p({outputs}) p(gamma)
  // [outputs[gamma] == Mz].
  const std::size_t n = w.p_mz.size();
  if (n > 24) throw std::invalid_argument("too many mechanisms to sum out explicitly");
  Rational mz = 0;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
    Rational p_outputs = 1;
    for (std::size_t i = 0; i < n; ++i)
      p_outputs *= (bits >> i) & 1u ? w.p_mz[i] : 1 - w.p_mz[i];
    if (p_outputs == 0) continue;
    for (std::size_t g = 0; g < n; ++g)
      if ((bits >> g) & 1u) mz += p_outputs * w.choice[g];
  }
  return {1 - mz, mz};
}

}  // namespace

SuperdetModel::SuperdetModel(std::uint32_t n, OutcomeKernel kernel,
                             std::vector<LatticeDistribution> tables)
    : n_(n), kernel_(std::move(kernel)), tables_(std::move(tables)) {
  if (tables_.size() != context_count(n))
    throw std::invalid_argument("superdeterministic model needs " +
                                std::to_string(context_count(n)) + " tables, got " +
                                std::to_string(tables_.size()));
  require_common_denominator(tables_, kernel_.lambda_count());
}

const LatticeDistribution& SuperdetModel::table(const Context& c) const {
  if (c.mechanism_count() != n_) throw std::invalid_argument("context has the wrong N");
  return tables_[context_index(c)];
}

RetrocausalModel::RetrocausalModel(LocalResponse response_a, LocalResponse response_b,
                                   std::array<LatticeDistribution, 2> hidden_given_mb)
    : response_a_(std::move(response_a)),
      response_b_(std::move(response_b)),
      hidden_(std::move(hidden_given_mb)),
      kernel_((validate_responses(response_a_, response_b_),
               product_kernel(
          response_a_.size(),
          [this](std::size_t l, SettingsPair s) { return response_a_.at(l)[static_cast<std::size_t>(s.a)]; },
          [this](std::size_t l, SettingsPair s) { return response_b_.at(l)[static_cast<std::size_t>(s.b)]; }))) {
  require_common_denominator(hidden_, lambda_count());
}

NonlocalModel::NonlocalModel(PairResponse response_a, LocalResponse response_b,
                             LatticeDistribution hidden)
    : response_a_(std::move(response_a)),
      response_b_(std::move(response_b)),
      hidden_(std::move(hidden)),
      kernel_((validate_responses(response_a_, response_b_),
               product_kernel(
          response_a_.size(),
          [this](std::size_t l, SettingsPair s) { return response_a_.at(l)[s.sector()]; },
          [this](std::size_t l, SettingsPair s) { return response_b_.at(l)[static_cast<std::size_t>(s.b)]; }))) {
  require_common_denominator(std::span(&hidden_, 1), lambda_count());
}

std::string_view model_class_name(const AnyModel& m) {
  switch (m.index()) {
    case 0:
      return "superdeterministic";
    case 1:
      return "retrocausal";
    default:
      return "nonlocal";
  }
}

const LatticeDistribution& hidden_distribution(const AnyModel& m, const Context& c) {
  return std::visit(
      [&c](const auto& model) -> const LatticeDistribution& {
        using T = std::decay_t<decltype(model)>;
        if constexpr (std::is_same_v<T, SuperdetModel>) {
          return model.table(c);
        } else if constexpr (std::is_same_v<T, RetrocausalModel>) {
          return model.hidden(induced_settings(c).b);
        } else {
          return model.hidden();
        }
      },
      m);
}

const OutcomeKernel& kernel_of(const AnyModel& m) {
  return std::visit([](const auto& model) -> const OutcomeKernel& { return model.kernel(); }, m);
}

OutcomeDistribution statistics(const SuperdetModel& m, const Context& c) {
  return m.kernel().statistics(m.table(c), induced_settings(c));
}

OutcomeDistribution statistics(const RetrocausalModel& m, const Context& c) {
  const SettingsPair s = induced_settings(c);
  return m.kernel().statistics(m.hidden(s.b), s);
}

OutcomeDistribution statistics(const NonlocalModel& m, const Context& c) {
  return m.kernel().statistics(m.hidden(), induced_settings(c));
}

OutcomeDistribution statistics(const AnyModel& m, const Context& c) {
  return std::visit([&c](const auto& model) { return statistics(model, c); }, m);
}

ConditionReport check_condition_ii(const SuperdetModel& m, std::size_t witness_cap) {
  const std::uint32_t n = m.mechanism_count();
  return sweep_sectors(n, witness_cap, [&](std::uint64_t i) {
    return m.kernel().statistics(m.table(i), induced_settings(context_at(n, i)));
  });
}

ConditionReport check_condition_ii(const AnyModel& m, std::uint32_t n, std::size_t witness_cap) {
  if (const auto* sd = std::get_if<SuperdetModel>(&m)) {
    if (sd->mechanism_count() != n) throw std::invalid_argument("model has a different N");
    return check_condition_ii(*sd, witness_cap);
  }
  return sweep_sectors(n, witness_cap,
                       [&](std::uint64_t i) { return statistics(m, context_at(n, i)); });
}

bool check_constraint_m(const SuperdetModel& m) {
  const std::uint32_t n = m.mechanism_count();
  return tables_depend_only_on(m, std::size_t{n} * n * kSectorCount, [n](const Context& c) {
    return ((c.gamma_a() - 1) * std::size_t{n} + (c.gamma_b() - 1)) * kSectorCount +
           induced_settings(c).sector();
  });
}

bool check_constraint_n(const SuperdetModel& m) {
  return tables_depend_only_on(m, kSectorCount,
                               [](const Context& c) { return induced_settings(c).sector(); });
}

SuperdetModel make_constrained(std::uint32_t n,
                               const std::array<LatticeDistribution, kSectorCount>& tables,
                               OutcomeKernel kernel) {
  const std::uint64_t total = context_count(n);
  std::vector<LatticeDistribution> per_context;
  per_context.reserve(total);
  for (std::uint64_t i = 0; i < total; ++i)
    per_context.push_back(tables[induced_settings(context_at(n, i)).sector()]);
  return SuperdetModel(n, std::move(kernel), std::move(per_context));
}

OutcomeDistribution ReducedRetrocausal::statistics(SettingsPair s) const {
  OutcomeDistribution out;
  out.fill(0);
  const auto& hidden = hidden_given_mb[static_cast<std::size_t>(s.b)];
  for (std::uint32_t lambda = 0; lambda < response_a.size(); ++lambda) {
    const Rational w = hidden.probability(lambda);
    if (w == 0) continue;
    for (std::size_t o = 0; o < kOutcomeCount; ++o) {
      const Outcome oc = Outcome::from_index(o);
      out[o] += local(response_a[lambda][static_cast<std::size_t>(s.a)], oc.a) *
                local(response_b[lambda][static_cast<std::size_t>(s.b)], oc.b) * w;
    }
  }
  return out;
}

Rational ReducedRetrocausal::joint(Outcome o, std::uint32_t lambda, SettingsPair s) const {
  return local(response_a.at(lambda)[static_cast<std::size_t>(s.a)], o.a) *
         local(response_b.at(lambda)[static_cast<std::size_t>(s.b)], o.b) *
         hidden_given_mb[static_cast<std::size_t>(s.b)].probability(lambda) *
         p_ma[static_cast<std::size_t>(s.a)] * p_mb[static_cast<std::size_t>(s.b)];
}

OutcomeDistribution ReducedNonlocal::statistics(SettingsPair s) const {
  OutcomeDistribution out;
  out.fill(0);
  for (std::uint32_t lambda = 0; lambda < response_a.size(); ++lambda) {
    const Rational w = hidden.probability(lambda);
    if (w == 0) continue;
    for (std::size_t o = 0; o < kOutcomeCount; ++o) {
      const Outcome oc = Outcome::from_index(o);
      out[o] += local(response_a[lambda][s.sector()], oc.a) *
                local(response_b[lambda][static_cast<std::size_t>(s.b)], oc.b) * w;
    }
  }
  return out;
}

Rational ReducedNonlocal::joint(Outcome o, std::uint32_t lambda, SettingsPair s) const {
  return local(response_a.at(lambda)[s.sector()], o.a) *
         local(response_b.at(lambda)[static_cast<std::size_t>(s.b)], o.b) *
         hidden.probability(lambda) * p_ma[static_cast<std::size_t>(s.a)] *
         p_mb[static_cast<std::size_t>(s.b)];
}

ReducedRetrocausal reduce(const RetrocausalModel& m, const ChoicePrior& prior) {
  prior.validate();
  return {m.response_a(), m.response_b(), {m.hidden(Setting::Mx), m.hidden(Setting::Mz)},
          setting_marginal(prior.a), setting_marginal(prior.b)};
}

ReducedNonlocal reduce(const NonlocalModel& m, const ChoicePrior& prior) {
  prior.validate();
  return {m.response_a(), m.response_b(), m.hidden(), setting_marginal(prior.a),
          setting_marginal(prior.b)};
}

}  // namespace belllab
