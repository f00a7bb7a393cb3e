#include "commands.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "belllab/entropy.hpp"
#include "belllab/finetune.hpp"
#include "belllab/models.hpp"
#include "belllab/montecarlo.hpp"
#include "belllab/random.hpp"
#include "belllab/serialize.hpp"
#include "belllab/simplex.hpp"

namespace belllab::cli {

using nlohmann::json;

namespace {

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-")
    std::cout << text << std::flush;
  else
    write_file_atomic(path, text);
}

void emit(const json& j, const std::string& path) { emit(j.dump(2) + "\n", path); }

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelFileError("cannot read " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ModelFileError(path + ": " + e.what());
  }
}

AnyModel load_model(const std::string& path) {
  try {
    return model_from_json(read_json_file(path));
  } catch (const ModelFileError& e) {
    throw ModelFileError(path + ": " + e.what());
  }
}

OutcomeKernel make_kernel(const std::string& source, std::optional<std::uint32_t> lambda,
                          std::uint64_t seed) {
  if (source == "readout") {
    if (lambda && *lambda != 4) throw ArgumentError("the readout kernel has Lambda = 4");
    return OutcomeKernel::readout();
  }
  if (source == "injective" || source == "constant" || source == "random") {
    if (!lambda) throw ArgumentError("--lambda is required for the " + source + " kernel");
    if (source == "injective") return OutcomeKernel::injective(*lambda);
    if (source == "constant") return OutcomeKernel::constant(*lambda);
    return OutcomeKernel::random(*lambda, seed);
  }
  if (!std::filesystem::exists(source))
    throw ArgumentError("unknown kernel '" + source + "' (readout, injective, constant, random or a JSON file)");
  OutcomeKernel kernel = [&] {
    try {
      return kernel_from_json(read_json_file(source));
    } catch (const ModelFileError& e) {
      throw ModelFileError(source + ": " + e.what());
    }
  }();
  if (lambda && *lambda != kernel.lambda_count())
    throw ArgumentError("kernel file has Lambda = " + std::to_string(kernel.lambda_count()));
  return kernel;
}

std::vector<double> double_array(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key) || !j[key].is_array())
    throw ModelFileError(std::string("prior needs a numeric array '") + key + "'");
  std::vector<double> out;
  for (const auto& x : j[key]) {
    if (!x.is_number()) throw ModelFileError(std::string("'") + key + "' must hold numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

SequencePrior load_sequence_prior(const std::string& source, std::uint32_t n, std::uint32_t runs) {
  if (source == "uniform") return SequencePrior::uniform(n, runs);
  const json j = read_json_file(source);
  const std::string family = j.value("family", "");
  try {
    if (family == "product") return SequencePrior::product(n, runs, double_array(j, "per_run"));
    if (family == "dense") return SequencePrior::dense(n, runs, double_array(j, "p"));
  } catch (const std::invalid_argument& e) {
    throw ModelFileError(source + ": " + e.what());
  }
  throw ModelFileError(source + ": 'family' must be \"product\" or \"dense\"");
}

ChoicePrior load_choice_prior(const std::string& path, std::uint32_t n) {
  if (path.empty()) return ChoicePrior::uniform(n);
  const json j = read_json_file(path);
  auto wing = [&](const char* key) {
    if (!j.contains(key)) return WingPrior::uniform(n);
    WingPrior w;
    for (const char* field : {"p_mz", "choice"}) {
      auto& target = std::string(field) == "p_mz" ? w.p_mz : w.choice;
      if (!j[key].contains(field) || !j[key][field].is_array())
        throw ModelFileError(path + ": wing '" + key + "' needs array '" + field + "'");
      for (const auto& x : j[key][field]) {
        try {
          target.push_back(x.is_string() ? parse_rational(x.get<std::string>()) : parse_rational(x.dump()));
        } catch (const std::invalid_argument& e) {
          throw ModelFileError(path + ": " + e.what());
        }
      }
    }
    return w;
  };
  ChoicePrior prior{wing("a"), wing("b")};
  try {
    prior.validate();
  } catch (const std::invalid_argument& e) {
    throw ModelFileError(path + ": " + e.what());
  }
  if (prior.mechanism_count() != n)
    throw ModelFileError(path + ": prior has " + std::to_string(prior.mechanism_count()) +
                         " mechanisms, model needs " + std::to_string(n));
  return prior;
}

std::uint32_t mechanisms_for(const AnyModel& model, std::optional<std::uint32_t> requested) {
  if (const auto* s = std::get_if<SuperdetModel>(&model)) {
    if (requested && *requested != s->mechanism_count())
      throw ArgumentError("model file has N = " + std::to_string(s->mechanism_count()));
    return s->mechanism_count();
  }
  const std::uint32_t n = requested.value_or(2);
  if (n == 0) throw ArgumentError("--n must be >= 1");
  return n;
}

json outcome_json(std::size_t index) {
  const Outcome o = Outcome::from_index(index);
  return {{"OA", o.a}, {"OB", o.b}};
}

// Uniform lattice point through a uniform rank.
LatticeDistribution draw_lattice(CounterRng& rng, std::uint32_t lambda, std::uint32_t l) {
  const auto v = count_configurations_u64(lambda, l);
  if (!v) throw ArgumentError("V(Lambda, L) is too large to sample uniformly");
  return unrank(lambda, l, BigInt(static_cast<unsigned long>(rng.below(*v))));
}

Rational draw_probability(CounterRng& rng) {
  Rational r(static_cast<unsigned long>(rng.below(9)), 8UL);
  r.canonicalize();
  return r;
}

LocalResponse draw_local(CounterRng& rng, std::uint32_t lambda) {
  LocalResponse r(lambda);
  for (auto& row : r)
    for (auto& p : row) p = draw_probability(rng);
  return r;
}

}  // namespace

int run_count(const CountArgs& args) {
  std::cout << count_configurations(args.lambda, args.l).get_str() << '\n';
  return kOk;
}

int run_enumerate(const EnumerateArgs& args) {
  const BigInt v = count_configurations(args.lambda, args.l);
  BigInt first;
  if (first.set_str(args.first, 10) != 0 || first < 0) throw ArgumentError("--first must be a nonnegative integer");
  const BigInt available = first < v ? BigInt(v - first) : BigInt(0);
  const BigInt rows = args.limit ? std::min(available, BigInt(static_cast<unsigned long>(*args.limit))) : available;
  if (rows > BigInt(static_cast<unsigned long>(args.max_rows)))
    throw Refused("enumeration would write " + rows.get_str() + " rows (limit " +
                      std::to_string(args.max_rows) + "); pass --limit or raise --max-rows",
                  rows.get_str());
  std::ostringstream out;
  out << "rank";
  for (std::uint32_t i = 0; i < args.lambda; ++i) out << ",n" << i;
  out << '\n';
  BigInt rank = first;
  if (rows > 0)
    for (const auto& q : ConfigurationRange(args.lambda, args.l, first, rows.get_ui())) {
      out << rank.get_str();
      for (auto x : q.numerators()) out << ',' << x;
      out << '\n';
      ++rank;
    }
  emit(out.str(), args.out);
  return kOk;
}

int run_finetune(const FinetuneArgs& args) {
  FineTuningReport report;
  if (args.mode == "constrained") {
    const std::uint32_t lambda =
        args.lambda ? *args.lambda : make_kernel(args.kernel, std::nullopt, args.kernel_seed).lambda_count();
    report = f_constrained(args.n, lambda, args.l);
  } else if (args.mode == "general") {
    const OutcomeKernel kernel = make_kernel(args.kernel, args.lambda, args.kernel_seed);
    report = f_general(kernel, args.n, args.l, CountBudget{args.budget, args.threads});
  } else {
    throw ArgumentError("--mode must be constrained or general");
  }
  json j = to_json(report);
  if (args.mode == "general") j["kernel"] = args.kernel;
  emit(j, args.out);
  return kOk;
}

int run_entropy(const EntropyArgs& args) {
  const SequencePrior prior = load_sequence_prior(args.prior, args.n, args.n0);
  json j = to_json(entropy_report(prior));
  j["prior"] = args.prior == "uniform" ? "uniform" : "file";
  emit(j, args.out);
  return kOk;
}

int run_simulate(const SimulateArgs& args) {
  const AnyModel model = load_model(args.model);
  const std::uint32_t n = mechanisms_for(model, args.n);
  const ChoicePrior prior = load_choice_prior(args.choice_prior, n);
  const auto runs = simulate(model, args.n0, args.seed, prior, args.threads);

  if (!args.out.empty()) {
    std::ostringstream csv;
    write_runs_csv(csv, runs);
    write_file_atomic(args.out, csv.str());
  }

  json cells = json::array();
  std::size_t inside = 0;
  for (const auto& c : sector_convergence(model, prior, runs)) {
    inside += std::abs(c.z) <= 4.0;
    cells.push_back({{"sector", SettingsPair::from_sector(c.sector).to_string()},
                     {"outcome", outcome_json(c.outcome)},
                     {"analytic", c.analytic},
                     {"visits", c.visits},
                     {"count", c.count},
                     {"frequency", c.visits ? static_cast<double>(c.count) / static_cast<double>(c.visits) : 0.0},
                     {"z", std::isfinite(c.z) ? json(c.z) : json(nullptr)}});
  }
  const ConditionReport condition = check_condition_ii(model, n, 4);
  const double within = static_cast<double>(inside) / (kSectorCount * kOutcomeCount);

  json summary = {{"class", std::string(model_class_name(model))},
                  {"N", n},
                  {"N0", args.n0},
                  {"seed", args.seed},
                  {"choice_prior", args.choice_prior.empty() ? "uniform" : "file"},
                  {"csv", args.out.empty() ? json(nullptr) : json(args.out)},
                  {"sector_cells", std::move(cells)},
                  {"fraction_within_4_sigma", within},
                  {"condition_ii", to_json(condition, n)}};

  json coincidence = nullptr;
  if (const auto* s = std::get_if<SuperdetModel>(&model)) {
    try {
      const auto report = verify_coincidence(*s, runs);
      coincidence = {{"defined", true},
                     {"consistent", report.consistent},
                     {"violations", report.violations.size()}};
    } catch (const SubEnsemblesUndefined&) {
      coincidence = {{"defined", false}};
    }
  }
  summary["coincidence"] = std::move(coincidence);

  json dependence = nullptr;
  if (!condition.holds)
    dependence = to_json(mechanism_dependence_demo(model, n, args.demo_runs ? args.demo_runs : args.n0, args.seed));
  summary["dependence"] = std::move(dependence);

  emit(summary, args.summary);
  return kOk;
}

int run_check(const CheckArgs& args) {
  const AnyModel model = load_model(args.model);
  const std::uint32_t n = mechanisms_for(model, args.n);
  json j = {{"class", std::string(model_class_name(model))},
            {"N", n},
            {"condition_ii", to_json(check_condition_ii(model, n, args.witnesses), n)}};
  if (const auto* s = std::get_if<SuperdetModel>(&model)) {
    j["constraint_m"] = check_constraint_m(*s);
    j["constraint_n"] = check_constraint_n(*s);
  } else {
    j["constraint_m"] = nullptr;
    j["constraint_n"] = nullptr;
  }
  emit(j, args.out);
  return kOk;
}

int run_model(const ModelArgs& args) {
  CounterRng rng(args.seed, 0);
  const std::optional<std::uint32_t> lambda =
      args.kernel == "readout" ? std::nullopt : std::optional<std::uint32_t>(args.lambda);
  const OutcomeKernel kernel = make_kernel(args.kernel, lambda, args.seed);
  const std::uint32_t lam = kernel.lambda_count();
  AnyModel model = [&]() -> AnyModel {
    if (args.kind == "constrained")
      return make_constrained(args.n,
                              {draw_lattice(rng, lam, args.l), draw_lattice(rng, lam, args.l),
                               draw_lattice(rng, lam, args.l), draw_lattice(rng, lam, args.l)},
                              kernel);
    if (args.kind == "random" || args.kind == "violating") {
      const std::uint64_t total = context_count(args.n);
      if (total > 1'000'000) throw ArgumentError("N is too large to write one table per context");
      std::vector<LatticeDistribution> tables;
      tables.reserve(total);
      if (args.kind == "random") {
        for (std::uint64_t i = 0; i < total; ++i) tables.push_back(draw_lattice(rng, lam, args.l));
        return SuperdetModel(args.n, kernel, std::move(tables));
      }
      // Point mass at lambda 0 everywhere except one context of sector xx.
      if (args.n < 2 || lam < 2) throw ArgumentError("a violating model needs N >= 2 and Lambda >= 2");
      std::vector<std::uint32_t> low(lam, 0), high(lam, 0);
      low.front() = args.l;
      high.back() = args.l;
      tables.assign(total, LatticeDistribution(low, args.l));
      const auto xx = context_indices_by_settings(args.n)[0];
      tables[xx.at(1)] = LatticeDistribution(high, args.l);
      return SuperdetModel(args.n, kernel, std::move(tables));
    }
    if (args.kind == "retrocausal")
      return RetrocausalModel(draw_local(rng, lam), draw_local(rng, lam),
                              {draw_lattice(rng, lam, args.l), draw_lattice(rng, lam, args.l)});
    if (args.kind == "nonlocal") {
      PairResponse a(lam);
      for (auto& row : a)
        for (auto& p : row) p = draw_probability(rng);
      return NonlocalModel(std::move(a), draw_local(rng, lam), draw_lattice(rng, lam, args.l));
    }
    throw ArgumentError("--kind must be constrained, violating, random, retrocausal or nonlocal");
  }();
  emit(to_json(model), args.out);
  return kOk;
}

}  // namespace belllab::cli
