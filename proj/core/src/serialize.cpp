#include "belllab/serialize.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <unistd.h>

namespace belllab {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& what) { throw ModelFileError(what); }

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(std::string("missing field '") + key + "'");
  return j.at(key);
}

std::uint32_t positive(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 1 ||
      v.get<std::int64_t>() > std::numeric_limits<std::uint32_t>::max())
    fail(std::string("field '") + key + "' must be a positive integer");
  return v.get<std::uint32_t>();
}

std::string rational_text(const Rational& r) { return to_string(r); }

Rational rational_from(const json& v) {
  try {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Rational(v.get<long>());
    if (v.is_number()) return parse_rational(v.dump());
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }
  fail("expected a rational, got " + v.dump());
}

Setting setting_from(const json& v) {
  if (!v.is_string() || v.get<std::string>().size() != 1) fail("setting must be \"x\" or \"z\"");
  try {
    return setting_from_char(v.get<std::string>()[0]);
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }
}

std::vector<Setting> wing_from(const json& v) {
  if (!v.is_string() || v.get<std::string>().empty()) fail("wing must be a nonempty x/z string");
  std::vector<Setting> wing;
  for (char c : v.get<std::string>()) {
    try {
      wing.push_back(setting_from_char(c));
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
  }
  return wing;
}

LatticeDistribution lattice_from(const json& v, std::uint32_t lambda_count,
                                 std::uint32_t denominator) {
  if (!v.is_array() || v.size() != lambda_count)
    fail("table needs " + std::to_string(lambda_count) + " numerators");
  std::vector<std::uint32_t> numerators;
  for (const auto& x : v) {
    if (!x.is_number_unsigned()) fail("table numerators must be nonnegative integers");
    numerators.push_back(x.get<std::uint32_t>());
  }
  try {
    return {std::move(numerators), denominator};
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }
}

json lattice_json(const LatticeDistribution& d) {
  return json(std::vector<std::uint32_t>(d.numerators().begin(), d.numerators().end()));
}

template <std::size_t K>
json response_json(const std::vector<std::array<Rational, K>>& rows) {
  json out = json::array();
  for (const auto& row : rows) {
    json r = json::array();
    for (const auto& p : row) r.push_back(rational_text(p));
    out.push_back(std::move(r));
  }
  return out;
}

template <std::size_t K>
std::vector<std::array<Rational, K>> response_from(const json& v, std::uint32_t lambda_count) {
  if (!v.is_array() || v.size() != lambda_count)
    fail("response table needs one row per lambda");
  std::vector<std::array<Rational, K>> rows(lambda_count);
  for (std::uint32_t l = 0; l < lambda_count; ++l) {
    if (!v[l].is_array() || v[l].size() != K)
      fail("response row needs " + std::to_string(K) + " entries");
    for (std::size_t k = 0; k < K; ++k) rows[l][k] = rational_from(v[l][k]);
  }
  return rows;
}

json sector_keyed(const std::vector<std::vector<BigInt>>& per_sector) {
  json out = json::object();
  for (std::size_t s = 0; s < per_sector.size(); ++s) {
    json v = json::array();
    for (const auto& x : per_sector[s]) v.push_back(x.get_str());
    out[SettingsPair::from_sector(s).to_string()] = std::move(v);
  }
  return out;
}

}  // namespace

json to_json(const Context& c) {
  return {{"alpha", c.alpha_string()}, {"beta", c.beta_string()}, {"gA", c.gamma_a()},
          {"gB", c.gamma_b()}};
}

Context context_from_json(const json& j) {
  std::vector<Setting> alpha = wing_from(field(j, "alpha"));
  std::vector<Setting> beta = wing_from(field(j, "beta"));
  const std::uint32_t ga = positive(j, "gA");
  const std::uint32_t gb = positive(j, "gB");
  try {
    return {std::move(alpha), std::move(beta), ga, gb};
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }
}

json to_json(const OutcomeKernel& k) {
  json rows = json::array();
  for (const auto& per_lambda : k.rows()) {
    json row = json::object();
    for (std::size_t s = 0; s < kSectorCount; ++s) {
      json dist = json::array();
      for (const auto& p : per_lambda[s]) dist.push_back(rational_text(p));
      row[SettingsPair::from_sector(s).to_string()] = std::move(dist);
    }
    rows.push_back(std::move(row));
  }
  return {{"rows", std::move(rows)}};
}

OutcomeKernel kernel_from_json(const json& j) {
  try {
    if (j.is_object() && j.contains("name")) {
      const std::string name = j.at("name").get<std::string>();
      const std::uint32_t lambda_count = j.contains("lambda_count") ? positive(j, "lambda_count") : 4;
      if (name == "readout") return OutcomeKernel::readout();
      if (name == "injective") return OutcomeKernel::injective(lambda_count);
      if (name == "constant") return OutcomeKernel::constant(lambda_count);
      if (name == "random")
        return OutcomeKernel::random(lambda_count, j.value("seed", std::uint64_t{0}));
      fail("unknown kernel name '" + name + "'");
    }
    const json& rows = field(j, "rows");
    if (!rows.is_array() || rows.empty()) fail("kernel rows must be a nonempty array");
    std::vector<OutcomeKernel::LambdaRows> parsed(rows.size());
    for (std::size_t l = 0; l < rows.size(); ++l)
      for (std::size_t s = 0; s < kSectorCount; ++s) {
        const json& dist = field(rows[l], SettingsPair::from_sector(s).to_string().c_str());
        if (!dist.is_array() || dist.size() != kOutcomeCount)
          fail("kernel row needs 4 outcome probabilities");
        for (std::size_t o = 0; o < kOutcomeCount; ++o) parsed[l][s][o] = rational_from(dist[o]);
      }
    return OutcomeKernel(std::move(parsed));
  } catch (const ModelFileError&) {
    throw;
  } catch (const std::exception& e) {
    fail(std::string("invalid kernel: ") + e.what());
  }
}

json to_json(const AnyModel& m) {
  json j;
  j["class"] = std::string(model_class_name(m));
  std::visit(
      [&j](const auto& model) {
        using T = std::decay_t<decltype(model)>;
        j["lambda_count"] = model.lambda_count();
        json tables = json::array();
        if constexpr (std::is_same_v<T, SuperdetModel>) {
          j["denominator"] = model.denominator();
          j["N"] = model.mechanism_count();
          j["kernel"] = to_json(model.kernel());
          for (std::uint64_t i = 0; i < model.tables().size(); ++i)
            tables.push_back({{"context", to_json(context_at(model.mechanism_count(), i))},
                              {"p", lattice_json(model.table(i))}});
        } else if constexpr (std::is_same_v<T, RetrocausalModel>) {
          j["denominator"] = model.hidden(Setting::Mx).denominator();
          j["kernel"] = {{"response_a", response_json(model.response_a())},
                         {"response_b", response_json(model.response_b())}};
          for (Setting mb : {Setting::Mx, Setting::Mz})
            tables.push_back({{"MB", std::string(1, to_char(mb))}, {"p", lattice_json(model.hidden(mb))}});
        } else {
          j["denominator"] = model.hidden().denominator();
          j["kernel"] = {{"response_a", response_json(model.response_a())},
                         {"response_b", response_json(model.response_b())}};
          tables.push_back({{"p", lattice_json(model.hidden())}});
        }
        j["tables"] = std::move(tables);
      },
      m);
  return j;
}

AnyModel model_from_json(const json& j) {
  if (!j.is_object()) fail("model file must hold a JSON object");
  const json& cls = field(j, "class");
  if (!cls.is_string()) fail("'class' must be a string");
  const std::string name = cls.get<std::string>();
  const std::uint32_t lambda_count = positive(j, "lambda_count");
  const std::uint32_t denominator = positive(j, "denominator");
  const json& tables = field(j, "tables");
  if (!tables.is_array()) fail("'tables' must be an array");

  try {
    if (name == "superdeterministic") {
      const std::uint32_t n = positive(j, "N");
      OutcomeKernel kernel = kernel_from_json(field(j, "kernel"));
      if (kernel.lambda_count() != lambda_count) fail("kernel Lambda differs from lambda_count");
      const std::uint64_t total = context_count(n);
      if (tables.size() != total)
        fail("expected " + std::to_string(total) + " tables, got " + std::to_string(tables.size()));
      std::vector<std::optional<LatticeDistribution>> slots(total);
      for (const auto& entry : tables) {
        const Context c = context_from_json(field(entry, "context"));
        if (c.mechanism_count() != n) fail("table context has the wrong N");
        auto& slot = slots[context_index(c)];
        if (slot) fail("duplicate table for context " + to_json(c).dump());
        slot = lattice_from(field(entry, "p"), lambda_count, denominator);
      }
      std::vector<LatticeDistribution> ordered;
      ordered.reserve(total);
      for (auto& s : slots) ordered.push_back(std::move(*s));
      return SuperdetModel(n, std::move(kernel), std::move(ordered));
    }
    if (name == "retrocausal") {
      const json& k = field(j, "kernel");
      auto a = response_from<2>(field(k, "response_a"), lambda_count);
      auto b = response_from<2>(field(k, "response_b"), lambda_count);
      std::array<std::optional<LatticeDistribution>, 2> hidden;
      if (tables.size() != 2) fail("retrocausal model needs tables for MB = x and z");
      for (const auto& entry : tables) {
        auto& slot = hidden[static_cast<std::size_t>(setting_from(field(entry, "MB")))];
        if (slot) fail("duplicate retrocausal table");
        slot = lattice_from(field(entry, "p"), lambda_count, denominator);
      }
      return RetrocausalModel(std::move(a), std::move(b), {std::move(*hidden[0]), std::move(*hidden[1])});
    }
    if (name == "nonlocal") {
      const json& k = field(j, "kernel");
      auto a = response_from<kSectorCount>(field(k, "response_a"), lambda_count);
      auto b = response_from<2>(field(k, "response_b"), lambda_count);
      if (tables.size() != 1) fail("nonlocal model needs exactly one table");
      return NonlocalModel(std::move(a), std::move(b),
                           lattice_from(field(tables[0], "p"), lambda_count, denominator));
    }
  } catch (const ModelFileError&) {
    throw;
  } catch (const std::exception& e) {
    fail(e.what());
  }
  fail("unknown model class '" + name + "'");
}

json to_json(const FineTuningReport& r) {
  json j = {{"mode", to_string(r.mode)},
            {"N", r.n},
            {"lambda_count", r.lambda_count},
            {"L", r.denominator},
            {"omega", r.omega.get_str()},
            {"v", r.v_total.get_str()},
            {"n_f", r.n_f ? json(r.n_f->get_str()) : json(nullptr)},
            {"log10_one_minus_F", r.log10_one_minus_f},
            {"one_minus_F", r.one_minus_f ? json(rational_text(*r.one_minus_f)) : json(nullptr)},
            {"F", r.f() ? json(rational_text(*r.f())) : json(nullptr)},
            {"F_approx", r.f_approx()}};
  if (!r.v_per_sector.empty()) j["v_per_sector"] = sector_keyed(r.v_per_sector);
  return j;
}

json to_json(const EntropyReport& r) {
  return {{"N", r.n},
          {"N0", r.runs},
          {"W", r.sequence_count.get_str()},
          {"S_bits", r.entropy_bits},
          {"delta_S_bits", r.entropy_drop_bits},
          {"per_run_MI_bits", r.per_run_mi_bits},
          {"ratio_to_ref", r.ratio_to_reference}};
}

json to_json(const ConditionReport& r, std::uint32_t n) {
  json witnesses = json::array();
  for (const auto& w : r.witnesses)
    witnesses.push_back({{"sector", SettingsPair::from_sector(w.sector).to_string()},
                         {"reference", to_json(context_at(n, w.reference))},
                         {"other", to_json(context_at(n, w.other))}});
  return {{"holds", r.holds},
          {"violation_count", r.violation_count},
          {"max_gap", rational_text(r.max_gap)},
          {"witnesses", std::move(witnesses)}};
}

json to_json(const DependenceReport& r) {
  return {{"sector", SettingsPair::from_sector(r.sector).to_string()},
          {"first", to_json(r.first)},
          {"second", to_json(r.second)},
          {"outcome", {{"OA", Outcome::from_index(r.outcome).a}, {"OB", Outcome::from_index(r.outcome).b}}},
          {"analytic_first", rational_text(r.analytic_first)},
          {"analytic_second", rational_text(r.analytic_second)},
          {"analytic_gap", rational_text(abs(r.analytic_first - r.analytic_second))},
          {"runs_per_context", r.runs_per_context},
          {"frequency_first", r.frequency_first},
          {"frequency_second", r.frequency_second},
          {"z", r.z},
          {"z_threshold", r.z_threshold},
          {"detected", r.detected}};
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path temp = target;
  temp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + temp.string() + " for writing");
    out << contents;
    out.flush();
    if (!out) throw std::runtime_error("write to " + temp.string() + " failed");
  }
  std::error_code ec;
  fs::rename(temp, target, ec);
  if (ec) {
    fs::remove(temp);
    throw std::runtime_error("cannot move output into place at " + path + ": " + ec.message());
  }
}

}  // namespace belllab
