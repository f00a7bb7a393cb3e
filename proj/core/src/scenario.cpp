#include "belllab/scenario.hpp"

#include <stdexcept>

namespace belllab {

char to_char(Setting s) { return s == Setting::Mx ? 'x' : 'z'; }

Setting setting_from_char(char c) {
  switch (c) {
    case 'x':
    case 'X':
      return Setting::Mx;
    case 'z':
    case 'Z':
      return Setting::Mz;
  }
  throw std::invalid_argument(std::string("setting must be x or z, got '") + c + "'");
}

SettingsPair SettingsPair::from_sector(std::size_t sector) {
  if (sector >= kSectorCount) throw std::out_of_range("sector index");
  return {static_cast<Setting>(sector / 2), static_cast<Setting>(sector % 2)};
}

std::string SettingsPair::to_string() const { return {to_char(a), to_char(b)}; }

Outcome Outcome::from_index(std::size_t index) {
  if (index >= kOutcomeCount) throw std::out_of_range("outcome index");
  return {index / 2 ? -1 : 1, index % 2 ? -1 : 1};
}

Context::Context(std::vector<Setting> alpha, std::vector<Setting> beta,
                 std::uint32_t gamma_a, std::uint32_t gamma_b)
    : alpha_(std::move(alpha)), beta_(std::move(beta)), gamma_a_(gamma_a), gamma_b_(gamma_b) {
  if (alpha_.empty()) throw std::invalid_argument("context needs N >= 1");
  if (alpha_.size() != beta_.size())
    throw std::invalid_argument("both wings need the same number of mechanisms");
  if (gamma_a_ < 1 || gamma_a_ > alpha_.size() || gamma_b_ < 1 || gamma_b_ > beta_.size())
    throw std::invalid_argument("choice outside [1, N]");
}

namespace {

std::string wing_string(const std::vector<Setting>& wing) {
  std::string s;
  s.reserve(wing.size());
  for (Setting v : wing) s.push_back(to_char(v));
  return s;
}

std::uint64_t wing_bits(const std::vector<Setting>& wing) {
  std::uint64_t bits = 0;
  for (Setting v : wing) bits = (bits << 1) | static_cast<std::uint64_t>(v);
  return bits;
}

std::vector<Setting> wing_from_bits(std::uint32_t n, std::uint64_t bits) {
  std::vector<Setting> wing(n);
  for (std::uint32_t i = 0; i < n; ++i)
    wing[i] = static_cast<Setting>((bits >> (n - 1 - i)) & 1u);
  return wing;
}

}  // namespace

std::string Context::alpha_string() const { return wing_string(alpha_); }
std::string Context::beta_string() const { return wing_string(beta_); }

SettingsPair induced_settings(const Context& c) {
  return {c.alpha()[c.gamma_a() - 1], c.beta()[c.gamma_b() - 1]};
}

std::uint64_t context_count(std::uint32_t n) {
  if (n == 0) throw std::invalid_argument("N must be >= 1");
  const std::uint64_t wide = std::uint64_t{n} * n;
  if (2 * n >= 64 || wide > (~std::uint64_t{0} >> (2 * n)))
    throw std::overflow_error("context count exceeds 64 bits");
  return wide << (2 * n);
}

std::uint64_t context_index(const Context& c) {
  const std::uint32_t n = c.mechanism_count();
  const std::uint64_t wing = std::uint64_t{1} << n;
  const std::uint64_t choice = std::uint64_t{c.gamma_a() - 1} * n + (c.gamma_b() - 1);
  return ((choice * wing) + wing_bits(c.alpha())) * wing + wing_bits(c.beta());
}

Context context_at(std::uint32_t n, std::uint64_t index) {
  if (index >= context_count(n)) throw std::out_of_range("context index");
  const std::uint64_t wing = std::uint64_t{1} << n;
  const std::uint64_t beta = index % wing;
  index /= wing;
  const std::uint64_t alpha = index % wing;
  index /= wing;
  const auto gamma_b = static_cast<std::uint32_t>(index % n) + 1;
  const auto gamma_a = static_cast<std::uint32_t>(index / n) + 1;
  return {wing_from_bits(n, alpha), wing_from_bits(n, beta), gamma_a, gamma_b};
}

SectorPartition contexts_by_settings(std::uint32_t n) {
  SectorPartition out;
  for (auto&& c : enumerate_contexts(n)) {
    const std::size_t s = induced_settings(c).sector();
    out[s].push_back(std::move(c));
  }
  return out;
}

std::array<std::vector<std::uint64_t>, kSectorCount> context_indices_by_settings(
    std::uint32_t n) {
  std::array<std::vector<std::uint64_t>, kSectorCount> out;
  const std::uint64_t total = context_count(n);
  for (std::uint64_t i = 0; i < total; ++i)
    out[induced_settings(context_at(n, i)).sector()].push_back(i);
  return out;
}

WingPrior WingPrior::uniform(std::uint32_t n) {
  if (n == 0) throw std::invalid_argument("N must be >= 1");
  return {std::vector<Rational>(n, Rational(1, 2)), std::vector<Rational>(n, Rational(1, n))};
}

void WingPrior::validate() const {
  if (p_mz.empty() || p_mz.size() != choice.size())
    throw std::invalid_argument("wing prior needs N mechanism and N choice weights");
  Rational total = 0;
  for (const auto& p : p_mz)
    if (p < 0 || p > 1) throw std::invalid_argument("mechanism probability outside [0, 1]");
  for (const auto& p : choice) {
    if (p < 0) throw std::invalid_argument("negative choice weight");
    total += p;
  }
  if (total != 1) throw std::invalid_argument("choice weights must sum to 1");
}

ChoicePrior ChoicePrior::uniform(std::uint32_t n) {
  return {WingPrior::uniform(n), WingPrior::uniform(n)};
}

void ChoicePrior::validate() const {
  a.validate();
  b.validate();
  if (a.p_mz.size() != b.p_mz.size())
    throw std::invalid_argument("both wings need the same number of mechanisms");
}

namespace {

Rational wing_probability(const WingPrior& w, const std::vector<Setting>& outputs,
                          std::uint32_t gamma) {
  Rational p = w.choice.at(gamma - 1);
  for (std::size_t i = 0; i < outputs.size(); ++i)
    p *= outputs[i] == Setting::Mz ? w.p_mz[i] : 1 - w.p_mz[i];
  return p;
}

Rational wing_mz(const WingPrior& w) {
  Rational p = 0;
  for (std::size_t i = 0; i < w.choice.size(); ++i) p += w.choice[i] * w.p_mz[i];
  return p;
}

}  // namespace

Rational ChoicePrior::probability(const Context& c) const {
  if (c.mechanism_count() != mechanism_count())
    throw std::invalid_argument("context and prior disagree on N");
  return wing_probability(a, c.alpha(), c.gamma_a()) *
         wing_probability(b, c.beta(), c.gamma_b());
}

Rational ChoicePrior::p_mz_a() const { return wing_mz(a); }
Rational ChoicePrior::p_mz_b() const { return wing_mz(b); }

}  // namespace belllab
