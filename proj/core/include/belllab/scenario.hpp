#ifndef BELLLAB_SCENARIO_HPP
#define BELLLAB_SCENARIO_HPP

#include <array>
#include <compare>
#include <cstdint>
#include <ranges>
#include <string>
#include <string_view>
#include <vector>

#include "belllab/numeric.hpp"

namespace belllab {

/// Measurement setting label. The numeric value doubles as the bit used in
/// canonical context ordering (Mx = 0, Mz = 1).
enum class Setting : std::uint8_t { Mx = 0, Mz = 1 };

char to_char(Setting s);  // 'x' or 'z'
Setting setting_from_char(char c);

/// Induced settings pair (M_A, M_B). Its sector index is 2 * M_A + M_B, so
/// sectors are ordered xx, xz, zx, zz.
struct SettingsPair {
  Setting a = Setting::Mx;
  Setting b = Setting::Mx;

  std::size_t sector() const {
    return 2 * static_cast<std::size_t>(a) + static_cast<std::size_t>(b);
  }
  static SettingsPair from_sector(std::size_t sector);
  std::string to_string() const;  // "xz" etc.

  friend bool operator==(const SettingsPair&, const SettingsPair&) = default;
  friend auto operator<=>(const SettingsPair&, const SettingsPair&) = default;
};

inline constexpr std::size_t kSectorCount = 4;

/// Joint outcome (O_A, O_B) with each side in {+1, -1}. Index order is
/// (+1,+1), (+1,-1), (-1,+1), (-1,-1).
struct Outcome {
  int a = 1;
  int b = 1;

  std::size_t index() const {
    return 2 * static_cast<std::size_t>(a < 0) + static_cast<std::size_t>(b < 0);
  }
  static Outcome from_index(std::size_t index);

  friend bool operator==(const Outcome&, const Outcome&) = default;
};

inline constexpr std::size_t kOutcomeCount = 4;

/// One conditioning cell: every mechanism output at both wings plus the
/// experimenters' choices. gamma_a and gamma_b are 1-based.
class Context {
 public:
  /// Throws std::invalid_argument if the wings differ in size, are empty,
  /// or a choice is outside [1, N].
  Context(std::vector<Setting> alpha, std::vector<Setting> beta,
          std::uint32_t gamma_a, std::uint32_t gamma_b);

  std::uint32_t mechanism_count() const {
    return static_cast<std::uint32_t>(alpha_.size());
  }
  const std::vector<Setting>& alpha() const { return alpha_; }
  const std::vector<Setting>& beta() const { return beta_; }
  std::uint32_t gamma_a() const { return gamma_a_; }
  std::uint32_t gamma_b() const { return gamma_b_; }

  /// Compact "xz.." string for one wing.
  std::string alpha_string() const;
  std::string beta_string() const;

  friend bool operator==(const Context&, const Context&) = default;

 private:
  std::vector<Setting> alpha_;
  std::vector<Setting> beta_;
  std::uint32_t gamma_a_;
  std::uint32_t gamma_b_;
};

/// (alpha[gamma_a], beta[gamma_b]).
SettingsPair induced_settings(const Context& c);

/// N^2 * 2^(2N). Throws std::overflow_error past 64 bits.
std::uint64_t context_count(std::uint32_t n);

/// Canonical index: gamma_a-major, then gamma_b, then alpha as an N-bit
/// string (alpha[0] most significant), then beta.
std::uint64_t context_index(const Context& c);
Context context_at(std::uint32_t n, std::uint64_t index);

/// Every context for N mechanisms per wing, each once, in canonical order.
inline auto enumerate_contexts(std::uint32_t n) {
  return std::views::iota(std::uint64_t{0}, context_count(n)) |
         std::views::transform(
             [n](std::uint64_t i) { return context_at(n, i); });
}

/// Contexts partitioned by induced settings; element s holds sector s.
using SectorPartition = std::array<std::vector<Context>, kSectorCount>;
SectorPartition contexts_by_settings(std::uint32_t n);

/// The same partition as canonical context indices.
std::array<std::vector<std::uint64_t>, kSectorCount> context_indices_by_settings(
    std::uint32_t n);

/// Independent priors over one wing's mechanism outputs and choice:
/// p_mz[i] = p(output of mechanism i is Mz), choice[i] = p(gamma = i + 1).
struct WingPrior {
  std::vector<Rational> p_mz;
  std::vector<Rational> choice;

  static WingPrior uniform(std::uint32_t n);
  /// Throws std::invalid_argument on size mismatch, values outside [0, 1]
  /// or choice weights not summing to 1.
  void validate() const;
};

/// p({alpha}) p(gamma_A) p({beta}) p(gamma_B), each factor independent.
struct ChoicePrior {
  WingPrior a;
  WingPrior b;

  static ChoicePrior uniform(std::uint32_t n);
  std::uint32_t mechanism_count() const {
    return static_cast<std::uint32_t>(a.p_mz.size());
  }
  void validate() const;
  Rational probability(const Context& c) const;
  /// p(M_A = Mz) and p(M_B = Mz) in closed form.
  Rational p_mz_a() const;
  Rational p_mz_b() const;
};

}  // namespace belllab

#endif  // BELLLAB_SCENARIO_HPP
