#ifndef BELLLAB_SIMPLEX_HPP
#define BELLLAB_SIMPLEX_HPP

#include <compare>
#include <cstdint>
#include <iterator>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "belllab/numeric.hpp"

namespace belllab {

/// A point of the discretized probability simplex: Lambda nonnegative
/// integer numerators over a common denominator L, summing to L.
class LatticeDistribution {
 public:
  /// Throws std::invalid_argument unless numerators is nonempty, the
  /// denominator is positive and the numerators sum to it.
  LatticeDistribution(std::vector<std::uint32_t> numerators,
                      std::uint32_t denominator);

  /// (L, 0, ..., 0): the first point in canonical order.
  static LatticeDistribution point_mass(std::uint32_t lambda_count,
                                        std::uint32_t denominator,
                                        std::uint32_t at = 0);

  std::uint32_t lambda_count() const {
    return static_cast<std::uint32_t>(numerators_.size());
  }
  std::uint32_t denominator() const { return denominator_; }
  std::span<const std::uint32_t> numerators() const { return numerators_; }
  std::uint32_t operator[](std::size_t i) const { return numerators_[i]; }

  Rational probability(std::size_t lambda) const;

  std::string to_string() const;

  friend bool operator==(const LatticeDistribution&,
                         const LatticeDistribution&) = default;
  friend auto operator<=>(const LatticeDistribution&,
                          const LatticeDistribution&) = default;

 private:
  friend class ConfigurationCursor;
  LatticeDistribution() = default;

  std::vector<std::uint32_t> numerators_;
  std::uint32_t denominator_ = 1;
};

/// V(Lambda, L) = C(L + Lambda - 1, Lambda - 1). Throws
/// std::invalid_argument when either argument is zero.
BigInt count_configurations(std::uint32_t lambda_count,
                            std::uint32_t denominator);

/// Same count but as a machine integer; nullopt when it does not fit.
std::optional<std::uint64_t> count_configurations_u64(
    std::uint32_t lambda_count, std::uint32_t denominator);

/// Position of d in reverse-lexicographic order, in [0, V).
BigInt rank(const LatticeDistribution& d);

/// Inverse of rank. Throws std::out_of_range unless 0 <= r < V.
LatticeDistribution unrank(std::uint32_t lambda_count,
                           std::uint32_t denominator, const BigInt& r);

/// Walks lattice points in reverse-lexicographic order, holding only the
/// current point. Advancing past the last point makes the cursor done().
class ConfigurationCursor {
 public:
  ConfigurationCursor(std::uint32_t lambda_count, std::uint32_t denominator);
  /// Starts at unrank(r); done() immediately when r >= V.
  ConfigurationCursor(std::uint32_t lambda_count, std::uint32_t denominator,
                      const BigInt& start);

  bool done() const { return done_; }
  const LatticeDistribution& current() const { return current_; }
  void advance();

 private:
  LatticeDistribution current_;
  bool done_ = false;
};

/// Input range over every lattice point of (Lambda, L), each exactly once,
/// in reverse-lexicographic order. Optionally restricted to the rank window
/// [first, first + limit) so that workers can split the enumeration.
class ConfigurationRange {
 public:
  class iterator {
   public:
    using value_type = LatticeDistribution;
    using difference_type = std::ptrdiff_t;
    using reference = const LatticeDistribution&;
    using iterator_category = std::input_iterator_tag;

    iterator() = default;
    reference operator*() const { return cursor_->current(); }
    const LatticeDistribution* operator->() const {
      return &cursor_->current();
    }
    iterator& operator++() {
      cursor_->advance();
      if (remaining_ && --*remaining_ == 0) cursor_.reset();
      if (cursor_ && cursor_->done()) cursor_.reset();
      return *this;
    }
    void operator++(int) { ++*this; }
    friend bool operator==(const iterator& it, std::default_sentinel_t) {
      return !it.cursor_.has_value();
    }

   private:
    friend class ConfigurationRange;
    std::optional<ConfigurationCursor> cursor_;
    std::optional<std::uint64_t> remaining_;
  };

  ConfigurationRange(std::uint32_t lambda_count, std::uint32_t denominator);
  ConfigurationRange(std::uint32_t lambda_count, std::uint32_t denominator,
                     const BigInt& first, std::uint64_t limit);

  iterator begin() const;
  std::default_sentinel_t end() const { return {}; }

 private:
  std::uint32_t lambda_count_;
  std::uint32_t denominator_;
  BigInt first_ = 0;
  std::optional<std::uint64_t> limit_;
};

inline ConfigurationRange enumerate_configurations(std::uint32_t lambda_count,
                                                   std::uint32_t denominator) {
  return {lambda_count, denominator};
}

}  // namespace belllab

#endif  // BELLLAB_SIMPLEX_HPP
