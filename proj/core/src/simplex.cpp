#include "belllab/simplex.hpp"

#include <numeric>
#include <stdexcept>

namespace belllab {

namespace {

// Compositions of `total` into `parts` ordered nonnegative parts. Unlike the
// public count, total == 0 is allowed (one composition).
BigInt compositions(std::uint32_t parts, std::uint32_t total) {
  BigInt out;
  mpz_bin_uiui(out.get_mpz_t(), total + parts - 1, parts - 1);
  return out;
}

}  // namespace

LatticeDistribution::LatticeDistribution(std::vector<std::uint32_t> numerators,
                                         std::uint32_t denominator)
    : numerators_(std::move(numerators)), denominator_(denominator) {
  if (numerators_.empty())
    throw std::invalid_argument("lattice distribution needs Lambda >= 1");
  if (denominator_ == 0)
    throw std::invalid_argument("lattice distribution needs L >= 1");
  const std::uint64_t sum = std::accumulate(numerators_.begin(), numerators_.end(),
                                            std::uint64_t{0});
  if (sum != denominator_)
    throw std::invalid_argument("lattice numerators sum to " + std::to_string(sum) +
                                ", expected " + std::to_string(denominator_));
}

LatticeDistribution LatticeDistribution::point_mass(std::uint32_t lambda_count,
                                                    std::uint32_t denominator,
                                                    std::uint32_t at) {
  if (at >= lambda_count) throw std::out_of_range("point mass outside Lambda");
  std::vector<std::uint32_t> n(lambda_count, 0);
  n[at] = denominator;
  return {std::move(n), denominator};
}

Rational LatticeDistribution::probability(std::size_t lambda) const {
  Rational r(numerators_.at(lambda), denominator_);
  r.canonicalize();
  return r;
}

std::string LatticeDistribution::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < numerators_.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(numerators_[i]);
  }
  s += ")/" + std::to_string(denominator_);
  return s;
}

BigInt count_configurations(std::uint32_t lambda_count, std::uint32_t denominator) {
  if (lambda_count == 0) throw std::invalid_argument("Lambda must be >= 1");
  if (denominator == 0) throw std::invalid_argument("L must be >= 1");
  return compositions(lambda_count, denominator);
}

std::optional<std::uint64_t> count_configurations_u64(std::uint32_t lambda_count,
                                                      std::uint32_t denominator) {
  const BigInt v = count_configurations(lambda_count, denominator);
  if (mpz_sizeinbase(v.get_mpz_t(), 2) > 64) return std::nullopt;
  std::uint64_t out = 0;
  mpz_export(&out, nullptr, -1, sizeof out, 0, 0, v.get_mpz_t());
  return out;
}

// Reverse-lex: larger leading numerators come first. Everything with a larger
// value in slot i (and equal prefix) precedes d.
BigInt rank(const LatticeDistribution& d) {
  const auto x = d.numerators();
  const auto lambda_count = static_cast<std::uint32_t>(x.size());
  BigInt r = 0;
  std::uint32_t remaining = d.denominator();
  for (std::uint32_t i = 0; i + 1 < lambda_count; ++i) {
    const std::uint32_t tail_parts = lambda_count - i - 1;
    for (std::uint32_t v = x[i] + 1; v <= remaining; ++v)
      r += compositions(tail_parts, remaining - v);
    remaining -= x[i];
  }
  return r;
}

LatticeDistribution unrank(std::uint32_t lambda_count, std::uint32_t denominator,
                           const BigInt& r) {
  const BigInt total = count_configurations(lambda_count, denominator);
  if (sgn(r) < 0 || r >= total)
    throw std::out_of_range("rank " + r.get_str() + " outside [0, " +
                            total.get_str() + ")");
  std::vector<std::uint32_t> x(lambda_count, 0);
  BigInt left = r;
  std::uint32_t remaining = denominator;
  for (std::uint32_t i = 0; i + 1 < lambda_count; ++i) {
    const std::uint32_t tail_parts = lambda_count - i - 1;
    std::uint32_t v = remaining;
    while (true) {
      BigInt block = compositions(tail_parts, remaining - v);
      if (left < block) break;
      left -= block;
      --v;
    }
    x[i] = v;
    remaining -= v;
  }
  x[lambda_count - 1] = remaining;
  return {std::move(x), denominator};
}

ConfigurationCursor::ConfigurationCursor(std::uint32_t lambda_count,
                                         std::uint32_t denominator)
    : current_(LatticeDistribution::point_mass(lambda_count, denominator)) {}

ConfigurationCursor::ConfigurationCursor(std::uint32_t lambda_count,
                                         std::uint32_t denominator,
                                         const BigInt& start)
    : current_(LatticeDistribution::point_mass(lambda_count, denominator)) {
  if (start >= count_configurations(lambda_count, denominator)) {
    done_ = true;
    return;
  }
  current_ = unrank(lambda_count, denominator, start);
}

void ConfigurationCursor::advance() {
  if (done_) return;
  auto& x = current_.numerators_;
  const std::size_t last = x.size() - 1;
  // Rightmost nonzero slot before the last one moves one unit right and
  // collects the whole tail.
  std::size_t i = last;
  while (i-- > 0) {
    if (x[i] > 0) break;
  }
  if (i == static_cast<std::size_t>(-1)) {
    done_ = true;
    return;
  }
  const std::uint32_t tail = x[last];
  --x[i];
  x[last] = 0;
  x[i + 1] = tail + 1;
}

ConfigurationRange::ConfigurationRange(std::uint32_t lambda_count,
                                       std::uint32_t denominator)
    : lambda_count_(lambda_count), denominator_(denominator) {
  count_configurations(lambda_count, denominator);
}

ConfigurationRange::ConfigurationRange(std::uint32_t lambda_count,
                                       std::uint32_t denominator,
                                       const BigInt& first, std::uint64_t limit)
    : lambda_count_(lambda_count),
      denominator_(denominator),
      first_(first),
      limit_(limit) {
  count_configurations(lambda_count, denominator);
  if (sgn(first) < 0) throw std::out_of_range("negative start rank");
}

ConfigurationRange::iterator ConfigurationRange::begin() const {
  iterator it;
  if (limit_ && *limit_ == 0) return it;
  it.cursor_.emplace(lambda_count_, denominator_, first_);
  if (it.cursor_->done()) {
    it.cursor_.reset();
    return it;
  }
  it.remaining_ = limit_;
  return it;
}

}  // namespace belllab
