#include "belllab/entropy.hpp"

#include <cmath>
#include <numeric>
#include <span>
#include <stdexcept>

namespace belllab {

namespace {

double pairwise_sum(std::span<const double> terms) {
  if (terms.size() <= 8) return std::accumulate(terms.begin(), terms.end(), 0.0);
  const std::size_t half = terms.size() / 2;
  return pairwise_sum(terms.first(half)) + pairwise_sum(terms.subspan(half));
}

void require_distribution(const std::vector<double>& p, const char* what) {
  double total = 0;
  for (double x : p) {
    if (!(x >= 0) || !std::isfinite(x))
      throw std::invalid_argument(std::string(what) + " has a negative or non-finite entry");
    total += x;
  }
  if (std::abs(total - 1.0) > kNormalizationTolerance)
    throw std::invalid_argument(std::string(what) + " sums to " + std::to_string(total) +
                                ", not 1");
}

std::uint64_t dense_count(std::uint32_t n, std::uint32_t runs) {
  const BigInt w = sequence_count(n, runs);
  if (w > BigInt(static_cast<unsigned long>(kDenseSequenceLimit)))
    throw std::length_error("W = " + w.get_str() + " exceeds the dense limit of 2^20");
  return w.get_ui();
}

}  // namespace

BigInt sequence_count(std::uint32_t n, std::uint32_t runs) {
  if (n == 0 || runs == 0) throw std::invalid_argument("N and N0 must be >= 1");
  return pow(BigInt(n), 2 * std::uint64_t{runs});
}

SequencePrior::SequencePrior(std::uint32_t n, std::uint32_t runs,
                             std::variant<Uniform, Product, Dense> family)
    : n_(n), runs_(runs), family_(std::move(family)) {
  if (n == 0 || runs == 0) throw std::invalid_argument("N and N0 must be >= 1");
}

SequencePrior SequencePrior::uniform(std::uint32_t n, std::uint32_t runs) {
  return {n, runs, Uniform{}};
}

SequencePrior SequencePrior::product(std::uint32_t n, std::uint32_t runs,
                                     std::vector<double> per_run) {
  if (per_run.size() != std::size_t{n} * n)
    throw std::invalid_argument("per-run distribution needs N^2 entries");
  require_distribution(per_run, "per-run distribution");
  return {n, runs, Product{std::move(per_run)}};
}

SequencePrior SequencePrior::dense(std::uint32_t n, std::uint32_t runs, std::vector<double> p) {
  if (p.size() != dense_count(n, runs))
    throw std::invalid_argument("dense prior needs exactly W entries");
  require_distribution(p, "sequence prior");
  return {n, runs, Dense{std::move(p)}};
}

std::vector<double> SequencePrior::materialize() const {
  const std::uint64_t w = dense_count(n_, runs_);
  return std::visit(
      [&](const auto& f) -> std::vector<double> {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Uniform>) {
          return std::vector<double>(w, 1.0 / static_cast<double>(w));
        } else if constexpr (std::is_same_v<T, Product>) {
          const std::uint64_t labels = std::uint64_t{n_} * n_;
          std::vector<double> p(w);
          for (std::uint64_t k = 0; k < w; ++k) {
            double value = 1.0;
            for (std::uint64_t rest = k, r = 0; r < runs_; ++r, rest /= labels)
              value *= f.per_run[rest % labels];
            p[k] = value;
          }
          return p;
        } else {
          return f.p;
        }
      },
      family_);
}

double shannon_entropy(const std::vector<double>& p) {
  require_distribution(p, "distribution");
  std::vector<double> terms;
  terms.reserve(p.size());
  for (double x : p)
    if (x > 0) terms.push_back(-x * std::log2(x));
  return pairwise_sum(terms);
}

double sequence_entropy(const SequencePrior& prior) {
  return std::visit(
      [&](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, SequencePrior::Uniform>) {
          return 2.0 * prior.runs() * std::log2(static_cast<double>(prior.mechanism_count()));
        } else if constexpr (std::is_same_v<T, SequencePrior::Product>) {
          return prior.runs() * shannon_entropy(f.per_run);
        } else {
          return shannon_entropy(f.p);
        }
      },
      prior.family());
}

double entropy_drop(const SequencePrior& prior) {
  const double s = sequence_entropy(prior);
  return s == 0.0 ? 0.0 : -s;
}

double mutual_information(const std::vector<std::vector<double>>& joint) {
  if (joint.empty() || joint.front().empty()) throw std::invalid_argument("empty joint table");
  const std::size_t cols = joint.front().size();
  std::vector<double> flat, row_marginal(joint.size(), 0.0), col_marginal(cols, 0.0);
  for (std::size_t x = 0; x < joint.size(); ++x) {
    if (joint[x].size() != cols) throw std::invalid_argument("ragged joint table");
    for (std::size_t y = 0; y < cols; ++y) {
      flat.push_back(joint[x][y]);
      row_marginal[x] += joint[x][y];
      col_marginal[y] += joint[x][y];
    }
  }
  return shannon_entropy(row_marginal) + shannon_entropy(col_marginal) - shannon_entropy(flat);
}

MutualInformationComparison mutual_information_vs_reference(std::uint32_t n,
                                                             std::uint32_t runs) {
  if (n == 0) throw std::invalid_argument("N must be >= 1");
  const double per_run = 2.0 * std::log2(static_cast<double>(n));
  return {per_run, per_run * runs, per_run / kReferenceMutualInformationBits};
}

EntropyReport entropy_report(const SequencePrior& prior) {
  const auto mi = mutual_information_vs_reference(prior.mechanism_count(), prior.runs());
  const double s = sequence_entropy(prior);
  return {prior.mechanism_count(), prior.runs(), sequence_count(prior.mechanism_count(), prior.runs()),
          s, entropy_drop(prior), mi.per_run_bits, mi.ratio_to_reference};
}

CoincidenceReport verify_coincidence(const SuperdetModel& model,
                                     const std::vector<CoincidenceRun>& runs) {
  if (!check_constraint_m(model))
    throw SubEnsemblesUndefined(
        "model correlates lambda with unused mechanisms; sub-ensembles are undefined");
  CoincidenceReport report;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    const auto& run = runs[r];
    if (run.e.i != run.context.gamma_a() || run.e.j != run.context.gamma_b()) {
      report.consistent = false;
      report.violations.push_back(r);
    }
  }
  return report;
}

}  // namespace belllab
