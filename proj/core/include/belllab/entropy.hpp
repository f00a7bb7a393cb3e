#ifndef BELLLAB_ENTROPY_HPP
#define BELLLAB_ENTROPY_HPP

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "belllab/models.hpp"
#include "belllab/numeric.hpp"
#include "belllab/scenario.hpp"

namespace belllab {

/// Sub-ensemble label E = (i, j), both 1-based.
struct SubEnsemble {
  std::uint32_t i = 1;
  std::uint32_t j = 1;
  friend bool operator==(const SubEnsemble&, const SubEnsemble&) = default;
};

/// W = N^(2 N0), the number of sub-ensemble sequences over N0 runs.
BigInt sequence_count(std::uint32_t n, std::uint32_t runs);

/// Dense storage is only allowed up to this many sequences.
inline constexpr std::uint64_t kDenseSequenceLimit = std::uint64_t{1} << 20;

/// Subjective prior p(k) over the W sub-ensemble sequences.
class SequencePrior {
 public:
  struct Uniform {};
  /// Runs i.i.d. with this per-run distribution over the N^2 labels
  /// (label index (i - 1) * N + (j - 1)).
  struct Product {
    std::vector<double> per_run;
  };
  /// One probability per sequence; sequence k has run r's label as base-N^2
  /// digit r (run 0 least significant).
  struct Dense {
    std::vector<double> p;
  };

  static SequencePrior uniform(std::uint32_t n, std::uint32_t runs);
  static SequencePrior product(std::uint32_t n, std::uint32_t runs,
                               std::vector<double> per_run);
  static SequencePrior dense(std::uint32_t n, std::uint32_t runs,
                             std::vector<double> p);

  std::uint32_t mechanism_count() const { return n_; }
  std::uint32_t runs() const { return runs_; }
  const std::variant<Uniform, Product, Dense>& family() const {
    return family_;
  }

  /// Dense vector of all W probabilities. Throws std::length_error past
  /// kDenseSequenceLimit.
  std::vector<double> materialize() const;

 private:
  SequencePrior(std::uint32_t n, std::uint32_t runs,
                std::variant<Uniform, Product, Dense> family);

  std::uint32_t n_;
  std::uint32_t runs_;
  std::variant<Uniform, Product, Dense> family_;
};

/// Tolerance on sum(p) == 1 for caller-supplied priors.
inline constexpr double kNormalizationTolerance = 1e-9;

/// -sum_k p(k) log2 p(k), in bits, with 0 log 0 = 0.
double sequence_entropy(const SequencePrior& prior);

/// Entropy before the choices are known minus after (after = 0 since the
/// choices fix the sequence): Delta S = -S <= 0.
double entropy_drop(const SequencePrior& prior);

/// Shannon entropy (bits) of a probability vector, pairwise-summed. Throws
/// std::invalid_argument on negative entries or a sum away from 1.
double shannon_entropy(const std::vector<double>& p);

/// I(X : Y) in bits from a joint table joint[x][y].
double mutual_information(const std::vector<std::vector<double>>& joint);

/// Mutual information a published model needs between lambda and settings.
inline constexpr double kReferenceMutualInformationBits = 0.08;

struct MutualInformationComparison {
  double per_run_bits;  // 2 log2 N
  double total_bits;    // per_run_bits * runs
  double ratio_to_reference;
};

MutualInformationComparison mutual_information_vs_reference(
    std::uint32_t n, std::uint32_t runs = 1);

/// Everything the entropy report carries for one prior.
struct EntropyReport {
  std::uint32_t n;
  std::uint32_t runs;
  BigInt sequence_count;
  double entropy_bits;
  double entropy_drop_bits;
  double per_run_mi_bits;
  double ratio_to_reference;
};

EntropyReport entropy_report(const SequencePrior& prior);

/// Thrown when sub-ensembles cannot be defined for a model.
class SubEnsemblesUndefined : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct CoincidenceRun {
  Context context;
  SubEnsemble e;
};

struct CoincidenceReport {
  bool consistent = true;
  std::vector<std::size_t> violations;  // run positions with E != (gA, gB)
};

/// Checks E = (gamma_A, gamma_B) for every run. Throws SubEnsemblesUndefined
/// if the model violates constraint m.
CoincidenceReport verify_coincidence(const SuperdetModel& model,
                                     const std::vector<CoincidenceRun>& runs);

}  // namespace belllab

#endif  // BELLLAB_ENTROPY_HPP
