#ifndef BELLLAB_SERIALIZE_HPP
#define BELLLAB_SERIALIZE_HPP

#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "belllab/entropy.hpp"
#include "belllab/finetune.hpp"
#include "belllab/models.hpp"
#include "belllab/montecarlo.hpp"
#include "belllab/scenario.hpp"

namespace belllab {

/// Malformed or inconsistent model file.
class ModelFileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// {"alpha":"xz..","beta":"zz..","gA":k,"gB":k}
nlohmann::json to_json(const Context& c);
Context context_from_json(const nlohmann::json& j);

nlohmann::json to_json(const OutcomeKernel& k);
OutcomeKernel kernel_from_json(const nlohmann::json& j);

/// {class, lambda_count, denominator, kernel, tables, ...}
nlohmann::json to_json(const AnyModel& m);
/// Throws ModelFileError with a description of the first problem.
AnyModel model_from_json(const nlohmann::json& j);

/// {mode, N, lambda_count, L, omega, v, n_f, log10_one_minus_F, ...}
nlohmann::json to_json(const FineTuningReport& r);
/// {N, N0, W, S_bits, delta_S_bits, per_run_MI_bits, ratio_to_ref}
nlohmann::json to_json(const EntropyReport& r);
nlohmann::json to_json(const ConditionReport& r, std::uint32_t n);
nlohmann::json to_json(const DependenceReport& r);

/// Writes to path via a temporary sibling and rename.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace belllab

#endif  // BELLLAB_SERIALIZE_HPP
