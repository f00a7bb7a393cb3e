#ifndef BELLLAB_TOOLS_COMMANDS_HPP
#define BELLLAB_TOOLS_COMMANDS_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace belllab::cli {

enum ExitCode : int { kOk = 0, kArgumentError = 2, kBudgetRefused = 3, kModelFileError = 4 };

/// Bad flag combination or value the parser could not catch.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Budget refusal outside the fine-tuning counter (e.g. enumerate).
class Refused : public std::runtime_error {
 public:
  Refused(const std::string& what, std::string estimate)
      : std::runtime_error(what), estimate(std::move(estimate)) {}
  std::string estimate;
};

struct CountArgs {
  std::uint32_t lambda = 0;
  std::uint32_t l = 0;
};

struct EnumerateArgs {
  std::uint32_t lambda = 0;
  std::uint32_t l = 0;
  std::string first = "0";
  std::optional<std::uint64_t> limit;
  std::uint64_t max_rows = 1'000'000;
  std::string out;
};

struct FinetuneArgs {
  std::string mode = "constrained";
  std::string kernel = "readout";
  std::uint64_t kernel_seed = 0;
  std::uint32_t n = 0;
  std::optional<std::uint32_t> lambda;
  std::uint32_t l = 0;
  std::uint64_t budget = 50'000'000;
  unsigned threads = 0;
  std::string out;
};

struct EntropyArgs {
  std::uint32_t n = 0;
  std::uint32_t n0 = 0;
  std::string prior = "uniform";
  std::string out;
};

struct SimulateArgs {
  std::string model;
  std::uint64_t n0 = 0;
  std::uint64_t seed = 0;
  std::optional<std::uint32_t> n;
  std::string choice_prior;
  std::uint64_t demo_runs = 0;
  unsigned threads = 0;
  std::string out;
  std::string summary;
};

struct CheckArgs {
  std::string model;
  std::optional<std::uint32_t> n;
  std::uint32_t witnesses = 16;
  std::string out;
};

struct ModelArgs {
  std::string kind = "constrained";
  std::uint32_t n = 2;
  std::uint32_t lambda = 4;
  std::uint32_t l = 4;
  std::string kernel = "readout";
  std::uint64_t seed = 0;
  std::string out;
};

int run_count(const CountArgs& args);
int run_enumerate(const EnumerateArgs& args);
int run_finetune(const FinetuneArgs& args);
int run_entropy(const EntropyArgs& args);
int run_simulate(const SimulateArgs& args);
int run_check(const CheckArgs& args);
int run_model(const ModelArgs& args);

}  // namespace belllab::cli

#endif  // BELLLAB_TOOLS_COMMANDS_HPP
