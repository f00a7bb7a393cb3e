#include <iostream>

#include "CLI11.hpp"

#include "belllab/finetune.hpp"
#include "belllab/serialize.hpp"
#include "commands.hpp"

using namespace belllab;
using namespace belllab::cli;

namespace {

template <typename T>
CLI::Option* positive(CLI::App* app, const std::string& name, T& value, const std::string& help) {
  return app->add_option(name, value, help)->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Superdeterministic Bell scenarios: lattice counting, fine-tuning, entropy and simulation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "belllab 0.1.0");

  CountArgs count;
  auto* count_cmd = app.add_subcommand("count", "Print V(Lambda, L), the number of lattice distributions");
  count_cmd->add_option("--lambda", count.lambda, "hidden-variable values")->required();
  count_cmd->add_option("--l", count.l, "lattice denominator")->required();

  EnumerateArgs enumerate;
  auto* enumerate_cmd = app.add_subcommand("enumerate", "Write lattice distributions as CSV in rank order");
  enumerate_cmd->add_option("--lambda", enumerate.lambda, "hidden-variable values")->required();
  enumerate_cmd->add_option("--l", enumerate.l, "lattice denominator")->required();
  enumerate_cmd->add_option("--first", enumerate.first, "first rank (decimal)");
  enumerate_cmd->add_option("--limit", enumerate.limit, "number of rows");
  positive(enumerate_cmd, "--max-rows", enumerate.max_rows, "refuse to write more rows than this");
  enumerate_cmd->add_option("--out", enumerate.out, "output CSV (stdout if omitted)");

  FinetuneArgs finetune;
  auto* finetune_cmd = app.add_subcommand("finetune", "Overhead fine-tuning report (JSON)");
  finetune_cmd->add_option("--mode", finetune.mode, "constrained or general")
      ->check(CLI::IsMember({"constrained", "general"}));
  finetune_cmd->add_option("--kernel", finetune.kernel,
                           "readout, injective, constant, random, or a kernel JSON file");
  finetune_cmd->add_option("--kernel-seed", finetune.kernel_seed, "seed for the random kernel");
  finetune_cmd->add_option("--n", finetune.n, "setting mechanisms per wing")->required();
  finetune_cmd->add_option("--lambda", finetune.lambda, "hidden-variable values");
  finetune_cmd->add_option("--l", finetune.l, "lattice denominator")->required();
  positive(finetune_cmd, "--budget", finetune.budget, "maximum kernel evaluations for general mode");
  finetune_cmd->add_option("--threads", finetune.threads, "worker threads (0 = default)");
  finetune_cmd->add_option("--out", finetune.out, "output JSON (stdout if omitted)");

  EntropyArgs entropy;
  auto* entropy_cmd = app.add_subcommand("entropy", "Sub-ensemble sequence entropy report (JSON)");
  entropy_cmd->add_option("--n", entropy.n, "setting mechanisms per wing")->required();
  entropy_cmd->add_option("--n0", entropy.n0, "runs")->required();
  entropy_cmd->add_option("--prior", entropy.prior, "uniform, or a prior JSON file");
  entropy_cmd->add_option("--out", entropy.out, "output JSON (stdout if omitted)");

  SimulateArgs simulate;
  auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo runs from a model file");
  simulate_cmd->add_option("--model", simulate.model, "model JSON file")->required();
  positive(simulate_cmd, "--n0", simulate.n0, "runs")->required();
  simulate_cmd->add_option("--seed", simulate.seed, "RNG seed");
  simulate_cmd->add_option("--n", simulate.n, "mechanisms per wing for non-superdeterministic models");
  simulate_cmd->add_option("--choice-prior", simulate.choice_prior, "choice prior JSON file (uniform if omitted)");
  simulate_cmd->add_option("--demo-runs", simulate.demo_runs, "runs per context for the dependence demo");
  simulate_cmd->add_option("--threads", simulate.threads, "worker threads (0 = default)");
  simulate_cmd->add_option("--out", simulate.out, "runs CSV");
  simulate_cmd->add_option("--summary", simulate.summary, "summary JSON (stdout if omitted)");

  CheckArgs check;
  auto* check_cmd = app.add_subcommand("check", "Run the constraint and condition checkers on a model file");
  check_cmd->add_option("--model", check.model, "model JSON file")->required();
  check_cmd->add_option("--n", check.n, "mechanisms per wing for non-superdeterministic models");
  check_cmd->add_option("--witnesses", check.witnesses, "witness pairs to report");
  check_cmd->add_option("--out", check.out, "output JSON (stdout if omitted)");

  ModelArgs model;
  auto* model_cmd = app.add_subcommand("model", "Write an example model file");
  model_cmd->add_option("--kind", model.kind, "constrained, violating, random, retrocausal or nonlocal");
  model_cmd->add_option("--n", model.n, "setting mechanisms per wing");
  model_cmd->add_option("--lambda", model.lambda, "hidden-variable values");
  model_cmd->add_option("--l", model.l, "lattice denominator");
  model_cmd->add_option("--kernel", model.kernel, "readout, injective, constant, random, or a kernel JSON file");
  model_cmd->add_option("--seed", model.seed, "seed for random tables");
  model_cmd->add_option("--out", model.out, "output JSON (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kArgumentError;
  }

  try {
    if (*count_cmd) return run_count(count);
    if (*enumerate_cmd) return run_enumerate(enumerate);
    if (*finetune_cmd) return run_finetune(finetune);
    if (*entropy_cmd) return run_entropy(entropy);
    if (*simulate_cmd) return run_simulate(simulate);
    if (*check_cmd) return run_check(check);
    if (*model_cmd) return run_model(model);
  } catch (const BudgetExceeded& e) {
    std::cerr << "refused: " << e.what() << "\nestimated work: " << e.required_work().get_str() << '\n';
    return kBudgetRefused;
  } catch (const Refused& e) {
    std::cerr << "refused: " << e.what() << "\nestimated work: " << e.estimate << '\n';
    return kBudgetRefused;
  } catch (const ModelFileError& e) {
    std::cerr << "model file error: " << e.what() << '\n';
    return kModelFileError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kArgumentError;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kArgumentError;
  } catch (const std::length_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kArgumentError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kArgumentError;
}
