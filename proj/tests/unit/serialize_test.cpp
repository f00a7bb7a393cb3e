#include "belllab/serialize.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "builders.hpp"

namespace belllab {
namespace {

using nlohmann::json;

TEST(ContextJson, RoundTrip) {
  for (std::uint64_t i = 0; i < context_count(2); ++i) {
    const Context c = context_at(2, i);
    EXPECT_EQ(context_from_json(to_json(c)), c);
  }
  const json j = to_json(Context({Setting::Mx, Setting::Mz}, {Setting::Mz, Setting::Mz}, 2, 1));
  EXPECT_EQ(j, json::parse(R"({"alpha":"xz","beta":"zz","gA":2,"gB":1})"));
}

TEST(ContextJson, Errors) {
  EXPECT_THROW(context_from_json(json::parse(R"({"alpha":"xq","beta":"zz","gA":1,"gB":1})")), ModelFileError);
  EXPECT_THROW(context_from_json(json::parse(R"({"alpha":"x","beta":"zz","gA":1,"gB":1})")), ModelFileError);
  EXPECT_THROW(context_from_json(json::parse(R"({"alpha":"xz","beta":"zz","gA":3,"gB":1})")), ModelFileError);
  EXPECT_THROW(context_from_json(json::parse(R"({"alpha":"xz","beta":"zz","gA":1})")), ModelFileError);
}

TEST(KernelJson, RoundTripAndNames) {
  for (const auto& k : {OutcomeKernel::readout(), OutcomeKernel::constant(3), OutcomeKernel::random(3, 9)})
    EXPECT_EQ(kernel_from_json(to_json(k)), k);
  EXPECT_EQ(kernel_from_json(json::parse(R"({"name":"readout"})")), OutcomeKernel::readout());
  EXPECT_EQ(kernel_from_json(json::parse(R"({"name":"injective","lambda_count":2})")),
            OutcomeKernel::injective(2));
  EXPECT_EQ(kernel_from_json(json::parse(R"({"name":"random","lambda_count":3,"seed":9})")),
            OutcomeKernel::random(3, 9));
}

TEST(KernelJson, Errors) {
  EXPECT_THROW(kernel_from_json(json::parse(R"({"name":"bogus"})")), ModelFileError);
  EXPECT_THROW(kernel_from_json(json::parse(R"({"rows":[]})")), ModelFileError);
  auto j = to_json(OutcomeKernel::readout());
  j["rows"][0]["xx"][0] = "1/2";
  EXPECT_THROW(kernel_from_json(j), ModelFileError);
  j["rows"][0]["xx"][0] = "oops";
  EXPECT_THROW(kernel_from_json(j), ModelFileError);
}

TEST(ModelJson, RoundTripEveryClass) {
  std::mt19937_64 rng(5);
  const std::vector<AnyModel> models = {
      testing::violating_model(), testing::random_superdet(rng, 2, OutcomeKernel::random(3, 1), 3),
      testing::random_retrocausal(rng, 3), testing::random_nonlocal(rng, 2)};
  for (const auto& m : models) {
    const json j = to_json(m);
    EXPECT_EQ(j["class"], std::string(model_class_name(m)));
    const AnyModel back = model_from_json(json::parse(j.dump()));
    EXPECT_EQ(to_json(back), j);
    for (std::uint64_t i = 0; i < context_count(2); ++i)
      EXPECT_EQ(statistics(back, context_at(2, i)), statistics(m, context_at(2, i)));
  }
}

TEST(ModelJson, TablesInAnyOrder) {
  json j = to_json(AnyModel(testing::violating_model()));
  std::reverse(j["tables"].begin(), j["tables"].end());
  const auto back = std::get<SuperdetModel>(model_from_json(j));
  EXPECT_EQ(back.table(0), LatticeDistribution({2, 0}, 2));
  EXPECT_EQ(back.table(16), LatticeDistribution({0, 2}, 2));
}

TEST(ModelJson, Errors) {
  const json good = to_json(AnyModel(testing::violating_model()));
  auto expect_error = [](json j) { EXPECT_THROW(model_from_json(j), ModelFileError) << j.dump().substr(0, 200); };

  expect_error(json::array());
  json j = good;
  j["class"] = "hidden-variable";
  expect_error(j);
  j = good;
  j.erase("tables");
  expect_error(j);
  j = good;
  j["tables"].erase(j["tables"].begin());
  expect_error(j);
  j = good;
  j["tables"][1] = j["tables"][0];
  expect_error(j);
  j = good;
  j["tables"][0]["p"] = {2, 1};
  expect_error(j);
  j = good;
  j["tables"][0]["p"] = {1, 1, 0};
  expect_error(j);
  j = good;
  j["lambda_count"] = 3;
  expect_error(j);
  j = good;
  j["denominator"] = 0;
  expect_error(j);
  j = good;
  j["tables"][0]["context"]["alpha"] = "xzx";
  expect_error(j);
}

TEST(ReportJson, BigIntegersAreStrings) {
  const auto r = f_constrained(3, 4, 16);
  const json j = to_json(r);
  EXPECT_TRUE(j["v"].is_string());
  EXPECT_TRUE(j["omega"].is_string());
  EXPECT_EQ(j["omega"], "576");
  EXPECT_EQ(j["mode"], "constrained-closed-form");
  const json e = to_json(entropy_report(SequencePrior::uniform(16, 1)));
  EXPECT_EQ(e["W"], "256");
  EXPECT_EQ(e["S_bits"], 8.0);
}

TEST(ReportJson, ConditionWitnesses) {
  const auto report = check_condition_ii(testing::violating_model());
  const json j = to_json(report, 2);
  EXPECT_FALSE(j["holds"].get<bool>());
  EXPECT_EQ(j["max_gap"], "1");
  EXPECT_EQ(j["witnesses"][0]["sector"], "xx");
}

TEST(WriteFileAtomic, ReplacesContents) {
  const auto dir = std::filesystem::temp_directory_path() / "belllab_serialize_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "out.json").string();
  write_file_atomic(path, "first");
  write_file_atomic(path, "second");
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), "second");
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& entry : std::filesystem::directory_iterator(dir)) ++files;
  EXPECT_EQ(files, 1u);
  EXPECT_THROW(write_file_atomic((dir / "missing" / "x").string(), "y"), std::runtime_error);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace belllab
