#include <gtest/gtest.h>

#include <json.hpp>

#include "liesym/catalog.hpp"
#include "liesym/properties.hpp"
#include "liesym/verify.hpp"

using namespace liesym;

namespace {
std::vector<std::string> render(const SuiteReport& r) {
  std::vector<std::string> out;
  for (const auto& l : r.lines) out.push_back(format_text(l));
  return out;
}
}  // namespace

TEST(Verify, RecordSeedsAreStable) {
  EXPECT_EQ(record_seed(42, "T1.2"), record_seed(42, "T1.2"));
  EXPECT_NE(record_seed(42, "T1.2"), record_seed(42, "T1.3"));
  EXPECT_NE(record_seed(42, "T1.2"), record_seed(7, "T1.2"));
}

TEST(Verify, PoolKeepsOrder) {
  auto lines = run_pool(50, 4, [](std::size_t i) { return ReportLine{std::to_string(i), "k", "PASS", "", {}}; });
  ASSERT_EQ(lines.size(), 50u);
  for (std::size_t i = 0; i < lines.size(); ++i) EXPECT_EQ(lines[i].id, std::to_string(i));
}

TEST(Verify, ReportIndependentOfThreadCount) {
  VerifyOptions one;
  one.threads = 1;
  VerifyOptions four = one;
  four.threads = 4;
  const Catalog& c = default_catalog();
  EXPECT_EQ(render(verify_cases(c, one, 2)), render(verify_cases(c, four, 2)));
  EXPECT_EQ(render(verify_tables(c, one)), render(verify_tables(c, four)));
}

TEST(Verify, TablesAndCases) {
  const Catalog& c = default_catalog();
  SuiteReport t = verify_tables(c, VerifyOptions{});
  EXPECT_TRUE(t.ok());
  EXPECT_EQ(t.count("FAIL"), 0);
  SuiteReport cases = verify_cases(c, VerifyOptions{});
  EXPECT_EQ(cases.lines.size(), 34u);
  EXPECT_TRUE(cases.ok());
}

TEST(Verify, DeterminingAndAlgebras) {
  const Catalog& c = default_catalog();
  EXPECT_TRUE(verify_determining(c, VerifyOptions{}).ok());
  EXPECT_TRUE(verify_algebras(c, VerifyOptions{}).ok());
}

// One optimal-system entry of the ZK list is not closed under the bracket.
TEST(Verify, OptimalListHasOneOpenSpan) {
  SuiteReport r = verify_optimal(default_catalog(), VerifyOptions{});
  EXPECT_EQ(r.lines.size(), 33u);
  ASSERT_EQ(r.count("FAIL"), 1);
  for (const auto& l : r.lines)
    if (l.verdict == "FAIL") EXPECT_EQ(l.id, "optimal.zk.2.4");
}

TEST(Verify, JsonLines) {
  ReportLine l{"case.T1.2", "case", "PASS", "0", {"a note"}};
  auto j = nlohmann::json::parse(format_json(l));
  EXPECT_EQ(j["id"], "case.T1.2");
  EXPECT_EQ(j["verdict"], "PASS");
  EXPECT_EQ(j["notes"][0], "a note");
  EXPECT_EQ(format_json(l).find('\n'), std::string::npos);
}

TEST(Verify, Verdicts) {
  EXPECT_TRUE((ReportLine{"", "", "CORRECTED", "", {}}).passed());
  EXPECT_TRUE((ReportLine{"", "", "SKIP", "", {}}).passed());
  EXPECT_FALSE((ReportLine{"", "", "FAIL", "", {}}).passed());
  SuiteReport r{"s", {{"a", "k", "PASS", "", {}}, {"b", "k", "FAIL", "", {}}}};
  EXPECT_FALSE(r.ok());
  EXPECT_EQ(r.count("PASS"), 1);
}

TEST(Properties, AllSuitesHold) {
  auto results = run_properties(42, 150);
  int total = 0;
  for (const auto& r : results) {
    total += r.cases;
    EXPECT_TRUE(r.ok()) << r.name << ": " << (r.examples.empty() ? "" : r.examples[0]);
  }
  EXPECT_EQ(results.size(), 7u);
  EXPECT_GE(total, 1000);
}

TEST(Properties, OtherSeed) {
  for (const auto& r : run_properties(7, 60)) EXPECT_TRUE(r.ok()) << r.name;
}
