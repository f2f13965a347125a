#include <gtest/gtest.h>

#include <algorithm>

#include "liesym/catalog.hpp"

using namespace liesym;

namespace {
std::string replace_once(std::string s, const std::string& from, const std::string& to) {
  auto p = s.find(from);
  EXPECT_NE(p, std::string::npos) << from;
  if (p != std::string::npos) s.replace(p, from.size(), to);
  return s;
}

bool mentions(const std::vector<AuditIssue>& issues, const std::string& record, const std::string& word) {
  return std::any_of(issues.begin(), issues.end(), [&](const AuditIssue& i) {
    return i.record.find(record) != std::string::npos && i.message.find(word) != std::string::npos;
  });
}
}  // namespace

TEST(Catalog, EmbeddedCatalogLoads) {
  const Catalog& c = default_catalog();
  auto counts = category_counts(c);
  EXPECT_EQ(counts.at("table1"), 24);
  EXPECT_EQ(counts.at("table2"), 10);
  EXPECT_EQ(counts.at("reduction"), 31);
  EXPECT_EQ(counts.at("solution"), 44);
  EXPECT_EQ(counts.at("optimal.zk.2"), 10);
  EXPECT_EQ(counts.at("optimal.mzk.2"), 8);
  EXPECT_EQ(c.manifest_value("format").value_or(""), "liesym-catalog");
  EXPECT_TRUE(audit_catalog(c).empty());
}

TEST(Catalog, RecordAccess) {
  const Catalog& c = default_catalog();
  const CatalogRecord* r = c.find("case", "T1.21");
  ASSERT_NE(r, nullptr);
  EXPECT_EQ(r->need("dimension"), "6");
  EXPECT_EQ(r->all("generator").size(), 3u);
  EXPECT_EQ(category(*r), "table1");
  EXPECT_THROW(r->need("nonexistent"), CatalogError);
  const CatalogRecord* s = c.find("solution", "zk.1.3.sech");
  ASSERT_NE(s, nullptr);
  const CatalogEntry* con = s->entries_of("constraint").at(0);
  ASSERT_TRUE(con->candidate.has_value());
  EXPECT_EQ(*con->candidate, "c1/B < 0");
}

TEST(Catalog, EmptyFileIsAManifestError) {
  try {
    parse_catalog("");
    FAIL() << "empty catalog accepted";
  } catch (const CatalogError& e) {
    EXPECT_NE(std::string(e.what()).find("manifest"), std::string::npos) << e.what();
  }
}

TEST(Catalog, ManifestCountsEnforced) {
  std::string text = replace_once(embedded_catalog_text(), "count.table2: 10", "count.table2: 11");
  try {
    parse_catalog(text);
    FAIL() << "count mismatch accepted";
  } catch (const CatalogError& e) {
    EXPECT_NE(std::string(e.what()).find("table2"), std::string::npos) << e.what();
  }
}

TEST(Catalog, MalformedExpressionNamesRecord) {
  std::string text = replace_once(embedded_catalog_text(), "generator: (k+2-3*n)*t*dt", "generator: (k+2-3*n*t*dt");
  try {
    parse_catalog(text);
    FAIL() << "malformed expression accepted";
  } catch (const CatalogError& e) {
    EXPECT_EQ(e.record(), "case T1.2");
    EXPECT_GT(e.line(), 0);
  }
}

TEST(Catalog, SyntaxErrors) {
  EXPECT_THROW(parse_catalog("[manifest]\nformat: liesym-catalog\nversion: 1\n[case"), CatalogError);
  try {
    parse_catalog("[manifest]\nformat: liesym-catalog\nversion: 1\ncount.table1: 1\n[case A]\ncandidate: x\n");
    FAIL() << "dangling candidate accepted";
  } catch (const CatalogError& e) {
    EXPECT_NE(std::string(e.what()).find("candidate"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_catalog("[manifest]\nformat: other\nversion: 1\n"), CatalogError);
}

TEST(Catalog, AuditFindsDuplicatesAndDanglingReferences) {
  Catalog c = default_catalog();
  c.records.push_back(*c.find("case", "T1.2"));
  EXPECT_TRUE(mentions(audit_catalog(c), "T1.2", "duplicate"));

  Catalog d = default_catalog();
  d.records.erase(std::remove_if(d.records.begin(), d.records.end(),
                                 [](const CatalogRecord& r) { return r.kind == "algebra" && r.id == "zk"; }),
                  d.records.end());
  auto issues = audit_catalog(d);
  EXPECT_FALSE(issues.empty());
  EXPECT_TRUE(mentions(issues, "zk", "zk"));
}

TEST(Catalog, RoundTrip) {
  const Catalog& c = default_catalog();
  std::string once = save_catalog(c);
  Catalog back = parse_catalog(once);
  EXPECT_EQ(save_catalog(back), once);
  EXPECT_EQ(back.records.size(), c.records.size());
}

TEST(Catalog, KnownFamilies) {
  for (const char* f : {"zk", "mzk1", "mzk2", "zk-gh", "mzk-gh", "gzk", "gzk-h0"}) EXPECT_TRUE(known_family(f)) << f;
  EXPECT_FALSE(known_family("kdv"));
}

TEST(Catalog, LoadFromMissingPath) { EXPECT_THROW(load_catalog("/nonexistent/gzk.catalog"), CatalogError); }
