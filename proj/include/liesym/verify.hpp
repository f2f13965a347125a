#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "liesym/catalog.hpp"

namespace liesym {

// PASS: verified as printed.  CORRECTED: printed reading fails, the catalog candidate verifies.
// FAIL: neither verifies.  SKIP: record flagged as not checkable.
struct ReportLine {
  std::string id, kind, verdict;
  std::string residual;
  std::vector<std::string> notes;

  bool passed() const { return verdict == "PASS" || verdict == "CORRECTED" || verdict == "SKIP"; }
};

struct VerifyOptions {
  std::uint64_t seed = 42;
  double tol = 1e-8;
  int random_points = 3;  // parameter instantiations per case
  int instances = 3;      // constant witnesses per solution
  int transforms = 10;    // random transports of the stationary ZK solution
  int group_draws = 100;  // random group-law draws
  unsigned threads = 0;   // 0: hardware concurrency
};

struct SuiteReport {
  std::string suite;
  std::vector<ReportLine> lines;

  bool ok() const;
  int count(const std::string& verdict) const;
  void append(const SuiteReport& other);
};

// Deterministic per-record stream: FNV-1a over the record id mixed with the seed.
std::uint64_t record_seed(std::uint64_t seed, const std::string& id);

// Runs f on every index in a worker pool; results keep index order.
std::vector<ReportLine> run_pool(std::size_t n, unsigned threads, const std::function<ReportLine(std::size_t)>& f);

ReportLine verify_case(const CatalogRecord& rec, const Catalog& cat, const VerifyOptions& opt);
SuiteReport verify_cases(const Catalog& cat, const VerifyOptions& opt, int table = 0);  // 0: both tables

// Printed determining systems against the computed ones, up to implied consequences.
SuiteReport verify_determining(const Catalog& cat, const VerifyOptions& opt);
// Solved algebras: dimension and exact span equality.
SuiteReport verify_algebras(const Catalog& cat, const VerifyOptions& opt);
// Commutator and adjoint grids, entry by entry.
SuiteReport verify_tables(const Catalog& cat, const VerifyOptions& opt);
SuiteReport verify_optimal(const Catalog& cat, const VerifyOptions& opt);
SuiteReport verify_reductions(const Catalog& cat, const VerifyOptions& opt);
SuiteReport verify_solutions(const Catalog& cat, const VerifyOptions& opt);
SuiteReport verify_equivalence(const Catalog& cat, const VerifyOptions& opt);
SuiteReport verify_all(const Catalog& cat, const VerifyOptions& opt);

std::string format_text(const ReportLine& l);
std::string format_json(const ReportLine& l);  // one line

}  // namespace liesym
