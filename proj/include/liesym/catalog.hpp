#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace liesym {

// Line-oriented catalog: a [manifest] block followed by [kind id] records of "key: value" lines.
// A "candidate:" line attaches a proposed correction to the entry right above it.
struct CatalogEntry {
  std::string key, value;
  std::optional<std::string> candidate;
  int line = 0;
};

struct CatalogRecord {
  std::string kind, id;
  int line = 0;
  std::vector<CatalogEntry> entries;

  std::string label() const { return kind + " " + id; }
  const CatalogEntry* entry(const std::string& key) const;
  std::optional<std::string> get(const std::string& key) const;
  std::string need(const std::string& key) const;  // throws CatalogError
  std::vector<std::string> all(const std::string& key) const;
  std::vector<const CatalogEntry*> entries_of(const std::string& key) const;
  std::vector<std::string> words(const std::string& key) const;  // whitespace-split first value
  bool has(const std::string& key) const { return entry(key) != nullptr; }
};

struct Catalog {
  std::vector<std::pair<std::string, std::string>> manifest;
  std::vector<CatalogRecord> records;

  const CatalogRecord* find(const std::string& kind, const std::string& id) const;
  std::vector<const CatalogRecord*> of_kind(const std::string& kind) const;
  std::optional<std::string> manifest_value(const std::string& key) const;
};

class CatalogError : public std::runtime_error {
 public:
  CatalogError(const std::string& msg, int line, std::string record = {})
      : std::runtime_error((line > 0 ? "line " + std::to_string(line) + ": " : std::string()) +
                           (record.empty() ? "" : record + ": ") + msg),
        line_(line),
        record_(std::move(record)) {}
  int line() const { return line_; }
  const std::string& record() const { return record_; }

 private:
  int line_;
  std::string record_;
};

// Counting key of a record: "table1", "optimal.zk.2", or the kind itself.
std::string category(const CatalogRecord& r);
std::map<std::string, int> category_counts(const Catalog& c);

// Parses, checks the manifest counts and parses every expression field.
Catalog parse_catalog(const std::string& text);
Catalog load_catalog(const std::string& path);
const std::string& embedded_catalog_text();
const Catalog& default_catalog();

std::string save_catalog(const Catalog& c);

// Throws CatalogError naming the record when an expression field does not parse.
void validate_expressions(const CatalogRecord& r);

struct AuditIssue {
  std::string record, message;
};
// Duplicate ids and dangling references (algebra, family, subalgebra, reduction, kernel).
std::vector<AuditIssue> audit_catalog(const Catalog& c);

// Named equation families the catalog may refer to.
bool known_family(const std::string& name);

}  // namespace liesym
