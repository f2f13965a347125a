#include "liesym/catalog.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "liesym/embedded_catalog.hpp"
#include "liesym/equivalence.hpp"
#include "liesym/families.hpp"
#include "liesym/jet.hpp"
#include "liesym/parse.hpp"
#include "liesym/solcheck.hpp"

namespace liesym {

const CatalogEntry* CatalogRecord::entry(const std::string& key) const {
  for (const auto& e : entries)
    if (e.key == key) return &e;
  return nullptr;
}

std::optional<std::string> CatalogRecord::get(const std::string& key) const {
  const CatalogEntry* e = entry(key);
  if (!e) return std::nullopt;
  return e->value;
}

std::string CatalogRecord::need(const std::string& key) const {
  const CatalogEntry* e = entry(key);
  if (!e) throw CatalogError("missing field '" + key + "'", line, label());
  return e->value;
}

std::vector<std::string> CatalogRecord::all(const std::string& key) const {
  std::vector<std::string> out;
  for (const auto& e : entries)
    if (e.key == key) out.push_back(e.value);
  return out;
}

std::vector<const CatalogEntry*> CatalogRecord::entries_of(const std::string& key) const {
  std::vector<const CatalogEntry*> out;
  for (const auto& e : entries)
    if (e.key == key) out.push_back(&e);
  return out;
}

std::vector<std::string> CatalogRecord::words(const std::string& key) const {
  std::vector<std::string> out;
  auto v = get(key);
  if (!v) return out;
  std::istringstream is(*v);
  for (std::string w; is >> w;) out.push_back(w);
  return out;
}

const CatalogRecord* Catalog::find(const std::string& kind, const std::string& id) const {
  for (const auto& r : records)
    if (r.kind == kind && r.id == id) return &r;
  return nullptr;
}

std::vector<const CatalogRecord*> Catalog::of_kind(const std::string& kind) const {
  std::vector<const CatalogRecord*> out;
  for (const auto& r : records)
    if (r.kind == kind) out.push_back(&r);
  return out;
}

std::optional<std::string> Catalog::manifest_value(const std::string& key) const {
  for (const auto& [k, v] : manifest)
    if (k == key) return v;
  return std::nullopt;
}

std::string category(const CatalogRecord& r) {
  if (r.kind == "case") return "table" + r.get("table").value_or("?");
  if (r.kind == "optimal") return "optimal." + r.get("algebra").value_or("?") + "." + r.get("dim").value_or("?");
  return r.kind;
}

std::map<std::string, int> category_counts(const Catalog& c) {
  std::map<std::string, int> out;
  for (const auto& r : c.records) ++out[category(r)];
  return out;
}

bool known_family(const std::string& name) { return find_family(name) != nullptr; }

namespace {
std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool valid_key(const std::string& k) {
  if (k.empty()) return false;
  for (char ch : k)
    if (!(std::isalpha(static_cast<unsigned char>(ch)) || std::isdigit(static_cast<unsigned char>(ch)) || ch == '.' ||
          ch == '-' || ch == '_'))
      return false;
  return true;
}

// "name = text"
std::pair<std::string, std::string> binding(const std::string& v, const CatalogRecord& r, int line) {
  auto p = v.find('=');
  if (p == std::string::npos) throw CatalogError("expected 'name = expression' in '" + v + "'", line, r.label());
  return {trim(v.substr(0, p)), trim(v.substr(p + 1))};
}

std::vector<std::string> split_cells(const std::string& v) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : v) {
    if (ch == '|') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(trim(cur));
  return out;
}

ParseContext record_context(const CatalogRecord& r) {
  ParseContext ctx;
  ctx.allow_coef = false;
  for (const auto& w : r.words("params")) ctx.params.insert(w);
  return ctx;
}

void checked(const CatalogRecord& r, const CatalogEntry& e, const std::function<void(const std::string&)>& f) {
  auto one = [&](const std::string& text, const char* what) {
    try {
      f(text);
    } catch (const CatalogError&) {
      throw;
    } catch (const std::exception& ex) {
      throw CatalogError(std::string("bad ") + what + " '" + e.key + "': " + ex.what(), e.line, r.label());
    }
  };
  one(e.value, "field");
  if (e.candidate) one(*e.candidate, "candidate for");
}
}  // namespace

void validate_expressions(const CatalogRecord& r) {
  ParseContext ctx = record_context(r);
  for (const auto& e : r.entries)
    if (e.key == "let") {
      auto [name, text] = binding(e.value, r, e.line);
      checked(r, e, [&](const std::string&) { ctx.values[name] = parse(text, ctx); });
    }
  auto field = [&](const std::string& s) { parse_field(s, ctx); };
  auto expr = [&](const std::string& s) { parse(s, ctx); };

  if (r.kind == "case") {
    for (const auto& e : r.entries) {
      if ((e.key == "F" || e.key == "G" || e.key == "H") && e.value != "arbitrary") checked(r, e, expr);
      if (e.key == "generator") checked(r, e, field);
      if (e.key == "nonzero") checked(r, e, expr);
    }
  } else if (r.kind == "algebra") {
    for (const auto& e : r.entries)
      if (e.key == "generator") checked(r, e, field);
  } else if (r.kind == "commutators" || r.kind == "adjoint" || r.kind == "optimal") {
    ParseContext c2 = ctx;
    for (int i = 1; i <= 9; ++i) c2.params.insert("v" + std::to_string(i));
    c2.params.insert("eps");
    for (const auto& e : r.entries)
      if (e.key == "row" || e.key == "span")
        checked(r, e, [&](const std::string& s) {
          for (const auto& cell : split_cells(s)) parse(cell, c2);
        });
  } else if (r.kind == "reduction") {
    ParseContext c2 = ctx;
    std::string fname = r.get("function").value_or("w");
    c2.rfuns.insert(fname);
    std::vector<std::string> vars;
    for (const auto& e : r.entries)
      if (e.key == "var") {
        auto [name, text] = binding(e.value, r, e.line);
        checked(r, e, [&](const std::string&) { parse(text, ctx); });
        vars.push_back(name);
        if (name != "t" && name != "x" && name != "y") c2.rvars.insert(name);
      }
    if (vars.size() == 1) c2.prime_var = vars[0];
    for (const auto& e : r.entries) {
      if (e.key == "operator") checked(r, e, field);
      if (e.key == "u" || e.key == "reduced") checked(r, e, [&](const std::string& s) { parse(s, c2); });
    }
  } else if (r.kind == "solution") {
    // constants bound to their first domain value; only syntax errors count here
    auto lenient = [&](const std::function<void()>& f) {
      try {
        f();
      } catch (const ValueError&) {
      }
    };
    for (const auto& e : r.entries) {
      if (e.key == "constant") {
        auto [name, dom] = binding(e.value, r, e.line);
        std::string first = dom == "lattice" ? "1" : dom.substr(0, dom.find(' '));
        checked(r, e, [&](const std::string&) { ctx.values[name] = Expr(parse_rational(first)); });
      }
      if (e.key == "define") {
        auto name = binding(e.value, r, e.line).first;
        ctx.params.insert(name);
        checked(r, e, [&](const std::string& s) {
          lenient([&] {
            ctx.params.erase(name);
            ctx.values[name] = parse(binding(s, r, e.line).second, ctx);
          });
          if (!ctx.values.count(name)) ctx.params.insert(name);
        });
      }
    }
    for (const auto& e : r.entries) {
      if (e.key == "u") checked(r, e, [&](const std::string& s) { lenient([&] { parse(s, ctx); }); });
      if (e.key == "constraint")
        checked(r, e, [&](const std::string& s) {
          auto c = parse_constraint(s);
          lenient([&] { parse(c.expr, ctx); });
        });
    }
  } else if (r.kind == "equivgen") {
    std::vector<std::string> ps = r.words("params");
    for (const auto& e : r.entries)
      if (e.key == "generator") checked(r, e, [&](const std::string& s) { parse_equiv_generator(s, ps); });
    ParseContext c2 = ctx;
    c2.rvars = {"F", "G", "H"};
    for (const auto& e : r.entries)
      if (e.key == "component")
        checked(r, e, [&](const std::string& s) {
          if (s.find('=') == std::string::npos) {
            parse(s, c2);  // candidate: right-hand side only
            return;
          }
          auto [name, text] = binding(s, r, e.line);
          if (name.size() != 1 || std::string("txyuFGH").find(name) == std::string::npos)
            throw std::invalid_argument("unknown component " + name);
          parse(text, c2);
        });
  } else if (r.kind == "detsys") {
    ParseContext c2 = ctx;
    c2.allow_coef = true;
    for (const auto& e : r.entries) {
      if (e.key == "equation") checked(r, e, [&](const std::string& s) { parse(s, c2); });
      if (e.key == "generator") checked(r, e, field);
    }
  }
}

Catalog parse_catalog(const std::string& text) {
  Catalog c;
  std::istringstream is(text);
  std::string raw;
  int line = 0;
  bool in_manifest = false, seen_manifest = false;
  CatalogRecord* cur = nullptr;
  while (std::getline(is, raw)) {
    ++line;
    std::string s = trim(raw);
    if (s.empty() || s[0] == '#') continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw CatalogError("unterminated section header", line);
      std::string head = trim(s.substr(1, s.size() - 2));
      if (head == "manifest") {
        if (seen_manifest) throw CatalogError("second manifest", line);
        if (!c.records.empty()) throw CatalogError("manifest must come first", line);
        in_manifest = seen_manifest = true;
        cur = nullptr;
        continue;
      }
      if (!seen_manifest) throw CatalogError("missing [manifest] header", line);
      auto sp = head.find(' ');
      if (sp == std::string::npos) throw CatalogError("section needs 'kind id'", line);
      in_manifest = false;
      c.records.push_back(CatalogRecord{head.substr(0, sp), trim(head.substr(sp + 1)), line, {}});
      cur = &c.records.back();
      continue;
    }
    auto colon = s.find(':');
    if (colon == std::string::npos) throw CatalogError("expected 'key: value'", line, cur ? cur->label() : "");
    std::string key = trim(s.substr(0, colon)), value = trim(s.substr(colon + 1));
    if (!valid_key(key)) throw CatalogError("invalid key '" + key + "'", line, cur ? cur->label() : "");
    if (in_manifest) {
      c.manifest.emplace_back(key, value);
      continue;
    }
    if (!cur) throw CatalogError("entry outside of a section", line);
    if (key == "candidate") {
      if (cur->entries.empty() || cur->entries.back().candidate)
        throw CatalogError("candidate without a preceding entry", line, cur->label());
      cur->entries.back().candidate = value;
      continue;
    }
    cur->entries.push_back(CatalogEntry{key, value, std::nullopt, line});
  }
  if (!seen_manifest) throw CatalogError("missing [manifest] header", 0);
  if (c.manifest_value("format") != std::optional<std::string>("liesym-catalog"))
    throw CatalogError("manifest: format must be liesym-catalog", 0);
  if (c.manifest_value("version") != std::optional<std::string>("1"))
    throw CatalogError("manifest: unsupported version", 0);

  auto counts = category_counts(c);
  std::set<std::string> declared;
  for (const auto& [k, v] : c.manifest) {
    if (k.rfind("count.", 0) != 0) continue;
    std::string cat = k.substr(6);
    declared.insert(cat);
    int want;
    try {
      want = std::stoi(v);
    } catch (const std::exception&) {
      throw CatalogError("manifest: count for " + cat + " is not a number", 0);
    }
    int have = counts.count(cat) ? counts[cat] : 0;
    if (have != want)
      throw CatalogError("manifest: " + cat + " declares " + std::to_string(want) + " records, found " +
                             std::to_string(have),
                         0);
  }
  for (const auto& [cat, n] : counts)
    if (!declared.count(cat)) throw CatalogError("manifest: no count declared for " + cat, 0);

  for (const auto& r : c.records) validate_expressions(r);
  return c;
}

Catalog load_catalog(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CatalogError("cannot open " + path, 0);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_catalog(ss.str());
}

const std::string& embedded_catalog_text() {
  return embedded_catalog();
}

const Catalog& default_catalog() {
  static const Catalog c = parse_catalog(embedded_catalog_text());
  return c;
}

std::string save_catalog(const Catalog& c) {
  std::ostringstream os;
  os << "# liesym catalog\n[manifest]\n";
  for (const auto& [k, v] : c.manifest) os << k << ": " << v << "\n";
  for (const auto& r : c.records) {
    os << "\n[" << r.kind << " " << r.id << "]\n";
    for (const auto& e : r.entries) {
      os << e.key << ": " << e.value << "\n";
      if (e.candidate) os << "candidate: " << *e.candidate << "\n";
    }
  }
  return os.str();
}

std::vector<AuditIssue> audit_catalog(const Catalog& c) {
  std::vector<AuditIssue> out;
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& r : c.records)
    if (!seen.insert({r.kind, r.id}).second) out.push_back({r.label(), "duplicate id"});

  auto ref = [&](const CatalogRecord& r, const std::string& key, const std::string& kind) {
    for (const auto& v : r.all(key))
      if (!c.find(kind, v)) out.push_back({r.label(), key + " '" + v + "' does not exist"});
  };
  auto family = [&](const CatalogRecord& r) {
    for (const auto& v : r.all("family"))
      if (!known_family(v)) out.push_back({r.label(), "family '" + v + "' is not a known equation family"});
  };
  for (const auto& r : c.records) {
    family(r);
    if (r.kind == "case") ref(r, "kernel", "algebra");
    if (r.kind == "commutators" || r.kind == "adjoint" || r.kind == "optimal" || r.kind == "reduction")
      ref(r, "algebra", "algebra");
    if (r.kind == "reduction") ref(r, "subalgebra", "optimal");
    if (r.kind == "solution") {
      ref(r, "reduction", "reduction");
      if (!r.has("family")) out.push_back({r.label(), "solution without an equation family"});
    }
    if (r.kind == "reduction" && !r.has("family")) {
      auto a = r.get("algebra");
      const CatalogRecord* alg = a ? c.find("algebra", *a) : nullptr;
      if (alg && !alg->has("family")) out.push_back({r.label(), "no equation family reachable"});
    }
  }
  return out;
}

}  // namespace liesym
