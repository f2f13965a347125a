// liesym command-line front end.
#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "liesym/catalog.hpp"
#include "liesym/determine.hpp"
#include "liesym/families.hpp"
#include "liesym/liealg.hpp"
#include "liesym/parse.hpp"
#include "liesym/reduction.hpp"
#include "liesym/symsolve.hpp"
#include "liesym/verify.hpp"

using namespace liesym;

namespace {

struct Options {
  std::string eq, params, symbols, catalog, format = "text", output, ansatz = "poly2", algebra, id, fname = "w";
  std::vector<std::string> fields;
  std::uint64_t seed = 42;
  double tol = 1e-8;
  unsigned threads = 0;
  int table = 0;
  bool check = false;
};

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> words(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  for (std::string w; is >> w;) out.push_back(w);
  return out;
}

std::map<std::string, Rational> bindings(const Options& o) {
  try {
    return o.params.empty() ? std::map<std::string, Rational>{} : parse_bindings(o.params);
  } catch (const std::exception& e) {
    throw UsageError(std::string("bad --params: ") + e.what());
  }
}

Equation equation(const Options& o) {
  if (o.eq.empty()) throw UsageError("--eq is required");
  try {
    if (find_family(o.eq)) return family_equation(o.eq, bindings(o));
    return inline_equation(o.eq, words(o.symbols), bindings(o));
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& e) {
    throw UsageError(std::string("bad --eq: ") + e.what());
  }
}

ParseContext field_context(const Options& o) {
  ParseContext c;
  c.allow_coef = false;
  for (const auto& s : words(o.symbols)) c.params.insert(s);
  for (const auto& [n, q] : bindings(o)) c.values[n] = Expr(q);
  if (const FamilyInfo* f = find_family(o.eq))
    for (const auto& p : f->params)
      if (!c.values.count(p)) c.params.insert(p);
  return c;
}

std::vector<VectorField> fields(const Options& o) {
  std::vector<VectorField> out;
  ParseContext c = field_context(o);
  for (const auto& f : o.fields) {
    try {
      out.push_back(parse_field(f, c));
    } catch (const std::exception& e) {
      throw UsageError("bad --field '" + f + "': " + e.what());
    }
  }
  return out;
}

const Catalog& catalog(const Options& o) {
  static Catalog loaded;
  if (o.catalog.empty()) return default_catalog();
  try {
    loaded = load_catalog(o.catalog);
  } catch (const std::exception& e) {
    throw UsageError(std::string("catalog: ") + e.what());
  }
  return loaded;
}

VerifyOptions verify_options(const Options& o) {
  VerifyOptions v;
  v.seed = o.seed;
  v.tol = o.tol;
  v.threads = o.threads;
  return v;
}

AnsatzBasis basis(const std::string& name) {
  AnsatzBasis b;
  std::string rest = name;
  bool first = true;
  while (!rest.empty()) {
    auto plus = rest.find('+');
    std::string part = rest.substr(0, plus);
    rest = plus == std::string::npos ? "" : rest.substr(plus + 1);
    AnsatzBasis piece;
    if (part.rfind("poly", 0) == 0 && part.size() > 4 && std::isdigit(static_cast<unsigned char>(part[4])))
      piece = AnsatzBasis::polynomial(std::stoi(part.substr(4)));
    else if (part == "trig")
      piece = AnsatzBasis::y_trig_extension();
    else if (part == "exp")
      piece = AnsatzBasis::y_exp_extension();
    else
      throw UsageError("unknown ansatz part '" + part + "'");
    b = first ? piece : b + piece;
    first = false;
  }
  return b;
}

// Output sink: text lines or json-lines objects.
struct Out {
  std::ostream& os;
  bool json;

  void line(const std::string& s) {
    if (!json) os << s << "\n";
  }
  void record(const nlohmann::json& j) {
    if (json) os << j.dump() << "\n";
  }
};

int report(Out& out, const SuiteReport& r) {
  for (const auto& l : r.lines) out.json ? out.record(nlohmann::json::parse(format_json(l))) : out.line(format_text(l));
  std::ostringstream s;
  s << "summary " << r.suite << ": " << r.count("PASS") << " pass, " << r.count("CORRECTED") << " corrected, "
    << r.count("FAIL") << " fail, " << r.count("SKIP") << " skip";
  out.line(s.str());
  return r.ok() ? 0 : 1;
}

SuiteReport only_kind(SuiteReport r, const std::string& kind) {
  std::vector<ReportLine> keep;
  for (auto& l : r.lines)
    if (l.kind == kind) keep.push_back(std::move(l));
  r.lines = std::move(keep);
  r.suite = kind;
  return r;
}

SuiteReport only_id(SuiteReport r, const std::string& id) {
  if (id.empty()) return r;
  std::vector<ReportLine> keep;
  for (auto& l : r.lines)
    if (l.id == id || l.id.size() > id.size() && l.id.compare(l.id.size() - id.size(), id.size(), id) == 0 &&
                          l.id[l.id.size() - id.size() - 1] == '.')
      keep.push_back(std::move(l));
  if (keep.empty()) throw UsageError("no record with id " + id);
  r.lines = std::move(keep);
  return r;
}

LieAlgebra algebra(const Options& o) {
  if (!o.algebra.empty()) {
    const CatalogRecord* rec = catalog(o).find("algebra", o.algebra);
    if (!rec) throw UsageError("unknown algebra " + o.algebra);
    ParseContext c;
    c.allow_coef = false;
    for (const auto& p : rec->words("params")) c.params.insert(p);
    for (const auto& [n, q] : bindings(o)) c.values[n] = Expr(q);
    std::vector<VectorField> b;
    for (const auto& g : rec->all("generator")) b.push_back(parse_field(g, c));
    return structure_constants(b);
  }
  if (o.fields.empty()) throw UsageError("give --algebra or at least one --field");
  return structure_constants(fields(o));
}

int run(const std::string& cmd, const Options& o, Out& out) {
  if (cmd == "derive-determining") {
    if (o.check) return report(out, only_id(verify_determining(catalog(o), verify_options(o)), o.eq.empty() ? "" : "detsys." + o.eq));
    Equation eq = equation(o);
    DeterminingSystem ds = simplify_system(determining_system(eq));
    if (eq.has_generic()) ds = simplify_system(split_arbitrary(ds));
    std::vector<std::string> lines;
    for (const auto& de : ds.equations) lines.push_back(to_string(normalize_equation(de.expr)) + " = 0");
    out.line(std::to_string(lines.size()) + " equations");
    for (const auto& l : lines) out.line(l);
    out.record({{"id", o.eq}, {"kind", "determining"}, {"verdict", "PASS"}, {"residual", std::to_string(lines.size()) + " equations"}, {"notes", lines}});
    return 0;
  }
  if (cmd == "check-symmetry") {
    Equation eq = equation(o);
    auto fs = fields(o);
    if (fs.empty()) throw UsageError("--field is required");
    bool ok = true;
    for (std::size_t i = 0; i < fs.size(); ++i) {
      Residual r = check_symmetry(eq, fs[i], o.seed);
      ok = ok && r.ok(o.tol);
      out.line(std::string(r.ok(o.tol) ? "PASS " : "FAIL ") + o.fields[i] + ": " + r.describe());
      out.record({{"id", o.fields[i]}, {"kind", "symmetry"}, {"verdict", r.ok(o.tol) ? "PASS" : "FAIL"}, {"residual", r.describe()}, {"notes", nlohmann::json::array()}});
    }
    return ok ? 0 : 1;
  }
  if (cmd == "solve") {
    if (o.check) return report(out, verify_algebras(catalog(o), verify_options(o)));
    Equation eq = equation(o);
    AnsatzBasis b = basis(o.ansatz);
    SymmetryAlgebraResult r = eq.has_generic() ? solve_system(simplify_system(split_arbitrary(determining_system(eq))), b)
                                               : solve_ansatz(eq, b);
    std::vector<std::string> gens, assume;
    for (const auto& v : r.basis) gens.push_back(to_string(v));
    for (const auto& a : r.assumptions) assume.push_back(to_string(a) + " != 0");
    out.line("dimension " + std::to_string(r.dimension));
    for (std::size_t i = 0; i < gens.size(); ++i) out.line("v" + std::to_string(i + 1) + " = " + gens[i]);
    for (const auto& a : assume) out.line("assuming " + a);
    nlohmann::json notes = gens;
    for (const auto& a : assume) notes.push_back("assuming " + a);
    out.record({{"id", o.eq}, {"kind", "algebra"}, {"verdict", "PASS"}, {"residual", "dimension " + std::to_string(r.dimension)}, {"notes", notes}});
    return 0;
  }
  if (cmd == "commutators" || cmd == "adjoint") {
    if (o.check) {
      VerifyOptions v = verify_options(o);
      if (cmd == "commutators") return report(out, only_kind(verify_tables(catalog(o), v), "commutators"));
      SuiteReport r = only_kind(verify_tables(catalog(o), v), "adjoint");
      r.append(verify_optimal(catalog(o), v));
      r.suite = "adjoint and optimal";
      return report(out, r);
    }
    LieAlgebra g = algebra(o);
    std::string table = cmd == "commutators" ? commutator_table(g) : adjoint_table(g, param("eps"));
    out.line(table);
    out.record({{"id", o.algebra.empty() ? "fields" : o.algebra}, {"kind", cmd}, {"verdict", "PASS"}, {"residual", ""}, {"notes", {table}}});
    return 0;
  }
  if (cmd == "reduce") {
    if (o.check) return report(out, only_id(verify_reductions(catalog(o), verify_options(o)), o.id));
    Equation eq = equation(o);
    auto fs = fields(o);
    if (fs.empty()) throw UsageError("--field is required");
    ReductionAnsatz a = invariants(fs, o.fname);
    Expr r = reduce(eq, a);
    std::string red = r.is_zero() ? "0" : to_string(normalize_reduced(r));
    out.line("ansatz " + a.describe());
    out.line("reduced " + red + " = 0");
    out.record({{"id", o.eq}, {"kind", "reduction"}, {"verdict", "PASS"}, {"residual", red}, {"notes", {a.describe()}}});
    return 0;
  }
  VerifyOptions v = verify_options(o);
  if (cmd == "verify-case") return report(out, only_id(verify_cases(catalog(o), v, o.table), o.id));
  if (cmd == "verify-solutions") return report(out, only_id(verify_solutions(catalog(o), v), o.id));
  if (cmd == "verify-equivalence") return report(out, verify_equivalence(catalog(o), v));
  if (cmd == "verify-all") return report(out, verify_all(catalog(o), v));
  throw UsageError("unknown subcommand " + cmd);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lie point symmetries of generalized Zakharov-Kuznetsov equations"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  Options o;
  app.add_option("--seed", o.seed, "random seed")->capture_default_str();
  app.add_option("--tol", o.tol, "numeric tolerance")->capture_default_str();
  app.add_option("--catalog", o.catalog, "catalog file (default: embedded)");
  app.add_option("--format", o.format, "text or json-lines")->check(CLI::IsMember({"text", "json-lines"}));
  app.add_option("-o,--output", o.output, "write the report to a file");
  app.add_option("--threads", o.threads, "worker threads (0: all cores)");

  auto eq_opts = [&](CLI::App* s) {
    s->add_option("--eq", o.eq, "family name (zk, mzk1, mzk2, zk-gh, mzk-gh, gzk, gzk-h0) or inline u_t + ...");
    s->add_option("--params", o.params, "bindings such as a=1,b=-2/3");
    s->add_option("--symbols", o.symbols, "symbolic parameter names for inline equations");
  };
  auto* derive = app.add_subcommand("derive-determining", "print the normalized determining system");
  eq_opts(derive);
  derive->add_flag("--check", o.check, "compare with the catalog's printed systems");
  auto* check = app.add_subcommand("check-symmetry", "residual of the invariance criterion");
  eq_opts(check);
  check->add_option("--field", o.fields, "vector field such as '3*t*dt + x*dx - 2*u*du'");
  auto* solve = app.add_subcommand("solve", "maximal algebra within a polynomial ansatz");
  eq_opts(solve);
  solve->add_option("--ansatz", o.ansatz, "poly2, poly3, poly2+trig, poly2+exp")->capture_default_str();
  solve->add_flag("--check", o.check, "solve every catalog algebra and compare spans");
  for (const char* name : {"commutators", "adjoint"}) {
    auto* s = app.add_subcommand(name, std::string(name) + " table");
    eq_opts(s);
    s->add_option("--algebra", o.algebra, "catalog algebra id (mzk, zk, ...)");
    s->add_option("--field", o.fields, "basis field");
    s->add_flag("--check", o.check,
                std::string("compare with the catalog grids") + (std::string(name) == "adjoint" ? " and check the optimal systems" : ""));
  }
  auto* red = app.add_subcommand("reduce", "invariants and reduced equation for a subalgebra");
  eq_opts(red);
  red->add_option("--field", o.fields, "subalgebra generator");
  red->add_option("--function", o.fname, "name of the reduced function")->capture_default_str();
  red->add_option("--id", o.id, "with --check: one reduction");
  red->add_flag("--check", o.check, "verify every catalog reduction");
  auto* vcase = app.add_subcommand("verify-case", "verify classification cases");
  vcase->add_option("--id", o.id, "case id such as T1.19");
  vcase->add_option("--table", o.table, "1 or 2");
  auto* vsol = app.add_subcommand("verify-solutions", "verify the exact solutions");
  vsol->add_option("--id", o.id, "solution id");
  app.add_subcommand("verify-equivalence", "verify the equivalence algebra and groups");
  app.add_subcommand("verify-all", "every catalog suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  std::ofstream file;
  if (!o.output.empty()) {
    file.open(o.output);
    if (!file) {
      std::cerr << "cannot write " << o.output << "\n";
      return 2;
    }
  }
  Out out{o.output.empty() ? std::cout : file, o.format == "json-lines"};
  try {
    return run(app.get_subcommands().front()->get_name(), o, out);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
