#include "liesym/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "liesym/determine.hpp"
#include "liesym/equivalence.hpp"
#include "liesym/families.hpp"
#include "liesym/liealg.hpp"
#include "liesym/linalg.hpp"
#include "liesym/parse.hpp"
#include "liesym/reduction.hpp"
#include "liesym/solcheck.hpp"
#include "liesym/symsolve.hpp"

namespace liesym {

bool SuiteReport::ok() const {
  return std::all_of(lines.begin(), lines.end(), [](const ReportLine& l) { return l.passed(); });
}

int SuiteReport::count(const std::string& verdict) const {
  return int(std::count_if(lines.begin(), lines.end(), [&](const ReportLine& l) { return l.verdict == verdict; }));
}

void SuiteReport::append(const SuiteReport& other) { lines.insert(lines.end(), other.lines.begin(), other.lines.end()); }

std::uint64_t record_seed(std::uint64_t seed, const std::string& id) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&](unsigned char b) {
    h ^= b;
    h *= 1099511628211ull;
  };
  for (int i = 0; i < 8; ++i) mix(static_cast<unsigned char>(seed >> (8 * i)));
  for (char c : id) mix(static_cast<unsigned char>(c));
  return h;
}

std::vector<ReportLine> run_pool(std::size_t n, unsigned threads, const std::function<ReportLine(std::size_t)>& f) {
  std::vector<ReportLine> out(n);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = unsigned(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next++) < n;) out[i] = f(i);
  };
  if (threads <= 1) {
    work();
    return out;
  }
  std::vector<std::thread> pool;
  for (unsigned k = 0; k < threads; ++k) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  return out;
}

namespace {

using Rng = std::mt19937_64;

Rational draw_rational(Rng& g) {
  long n = 0;
  while (n == 0) n = long(g() % 11) - 5;
  Rational q(n, long(g() % 3) + 1);
  q.canonicalize();
  return q;
}

Rational draw_sign(Rng& g) { return g() % 2 ? Rational(1) : Rational(-1); }

std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : sep) + x;
  return s;
}

std::string show(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

std::pair<std::string, std::string> split_binding(const std::string& s) {
  auto eq = s.find('=');
  if (eq == std::string::npos) throw std::invalid_argument("expected 'name = expression' in '" + s + "'");
  auto trim = [](std::string t) {
    auto a = t.find_first_not_of(" \t"), b = t.find_last_not_of(" \t");
    return a == std::string::npos ? std::string() : t.substr(a, b - a + 1);
  };
  return {trim(s.substr(0, eq)), trim(s.substr(eq + 1))};
}

std::vector<std::string> split_cells(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == '|') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

ParseContext context_for(const std::vector<std::string>& params) {
  ParseContext c;
  c.allow_coef = false;
  c.params.insert(params.begin(), params.end());
  return c;
}

std::string bindings_text(const std::map<std::string, Rational>& v) {
  std::vector<std::string> parts;
  for (const auto& [k, q] : v) parts.push_back(k + "=" + to_string(q));
  return join(parts, ",");
}

template <class F>
ReportLine guarded(const std::string& id, const std::string& kind, F&& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    return ReportLine{id, kind, "FAIL", std::string("error: ") + e.what(), {}};
  }
}

AnsatzBasis basis_named(const std::string& name) {
  if (name == "poly2") return AnsatzBasis::polynomial(2);
  if (name == "poly2+trig") return AnsatzBasis::polynomial(2) + AnsatzBasis::y_trig_extension();
  if (name == "poly2+exp") return AnsatzBasis::polynomial(2) + AnsatzBasis::y_exp_extension();
  throw std::invalid_argument("unknown ansatz " + name);
}

std::size_t rank_of(const std::vector<VectorField>& fields, const AnsatzBasis& basis) {
  Matrix<Expr> m;
  std::size_t cols = 0;
  for (const auto& v : fields) {
    auto c = ansatz_coordinates(v, basis);
    if (!c) return 0;
    cols = c->size();
    m.push_back(*c);
  }
  if (m.empty()) return 0;
  return row_reduce(m, cols).pivots.size();
}

// ---------------------------------------------------------------- cases

Equation case_equation(const CatalogRecord& rec, ParseContext ctx) {
  for (const auto& l : rec.all("let")) {
    auto [name, text] = split_binding(l);
    ctx.values[name] = normal_form(parse(text, ctx));
  }
  std::array<std::optional<Expr>, 3> s;
  const char* keys[3] = {"F", "G", "H"};
  for (int i = 0; i < 3; ++i) {
    auto v = rec.get(keys[i]);
    if (!v) {
      if (i == 2 && rec.get("family") == std::optional<std::string>("gzk-h0")) {
        s[i] = Expr(0);
        continue;
      }
      throw std::invalid_argument(std::string("missing ") + keys[i]);
    }
    if (*v != "arbitrary") s[i] = normal_form(parse(*v, ctx));
  }
  Equation eq = Equation::from_class(s[0], s[1], s[2], rec.id);
  for (const auto& p : ctx.params)
    if (!ctx.values.count(p)) eq.params.push_back(p);
  return eq;
}

ParseContext with_lets(const CatalogRecord& rec, ParseContext ctx) {
  for (const auto& l : rec.all("let")) {
    auto [name, text] = split_binding(l);
    ctx.values[name] = normal_form(parse(text, ctx));
  }
  return ctx;
}

Residual generic_residual(const DeterminingSystem& sys, const VectorField& v) {
  Residual r;
  for (const auto& de : sys.equations) {
    Expr e = normal_form(substitute_field(de.expr, v));
    if (!e.is_zero()) {
      r.kind = Residual::Kind::Nonzero;
      r.expr = e;
      return r;
    }
  }
  return r;
}

DeterminingSystem generic_system(const Equation& eq) { return simplify_system(split_arbitrary(determining_system(eq))); }

}  // namespace

ReportLine verify_case(const CatalogRecord& rec, const Catalog& cat, const VerifyOptions& opt) {
  return guarded(rec.id, "case", [&] {
    ReportLine L{rec.id, "case", "PASS", "", {}};
    const auto ps = rec.words("params");
    ParseContext sym = with_lets(rec, context_for(ps));
    Equation eq = case_equation(rec, context_for(ps));
    const bool generic = eq.has_generic();
    std::optional<DeterminingSystem> gsys;
    if (generic) gsys = generic_system(eq);
    auto residual = [&](const VectorField& v) {
      return generic ? generic_residual(*gsys, v) : check_symmetry(eq, v, record_seed(opt.seed, rec.id));
    };

    const CatalogRecord* kernel = cat.find("algebra", rec.need("kernel"));
    if (!kernel) throw std::invalid_argument("unknown kernel algebra " + rec.need("kernel"));
    std::vector<std::string> texts;  // kernel first, then the verified reading of each listed generator
    for (const auto& g : kernel->all("generator")) {
      Residual r = residual(parse_field(g, sym));
      if (!r.ok(opt.tol)) {
        L.verdict = "FAIL";
        L.notes.push_back("kernel generator " + g + ": " + r.describe());
      }
      texts.push_back(g);
    }
    int k = 0;
    for (const auto* e : rec.entries_of("generator")) {
      ++k;
      Residual r = residual(parse_field(e->value, sym));
      if (r.ok(opt.tol)) {
        texts.push_back(e->value);
        continue;
      }
      std::string why = "generator " + std::to_string(k) + " as printed (" + e->value + "): " + r.describe();
      if (e->candidate) {
        Residual rc = residual(parse_field(*e->candidate, sym));
        if (rc.ok(opt.tol)) {
          if (L.verdict == "PASS") L.verdict = "CORRECTED";
          L.notes.push_back(why + "; candidate " + *e->candidate + " verifies");
          texts.push_back(*e->candidate);
          continue;
        }
        why += "; candidate " + *e->candidate + ": " + rc.describe();
      }
      L.verdict = "FAIL";
      L.notes.push_back(why);
      texts.push_back(e->value);
    }

    const std::string dim_text = rec.need("dimension");
    const bool infinite = dim_text == "infinite";
    const int claimed = infinite ? int(texts.size()) : std::stoi(dim_text);
    if (!infinite && claimed != int(texts.size()))
      L.notes.push_back("claimed dimension " + dim_text + " differs from the generator count " +
                        std::to_string(texts.size()));

    // parameter instantiations
    const auto signs = rec.words("sign");
    const auto nonzero = rec.all("nonzero");
    AnsatzBasis basis = basis_named(rec.get("ansatz").value_or("poly2"));
    Rng rng(record_seed(opt.seed, rec.id));
    std::vector<std::string> dims;
    const int points = ps.empty() ? 1 : opt.random_points;
    for (int p = 0; p < points; ++p) {
      std::map<std::string, Rational> vals;
      ParseContext num;
      bool found = false;
      for (int tries = 0; tries < 500 && !found; ++tries) {
        vals.clear();
        for (const auto& name : ps) {
          bool is_sign = std::find(signs.begin(), signs.end(), name) != signs.end();
          vals[name] = is_sign ? draw_sign(rng) : draw_rational(rng);
        }
        num = context_for({});
        for (const auto& [n, q] : vals) num.values[n] = Expr(q);
        found = true;
        try {
          num = with_lets(rec, num);
          for (const auto& z : nonzero) {
            Expr v = normal_form(parse(z, num));
            if (v.is_zero()) found = false;
          }
        } catch (const ValueError&) {
          found = false;
        } catch (const std::domain_error&) {
          found = false;
        }
      }
      if (!found) {
        L.verdict = "FAIL";
        L.notes.push_back("no admissible parameter point");
        break;
      }
      Equation eqn = case_equation(rec, num);
      SymmetryAlgebraResult res = generic ? solve_system(generic_system(eqn), basis) : solve_ansatz(eqn, basis);
      std::string point = vals.empty() ? "generic" : bindings_text(vals);
      dims.push_back(std::to_string(res.dimension));
      if (res.dimension < claimed) {
        L.verdict = "FAIL";
        L.notes.push_back("at " + point + ": dimension " + std::to_string(res.dimension) + " < " +
                          std::to_string(claimed));
      }
      for (const auto& t : texts)
        if (!contains_field(res, parse_field(t, num), basis)) {
          L.verdict = "FAIL";
          L.notes.push_back("at " + point + ": " + t + " is not in the computed algebra");
        }
    }
    L.residual = "claimed " + dim_text + ", computed dims " + join(dims, "/");
    if (infinite) L.notes.push_back("infinite part checked through the listed solution of the linear equation");
    return L;
  });
}

SuiteReport verify_cases(const Catalog& cat, const VerifyOptions& opt, int table) {
  std::vector<const CatalogRecord*> recs;
  for (const auto* r : cat.of_kind("case"))
    if (table == 0 || r->get("table") == std::optional<std::string>(std::to_string(table))) recs.push_back(r);
  SuiteReport rep{table == 0 ? "cases" : "table" + std::to_string(table), {}};
  rep.lines = run_pool(recs.size(), opt.threads, [&](std::size_t i) { return verify_case(*recs[i], cat, opt); });
  return rep;
}

// ---------------------------------------------------------------- determining systems and algebras

namespace {

Expr canonical_equation(const Expr& e) {
  Expr n = normalize_equation(normal_form(e));
  return n.is_zero() ? n : primitive_part(n);
}

ReportLine verify_detsys(const CatalogRecord& rec) {
  return guarded("detsys." + rec.id, "determining", [&] {
    ReportLine L{"detsys." + rec.id, "determining", "PASS", "", {}};
    Equation eq = family_equation(rec.need("family"));
    DeterminingSystem computed = simplify_system(determining_system(eq));
    ParseContext c = context_for(rec.words("params"));
    c.allow_coef = true;
    DeterminingSystem printed;
    std::vector<Expr> printed_exprs, computed_exprs;
    for (const auto& s : rec.all("equation")) {
      Expr e = normal_form(parse(s, c));
      printed_exprs.push_back(e);
      printed.equations.push_back(DetEquation{e, {}, false});
    }
    for (const auto& de : computed.equations) computed_exprs.push_back(de.expr);

    std::set<Expr> computed_set, printed_set;
    for (const auto& e : computed_exprs) computed_set.insert(canonical_equation(e));
    for (const auto& e : printed_exprs) printed_set.insert(canonical_equation(e));
    int verbatim = 0;
    std::vector<std::string> printed_only, computed_only;
    for (const auto& e : printed_exprs) {
      bool hit = computed_set.count(canonical_equation(e)) > 0;
      verbatim += hit ? 1 : 0;
      if (!hit) printed_only.push_back(to_string(e));
    }
    for (const auto& e : computed_exprs)
      if (!printed_set.count(canonical_equation(e))) computed_only.push_back(to_string(canonical_equation(e)));

    AnsatzBasis basis = AnsatzBasis::polynomial(2);
    ImplicationReport fwd = check_implied(computed, printed_exprs, basis);
    ImplicationReport back = check_implied(printed, computed_exprs, basis);
    L.residual = "computed " + std::to_string(computed_exprs.size()) + ", printed " +
                 std::to_string(printed_exprs.size()) + ", verbatim " + std::to_string(verbatim);
    if (!fwd.all()) {
      L.verdict = "FAIL";
      L.notes.push_back("printed equations not implied by the computed system: " + join(fwd.not_implied, "; "));
    }
    if (!back.all()) {
      L.verdict = "FAIL";
      L.notes.push_back("computed equations not implied by the printed system: " + join(back.not_implied, "; "));
    }
    if (!printed_only.empty())
      L.notes.push_back("printed only (" + std::string(fwd.all() ? "consequences of the computed system" : "see above") +
                        "): " + join(printed_only, "; "));
    if (!computed_only.empty())
      L.notes.push_back("computed only (" + std::string(back.all() ? "consequences of the printed system" : "see above") +
                        "): " + join(computed_only, "; "));
    for (const auto& n : rec.all("note")) L.notes.push_back(n);
    return L;
  });
}

// Solves the named family at the given bindings and compares with the listed generators.
void check_span(ReportLine& L, const Equation& eq, bool generic, const std::vector<std::string>& gens,
                const ParseContext& num, int claimed, const std::string& point) {
  AnsatzBasis basis = AnsatzBasis::polynomial(2);
  SymmetryAlgebraResult res = generic ? solve_system(generic_system(eq), basis) : solve_ansatz(eq, basis);
  std::vector<VectorField> fields;
  for (const auto& g : gens) fields.push_back(parse_field(g, num));
  std::size_t rank = rank_of(fields, basis);
  bool ok = res.dimension == claimed && int(rank) == claimed;
  for (const auto& v : fields) ok = ok && contains_field(res, v, basis);
  L.notes.push_back("at " + point + ": dimension " + std::to_string(res.dimension) + (ok ? ", spans agree" : ""));
  if (!ok) {
    L.verdict = "FAIL";
    std::vector<std::string> basis_text;
    for (const auto& b : res.basis) basis_text.push_back(to_string(b));
    L.notes.push_back("computed basis: " + join(basis_text, ", "));
  }
}

ReportLine verify_solved(const std::string& id, const std::string& family, const std::vector<std::string>& gens,
                         int claimed, const std::vector<std::string>& params, const std::vector<std::string>& signs,
                         const VerifyOptions& opt) {
  return guarded(id, "algebra", [&] {
    ReportLine L{id, "algebra", "PASS", "", {}};
    Rng rng(record_seed(opt.seed, id));
    std::vector<std::map<std::string, Rational>> points;
    std::map<std::string, Rational> ones;
    for (const auto& p : params) ones[p] = 1;
    points.push_back(ones);
    for (int k = 0; k < opt.random_points && !params.empty(); ++k) {
      std::map<std::string, Rational> v;
      for (const auto& p : params)
        v[p] = std::find(signs.begin(), signs.end(), p) != signs.end() ? draw_sign(rng) : draw_rational(rng);
      points.push_back(v);
    }
    for (const auto& v : points) {
      Equation eq = family_equation(family, v);
      ParseContext num;
      num.allow_coef = false;
      for (const auto& [n, q] : v) num.values[n] = Expr(q);
      check_span(L, eq, eq.has_generic(), gens, num, claimed, v.empty() ? "generic" : bindings_text(v));
    }
    L.residual = "dimension " + std::to_string(claimed);
    return L;
  });
}

}  // namespace

SuiteReport verify_determining(const Catalog& cat, const VerifyOptions& opt) {
  auto recs = cat.of_kind("detsys");
  SuiteReport rep{"determining", {}};
  rep.lines = run_pool(recs.size(), opt.threads, [&](std::size_t i) { return verify_detsys(*recs[i]); });
  return rep;
}

SuiteReport verify_algebras(const Catalog& cat, const VerifyOptions& opt) {
  struct Job {
    std::string id, family;
    std::vector<std::string> gens, params, signs;
    int dim;
  };
  std::vector<Job> jobs;
  for (const auto* r : cat.of_kind("detsys"))
    jobs.push_back({"solve." + r->id, r->need("family"), r->all("generator"), r->words("params"), {},
                    std::stoi(r->need("dimension"))});
  for (const auto* r : cat.of_kind("algebra")) {
    auto ps = r->words("params");
    auto gens = r->all("generator");
    jobs.push_back({"algebra." + r->id, r->need("family"), gens, ps, ps, int(gens.size())});
  }
  SuiteReport rep{"algebras", {}};
  rep.lines = run_pool(jobs.size(), opt.threads, [&](std::size_t i) {
    const Job& j = jobs[i];
    return verify_solved(j.id, j.family, j.gens, j.dim, j.params, j.signs, opt);
  });
  return rep;
}

// ---------------------------------------------------------------- Lie tables and optimal systems

namespace {

LieAlgebra algebra_from(const CatalogRecord& alg, const std::vector<std::string>& extra) {
  auto ps = alg.words("params");
  ps.insert(ps.end(), extra.begin(), extra.end());
  ParseContext c = context_for(ps);
  std::vector<VectorField> basis;
  std::vector<std::string> labels;
  for (const auto& g : alg.all("generator")) {
    basis.push_back(parse_field(g, c));
    labels.push_back("v" + std::to_string(basis.size()));
  }
  return structure_constants(basis, labels);
}

// Coordinates of a cell "h*v2 - 3*eps*v1" over v1..vn; throws if the cell is not linear in them.
std::vector<Expr> cell_coords(const std::string& cell, std::size_t n, const std::vector<std::string>& params) {
  ParseContext c = context_for(params);
  for (std::size_t k = 1; k <= n; ++k) c.params.insert("v" + std::to_string(k));
  c.params.insert("eps");
  Expr e = normal_form(parse(cell, c));
  std::vector<Expr> out(n);
  Expr rest = e;
  for (std::size_t k = 0; k < n; ++k) {
    Atom a = param_atom("v" + std::to_string(k + 1));
    out[k] = normal_form(pdiff(e, a));
    rest = rest - out[k] * Expr::atom(a);
    for (std::size_t j = 0; j < n; ++j)
      if (depends_on(out[k], param_atom("v" + std::to_string(j + 1))))
        throw std::invalid_argument("cell '" + cell + "' is not linear in the basis symbols");
  }
  if (!normal_form(rest).is_zero()) throw std::invalid_argument("cell '" + cell + "' has a part outside the span");
  return out;
}

std::string coords_text(const std::vector<Expr>& c, const LieAlgebra& g) { return format_combo(c, g.labels); }

ReportLine verify_grid(const CatalogRecord& rec, const Catalog& cat) {
  const std::string id = rec.kind + "." + rec.id;
  return guarded(id, rec.kind, [&] {
    ReportLine L{id, rec.kind, "PASS", "", {}};
    const CatalogRecord* alg = cat.find("algebra", rec.need("algebra"));
    if (!alg) throw std::invalid_argument("unknown algebra " + rec.need("algebra"));
    auto ps = rec.words("params");
    LieAlgebra g = algebra_from(*alg, ps);
    const std::size_t n = g.dim();
    auto rows = rec.all("row");
    if (rows.size() != n) throw std::invalid_argument("row count differs from the algebra dimension");
    auto all_params = ps;
    for (const auto& p : alg->words("params")) all_params.push_back(p);
    int cells = 0, bad = 0;
    for (std::size_t i = 0; i < n; ++i) {
      auto cs = split_cells(rows[i]);
      if (cs.size() != n) throw std::invalid_argument("row " + std::to_string(i + 1) + " has the wrong width");
      for (std::size_t j = 0; j < n; ++j) {
        ++cells;
        std::vector<Expr> want = cell_coords(cs[j], n, all_params), got;
        if (rec.kind == "commutators") {
          got = g.c[i][j];
        } else {
          got = adjoint_action(g, int(i), param("eps"), unit(n, j));
        }
        bool same = true;
        for (std::size_t k = 0; k < n; ++k) same = same && normal_form(want[k] - got[k]).is_zero();
        if (!same) {
          ++bad;
          L.verdict = "FAIL";
          L.notes.push_back("(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "): printed " +
                            coords_text(want, g) + ", computed " + coords_text(got, g));
        }
      }
    }
    L.residual = std::to_string(cells - bad) + "/" + std::to_string(cells) + " cells agree";
    if (rec.kind == "commutators") {
      if (!jacobi_holds(g)) L.notes.push_back("Jacobi identity fails for the computed constants");
      if (!antisymmetric(g)) L.notes.push_back("computed constants are not antisymmetric");
    }
    return L;
  });
}

ReportLine verify_optimal_record(const CatalogRecord& rec, const Catalog& cat) {
  const std::string id = "optimal." + rec.id;
  return guarded(id, "optimal", [&] {
    ReportLine L{id, "optimal", "PASS", "", {}};
    const CatalogRecord* alg = cat.find("algebra", rec.need("algebra"));
    if (!alg) throw std::invalid_argument("unknown algebra " + rec.need("algebra"));
    auto ps = rec.words("params");
    LieAlgebra g = algebra_from(*alg, ps);
    auto all_params = ps;
    for (const auto& p : alg->words("params")) all_params.push_back(p);
    std::vector<VectorField> fields;
    Matrix<Expr> coords;
    for (const auto& cell : split_cells(rec.need("span"))) {
      auto c = cell_coords(cell, g.dim(), all_params);
      coords.push_back(c);
      fields.push_back(combine(c, g.basis));
    }
    const int dim = std::stoi(rec.need("dim"));
    std::size_t rank = row_reduce(coords, g.dim()).pivots.size();
    if (int(fields.size()) != dim || int(rank) != dim) {
      L.verdict = "FAIL";
      L.notes.push_back("span has rank " + std::to_string(rank) + ", listed dimension " + std::to_string(dim));
    }
    SubalgebraCheck sc = check_subalgebra(fields, g);
    L.residual = sc.closed ? "closed" : "not closed";
    if (!sc.closed) {
      L.verdict = "FAIL";
      L.notes.push_back("bracket outside the span: " + sc.witness);
    }
    for (const auto& n : rec.all("note")) L.notes.push_back(n);
    return L;
  });
}

}  // namespace

SuiteReport verify_tables(const Catalog& cat, const VerifyOptions& opt) {
  std::vector<const CatalogRecord*> recs;
  for (const auto* r : cat.of_kind("commutators")) recs.push_back(r);
  for (const auto* r : cat.of_kind("adjoint")) recs.push_back(r);
  SuiteReport rep{"tables", {}};
  rep.lines = run_pool(recs.size(), opt.threads, [&](std::size_t i) { return verify_grid(*recs[i], cat); });
  return rep;
}

SuiteReport verify_optimal(const Catalog& cat, const VerifyOptions& opt) {
  auto recs = cat.of_kind("optimal");
  SuiteReport rep{"optimal", {}};
  rep.lines = run_pool(recs.size(), opt.threads, [&](std::size_t i) { return verify_optimal_record(*recs[i], cat); });
  return rep;
}

// ---------------------------------------------------------------- reductions

namespace {

ReportLine verify_reduction(const CatalogRecord& rec, const Catalog& cat) {
  const std::string id = "reduction." + rec.id;
  return guarded(id, "reduction", [&] {
    ReportLine L{id, "reduction", "PASS", "", {}};
    const CatalogRecord* alg = cat.find("algebra", rec.need("algebra"));
    if (!alg) throw std::invalid_argument("unknown algebra " + rec.need("algebra"));
    Equation eq = family_equation(alg->need("family"));
    auto ps = rec.words("params");
    ParseContext c = context_for(ps);
    std::vector<VectorField> ops;
    for (const auto& o : rec.all("operator")) ops.push_back(parse_field(o, c));
    const std::string fname = rec.get("function").value_or("w");
    std::vector<std::pair<std::string, std::string>> defs;
    ParseContext rc = c;
    rc.rfuns.insert(fname);
    for (const auto& v : rec.all("var")) {
      defs.push_back(split_binding(v));
      const auto& name = defs.back().first;
      if (name != "t" && name != "x" && name != "y") rc.rvars.insert(name);
    }
    if (defs.size() == 1) rc.prime_var = defs[0].first;

    ReductionAnsatz a = make_ansatz(rec.need("u"), defs, fname, ps);
    AnnihilationReport ann = check_annihilation(ops, a);
    if (!ann.ok) {
      L.verdict = "FAIL";
      for (const auto& f : ann.failures) L.notes.push_back("annihilation: " + f);
    }
    Expr got = reduce(eq, a);
    L.residual = got.is_zero() ? "0" : to_string(normalize_reduced(got));
    auto matches = [&](const std::string& text) {
      Expr want = normal_form(parse(text, rc));
      if (want.is_zero()) return got.is_zero();
      return !got.is_zero() && same_up_to_multiple(got, want);
    };
    const CatalogEntry* red = rec.entry("reduced");
    if (!red) throw std::invalid_argument("missing reduced equation");
    if (!matches(red->value)) {
      if (red->candidate && matches(*red->candidate)) {
        if (L.verdict == "PASS") L.verdict = "CORRECTED";
        L.notes.push_back("printed " + red->value + " does not match; candidate " + *red->candidate + " does");
      } else {
        L.verdict = "FAIL";
        L.notes.push_back("printed " + red->value + " does not match the computed equation");
      }
    }
    if (auto s = rec.get("source")) L.notes.push_back("source: " + *s);
    for (const auto& n : rec.all("note")) L.notes.push_back(n);
    try {
      ReductionAnsatz auto_a = invariants(ops, fname);
      Expr r2 = reduce(eq, auto_a);
      L.notes.push_back("automatic invariants " + auto_a.describe() + " give " +
                        (r2.is_zero() ? std::string("0") : to_string(normalize_reduced(r2))));
    } catch (const std::exception& e) {
      L.notes.push_back(std::string("automatic invariants: ") + e.what());
    }
    return L;
  });
}

}  // namespace

SuiteReport verify_reductions(const Catalog& cat, const VerifyOptions& opt) {
  auto recs = cat.of_kind("reduction");
  SuiteReport rep{"reductions", {}};
  rep.lines = run_pool(recs.size(), opt.threads, [&](std::size_t i) { return verify_reduction(*recs[i], cat); });
  return rep;
}

// ---------------------------------------------------------------- solutions

namespace {

SolutionSpec solution_spec(const CatalogRecord& rec, bool candidates) {
  SolutionSpec spec;
  const FamilyInfo* fam = find_family(rec.need("family"));
  if (!fam) throw std::invalid_argument("unknown family " + rec.need("family"));
  spec.lhs = fam->lhs;
  auto pick = [&](const CatalogEntry& e) { return candidates && e.candidate ? *e.candidate : e.value; };
  for (const auto& e : rec.entries) {
    if (e.key == "constant") {
      auto [name, dom] = split_binding(e.value);
      ConstantDomain d{name, {}};
      if (dom == "lattice") {
        d.values = default_lattice();
      } else {
        std::istringstream is(dom);
        for (std::string w; is >> w;) d.values.push_back(parse_rational(w));
      }
      spec.constants.push_back(d);
    } else if (e.key == "define") {
      spec.defines.push_back(split_binding(pick(e)));
    } else if (e.key == "u") {
      spec.u = pick(e);
    } else if (e.key == "constraint") {
      spec.constraints.push_back(parse_constraint(pick(e)));
    }
  }
  return spec;
}

bool has_candidates(const CatalogRecord& rec) {
  return std::any_of(rec.entries.begin(), rec.entries.end(), [](const CatalogEntry& e) { return e.candidate.has_value(); });
}

const char* kind_name(SolResult::Kind k) {
  switch (k) {
    case SolResult::Kind::SymbolicZero: return "symbolic_zero";
    case SolResult::Kind::Numeric: return "numeric";
    case SolResult::Kind::SymbolicNonzero: return "symbolic_nonzero";
    case SolResult::Kind::NoPoints: return "no_points";
  }
  return "?";
}

struct VariantOutcome {
  bool ok = true;
  int transports = 0;
  std::string residual;
  std::vector<std::string> notes;
};

VariantOutcome run_variant(const SolutionSpec& spec, const CatalogRecord* alg, const VerifyOptions& opt) {
  VariantOutcome out;
  std::vector<Instance> insts;
  try {
    insts = instantiate(spec, opt.instances);
  } catch (const std::runtime_error& e) {
    out.ok = false;
    out.residual = e.what();
    return out;
  }
  GridOptions grid;
  grid.tol = opt.tol;
  std::set<std::string> kinds;
  double worst = 0;
  for (const auto& inst : insts) {
    SolResult r = check_solution(inst.eq, inst.sol, grid);
    kinds.insert(kind_name(r.kind));
    worst = std::max(worst, r.max_abs);
    if (!r.pass(opt.tol)) {
      out.ok = false;
      out.notes.push_back("at " + bindings_text(inst.witness) + ": " + r.describe());
      continue;
    }
    if (r.kind == SolResult::Kind::SymbolicZero) {
      int used = 0;
      double m = numeric_residual(inst.eq, inst.sol, grid, &used);
      if (!(m < 1e-10) || used == 0) {
        out.ok = false;
        out.notes.push_back("symbolic zero but numeric residual " + show(m) + " at " + bindings_text(inst.witness));
      }
    }
    if (!alg) continue;
    ParseContext c = context_for({});
    for (const auto& [n, q] : inst.witness) c.values[n] = Expr(q);
    for (const auto& p : alg->words("params"))
      if (!c.values.count(p)) c.params.insert(p);
    int k = 0;
    for (const auto& g : alg->all("generator")) {
      ++k;
      VectorField Q = parse_field(g, c);
      Expr moved;
      try {
        moved = flow_solution(Q, Rational(1, 2), inst.sol);
      } catch (const std::invalid_argument& e) {
        out.notes.push_back("flow of v" + std::to_string(k) + " not supported: " + e.what());
        continue;
      }
      ++out.transports;
      SolResult tr = check_solution(inst.eq, moved, grid);
      if (!tr.pass(opt.tol)) {
        out.ok = false;
        out.notes.push_back("image under exp(v" + std::to_string(k) + "/2) at " + bindings_text(inst.witness) + ": " +
                            tr.describe());
      }
    }
  }
  std::vector<std::string> ks(kinds.begin(), kinds.end());
  out.residual = join(ks, "+") + (worst > 0 ? " max " + show(worst) : "") + " over " + std::to_string(insts.size()) +
                 " witness" + (insts.size() == 1 ? "" : "es") +
                 (out.transports ? ", " + std::to_string(out.transports) + " symmetry images" : "");
  return out;
}

ReportLine verify_solution(const CatalogRecord& rec, const Catalog& cat, const VerifyOptions& opt) {
  const std::string id = "solution." + rec.id;
  return guarded(id, "solution", [&] {
    ReportLine L{id, "solution", "PASS", "", {}};
    if (rec.get("status") == std::optional<std::string>("unverified")) {
      L.verdict = "SKIP";
      L.residual = "kept as printed";
      for (const auto& n : rec.all("note")) L.notes.push_back(n);
      return L;
    }
    const CatalogRecord* alg = nullptr;
    if (auto r = rec.get("reduction"))
      if (const CatalogRecord* red = cat.find("reduction", *r)) alg = cat.find("algebra", red->need("algebra"));
    VariantOutcome printed = run_variant(solution_spec(rec, false), alg, opt);
    L.residual = printed.residual;
    if (!printed.ok) {
      std::string why = "as printed: " + printed.residual;
      for (const auto& n : printed.notes) why += "; " + n;
      if (has_candidates(rec)) {
        VariantOutcome cand = run_variant(solution_spec(rec, true), alg, opt);
        if (cand.ok) {
          L.verdict = "CORRECTED";
          L.residual = cand.residual;
          L.notes.push_back(why);
          L.notes.push_back("candidate reading verifies");
          for (const auto& n : cand.notes) L.notes.push_back(n);
        } else {
          L.verdict = "FAIL";
          L.notes.push_back(why);
          L.notes.push_back("candidate reading: " + cand.residual);
          for (const auto& n : cand.notes) L.notes.push_back(n);
        }
      } else {
        L.verdict = "FAIL";
        L.notes.push_back(why);
      }
    } else {
      for (const auto& n : printed.notes) L.notes.push_back(n);
    }
    for (const auto& n : rec.all("note")) L.notes.push_back(n);
    return L;
  });
}

}  // namespace

SuiteReport verify_solutions(const Catalog& cat, const VerifyOptions& opt) {
  auto recs = cat.of_kind("solution");
  SuiteReport rep{"solutions", {}};
  rep.lines = run_pool(recs.size(), opt.threads, [&](std::size_t i) { return verify_solution(*recs[i], cat, opt); });
  return rep;
}

// ---------------------------------------------------------------- equivalence

namespace {

std::string system_failures(const EquivGenerator& g) {
  std::vector<std::string> bad;
  for (const auto& c : equivalence_system(g))
    if (!c.value.is_zero()) bad.push_back(c.label + " = " + to_string(c.value));
  return join(bad, "; ");
}

std::vector<ReportLine> verify_equiv_record(const CatalogRecord& rec) {
  std::vector<ReportLine> out;
  const auto ps = rec.words("params");
  int k = 0;
  for (const auto* e : rec.entries_of("generator")) {
    ++k;
    const std::string id = "equivgen." + rec.id + "." + std::to_string(k);
    out.push_back(guarded(id, "equivalence", [&] {
      ReportLine L{id, "equivalence", "PASS", "", {}};
      std::string bad = system_failures(parse_equiv_generator(e->value, ps));
      L.residual = bad.empty() ? "symbolic_zero" : bad;
      if (!bad.empty()) {
        if (e->candidate && system_failures(parse_equiv_generator(*e->candidate, ps)).empty()) {
          L.verdict = "CORRECTED";
          L.notes.push_back("printed " + e->value + " fails; candidate " + *e->candidate + " verifies");
          L.residual = "symbolic_zero (candidate)";
        } else {
          L.verdict = "FAIL";
          L.notes.push_back("printed " + e->value);
        }
      }
      return L;
    }));
  }
  if (!rec.has("component")) return out;

  // component records: t, x, y, u, F, G, H images
  const std::string id = "equivgen." + rec.id;
  out.push_back(guarded(id, "equivalence", [&] {
    ReportLine L{id, "equivalence", "PASS", "", {}};
    ParseContext c = context_for(ps);
    c.rvars = {"F", "G", "H"};
    const std::string order = "txyuFGH";
    auto build = [&](bool candidates) {
      std::array<Expr, 7> comp;
      for (const auto* e : rec.entries_of("component")) {
        auto [name, text] = split_binding(e->value);
        auto slot = order.find(name);
        if (name.size() != 1 || slot == std::string::npos) throw std::invalid_argument("unknown component " + name);
        comp[slot] = normal_form(parse(candidates && e->candidate ? *e->candidate : text, c));
      }
      return comp;
    };
    SubstMap at_identity;
    for (const auto& p : ps) at_identity[param_atom(p)] = Expr(0);
    if (auto idt = rec.get("identity"))
      for (const auto& [n, q] : parse_bindings(*idt)) at_identity[param_atom(n)] = Expr(q);
    auto assess = [&](const std::array<Expr, 7>& comp, std::vector<std::string>& why) {
      for (int i = 0; i < 7; ++i) {
        Expr at0 = normal_form(subst(comp[i], at_identity));
        if (!normal_form(at0 - ext_var(i)).is_zero())
          why.push_back(std::string("not the identity at the identity point: ") + order[i] + "~ = " + to_string(at0));
      }
      Expr defect;
      try {
        defect = group_defect(comp);
      } catch (const std::invalid_argument& e) {
        why.push_back(e.what());
        return;
      }
      if (!defect.is_zero()) why.push_back("class is not preserved: defect " + to_string(defect));
      // tangents at the identity point
      for (const auto& p : ps) {
        EquivGenerator g;
        for (int i = 0; i < 7; ++i) g.c[i] = normal_form(subst(pdiff(comp[i], param_atom(p)), at_identity));
        std::string bad = system_failures(g);
        if (!bad.empty()) why.push_back("tangent along " + p + " fails: " + bad);
      }
    };
    std::vector<std::string> why;
    assess(build(false), why);
    if (why.empty()) {
      L.residual = "group law, identity and tangents verified";
    } else {
      bool has_cand = has_candidates(rec);
      std::vector<std::string> why_c;
      if (has_cand) assess(build(true), why_c);
      for (const auto& w : why) L.notes.push_back("as printed: " + w);
      if (has_cand && why_c.empty()) {
        L.verdict = "CORRECTED";
        L.residual = "candidate components verified";
      } else {
        L.verdict = "FAIL";
        for (const auto& w : why_c) L.notes.push_back("candidate: " + w);
        L.residual = "components fail";
      }
    }
    if (rec.has("identity") && rec.get("identity")->find("eps1=1") != std::string::npos) {
      auto reference = complete_group();
      auto comp = build(false);
      for (int i = 0; i < 7; ++i)
        if (!normal_form(reference[i] - comp[i]).is_zero()) {
          L.verdict = "FAIL";
          L.notes.push_back(std::string("differs from the built-in complete group in ") + order[i] + "~");
        }
    }
    for (const auto& n : rec.all("note")) L.notes.push_back(n);
    return L;
  }));
  return out;
}

EquivTransform random_transform(Rng& g) {
  EquivTransform T;
  for (int i = 1; i <= 12; ++i) T[i] = i <= 4 ? draw_rational(g) : (g() % 4 == 0 ? Rational(0) : draw_rational(g));
  return T;
}

bool same_image(const EquivImage& a, const EquivImage& b) {
  bool ok = normal_form(a.triple.F - b.triple.F).is_zero() && normal_form(a.triple.G - b.triple.G).is_zero() &&
            normal_form(a.triple.H - b.triple.H).is_zero();
  for (int i = 0; i < 4; ++i) ok = ok && normal_form(a.variables[i] - b.variables[i]).is_zero();
  return ok;
}

ReportLine verify_group_law(const VerifyOptions& opt) {
  return guarded("equivgen.group-law", "equivalence", [&] {
    ReportLine L{"equivgen.group-law", "equivalence", "PASS", "", {}};
    Rng rng(record_seed(opt.seed, "equivgen.group-law"));
    const Expr u = var_u();
    int failures = 0;
    for (int n = 0; n < opt.group_draws; ++n) {
      EquivTransform a = random_transform(rng), b = random_transform(rng), c = random_transform(rng);
      Triple tr{u * u * u + Expr(draw_rational(rng)) * u, Expr(draw_rational(rng)) * u * u, Expr(draw_rational(rng)) * u * u};
      std::vector<std::string> why;
      if (!(compose(a, inverse(a)) == EquivTransform::identity()) || !(compose(inverse(a), a) == EquivTransform::identity()))
        why.push_back("inverse");
      if (!(compose(compose(a, b), c) == compose(a, compose(b, c)))) why.push_back("associativity");
      // acting with a then b equals acting with the composite
      EquivImage ia = apply_equivalence(a, tr);
      EquivImage iab = apply_equivalence(b, ia.triple);
      SubstMap through;
      for (int i = 0; i < 3; ++i) through[base_atom(i)] = ia.variables[i];
      through[dep_atom()] = ia.variables[3];
      for (int i = 0; i < 4; ++i) iab.variables[i] = normal_form(subst(iab.variables[i], through));
      if (!same_image(iab, apply_equivalence(compose(a, b), tr))) why.push_back("action");
      if (!why.empty()) {
        ++failures;
        if (failures <= 3) L.notes.push_back("draw " + std::to_string(n) + ": " + join(why, ", "));
      }
    }
    L.residual = std::to_string(opt.group_draws - failures) + "/" + std::to_string(opt.group_draws) + " draws";
    if (failures) L.verdict = "FAIL";
    return L;
  });
}

ReportLine verify_transport(const Catalog& cat, const VerifyOptions& opt) {
  return guarded("equivgen.transport", "equivalence", [&] {
    ReportLine L{"equivgen.transport", "equivalence", "PASS", "", {}};
    const CatalogRecord* sol = cat.find("solution", "zk.1.1.tanh2");
    if (!sol) throw std::invalid_argument("solution zk.1.1.tanh2 missing");
    Rng rng(record_seed(opt.seed, "equivgen.transport"));
    GridOptions grid;
    grid.tol = opt.tol;
    double worst = 0;
    int passed = 0;
    for (int n = 0; n < opt.transforms; ++n) {
      ParseContext c = context_for({});
      Rational g = draw_sign(rng), h = draw_sign(rng);
      c.values["g"] = Expr(g);
      c.values["h"] = Expr(h);
      for (const char* k : {"c1", "c2", "c3"}) c.values[k] = Expr(draw_rational(rng));
      Expr u0 = normal_form(parse(sol->need("u"), c));
      const Expr u = var_u();
      Triple tr{u, Expr(g) * u, Expr(h / 2) * u * u};
      EquivTransform T = random_transform(rng);
      EquivImage img = apply_equivalence(T, tr);
      Equation target = class_member(img.triple);
      Expr moved = transport_solution(T, u0);
      SolResult r = check_solution(target, moved, grid);
      worst = std::max(worst, r.max_abs);
      if (r.pass(opt.tol)) {
        ++passed;
      } else {
        L.verdict = "FAIL";
        L.notes.push_back("transform " + std::to_string(n) + ": " + r.describe());
      }
    }
    L.residual = std::to_string(passed) + "/" + std::to_string(opt.transforms) + " transports, max " + show(worst);
    return L;
  });
}

}  // namespace

SuiteReport verify_equivalence(const Catalog& cat, const VerifyOptions& opt) {
  SuiteReport rep{"equivalence", {}};
  auto recs = cat.of_kind("equivgen");
  std::vector<std::vector<ReportLine>> parts(recs.size());
  auto lines = run_pool(recs.size() + 2, opt.threads, [&](std::size_t i) {
    if (i < recs.size()) {
      parts[i] = verify_equiv_record(*recs[i]);
      return ReportLine{};
    }
    return i == recs.size() ? verify_group_law(opt) : verify_transport(cat, opt);
  });
  for (const auto& p : parts) rep.lines.insert(rep.lines.end(), p.begin(), p.end());
  rep.lines.push_back(
      guarded("equivgen.solved-basis", "equivalence", [&] {
        ReportLine L{"equivgen.solved-basis", "equivalence", "PASS", "12 basis elements", {}};
        for (int k = 1; k <= 12; ++k) {
          std::string bad = system_failures(solved_basis_element(k));
          if (!bad.empty()) {
            L.verdict = "FAIL";
            L.notes.push_back("c" + std::to_string(k) + ": " + bad);
          }
        }
        return L;
      }));
  rep.lines.push_back(lines[recs.size()]);
  rep.lines.push_back(lines[recs.size() + 1]);
  return rep;
}

SuiteReport verify_all(const Catalog& cat, const VerifyOptions& opt) {
  SuiteReport rep{"all", {}};
  rep.append(verify_determining(cat, opt));
  rep.append(verify_algebras(cat, opt));
  rep.append(verify_cases(cat, opt));
  rep.append(verify_tables(cat, opt));
  rep.append(verify_optimal(cat, opt));
  rep.append(verify_reductions(cat, opt));
  rep.append(verify_solutions(cat, opt));
  rep.append(verify_equivalence(cat, opt));
  return rep;
}

std::string format_text(const ReportLine& l) {
  std::string s = l.verdict + " " + l.kind + " " + l.id;
  if (!l.residual.empty()) s += ": " + l.residual;
  for (const auto& n : l.notes) s += "\n    " + n;
  return s;
}

std::string format_json(const ReportLine& l) {
  nlohmann::json j{{"id", l.id}, {"kind", l.kind}, {"verdict", l.verdict}, {"residual", l.residual}, {"notes", l.notes}};
  return j.dump();
}

}  // namespace liesym
