#include "unilin/dispatch.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <thread>

#include "unilin/certify.hpp"
#include "unilin/lattice.hpp"
#include "unilin/lie.hpp"
#include "unilin/measure.hpp"
#include "unilin/orbit.hpp"
#include "unilin/subgroups.hpp"

#ifndef UNILIN_VERSION
#define UNILIN_VERSION "dev"
#endif

namespace unilin {

namespace {

std::string fmt_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

class Csv {
 public:
  explicit Csv(std::vector<std::string> header) : header_(std::move(header)) {}
  void row(std::vector<std::string> cells) {
    require(cells.size() == header_.size(), "csv row width mismatch");
    rows_.push_back(std::move(cells));
  }
  std::string str() const {
    std::ostringstream os;
    put(os, header_);
    for (const auto& r : rows_) put(os, r);
    return os.str();
  }

 private:
  static void put(std::ostringstream& os, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) os << ',';
      if (cells[i].find_first_of(",\"\n") != std::string::npos) {
        os << '"';
        for (char ch : cells[i]) os << (ch == '"' ? "\"\"" : std::string(1, ch));
        os << '"';
      } else {
        os << cells[i];
      }
    }
    os << '\n';
  }
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

std::string b(bool x) { return x ? "true" : "false"; }

// Parameter access with defaults; every read is recorded so unknown keys can be rejected.
class Params {
 public:
  explicit Params(const json& j) : j_(j.is_null() ? json::object() : j) {
    require(j_.is_object(), "params must be a JSON object");
  }
  bool has(const std::string& k) const {
    used_[k] = true;
    return j_.contains(k);
  }
  const json& at(const std::string& k) const {
    used_[k] = true;
    require(j_.contains(k), "missing parameter: " + k);
    return j_.at(k);
  }
  json get(const std::string& k, const json& def) const { return has(k) ? j_.at(k) : def; }
  Q q(const std::string& k, const Q& def) const { return has(k) ? q_from(j_.at(k)) : def; }
  long integer(const std::string& k, long def) const { return has(k) ? z_from(j_.at(k)).get_si() : def; }
  double real(const std::string& k, double def) const {
    if (!has(k)) return def;
    return j_.at(k).is_number() ? j_.at(k).get<double>() : to_double(q_from(j_.at(k)));
  }
  std::string str(const std::string& k, const std::string& def) const {
    return has(k) ? j_.at(k).get<std::string>() : def;
  }
  void check_unused() const {
    for (const auto& [k, v] : j_.items())
      if (!used_.count(k)) fail(Errc::InvalidArgument, "unknown parameter: " + k);
  }

 private:
  json j_;
  mutable std::map<std::string, bool> used_;
};

struct Ctx {
  const Params& p;
  ConstantsProfile k;
  std::uint64_t seed;
  int threads;
  RunResult& out;
  json& result;
  std::vector<std::string> lines;
};

Mat g_param(const Params& p, int default_n = 2) {
  return p.has("g") ? mat_from(p.at("g")) : identity(default_n);
}

MatrixLieAlgebra ambient_param(const Params& p, int n) {
  return p.has("ambient") ? algebra_from(p.at("ambient"), n) : full_sl(n);
}

OneParameterUnipotent unipotent_param(const Params& p, int n) {
  return OneParameterUnipotent::make(p.has("z") ? mat_from(p.at("z")) : elementary(n, 0, n - 1));
}

std::vector<Mat> standard_generators(int n) {
  std::vector<Mat> gens;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) gens.push_back(add(identity(n), elementary(n, i, j)));
  return gens;
}

CatalogResult build_catalog(const json& request, const MatrixLieAlgebra& ambient, const ConstantsProfile& k,
                            int threads) {
  Params p(request);
  SubgroupDescriptor h = subgroup_from(p.get("subgroup", json{{"preset", "upper"}}), ambient);
  std::vector<Mat> gens;
  if (p.has("generators"))
    for (const auto& g : p.at("generators")) gens.push_back(mat_from(g));
  else
    gens = standard_generators(ambient.n);
  Q T = p.q("height_bound", Q(30));
  int words = static_cast<int>(p.integer("word_bound", 12));
  Q margin = p.q("margin", k.catalog_margin);
  p.check_unused();
  return gamma_orbit_catalog(h, gens, T, words, margin, threads);
}

std::vector<SubgroupDescriptor> catalog_param(const Params& p, const MatrixLieAlgebra& ambient,
                                              const ConstantsProfile& k, int threads) {
  std::vector<SubgroupDescriptor> cat;
  if (p.has("catalog"))
    for (const auto& h : p.at("catalog")) cat.push_back(subgroup_from(h, ambient));
  if (p.has("catalog_build")) {
    auto built = build_catalog(p.at("catalog_build"), ambient, k, threads);
    cat.insert(cat.end(), built.entries.begin(), built.entries.end());
  }
  for (std::size_t i = 0; i < cat.size(); ++i)
    if (cat[i].name.empty()) cat[i].name = "H" + std::to_string(i);
  return cat;
}

json algebra_summary(const MatrixLieAlgebra& a) { return {{"dim", a.dim()}, {"basis", algebra_json(a)}}; }

json short_vector_json(const ShortVector& s) {
  json coeffs = json::array();
  for (const auto& c : s.coeffs) coeffs.push_back(to_json(c));
  return {{"c", to_json(s.c)}, {"vector", to_json(s.v)}, {"coeffs", coeffs}};
}

json flag_json(const FlagProfile& f) {
  json etas = json::array();
  for (const auto& e : f.eta) etas.push_back(to_json(e));
  return {{"N", f.N},
          {"ranks", f.ranks},
          {"eta", etas},
          {"eta_top", to_json(f.eta_top)},
          {"concave", flag_concave(f)},
          {"grid_points", f.grid.size()},
          {"certificate", f.certificate},
          {"candidates", f.candidates}};
}

json obstruction_json(const ObstructionResult& o) {
  json j{{"found", o.found},
         {"diagnostic", o.diagnostic},
         {"r", o.r},
         {"k", o.k},
         {"eta_k", to_json(o.eta_k)},
         {"bound_ok", o.bound_ok},
         {"sigma_bar", to_json(o.sigma_bar)}};
  if (o.W) j["W"] = subgroup_json(*o.W);
  return j;
}

// ---- commands ----

void cmd_height(Ctx& c) {
  Mat g = g_param(c.p);
  int n = c.p.has("n") ? static_cast<int>(c.p.integer("n", 2)) : static_cast<int>(g.size());
  auto ambient = ambient_param(c.p, n);
  auto h = subgroup_from(c.p.get("subgroup", json{{"preset", "upper"}}), ambient);
  c.result["subgroup"] = subgroup_json(h);
  c.result["height"] = to_json(h.height);
  c.result["v"] = to_json(h.v);
  if (c.p.has("g")) {
    Q cg = c_fun(eta_H(g, h), PlaceSystem::archimedean());
    c.result["c_eta_H"] = to_json(cg);
    c.lines.push_back("c(eta_H(g)) = " + to_string(cg));
  }
  c.lines.push_back("height = " + to_string(h.height));
}

void cmd_subgroup_analyze(Ctx& c) {
  int n = static_cast<int>(c.p.integer("n", 2));
  auto ambient = ambient_param(c.p, n);
  auto h = subgroup_from(c.p.get("subgroup", json{{"preset", "borel"}}), ambient);
  auto rad = radical_and_unipotent_radical(h.lie);
  auto st = stabilizer_L_H(h, ambient);
  c.result["subgroup"] = subgroup_json(h);
  c.result["killing"] = to_json(killing_matrix(h.lie));
  c.result["radical"] = algebra_summary(rad.radical);
  c.result["unipotent_radical"] = algebra_summary(rad.unipotent_radical);
  c.result["class_h_closure"] = algebra_summary(class_h_closure(h.lie));
  c.result["L_H"] = algebra_summary(st.lie_L);
  c.result["M_H"] = subgroup_json(st.M);
  c.lines.push_back("dim " + std::to_string(h.dim) + ", height " + to_string(h.height) +
                    ", class-H " + b(h.class_h) + ", normal " + b(h.normal_in_G));
  c.lines.push_back("radical dim " + std::to_string(rad.radical.dim()) + ", unipotent radical dim " +
                    std::to_string(rad.unipotent_radical.dim()));
  c.lines.push_back("L_H dim " + std::to_string(st.lie_L.dim()) + ", M_H dim " + std::to_string(st.M.dim));
}

void cmd_diophantine(Ctx& c) {
  Mat g = g_param(c.p);
  int n = static_cast<int>(g.size());
  auto ambient = ambient_param(c.p, n);
  auto U = unipotent_param(c.p, n);
  auto cat = catalog_param(c.p, ambient, c.k, c.threads);
  Q eta = c.p.q("eta", Q(1, 100));
  long double t = c.p.real("t", 5);
  auto eps = epsilon_from(c.p.get("epsilon", nullptr), c.k, eta, cat, U.direction());
  auto v = diophantine_test(g, eps, t, cat, U.direction());
  json rows = json::array();
  Csv csv({"entry", "name", "c", "wedge", "eps", "considered", "violated"});
  for (std::size_t i = 0; i < v.rows.size(); ++i) {
    const auto& r = v.rows[i];
    Q e = eps(r.c);
    rows.push_back({{"name", cat[i].name},
                    {"c", to_json(r.c)},
                    {"wedge", to_json(r.wedge)},
                    {"eps", to_json(e)},
                    {"considered", r.considered},
                    {"violated", r.violated}});
    csv.row({std::to_string(i), cat[i].name, to_string(r.c), to_string(r.wedge), to_string(e), b(r.considered),
             b(r.violated)});
  }
  c.result["diophantine"] = v.diophantine;
  c.result["vacuous"] = v.vacuous;
  c.result["violator"] = v.violator >= 0 ? json(cat[v.violator].name) : json(nullptr);
  c.result["rows"] = rows;
  c.out.csv = csv.str();
  c.lines.push_back(v.vacuous ? "empty catalog: vacuously Diophantine"
                              : v.diophantine ? "Diophantine against " + std::to_string(cat.size()) + " entries"
                                              : "not Diophantine: violated by " + cat[v.violator].name);
}

void cmd_catalog_build(Ctx& c) {
  int n = static_cast<int>(c.p.integer("n", 2));
  auto ambient = ambient_param(c.p, n);
  json request = json::object();
  for (const char* key : {"subgroup", "generators", "height_bound", "word_bound", "margin"})
    if (c.p.has(key)) request[key] = c.p.at(key);
  auto cat = build_catalog(request, ambient, c.k, c.threads);
  json entries = json::array();
  Csv csv({"index", "height", "dim", "word_length", "word"});
  for (std::size_t i = 0; i < cat.entries.size(); ++i) {
    const auto& h = cat.entries[i];
    entries.push_back({{"height", to_json(h.height)},
                       {"word_length", cat.word_length[i]},
                       {"word", to_json(cat.words[i])},
                       {"basis", algebra_json(h.lie)}});
    csv.row({std::to_string(i), to_string(h.height), std::to_string(h.dim), std::to_string(cat.word_length[i]),
             to_json(cat.words[i]).dump()});
  }
  c.result["count"] = cat.entries.size();
  c.result["word_bound_binding"] = cat.word_bound_binding;
  c.result["nodes"] = cat.nodes;
  c.result["entries"] = entries;
  c.out.csv = csv.str();
  c.lines.push_back(std::to_string(cat.entries.size()) + " conjugates" +
                    (cat.word_bound_binding ? " (word bound reached; list may be incomplete)" : ""));
}

void cmd_xeta(Ctx& c) {
  Mat g = g_param(c.p);
  auto ambient = ambient_param(c.p, static_cast<int>(g.size()));
  Q eta = c.p.q("eta", Q(1, 100));
  auto r = x_eta_test(g, eta, ambient);
  c.result["in_x_eta"] = r.in;
  if (r.witness) c.result["witness"] = short_vector_json(*r.witness);
  auto sv = shortest_c(adjoint_lattice(g, ambient));
  c.result["shortest"] = short_vector_json(sv);
  c.lines.push_back(std::string(r.in ? "in" : "outside") + " X_eta for eta = " + to_string(eta) +
                    "; shortest c = " + to_string(sv.c));
}

void cmd_reduce(Ctx& c) {
  Mat g = g_param(c.p);
  auto r = reduce_representative(g);
  c.result["gamma"] = to_json(r.gamma);
  c.result["reduced"] = to_json(r.reduced);
  c.result["size_before"] = to_json(r.size_before);
  c.result["size_after"] = to_json(r.size_after);
  if (c.p.has("eta")) c.result["bound_holds"] = reduction_bound_holds(r, c.p.q("eta", 1), c.k);
  c.lines.push_back("|g| " + to_string(r.size_before) + " -> " + to_string(r.size_after));
}

struct FlagSetup {
  Mat g;
  MatrixLieAlgebra ambient;
  LatticeBasis l;
  MatPoly action;
};

FlagSetup flag_setup(const Ctx& c) {
  FlagSetup s;
  s.g = g_param(c.p);
  int n = static_cast<int>(s.g.size());
  s.ambient = ambient_param(c.p, n);
  auto U = unipotent_param(c.p, n);
  long kexp = c.p.integer("k", 0);
  Q scale_k = 1;
  for (long i = 0; i < kexp; ++i) scale_k *= c.k.aQ;
  s.l = adjoint_lattice(s.g, s.ambient);
  s.action = rescale(exp_nilpotent(ad_in(full_sl(n), sl_coords(U.z))), scale_k);
  return s;
}

void cmd_flag(Ctx& c) {
  auto s = flag_setup(c);
  auto f = flag_construct(s.l, s.action);
  c.result["flag"] = flag_json(f);
  std::ostringstream os;
  os << "flag ranks";
  for (int r : f.ranks) os << ' ' << r;
  os << "; concave " << b(flag_concave(f));
  c.lines.push_back(os.str());
}

void cmd_obstruct(Ctx& c) {
  auto s = flag_setup(c);
  auto f = flag_construct(s.l, s.action);
  auto o = detect_unipotent_obstruction(f, s.l, s.ambient, c.k.rho, c.k.kappa_prime);
  c.result["flag"] = flag_json(f);
  c.result["obstruction"] = obstruction_json(o);
  if (o.W) c.result["M"] = subgroup_json(stabilizer_L_H(*o.W, s.ambient).M);
  c.lines.push_back(o.found ? "unipotent obstruction of dim " + std::to_string(o.W->dim) + ", height " +
                                  to_string(o.W->height)
                            : "no obstruction: " + o.diagnostic);
}

MapFactor factor_from(const json& j) {
  Params p(j);
  MapFactor f;
  if (p.has("components"))
    for (const auto& s : p.at("components")) f.comps.push_back(parse_upoly(s.get<std::string>()));
  else
    f.comps.push_back(parse_upoly(p.str("poly", "t")));
  f.a = p.q("a", Q(0));
  f.b = p.q("b", Q(1));
  f.mu = measure_from(p.get("measure", "lebesgue"));
  p.check_unused();
  return f;
}

void cmd_remez(Ctx& c) {
  PolynomialMap F;
  if (c.p.has("factors")) {
    for (const auto& f : c.p.at("factors")) F.factors.push_back(factor_from(f));
  } else {
    json single = json::object();
    for (const char* key : {"poly", "components", "a", "b", "measure"})
      if (c.p.has(key)) single[key] = c.p.at(key);
    F.factors.push_back(factor_from(single));
  }
  int d = static_cast<int>(c.p.integer("d", F.degree()));
  std::vector<Q> deltas = c.p.has("deltas") ? q_list(c.p.at("deltas")) : std::vector<Q>{Q(1, 100), Q(1, 10000)};
  double tol = c.p.real("tolerance", 0.05);
  SublevelParams sp;
  sp.rel_res = c.p.real("rel_res", sp.rel_res);
  sp.max_boxes = c.p.integer("max_boxes", sp.max_boxes);
  auto fit = remez_verify(F, d, deltas, tol, sp);
  json rows = json::array();
  Csv csv({"delta", "lower", "upper", "total", "sup_lo", "sup_hi", "ratio_lo", "ratio_hi", "resolved", "boxes"});
  for (const auto& r : fit.rows) {
    rows.push_back({{"delta", to_json(r.delta)},
                    {"lower", to_json(r.lower)},
                    {"upper", to_json(r.upper)},
                    {"total", to_json(r.total)},
                    {"sup", {to_json(r.sup.lo), to_json(r.sup.hi)}},
                    {"ratio", {r.ratio_lo(), r.ratio_hi()}},
                    {"resolved", r.resolved},
                    {"boxes", r.boxes}});
    csv.row({to_string(r.delta), to_string(r.lower), to_string(r.upper), to_string(r.total), to_string(r.sup.lo),
             to_string(r.sup.hi), fmt_double(r.ratio_lo()), fmt_double(r.ratio_hi()), b(r.resolved),
             std::to_string(r.boxes)});
  }
  c.result["degree"] = d;
  c.result["exponent"] = fit.exponent;
  c.result["constant"] = fit.constant;
  c.result["target"] = fit.target;
  c.result["log_corrected"] = fit.log_corrected;
  c.result["rows"] = rows;
  c.out.csv = csv.str();
  c.lines.push_back("fitted exponent " + fmt_double(fit.exponent) + " against target " + fmt_double(fit.target));
}

void cmd_friendly_check(Ctx& c) {
  auto mu = measure_from(c.p.get("measure", "cantor"));
  std::vector<Q> centers;
  if (c.p.has("centers")) centers = q_list(c.p.at("centers"));
  else if (mu.kind == FriendlyMeasure::Kind::Digit) centers = support_points(mu, 4);
  else if (mu.kind == FriendlyMeasure::Kind::Table)
    for (const auto& a : mu.atoms) centers.push_back(a.first);
  else centers = {Q(1, 4), Q(1, 2), Q(3, 4)};
  std::vector<Q> radii;
  if (c.p.has("radii")) {
    radii = q_list(c.p.at("radii"));
  } else {
    Q r(1, 2);
    for (int j = 0; j < 8; ++j, r /= 2) radii.push_back(r);
  }
  std::vector<Q> svals;
  if (c.p.has("s_values")) {
    svals = q_list(c.p.at("s_values"));
  } else {
    Q s(1, 2);
    for (int j = 0; j < 6; ++j, s /= 2) svals.push_back(s);
  }
  int per = static_cast<int>(c.p.integer("points_per_interval", 9));
  auto fed = federer_check(mu, centers, radii);
  auto dec = decaying_check(mu, centers, radii, svals, per);
  c.result["measure"] = measure_json(mu);
  c.result["federer"] = {{"max_ratio", to_json(fed.max_ratio)},
                         {"at_center", to_json(fed.at_center)},
                         {"at_radius", to_json(fed.at_radius)},
                         {"finite", fed.finite},
                         {"atomic", fed.atomic}};
  json rows = json::array();
  Csv csv({"s", "max_ratio"});
  for (const auto& r : dec.rows) {
    rows.push_back({{"s", to_json(r.s)}, {"max_ratio", to_json(r.max_ratio)}});
    csv.row({to_string(r.s), to_string(r.max_ratio)});
  }
  c.result["decay"] = {{"alpha", dec.alpha}, {"c", dec.c}, {"decaying", dec.decaying}, {"rows", rows}};
  c.result["friendly"] = fed.finite && !fed.atomic && dec.decaying;
  c.out.csv = csv.str();
  c.lines.push_back("Federer constant " + fmt_double(to_double(fed.max_ratio)) + ", decay exponent " +
                    fmt_double(dec.alpha) + ", friendly " + b(fed.finite && !fed.atomic && dec.decaying));
}

void cmd_nss_bounds(Ctx& c) {
  int m = static_cast<int>(c.p.integer("m", 1));
  int n = static_cast<int>(c.p.integer("n", 1));
  int D0 = static_cast<int>(c.p.integer("D0", 1));
  double h = c.p.real("h", 0);
  auto nb = nss_bounds(m, n, D0, h);
  c.result["m"] = nb.m;
  c.result["n"] = nb.n;
  c.result["D0"] = nb.D0;
  c.result["M"] = nb.M;
  c.result["h"] = nb.h;
  c.result["b_bound"] = to_json(nb.b_bound);
  c.result["degree_bound"] = to_json(nb.degree_bound);
  c.result["height_bound"] = nb.height_bound();
  c.result["log10_height_bound"] = nb.log10_height_bound;
  c.result["convention"] = nb.convention;
  c.lines.push_back("b <= " + to_string(nb.b_bound) + ", deg <= " + to_string(nb.degree_bound) + ", height <= " +
                    nb.height_bound() + " (" + nb.convention + ")");
}

std::vector<std::string> poly_list(const Params& p) {
  std::vector<std::string> polys;
  if (p.has("polys"))
    for (const auto& s : p.at("polys")) polys.push_back(s.get<std::string>());
  if (p.has("poly")) polys.push_back(p.at("poly").get<std::string>());
  require(!polys.empty(), "need at least one polynomial (poly or polys)");
  return polys;
}

PolySystem system_param(const Params& p) {
  std::vector<std::string> vars;
  if (p.has("vars")) vars = p.at("vars").get<std::vector<std::string>>();
  return make_system(poly_list(p), vars, static_cast<int>(p.integer("D0", 0)));
}

void cmd_nss_verify(Ctx& c) {
  auto sys = system_param(c.p);
  NssCertificate cert;
  if (c.p.has("certificate")) {
    Params cp(c.p.at("certificate"));
    cert.f = parse_poly(cp.at("f").get<std::string>(), sys.vars);
    cert.b = static_cast<int>(cp.integer("b", 1));
    cert.a = cp.has("a") ? z_from(cp.at("a")) : Z(1);
    for (const auto& s : cp.at("q")) cert.q.push_back(parse_poly(s.get<std::string>(), sys.vars));
    cp.check_unused();
  } else {
    cert = euclid_certificate(sys, parse_poly(c.p.str("f", "1"), sys.vars));
  }
  auto rep = verify_certificate(cert, sys);
  json q = json::array();
  for (const auto& qi : cert.q) q.push_back(to_string(qi, sys.vars));
  c.result["certificate"] = {{"f", to_string(cert.f, sys.vars)}, {"b", cert.b}, {"a", to_json(cert.a)}, {"q", q}};
  c.result["valid"] = rep.valid;
  c.result["reason"] = rep.reason;
  c.result["b_ok"] = rep.b_ok;
  c.result["degree_ok"] = rep.degree_ok;
  c.result["height_ok"] = rep.height_ok;
  c.result["max_cofactor_degree"] = rep.max_cofactor_degree;
  c.result["max_cofactor_height"] = rep.max_cofactor_height;
  c.result["b_bound"] = to_json(rep.bounds.b_bound);
  c.result["degree_bound"] = to_json(rep.bounds.degree_bound);
  c.lines.push_back(rep.valid ? "certificate verified (b " + std::to_string(cert.b) + ")"
                              : "certificate rejected: " + rep.reason);
}

void cmd_hensel(Ctx& c) {
  auto sys = system_param(c.p);
  std::vector<Z> w;
  for (const auto& x : c.p.at("w").is_array() ? c.p.at("w") : json::array({c.p.at("w")})) w.push_back(z_from(x));
  long p = c.p.integer("p", 5);
  long C2 = c.p.integer("C2", 1);
  long target = c.p.integer("prec", 30);
  long cap = c.p.integer("max_precision", 1 << 16);
  auto r = hensel_lift(sys, w, p, C2, target, cap);
  json y = json::array();
  for (const auto& x : r.y) y.push_back(to_json(x));
  json steps = json::array();
  Csv csv({"step", "y", "valuation", "bound", "proximity"});
  for (const auto& s : r.steps) {
    json ys = json::array();
    std::string ycell;
    for (const auto& x : s.y) {
      ys.push_back(to_json(x));
      ycell += (ycell.empty() ? "" : " ") + to_string(x);
    }
    steps.push_back({{"step", s.step}, {"y", ys}, {"valuation", s.valuation}, {"bound", s.bound},
                     {"proximity", s.proximity}});
    csv.row({std::to_string(s.step), ycell, std::to_string(s.valuation), std::to_string(s.bound),
             std::to_string(s.proximity)});
  }
  c.result["y"] = y;
  c.result["p"] = r.p;
  c.result["target"] = r.target;
  c.result["C2"] = r.C2;
  c.result["digits"] = r.digits;
  c.result["rows"] = r.rows;
  c.result["cols"] = r.cols;
  c.result["minor_valuation"] = r.minor_valuation;
  c.result["proximity"] = r.proximity;
  c.result["congruence_ok"] = r.congruence_ok;
  c.result["proximity_ok"] = r.proximity_ok;
  c.result["exact_root"] = r.exact_root;
  c.result["steps"] = steps;
  c.out.csv = csv.str();
  std::string ys;
  for (const auto& x : r.y) ys += (ys.empty() ? "" : ", ") + to_string(x);
  c.lines.push_back("y = (" + ys + ") mod " + std::to_string(p) + "^" + std::to_string(target) +
                    "; congruence " + b(r.congruence_ok) + ", proximity " + b(r.proximity_ok));
}

struct ScanSetup {
  Mat g;
  OneParameterUnipotent U;
  ScanParams sp;
};

ScanSetup scan_setup(const Ctx& c) {
  ScanSetup s;
  s.g = g_param(c.p);
  int n = static_cast<int>(s.g.size());
  s.sp.ambient = ambient_param(c.p, n);
  s.U = unipotent_param(c.p, n);
  s.sp.k = c.p.integer("k", 0);
  s.sp.grid = static_cast<int>(c.p.integer("grid", 100));
  s.sp.eta = c.p.q("eta", Q(1, 100));
  s.sp.t = c.p.real("t", 5);
  s.sp.catalog = catalog_param(c.p, s.sp.ambient, c.k, c.threads);
  s.sp.eps = epsilon_from(c.p.get("epsilon", nullptr), c.k, s.sp.eta, s.sp.catalog, s.U.direction());
  s.sp.threads = c.threads;
  return s;
}

json scan_json(const OrbitScanReport& r, const std::vector<SubgroupDescriptor>& cat) {
  json entries = json::array();
  for (std::size_t i = 0; i < cat.size(); ++i)
    entries.push_back({{"name", cat[i].name},
                       {"height", to_json(cat[i].height)},
                       {"normal", cat[i].normal_in_G},
                       {"max_c", to_json(r.max_c[i])},
                       {"max_wedge", to_json(r.max_wedge[i])}});
  return {{"aQ", to_json(r.aQ)},
          {"k", r.k},
          {"grid", r.grid},
          {"eta", to_json(r.eta)},
          {"t", real_json(r.t)},
          {"size_raw", to_json(r.size_raw)},
          {"size_reduced", to_json(r.size_reduced)},
          {"g_reduced", to_json(r.g_reduced)},
          {"outside_x_eta", r.outside_x_eta},
          {"non_diophantine", r.non_diophantine},
          {"exceptional", r.exceptional},
          {"fraction", to_json(r.fraction)},
          {"fraction_outside", to_json(r.fraction_outside)},
          {"vacuous_catalog", r.vacuous_catalog},
          {"catalog", entries}};
}

std::string scan_csv(const OrbitScanReport& r, const std::vector<SubgroupDescriptor>& cat) {
  std::vector<std::string> header{"xi", "s", "in_x_eta", "witness_c", "diophantine", "violator", "exceptional"};
  for (std::size_t i = 0; i < cat.size(); ++i) {
    header.push_back("c_" + std::to_string(i));
    header.push_back("wedge_" + std::to_string(i));
  }
  Csv csv(header);
  for (const auto& row : r.rows) {
    std::vector<std::string> cells{to_string(row.xi),
                                   to_string(row.s),
                                   b(row.in_x_eta),
                                   row.in_x_eta ? "" : to_string(row.witness_c),
                                   b(row.diophantine),
                                   std::to_string(row.violator),
                                   b(row.exceptional)};
    for (const auto& cell : row.cells) {
      cells.push_back(to_string(cell.c));
      cells.push_back(to_string(cell.wedge));
    }
    csv.row(cells);
  }
  return csv.str();
}

void cmd_orbit_scan(Ctx& c) {
  auto s = scan_setup(c);
  auto r = orbit_scan(s.g, s.U, s.sp, c.k);
  c.result["scan"] = scan_json(r, s.sp.catalog);
  c.out.csv = scan_csv(r, s.sp.catalog);
  c.lines.push_back("exceptional fraction " + to_string(r.fraction) + " (outside X_eta " +
                    std::to_string(r.outside_x_eta) + ", non-Diophantine " + std::to_string(r.non_diophantine) +
                    " of " + std::to_string(r.grid) + ")");
}

void cmd_trichotomy(Ctx& c) {
  auto s = scan_setup(c);
  auto r = orbit_scan(s.g, s.U, s.sp, c.k);
  auto v = trichotomy_classify(r, c.k, s.sp.catalog, s.U.direction());
  json alt2 = json::array(), alt3 = json::array();
  for (const auto& a : v.alt2)
    alt2.push_back({{"name", s.sp.catalog[a.entry].name},
                    {"c_ok", a.c_ok},
                    {"wedge_ok", a.wedge_ok},
                    {"log_c_margin", real_json(a.log_c_margin)},
                    {"log_wedge_margin", real_json(a.log_wedge_margin)}});
  for (const auto& a : v.alt3)
    alt3.push_back({{"name", s.sp.catalog[a.entry].name},
                    {"wedge", to_json(a.wedge)},
                    {"log_margin", real_json(a.log_margin)},
                    {"ok", a.ok}});
  c.result["scan"] = scan_json(r, s.sp.catalog);
  c.result["verdict"] = {{"alternative", alternative_name(v.alt)},
                         {"subgroup", v.entry >= 0 ? json(v.name) : json(nullptr)},
                         {"fraction", to_json(v.fraction)},
                         {"alt1_bound", v.alt1_bound},
                         {"alt1", v.alt1},
                         {"alt2", alt2},
                         {"alt3", alt3},
                         {"nearest_miss", v.nearest_miss}};
  c.out.csv = scan_csv(r, s.sp.catalog);
  std::string line = std::string("verdict ") + alternative_name(v.alt);
  if (v.entry >= 0) line += " (" + v.name + ")";
  line += "; exceptional fraction " + to_string(r.fraction) + ", alt1 bound " + fmt_double(v.alt1_bound);
  c.lines.push_back(line);
  if (!v.nearest_miss.empty()) c.lines.push_back(v.nearest_miss);
}

void cmd_inheritance(Ctx& c) {
  auto s = scan_setup(c);
  long double t_prime = c.p.real("t_prime", static_cast<double>(s.sp.t));
  Q eps2 = c.p.q("eps2", Q(1, 2));
  auto r = inheritance_check(s.g, s.U, s.sp.eta, s.sp.t, t_prime, s.sp.k, eps2, s.sp, c.k);
  c.result["status"] = status_name(r.status);
  c.result["reason"] = r.reason;
  c.result["fraction"] = to_json(r.fraction);
  c.result["bound"] = r.bound;
  c.result["margin"] = r.margin;
  c.result["hypothesis_met"] = r.hypothesis_met;
  if (r.scan) {
    c.result["scan"] = scan_json(*r.scan, s.sp.catalog);
    c.out.csv = scan_csv(*r.scan, s.sp.catalog);
  }
  c.lines.push_back(std::string("inheritance ") + status_name(r.status) +
                    (r.reason.empty() ? "" : ": " + r.reason) + "; margin " + fmt_double(r.margin));
}

json pipeline_json(const PipelineReport& r) {
  json j{{"k", r.k},
         {"triggered", r.triggered},
         {"fraction_outside", to_json(r.fraction_outside)},
         {"trigger_bound", r.trigger_bound},
         {"a_ok", r.a_ok},
         {"b_ok", r.b_ok},
         {"max_c", to_json(r.max_c)},
         {"max_wedge", to_json(r.max_wedge)},
         {"log_c_bound", real_json(r.log_c_bound)},
         {"log_wedge_bound", real_json(r.log_wedge_bound)},
         {"counterexample", r.counterexample},
         {"diagnostic", r.diagnostic}};
  if (r.flag) j["flag"] = flag_json(*r.flag);
  if (r.obstruction) j["obstruction"] = obstruction_json(*r.obstruction);
  if (r.M) j["M"] = subgroup_json(*r.M);
  return j;
}

void cmd_parabolic_limit(Ctx& c) {
  Mat g = g_param(c.p);
  int n = static_cast<int>(g.size());
  auto ambient = ambient_param(c.p, n);
  auto U = unipotent_param(c.p, n);
  std::vector<long> ks;
  for (const auto& k : c.p.get("ks", json::array({2, 4}))) ks.push_back(z_from(k).get_si());
  int grid = static_cast<int>(c.p.integer("grid", 64));
  Q eta = c.p.q("eta", Q(1, 8));
  auto r = parabolic_limit_check(g, U, ks, grid, eta, ambient, c.k);
  json runs = json::array();
  Csv csv({"k", "triggered", "fraction_outside", "found", "max_c", "max_wedge", "log_c_bound", "log_wedge_bound",
           "a_ok", "b_ok"});
  for (const auto& run : r.runs) {
    runs.push_back(pipeline_json(run));
    csv.row({std::to_string(run.k), b(run.triggered), to_string(run.fraction_outside),
             b(run.obstruction && run.obstruction->found), to_string(run.max_c), to_string(run.max_wedge),
             fmt_double(static_cast<double>(run.log_c_bound)), fmt_double(static_cast<double>(run.log_wedge_bound)),
             b(run.a_ok), b(run.b_ok)});
  }
  c.result["found"] = r.found;
  c.result["insufficient"] = r.insufficient;
  c.result["membership"] = r.membership;
  c.result["diagnostic"] = r.diagnostic;
  c.result["parabolic"] = r.parabolic ? algebra_summary(*r.parabolic) : json(nullptr);
  c.result["runs"] = runs;
  c.out.csv = csv.str();
  c.lines.push_back(r.found ? "parabolic of dim " + std::to_string(r.parabolic->dim()) + " contains Ug"
                            : "no parabolic: " + r.diagnostic);
}

using Handler = std::function<void(Ctx&)>;

const std::vector<std::pair<std::string, Handler>>& handlers() {
  static const std::vector<std::pair<std::string, Handler>> h{
      {"height", cmd_height},
      {"subgroup-analyze", cmd_subgroup_analyze},
      {"diophantine", cmd_diophantine},
      {"catalog-build", cmd_catalog_build},
      {"xeta", cmd_xeta},
      {"reduce", cmd_reduce},
      {"flag", cmd_flag},
      {"obstruct", cmd_obstruct},
      {"remez", cmd_remez},
      {"friendly-check", cmd_friendly_check},
      {"nss-bounds", cmd_nss_bounds},
      {"nss-verify", cmd_nss_verify},
      {"hensel", cmd_hensel},
      {"orbit-scan", cmd_orbit_scan},
      {"trichotomy", cmd_trichotomy},
      {"inheritance", cmd_inheritance},
      {"parabolic-limit", cmd_parabolic_limit},
  };
  return h;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, h] : handlers()) out.push_back(name);
    return out;
  }();
  return names;
}

RunConfig config_from_json(const json& j) {
  require(j.is_object(), "config must be a JSON object");
  RunConfig cfg;
  for (const auto& [key, v] : j.items()) {
    if (key == "command") cfg.command = v.get<std::string>();
    else if (key == "params") cfg.params = v;
    else if (key == "constants") cfg.constants = v;
    else if (key == "seed") cfg.seed = v.get<std::uint64_t>();
    else if (key == "threads") cfg.threads = v.get<int>();
    else if (key == "schema") require(v == 1, "unsupported config schema");
    else fail(Errc::InvalidArgument, "unknown config key: " + key);
  }
  return cfg;
}

RunResult dispatch(const RunConfig& cfg) {
  const Handler* handler = nullptr;
  for (const auto& [name, h] : handlers())
    if (name == cfg.command) handler = &h;
  if (!handler) fail(Errc::InvalidArgument, "unknown command: " + cfg.command);
  RunResult out;
  json result = json::object();
  Params p(cfg.params);
  int threads = cfg.threads > 0 ? cfg.threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  Ctx c{p, constants_from(cfg.constants), cfg.seed, threads, out, result, {}};
  (*handler)(c);
  p.check_unused();
  out.report = {{"tool", "unilin"},
                {"version", UNILIN_VERSION},
                {"command", cfg.command},
                {"seed", cfg.seed},
                {"constants", constants_json(c.k)},
                {"params", cfg.params},
                {"result", result}};
  std::ostringstream os;
  os << cfg.command << ":";
  for (const auto& line : c.lines) os << "\n  " << line;
  os << '\n';
  out.summary = os.str();
  return out;
}

int exit_code_for(Errc e) { return e == Errc::Internal ? 3 : 2; }

json error_json(Errc e, const std::string& message) {
  return {{"error", {{"code", errc_name(e)}, {"message", message}, {"exit", exit_code_for(e)}}},
          {"tool", "unilin"},
          {"version", UNILIN_VERSION}};
}

}  // namespace unilin
