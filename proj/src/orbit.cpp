#include "unilin/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

namespace unilin {

namespace {

Q qpow(const Q& x, long e) {
  Q r = 1;
  Q b = e >= 0 ? x : Q(1) / x;
  for (long i = 0; i < std::labs(e); ++i) r *= b;
  return r;
}

long double log_q(const Q& x) { return log_abs(x); }

long double logaddexp(long double a, long double b) {
  long double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

// Exact x^e <= bound^e style comparisons are done by callers; this compares log values with a tiny slack
// only where an irrational bound is involved.
bool log_le(long double lhs, long double rhs) { return lhs <= rhs; }

const long double kInf = std::numeric_limits<long double>::infinity();

// Γ-reduction in SL_N(Z) only stays inside G when G is all of SL_N.
Reduction reduce_in(const Mat& g, const MatrixLieAlgebra& ambient) {
  if (ambient.dim() == sl_dim(ambient.n)) return reduce_representative(g);
  Q size = group_size(g);
  return Reduction{identity(static_cast<int>(g.size())), g, size, size};
}

}  // namespace

OneParameterUnipotent OneParameterUnipotent::make(const Mat& z) {
  int n = static_cast<int>(z.size());
  require(n >= 2, "generator must be at least 2x2");
  for (const auto& row : z) require(static_cast<int>(row.size()) == n, "generator must be square");
  require(!is_zero(z), "generator must be nonzero");
  require(trace(z) == 0, "generator must have trace zero");
  if (!is_nilpotent_element(z).nilpotent) fail(Errc::NotNilpotent, "generator is not nilpotent");
  OneParameterUnipotent u;
  u.scale = sup_norm(z);
  u.z = unilin::scale(z, 1 / u.scale);
  u.u = exp_nilpotent(u.z);
  return u;
}

bool OneParameterUnipotent::one_parameter_identity() const {
  int d = u.degree();
  Mat zero = zeros(n(), n());
  for (int i = 0; i <= d; ++i)
    for (int j = 0; j <= d; ++j) {
      Mat lhs = mul(u.coeffs[i], u.coeffs[j]);
      Z b;
      mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(i + j), static_cast<unsigned long>(i));
      Mat rhs = i + j <= d ? unilin::scale(u.coeffs[i + j], Q(b)) : zero;
      if (lhs != rhs) return false;
    }
  return true;
}

UnipotentDirection OneParameterUnipotent::direction() const { return make_direction(n(), {sl_coords(z)}); }

Mat exp_nilpotent_matrix(const Mat& x) {
  int n = static_cast<int>(x.size());
  Mat r = identity(n), term = identity(n);
  for (int k = 1; k <= n; ++k) {
    term = scale(mul(term, x), Q(1, k));
    if (is_zero(term)) return r;
    r = add(r, term);
  }
  require(is_zero(mul(term, x)), "matrix is not nilpotent");
  return r;
}

Mat log_unipotent(const Mat& x) {
  int n = static_cast<int>(x.size());
  Mat N = sub(x, identity(n));
  Mat r = zeros(n, n), p = identity(n);
  for (int m = 1; m <= n; ++m) {
    p = mul(p, N);
    if (is_zero(p)) return r;
    r = add(r, scale(p, Q(m % 2 ? 1 : -1, m)));
  }
  require(is_zero(mul(p, N)), "matrix is not unipotent");
  return r;
}

Mat bch(const Mat& x, const Mat& y) { return log_unipotent(mul(exp_nilpotent_matrix(x), exp_nilpotent_matrix(y))); }

ExpandingMap ExpandingMap::make(const MatrixLieAlgebra& u, const Q& aQ) {
  require(aQ >= 2, "expansion base must be at least 2");
  require(u.dim() > 0, "expanding map needs a nonzero algebra");
  auto cs = lower_central_series(u);
  ExpandingMap m;
  m.u = u;
  m.aQ = aQ;
  for (std::size_t i = 0; i < cs.grades.size(); ++i)
    for (const auto& b : cs.grades[i]) {
      m.basis.push_back(b);
      m.grade.push_back(static_cast<int>(i));
    }
  require(m.dim() == u.dim(), "graded basis does not span the algebra");
  return m;
}

Vec ExpandingMap::coords(const Mat& x) const {
  Vec v = sl_coords(x);
  // Normal equations on the graded basis; exact because v lies in the span.
  int d = dim();
  Mat G(d, Vec(d));
  Vec rhs(d);
  for (int i = 0; i < d; ++i) {
    rhs[i] = dot(basis[i], v);
    for (int j = 0; j < d; ++j) G[i][j] = dot(basis[i], basis[j]);
  }
  Vec c = mul(inverse(G), rhs);
  Vec back(v.size(), Q(0));
  for (int i = 0; i < d; ++i) back = add(back, unilin::scale(basis[i], c[i]));
  require(back == v, "element is not in the expanding algebra");
  return c;
}

Mat ExpandingMap::element(const Vec& c) const {
  require(static_cast<int>(c.size()) == dim(), "coordinate length mismatch");
  Vec v(basis[0].size(), Q(0));
  for (int i = 0; i < dim(); ++i) v = add(v, unilin::scale(basis[i], c[i]));
  return sl_matrix(v, u.n);
}

Vec ExpandingMap::scale(long k, const Vec& c) const {
  Vec r = c;
  for (int i = 0; i < dim(); ++i) r[i] *= qpow(aQ, static_cast<long>(grade[i] + 1) * k);
  return r;
}

ContainmentReport containment_check(const ExpandingMap& m, long k, long kappa, int samples, std::uint64_t seed) {
  require(kappa >= 1, "containment margin must be at least 1");
  require(samples >= 1, "need at least one sample");
  ContainmentReport rep;
  rep.k = k;
  rep.kappa = kappa;
  std::mt19937_64 eng(seed);
  std::uniform_int_distribution<long> dist(-64, 64);
  int d = m.dim();
  auto check = [&](const Vec& x, const Vec& y) {
    Mat X = m.element(m.scale(k - kappa, x)), Y = m.element(m.scale(k - 1, y));
    Vec back = m.scale(-k, m.coords(bch(X, Y)));
    Q worst = 0;
    for (const auto& c : back) worst = std::max(worst, Q(abs(c)));
    rep.worst = std::max(rep.worst, to_double(worst));
    if (worst > 1) ++rep.failures;
    ++rep.samples;
  };
  // Corners of the unit cube first, then random points.
  if (2 * d <= 12) {
    for (long mask = 0; mask < (1L << (2 * d)) && rep.samples < samples; ++mask) {
      Vec x(d), y(d);
      for (int i = 0; i < d; ++i) {
        x[i] = (mask >> i) & 1 ? 1 : -1;
        y[i] = (mask >> (d + i)) & 1 ? 1 : -1;
      }
      check(x, y);
    }
  }
  while (rep.samples < samples) {
    Vec x(d), y(d);
    for (int i = 0; i < d; ++i) {
      x[i] = Q(dist(eng), 64);
      y[i] = Q(dist(eng), 64);
      x[i].canonicalize();
      y[i].canonicalize();
    }
    check(x, y);
  }
  return rep;
}

std::vector<Q> midpoint_grid(int grid) {
  require(grid >= 1, "grid size must be positive");
  std::vector<Q> xs;
  xs.reserve(grid);
  for (int j = 0; j < grid; ++j) {
    Q x(2 * j + 1, grid);
    x.canonicalize();
    xs.push_back(x - 1);
  }
  return xs;
}

OrbitScanReport orbit_scan(const Mat& g, const OneParameterUnipotent& U, const ScanParams& p,
                           const ConstantsProfile& konst) {
  require(U.n() == static_cast<int>(g.size()), "unipotent and g live in different dimensions");
  require(p.ambient.n == U.n(), "ambient algebra lives in a different sl_n");
  require(p.eta > 0, "eta must be positive");
  require(p.k >= 0, "expansion k must be non-negative");
  require(det(g) == 1, "g must have determinant 1");
  OrbitScanReport r;
  r.aQ = konst.aQ;
  r.k = p.k;
  r.grid = p.grid;
  r.eta = p.eta;
  r.t = p.t;
  Reduction red = reduce_in(g, p.ambient);
  r.size_raw = red.size_before;
  r.size_reduced = red.size_after;
  r.g_reduced = red.reduced;
  r.vacuous_catalog = p.catalog.empty();
  UnipotentDirection dir = U.direction();
  Q scale_k = qpow(konst.aQ, p.k);
  auto xs = midpoint_grid(p.grid);
  r.rows.resize(xs.size());

  auto work = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t j = lo; j < hi; ++j) {
      ScanRow row;
      row.xi = xs[j];
      row.s = scale_k * xs[j];
      Mat h = reduce_in(mul(U.at(row.s), red.reduced), p.ambient).reduced;
      auto xe = x_eta_test(h, p.eta, p.ambient);
      row.in_x_eta = xe.in;
      if (!xe.in) row.witness_c = xe.witness->c;
      Mat ad = adjoint(h);
      for (std::size_t i = 0; i < p.catalog.size(); ++i) {
        ExteriorVector w = eta_H_from_adjoint(ad, p.catalog[i]);
        CatalogCell cell{c_fun(w, PlaceSystem::archimedean()), max_wedge(dir, w)};
        if (row.diophantine && below_exp(cell.c, p.t) && cell.wedge < p.eps(cell.c)) {
          row.diophantine = false;
          row.violator = static_cast<int>(i);
        }
        row.cells.push_back(std::move(cell));
      }
      row.exceptional = !row.in_x_eta || !row.diophantine;
      r.rows[j] = std::move(row);
    }
  };
  int threads = std::max(1, std::min(p.threads, p.grid));
  if (threads == 1) {
    work(0, xs.size());
  } else {
    std::vector<std::thread> pool;
    std::size_t chunk = (xs.size() + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      std::size_t lo = t * chunk, hi = std::min(xs.size(), lo + chunk);
      if (lo < hi) pool.emplace_back(work, lo, hi);
    }
    for (auto& th : pool) th.join();
  }

  r.max_c.assign(p.catalog.size(), Q(0));
  r.max_wedge.assign(p.catalog.size(), Q(0));
  for (const auto& row : r.rows) {
    r.outside_x_eta += !row.in_x_eta;
    r.non_diophantine += !row.diophantine;
    r.exceptional += row.exceptional;
    for (std::size_t i = 0; i < row.cells.size(); ++i) {
      r.max_c[i] = std::max(r.max_c[i], row.cells[i].c);
      r.max_wedge[i] = std::max(r.max_wedge[i], row.cells[i].wedge);
    }
  }
  r.fraction = Q(r.exceptional, p.grid);
  r.fraction.canonicalize();
  r.fraction_outside = Q(r.outside_x_eta, p.grid);
  r.fraction_outside.canonicalize();
  return r;
}

const char* alternative_name(Alternative a) {
  switch (a) {
    case Alternative::Alt1:
      return "alt1";
    case Alternative::Alt2:
      return "alt2";
    case Alternative::Alt3:
      return "alt3";
    case Alternative::Inconclusive:
      return "inconclusive";
  }
  return "?";
}

namespace {

// E1 η^{1/D} compared exactly through D-th powers.
bool fraction_within(const Q& fraction, const Q& E1, const Q& eta, long D) {
  return qpow(fraction, D) <= qpow(E1, D) * eta;
}

double root_bound(const Q& E, const Q& eta, long D) {
  return static_cast<double>(std::exp(log_q(E) + log_q(eta) / D));
}

}  // namespace

TrichotomyVerdict trichotomy_classify(const OrbitScanReport& r, const ConstantsProfile& k,
                                      const std::vector<SubgroupDescriptor>& catalog, const UnipotentDirection& u) {
  require(r.max_c.size() == catalog.size(), "report and catalog do not match");
  TrichotomyVerdict v;
  v.fraction = r.fraction;
  v.alt1_bound = root_bound(k.E1, r.eta, k.D);
  v.alt1 = fraction_within(r.fraction, k.E1, r.eta, k.D);
  const long A = k.A;
  long double log_g = log_q(r.size_reduced);
  long double log_c_bound = log_q(k.E1) + logaddexp(A * log_g, A * r.t) - A * log_q(r.eta);
  long double log_w_bound = log_c_bound - static_cast<long double>(r.k) / k.D * log_q(k.aQ);
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    if (catalog[i].normal_in_G) continue;
    Alt2Row row;
    row.entry = static_cast<int>(i);
    row.log_c_margin = log_c_bound - log_q(r.max_c[i]);
    row.log_wedge_margin = r.max_wedge[i] == 0 ? kInf : log_w_bound - log_q(r.max_wedge[i]);
    row.c_ok = row.log_c_margin >= 0;
    row.wedge_ok = row.log_wedge_margin >= 0;
    v.alt2.push_back(row);
  }
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    if (!catalog[i].normal_in_G) continue;
    Alt3Row row;
    row.entry = static_cast<int>(i);
    row.wedge = max_wedge(u, catalog[i].v);
    // ε(s)^{1/A} with the parametric shape at s = ht^{1/A} η / E1.
    long double log_s = log_q(Q(catalog[i].height)) / A + log_q(r.eta) - log_q(k.E1);
    long double log_eps = std::min<long double>(log_q(k.eps_max), A * log_q(r.eta) - A * log_s - log_q(k.E1));
    long double log_bound = log_eps / A;
    row.log_margin = row.wedge == 0 ? kInf : log_bound - log_q(row.wedge);
    row.ok = row.log_margin >= 0;
    v.alt3.push_back(row);
  }
  if (v.alt1) {
    v.alt = Alternative::Alt1;
    return v;
  }
  for (const auto& row : v.alt2)
    if (row.c_ok && row.wedge_ok) {
      v.alt = Alternative::Alt2;
      v.entry = row.entry;
      v.name = catalog[row.entry].name;
      return v;
    }
  for (const auto& row : v.alt3)
    if (row.ok) {
      v.alt = Alternative::Alt3;
      v.entry = row.entry;
      v.name = catalog[row.entry].name;
      return v;
    }
  std::ostringstream os;
  os << "exceptional fraction " << to_double(r.fraction) << " above " << v.alt1_bound;
  const Alt2Row* best2 = nullptr;
  for (const auto& row : v.alt2)
    if (!best2 || std::min(row.log_c_margin, row.log_wedge_margin) >
                      std::min(best2->log_c_margin, best2->log_wedge_margin))
      best2 = &row;
  if (best2)
    os << "; nearest tube entry " << catalog[best2->entry].name << " log margins (c "
       << static_cast<double>(best2->log_c_margin) << ", wedge " << static_cast<double>(best2->log_wedge_margin)
       << ")";
  const Alt3Row* best3 = nullptr;
  for (const auto& row : v.alt3)
    if (!best3 || row.log_margin > best3->log_margin) best3 = &row;
  if (best3)
    os << "; nearest normal entry " << catalog[best3->entry].name << " log margin "
       << static_cast<double>(best3->log_margin);
  else
    os << "; no normal entries in the catalog";
  v.nearest_miss = os.str();
  return v;
}

const char* status_name(InheritanceReport::Status s) {
  switch (s) {
    case InheritanceReport::Status::PreconditionFailed:
      return "precondition_failed";
    case InheritanceReport::Status::Vacuous:
      return "vacuous";
    case InheritanceReport::Status::Pass:
      return "pass";
    case InheritanceReport::Status::Fail:
      return "fail";
  }
  return "?";
}

InheritanceReport inheritance_check(const Mat& g, const OneParameterUnipotent& U, const Q& eta, long double t,
                                    long double t_prime, long k, const Q& eps2, const ScanParams& base,
                                    const ConstantsProfile& konst) {
  if (base.catalog.empty())
    fail(Errc::PreconditionUnverifiable, "empty catalog cannot certify the Diophantine hypothesis");
  require(eta > 0 && eps2 > 0, "eta and eps2 must be positive");
  InheritanceReport rep;
  rep.bound = root_bound(konst.E1, eta, konst.D);
  long double need = static_cast<long double>(to_double(konst.C2_inheritance)) *
                     (t - log_q(eta) - log_q(eps2));
  rep.hypothesis_met = t_prime >= need && static_cast<long double>(k) >= need;
  Mat g0 = reduce_in(g, base.ambient).reduced;
  if (!x_eta_test(g0, eta, base.ambient).in) {
    rep.reason = "g is outside X_eta";
    return rep;
  }
  auto dio = diophantine_test(g0, base.eps, t_prime, base.catalog, U.direction());
  if (!dio.diophantine) {
    rep.reason = "g is not (eps, t')-Diophantine: violated by " + base.catalog[dio.violator].name;
    return rep;
  }
  if (qpow(konst.E1, konst.D) * eta >= 1) {
    rep.status = InheritanceReport::Status::Vacuous;
    rep.reason = "E1 eta^(1/D) >= 1 makes the bound vacuous";
    rep.margin = rep.bound - 1;
    return rep;
  }
  ScanParams p = base;
  p.k = k;
  p.eta = eta;
  p.t = t;
  rep.scan = orbit_scan(g0, U, p, konst);
  rep.fraction = rep.scan->fraction;
  rep.margin = rep.bound - to_double(rep.fraction);
  rep.status = fraction_within(rep.fraction, konst.E1, eta, konst.D) ? InheritanceReport::Status::Pass
                                                                      : InheritanceReport::Status::Fail;
  return rep;
}

namespace {

struct PipelineInternal {
  PipelineReport rep;
  Mat gamma;
};

PipelineInternal run_pipeline(const Mat& g, const OneParameterUnipotent& U, long k, int grid, const Q& eta,
                              const MatrixLieAlgebra& ambient, const ConstantsProfile& konst) {
  require(U.n() == static_cast<int>(g.size()) && ambient.n == U.n(), "dimension mismatch");
  require(det(g) == 1, "g must have determinant 1");
  require(eta > 0 && k >= 0, "eta must be positive and k non-negative");
  PipelineInternal out;
  PipelineReport& rep = out.rep;
  rep.k = k;
  Reduction red = reduce_in(g, ambient);
  out.gamma = red.gamma;
  const Mat& g0 = red.reduced;
  Q scale_k = qpow(konst.aQ, k);
  auto xs = midpoint_grid(grid);
  std::vector<Mat> samples;
  long outside = 0;
  for (const auto& x : xs) {
    samples.push_back(mul(U.at(scale_k * x), g0));
    outside += !x_eta_test(samples.back(), eta, ambient).in;
  }
  rep.fraction_outside = Q(outside, grid);
  rep.fraction_outside.canonicalize();
  rep.trigger_bound = root_bound(konst.E, eta, konst.F);
  rep.triggered = qpow(rep.fraction_outside, konst.F) > qpow(konst.E, konst.F) * eta;
  if (!rep.triggered) {
    rep.diagnostic = "fraction outside X_eta is within E eta^(1/F); pipeline not triggered";
    return out;
  }
  LatticeBasis l = adjoint_lattice(g0, ambient);
  MatPoly action = rescale(exp_nilpotent(ad_in(full_sl(U.n()), sl_coords(U.z))), scale_k);
  rep.flag = flag_construct(l, action);
  rep.obstruction = detect_unipotent_obstruction(*rep.flag, l, ambient, konst.rho, konst.kappa_prime);
  if (!rep.obstruction->found) {
    rep.diagnostic = "obstruction not detected: " + rep.obstruction->diagnostic;
    return out;
  }
  rep.M = stabilizer_L_H(*rep.obstruction->W, ambient).M;
  UnipotentDirection dir = U.direction();
  long double log_g = log_q(group_size(g0));
  rep.log_c_bound = log_q(konst.E) + konst.F * log_g + log_q(eta) / konst.F;
  rep.log_wedge_bound = rep.log_c_bound - static_cast<long double>(k) / konst.F * log_q(konst.aQ);
  rep.a_ok = rep.b_ok = true;
  rep.max_c = 0;
  rep.max_wedge = 0;
  for (std::size_t j = 0; j < samples.size(); ++j) {
    ExteriorVector w = eta_H(samples[j], *rep.M);
    Q c = c_fun(w, PlaceSystem::archimedean()), wd = max_wedge(dir, w);
    rep.max_c = std::max(rep.max_c, c);
    rep.max_wedge = std::max(rep.max_wedge, wd);
    bool a = log_le(log_q(c), rep.log_c_bound);
    bool b = wd == 0 || log_le(log_q(wd), rep.log_wedge_bound);
    if ((!a || !b) && rep.counterexample < 0) rep.counterexample = static_cast<int>(j);
    rep.a_ok = rep.a_ok && a;
    rep.b_ok = rep.b_ok && b;
  }
  if (rep.counterexample >= 0) rep.diagnostic = "bound violated at sample " + std::to_string(rep.counterexample);
  return out;
}

}  // namespace

PipelineReport obstruction_pipeline(const Mat& g, const OneParameterUnipotent& U, long k, int grid, const Q& eta,
                                    const MatrixLieAlgebra& ambient, const ConstantsProfile& konst) {
  return run_pipeline(g, U, k, grid, eta, ambient, konst).rep;
}

ParabolicReport parabolic_limit_check(const Mat& g, const OneParameterUnipotent& U, const std::vector<long>& ks,
                                      int grid, const Q& eta, const MatrixLieAlgebra& ambient,
                                      const ConstantsProfile& konst) {
  ParabolicReport rep;
  if (ks.size() < 2) {
    rep.insufficient = true;
    rep.diagnostic = "recurrence needs at least two expansion values";
    return rep;
  }
  require(radical_and_unipotent_radical(ambient).radical.dim() == 0, "ambient algebra must be semisimple");
  std::vector<long> sorted = ks;
  std::sort(sorted.begin(), sorted.end());
  Mat gamma;
  for (long k : sorted) {
    auto run = run_pipeline(g, U, k, grid, eta, ambient, konst);
    gamma = run.gamma;
    rep.runs.push_back(std::move(run.rep));
  }
  const auto& first = rep.runs.front();
  for (std::size_t i = 0; i < rep.runs.size(); ++i) {
    const auto& r = rep.runs[i];
    if (!r.triggered || !r.obstruction || !r.obstruction->found) {
      rep.diagnostic = "no obstruction at k = " + std::to_string(r.k);
      return rep;
    }
    if (!(canonical_sign(r.obstruction->W->v) == canonical_sign(first.obstruction->W->v))) {
      rep.diagnostic = "the unipotent subgroup W changes along the k sequence";
      return rep;
    }
    if (i > 0) {
      const auto& prev = rep.runs[i - 1];
      if (r.max_wedge > prev.max_wedge || r.log_wedge_bound >= prev.log_wedge_bound) {
        rep.diagnostic = "wedge bounds do not decay in k";
        return rep;
      }
    }
  }
  // W was found for the reduced representative g γ; move it back to g.
  std::vector<Vec> w;
  Mat gi = inverse(gamma);
  for (const auto& b : first.obstruction->W->lie.basis) w.push_back(sl_coords(mul(gamma, mul(sl_matrix(b, U.n()), gi))));
  auto trace = parabolic_from_nilpotent(ambient, w);
  rep.parabolic = trace.parabolic;
  rep.membership = true;
  auto xs = midpoint_grid(grid);
  xs.push_back(Q(0));
  for (const auto& x : xs) {
    Mat ad = adjoint(mul(U.at(x), g));
    for (const auto& b : rep.parabolic->basis)
      if (!in_span(rep.parabolic->basis, mul(ad, b))) {
        rep.membership = false;
        break;
      }
    if (!rep.membership) break;
  }
  rep.found = rep.membership;
  if (!rep.membership) rep.diagnostic = "Ug is not contained in the parabolic";
  return rep;
}

}  // namespace unilin
