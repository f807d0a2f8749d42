#include "unilin/subgroups.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <thread>

namespace unilin {

SubgroupDescriptor describe(const MatrixLieAlgebra& h, const MatrixLieAlgebra& ambient, const std::string& name) {
  require(h.n == ambient.n, "subgroup and ambient algebra live in different sl_n");
  require(subspace_of(h.basis, ambient.basis), "subgroup algebra is not contained in the ambient algebra");
  SubgroupDescriptor d;
  d.name = name;
  auto pv = primitive_integral_vector(h.basis, sl_dim(h.n));
  d.lie = MatrixLieAlgebra{h.n, pv.zbasis};
  d.v = pv.v;
  d.dim = h.dim();
  d.height = pv.height;
  d.class_h = h.dim() == 0 || is_class_h(h);
  d.normal_in_G = h.dim() == 0 || is_ideal(ambient, h);
  return d;
}

SubgroupDescriptor conjugate(const SubgroupDescriptor& h, const Mat& gamma, const std::string& name) {
  Mat ad = adjoint(gamma);
  SubgroupDescriptor d = h;
  d.name = name.empty() ? h.name : name;
  for (auto& b : d.lie.basis) b = mul(ad, b);
  ExteriorVector w = wedge(d.lie.basis, sl_dim(h.lie.n));
  ExteriorVector c = canonical_sign(w);
  if (!(c == w) && !d.lie.basis.empty()) d.lie.basis[0] = scale(d.lie.basis[0], Q(-1));
  require(is_integral(c) && primitive_integer(c) == c, "conjugating element is not in SL_N(Z)");
  d.v = c;
  d.height = d.dim == 0 ? Z(1) : sup_norm(c).get_num();
  return d;
}

UnipotentDirection make_direction(int n, const std::vector<Vec>& basis) {
  require(!basis.empty(), "unipotent direction needs at least one element");
  UnipotentDirection u;
  u.n = n;
  for (const auto& z : basis) {
    require(static_cast<int>(z.size()) == sl_dim(n), "direction element has wrong length");
    require(!is_zero(z), "direction element is zero");
    if (!is_nilpotent_element(sl_matrix(z, n)).nilpotent)
      fail(Errc::NotNilpotent, "direction element is not nilpotent");
    u.basis.push_back(z);
    u.places.push_back(kInfinity);
  }
  return u;
}

ExteriorVector eta_H_from_adjoint(const Mat& ad_g, const SubgroupDescriptor& h) {
  int d = static_cast<int>(ad_g.size());
  if (h.dim == 0) return ext_unit(d);
  std::vector<Vec> img;
  img.reserve(h.lie.basis.size());
  for (const auto& b : h.lie.basis) img.push_back(mul(ad_g, b));
  return wedge(img, d);
}

ExteriorVector eta_H(const Mat& g, const SubgroupDescriptor& h) {
  require(static_cast<int>(g.size()) == h.lie.n, "group element has wrong size");
  return eta_H_from_adjoint(adjoint(g), h);
}

Q max_wedge(const UnipotentDirection& u, const ExteriorVector& w) {
  Q best = 0;
  for (std::size_t i = 0; i < u.basis.size(); ++i)
    best = std::max(best, place_norm(wedge(u.basis[i], w), u.places[i]));
  return best;
}

Stabilizer stabilizer_L_H(const SubgroupDescriptor& h, const MatrixLieAlgebra& ambient) {
  require(h.lie.n == ambient.n, "subgroup and ambient algebra live in different sl_n");
  int n = ambient.n, d = sl_dim(n);
  Stabilizer out;
  if (h.dim == 0) {
    out.lie_L = ambient;
  } else {
    // Derivative of the exterior action: sum over i of b_1 ∧ ... ∧ [z, b_i] ∧ ... ∧ b_k.
    std::vector<Vec> images;
    for (const auto& z : ambient.basis) {
      ExteriorVector acc{h.dim, d, {}};
      for (int i = 0; i < h.dim; ++i) {
        auto bs = h.lie.basis;
        bs[i] = bracket(z, bs[i], n);
        acc = acc.plus(wedge(bs, d));
      }
      images.push_back(ext_coords(acc));
    }
    // Solve sum_j x_j images_j = 0.
    Mat sys = transpose(images);
    auto ker = nullspace(sys, static_cast<int>(ambient.basis.size()));
    std::vector<Vec> basis;
    for (const auto& x : ker) {
      Vec z(d);
      for (std::size_t j = 0; j < x.size(); ++j) z = add(z, scale(ambient.basis[j], x[j]));
      basis.push_back(z);
    }
    out.lie_L = basis.empty() ? zero_algebra(n) : make_algebra(n, span_basis(basis));
  }
  MatrixLieAlgebra m = out.lie_L.dim() == 0 ? zero_algebra(n) : class_h_closure(out.lie_L);
  out.M = describe(m, ambient, h.name.empty() ? "M_H" : "M_" + h.name);
  return out;
}

namespace {

Q qpow(const Q& x, long e) {
  Q r = 1;
  Q b = e >= 0 ? x : Q(1) / x;
  for (long i = 0; i < std::labs(e); ++i) r *= b;
  return r;
}

}  // namespace

Q EpsilonProfile::operator()(const Q& s) const {
  require(s > 0, "epsilon evaluated at a non-positive argument");
  switch (kind) {
    case Kind::Parametric:
      return std::min(cap, Q(qpow(eta, A) * qpow(s, -A) / E1));
    case Kind::Table: {
      require(!table.empty(), "empty epsilon table");
      Q out = table.front().second;
      for (const auto& [si, ei] : table)
        if (si <= s) out = ei;
      return out;
    }
    case Kind::Sigma: {
      Q x = qpow(E1, A) * qpow(eta, -A) * qpow(s, A);
      Q sig = sigma_T(normal, x, u);
      return std::min(cap, qpow(Q(eta / s * sig / (2 * E1)), A));
    }
  }
  fail(Errc::Internal, "unknown epsilon kind");
}

bool EpsilonProfile::monotone() const {
  if (kind != Kind::Table) return cap > 0 && cap < 1 && eta > 0 && E1 > 0;
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (table[i].second <= 0 || table[i].second >= 1) return false;
    if (i > 0 && (table[i].first <= table[i - 1].first || table[i].second > table[i - 1].second)) return false;
  }
  return !table.empty();
}

EpsilonProfile parametric_epsilon(const ConstantsProfile& k, const Q& eta) {
  require(eta > 0, "eta must be positive");
  EpsilonProfile e;
  e.kind = EpsilonProfile::Kind::Parametric;
  e.A = k.A;
  e.E1 = k.E1;
  e.eta = eta;
  e.cap = k.eps_max;
  return e;
}

EpsilonProfile sigma_epsilon(const ConstantsProfile& k, const Q& eta, std::vector<SubgroupDescriptor> normal,
                             UnipotentDirection u) {
  EpsilonProfile e = parametric_epsilon(k, eta);
  e.kind = EpsilonProfile::Kind::Sigma;
  e.normal = std::move(normal);
  e.u = std::move(u);
  return e;
}

bool below_exp(const Q& c, long double t) {
  require(c > 0, "c must be positive");
  return log_abs(c) < t;
}

DiophantineVerdict diophantine_test_adjoint(const Mat& ad_g, const EpsilonProfile& eps, long double t,
                                            const std::vector<SubgroupDescriptor>& catalog,
                                            const UnipotentDirection& u) {
  DiophantineVerdict v;
  if (catalog.empty()) {
    v.vacuous = true;
    return v;
  }
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    DiophantineRow row;
    ExteriorVector w = eta_H_from_adjoint(ad_g, catalog[i]);
    row.c = c_fun(w, PlaceSystem::archimedean());
    row.considered = below_exp(row.c, t);
    if (row.considered) {
      row.wedge = max_wedge(u, w);
      row.violated = row.wedge < eps(row.c);
    }
    v.rows.push_back(row);
    if (row.violated) {
      v.diophantine = false;
      v.violator = static_cast<int>(i);
      break;
    }
  }
  return v;
}

DiophantineVerdict diophantine_test(const Mat& g, const EpsilonProfile& eps, long double t,
                                    const std::vector<SubgroupDescriptor>& catalog, const UnipotentDirection& u) {
  return diophantine_test_adjoint(adjoint(g), eps, t, catalog, u);
}

bool tube_membership(const Mat& g, const SubgroupDescriptor& h, const Q& bound, const UnipotentDirection& u) {
  ExteriorVector w = eta_H(g, h);
  for (const auto& z : u.basis)
    if (!wedge(z, w).is_zero()) return false;
  return c_fun(w, PlaceSystem::archimedean()) <= bound;
}

namespace {

struct Node {
  ExteriorVector w;  // η_H(γ), uncanonicalized
  Mat gamma;
  int len = 0;
  Q height;
};

struct Expansion {
  ExteriorVector w;
  ExteriorVector key;
  Mat gamma;
  Q height;
};

}  // namespace

CatalogResult gamma_orbit_catalog(const SubgroupDescriptor& h, const std::vector<Mat>& generators,
                                  const Q& height_bound, int word_bound, const Q& margin, int threads) {
  require(word_bound >= 0, "word bound must be non-negative");
  require(height_bound > 0 && margin >= 1, "height bound must be positive and margin at least 1");
  int n = h.lie.n;
  std::vector<Mat> gens, ads;
  for (const auto& s : generators) {
    require(static_cast<int>(s.size()) == n, "generator has wrong size");
    for (const auto& row : s) require(is_integral(row), "generators must be integral");
    require(det(s) == 1, "generators must have determinant one");
    gens.push_back(s);
    gens.push_back(inverse(s));
  }
  for (const auto& s : gens) ads.push_back(adjoint(s));
  Q prune = height_bound * margin;

  CatalogResult out;
  std::map<decltype(ExteriorVector::comp), std::size_t> seen;
  std::vector<Node> nodes{{h.v, identity(n), 0, Q(h.height)}};
  seen[h.v.comp] = 0;
  std::vector<std::size_t> frontier{0};
  threads = std::max(1, threads);

  for (int len = 0; !frontier.empty(); ++len) {
    if (len == word_bound) {
      // Binding if some unexplored neighbour would still pass the pruning test.
      for (std::size_t id : frontier) {
        for (std::size_t k = 0; k < gens.size() && !out.word_bound_binding; ++k) {
          ExteriorVector key = canonical_sign(ext_apply(ads[k], nodes[id].w));
          if (sup_norm(key) <= prune && !seen.count(key.comp)) out.word_bound_binding = true;
        }
      }
      break;
    }
    std::vector<std::vector<Expansion>> exp(frontier.size());
    auto work = [&](std::size_t lo, std::size_t step) {
      for (std::size_t i = lo; i < frontier.size(); i += step) {
        const Node& nd = nodes[frontier[i]];
        for (std::size_t k = 0; k < gens.size(); ++k) {
          ExteriorVector w = ext_apply(ads[k], nd.w);
          ExteriorVector key = canonical_sign(w);
          Q ht = sup_norm(key);
          if (ht > prune) continue;
          exp[i].push_back({std::move(w), std::move(key), mul(gens[k], nd.gamma), ht});
        }
      }
    };
    if (threads == 1 || frontier.size() < 64) {
      work(0, 1);
    } else {
      std::vector<std::thread> pool;
      for (int t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
      for (auto& th : pool) th.join();
    }
    std::vector<std::size_t> next;
    for (auto& list : exp) {
      for (auto& e : list) {
        ++out.nodes;
        if (seen.count(e.key.comp)) continue;
        seen[e.key.comp] = nodes.size();
        next.push_back(nodes.size());
        nodes.push_back({std::move(e.w), std::move(e.gamma), len + 1, e.height});
      }
    }
    frontier = std::move(next);
  }

  std::vector<std::pair<std::pair<Q, decltype(ExteriorVector::comp)>, std::size_t>> order;
  for (const auto& [key, id] : seen)
    if (nodes[id].height <= height_bound) order.push_back({{nodes[id].height, key}, id});
  std::sort(order.begin(), order.end());
  for (std::size_t i = 0; i < order.size(); ++i) {
    const Node& nd = nodes[order[i].second];
    std::string name = (h.name.empty() ? std::string("H") : h.name) + "#" + std::to_string(i);
    out.entries.push_back(conjugate(h, nd.gamma, name));
    out.words.push_back(nd.gamma);
    out.word_length.push_back(nd.len);
  }
  return out;
}

Q sigma_T(const std::vector<SubgroupDescriptor>& normal_catalog, const Q& T, const UnipotentDirection& u) {
  Q best = 1;
  for (const auto& h : normal_catalog)
    if (Q(h.height) <= T) best = std::min(best, max_wedge(u, h.v));
  return best;
}

LojResult loj_intersection(const Mat& g, const SubgroupDescriptor& h1, const SubgroupDescriptor& h2,
                           const MatrixLieAlgebra& ambient, const UnipotentDirection& u, const Q& r,
                           const Q& eps_bound) {
  require(h1.lie.n == h2.lie.n, "subgroups live in different sl_n");
  auto inter = intersect(h1.lie.basis, h2.lie.basis);
  if (inter.empty()) fail(Errc::TrivialIntersection, "Lie algebras intersect trivially");
  auto closure = class_h_closure(make_algebra(h1.lie.n, inter));
  if (closure.dim() == 0) fail(Errc::TrivialIntersection, "class-H closure of the intersection is trivial");
  LojResult out;
  out.h12 = describe(closure, ambient, h1.name + "&" + h2.name);
  Mat ad = adjoint(g);
  ExteriorVector w = eta_H_from_adjoint(ad, out.h12);
  out.c = c_fun(w, PlaceSystem::archimedean());
  out.wedge = max_wedge(u, w);
  bool ok = true;
  for (const auto* h : {&h1, &h2}) {
    ExteriorVector wi = eta_H_from_adjoint(ad, *h);
    ok = ok && c_fun(wi, PlaceSystem::archimedean()) <= r && max_wedge(u, wi) <= eps_bound;
  }
  out.precondition_met = ok;
  return out;
}

}  // namespace unilin
