#include "unilin/json_io.hpp"

#include <cmath>

namespace unilin {

json to_json(const Q& x) { return to_string(x); }
json to_json(const Z& x) { return to_string(x); }

json to_json(const Vec& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(to_json(x));
  return out;
}

json to_json(const Mat& m) {
  json out = json::array();
  for (const auto& row : m) out.push_back(to_json(row));
  return out;
}

json to_json(const ExteriorVector& w) {
  json comps = json::array();
  for (const auto& [idx, x] : w.comp) comps.push_back({{"index", idx}, {"value", to_json(x)}});
  return {{"degree", w.degree}, {"ambient", w.ambient}, {"components", comps}};
}

json real_json(long double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return static_cast<double>(x);
}

namespace {

// Decimal literal with optional exponent, exactly.
Q parse_literal(const std::string& s) {
  auto e = s.find_first_of("eE");
  if (e == std::string::npos) return parse_rational(s);
  Q mant = parse_rational(s.substr(0, e));
  long ex = 0;
  try {
    std::size_t used = 0;
    ex = std::stol(s.substr(e + 1), &used);
    require(used == s.size() - e - 1, "bad exponent in " + s);
  } catch (const std::logic_error&) {
    fail(Errc::InvalidArgument, "bad exponent in " + s);
  }
  Z p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(ex)));
  Q r = ex >= 0 ? Q(mant * p) : Q(mant / p);
  r.canonicalize();
  return r;
}

}  // namespace

Q q_from(const json& j) {
  if (j.is_string()) return parse_literal(j.get<std::string>());
  if (j.is_number_integer()) return Q(j.get<long>());
  if (j.is_number_unsigned()) return Q(j.get<unsigned long>());
  if (j.is_number_float()) return parse_literal(j.dump());
  fail(Errc::InvalidArgument, "expected a rational, got " + j.dump());
}

Z z_from(const json& j) {
  Q q = q_from(j);
  require(q.get_den() == 1, "expected an integer, got " + j.dump());
  return q.get_num();
}

Vec vec_from(const json& j) {
  require(j.is_array(), "expected an array, got " + j.dump());
  Vec v;
  for (const auto& x : j) v.push_back(q_from(x));
  return v;
}

Mat mat_from(const json& j) {
  require(j.is_array() && !j.empty(), "expected a non-empty matrix");
  Mat m;
  for (const auto& row : j) m.push_back(vec_from(row));
  for (const auto& row : m) require(row.size() == m.size(), "expected a square matrix");
  return m;
}

std::vector<Q> q_list(const json& j) {
  if (!j.is_array()) return {q_from(j)};
  return vec_from(j);
}

json constants_json(const ConstantsProfile& k) {
  return {{"A", k.A},
          {"D", k.D},
          {"F", k.F},
          {"E", to_json(k.E)},
          {"E1", to_json(k.E1)},
          {"EG", to_json(k.EG)},
          {"kappa", k.kappa},
          {"C1", to_json(k.C1)},
          {"k_brownawell", k.k_brownawell},
          {"kappa_greenberg", k.kappa_greenberg},
          {"C2_inheritance", to_json(k.C2_inheritance)},
          {"kappa_prime", to_json(k.kappa_prime)},
          {"rho", to_json(k.rho)},
          {"aQ", to_json(k.aQ)},
          {"eps_max", to_json(k.eps_max)},
          {"minkowski_A", to_json(k.minkowski_A)},
          {"catalog_margin", to_json(k.catalog_margin)}};
}

ConstantsProfile constants_from(const json& j, ConstantsProfile k) {
  if (j.is_null()) return k;
  require(j.is_object(), "constants must be a JSON object");
  auto integer = [](const json& v) { return z_from(v).get_si(); };
  for (const auto& [key, v] : j.items()) {
    if (key == "A") k.A = integer(v);
    else if (key == "D") k.D = integer(v);
    else if (key == "F") k.F = integer(v);
    else if (key == "E") k.E = q_from(v);
    else if (key == "E1") k.E1 = q_from(v);
    else if (key == "EG") k.EG = q_from(v);
    else if (key == "kappa") k.kappa = integer(v);
    else if (key == "C1") k.C1 = q_from(v);
    else if (key == "k_brownawell") k.k_brownawell = integer(v);
    else if (key == "kappa_greenberg") k.kappa_greenberg = integer(v);
    else if (key == "C2_inheritance") k.C2_inheritance = q_from(v);
    else if (key == "kappa_prime") k.kappa_prime = q_from(v);
    else if (key == "rho") k.rho = q_from(v);
    else if (key == "aQ") k.aQ = q_from(v);
    else if (key == "eps_max") k.eps_max = q_from(v);
    else if (key == "minkowski_A") k.minkowski_A = q_from(v);
    else if (key == "catalog_margin") k.catalog_margin = q_from(v);
    else fail(Errc::InvalidArgument, "unknown constant: " + key);
  }
  require(k.A >= 1 && k.D >= 1 && k.F >= 1, "A, D, F must be positive");
  require(k.E > 0 && k.E1 > 0 && k.EG > 0, "E, E1, EG must be positive");
  require(k.aQ >= 2, "aQ must be at least 2");
  require(k.eps_max > 0 && k.eps_max < 1, "eps_max must lie in (0, 1)");
  require(k.kappa >= 1, "kappa must be at least 1");
  return k;
}

json algebra_json(const MatrixLieAlgebra& a) {
  json out = json::array();
  for (const auto& b : a.basis) out.push_back(to_json(sl_matrix(b, a.n)));
  return out;
}

MatrixLieAlgebra algebra_from(const json& j, int n) {
  require(j.is_array(), "algebra must be a list of matrices");
  std::vector<Vec> basis;
  for (const auto& m : j) {
    Mat x = mat_from(m);
    require(static_cast<int>(x.size()) == n, "algebra element has the wrong size");
    basis.push_back(sl_coords(x));
  }
  return make_algebra(n, basis);
}

namespace {

MatrixLieAlgebra preset_algebra(const std::string& name, int n) {
  std::vector<Vec> basis;
  auto E = [n](int i, int j) { return sl_coords(elementary(n, i, j)); };
  auto H = [n](int i) {
    Mat m = zeros(n, n);
    m[i][i] = 1;
    m[i + 1][i + 1] = -1;
    return sl_coords(m);
  };
  if (name == "sl") return full_sl(n);
  if (name == "upper" || name == "borel") {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) basis.push_back(E(i, j));
  } else if (name == "lower") {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < i; ++j) basis.push_back(E(i, j));
  } else if (name != "diagonal") {
    fail(Errc::InvalidArgument, "unknown subgroup preset: " + name);
  }
  if (name == "borel" || name == "diagonal")
    for (int i = 0; i + 1 < n; ++i) basis.push_back(H(i));
  return make_algebra(n, basis);
}

}  // namespace

SubgroupDescriptor subgroup_from(const json& j, const MatrixLieAlgebra& ambient) {
  require(j.is_object(), "subgroup must be a JSON object");
  std::string name = j.value("name", std::string());
  MatrixLieAlgebra h;
  if (j.contains("preset")) {
    std::string preset = j.at("preset").get<std::string>();
    h = preset_algebra(preset, ambient.n);
    if (name.empty()) name = preset;
  } else {
    require(j.contains("basis"), "subgroup needs a basis or a preset");
    h = algebra_from(j.at("basis"), ambient.n);
  }
  return describe(h, ambient, name);
}

json subgroup_json(const SubgroupDescriptor& h) {
  return {{"name", h.name},
          {"dim", h.dim},
          {"height", to_json(h.height)},
          {"class_h", h.class_h},
          {"normal", h.normal_in_G},
          {"basis", algebra_json(h.lie)}};
}

FriendlyMeasure measure_from(const json& j) {
  if (j.is_string()) return measure_from(json{{"kind", j}});
  require(j.is_object(), "measure must be a JSON object or a kind name");
  std::string kind = j.value("kind", std::string("lebesgue"));
  FriendlyMeasure mu;
  if (kind == "lebesgue") {
    mu = FriendlyMeasure::lebesgue();
  } else if (kind == "cantor") {
    mu = FriendlyMeasure::cantor();
  } else if (kind == "digit") {
    std::vector<Q> w;
    auto digits = j.at("digits").get<std::vector<int>>();
    if (j.contains("weights")) w = q_list(j.at("weights"));
    else w.assign(digits.size(), Q(1, std::max<long>(1, static_cast<long>(digits.size()))));
    mu = FriendlyMeasure::digit(j.at("base").get<int>(), digits, w);
  } else if (kind == "table") {
    std::vector<std::pair<Q, Q>> atoms;
    for (const auto& a : j.at("atoms")) atoms.emplace_back(q_from(a.at(0)), q_from(a.at(1)));
    mu = FriendlyMeasure::table(atoms);
  } else {
    fail(Errc::InvalidArgument, "unknown measure kind: " + kind);
  }
  if (j.contains("dim")) mu.dim = j.at("dim").get<int>();
  mu.validate();
  return mu;
}

json measure_json(const FriendlyMeasure& mu) {
  json out{{"name", mu.name()}, {"dim", mu.dim}, {"alpha", mu.dimension_alpha()}};
  if (mu.kind == FriendlyMeasure::Kind::Digit) {
    out["base"] = mu.base;
    out["digits"] = mu.digits;
    out["weights"] = to_json(mu.weights);
  }
  return out;
}

EpsilonProfile epsilon_from(const json& j, const ConstantsProfile& k, const Q& eta,
                            const std::vector<SubgroupDescriptor>& catalog, const UnipotentDirection& u) {
  std::string kind = "sigma";
  if (j.is_string()) kind = j.get<std::string>();
  else if (j.is_object()) kind = j.value("kind", kind);
  else require(j.is_null(), "epsilon must be a kind name or an object");
  if (kind == "parametric") return parametric_epsilon(k, eta);
  if (kind == "sigma") {
    std::vector<SubgroupDescriptor> normal;
    for (const auto& h : catalog)
      if (h.normal_in_G) normal.push_back(h);
    return sigma_epsilon(k, eta, normal, u);
  }
  if (kind == "table") {
    EpsilonProfile e = parametric_epsilon(k, eta);
    e.kind = EpsilonProfile::Kind::Table;
    for (const auto& row : j.at("table")) e.table.emplace_back(q_from(row.at(0)), q_from(row.at(1)));
    require(!e.table.empty(), "epsilon table is empty");
    for (std::size_t i = 1; i < e.table.size(); ++i)
      require(e.table[i - 1].first < e.table[i].first, "epsilon table must have increasing s");
    return e;
  }
  fail(Errc::InvalidArgument, "unknown epsilon kind: " + kind);
}

}  // namespace unilin
