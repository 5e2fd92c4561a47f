#include "carnotacf/group.hpp"

#include <nlohmann/json.hpp>

#include <cmath>

namespace carnotacf {

Polynomial VectorFieldSpec::apply(const Polynomial& u) const {
  Polynomial out = u.derivative(index_);
  for (const auto& [k, p] : coeffs_) out = out + p * u.derivative(k);
  return out;
}

void CarnotGroup::finish_setup() {
  q_ = 0;
  for (std::size_t i = 0; i < layer_dims_.size(); ++i)
    q_ += static_cast<int>(i + 1) * layer_dims_[i];
  if (names_.empty()) {
    for (int i = 0; i < dim_; ++i) names_.push_back("x" + std::to_string(i + 1));
  }
}

CarnotGroup CarnotGroup::euclidean(int n) {
  if (n < 3) throw std::invalid_argument("euclidean group needs dimension >= 3");
  CarnotGroup g;
  g.kind_ = Kind::euclidean;
  g.dim_ = n;
  g.step_ = 1;
  g.layer_dims_ = {n};
  g.weights_.assign(n, 1);
  for (int j = 0; j < n; ++j) g.fields_.emplace_back(j, std::map<int, Polynomial>{});
  if (n == 3) g.names_ = {"x", "y", "z"};
  g.finish_setup();
  return g;
}

CarnotGroup CarnotGroup::heisenberg1() {
  CarnotGroup g;
  g.kind_ = Kind::heisenberg1;
  g.dim_ = 3;
  g.step_ = 2;
  g.layer_dims_ = {2, 1};
  g.weights_ = {1, 1, 2};
  g.names_ = {"x", "y", "t"};
  // X = d_x + 2y d_t, Y = d_y - 2x d_t.
  std::map<int, Polynomial> cx, cy;
  cx.emplace(2, Polynomial::variable(3, g.weights_, 1) * Rational(2));
  cy.emplace(2, Polynomial::variable(3, g.weights_, 0) * Rational(-2));
  g.fields_.emplace_back(0, std::move(cx));
  g.fields_.emplace_back(1, std::move(cy));
  // (x,y,t) o (x',y',t') = (x+x', y+y', t+t' + 2(y x' - x y')), the unique
  // step-2 law in exponential coordinates under which X and Y above are
  // left-invariant.
  g.law_.push_back({2, 1, 0, Rational(2)});
  g.law_.push_back({2, 0, 1, Rational(-2)});
  g.finish_setup();
  return g;
}

Point CarnotGroup::dilate(double lambda, const Point& p) const {
  if (!(lambda > 0.0)) throw std::invalid_argument("dilation factor must be positive");
  if (static_cast<int>(p.size()) != dim_) throw std::invalid_argument("point dimension mismatch");
  Point out(dim_);
  for (int i = 0; i < dim_; ++i) out[i] = std::pow(lambda, weights_[i]) * p[i];
  return out;
}

Point CarnotGroup::compose(const Point& p, const Point& q) const {
  if (static_cast<int>(p.size()) != dim_ || static_cast<int>(q.size()) != dim_)
    throw std::invalid_argument("point dimension mismatch");
  Point out(dim_);
  for (int i = 0; i < dim_; ++i) out[i] = p[i] + q[i];
  for (const auto& t : law_) out[t.coord] += t.c.convert_to<double>() * p[t.j] * q[t.k];
  return out;
}

Point CarnotGroup::inverse(const Point& p) const {
  Point out(p);
  for (double& v : out) v = -v;
  return out;
}

std::vector<Rational> CarnotGroup::compose_exact(const std::vector<Rational>& p,
                                                 const std::vector<Rational>& q) const {
  if (static_cast<int>(p.size()) != dim_ || static_cast<int>(q.size()) != dim_)
    throw std::invalid_argument("point dimension mismatch");
  std::vector<Rational> out(dim_);
  for (int i = 0; i < dim_; ++i) out[i] = p[i] + q[i];
  for (const auto& t : law_) out[t.coord] += t.c * p[t.j] * q[t.k];
  return out;
}

std::vector<Polynomial> CarnotGroup::compose_symbolic(const std::vector<Polynomial>& p,
                                                      const std::vector<Polynomial>& q) const {
  if (static_cast<int>(p.size()) != dim_ || static_cast<int>(q.size()) != dim_)
    throw std::invalid_argument("coordinate vector dimension mismatch");
  std::vector<Polynomial> out;
  out.reserve(dim_);
  for (int i = 0; i < dim_; ++i) out.push_back(p[i] + q[i]);
  for (const auto& t : law_) out[t.coord] = out[t.coord] + p[t.j] * q[t.k] * t.c;
  return out;
}

double CarnotGroup::gauge_norm(const Point& p) const {
  if (static_cast<int>(p.size()) != dim_) throw std::invalid_argument("point dimension mismatch");
  switch (kind_) {
    case Kind::euclidean: {
      double s = 0.0;
      for (double v : p) s += v * v;
      return std::sqrt(s);
    }
    case Kind::heisenberg1: {
      const double rho2 = p[0] * p[0] + p[1] * p[1];
      return std::pow(rho2 * rho2 + p[2] * p[2], 0.25);
    }
    case Kind::step2:
      throw UnsupportedGroupError("no closed-form gauge norm for this group");
  }
  return 0.0;
}

namespace {

std::vector<Polynomial> block_vars(int dim, const std::vector<int>& weights, int nblocks,
                                   int block) {
  // Coordinate polynomials of one point-block inside a (nblocks*dim)-variable
  // ambient space; the group weights repeat per block.
  std::vector<int> w;
  for (int b = 0; b < nblocks; ++b) w.insert(w.end(), weights.begin(), weights.end());
  std::vector<Polynomial> out;
  for (int i = 0; i < dim; ++i)
    out.push_back(Polynomial::variable(nblocks * dim, w, block * dim + i));
  return out;
}

}  // namespace

void verify_group_axioms(const CarnotGroup& g) {
  const int n = g.dim();

  // Associativity and inverse-by-negation over polynomial coordinates.
  {
    auto p = block_vars(n, g.weights(), 3, 0);
    auto q = block_vars(n, g.weights(), 3, 1);
    auto s = block_vars(n, g.weights(), 3, 2);
    auto lhs = g.compose_symbolic(g.compose_symbolic(p, q), s);
    auto rhs = g.compose_symbolic(p, g.compose_symbolic(q, s));
    for (int i = 0; i < n; ++i)
      if (lhs[i] != rhs[i]) throw std::invalid_argument("group law is not associative");
    std::vector<Polynomial> minus_p;
    for (int i = 0; i < n; ++i) minus_p.push_back(-p[i]);
    auto id = g.compose_symbolic(p, minus_p);
    for (int i = 0; i < n; ++i)
      if (!id[i].is_zero())
        throw std::invalid_argument("negation is not the group inverse under the stored law");
  }

  // Field coefficients must be homogeneous of degree d_k - 1.
  for (const auto& f : g.horizontal_fields()) {
    if (g.weights()[f.index()] != 1)
      throw std::invalid_argument("horizontal field attached to a non-horizontal coordinate");
    for (const auto& [k, poly] : f.coeffs()) {
      const auto deg = poly.g_degree();
      if (!deg || *deg != g.weights()[k] - 1)
        throw std::invalid_argument("field coefficient has the wrong homogeneity");
    }
  }

  // Left-invariance: for T = p o x it must hold, coordinate by coordinate,
  // sum_k p_{j,k}(x) dT_l/dx_k == p_{j,l}(T) as polynomials in (p, x).
  {
    auto p = block_vars(n, g.weights(), 2, 0);
    auto x = block_vars(n, g.weights(), 2, 1);
    auto T = g.compose_symbolic(p, x);
    for (const auto& f : g.horizontal_fields()) {
      for (int l = 0; l < n; ++l) {
        Polynomial lhs = T[l].derivative(n + f.index());
        for (const auto& [k, poly] : f.coeffs()) {
          std::vector<Polynomial> xargs;
          for (int i = 0; i < n; ++i) xargs.push_back(x[i]);
          lhs = lhs + poly.substitute(xargs) * T[l].derivative(n + k);
        }
        Polynomial rhs = (l == f.index()) ? Polynomial::constant(2 * n, T[l].weights(), 1)
                                          : Polynomial::zero(2 * n, T[l].weights());
        auto it = f.coeffs().find(l);
        if (it != f.coeffs().end()) rhs = rhs + it->second.substitute(T);
        if (lhs != rhs)
          throw std::invalid_argument("horizontal field is not left-invariant under the law");
      }
    }
  }
}

namespace {

Polynomial poly_from_json(const nlohmann::json& j, int nvars, const std::vector<int>& weights) {
  return polynomial_from_json_text(j.dump(), nvars, weights);
}

}  // namespace

CarnotGroup CarnotGroup::from_descriptor_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (!j.is_object() || !j.contains("kind"))
    throw std::invalid_argument("group descriptor needs a \"kind\"");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "euclidean") {
    for (const auto& [key, val] : j.items())
      if (key != "kind" && key != "dim")
        throw std::invalid_argument("unknown key in group descriptor: " + key);
    return euclidean(j.at("dim").get<int>());
  }
  if (kind == "heisenberg1") {
    for (const auto& [key, val] : j.items())
      if (key != "kind") throw std::invalid_argument("unknown key in group descriptor: " + key);
    return heisenberg1();
  }
  if (kind == "step2") {
    for (const auto& [key, val] : j.items())
      if (key != "kind" && key != "layer_dims" && key != "fields" && key != "law")
        throw std::invalid_argument("unknown key in group descriptor: " + key);
    CarnotGroup g;
    g.kind_ = Kind::step2;
    g.step_ = 2;
    const auto layers = j.at("layer_dims");
    if (!layers.is_array() || layers.size() != 2)
      throw std::invalid_argument("step2 descriptor needs layer_dims = [m1, m2]");
    g.layer_dims_ = {layers[0].get<int>(), layers[1].get<int>()};
    if (g.layer_dims_[0] < 2 || g.layer_dims_[1] < 1)
      throw std::invalid_argument("step2 layer dimensions out of range");
    g.dim_ = g.layer_dims_[0] + g.layer_dims_[1];
    g.weights_.assign(g.dim_, 1);
    for (int i = g.layer_dims_[0]; i < g.dim_; ++i) g.weights_[i] = 2;
    for (const auto& lt : j.at("law")) {
      GroupLawTerm t;
      t.coord = lt.at("coord").get<int>();
      t.j = lt.at("j").get<int>();
      t.k = lt.at("k").get<int>();
      t.c = Rational(lt.at("c").get<std::string>());
      if (t.coord < g.layer_dims_[0] || t.coord >= g.dim_ || t.j < 0 || t.j >= g.layer_dims_[0] ||
          t.k < 0 || t.k >= g.layer_dims_[0])
        throw std::invalid_argument("law term indices out of range for a step-2 group");
      g.law_.push_back(std::move(t));
    }
    const auto& fields = j.at("fields");
    if (!fields.is_array() || static_cast<int>(fields.size()) != g.layer_dims_[0])
      throw std::invalid_argument("step2 descriptor needs one field per horizontal coordinate");
    for (int jf = 0; jf < g.layer_dims_[0]; ++jf) {
      std::map<int, Polynomial> coeffs;
      for (const auto& entry : fields[jf]) {
        const int k = entry.at("coord").get<int>();
        coeffs.emplace(k, poly_from_json(entry.at("poly"), g.dim_, g.weights_));
      }
      g.fields_.emplace_back(jf, std::move(coeffs));
    }
    g.finish_setup();
    verify_group_axioms(g);
    return g;
  }
  throw std::invalid_argument("unknown group kind: " + kind);
}

std::string CarnotGroup::descriptor_json() const {
  nlohmann::json j;
  switch (kind_) {
    case Kind::euclidean:
      j["kind"] = "euclidean";
      j["dim"] = dim_;
      break;
    case Kind::heisenberg1:
      j["kind"] = "heisenberg1";
      break;
    case Kind::step2: {
      j["kind"] = "step2";
      j["layer_dims"] = layer_dims_;
      nlohmann::json law = nlohmann::json::array();
      for (const auto& t : law_)
        law.push_back({{"coord", t.coord}, {"j", t.j}, {"k", t.k}, {"c", t.c.str()}});
      j["law"] = law;
      nlohmann::json fields = nlohmann::json::array();
      for (const auto& f : fields_) {
        nlohmann::json fj = nlohmann::json::array();
        for (const auto& [k, poly] : f.coeffs())
          fj.push_back({{"coord", k},
                        {"poly", nlohmann::json::parse(polynomial_to_json_text(poly))}});
        fields.push_back(fj);
      }
      j["fields"] = fields;
      break;
    }
  }
  return j.dump();
}

}  // namespace carnotacf
