#include "carnotacf/diff_ops.hpp"

namespace carnotacf {

Polynomial apply_field(const VectorFieldSpec& field, const Polynomial& u) {
  return field.apply(u);
}

HorizontalSection horizontal_gradient(const CarnotGroup& g, const Polynomial& u) {
  HorizontalSection s;
  s.comps.reserve(g.horizontal_fields().size());
  for (const auto& f : g.horizontal_fields()) s.comps.push_back(f.apply(u));
  return s;
}

Polynomial sub_laplacian(const CarnotGroup& g, const Polynomial& u) {
  Polynomial out = g.zero_poly();
  for (const auto& f : g.horizontal_fields()) out = out + f.apply(f.apply(u));
  return out;
}

Polynomial grad_norm_sq(const CarnotGroup& g, const Polynomial& u) {
  Polynomial out = g.zero_poly();
  for (const auto& f : g.horizontal_fields()) {
    Polynomial d = f.apply(u);
    out = out + d * d;
  }
  return out;
}

Polynomial scale_function(const CarnotGroup& g, const Polynomial& u, const Rational& r) {
  if (r <= 0) throw std::invalid_argument("scale factor must be positive");
  (void)g;
  return u.dilation_scaled(r) * (Rational(1) / r);
}

Polynomial translate(const CarnotGroup& g, const Polynomial& u, const std::vector<Rational>& p) {
  if (static_cast<int>(p.size()) != g.dim())
    throw std::invalid_argument("base point dimension mismatch");
  std::vector<Polynomial> base;
  base.reserve(g.dim());
  for (const auto& c : p) base.push_back(g.const_poly(c));
  std::vector<Polynomial> vars;
  vars.reserve(g.dim());
  for (int i = 0; i < g.dim(); ++i) vars.push_back(g.var_poly(i));
  return u.substitute(g.compose_symbolic(base, vars));
}

bool check_odd_symmetry(const Polynomial& u) {
  if (u.nvars() != 3) throw std::invalid_argument("odd-symmetry check needs a three-variable ambient");
  return (u.sign_flipped({0, 1}) + u).is_zero();
}

namespace {

Point flow_step(const CarnotGroup& g, const Point& p, int coord, double h) {
  Point e(g.dim(), 0.0);
  e[coord] = h;
  return g.compose(p, e);
}

}  // namespace

double fd_field_derivative(const CarnotGroup& g, const std::function<double(const Point&)>& f,
                           int field, const Point& p, double h) {
  const int coord = g.horizontal_fields().at(field).index();
  return (f(flow_step(g, p, coord, h)) - f(flow_step(g, p, coord, -h))) / (2.0 * h);
}

double fd_sub_laplacian(const CarnotGroup& g, const std::function<double(const Point&)>& f,
                        const Point& p, double h) {
  const double center = f(p);
  double sum = 0.0;
  for (const auto& fs : g.horizontal_fields()) {
    const int coord = fs.index();
    sum += (f(flow_step(g, p, coord, h)) - 2.0 * center + f(flow_step(g, p, coord, -h))) / (h * h);
  }
  return sum;
}

}  // namespace carnotacf
