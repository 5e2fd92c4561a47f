#include "carnotacf/gauge.hpp"

#include <cmath>

#include "carnotacf/quadrature.hpp"

namespace carnotacf {

namespace {

double require_nonzero_norm(const CarnotGroup& g, const Point& p) {
  const double n = g.gauge_norm(p);
  if (n == 0.0) throw SingularityError("gauge geometry evaluated at the origin");
  return n;
}

}  // namespace

std::vector<double> gauge_grad_full(const CarnotGroup& g, const Point& p) {
  const double n = require_nonzero_norm(g, p);
  switch (g.kind()) {
    case CarnotGroup::Kind::euclidean: {
      std::vector<double> out(p);
      for (double& v : out) v /= n;
      return out;
    }
    case CarnotGroup::Kind::heisenberg1: {
      const double rho2 = p[0] * p[0] + p[1] * p[1];
      const double n3 = n * n * n;
      return {p[0] * rho2 / n3, p[1] * rho2 / n3, 0.5 * p[2] / n3};
    }
    case CarnotGroup::Kind::step2:
      throw UnsupportedGroupError("no closed-form gauge gradient for this group");
  }
  throw std::logic_error("unreachable");
}

double gauge_grad_full_len(const CarnotGroup& g, const Point& p) {
  switch (g.kind()) {
    case CarnotGroup::Kind::euclidean:
      require_nonzero_norm(g, p);
      return 1.0;
    case CarnotGroup::Kind::heisenberg1: {
      const double n = require_nonzero_norm(g, p);
      const double rho2 = p[0] * p[0] + p[1] * p[1];
      const double n3 = n * n * n;
      return std::sqrt(rho2 * rho2 * rho2 + 0.25 * p[2] * p[2]) / n3;
    }
    case CarnotGroup::Kind::step2:
      throw UnsupportedGroupError("no closed-form gauge gradient for this group");
  }
  throw std::logic_error("unreachable");
}

double gauge_grad_horiz_sq(const CarnotGroup& g, const Point& p) {
  switch (g.kind()) {
    case CarnotGroup::Kind::euclidean:
      require_nonzero_norm(g, p);
      return 1.0;
    case CarnotGroup::Kind::heisenberg1: {
      const double n = require_nonzero_norm(g, p);
      return (p[0] * p[0] + p[1] * p[1]) / (n * n);
    }
    case CarnotGroup::Kind::step2:
      throw UnsupportedGroupError("no closed-form gauge gradient for this group");
  }
  throw std::logic_error("unreachable");
}

GaugeGeometry::GaugeGeometry(CarnotGroup group, double c_q)
    : group_(std::move(group)), c_q_(c_q) {
  if (!group_.has_gauge())
    throw UnsupportedGroupError("gauge geometry needs euclidean or heisenberg1");
  if (!(c_q_ > 0.0)) throw std::invalid_argument("gamma constant must be positive");
}

GaugeGeometry GaugeGeometry::normalized(const CarnotGroup& group, const Resolution& res) {
  return GaugeGeometry(group, fix_gamma_constant(group, res));
}

double GaugeGeometry::gamma(const Point& p) const {
  const double n = require_nonzero_norm(group_, p);
  return c_q_ * std::pow(n, 2 - group_.homogeneous_dim());
}

double GaugeGeometry::grad_gamma_len(const Point& p) const {
  const double n = require_nonzero_norm(group_, p);
  const int q = group_.homogeneous_dim();
  return c_q_ * (q - 2) * std::pow(n, 1 - q) * gauge_grad_full_len(group_, p);
}

double GaugeGeometry::kernel(const Point& p) const {
  const double n = require_nonzero_norm(group_, p);
  const double full = gauge_grad_full_len(group_, p);
  if (full == 0.0) throw SingularityError("kernel evaluated where the gauge gradient vanishes");
  const int q = group_.homogeneous_dim();
  return c_q_ * (q - 2) * std::pow(n, 1 - q) * gauge_grad_horiz_sq(group_, p) / full;
}

double GaugeGeometry::kernel_reduced(const Point& p) const {
  const double n = require_nonzero_norm(group_, p);
  const double full = gauge_grad_full_len(group_, p);
  if (full == 0.0) throw SingularityError("kernel evaluated where the gauge gradient vanishes");
  const int q = group_.homogeneous_dim();
  return c_q_ * (q - 2) * std::pow(n, 1 - q) / full;
}

double fix_gamma_constant(const CarnotGroup& g, const Resolution& res) {
  GaugeGeometry unit(g, 1.0);
  Integrand kernel_mass{[&](const Point& p) { return unit.kernel(p); }, 0.0};
  const QuadEstimate mass = sphere_integral(g, kernel_mass, 1.0, res);
  if (!(mass.value > 0.0))
    throw std::runtime_error("kernel normalization produced a nonpositive mass");
  return 1.0 / mass.value;
}

}  // namespace carnotacf
