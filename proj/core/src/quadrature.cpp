#include "carnotacf/quadrature.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <random>

#include "carnotacf/gauge.hpp"
#include "carnotacf/rootfind.hpp"

namespace carnotacf {

namespace {

constexpr double kPi = std::numbers::pi;

/// Neumaier-compensated accumulator; every quadrature sum in the library
/// runs through one of these in a fixed loop order.
struct Accum {
  double s = 0.0, c = 0.0;
  void add(double x) {
    const double t = s + x;
    if (std::abs(s) >= std::abs(x))
      c += (s - t) + x;
    else
      c += (x - t) + s;
    s = t;
  }
  double total() const { return s + c; }
};

struct GaussRule {
  std::vector<double> x, w;  // on (-1, 1), ascending
};

const GaussRule& gauss_rule(int n) {
  static std::map<int, GaussRule> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  if (n < 1) throw std::invalid_argument("gauss rule needs at least one node");

  GaussRule rule;
  rule.x.resize(n);
  rule.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it2 = 0; it2 < 100; ++it2) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.x[i] = -x;
    rule.x[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.w[i] = w;
    rule.w[n - 1 - i] = w;
  }
  return cache.emplace(n, std::move(rule)).first->second;
}

struct ScaledRule {
  std::vector<double> x, w;
};

ScaledRule on_interval(int n, double a, double b) {
  const GaussRule& g = gauss_rule(n);
  ScaledRule out;
  out.x.resize(n);
  out.w.resize(n);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    out.x[i] = mid + half * g.x[i];
    out.w[i] = half * g.w[i];
  }
  return out;
}

double pow_int(double s, int k) {
  double v = 1.0;
  for (int i = 0; i < k; ++i) v *= s;
  return v;
}

/// Angular parameterization of the unit gauge sphere.  The last parameter is
/// always the circle angle theta; density and surface element must not
/// depend on it (both supported charts are axisymmetric).
class AngularChart {
 public:
  virtual ~AngularChart() = default;
  virtual int phi_axes() const = 0;
  virtual void omega(const double* phi, double theta, double* out) const = 0;
  virtual double solid_density(const double* phi) const = 0;
  virtual double surface_element(double r, const double* phi) const = 0;
  virtual void circle(double s, const double* phi, int& ci, int& si, double& amp,
                      std::vector<double>& base) const = 0;
};

class EuclideanChart final : public AngularChart {
 public:
  explicit EuclideanChart(int n) : n_(n) {}
  int phi_axes() const override { return n_ - 2; }

  void omega(const double* phi, double theta, double* out) const override {
    double sprod = 1.0;
    for (int i = 0; i < n_ - 2; ++i) {
      out[i] = sprod * std::cos(phi[i]);
      sprod *= std::sin(phi[i]);
    }
    out[n_ - 2] = sprod * std::cos(theta);
    out[n_ - 1] = sprod * std::sin(theta);
  }

  double solid_density(const double* phi) const override {
    double d = 1.0;
    for (int i = 0; i < n_ - 2; ++i) d *= pow_int(std::sin(phi[i]), n_ - 2 - i);
    return d;
  }

  double surface_element(double r, const double* phi) const override {
    return pow_int(r, n_ - 1) * solid_density(phi);
  }

  void circle(double s, const double* phi, int& ci, int& si, double& amp,
              std::vector<double>& base) const override {
    base.assign(n_, 0.0);
    double sprod = 1.0;
    for (int i = 0; i < n_ - 2; ++i) {
      base[i] = s * sprod * std::cos(phi[i]);
      sprod *= std::sin(phi[i]);
    }
    amp = s * sprod;
    ci = n_ - 2;
    si = n_ - 1;
  }

 private:
  int n_;
};

/// Chart of the Heisenberg gauge sphere.  The polar parameter is remapped as
/// phi = pi sin^2(tau/2): sqrt(sin(phi)) — and with it every polynomial
/// pulled back through the chart — is then analytic in tau, so Gauss rules
/// keep their full order.
class HeisenbergChart final : public AngularChart {
 public:
  int phi_axes() const override { return 1; }

  static double remap(double tau) {
    const double s = std::sin(0.5 * tau);
    return kPi * s * s;
  }
  static double remap_jacobian(double tau) { return 0.5 * kPi * std::sin(tau); }

  void omega(const double* phi, double theta, double* out) const override {
    const double f = remap(phi[0]);
    const double rho = std::sqrt(std::sin(f));
    out[0] = rho * std::cos(theta);
    out[1] = rho * std::sin(theta);
    out[2] = std::cos(f);
  }

  double solid_density(const double* phi) const override { return remap_jacobian(phi[0]); }

  double surface_element(double r, const double* phi) const override {
    const double f = remap(phi[0]);
    const double sf = std::sin(f), cf = std::cos(f);
    return r * r * std::sqrt(r * r * sf * sf * sf + 0.25 * cf * cf) * remap_jacobian(phi[0]);
  }

  void circle(double s, const double* phi, int& ci, int& si, double& amp,
              std::vector<double>& base) const override {
    const double f = remap(phi[0]);
    base.assign(3, 0.0);
    base[2] = s * s * std::cos(f);
    amp = s * std::sqrt(std::sin(f));
    ci = 0;
    si = 1;
  }
};

std::unique_ptr<AngularChart> chart_for(const CarnotGroup& g) {
  switch (g.kind()) {
    case CarnotGroup::Kind::euclidean:
      if (g.dim() > kMaxCompiledVars)
        throw std::invalid_argument("quadrature supports euclidean dimension <= 12");
      return std::make_unique<EuclideanChart>(g.dim());
    case CarnotGroup::Kind::heisenberg1:
      return std::make_unique<HeisenbergChart>();
    case CarnotGroup::Kind::step2:
      throw UnsupportedGroupError("quadrature needs a group with closed-form gauge geometry");
  }
  throw std::logic_error("unreachable");
}

/// Radial nodes and weights for integral( g(s) s^{Q-1} ds ) over (0, r),
/// where g carries a declared N^alpha singular factor.  Integer-regular
/// weights use a plain open rule; fractional ones are substituted
/// s = r sigma^m so the transformed radial density is at least C^1.
struct RadialPlan {
  std::vector<double> s, w;
};

RadialPlan plan_radial(double alpha, int q, double r, int n) {
  if (alpha <= -static_cast<double>(q) + 1e-12)
    throw std::invalid_argument("non-integrable radial weight: alpha <= -Q");
  const double e = alpha + q - 1;
  RadialPlan out;
  out.s.reserve(n);
  out.w.reserve(n);
  if (std::abs(e - std::round(e)) < 1e-9 && e > -0.5) {
    ScaledRule rule = on_interval(n, 0.0, r);
    out.s = std::move(rule.x);
    out.w = std::move(rule.w);
    return out;
  }
  const int m = std::max(1, static_cast<int>(std::ceil(2.0 / (alpha + q) - 1e-12)));
  ScaledRule rule = on_interval(n, 0.0, 1.0);
  for (int i = 0; i < n; ++i) {
    const double sigma = rule.x[i];
    out.s.push_back(r * std::pow(sigma, m));
    out.w.push_back(rule.w[i] * r * m * std::pow(sigma, m - 1));
  }
  return out;
}

/// Odometer over the phi axes of a chart; presents the phi values and the
/// product of their Gauss weights in a fixed order.
class PhiGrid {
 public:
  PhiGrid(const AngularChart& chart, int nodes_per_axis)
      : axes_(chart.phi_axes()), rule_(on_interval(nodes_per_axis, 0.0, kPi)), idx_(axes_, 0) {
    phi_.resize(std::max(axes_, 1));
    done_ = false;
    load();
  }

  bool done() const { return done_; }
  const double* phi() const { return phi_.data(); }
  double weight() const { return w_; }

  void next() {
    for (int a = axes_ - 1; a >= 0; --a) {
      if (++idx_[a] < static_cast<int>(rule_.x.size())) {
        load();
        return;
      }
      idx_[a] = 0;
    }
    done_ = true;
  }

 private:
  void load() {
    w_ = 1.0;
    for (int a = 0; a < axes_; ++a) {
      phi_[a] = rule_.x[idx_[a]];
      w_ *= rule_.w[idx_[a]];
    }
  }

  int axes_;
  ScaledRule rule_;
  std::vector<int> idx_;
  std::vector<double> phi_;
  double w_ = 1.0;
  bool done_ = false;
};

void dilate_direction(const CarnotGroup& g, double s, const double* om, Point& out) {
  const auto& w = g.weights();
  for (int i = 0; i < g.dim(); ++i) out[i] = pow_int(s, w[i]) * om[i];
}

bool piece_selected(PartSelector sel, bool positive) {
  return sel == PartSelector::whole || (sel == PartSelector::plus && positive) ||
         (sel == PartSelector::minus && !positive);
}

int piece_nodes(double len, int full_nodes) {
  const int n = static_cast<int>(std::ceil(full_nodes * len / (2.0 * kPi)));
  return std::clamp(n, 8, full_nodes);
}

/// Piecewise Gauss pass over one chart circle, split at the sign changes of
/// the mask.  `weight` multiplies every node; the sum over all pieces of a
/// plus/minus pair is node-identical to the whole-circle pass.
void masked_circle_sum(const Integrand& f, const PolyTermsView& mask_view,
                       const CompiledPolynomial& mask_eval, PartSelector sel, int ci, int si,
                       double amp, const std::vector<double>& base, int theta_nodes,
                       double weight, Point& p, Accum& acc, long& evals) {
  std::vector<double> brk = circle_sign_breakpoints(mask_view, ci, si, amp, base);
  std::vector<double> cuts{-kPi};
  cuts.insert(cuts.end(), brk.begin(), brk.end());
  cuts.push_back(kPi);

  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double a = cuts[k], b = cuts[k + 1];
    if (b - a < 1e-14) continue;
    p = base;
    const double tm = 0.5 * (a + b);
    p[ci] = amp * std::cos(tm);
    p[si] = amp * std::sin(tm);
    if (!piece_selected(sel, mask_eval(p.data()) > 0.0)) continue;
    const ScaledRule rule = on_interval(piece_nodes(b - a, theta_nodes), a, b);
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
      p[ci] = amp * std::cos(rule.x[i]);
      p[si] = amp * std::sin(rule.x[i]);
      acc.add(f.f(p) * rule.w[i] * weight);
      ++evals;
    }
  }
}

std::string scheme_tag(const char* name, const Resolution& res) {
  return std::string(name) + "[nr=" + std::to_string(res.radial_nodes) +
         ",nphi=" + std::to_string(res.angular_nodes_phi) +
         ",nth=" + std::to_string(res.angular_nodes_theta) + "]";
}

}  // namespace

double solid_value(const CarnotGroup& g, const Integrand& f, double r, const Resolution& res,
                   long& evals) {
  if (!(r > 0.0)) throw std::invalid_argument("radius must be positive");
  const auto chart = chart_for(g);
  const int q = g.homogeneous_dim();
  RadialPlan plan = plan_radial(f.singular_exponent, q, r, res.radial_nodes);
  std::vector<double> rw(plan.s.size());
  for (std::size_t i = 0; i < plan.s.size(); ++i) rw[i] = pow_int(plan.s[i], q - 1) * plan.w[i];
  const ScaledRule theta = on_interval(res.angular_nodes_theta, -kPi, kPi);

  Accum acc;
  Point p(g.dim()), om(g.dim());
  for (PhiGrid grid(*chart, res.angular_nodes_phi); !grid.done(); grid.next()) {
    const double dens = chart->solid_density(grid.phi()) * grid.weight();
    for (std::size_t it = 0; it < theta.x.size(); ++it) {
      chart->omega(grid.phi(), theta.x[it], om.data());
      const double wang = dens * theta.w[it];
      for (std::size_t is = 0; is < plan.s.size(); ++is) {
        dilate_direction(g, plan.s[is], om.data(), p);
        acc.add(f.f(p) * rw[is] * wang);
        ++evals;
      }
    }
  }
  return acc.total();
}

double sphere_value(const CarnotGroup& g, const Integrand& w, double r, const Resolution& res,
                    long& evals) {
  if (!(r > 0.0)) throw std::invalid_argument("radius must be positive");
  const auto chart = chart_for(g);
  const ScaledRule theta = on_interval(res.angular_nodes_theta, -kPi, kPi);

  Accum acc;
  Point p(g.dim()), om(g.dim());
  for (PhiGrid grid(*chart, res.angular_nodes_phi); !grid.done(); grid.next()) {
    const double se = chart->surface_element(r, grid.phi()) * grid.weight();
    for (std::size_t it = 0; it < theta.x.size(); ++it) {
      chart->omega(grid.phi(), theta.x[it], om.data());
      dilate_direction(g, r, om.data(), p);
      // omega lies on the unit sphere, so the dilation lands on radius r.
      acc.add(w.f(p) * se * theta.w[it]);
      ++evals;
    }
  }
  return acc.total();
}

double masked_solid_value(const CarnotGroup& g, const Integrand& f, const Polynomial& mask,
                          PartSelector sel, double r, const Resolution& res, long& evals) {
  if (!(r > 0.0)) throw std::invalid_argument("radius must be positive");
  if (mask.nvars() != g.dim()) throw std::invalid_argument("mask dimension mismatch");
  const auto chart = chart_for(g);
  const int q = g.homogeneous_dim();
  const double e = f.singular_exponent + q - 1;
  if (std::abs(e - std::round(e)) > 1e-9 || e < -0.5)
    throw std::invalid_argument("masked solid integrals need an integer-regular radial weight");
  RadialPlan plan = plan_radial(f.singular_exponent, q, r, res.radial_nodes);

  const PolyTermsView view(mask);
  const CompiledPolynomial eval(mask);
  Accum acc;
  Point p(g.dim());
  std::vector<double> base;
  int ci = 0, si = 0;
  double amp = 0.0;
  for (PhiGrid grid(*chart, res.angular_nodes_phi); !grid.done(); grid.next()) {
    const double dens = chart->solid_density(grid.phi()) * grid.weight();
    for (std::size_t is = 0; is < plan.s.size(); ++is) {
      chart->circle(plan.s[is], grid.phi(), ci, si, amp, base);
      const double wgt = pow_int(plan.s[is], q - 1) * plan.w[is] * dens;
      masked_circle_sum(f, view, eval, sel, ci, si, amp, base, res.angular_nodes_theta, wgt, p,
                        acc, evals);
    }
  }
  return acc.total();
}

double masked_sphere_value(const CarnotGroup& g, const Integrand& w, const Polynomial& mask,
                           PartSelector sel, double r, const Resolution& res, long& evals) {
  if (!(r > 0.0)) throw std::invalid_argument("radius must be positive");
  if (mask.nvars() != g.dim()) throw std::invalid_argument("mask dimension mismatch");
  const auto chart = chart_for(g);
  const PolyTermsView view(mask);
  const CompiledPolynomial eval(mask);

  Accum acc;
  Point p(g.dim());
  std::vector<double> base;
  int ci = 0, si = 0;
  double amp = 0.0;
  for (PhiGrid grid(*chart, res.angular_nodes_phi); !grid.done(); grid.next()) {
    const double se = chart->surface_element(r, grid.phi()) * grid.weight();
    chart->circle(r, grid.phi(), ci, si, amp, base);
    masked_circle_sum(w, view, eval, sel, ci, si, amp, base, res.angular_nodes_theta, se, p, acc,
                      evals);
  }
  return acc.total();
}

GaussNodes gauss_on_interval(int n, double a, double b) {
  ScaledRule rule = on_interval(n, a, b);
  return GaussNodes{std::move(rule.x), std::move(rule.w)};
}

QuadEstimate estimate_by_doubling(const std::function<double(const Resolution&, long&)>& at,
                                  const Resolution& res, const std::string& scheme) {
  long e1 = 0, e2 = 0;
  const double lo = at(res, e1);
  const double hi = at(res.doubled(), e2);
  QuadEstimate q;
  q.value = hi;
  q.abs_error = std::abs(hi - lo) + 4e-16 * std::abs(hi);
  q.evaluations = e1 + e2;
  q.scheme = scheme;
  q.converged = q.abs_error <= 1e-3 * (std::abs(hi) + 1.0);
  return q;
}

QuadEstimate solid_integral(const CarnotGroup& g, const Integrand& f, double r,
                            const Resolution& res) {
  return estimate_by_doubling(
      [&](const Resolution& rr, long& n) { return solid_value(g, f, r, rr, n); }, res,
      scheme_tag("solid-gauss", res));
}

QuadEstimate sphere_integral(const CarnotGroup& g, const Integrand& w, double r,
                             const Resolution& res) {
  return estimate_by_doubling(
      [&](const Resolution& rr, long& n) { return sphere_value(g, w, r, rr, n); }, res,
      scheme_tag("sphere-gauss", res));
}

QuadEstimate masked_solid_integral(const CarnotGroup& g, const Integrand& f,
                                   const Polynomial& mask, PartSelector sel, double r,
                                   const Resolution& res) {
  return estimate_by_doubling(
      [&](const Resolution& rr, long& n) {
        return masked_solid_value(g, f, mask, sel, r, rr, n);
      },
      res, scheme_tag("solid-gauss-masked", res));
}

QuadEstimate masked_sphere_integral(const CarnotGroup& g, const Integrand& w,
                                    const Polynomial& mask, PartSelector sel, double r,
                                    const Resolution& res) {
  return estimate_by_doubling(
      [&](const Resolution& rr, long& n) {
        return masked_sphere_value(g, w, mask, sel, r, rr, n);
      },
      res, scheme_tag("sphere-gauss-masked", res));
}

double coarea_consistency(const CarnotGroup& g, const Integrand& f, double r, double dr,
                          const Resolution& res) {
  if (!(dr > 0.0) || !(r - dr > 0.0)) throw std::invalid_argument("need 0 < dr < r");
  long n = 0;
  const double up = solid_value(g, f, r + dr, res, n);
  const double dn = solid_value(g, f, r - dr, res, n);
  Integrand over_grad{
      [&](const Point& p) { return f.f(p) / gauge_grad_full_len(g, p); },
      f.singular_exponent};
  const double sp = sphere_value(g, over_grad, r, res, n);
  return std::abs((up - dn) / (2.0 * dr) - sp);
}

QuadEstimate thin_shell_integral(const CarnotGroup& g, const Integrand& f, double r, double eps,
                                 const Resolution& res) {
  if (!(eps > 0.0) || !(r - eps > 0.0)) throw std::invalid_argument("need 0 < eps < r");
  auto at = [&](const Resolution& rr, long& evals) {
    const auto chart = chart_for(g);
    const int q = g.homogeneous_dim();
    const ScaledRule radial = on_interval(rr.radial_nodes, r - eps, r + eps);
    const ScaledRule theta = on_interval(rr.angular_nodes_theta, -kPi, kPi);
    Accum acc;
    Point p(g.dim()), om(g.dim());
    for (PhiGrid grid(*chart, rr.angular_nodes_phi); !grid.done(); grid.next()) {
      const double dens = chart->solid_density(grid.phi()) * grid.weight();
      for (std::size_t it = 0; it < theta.x.size(); ++it) {
        chart->omega(grid.phi(), theta.x[it], om.data());
        const double wang = dens * theta.w[it];
        for (std::size_t is = 0; is < radial.x.size(); ++is) {
          dilate_direction(g, radial.x[is], om.data(), p);
          acc.add(f.f(p) * gauge_grad_full_len(g, p) * pow_int(radial.x[is], q - 1) *
                  radial.w[is] * wang);
          ++evals;
        }
      }
    }
    return acc.total() / (2.0 * eps);
  };
  return estimate_by_doubling(at, res, scheme_tag("thin-shell-gauss", res));
}

namespace {

struct UniformRng {
  std::mt19937_64 eng;
  explicit UniformRng(uint64_t seed) : eng(seed) {}
  double next() { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }
};

std::vector<double> box_half_widths(const CarnotGroup& g, double r) {
  // N(p) < r pins |x_i| < r^{d_i} for both supported gauges.
  std::vector<double> h(g.dim());
  for (int i = 0; i < g.dim(); ++i) h[i] = pow_int(r, g.weights()[i]);
  return h;
}

}  // namespace

QuadEstimate mc_rejection_solid(const CarnotGroup& g, const Integrand& f, double r, long samples,
                                uint64_t seed) {
  if (!(r > 0.0)) throw std::invalid_argument("radius must be positive");
  if (samples <= 0) throw std::invalid_argument("need a positive sample count");
  if (!g.has_gauge()) throw UnsupportedGroupError("rejection sampling needs a gauge norm");

  const auto half = box_half_widths(g, r);
  double vol_box = 1.0;
  for (double h : half) vol_box *= 2.0 * h;

  UniformRng rng(seed);
  Point p(g.dim());
  Accum sum, sum_sq;
  long accepted = 0;
  for (long i = 0; i < samples; ++i) {
    for (int j = 0; j < g.dim(); ++j) p[j] = (2.0 * rng.next() - 1.0) * half[j];
    if (g.gauge_norm(p) >= r) continue;
    ++accepted;
    const double v = f.f(p);
    sum.add(v);
    sum_sq.add(v * v);
  }

  QuadEstimate q;
  q.evaluations = samples;
  q.scheme = "mc-rejection[n=" + std::to_string(samples) + ",seed=" + std::to_string(seed) + "]";
  if (accepted == 0) {
    q.value = 0.0;
    q.abs_error = vol_box;
    q.converged = false;
    return q;
  }
  const double mean = sum.total() / samples;
  const double mean_sq = sum_sq.total() / samples;
  q.value = vol_box * mean;
  const double var = std::max(0.0, mean_sq - mean * mean) / samples;
  q.abs_error = vol_box * std::sqrt(var);
  q.converged = true;
  return q;
}

QuadEstimate mc_stratified_solid(const CarnotGroup& g, const Integrand& f, double r, long samples,
                                 uint64_t seed, int shells) {
  if (!(r > 0.0)) throw std::invalid_argument("radius must be positive");
  if (samples <= 0 || shells <= 0) throw std::invalid_argument("need positive budgets");
  if (!g.has_gauge()) throw UnsupportedGroupError("rejection sampling needs a gauge norm");
  if (f.singular_exponent <= -static_cast<double>(g.homogeneous_dim()))
    throw std::invalid_argument("non-integrable radial weight: alpha <= -Q");

  UniformRng rng(seed);
  Point p(g.dim());
  const long per_shell = std::max<long>(samples / shells, 32);

  double value = 0.0, var = 0.0, regular_bound = 0.0;
  bool all_ok = true;
  for (int k = 0; k < shells; ++k) {
    const double outer = r * std::ldexp(1.0, -k);
    const double inner = 0.5 * outer;
    const auto half = box_half_widths(g, outer);
    double vol_box = 1.0;
    for (double h : half) vol_box *= 2.0 * h;

    Accum sum, sum_sq;
    long accepted = 0;
    for (long i = 0; i < per_shell; ++i) {
      for (int j = 0; j < g.dim(); ++j) p[j] = (2.0 * rng.next() - 1.0) * half[j];
      const double nn = g.gauge_norm(p);
      if (nn >= outer || nn <= inner) continue;
      ++accepted;
      const double v = f.f(p);
      sum.add(v);
      sum_sq.add(v * v);
      regular_bound =
          std::max(regular_bound, std::abs(v) * std::pow(nn, -f.singular_exponent));
    }
    if (accepted == 0) {
      all_ok = false;
      continue;
    }
    const double mean = sum.total() / per_shell;
    const double mean_sq = sum_sq.total() / per_shell;
    value += vol_box * mean;
    var += vol_box * vol_box * std::max(0.0, mean_sq - mean * mean) / per_shell;
  }

  // Bound the truncated core by the declared singular exponent.
  const double eps = r * std::ldexp(1.0, -shells);
  const int q_hom = g.homogeneous_dim();
  double ang = 0.0;
  {
    const auto chart = chart_for(g);
    const ScaledRule theta = on_interval(32, -kPi, kPi);
    for (PhiGrid grid(*chart, 32); !grid.done(); grid.next()) {
      double tw = 0.0;
      for (double w : theta.w) tw += w;
      ang += chart->solid_density(grid.phi()) * grid.weight() * tw;
    }
  }
  const double core_bound = regular_bound * ang *
                            std::pow(eps, q_hom + f.singular_exponent) /
                            (q_hom + f.singular_exponent);

  QuadEstimate q;
  q.value = value;
  q.abs_error = std::sqrt(var) + core_bound;
  q.evaluations = per_shell * shells;
  q.scheme = "mc-shells[n=" + std::to_string(per_shell * shells) +
             ",k=" + std::to_string(shells) + ",seed=" + std::to_string(seed) + "]";
  q.converged = all_ok;
  return q;
}

Resolution Resolution::doubled() const {
  Resolution out(*this);
  out.radial_nodes *= 2;
  out.angular_nodes_phi *= 2;
  out.angular_nodes_theta *= 2;
  out.t_nodes *= 2;
  return out;
}

Resolution Resolution::from_json_text(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  Resolution res;
  for (const auto& [key, val] : j.items()) {
    if (key == "radial_nodes")
      res.radial_nodes = val.get<int>();
    else if (key == "angular_nodes_phi")
      res.angular_nodes_phi = val.get<int>();
    else if (key == "angular_nodes_theta")
      res.angular_nodes_theta = val.get<int>();
    else if (key == "t_nodes")
      res.t_nodes = val.get<int>();
    else if (key == "mc_samples")
      res.mc_samples = val.get<long>();
    else if (key == "seed")
      res.seed = val.get<uint64_t>();
    else
      throw std::invalid_argument("unknown resolution key: " + key);
  }
  if (res.radial_nodes < 2 || res.angular_nodes_phi < 2 || res.angular_nodes_theta < 4 ||
      res.t_nodes < 2 || res.mc_samples < 0)
    throw std::invalid_argument("resolution out of range");
  return res;
}

std::string Resolution::to_json_text() const {
  nlohmann::json j;
  j["radial_nodes"] = radial_nodes;
  j["angular_nodes_phi"] = angular_nodes_phi;
  j["angular_nodes_theta"] = angular_nodes_theta;
  j["t_nodes"] = t_nodes;
  j["mc_samples"] = mc_samples;
  j["seed"] = seed;
  return j.dump();
}

std::string QuadEstimate::to_json_text() const {
  nlohmann::json j;
  j["value"] = value;
  j["abs_error"] = abs_error;
  j["evaluations"] = evaluations;
  j["scheme"] = scheme;
  j["converged"] = converged;
  return j.dump();
}

}  // namespace carnotacf
