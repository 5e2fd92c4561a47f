#include "carnotacf/rootfind.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace carnotacf {

double poly_eval(const std::vector<double>& coeffs, double s) {
  double v = 0.0;
  for (std::size_t k = coeffs.size(); k-- > 0;) v = v * s + coeffs[k];
  return v;
}

namespace {

std::vector<double> trimmed(const std::vector<double>& coeffs) {
  double scale = 0.0;
  for (double c : coeffs) scale = std::max(scale, std::abs(c));
  std::vector<double> out(coeffs);
  while (!out.empty() && std::abs(out.back()) <= 1e-13 * scale) out.pop_back();
  return out;
}

std::vector<double> derivative(const std::vector<double>& c) {
  std::vector<double> d;
  for (std::size_t k = 1; k < c.size(); ++k) d.push_back(c[k] * static_cast<double>(k));
  return d;
}

double residual_scale(const std::vector<double>& c, double lo, double hi) {
  const double m = std::max({std::abs(lo), std::abs(hi), 1.0});
  double s = 0.0, p = 1.0;
  for (double ck : c) {
    s += std::abs(ck) * p;
    p *= m;
  }
  return s;
}

double bisect(const std::vector<double>& c, double a, double b, double fa) {
  for (int it = 0; it < 90; ++it) {
    const double m = 0.5 * (a + b);
    if (m == a || m == b) break;
    const double fm = poly_eval(c, m);
    if (fm == 0.0) return m;
    if ((fa < 0.0) != (fm < 0.0))
      b = m;
    else {
      a = m;
      fa = fm;
    }
  }
  return 0.5 * (a + b);
}

void roots_rec(const std::vector<double>& c, double lo, double hi, std::vector<double>& out) {
  if (c.size() <= 1) return;
  if (c.size() == 2) {
    const double r = -c[0] / c[1];
    if (r >= lo && r <= hi) out.push_back(r);
    return;
  }
  std::vector<double> crit;
  roots_rec(trimmed(derivative(c)), lo, hi, crit);
  std::vector<double> brk{lo};
  brk.insert(brk.end(), crit.begin(), crit.end());
  brk.push_back(hi);
  std::sort(brk.begin(), brk.end());

  const double ftol = 1e-11 * residual_scale(c, lo, hi);
  std::vector<double> vals(brk.size());
  for (std::size_t i = 0; i < brk.size(); ++i) vals[i] = poly_eval(c, brk[i]);
  for (std::size_t i = 0; i < brk.size(); ++i)
    if (std::abs(vals[i]) <= ftol) out.push_back(brk[i]);
  for (std::size_t i = 0; i + 1 < brk.size(); ++i) {
    if (std::abs(vals[i]) <= ftol || std::abs(vals[i + 1]) <= ftol) continue;
    if ((vals[i] < 0.0) != (vals[i + 1] < 0.0))
      out.push_back(bisect(c, brk[i], brk[i + 1], vals[i]));
  }
}

}  // namespace

std::vector<double> poly_real_roots(const std::vector<double>& coeffs, double lo, double hi) {
  if (!(lo <= hi)) throw std::invalid_argument("empty root search interval");
  std::vector<double> out;
  roots_rec(trimmed(coeffs), lo, hi, out);
  std::sort(out.begin(), out.end());
  const double merge = 1e-12 * std::max(hi - lo, 1.0);
  std::vector<double> dedup;
  for (double r : out)
    if (dedup.empty() || r - dedup.back() > merge) dedup.push_back(r);
  return dedup;
}

namespace {

// coefficient arrays over w; index = power of w
std::vector<double> conv(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

std::vector<double> binomial_pow(double c0, double c2, unsigned n) {
  // (c0 + c2 w^2)^n
  std::vector<double> out{1.0};
  std::vector<double> base{c0, 0.0, c2};
  for (unsigned k = 0; k < n; ++k) out = conv(out, base);
  return out;
}

}  // namespace

PolyTermsView::PolyTermsView(const Polynomial& p) : nvars(p.nvars()) {
  terms.reserve(p.terms().size());
  for (const auto& [e, c] : p.terms()) terms.emplace_back(c.convert_to<double>(), e);
}

std::vector<double> circle_sign_breakpoints(const PolyTermsView& u, int cos_index, int sin_index,
                                            double amplitude, const std::vector<double>& base) {
  unsigned deg = 0;
  for (const auto& [c, e] : u.terms) deg = std::max(deg, e[cos_index] + e[sin_index]);

  std::vector<double> w_poly(2 * deg + 1, 0.0);
  for (const auto& [c, e] : u.terms) {
    double k = c;
    for (int v = 0; v < u.nvars; ++v) {
      if (v == cos_index || v == sin_index) continue;
      for (uint32_t p = 0; p < e[v]; ++p) k *= base[v];
    }
    const unsigned i = e[cos_index], j = e[sin_index];
    for (unsigned p = 0; p < i + j; ++p) k *= amplitude;
    // cos = (1-w^2)/(1+w^2), sin = 2w/(1+w^2); multiply through by (1+w^2)^deg.
    std::vector<double> term = binomial_pow(1.0, -1.0, i);
    term = conv(term, binomial_pow(1.0, 1.0, deg - i - j));
    std::vector<double> swj(j + 1, 0.0);
    swj[j] = std::pow(2.0, static_cast<double>(j));
    term = conv(term, swj);
    for (std::size_t p = 0; p < term.size(); ++p) w_poly[p] += k * term[p];
  }

  // Cauchy bound for the root search window.
  double lead = 0.0, maxc = 0.0;
  for (double c : w_poly) maxc = std::max(maxc, std::abs(c));
  std::vector<double> t = w_poly;
  while (!t.empty() && std::abs(t.back()) <= 1e-13 * maxc) t.pop_back();
  double bound = 1.0;
  if (t.size() >= 2) {
    lead = std::abs(t.back());
    double m = 0.0;
    for (std::size_t i = 0; i + 1 < t.size(); ++i) m = std::max(m, std::abs(t[i]));
    bound = 1.0 + m / lead;
  }

  std::vector<double> thetas;
  for (double w : poly_real_roots(w_poly, -bound, bound)) thetas.push_back(2.0 * std::atan(w));
  std::sort(thetas.begin(), thetas.end());
  return thetas;
}

}  // namespace carnotacf
