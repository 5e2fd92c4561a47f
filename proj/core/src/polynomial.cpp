#include "carnotacf/polynomial.hpp"

#include <nlohmann/json.hpp>

#include <cctype>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace carnotacf {

Polynomial::Polynomial(int nvars, std::vector<int> weights)
    : nvars_(nvars), order_{std::move(weights)}, terms_(order_) {
  if (nvars_ <= 0) throw std::invalid_argument("polynomial needs at least one variable");
  if (static_cast<int>(order_.weights.size()) != nvars_)
    throw std::invalid_argument("weight vector size does not match variable count");
}

Polynomial Polynomial::zero(int nvars, std::vector<int> weights) {
  return Polynomial(nvars, std::move(weights));
}

Polynomial Polynomial::constant(int nvars, std::vector<int> weights, const Rational& c) {
  Polynomial p(nvars, std::move(weights));
  p.add_term(Exponents(nvars, 0), c);
  return p;
}

Polynomial Polynomial::variable(int nvars, std::vector<int> weights, int index) {
  if (index < 0 || index >= nvars) throw std::invalid_argument("variable index out of range");
  Polynomial p(nvars, std::move(weights));
  Exponents e(nvars, 0);
  e[index] = 1;
  p.add_term(e, Rational(1));
  return p;
}

Polynomial Polynomial::monomial(int nvars, std::vector<int> weights, const Exponents& e,
                                const Rational& c) {
  if (static_cast<int>(e.size()) != nvars)
    throw std::invalid_argument("exponent vector size does not match variable count");
  Polynomial p(nvars, std::move(weights));
  p.add_term(e, c);
  return p;
}

void Polynomial::add_term(const Exponents& e, const Rational& c) {
  if (c == 0) return;
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    terms_.emplace(e, c);
  } else {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

void Polynomial::check_compatible(const Polynomial& rhs) const {
  if (nvars_ != rhs.nvars_ || order_.weights != rhs.order_.weights)
    throw std::invalid_argument("polynomials live in different ambient spaces");
}

Polynomial Polynomial::operator+(const Polynomial& rhs) const {
  check_compatible(rhs);
  Polynomial out(*this);
  for (const auto& [e, c] : rhs.terms_) out.add_term(e, c);
  return out;
}

Polynomial Polynomial::operator-(const Polynomial& rhs) const {
  check_compatible(rhs);
  Polynomial out(*this);
  for (const auto& [e, c] : rhs.terms_) out.add_term(e, -c);
  return out;
}

Polynomial Polynomial::operator-() const {
  Polynomial out(nvars_, order_.weights);
  for (const auto& [e, c] : terms_) out.terms_.emplace(e, -c);
  return out;
}

Polynomial Polynomial::operator*(const Polynomial& rhs) const {
  check_compatible(rhs);
  Polynomial out(nvars_, order_.weights);
  Exponents e(nvars_);
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : rhs.terms_) {
      for (int i = 0; i < nvars_; ++i) e[i] = ea[i] + eb[i];
      out.add_term(e, ca * cb);
    }
  }
  return out;
}

Polynomial Polynomial::operator*(const Rational& c) const {
  Polynomial out(nvars_, order_.weights);
  if (c == 0) return out;
  for (const auto& [e, k] : terms_) out.terms_.emplace(e, k * c);
  return out;
}

Polynomial Polynomial::pow(unsigned n) const {
  Polynomial acc = constant(nvars_, order_.weights, 1);
  Polynomial base(*this);
  while (n > 0) {
    if (n & 1u) acc = acc * base;
    base = (n >>= 1) ? base * base : base;
  }
  return acc;
}

bool Polynomial::operator==(const Polynomial& rhs) const {
  return nvars_ == rhs.nvars_ && order_.weights == rhs.order_.weights && terms_ == rhs.terms_;
}

Polynomial Polynomial::derivative(int var) const {
  if (var < 0 || var >= nvars_) throw std::invalid_argument("derivative index out of range");
  Polynomial out(nvars_, order_.weights);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    Exponents d = e;
    d[var] -= 1;
    out.add_term(d, c * e[var]);
  }
  return out;
}

Polynomial Polynomial::substitute(const std::vector<Polynomial>& args) const {
  if (static_cast<int>(args.size()) != nvars_)
    throw std::invalid_argument("substitution needs one argument per variable");
  for (const auto& a : args) args.front().check_compatible(a);

  // Cache powers of each argument up to the largest exponent that occurs.
  std::vector<uint32_t> max_exp(nvars_, 0);
  for (const auto& [e, c] : terms_)
    for (int i = 0; i < nvars_; ++i) max_exp[i] = std::max(max_exp[i], e[i]);

  const int out_nvars = args.front().nvars();
  const std::vector<int>& out_weights = args.front().weights();
  std::vector<std::vector<Polynomial>> powers(nvars_);
  for (int i = 0; i < nvars_; ++i) {
    powers[i].push_back(constant(out_nvars, out_weights, 1));
    for (uint32_t k = 1; k <= max_exp[i]; ++k) powers[i].push_back(powers[i].back() * args[i]);
  }

  Polynomial out = zero(out_nvars, out_weights);
  for (const auto& [e, c] : terms_) {
    Polynomial m = constant(out_nvars, out_weights, c);
    for (int i = 0; i < nvars_; ++i)
      if (e[i] > 0) m = m * powers[i][e[i]];
    out = out + m;
  }
  return out;
}

Polynomial Polynomial::dilation_scaled(const Rational& lambda) const {
  Polynomial out(nvars_, order_.weights);
  for (const auto& [e, c] : terms_) {
    Rational f = 1;
    const long d = order_.degree(e);
    for (long k = 0; k < d; ++k) f *= lambda;
    out.terms_.emplace(e, c * f);
  }
  return out;
}

Polynomial Polynomial::sign_flipped(const std::vector<int>& vars) const {
  Polynomial out(nvars_, order_.weights);
  for (const auto& [e, c] : terms_) {
    uint32_t parity = 0;
    for (int v : vars) parity += e[v];
    out.terms_.emplace(e, (parity & 1u) ? -c : c);
  }
  return out;
}

std::optional<long> Polynomial::g_degree() const {
  if (terms_.empty()) return 0;
  const long d = order_.degree(terms_.begin()->first);
  for (const auto& [e, c] : terms_)
    if (order_.degree(e) != d) return std::nullopt;
  return d;
}

long Polynomial::max_g_degree() const {
  long d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, order_.degree(e));
  return d;
}

Rational Polynomial::eval_exact(const std::vector<Rational>& x) const {
  if (static_cast<int>(x.size()) != nvars_)
    throw std::invalid_argument("evaluation point has the wrong dimension");
  Rational sum = 0;
  for (const auto& [e, c] : terms_) {
    Rational m = c;
    for (int i = 0; i < nvars_; ++i)
      for (uint32_t k = 0; k < e[i]; ++k) m *= x[i];
    sum += m;
  }
  return sum;
}

double Polynomial::eval(const std::vector<double>& x) const {
  return CompiledPolynomial(*this)(x.data());
}

std::string Polynomial::str(const std::vector<std::string>& names) const {
  if (static_cast<int>(names.size()) != nvars_)
    throw std::invalid_argument("need one name per variable");
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    const bool negative = c < 0;
    const Rational mag = negative ? Rational(-c) : c;
    if (first) {
      if (negative) os << "-";
      first = false;
    } else {
      os << (negative ? " - " : " + ");
    }
    bool has_vars = false;
    for (int i = 0; i < nvars_; ++i) has_vars = has_vars || e[i] > 0;
    const bool unit = (mag == 1);
    if (!unit || !has_vars) os << mag.str();
    bool printed = !unit || !has_vars;
    for (int i = 0; i < nvars_; ++i) {
      if (e[i] == 0) continue;
      if (printed) os << "*";
      os << names[i];
      if (e[i] > 1) os << "^" << e[i];
      printed = true;
    }
  }
  return os.str();
}

CompiledPolynomial::CompiledPolynomial(const Polynomial& p) : nvars_(p.nvars()) {
  if (nvars_ > kMaxCompiledVars)
    throw std::invalid_argument("too many variables for the compiled evaluator");
  terms_.reserve(p.terms().size());
  for (const auto& [e, c] : p.terms()) {
    Term t{};
    t.coeff = c.convert_to<double>();
    for (int i = 0; i < nvars_; ++i) {
      if (e[i] > 255) throw std::invalid_argument("exponent too large for the compiled evaluator");
      t.exps[i] = static_cast<uint8_t>(e[i]);
      max_exp_[i] = std::max(max_exp_[i], t.exps[i]);
    }
    terms_.push_back(t);
  }
}

double CompiledPolynomial::operator()(const double* x) const {
  // Per-point power table, then a Neumaier-compensated sum in canonical order.
  double pw[kMaxCompiledVars][256];
  for (int i = 0; i < nvars_; ++i) {
    pw[i][0] = 1.0;
    for (int k = 1; k <= max_exp_[i]; ++k) pw[i][k] = pw[i][k - 1] * x[i];
  }
  double sum = 0.0, comp = 0.0;
  for (const Term& t : terms_) {
    double m = t.coeff;
    for (int i = 0; i < nvars_; ++i) m *= pw[i][t.exps[i]];
    const double s = sum + m;
    if (std::abs(sum) >= std::abs(m))
      comp += (sum - s) + m;
    else
      comp += (m - s) + sum;
    sum = s;
  }
  return sum + comp;
}

namespace {

class ExprParser {
 public:
  ExprParser(const std::string& s, const std::vector<std::string>& names, std::vector<int> weights)
      : s_(s), names_(names), weights_(std::move(weights)) {}

  Polynomial run() {
    Polynomial p = parse_expr();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("polynomial parse error at position " + std::to_string(pos_) +
                                ": " + what);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Polynomial parse_expr() {
    Polynomial acc = eat('-') ? -parse_term() : parse_term();
    for (;;) {
      if (eat('+'))
        acc = acc + parse_term();
      else if (eat('-'))
        acc = acc - parse_term();
      else
        return acc;
    }
  }

  Polynomial parse_term() {
    Polynomial acc = parse_factor();
    while (eat('*')) acc = acc * parse_factor();
    return acc;
  }

  Polynomial parse_factor() {
    if (eat('-')) return -parse_factor();
    Polynomial base = parse_base();
    if (eat('^')) {
      skip_ws();
      if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
        fail("expected a nonnegative integer exponent");
      unsigned n = 0;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
        n = n * 10 + (s_[pos_++] - '0');
      return base.pow(n);
    }
    return base;
  }

  Polynomial parse_base() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Polynomial p = parse_expr();
      if (!eat(')')) fail("expected ')'");
      return p;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_variable();
    fail("expected a number, variable or '('");
  }

  Polynomial parse_number() {
    std::string digits = read_digits();
    Rational value;
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      std::string frac = read_digits();
      Rational den = 1;
      for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
      value = Rational(to_int(digits + frac)) / den;
    } else {
      value = Rational(to_int(digits));
      skip_ws();
      if (pos_ < s_.size() && s_[pos_] == '/') {
        ++pos_;
        skip_ws();
        const Rational d{to_int(read_digits())};
        if (d == 0) fail("zero denominator");
        value /= d;
      }
    }
    return Polynomial::constant(static_cast<int>(names_.size()), weights_, value);
  }

  std::string read_digits() {
    std::string out;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
      out.push_back(s_[pos_++]);
    if (out.empty()) fail("expected digits");
    return out;
  }

  // cpp_int treats a leading zero as an octal prefix
  static boost::multiprecision::cpp_int to_int(const std::string& digits) {
    const std::size_t nz = digits.find_first_not_of('0');
    return boost::multiprecision::cpp_int(nz == std::string::npos ? "0" : digits.substr(nz));
  }

  Polynomial parse_variable() {
    std::string name;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
      name.push_back(s_[pos_++]);
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == name)
        return Polynomial::variable(static_cast<int>(names_.size()), weights_, static_cast<int>(i));
    fail("unknown variable '" + name + "'");
  }

  const std::string& s_;
  const std::vector<std::string>& names_;
  std::vector<int> weights_;
  std::size_t pos_ = 0;
};

}  // namespace

Polynomial parse_polynomial(const std::string& expr, const std::vector<std::string>& var_names,
                            std::vector<int> weights) {
  return ExprParser(expr, var_names, std::move(weights)).run();
}

Polynomial polynomial_from_json_text(const std::string& json_text, int nvars,
                                     std::vector<int> weights) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  if (!j.is_array()) throw std::invalid_argument("polynomial JSON must be an array of terms");
  Polynomial p = Polynomial::zero(nvars, weights);
  for (const auto& term : j) {
    if (!term.is_object() || !term.contains("coeff") || !term.contains("exps"))
      throw std::invalid_argument("each term needs \"coeff\" and \"exps\"");
    Rational c(term.at("coeff").get<std::string>());
    Exponents e;
    for (const auto& v : term.at("exps")) e.push_back(v.get<uint32_t>());
    if (static_cast<int>(e.size()) != nvars)
      throw std::invalid_argument("term exponent list has the wrong length");
    p = p + Polynomial::monomial(nvars, weights, e, c);
  }
  return p;
}

std::string polynomial_to_json_text(const Polynomial& p) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [e, c] : p.terms()) {
    nlohmann::json term;
    term["coeff"] = c.str();
    term["exps"] = e;
    arr.push_back(term);
  }
  return arr.dump();
}

}  // namespace carnotacf
