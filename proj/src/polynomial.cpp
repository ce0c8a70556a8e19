#include "openbook/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace openbook {

bool GradedLexGreater::operator()(const Exponents& a, const Exponents& b) const {
  std::uint64_t da = std::accumulate(a.begin(), a.end(), std::uint64_t{0});
  std::uint64_t db = std::accumulate(b.begin(), b.end(), std::uint64_t{0});
  if (da != db) return da > db;
  return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

Polynomial Polynomial::constant(std::size_t num_vars, const Rational& c) {
  Polynomial p(num_vars);
  p.add_term(Exponents(num_vars, 0), c);
  return p;
}

Polynomial Polynomial::variable(std::size_t num_vars, std::size_t index) {
  if (index >= num_vars) throw PolyError("variable index out of range");
  Polynomial p(num_vars);
  Exponents e(num_vars, 0);
  e[index] = 1;
  p.add_term(e, 1);
  return p;
}

std::size_t Polynomial::total_degree() const {
  std::size_t d = 0;
  for (const auto& [e, c] : terms_)
    d = std::max<std::size_t>(d, std::accumulate(e.begin(), e.end(), std::size_t{0}));
  return d;
}

void Polynomial::add_term(const Exponents& exps, const Rational& c) {
  if (exps.size() != num_vars_) throw PolyError("exponent vector length mismatch");
  if (c == 0) return;
  auto it = terms_.find(exps);
  if (it == terms_.end()) {
    terms_.emplace(exps, c);
  } else {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

void Polynomial::check_same_vars(const Polynomial& o) const {
  if (num_vars_ != o.num_vars_)
    throw PolyError("polynomials over different variable counts");
}

Polynomial Polynomial::operator-() const {
  Polynomial r(num_vars_);
  for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
  return r;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  check_same_vars(o);
  Polynomial r = *this;
  for (const auto& [e, c] : o.terms_) r.add_term(e, c);
  return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
  check_same_vars(o);
  Polynomial r = *this;
  for (const auto& [e, c] : o.terms_) r.add_term(e, -c);
  return r;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  check_same_vars(o);
  Polynomial r(num_vars_);
  Exponents e(num_vars_);
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : o.terms_) {
      for (std::size_t i = 0; i < num_vars_; ++i) e[i] = ea[i] + eb[i];
      r.add_term(e, ca * cb);
    }
  }
  return r;
}

Polynomial Polynomial::scaled(const Rational& c) const {
  Polynomial r(num_vars_);
  if (c == 0) return r;
  for (const auto& [e, k] : terms_) r.terms_.emplace(e, k * c);
  return r;
}

Polynomial Polynomial::pow(std::uint32_t e) const {
  if (e > kMaxExponent) throw PolyError("exponent exceeds degree cap 64");
  Polynomial r = constant(num_vars_, 1);
  Polynomial base = *this;
  while (e > 0) {
    if (e & 1u) r = r * base;
    base = (e >>= 1) ? base * base : base;
  }
  return r;
}

Polynomial Polynomial::derivative(std::size_t var_index) const {
  if (var_index >= num_vars_) throw PolyError("derivative index out of range");
  Polynomial r(num_vars_);
  for (const auto& [e, c] : terms_) {
    if (e[var_index] == 0) continue;
    Exponents d = e;
    d[var_index] -= 1;
    r.add_term(d, c * e[var_index]);
  }
  return r;
}

std::vector<Polynomial> Polynomial::gradient() const {
  std::vector<Polynomial> g;
  g.reserve(num_vars_);
  for (std::size_t i = 0; i < num_vars_; ++i) g.push_back(derivative(i));
  return g;
}

Rational Polynomial::evaluate(const std::vector<Rational>& point) const {
  if (point.size() != num_vars_) throw PolyError("evaluation point dimension mismatch");
  Rational acc = 0;
  for (const auto& [e, c] : terms_) {
    Rational t = c;
    for (std::size_t i = 0; i < num_vars_; ++i) {
      for (std::uint32_t k = 0; k < e[i]; ++k) t *= point[i];
    }
    acc += t;
  }
  return acc;
}

double Polynomial::evaluate(std::span<const double> point) const {
  if (point.size() != num_vars_) throw PolyError("evaluation point dimension mismatch");
  double acc = 0.0;
  for (const auto& [e, c] : terms_) {
    double t = to_double(c);
    for (std::size_t i = 0; i < num_vars_; ++i) {
      if (e[i] == 0) continue;
      double xi = point[i];
      double p = 1.0;
      std::uint32_t k = e[i];
      while (k > 0) {  // binary power on doubles
        if (k & 1u) p *= xi;
        xi *= xi;
        k >>= 1;
      }
      t *= p;
    }
    acc += t;
  }
  return acc;
}

namespace {

std::string coef_string(const Rational& c) {
  std::ostringstream os;
  os << c;
  return os.str();
}

} // namespace

std::string Polynomial::to_string(const std::vector<std::string>& var_names) const {
  if (var_names.size() != num_vars_) throw PolyError("variable name list length mismatch");
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    Rational a = c < 0 ? Rational(-c) : c;
    if (first) {
      if (c < 0) os << "-";
      first = false;
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    bool any_var = std::any_of(e.begin(), e.end(), [](auto k) { return k > 0; });
    bool printed = false;
    if (a != 1 || !any_var) {
      os << coef_string(a);
      printed = true;
    }
    for (std::size_t i = 0; i < num_vars_; ++i) {
      if (e[i] == 0) continue;
      if (printed) os << "*";
      os << var_names[i];
      if (e[i] > 1) os << "^" << e[i];
      printed = true;
    }
  }
  return os.str();
}

std::string Polynomial::to_string() const {
  std::vector<std::string> names;
  names.reserve(num_vars_);
  for (std::size_t i = 0; i < num_vars_; ++i) names.push_back("x" + std::to_string(i + 1));
  return to_string(names);
}

} // namespace openbook
