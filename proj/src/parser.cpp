#include "openbook/polynomial.hpp"

#include <cctype>

namespace openbook {

namespace {

// Grammar:
//   expr   := ['+'|'-'] term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := atom ('^' uint)?
//   atom   := number | ident | '(' expr ')'
//   number := digits ('/' digits)?
// '^' takes non-negative integer exponents only, capped at 64.
class Parser {
 public:
  Parser(const std::string& text, const std::vector<std::string>& names)
      : text_(text), names_(names) {}

  Polynomial run() {
    Polynomial p = expr();
    skip_ws();
    if (pos_ != text_.size())
      throw ParseError("unexpected character '" + std::string(1, text_[pos_]) + "'", pos_);
    return p;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  Polynomial expr() {
    bool neg = false;
    if (eat('-'))
      neg = true;
    else
      eat('+');
    Polynomial acc = term();
    if (neg) acc = -acc;
    while (true) {
      if (eat('+'))
        acc = acc + term();
      else if (eat('-'))
        acc = acc - term();
      else
        break;
    }
    return acc;
  }

  Polynomial term() {
    Polynomial acc = factor();
    while (eat('*')) acc = acc * factor();
    return acc;
  }

  Polynomial factor() {
    Polynomial base = atom();
    if (eat('^')) {
      skip_ws();
      std::size_t at = pos_;
      if (pos_ < text_.size() && text_[pos_] == '-')
        throw ParseError("negative exponent not allowed", at);
      if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
        throw ParseError("expected non-negative integer exponent", at);
      std::uint64_t e = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        e = e * 10 + static_cast<std::uint64_t>(text_[pos_] - '0');
        if (e > kMaxExponent) throw ParseError("exponent exceeds degree cap 64", at);
        ++pos_;
      }
      return base.pow(static_cast<std::uint32_t>(e));
    }
    return base;
  }

  Polynomial atom() {
    skip_ws();
    std::size_t at = pos_;
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", at);
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Polynomial p = expr();
      if (!eat(')')) throw ParseError("expected ')'", pos_);
      return p;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    throw ParseError("unexpected character '" + std::string(1, c) + "'", at);
  }

  Polynomial number() {
    std::size_t at = pos_;
    BigInt num = digits();
    if (pos_ < text_.size() && text_[pos_] == '/') {
      ++pos_;
      if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
        throw ParseError("expected denominator digits", pos_);
      BigInt den = digits();
      if (den == 0) throw ParseError("zero denominator", at);
      return Polynomial::constant(names_.size(), Rational(num, den));
    }
    return Polynomial::constant(names_.size(), Rational(num));
  }

  BigInt digits() {
    BigInt v = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      v = v * 10 + (text_[pos_] - '0');
      ++pos_;
    }
    return v;
  }

  Polynomial identifier() {
    std::size_t at = pos_;
    std::string name;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      name.push_back(text_[pos_]);
      ++pos_;
    }
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (names_[i] == name) return Polynomial::variable(names_.size(), i);
    }
    throw ParseError("unknown identifier '" + name + "'", at);
  }

  const std::string& text_;
  const std::vector<std::string>& names_;
  std::size_t pos_ = 0;
};

} // namespace

Polynomial Polynomial::parse(const std::string& text,
                             const std::vector<std::string>& var_names) {
  return Parser(text, var_names).run();
}

} // namespace openbook
