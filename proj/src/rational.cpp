#include "quasisim/rational.hpp"

#include <ostream>

namespace quasisim {

namespace {

bool is_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

bool has_leading_zero(std::string_view s) { return s.size() > 1 && s.front() == '0'; }

}  // namespace

Rational::Rational(long num, long den) : Rational(mpz_class(num), mpz_class(den)) {}

Rational::Rational(const mpz_class& num, const mpz_class& den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  value_ = mpq_class(num, den);
  value_.canonicalize();
}

Rational::Rational(mpq_class value) : value_(std::move(value)) { value_.canonicalize(); }

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::domain_error("rational division by zero");
  value_ /= o.value_;
  return *this;
}

Rational Rational::parse(std::string_view text) {
  const std::string quoted = "\"" + std::string(text) + "\"";
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && body.front() == '-') {
    negative = true;
    body.remove_prefix(1);
  }
  const auto slash = body.find('/');
  const std::string_view num = body.substr(0, slash);
  if (!is_digits(num) || has_leading_zero(num)) {
    throw ParseError("malformed rational " + quoted + ": expected \"n\" or \"n/d\"");
  }
  if (negative && num == "0") throw ParseError("non-canonical rational " + quoted + ": negative zero");
  if (slash == std::string_view::npos) {
    return Rational(mpz_class(std::string(text)), mpz_class(1));
  }
  const std::string_view den = body.substr(slash + 1);
  if (!is_digits(den) || has_leading_zero(den)) {
    throw ParseError("malformed rational " + quoted + ": bad denominator");
  }
  const mpz_class n{std::string(num)};
  const mpz_class d{std::string(den)};
  if (d == 0) throw ParseError("malformed rational " + quoted + ": zero denominator");
  if (d == 1) throw ParseError("non-canonical rational " + quoted + ": write integers without \"/1\"");
  if (n == 0) throw ParseError("non-canonical rational " + quoted + ": zero must be written \"0\"");
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
  if (g != 1) throw ParseError("non-canonical rational " + quoted + ": not in lowest terms");
  return Rational(negative ? mpz_class(-n) : n, d);
}

std::string Rational::str() const {
  if (value_.get_den() == 1) return value_.get_num().get_str();
  return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

Rational abs(const Rational& r) { return r.is_negative() ? -r : r; }

Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

Rational sum(const Vector& v) {
  Rational total;
  for (const auto& x : v) total += x;
  return total;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace quasisim
