#include "mbar/exactnum.hpp"

#include <stdexcept>

namespace mbar {

Rational::Rational(const mpz_class& num, const mpz_class& den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  q_ = mpq_class(num, den);
  q_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
  std::string s(text);
  auto slash = s.find('/');
  try {
    // GMP accepts a leading '-' but not '+'.
    if (!s.empty() && s[0] == '+' && s.size() > 1 && s[1] != '-' && s[1] != '+') s.erase(0, 1);
    if (slash == std::string::npos) {
      if (s.empty()) throw std::invalid_argument("empty");
      return Rational(mpz_class(s, 10), mpz_class(1));
    }
    std::string num = s.substr(0, slash);
    std::string den = s.substr(slash + 1);
    if (num.empty() || den.empty() || den[0] == '-' || den[0] == '+')
      throw std::invalid_argument("bad fraction");
    mpz_class d(den, 10);
    if (d == 0) throw std::invalid_argument("zero denominator");
    return Rational(mpz_class(num, 10), d);
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("not a rational number: '" + std::string(text) + "'");
  }
}

std::string Rational::str() const {
  if (q_.get_den() == 1) return q_.get_num().get_str();
  return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::domain_error("division by zero");
  q_ /= o.q_;
  return *this;
}

std::size_t Rational::hash() const {
  std::size_t h = std::hash<long>{}(mpz_get_si(q_.get_num_mpz_t()));
  h ^= std::hash<long>{}(mpz_get_si(q_.get_den_mpz_t())) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

Rational binomial(long n, long k) {
  if (n < 0 || k < 0 || k > n) return Rational(0);
  mpz_class out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return Rational(out, mpz_class(1));
}

Rational pow(const Rational& base, unsigned exp) {
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), base.raw().get_num_mpz_t(), exp);
  mpz_pow_ui(den.get_mpz_t(), base.raw().get_den_mpz_t(), exp);
  return Rational(num, den);
}

}  // namespace mbar
