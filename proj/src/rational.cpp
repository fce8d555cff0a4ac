#include "fbm/rational.hpp"

#include "fbm/errors.hpp"

namespace fbm {

Integer floor_of(const Rational& r) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

Integer ceil_of(const Rational& r) {
  Integer q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

std::string to_string(const Rational& r) {
  if (is_integral(r)) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

std::string to_string(const Integer& z) { return z.get_str(); }

Rational parse_rational(std::string_view text) {
  auto bad = [&] { return InputError("not a rational number: '" + std::string(text) + "'"); };
  if (text.empty()) throw bad();
  auto valid_int = [](std::string_view s) {
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) s.remove_prefix(1);
    if (s.empty()) return false;
    for (char c : s)
      if (c < '0' || c > '9') return false;
    return true;
  };
  auto slash = text.find('/');
  std::string num(text.substr(0, slash));
  std::string den = slash == std::string_view::npos ? "1" : std::string(text.substr(slash + 1));
  if (!valid_int(num) || !valid_int(den)) throw bad();
  if (num[0] == '+') num.erase(0, 1);
  if (den[0] == '+') den.erase(0, 1);
  Integer n(num), d(den);
  if (d == 0) throw bad();
  Rational r(n, d);
  r.canonicalize();
  return r;
}

std::int64_t to_int64(const Integer& z) {
  if (!z.fits_slong_p()) throw ResourceError("integer exceeds 64 bits: " + z.get_str());
  return z.get_si();
}

Rational mod_positive(const Rational& r, const Rational& m) {
  Rational q = r / m;
  Rational res = r - m * Rational(floor_of(q));
  return res;
}

}  // namespace fbm
