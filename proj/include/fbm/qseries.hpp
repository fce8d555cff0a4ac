#pragma once

// Truncated Laurent series in q with exact rational coefficients. Exponents
// live on the grid (1/48)Z and are stored as integer numerators.

#include <climits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fbm/codes.hpp"
#include "fbm/rational.hpp"

namespace fbm::qs {

inline constexpr int kGrid = 48;
// Truncation of a series with no unknown terms.
inline constexpr int kExact = INT_MAX / 4;

// Saturating sum of exponent numerators, treating kExact as infinity.
int exp_add(int a, int b);

// Exponent numerator of a rational exponent; throws InputError off the grid.
int to_grid(const Rational& exponent);
Rational from_grid(int exp48);
// "q^-1/16" style rendering of an exponent.
std::string exponent_string(int exp48);

class QSeries {
 public:
  // The zero series, exact.
  QSeries() = default;
  explicit QSeries(int trunc) : trunc_(trunc) {}
  QSeries(std::map<int, Rational> terms, int trunc);

  static QSeries monomial(int exp48, const Rational& coeff = 1, int trunc = kExact);
  static QSeries constant(const Rational& c, int trunc = kExact) { return monomial(0, c, trunc); }

  // Terms are known for exponents < trunc().
  int trunc() const { return trunc_; }
  bool is_exact() const { return trunc_ >= kExact; }
  // Lowest exponent with a nonzero coefficient, or trunc() for zero.
  int valuation() const;
  bool is_zero() const { return terms_.empty(); }
  const std::map<int, Rational>& terms() const { return terms_; }

  // Throws InputError if exp48 >= trunc().
  Rational coefficient(int exp48) const;
  Rational operator[](int exp48) const { return coefficient(exp48); }
  // Coefficient as an integer; throws ConsistencyError if not integral.
  Integer integer_coefficient(int exp48) const;
  bool is_integral() const;

  QSeries truncated(int trunc) const;
  // Multiply by q^(shift/48).
  QSeries shifted(int shift48) const;
  // Substitute q -> q^k for a positive integer k.
  QSeries dilated(int k) const;

  QSeries operator-() const;
  QSeries& operator+=(const QSeries& o);
  QSeries& operator-=(const QSeries& o);
  QSeries& operator*=(const QSeries& o);
  QSeries& operator*=(const Rational& r);
  friend QSeries operator+(QSeries a, const QSeries& b) { return a += b; }
  friend QSeries operator-(QSeries a, const QSeries& b) { return a -= b; }
  friend QSeries operator*(QSeries a, const QSeries& b) { return a *= b; }
  friend QSeries operator*(QSeries a, const Rational& r) { return a *= r; }
  friend QSeries operator*(const Rational& r, QSeries a) { return a *= r; }

  // Multiplicative inverse. Throws InputError for the zero series and for
  // exact series with more than one term (infinite expansion).
  QSeries inverse() const;
  // Negative k uses inverse().
  QSeries pow(int k) const;

  // Same known terms on the common truncation.
  bool agrees_with(const QSeries& o) const;
  // First exponent below the common truncation where they differ.
  std::optional<int> first_difference(const QSeries& o) const;
  // Exact equality, including truncation.
  bool operator==(const QSeries&) const = default;

  // One term per line: "num/48<TAB>coefficient", ascending.
  std::string to_text() const;
  // Human readable, e.g. "q^-1 + 8 + 52*q + O(q^2)".
  std::string to_string() const;

 private:
  void prune();
  std::map<int, Rational> terms_;
  int trunc_ = kExact;
};

QSeries parse_series_text(std::string_view text, int trunc);

enum class EtaScale { Half, One, Two };

struct EtaFactor {
  EtaScale scale;
  int power;
};
using EtaQuotientSpec = std::vector<EtaFactor>;

// Product of eta(k tau)^p, known through q^(order/48) inclusive.
// Throws InputError if order is not above the leading exponent.
QSeries eta_quotient(const EtaQuotientSpec& spec, int order48);
int eta_leading_exponent(const EtaQuotientSpec& spec);

struct StringFunctions {
  QSeries c0, c1, c2;
};
// Level-2 string functions through q^(order/48).
StringFunctions string_functions(int order48);

// Splits s(q) = sum a_n q^n into the even part sum a_{2m} q^m and the
// odd part sum a_{2m+1} q^(m+1/2). Throws InputError on fractional exponents.
std::pair<QSeries, QSeries> half_period_pair(const QSeries& s);

struct WeightMinus8 {
  QSeries h, g0, g1;
  // Coefficient c(n) of h at integer n.
  Integer c(int n) const;
};
// h = 1/(eta(tau)^8 eta(2tau)^8) through q^(order/48), and its two halves.
// h is computed to twice the order so that g0 and g1 reach it as well.
WeightMinus8 weight_minus8_functions(int order48);

// E4^3/eta^24 - 744 through q^(order/48).
QSeries jay_function(int order48);

// sum_w counts[w] x^(n-w) y^w.
QSeries evaluate_enumerator(const codes::WeightEnumerator& w, const QSeries& x, const QSeries& y);

struct IdentityCheck {
  std::string name;
  bool holds = false;
  int compared_through48 = 0;
  std::optional<int> first_difference;
};

// The four identities relating h, g0, g1 to the string functions and the
// code enumerators, compared through q^(order/48). Enumerators are evaluated
// as W(c0, c1).
std::vector<IdentityCheck> verify_modular_identities(int order48);

}  // namespace fbm::qs
