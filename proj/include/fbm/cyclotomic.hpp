#pragma once

// Elements of Q(zeta_K) in the power basis modulo the K-th cyclotomic
// polynomial, so equal elements have equal coefficient vectors.

#include <string>
#include <vector>

#include "fbm/rational.hpp"

namespace fbm::cyc {

class Cyclotomic {
 public:
  Cyclotomic() : Cyclotomic(1) {}
  explicit Cyclotomic(int order);

  int order() const { return order_; }
  // zeta_K^k.
  static Cyclotomic root_power(int order, long k);
  // Same element viewed in Q(zeta_M), K | M.
  Cyclotomic lifted(int order) const;

  Cyclotomic& operator+=(const Cyclotomic& o);
  Cyclotomic& operator*=(const Rational& r);
  friend Cyclotomic operator*(Cyclotomic a, const Cyclotomic& b);
  bool operator==(const Cyclotomic& o) const;

  // Integer value if the element is rational.
  bool is_rational() const;
  Rational rational_value() const;
  // "3 + 2*z^5" with z = zeta_K.
  std::string to_string() const;

 private:
  void reduce();
  int order_;
  std::vector<Rational> coeffs_;  // degree < phi(K)
};

// Integer coefficients of the K-th cyclotomic polynomial, constant first.
std::vector<Integer> cyclotomic_polynomial(int order);

}  // namespace fbm::cyc
