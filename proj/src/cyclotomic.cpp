#include "fbm/cyclotomic.hpp"

#include <map>
#include <mutex>
#include <numeric>
#include <sstream>

#include "fbm/errors.hpp"

namespace fbm::cyc {
namespace {

// Exact division of integer polynomials, constant term first.
std::vector<Integer> poly_divide(std::vector<Integer> a, const std::vector<Integer>& b) {
  std::vector<Integer> q(a.size() - b.size() + 1, 0);
  for (std::size_t i = q.size(); i-- > 0;) {
    q[i] = a[i + b.size() - 1] / b.back();
    for (std::size_t j = 0; j < b.size(); ++j) a[i + j] -= q[i] * b[j];
  }
  return q;
}

}  // namespace

std::vector<Integer> cyclotomic_polynomial(int order) {
  if (order < 1) throw InputError("cyclotomic order must be positive");
  static std::map<int, std::vector<Integer>> cache;
  static std::mutex mu;
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(order); it != cache.end()) return it->second;
  }
  std::vector<Integer> p(order + 1, 0);
  p[0] = -1;
  p[order] = 1;
  for (int d = 1; d < order; ++d)
    if (order % d == 0) p = poly_divide(p, cyclotomic_polynomial(d));
  std::lock_guard lock(mu);
  cache.emplace(order, p);
  return p;
}

Cyclotomic::Cyclotomic(int order) : order_(order) {
  coeffs_.assign(cyclotomic_polynomial(order).size() - 1, Rational(0));
}

Cyclotomic Cyclotomic::root_power(int order, long k) {
  Cyclotomic c(order);
  long e = ((k % order) + order) % order;
  std::vector<Rational> raw(order, Rational(0));
  raw[e] = 1;
  c.coeffs_ = raw;
  c.reduce();
  return c;
}

void Cyclotomic::reduce() {
  const auto phi = cyclotomic_polynomial(order_);
  const std::size_t deg = phi.size() - 1;
  for (std::size_t i = coeffs_.size(); i-- > deg;) {
    if (coeffs_[i] == 0) continue;
    Rational c = coeffs_[i];
    for (std::size_t j = 0; j <= deg; ++j) coeffs_[i - deg + j] -= c * Rational(phi[j]);
  }
  coeffs_.resize(deg, Rational(0));
}

Cyclotomic Cyclotomic::lifted(int order) const {
  if (order % order_ != 0) throw InputError("cyclotomic lift needs a multiple of the order");
  Cyclotomic c(order);
  const int step = order / order_;
  std::vector<Rational> raw(order, Rational(0));
  for (std::size_t i = 0; i < coeffs_.size(); ++i) raw[i * step] = coeffs_[i];
  c.coeffs_ = raw;
  c.reduce();
  return c;
}

Cyclotomic& Cyclotomic::operator+=(const Cyclotomic& o) {
  if (o.order_ != order_) {
    const int l = std::lcm(order_, o.order_);
    *this = lifted(l);
    return *this += o.lifted(l);
  }
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

Cyclotomic& Cyclotomic::operator*=(const Rational& r) {
  for (auto& c : coeffs_) c *= r;
  return *this;
}

Cyclotomic operator*(Cyclotomic a, const Cyclotomic& b) {
  const int l = std::lcm(a.order_, b.order_);
  Cyclotomic x = a.lifted(l), y = b.lifted(l);
  std::vector<Rational> raw(x.coeffs_.size() + y.coeffs_.size(), Rational(0));
  for (std::size_t i = 0; i < x.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < y.coeffs_.size(); ++j) raw[i + j] += x.coeffs_[i] * y.coeffs_[j];
  x.coeffs_ = raw;
  x.reduce();
  return x;
}

bool Cyclotomic::operator==(const Cyclotomic& o) const {
  const int l = std::lcm(order_, o.order_);
  return lifted(l).coeffs_ == o.lifted(l).coeffs_;
}

bool Cyclotomic::is_rational() const {
  for (std::size_t i = 1; i < coeffs_.size(); ++i)
    if (coeffs_[i] != 0) return false;
  return true;
}

Rational Cyclotomic::rational_value() const {
  if (!is_rational()) throw ConsistencyError("cyclotomic element is not rational");
  return coeffs_.empty() ? Rational(0) : coeffs_[0];
}

std::string Cyclotomic::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == 0) continue;
    if (!first) os << " + ";
    first = false;
    os << fbm::to_string(coeffs_[i]);
    if (i > 0) os << "*z^" << i;
  }
  if (first) os << '0';
  if (order_ > 2) os << " (z = zeta_" << order_ << ')';
  return os.str();
}

}  // namespace fbm::cyc
