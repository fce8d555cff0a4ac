#include "fbm/qseries.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "fbm/errors.hpp"

namespace fbm::qs {

int exp_add(int a, int b) {
  if (a >= kExact || b >= kExact) return kExact;
  long long s = static_cast<long long>(a) + b;
  if (s >= kExact) return kExact;
  if (s <= -kExact) throw ResourceError("series exponent out of range");
  return static_cast<int>(s);
}

int to_grid(const Rational& exponent) {
  Rational scaled = exponent * kGrid;
  if (!is_integral(scaled)) throw InputError("exponent " + to_string(exponent) + " is not on the 1/48 grid");
  return static_cast<int>(to_int64(scaled.get_num()));
}

Rational from_grid(int exp48) { return make_rational(exp48, kGrid); }

std::string exponent_string(int exp48) {
  if (exp48 == 0) return "1";
  if (exp48 == kGrid) return "q";
  return "q^" + to_string(from_grid(exp48));
}

QSeries::QSeries(std::map<int, Rational> terms, int trunc) : terms_(std::move(terms)), trunc_(trunc) {
  prune();
}

void QSeries::prune() {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (it->first >= trunc_ || it->second == 0) it = terms_.erase(it);
    else ++it;
  }
}

QSeries QSeries::monomial(int exp48, const Rational& coeff, int trunc) {
  std::map<int, Rational> t;
  t.emplace(exp48, coeff);
  return QSeries(std::move(t), trunc);
}

int QSeries::valuation() const { return terms_.empty() ? trunc_ : terms_.begin()->first; }

Rational QSeries::coefficient(int exp48) const {
  if (exp48 >= trunc_) throw InputError("coefficient of " + exponent_string(exp48) + " is beyond the truncation");
  auto it = terms_.find(exp48);
  return it == terms_.end() ? Rational(0) : it->second;
}

Integer QSeries::integer_coefficient(int exp48) const {
  Rational c = coefficient(exp48);
  if (!fbm::is_integral(c)) throw ConsistencyError("coefficient of " + exponent_string(exp48) + " is not an integer");
  return c.get_num();
}

bool QSeries::is_integral() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return fbm::is_integral(t.second); });
}

QSeries QSeries::truncated(int trunc) const { return QSeries(terms_, std::min(trunc, trunc_)); }

QSeries QSeries::shifted(int shift48) const {
  std::map<int, Rational> t;
  for (const auto& [e, c] : terms_) t.emplace(e + shift48, c);
  return QSeries(std::move(t), exp_add(trunc_, shift48));
}

QSeries QSeries::dilated(int k) const {
  if (k <= 0) throw InputError("dilation factor must be positive");
  std::map<int, Rational> t;
  for (const auto& [e, c] : terms_) t.emplace(e * k, c);
  int tr = trunc_;
  if (tr < kExact) {
    // Exponent e*k is known iff e < trunc, i.e. e <= trunc-1.
    long long last = static_cast<long long>(trunc_ - 1) * k + 1;
    tr = last >= kExact ? kExact : static_cast<int>(last);
  }
  return QSeries(std::move(t), tr);
}

QSeries QSeries::operator-() const {
  QSeries r = *this;
  for (auto& [e, c] : r.terms_) c = -c;
  return r;
}

QSeries& QSeries::operator+=(const QSeries& o) {
  trunc_ = std::min(trunc_, o.trunc_);
  for (const auto& [e, c] : o.terms_) {
    if (e >= trunc_) break;
    terms_[e] += c;
  }
  prune();
  return *this;
}

QSeries& QSeries::operator-=(const QSeries& o) {
  trunc_ = std::min(trunc_, o.trunc_);
  for (const auto& [e, c] : o.terms_) {
    if (e >= trunc_) break;
    terms_[e] -= c;
  }
  prune();
  return *this;
}

QSeries& QSeries::operator*=(const QSeries& o) {
  int t = std::min(exp_add(trunc_, o.valuation()), exp_add(o.trunc_, valuation()));
  std::map<int, Rational> acc;
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : o.terms_) {
      if (ea + eb >= t) break;
      acc[ea + eb] += ca * cb;
    }
  }
  terms_ = std::move(acc);
  trunc_ = t;
  prune();
  return *this;
}

QSeries& QSeries::operator*=(const Rational& r) {
  for (auto& [e, c] : terms_) c *= r;
  prune();
  return *this;
}

QSeries QSeries::inverse() const {
  if (terms_.empty()) throw InputError("inverse of the zero series");
  const int e = terms_.begin()->first;
  const Rational lead = terms_.begin()->second;
  if (is_exact()) {
    if (terms_.size() == 1) return monomial(-e, 1 / lead);
    throw InputError("inverse of an exact series needs a truncation");
  }
  int g = 0;
  for (const auto& [x, c] : terms_) g = std::gcd(g, x - e);
  if (g == 0) g = kGrid;
  const int t = trunc_ - 2 * e;
  const int steps = (trunc_ - e + g - 1) / g;
  std::vector<Rational> a(steps), b(steps);
  for (const auto& [x, c] : terms_) a[(x - e) / g] = c;
  const Rational inv = 1 / lead;
  std::map<int, Rational> out;
  for (int k = 0; k < steps; ++k) {
    if (k == 0) {
      b[0] = inv;
    } else {
      Rational s = 0;
      for (int j = 1; j <= k; ++j)
        if (a[j] != 0) s += a[j] * b[k - j];
      b[k] = -inv * s;
    }
    if (b[k] != 0) out.emplace(-e + g * k, b[k]);
  }
  return QSeries(std::move(out), t);
}

QSeries QSeries::pow(int k) const {
  if (k < 0) return inverse().pow(-k);
  QSeries result = constant(1);
  QSeries base = *this;
  while (k > 0) {
    if (k & 1) result *= base;
    k >>= 1;
    if (k) base *= base;
  }
  return result;
}

bool QSeries::agrees_with(const QSeries& o) const { return !first_difference(o).has_value(); }

std::optional<int> QSeries::first_difference(const QSeries& o) const {
  const int t = std::min(trunc_, o.trunc_);
  auto a = terms_.begin();
  auto b = o.terms_.begin();
  while (true) {
    int ea = a == terms_.end() ? t : std::min(a->first, t);
    int eb = b == o.terms_.end() ? t : std::min(b->first, t);
    if (ea >= t && eb >= t) return std::nullopt;
    if (ea != eb) return std::min(ea, eb);
    if (a->second != b->second) return ea;
    ++a;
    ++b;
  }
}

std::string QSeries::to_text() const {
  std::ostringstream os;
  for (const auto& [e, c] : terms_) os << e << "/48\t" << fbm::to_string(c) << '\n';
  return os.str();
}

std::string QSeries::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    Rational a = abs(c);
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << '-';
    first = false;
    if (e == 0) os << fbm::to_string(a);
    else if (a == 1) os << exponent_string(e);
    else os << fbm::to_string(a) << '*' << exponent_string(e);
  }
  if (!is_exact()) os << (first ? "" : " + ") << "O(" << exponent_string(trunc_) << ')';
  else if (first) os << '0';
  return os.str();
}

QSeries parse_series_text(std::string_view text, int trunc) {
  std::map<int, Rational> terms;
  std::istringstream is{std::string(text)};
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto slash = line.find("/48\t");
    if (slash == std::string::npos) throw InputError("malformed series line: " + line);
    int e = 0;
    try {
      std::size_t used = 0;
      e = std::stoi(line.substr(0, slash), &used);
      if (used != slash) throw InputError("malformed exponent: " + line);
    } catch (const std::logic_error&) {
      throw InputError("malformed exponent: " + line);
    }
    terms[e] += parse_rational(std::string_view(line).substr(slash + 4));
  }
  return QSeries(std::move(terms), trunc);
}

namespace {

int scale_step(EtaScale s) {
  switch (s) {
    case EtaScale::Half: return kGrid / 2;
    case EtaScale::One: return kGrid;
    case EtaScale::Two: return 2 * kGrid;
  }
  return kGrid;
}

// prod_{n>=1} (1 - q^(n*step/48)), known below exponent trunc.
QSeries euler_product(int step, int trunc) {
  const int n = trunc <= 0 ? 0 : (trunc - 1) / step + 1;
  std::vector<Integer> p(n, 0);
  if (n > 0) p[0] = 1;
  for (int k = 1; k < n; ++k)
    for (int i = n - 1; i >= k; --i) p[i] -= p[i - k];
  std::map<int, Rational> t;
  for (int i = 0; i < n; ++i)
    if (p[i] != 0) t.emplace(i * step, Rational(p[i]));
  return QSeries(std::move(t), trunc);
}

}  // namespace

int eta_leading_exponent(const EtaQuotientSpec& spec) {
  int l = 0;
  for (const auto& f : spec) l += f.power * scale_step(f.scale) / 24;
  return l;
}

QSeries eta_quotient(const EtaQuotientSpec& spec, int order48) {
  const int lead = eta_leading_exponent(spec);
  if (order48 < lead) throw InputError("order is below the leading exponent of the eta quotient");
  const int rel = order48 + 1 - lead;
  QSeries r = QSeries::constant(1);
  for (const auto& f : spec) {
    if (f.power == 0) continue;
    r *= euler_product(scale_step(f.scale), rel).pow(f.power);
  }
  return r.truncated(rel).shifted(lead);
}

StringFunctions string_functions(int order48) {
  if (order48 < kGrid) throw InputError("string functions need order at least 1");
  const EtaQuotientSpec a{{EtaScale::Half, 1}, {EtaScale::One, -2}};
  const EtaQuotientSpec b{{EtaScale::One, 1}, {EtaScale::Two, -1}, {EtaScale::Half, -1}};
  const EtaQuotientSpec c2{{EtaScale::Two, 1}, {EtaScale::One, -2}};
  QSeries sa = eta_quotient(a, order48);
  QSeries sb = eta_quotient(b, order48);
  const Rational half = make_rational(1, 2);
  // The eta(tau/2) quotient a starts 1 - q^1/2, so c1 = (b - a)/2 is the
  // combination with positive coefficients.
  return {(sa + sb) * half, (sb - sa) * half, eta_quotient(c2, order48)};
}

std::pair<QSeries, QSeries> half_period_pair(const QSeries& s) {
  std::map<int, Rational> even, odd;
  for (const auto& [e, c] : s.terms()) {
    if (e % kGrid != 0) throw InputError("half period split needs integer exponents");
    const int n = e / kGrid;
    (n % 2 == 0 ? even : odd).emplace(n * (kGrid / 2), c);
  }
  int t = s.trunc();
  if (t < kExact) t = t >= 0 ? (t + 1) / 2 : -((-t) / 2);
  return {QSeries(std::move(even), t), QSeries(std::move(odd), t)};
}

Integer WeightMinus8::c(int n) const { return h.integer_coefficient(n * kGrid); }

WeightMinus8 weight_minus8_functions(int order48) {
  const EtaQuotientSpec spec{{EtaScale::One, -8}, {EtaScale::Two, -8}};
  QSeries h = eta_quotient(spec, 2 * order48 + 1);
  auto [g0, g1] = half_period_pair(h);
  return {h.truncated(order48 + 1), g0.truncated(order48 + 1), g1.truncated(order48 + 1)};
}

QSeries jay_function(int order48) {
  if (order48 < 0) throw InputError("J needs a nonnegative order");
  const int n = order48 / kGrid + 2;
  std::map<int, Rational> e4;
  e4.emplace(0, Rational(1));
  for (int k = 1; k < n; ++k) {
    long s = 0;
    for (int d = 1; d <= k; ++d)
      if (k % d == 0) s += static_cast<long>(d) * d * d;
    e4.emplace(k * kGrid, Rational(Integer(240) * s));
  }
  QSeries e = QSeries(std::move(e4), n * kGrid);
  QSeries inv_delta = eta_quotient({{EtaScale::One, -24}}, order48);
  QSeries j = e.pow(3) * inv_delta - QSeries::constant(744);
  return j.truncated(order48 + 1);
}

QSeries evaluate_enumerator(const codes::WeightEnumerator& w, const QSeries& x, const QSeries& y) {
  const int n = w.length;
  std::vector<QSeries> xp{QSeries::constant(1)}, yp{QSeries::constant(1)};
  for (int i = 1; i <= n; ++i) {
    xp.push_back(xp.back() * x);
    yp.push_back(yp.back() * y);
  }
  QSeries sum;
  bool any = false;
  for (int k = 0; k <= n; ++k) {
    if (w.counts[k] == 0) continue;
    QSeries term = xp[n - k] * yp[k] * Rational(Integer(static_cast<long>(w.counts[k])));
    if (!any) sum = term;
    else sum += term;
    any = true;
  }
  return sum;
}

namespace {

IdentityCheck compare_chain(std::string name, const std::vector<QSeries>& sides, int order48) {
  IdentityCheck r;
  r.name = std::move(name);
  int t = kExact;
  for (const auto& s : sides) t = std::min(t, s.trunc());
  r.compared_through48 = t - 1;
  r.holds = t > order48;
  for (std::size_t i = 1; i < sides.size(); ++i) {
    if (auto d = sides[0].first_difference(sides[i])) {
      if (!r.first_difference || *d < *r.first_difference) r.first_difference = d;
      r.holds = false;
    }
  }
  return r;
}

}  // namespace

std::vector<IdentityCheck> verify_modular_identities(int order48) {
  // Powers up to 16 of c0 (leading q^-1/16) lose 15/16 of precision.
  const auto sf = string_functions(order48 + kGrid);
  const auto wm = weight_minus8_functions(order48);
  const auto h16 = codes::weight_enumerator(codes::hamming16());
  const auto e16 = codes::BitWord::unit(16, 0);
  const auto e16b = e16 ^ codes::BitWord::unit(16, 1);
  const auto coset1 = codes::coset_weight_enumerator(codes::hamming16(), e16);
  const auto coset2 = codes::coset_weight_enumerator(codes::hamming16(), e16b);
  const auto f8 = codes::even_weight_code(8);
  const auto f8_even = codes::weight_enumerator(f8);
  const auto f8_odd = codes::coset_weight_enumerator(f8, codes::BitWord::unit(8, 0));
  const int t = order48 + 1;
  auto w = [&](const codes::WeightEnumerator& we) { return evaluate_enumerator(we, sf.c0, sf.c1).truncated(t); };
  const QSeries c2_8 = sf.c2.pow(8);
  std::vector<IdentityCheck> out;
  out.push_back(compare_chain("g0 + h = W_H16(c0,c1)", {wm.g0 + wm.h, w(h16)}, order48));
  out.push_back(compare_chain("g0 = W_{H16+(1,1,0..0)}(c0,c1) = W_{F8 odd}(c0,c1) c2^8",
                              {wm.g0, w(coset2), (w(f8_odd) * c2_8).truncated(t)}, order48));
  out.push_back(compare_chain("g0 = 8 c2^16", {wm.g0, (sf.c2.pow(16) * Rational(8)).truncated(t)}, order48));
  out.push_back(compare_chain("g1 = W_{H16+(1,0..0)}(c0,c1) = W_{F8 even}(c0,c1) c2^8",
                              {wm.g1, w(coset1), (w(f8_even) * c2_8).truncated(t)}, order48));
  return out;
}

}  // namespace fbm::qs
