#include "fbm/enumerate.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>

#include "fbm/errors.hpp"

namespace fbm::en {
namespace {

constexpr int kFrac = 30;
constexpr std::int64_t kOne = std::int64_t{1} << kFrac;

using u128 = unsigned __int128;

std::int64_t floor_div(i128 a, i128 b) {
  i128 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return static_cast<std::int64_t>(q);
}

std::int64_t ceil_div(i128 a, i128 b) { return -floor_div(-a, b); }

std::int64_t fixed_floor(const Rational& r) { return to_int64(floor_of(r * Rational(Integer(kOne)))); }
std::int64_t fixed_ceil(const Rational& r) { return to_int64(ceil_of(r * Rational(Integer(kOne)))); }

i128 to_i128(const Integer& z) {
  // Split into two 64-bit halves through the string-free mpz interface.
  Integer a = abs(z);
  Integer hi = a >> 64;
  Integer lo = a - (hi << 64);
  if (hi > Integer("9223372036854775807")) throw ResourceError("value exceeds 128 bits");
  u128 v = (static_cast<u128>(mpz_get_ui(hi.get_mpz_t())) << 64) | mpz_get_ui(lo.get_mpz_t());
  i128 r = static_cast<i128>(v);
  return z < 0 ? -r : r;
}

Integer lcm_denominators(const la::QMatrix& m) {
  Integer l = 1;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(i, j).get_den_mpz_t());
  return l;
}

}  // namespace

std::shared_ptr<const GramReduction> reduce_gram(const la::QMatrix& gram) {
  if (!la::is_symmetric(gram)) throw InputError("Gram matrix must be square and symmetric");
  if (gram.rows() == 0) throw InputError("enumeration needs a lattice of positive rank");
  static std::mutex mu;
  static std::map<std::string, std::shared_ptr<const GramReduction>> cache;
  const std::string key = la::to_string(gram);
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto r = std::make_shared<GramReduction>();
  const int n = static_cast<int>(gram.rows());
  r->n = n;
  r->gs = lcm_denominators(gram);
  la::QMatrix scaled = gram;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) scaled(i, j) *= Rational(r->gs);
  const auto lll = la::lll_gram(scaled);
  const la::ZMatrix tinv = la::unimodular_inverse(lll.t);
  r->t.resize(n * n);
  r->tinv.resize(n * n);
  r->g.resize(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      r->t[i * n + j] = to_int64(lll.t(i, j));
      r->tinv[i * n + j] = to_int64(tinv(i, j));
      r->g[i * n + j] = to_int64(lll.reduced(i, j).get_num());
    }
  const auto ldl = la::ldl_positive(lll.reduced);
  r->d_lo.resize(n);
  r->mu_lo.assign(n * n, 0);
  r->mu_hi.assign(n * n, 0);
  for (int i = 0; i < n; ++i) {
    r->d_lo[i] = std::max<std::int64_t>(1, fixed_floor(ldl.d[i]));
    for (int j = i + 1; j < n; ++j) {
      r->mu_lo[j * n + i] = fixed_floor(ldl.l(j, i));
      r->mu_hi[j * n + i] = fixed_ceil(ldl.l(j, i));
    }
  }
  std::lock_guard lock(mu);
  if (cache.size() > 256) cache.clear();
  return cache.emplace(key, std::move(r)).first->second;
}

EllipsoidEnumerator::EllipsoidEnumerator(const la::QMatrix& gram, const Rational& max_norm,
                                         std::vector<Rational> shift, const Rational& min_norm)
    : EllipsoidEnumerator(reduce_gram(gram), max_norm, shift, min_norm) {}

EllipsoidEnumerator::EllipsoidEnumerator(std::shared_ptr<const GramReduction> red, const Rational& max_norm,
                                         const std::vector<Rational>& shift, const Rational& min_norm) {
  n_ = red->n;
  out_dim_ = n_;
  if (!shift.empty() && static_cast<int>(shift.size()) != n_) throw InputError("shift has the wrong dimension");

  // Shift in reduced coordinates, sred = shift * T^-1, as integers over e.
  Integer den = 1;
  for (const auto& v : shift) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), v.get_den_mpz_t());
  std::vector<i128> num(n_, 0);
  if (!shift.empty()) {
    std::vector<std::int64_t> sn(n_);
    for (int i = 0; i < n_; ++i) sn[i] = to_int64(Rational(shift[i] * Rational(den)).get_num());
    for (int i = 0; i < n_; ++i)
      if (sn[i] != 0)
        for (int j = 0; j < n_; ++j) num[j] += static_cast<i128>(sn[i]) * red->tinv[i * n_ + j];
  }
  i128 g = to_i128(den);
  for (auto v : num) {
    i128 a = v < 0 ? -v : v, b = g;
    while (b != 0) {
      i128 t = a % b;
      a = b;
      b = t;
    }
    g = a;
  }
  const i128 e = to_i128(den) / g;
  if (e > (i128{1} << 40)) throw ResourceError("shift denominator too large");
  e_ = static_cast<std::int64_t>(e);
  shift_num_.resize(n_);
  for (int i = 0; i < n_; ++i) {
    const i128 v = num[i] / g;
    if (v > (i128{1} << 62) || v < -(i128{1} << 62)) throw ResourceError("shift too large");
    shift_num_[i] = static_cast<std::int64_t>(v);
  }

  norm_den_ = red->gs * Integer(static_cast<long>(e_)) * Integer(static_cast<long>(e_));
  if (max_norm < 0) {
    empty_ = true;
    return;
  }
  max_num_ = to_i128(floor_of(max_norm * Rational(norm_den_)));
  has_min_ = min_norm >= 0;
  if (has_min_) min_num_ = to_i128(ceil_of(min_norm * Rational(norm_den_)));
  if (has_min_ && min_num_ > max_num_) {
    empty_ = true;
    return;
  }

  g_ = red->g;
  t_ = red->t;
  d_lo_ = red->d_lo;
  mu_lo_ = red->mu_lo;
  mu_hi_ = red->mu_hi;
  // Centre c_i = sred_i + sum_{j>i} mu(j,i) sred_j, bracketed in fp30.
  c0_lo_.resize(n_);
  c0_hi_.resize(n_);
  for (int i = 0; i < n_; ++i) {
    i128 lo = static_cast<i128>(shift_num_[i]) * kOne;
    i128 hi = lo;
    for (int j = i + 1; j < n_; ++j) {
      const i128 sj = shift_num_[j];
      lo += sj * (sj >= 0 ? mu_lo_[j * n_ + i] : mu_hi_[j * n_ + i]);
      hi += sj * (sj >= 0 ? mu_hi_[j * n_ + i] : mu_lo_[j * n_ + i]);
    }
    c0_lo_[i] = floor_div(lo, e_);
    c0_hi_[i] = ceil_div(hi, e_);
  }
  // Budget in reduced Gram units, fixed point 2^60.
  budget_fp60_ = to_i128(ceil_of(max_norm * Rational(red->gs) * Rational(Integer(1) << 60)));
}

Rational EllipsoidEnumerator::norm(i128 norm_num) const {
  bool neg = norm_num < 0;
  u128 v = neg ? static_cast<u128>(-norm_num) : static_cast<u128>(norm_num);
  Integer z = Integer(static_cast<unsigned long>(v >> 64));
  z <<= 64;
  z += Integer(static_cast<unsigned long>(v & ~std::uint64_t{0}));
  if (neg) z = -z;
  Rational r(z, norm_den_);
  r.canonicalize();
  return r;
}

void EllipsoidEnumerator::init_state(State& s) const {
  s.x.assign(n_, 0);
  s.z.assign(n_, 0);
  s.rem.assign(n_, 0);
  s.exact.assign(n_, 0);
  s.lin.assign(n_ * n_, 0);
  s.cen_lo.assign(n_ * n_, 0);
  s.cen_hi.assign(n_ * n_, 0);
  s.acc.assign(n_ * out_dim_, 0);
  s.y.assign(out_dim_, 0);
  const int top = n_ - 1;
  s.rem[top] = budget_fp60_;
  for (int k = 0; k < n_; ++k) {
    s.cen_lo[top * n_ + k] = c0_lo_[k];
    s.cen_hi[top * n_ + k] = c0_hi_[k];
  }
}

std::int64_t EllipsoidEnumerator::nearest(const State& s, int level) const {
  const i128 mid2 = static_cast<i128>(s.cen_lo[level * n_ + level]) + s.cen_hi[level * n_ + level];
  // round(-mid / 2^30) with mid = mid2 / 2
  return floor_div(-mid2 + kOne, 2 * static_cast<i128>(kOne));
}

namespace {

inline i128 term_bound(std::int64_t d_lo, std::int64_t clo, std::int64_t chi, std::int64_t x) {
  const i128 tlo = static_cast<i128>(x) * kOne + clo;
  const i128 thi = static_cast<i128>(x) * kOne + chi;
  const i128 dist = tlo > 0 ? tlo : (thi < 0 ? -thi : 0);
  return ((static_cast<i128>(d_lo) * dist) >> kFrac) * dist;
}

}  // namespace

bool EllipsoidEnumerator::feasible(const State& s, int level, std::int64_t x) const {
  return term_bound(d_lo_[level], s.cen_lo[level * n_ + level], s.cen_hi[level * n_ + level], x) <= s.rem[level];
}

bool EllipsoidEnumerator::apply(State& s, int level, std::int64_t x) const {
  const int i = level;
  const i128 rem = s.rem[i] - term_bound(d_lo_[i], s.cen_lo[i * n_ + i], s.cen_hi[i * n_ + i], x);
  if (rem < 0) return false;
  const i128 z = static_cast<i128>(e_) * x + shift_num_[i];
  s.x[i] = x;
  s.z[i] = static_cast<std::int64_t>(z);
  const int p = i - 1;
  s.rem[p] = rem;
  s.exact[p] = s.exact[i] + static_cast<i128>(g_[i * n_ + i]) * z * z + 2 * z * s.lin[i * n_ + i];
  const std::int64_t* grow = &g_[i * n_];
  const i128* lin_in = &s.lin[i * n_];
  i128* lin_out = &s.lin[p * n_];
  for (int k = 0; k < i; ++k) lin_out[k] = lin_in[k] + grow[k] * z;
  // The sign of x decides which end of each mu interval bounds the centre.
  const std::int64_t* m_lo = x >= 0 ? &mu_lo_[i * n_] : &mu_hi_[i * n_];
  const std::int64_t* m_hi = x >= 0 ? &mu_hi_[i * n_] : &mu_lo_[i * n_];
  const std::int64_t* cl_in = &s.cen_lo[i * n_];
  const std::int64_t* ch_in = &s.cen_hi[i * n_];
  std::int64_t* cl_out = &s.cen_lo[p * n_];
  std::int64_t* ch_out = &s.cen_hi[p * n_];
  for (int k = 0; k < i; ++k) {
    cl_out[k] = cl_in[k] + m_lo[k] * x;
    ch_out[k] = ch_in[k] + m_hi[k] * x;
  }
  for (int c = 0; c < out_dim_; ++c) s.acc[p * out_dim_ + c] = s.acc[i * out_dim_ + c] + x * t_[i * out_dim_ + c];
  return true;
}

std::vector<EllipsoidEnumerator::Task> EllipsoidEnumerator::split(int depth) const {
  depth = std::clamp(depth, 0, n_ - 1);
  std::vector<Task> tasks;
  if (empty_) return tasks;
  State s;
  init_state(s);
  std::vector<std::int64_t> prefix;
  std::function<void(int)> walk = [&](int level) {
    if (static_cast<int>(prefix.size()) == depth) {
      tasks.push_back(Task{prefix});
      return;
    }
    const std::int64_t x0 = nearest(s, level);
    for (int dir : {1, -1}) {
      for (std::int64_t x = dir > 0 ? x0 : x0 - 1;; x += dir) {
        if (!apply(s, level, x)) break;
        prefix.push_back(x);
        walk(level - 1);
        prefix.pop_back();
      }
    }
  };
  walk(n_ - 1);
  return tasks;
}

std::uint64_t EllipsoidEnumerator::count() const {
  std::uint64_t c = 0;
  for_each([&](std::span<const std::int64_t>, i128) { ++c; });
  return c;
}

std::vector<IntVector> enumerate_by_norm(const la::QMatrix& gram, const Rational& max_norm,
                                         const std::vector<Rational>& shift, const Rational& min_norm) {
  EllipsoidEnumerator e(gram, max_norm, shift, min_norm);
  std::vector<IntVector> out;
  e.for_each([&](std::span<const std::int64_t> y, i128) { out.emplace_back(y.begin(), y.end()); });
  std::sort(out.begin(), out.end());
  return out;
}

LorentzianSlice::LorentzianSlice(const la::QMatrix& gram, const std::vector<Rational>& u, const Rational& pairing,
                                 const Rational& norm_min, const Rational& norm_max) {
  n_ = static_cast<int>(gram.rows());
  if (!la::is_symmetric(gram) || static_cast<int>(u.size()) != n_) throw InputError("slice dimensions do not match");
  if (n_ < 2) throw InputError("slice needs rank at least 2");
  const auto w = la::row_times(u, gram);
  Rational uu = 0;
  for (int i = 0; i < n_; ++i) uu += w[i] * u[i];
  if (uu >= 0) throw InputError("reference vector is not timelike");

  Integer den = 1;
  for (const auto& x : w) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den_mpz_t());
  std::vector<Integer> wi(n_);
  Integer g = 0;
  for (int i = 0; i < n_; ++i) {
    wi[i] = Rational(w[i] * Rational(den)).get_num();
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), wi[i].get_mpz_t());
  }
  for (auto& x : wi) x /= g;
  // (v,u) = (g/den) * (wi . v)
  const Rational target = pairing * Rational(den) / Rational(g);
  if (!is_integral(target)) return;
  const la::ZMatrix um = la::column_reduction(wi);
  const Integer t = target.get_num();

  const int m = n_ - 1;
  v0_.resize(n_);
  k_.resize(n_ * m);
  std::vector<Rational> v0q(n_);
  la::QMatrix kq(n_, m);
  for (int i = 0; i < n_; ++i) {
    v0_[i] = to_int64(um(i, 0) * t);
    v0q[i] = Rational(um(i, 0) * t);
    for (int j = 0; j < m; ++j) {
      k_[i * m + j] = to_int64(um(i, j + 1));
      kq(i, j) = Rational(um(i, j + 1));
    }
  }
  const la::QMatrix gk = kq.transpose() * gram * kq;
  const auto gv0 = la::row_times(v0q, gram);
  const auto b = la::row_times(gv0, kq);
  const auto sigma = la::row_times(b, la::inverse(gk));
  Rational v0n = 0, ss = 0;
  for (int i = 0; i < n_; ++i) v0n += gv0[i] * v0q[i];
  for (int j = 0; j < m; ++j) ss += sigma[j] * b[j];
  offset_ = v0n - ss;
  if (norm_max - offset_ < 0) return;
  inner_ = std::make_unique<EllipsoidEnumerator>(gk, norm_max - offset_, sigma, norm_min - offset_);
}

std::vector<IntVector> LorentzianSlice::collect() const {
  std::vector<IntVector> out;
  for_each([&](std::span<const std::int64_t> v, const Rational&) { out.emplace_back(v.begin(), v.end()); });
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace fbm::en
