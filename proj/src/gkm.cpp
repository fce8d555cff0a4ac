#include "fbm/gkm.hpp"

#include <omp.h>
#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>

#include "fbm/characters.hpp"
#include "fbm/enumerate.hpp"
#include "fbm/errors.hpp"

namespace fbm::gkm {
namespace {

constexpr int kDim = 16;

struct Model {
  lat::Lattice bw, dual;
  std::vector<std::int64_t> a_dual;  // 16 x 16, a = y * a_dual
  std::vector<std::int64_t> a_bw;    // 16 x 16, a = x * a_bw
  la::QMatrix a_dual_inv, a_bw_inv;
  std::vector<std::uint8_t> in_bw;   // by parity pattern of dual coordinates
  la::QMatrix lprime_gram;
  std::shared_ptr<const en::GramReduction> dual_red, bw_red;
  // Integer inverses: a * inv_num / inv_den gives lattice coordinates.
  std::vector<std::int64_t> dual_inv_num, bw_inv_num;
  std::int64_t dual_inv_den = 1, bw_inv_den = 1;
};

void integer_inverse(const la::QMatrix& inv, std::vector<std::int64_t>& num, std::int64_t& den) {
  Integer d = 1;
  for (std::size_t i = 0; i < inv.rows(); ++i)
    for (std::size_t j = 0; j < inv.cols(); ++j) mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), inv(i, j).get_den_mpz_t());
  den = to_int64(d);
  num.resize(inv.rows() * inv.cols());
  for (std::size_t i = 0; i < inv.rows(); ++i)
    for (std::size_t j = 0; j < inv.cols(); ++j) num[i * inv.cols() + j] = to_int64(Rational(inv(i, j) * Rational(d)).get_num());
}

std::vector<std::int64_t> doubled_rows(const la::QMatrix& basis) {
  std::vector<std::int64_t> out(kDim * kDim);
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) {
      Rational d = basis(i, j) * 2;
      if (!is_integral(d)) throw ConsistencyError("Barnes-Wall basis outside (1/2)Z^16");
      out[i * kDim + j] = to_int64(d.get_num());
    }
  return out;
}

la::QMatrix as_matrix(const std::vector<std::int64_t>& m) {
  la::QMatrix q(kDim, kDim);
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) q(i, j) = Rational(Integer(static_cast<long>(m[i * kDim + j])));
  return q;
}

Model build_model() {
  Model m;
  m.bw = lat::barnes_wall_16();
  m.dual = lat::dual_lattice(m.bw);
  m.a_dual = doubled_rows(*m.dual.basis);
  m.a_bw = doubled_rows(*m.bw.basis);
  m.a_dual_inv = la::inverse(as_matrix(m.a_dual));
  m.a_bw_inv = la::inverse(as_matrix(m.a_bw));
  // s = y * D lies in Lambda16 iff y * G^-1 is integral, and 2 G^-1 is integral.
  const la::QMatrix& ginv = m.dual.gram;
  std::vector<std::int64_t> twice(kDim * kDim);
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) {
      Rational t = ginv(i, j) * 2;
      if (!is_integral(t)) throw ConsistencyError("Lambda16'/Lambda16 is not 2-elementary");
      twice[i * kDim + j] = to_int64(t.get_num());
    }
  m.in_bw.resize(1u << kDim);
  for (std::uint32_t bits = 0; bits < (1u << kDim); ++bits) {
    bool ok = true;
    for (int j = 0; j < kDim && ok; ++j) {
      std::int64_t s = 0;
      for (int i = 0; i < kDim; ++i)
        if ((bits >> i) & 1) s += twice[i * kDim + j];
      ok = s % 2 == 0;
    }
    m.in_bw[bits] = ok;
  }
  m.lprime_gram = la::QMatrix(kDim + 2, kDim + 2);
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) m.lprime_gram(i, j) = ginv(i, j);
  m.lprime_gram(kDim, kDim + 1) = make_rational(-1, 2);
  m.lprime_gram(kDim + 1, kDim) = make_rational(-1, 2);
  m.dual_red = en::reduce_gram(m.dual.gram);
  m.bw_red = en::reduce_gram(m.bw.gram);
  integer_inverse(m.a_dual_inv, m.dual_inv_num, m.dual_inv_den);
  integer_inverse(m.a_bw_inv, m.bw_inv_num, m.bw_inv_den);
  return m;
}

const Model& model() {
  static const Model m = build_model();
  return m;
}

std::array<std::int64_t, kDim> times(std::span<const std::int64_t> y, const std::vector<std::int64_t>& rows) {
  std::array<std::int64_t, kDim> a{};
  for (int i = 0; i < kDim; ++i) {
    if (y[i] == 0) continue;
    for (int j = 0; j < kDim; ++j) a[j] += y[i] * rows[i * kDim + j];
  }
  return a;
}

std::vector<Rational> times(const std::vector<Rational>& a, const la::QMatrix& m) { return la::row_times(a, m); }

// -(scale * a / div) in the coordinates given by an integer inverse.
std::vector<Rational> negated_centre(const std::array<std::int64_t, 16>& a, std::int64_t scale, std::int64_t div,
                                     const std::vector<std::int64_t>& inv_num, std::int64_t inv_den) {
  std::vector<Rational> c(16);
  for (int j = 0; j < 16; ++j) {
    std::int64_t s = 0;
    for (int i = 0; i < 16; ++i) s += a[i] * inv_num[i * 16 + j];
    c[j] = make_rational(-scale * s, div * inv_den);
  }
  return c;
}

std::vector<Rational> to_q(const std::array<std::int64_t, kDim>& a, std::int64_t div = 1) {
  std::vector<Rational> out(kDim);
  for (int i = 0; i < kDim; ++i) out[i] = make_rational(a[i], div);
  return out;
}

bool all_integral(const std::vector<Rational>& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& r) { return is_integral(r); });
}

std::int64_t dot(const std::array<std::int64_t, kDim>& x, const std::array<std::int64_t, kDim>& y) {
  std::int64_t s = 0;
  for (int i = 0; i < kDim; ++i) s += x[i] * y[i];
  return s;
}

std::uint32_t parity_bits(std::span<const std::int64_t> y) {
  std::uint32_t bits = 0;
  for (int i = 0; i < kDim; ++i)
    if (y[i] & 1) bits |= 1u << i;
  return bits;
}

std::string half_string(std::int64_t twice) { return fbm::to_string(make_rational(twice, 2)); }

// ---- weight -8 functions, grown on demand ----

const qs::WeightMinus8& weight_minus8(int exp48) {
  static std::mutex mu;
  static std::unique_ptr<qs::WeightMinus8> w;
  static int order48 = -1;
  std::lock_guard lock(mu);
  if (!w || exp48 > order48) {
    order48 = std::max({exp48, 2 * order48, 8 * qs::kGrid});
    w = std::make_unique<qs::WeightMinus8>(qs::weight_minus8_functions(order48));
  }
  return *w;
}

// ---- disk cache ----

std::mutex cache_mu;
std::optional<std::string> cache_directory;
bool cache_initialized = false;

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string cache_path(const std::string& dir, const std::string& key) {
  std::ostringstream os;
  os << std::hex << fnv1a(key);
  return (std::filesystem::path(dir) / ("fbm-" + os.str() + ".txt")).string();
}

std::string shell_key(int k) { return "fbm-gkm-v1|BW16'|shells|" + std::to_string(k); }

void write_table(const ShellTable& t, std::ostream& os) {
  os << shell_key(t.max_norm) << '\n';
  for (int k = 0; k <= t.max_norm; ++k)
    for (int c = 0; c < 2; ++c) {
      os << k << ' ' << c << ' ' << t.counts[k][c];
      if (t.reps[k][c]) {
        os << ' ';
        for (int i = 0; i < kDim; ++i) os << (i ? "," : "") << t.reps[k][c]->a[i];
      }
      os << '\n';
    }
}

std::optional<ShellTable> read_table(std::istream& is, int max_norm) {
  std::string line;
  if (!std::getline(is, line) || line != shell_key(max_norm)) return std::nullopt;
  ShellTable t;
  t.max_norm = max_norm;
  t.counts.assign(max_norm + 1, {0, 0});
  t.reps.assign(max_norm + 1, {});
  for (int k = 0; k <= max_norm; ++k)
    for (int c = 0; c < 2; ++c) {
      if (!std::getline(is, line)) return std::nullopt;
      std::istringstream ls(line);
      int kk = -1, cc = -1;
      std::uint64_t n = 0;
      if (!(ls >> kk >> cc >> n) || kk != k || cc != c) return std::nullopt;
      t.counts[k][c] = n;
      std::string vec;
      if (ls >> vec) {
        RootVector r;
        std::istringstream vs(vec);
        std::string item;
        for (int i = 0; i < kDim; ++i) {
          if (!std::getline(vs, item, ',')) return std::nullopt;
          r.a[i] = std::stoll(item);
        }
        t.reps[k][c] = r;
      }
      if ((n > 0) != t.reps[k][c].has_value()) return std::nullopt;
    }
  return t;
}

ShellTable compute_table(int max_norm) {
  const Model& m = model();
  struct Acc {
    std::vector<std::array<std::uint64_t, 2>> counts;
    std::vector<std::array<std::optional<std::array<std::int64_t, kDim>>, 2>> reps;
  };
  Acc init{std::vector<std::array<std::uint64_t, 2>>(max_norm + 1, {0, 0}),
           std::vector<std::array<std::optional<std::array<std::int64_t, kDim>>, 2>>(max_norm + 1)};
  en::EllipsoidEnumerator e(m.dual.gram, max_norm);
  const Integer& den = e.norm_denominator();
  if (!den.fits_slong_p()) throw ResourceError("norm denominator too large");
  const en::i128 d = den.get_si();
  auto visit = [&](Acc& acc, std::span<const std::int64_t> y, en::i128 num) {
    const int k = static_cast<int>(num / d);
    const int c = m.in_bw[parity_bits(y)];
    ++acc.counts[k][c];
    if (!acc.reps[k][c]) acc.reps[k][c] = times(y, m.a_dual);
  };
  const int depth = std::min(3, e.dim() - 1);
  auto parts = e.map_tasks_parallel(depth, init, visit);
  ShellTable t;
  t.max_norm = max_norm;
  t.counts.assign(max_norm + 1, {0, 0});
  t.reps.assign(max_norm + 1, {});
  for (const auto& p : parts)
    for (int k = 0; k <= max_norm; ++k)
      for (int c = 0; c < 2; ++c) {
        t.counts[k][c] += p.counts[k][c];
        if (!t.reps[k][c] && p.reps[k][c]) {
          RootVector r;
          r.a = *p.reps[k][c];
          t.reps[k][c] = r;
        }
      }
  return t;
}

// ---- simple roots ----

RootVector norm1_root(const std::array<std::int64_t, kDim>& a) {
  RootVector r;
  r.a = a;
  r.m2 = 1;
  r.n2 = dot(a, a) / 8 - 1;
  return r;
}

RootVector norm2_root(const std::array<std::int64_t, kDim>& a) {
  RootVector r;
  r.a = a;
  r.m2 = 2;
  r.n2 = (dot(a, a) / 8 - 2) / 2;
  return r;
}

bool by_height(const RootVector& x, const RootVector& y) {
  const auto tx = t_exponent(x), ty = t_exponent(y);
  return tx != ty ? tx < ty : x < y;
}

const std::vector<RootVector>& scan_roots() {
  static const std::vector<RootVector> r = simple_roots(make_rational(kScanHeight2, 2));
  return r;
}

void consider(std::optional<std::pair<std::int64_t, RootVector>>& best, std::int64_t p, const RootVector& r) {
  if (p <= 0) return;
  if (!best || p > best->first || (p == best->first && r < best->second)) best = std::pair(p, r);
}

// Root classes (m2, n2, s^2, s in Lambda16) with 2 * height = e2 and
// norm <= 2, with their sizes.
template <class F>
void for_each_root_class(int e2, int max_norm, F&& f) {
  const ShellTable& t = shell_table(max_norm);
  for (std::int64_t m2 = -e2 - 2; m2 <= e2 + 2; ++m2) {
    const std::int64_t n2 = e2 - 2 * m2;
    const std::int64_t p = m2 * n2;
    if (p < -2) continue;
    for (std::int64_t k = 0; k <= std::min<std::int64_t>(2 + p, max_norm); ++k)
      for (int c = 0; c < 2; ++c) {
        if (t.counts[k][c] == 0) continue;
        RootVector r = *t.reps[k][c];
        r.m2 = m2;
        r.n2 = n2;
        f(r, t.counts[k][c]);
      }
  }
}

int shells_needed(int e2) { return 2 + (e2 * e2) / 8; }

Integer binomial(const Integer& n, unsigned long k) {
  Integer r;
  mpz_bin_ui(r.get_mpz_t(), n.get_mpz_t(), k);
  return r;
}

// prod (1 - t^e)^m through t^bound, as a t-series on the /48 grid.
qs::QSeries one_minus_power(int e, const Integer& m, int bound) {
  std::map<int, Rational> terms;
  for (unsigned long j = 0; static_cast<int>(j) * e <= bound; ++j) {
    Integer b = binomial(m, j);
    if (j % 2) b = -b;
    if (b != 0) terms[static_cast<int>(j) * e * qs::kGrid] = Rational(b);
  }
  return qs::QSeries(std::move(terms), bound * qs::kGrid + 1);
}

}  // namespace

// ---- RootVector ----

bool RootVector::is_zero() const {
  return m2 == 0 && n2 == 0 && std::all_of(a.begin(), a.end(), [](std::int64_t x) { return x == 0; });
}

RootVector operator+(const RootVector& x, const RootVector& y) {
  RootVector r;
  for (int i = 0; i < kDim; ++i) r.a[i] = x.a[i] + y.a[i];
  r.m2 = x.m2 + y.m2;
  r.n2 = x.n2 + y.n2;
  return r;
}

RootVector operator-(const RootVector& x, const RootVector& y) { return x + (-1) * y; }

RootVector operator*(std::int64_t k, const RootVector& x) {
  RootVector r;
  for (int i = 0; i < kDim; ++i) r.a[i] = k * x.a[i];
  r.m2 = k * x.m2;
  r.n2 = k * x.n2;
  return r;
}

std::int64_t pairing8(const RootVector& x, const RootVector& y) {
  return dot(x.a, y.a) - 4 * (x.m2 * y.n2 + y.m2 * x.n2);
}

std::int64_t norm8(const RootVector& x) { return pairing8(x, x); }
Rational pairing(const RootVector& x, const RootVector& y) { return make_rational(pairing8(x, y), 8); }
Rational norm(const RootVector& x) { return make_rational(norm8(x), 8); }

RootVector weyl_vector() {
  RootVector r;
  r.n2 = 1;
  return r;
}

RootVector reference_vector() {
  RootVector r;
  r.m2 = 1;
  r.n2 = 2;
  return r;
}

Rational height(const RootVector& v) { return make_rational(v.n2 + 2 * v.m2, 2); }
std::int64_t t_exponent(const RootVector& v) { return 2 * v.n2 + 4 * v.m2; }

bool in_dual(const RootVector& v) { return all_integral(times(to_q(v.a), model().a_dual_inv)); }

bool in_lattice(const RootVector& v) {
  return v.m2 % 2 == 0 && v.n2 % 2 == 0 && in_dual(v) && all_integral(times(to_q(v.a), model().a_bw_inv));
}

std::string to_string(const RootVector& v) {
  std::ostringstream os;
  os << '(';
  if (std::all_of(v.a.begin(), v.a.end(), [](std::int64_t x) { return x == 0; })) {
    os << '0';
  } else {
    os << '[';
    for (int i = 0; i < kDim; ++i) os << (i ? "," : "") << v.a[i];
    os << ']';
  }
  os << ',' << half_string(v.m2) << ',' << half_string(v.n2) << ')';
  return os.str();
}

RootVector parse_root_vector(const std::string& text) {
  std::vector<std::int64_t> vals;
  std::istringstream is(text);
  std::string item;
  while (std::getline(is, item, ',')) {
    std::size_t used = 0;
    long long x = 0;
    try {
      x = std::stoll(item, &used);
    } catch (const std::exception&) {
      throw InputError("malformed vector entry '" + item + "'");
    }
    if (used != item.size()) throw InputError("malformed vector entry '" + item + "'");
    vals.push_back(x);
  }
  if (vals.size() != kDim + 2) throw InputError("a vector needs 18 integers a1..a16,m2,n2");
  RootVector r;
  std::copy_n(vals.begin(), kDim, r.a.begin());
  r.m2 = vals[kDim];
  r.n2 = vals[kDim + 1];
  if (!in_dual(r)) throw InputError("vector " + to_string(r) + " is not in L'");
  return r;
}

const la::QMatrix& dual_gram() { return model().lprime_gram; }

IntVector coordinates(const RootVector& v) {
  const auto y = times(to_q(v.a), model().a_dual_inv);
  if (!all_integral(y)) throw InputError("vector " + to_string(v) + " is not in L'");
  IntVector c(kDim + 2);
  for (int i = 0; i < kDim; ++i) c[i] = to_int64(y[i].get_num());
  c[kDim] = v.m2;
  c[kDim + 1] = v.n2;
  return c;
}

RootVector from_coordinates(std::span<const std::int64_t> c) {
  if (c.size() != kDim + 2) throw InputError("L' coordinates need 18 entries");
  RootVector r;
  r.a = times(c.first(kDim), model().a_dual);
  r.m2 = c[kDim];
  r.n2 = c[kDim + 1];
  return r;
}

// ---- multiplicities ----

Integer root_multiplicity(const RootVector& alpha) {
  if (alpha.is_zero()) throw InputError("alpha = 0: use the Cartan dimension");
  if (!in_dual(alpha)) throw InputError("vector " + to_string(alpha) + " is not in L'");
  const Rational n = norm(alpha);
  if (!is_integral(n)) throw ConsistencyError("L' vector with non-integral norm");
  const int exp48 = to_int64(Rational(-n * 24).get_num());
  if (exp48 < -qs::kGrid) return 0;
  const auto& w = weight_minus8(exp48);
  return ch::f_gamma(in_lattice(alpha), n, w).integer_coefficient(exp48);
}

Integer h_coefficient(const Rational& n) {
  if (!is_integral(n) || n < -1) return 0;
  const int e = to_int64(n.get_num());
  return weight_minus8(e * qs::kGrid).c(e);
}

int cartan_dimension() {
  const auto in = la::inertia(dual_gram());
  if (in.zero != 0) throw ConsistencyError("degenerate Gram matrix for L'");
  return in.positive + in.negative;
}

std::pair<int, int> signature() {
  const auto in = la::inertia(dual_gram());
  return {in.positive, in.negative};
}

// ---- simple roots ----

std::vector<RootVector> simple_roots(const Rational& height_bound) {
  if (height_bound <= 0) throw InputError("height bound must be positive");
  const Model& m = model();
  std::vector<RootVector> out;
  // Norm 1: height (s^2 + 1)/2.
  const Rational k1 = height_bound * 2 - 1;
  if (k1 >= 0)
    for (const auto& y : en::enumerate_by_norm(m.dual.gram, k1)) out.push_back(norm1_root(times(y, m.a_dual)));
  // Norm 2: height (s^2 - 2)/4 + 2, s in Lambda16 with s^2 = 2 mod 4.
  const Rational k2 = height_bound * 4 - 6;
  if (k2 >= 0)
    for (const auto& x : en::enumerate_by_norm(m.bw.gram, k2)) {
      const auto a = times(x, m.a_bw);
      if ((dot(a, a) / 8) % 4 == 2) out.push_back(norm2_root(a));
    }
  const RootVector rho = weyl_vector();
  for (const auto& r : out)
    if (2 * pairing8(rho, r) != -norm8(r)) throw ConsistencyError("simple root " + to_string(r) + " off the rho wall");
  std::sort(out.begin(), out.end(), by_height);
  return out;
}

std::vector<std::pair<RootVector, Integer>> imaginary_simple_roots(int n_max) {
  if (n_max < 1) throw InputError("n_max must be at least 1");
  std::vector<std::pair<RootVector, Integer>> out;
  for (int n = 1; n <= n_max; ++n) {
    const RootVector v = n * weyl_vector();
    out.emplace_back(v, root_multiplicity(v));
  }
  return out;
}

// ---- chamber reduction ----

RootVector reflect(const RootVector& v, const RootVector& alpha) {
  const std::int64_t n = norm8(alpha);
  if (n <= 0) throw InputError("reflection needs a positive norm vector");
  const std::int64_t p = 2 * pairing8(v, alpha);
  if (p % n != 0) throw InputError("reflection in " + to_string(alpha) + " leaves L'");
  return v - (p / n) * alpha;
}

std::optional<RootVector> positive_simple_root(const RootVector& v) {
  const Model& m = model();
  std::optional<std::pair<std::int64_t, RootVector>> best;
  const bool s_zero = std::all_of(v.a.begin(), v.a.end(), [](std::int64_t x) { return x == 0; });
  if (v.m2 > 0) {
    const std::int64_t av2 = dot(v.a, v.a);
    // If a_v/m2 is a lattice point, the norm 1 root there has the largest
    // possible pairing K1; norm 2 roots reach at most K2.
    const Rational k1 = make_rational(av2, 2 * v.m2) + Rational(4 * v.m2 - 4 * v.n2);
    const Rational k2 = make_rational(av2, v.m2) + Rational(4 * v.m2 - 8 * v.n2);
    if (k1 > 0 && k1 >= k2 && std::all_of(v.a.begin(), v.a.end(), [&](std::int64_t x) { return x % v.m2 == 0; })) {
      RootVector c;
      for (int i = 0; i < kDim; ++i) c.a[i] = v.a[i] / v.m2;
      if (in_dual(c)) {
        const RootVector alpha = norm1_root(c.a);
        if (k1 > k2) return alpha;
        RootVector d;
        for (int i = 0; i < kDim; ++i) d.a[i] = 2 * c.a[i];
        const std::int64_t kd = dot(d.a, d.a) / 8;
        if (kd % 4 != 2 || !in_lattice(d)) return alpha;
        return std::min(alpha, norm2_root(d.a));
      }
    }
    // Norm 1: 8 (v, alpha) = -(m2/2)|a - a_v/m2|^2 + a_v^2/(2 m2) + 4 m2 - 4 n2.
    const Rational r1 = make_rational(2, v.m2) * (make_rational(av2, 2 * v.m2) + Rational(4 * v.m2 - 4 * v.n2));
    if (r1 > 0) {
      en::EllipsoidEnumerator e(m.dual_red, r1 / 8, negated_centre(v.a, 1, v.m2, m.dual_inv_num, m.dual_inv_den));
      e.for_each([&](std::span<const std::int64_t> y, en::i128) {
        const auto a = times(y, m.a_dual);
        const std::int64_t k = dot(a, a) / 8;
        consider(best, dot(v.a, a) - 4 * v.m2 * k + 4 * v.m2 - 4 * v.n2, norm1_root(a));
      });
    }
    // Norm 2: 8 (v, alpha) = -(m2/4)|a - 2 a_v/m2|^2 + a_v^2/m2 + 4 m2 - 8 n2.
    const Rational r2 = make_rational(4, v.m2) * (make_rational(av2, v.m2) + Rational(4 * v.m2 - 8 * v.n2));
    if (r2 > 0) {
      en::EllipsoidEnumerator e(m.bw_red, r2 / 8, negated_centre(v.a, 2, v.m2, m.bw_inv_num, m.bw_inv_den));
      e.for_each([&](std::span<const std::int64_t> x, en::i128) {
        const auto a = times(x, m.a_bw);
        const std::int64_t k = dot(a, a) / 8;
        if (k % 4 != 2) return;
        consider(best, dot(v.a, a) - 2 * v.m2 * k + 4 * v.m2 - 8 * v.n2, norm2_root(a));
      });
    }
    if (!best) return std::nullopt;
    return best->second;
  }
  // Multiples of rho (and 0) pair nonpositively with every simple root.
  if (v.m2 == 0 && s_zero && v.n2 >= 0) return std::nullopt;
  const auto& roots = scan_roots();
  for (std::size_t i = 0; i < roots.size();) {
    std::size_t j = i;
    while (j < roots.size() && t_exponent(roots[j]) == t_exponent(roots[i])) {
      consider(best, pairing8(v, roots[j]), roots[j]);
      ++j;
    }
    if (best) return best->second;
    i = j;
  }
  throw NonterminationError("no simple root of height <= " + half_string(kScanHeight2) + " pairs positively with " +
                            to_string(v) + "; the input is outside the cone of rho");
}

namespace {

// Pairings of vectors below this bound fit in 64 bits.
constexpr std::int64_t kMaxEntry = std::int64_t{1} << 28;

bool small_entries(const RootVector& v) {
  auto ok = [](std::int64_t x) { return x > -kMaxEntry && x < kMaxEntry; };
  return std::all_of(v.a.begin(), v.a.end(), ok) && ok(v.m2) && ok(v.n2);
}

}  // namespace

ChamberReduction reduce_to_chamber(const RootVector& v, std::uint64_t max_steps) {
  if (!small_entries(v)) throw InputError("vector " + to_string(v) + " has entries beyond 2^28");
  ChamberReduction r;
  r.input = v;
  r.reduced = v;
  r.outside_guarantee = !(norm8(v) <= 0 && pairing8(v, reference_vector()) < 0);
  for (std::uint64_t step = 0;; ++step) {
    auto alpha = positive_simple_root(r.reduced);
    if (!alpha) return r;
    if (step >= max_steps)
      throw NonterminationError("chamber reduction of " + to_string(v) + " exceeded " + std::to_string(max_steps) +
                                " steps");
    r.reduced = reflect(r.reduced, *alpha);
    if (!small_entries(r.reduced))
      throw NonterminationError("chamber reduction of " + to_string(v) + " left the 2^28 box after " +
                                std::to_string(step + 1) + " steps");
    r.word.push_back(*alpha);
    r.parity = -r.parity;
  }
}

std::vector<RootVector> roots_at_height(const Rational& h, const Rational& norm_min, const Rational& norm_max) {
  if (h <= 0) throw InputError("height must be positive");
  std::vector<Rational> u;
  for (auto x : coordinates(reference_vector())) u.push_back(Rational(Integer(static_cast<long>(x))));
  en::LorentzianSlice slice(dual_gram(), u, Rational(-h), norm_min, norm_max);
  std::vector<RootVector> out;
  slice.for_each([&](std::span<const std::int64_t> c, const Rational&) { out.push_back(from_coordinates(c)); });
  std::sort(out.begin(), out.end());
  return out;
}

// ---- shell tables ----

void set_cache_dir(std::optional<std::string> dir) {
  std::lock_guard lock(cache_mu);
  cache_directory = std::move(dir);
  cache_initialized = true;
}

std::optional<std::string> cache_dir() {
  std::lock_guard lock(cache_mu);
  if (!cache_initialized) {
    if (const char* env = std::getenv("FBM_CACHE_DIR"); env && *env) cache_directory = env;
    cache_initialized = true;
  }
  return cache_directory;
}

void write_shell_table(const ShellTable& t, std::ostream& os) { write_table(t, os); }
std::optional<ShellTable> read_shell_table(std::istream& is, int max_norm) { return read_table(is, max_norm); }

const ShellTable& shell_table(int max_norm) {
  if (max_norm < 0) throw InputError("shell bound must be nonnegative");
  if (max_norm > kShellCap) throw ResourceError("shell tables are limited to norm " + std::to_string(kShellCap));
  static std::mutex mu;
  static std::map<int, std::unique_ptr<ShellTable>> tables;
  std::lock_guard lock(mu);
  if (auto it = tables.find(max_norm); it != tables.end()) return *it->second;
  auto t = std::make_unique<ShellTable>();
  if (auto it = tables.lower_bound(max_norm); it != tables.end()) {
    *t = *it->second;
    t->max_norm = max_norm;
    t->counts.resize(max_norm + 1);
    t->reps.resize(max_norm + 1);
  } else {
    const auto dir = cache_dir();
    std::optional<ShellTable> loaded;
    if (dir) {
      std::ifstream in(cache_path(*dir, shell_key(max_norm)));
      if (in) loaded = read_table(in, max_norm);
    }
    *t = loaded ? std::move(*loaded) : compute_table(max_norm);
    if (dir && !loaded) {
      std::error_code ec;
      std::filesystem::create_directories(*dir, ec);
      const std::string path = cache_path(*dir, shell_key(max_norm));
      const std::string tmp = path + ".tmp" + std::to_string(::getpid());
      {
        std::ofstream out(tmp);
        write_table(*t, out);
      }
      std::filesystem::rename(tmp, path, ec);
      if (ec) std::filesystem::remove(tmp, ec);
    }
  }
  return *tables.emplace(max_norm, std::move(t)).first->second;
}

// ---- Weyl orbit of rho ----

std::vector<OrbitPoint> weyl_orbit_points(const Rational& bound, bool parallel) {
  if (bound > Rational(kDenominatorCap, 4))
    throw ResourceError("orbit enumeration is limited to height " + fbm::to_string(Rational(kDenominatorCap, 4)));
  const Model& m = model();
  std::vector<RootVector> candidates;
  const RootVector rho = weyl_vector();
  if (height(rho) <= bound) candidates.push_back(rho);
  // Primitive norm 0 vectors with m > 0: s^2 = 4mn = m2 n2, n2 >= 0.
  std::map<std::int64_t, std::vector<IntVector>> shells;
  for (std::int64_t m2 = 1; height(RootVector{{}, m2, 0}) <= bound; ++m2)
    for (std::int64_t n2 = 0; height(RootVector{{}, m2, n2}) <= bound; ++n2) {
      const std::int64_t k = m2 * n2;
      auto it = shells.find(k);
      if (it == shells.end()) it = shells.emplace(k, en::enumerate_by_norm(m.dual.gram, k, {}, k)).first;
      for (const auto& y : it->second) {
        std::int64_t g = std::gcd(m2, n2);
        for (auto x : y) g = std::gcd(g, x);
        if (g != 1) continue;
        RootVector v;
        v.a = times(y, m.a_dual);
        v.m2 = m2;
        v.n2 = n2;
        candidates.push_back(v);
      }
    }
  std::vector<int> parity(candidates.size(), 0);
  const long count = static_cast<long>(candidates.size());
  std::exception_ptr error;
  auto work = [&](long i) {
    try {
      const auto r = reduce_to_chamber(candidates[i]);
      if (r.reduced == rho) parity[i] = r.parity;
    } catch (...) {
#pragma omp critical
      if (!error) error = std::current_exception();
    }
  };
  if (parallel) {
#pragma omp parallel for schedule(dynamic, 256)
    for (long i = 0; i < count; ++i) work(i);
  } else {
    for (long i = 0; i < count; ++i) work(i);
  }
  if (error) std::rethrow_exception(error);
  std::vector<OrbitPoint> out;
  for (long i = 0; i < count; ++i)
    if (parity[i] != 0) out.push_back(OrbitPoint{candidates[i], parity[i]});
  std::sort(out.begin(), out.end(), [](const OrbitPoint& x, const OrbitPoint& y) { return by_height(x.v, y.v); });
  return out;
}

// ---- denominator identity ----

namespace {

void check_bound(int bound) {
  if (bound < 0) throw InputError("bound must be nonnegative");
  if (bound > kDenominatorCap)
    throw ResourceError("denominator identity is limited to t^" + std::to_string(kDenominatorCap));
}

// Positive roots per t-exponent e, counted with multiplicity.
std::map<int, Integer> product_exponents(int bound) {
  std::map<int, Integer> out;
  if (bound >= 4) shell_table(shells_needed((bound - 2) / 2));
  for (int e = 2; e <= bound - 2; e += 2) {
    const int e2 = e / 2;
    Integer total = 0;
    for_each_root_class(e2, shells_needed(e2), [&](const RootVector& r, std::uint64_t count) {
      total += root_multiplicity(r) * Integer(static_cast<unsigned long>(count));
    });
    out[e] = total;
  }
  return out;
}

}  // namespace

qs::QSeries denominator_product_side(int bound) {
  check_bound(bound);
  const int trunc = bound * qs::kGrid + 1;
  qs::QSeries p = qs::QSeries::monomial(2 * qs::kGrid, 1, trunc);
  for (const auto& [e, mult] : product_exponents(bound)) p = (p * one_minus_power(e, mult, bound)).truncated(trunc);
  return p.truncated(trunc);
}

namespace {

qs::QSeries sum_side_from(const std::vector<OrbitPoint>& points, int bound) {
  const int trunc = bound * qs::kGrid + 1;
  std::map<int, int> net;
  for (const auto& p : points) net[t_exponent(p.v)] += p.parity;
  qs::QSeries total(std::map<int, Rational>{}, trunc);
  for (const auto& [e, sign] : net) {
    if (sign == 0) continue;
    qs::QSeries term = qs::QSeries::monomial(e * qs::kGrid, sign, trunc);
    for (int n = 1; n * e <= bound; ++n) {
      term = (term * one_minus_power(n * e, 8, bound)).truncated(trunc);
      term = (term * one_minus_power(2 * n * e, 8, bound)).truncated(trunc);
    }
    total += term;
  }
  return total.truncated(trunc);
}

}  // namespace

qs::QSeries denominator_sum_side(int bound, bool parallel) {
  check_bound(bound);
  return sum_side_from(weyl_orbit_points(Rational(bound, 4), parallel), bound);
}

DenominatorReport verify_denominator(int bound, bool parallel) {
  check_bound(bound);
  DenominatorReport r;
  r.bound = bound;
  r.product = denominator_product_side(bound);
  const auto points = weyl_orbit_points(Rational(bound, 4), parallel);
  r.sum = sum_side_from(points, bound);
  r.orbit_points = points.size();
  for (const auto& [e, mult] : product_exponents(bound)) r.root_count += mult;
  if (auto d = r.product.first_difference(r.sum)) r.first_difference = *d / qs::kGrid;
  r.equal = !r.first_difference;
  return r;
}

ConsistencyReport exponent_consistency(const Rational& bound) {
  ConsistencyReport rep;
  rep.bound = bound;
  if (bound * 2 > kConsistencyCap2)
    throw ResourceError("exponent consistency is limited to height " + half_string(kConsistencyCap2));
  const int top = to_int64(floor_of(bound * 2));
  if (top >= 1) shell_table(shells_needed(top));
  for (int e2 = 1; e2 <= top; ++e2) {
    for_each_root_class(e2, shells_needed(e2), [&](const RootVector& r, std::uint64_t count) {
      const Rational n = norm(r);
      Integer expected = h_coefficient(-n);
      if (in_lattice(r)) expected += h_coefficient(-n / 2);
      const Integer got = root_multiplicity(r);
      ++rep.classes_checked;
      rep.roots_checked += count;
      if (got != expected && rep.holds) {
        rep.holds = false;
        rep.counterexample = to_string(r) + " norm " + fbm::to_string(n) + ": multiplicity " + got.get_str() +
                             " but c(-a^2) + [a in L] c(-a^2/2) = " + expected.get_str();
      }
    });
  }
  return rep;
}

}  // namespace fbm::gkm
