#include "fbm/lattice.hpp"

#include <numeric>
#include <sstream>

#include "fbm/errors.hpp"

namespace fbm::lat {
namespace {

la::QMatrix gram_of_rows(const la::QMatrix& b, const Rational& scale) {
  la::QMatrix g = b * b.transpose();
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j) g(i, j) *= scale;
  return g;
}

std::vector<long> bits_of(const codes::BitWord& w) {
  std::vector<long> v(w.length());
  for (int i = 0; i < w.length(); ++i) v[i] = w[i];
  return v;
}

Lattice from_basis(std::string label, const la::ZMatrix& b, const Rational& scale) {
  la::QMatrix bq = la::to_rational(b);
  Lattice l = make_lattice(std::move(label), gram_of_rows(bq, scale));
  l.basis = bq;
  l.ambient_scale = scale;
  return l;
}

}  // namespace

Rational Lattice::determinant() const { return la::determinant(gram); }

bool Lattice::is_integral() const {
  for (std::size_t i = 0; i < gram.rows(); ++i)
    for (std::size_t j = 0; j < gram.cols(); ++j)
      if (!fbm::is_integral(gram(i, j))) return false;
  return true;
}

bool Lattice::is_even() const {
  if (!is_integral()) return false;
  for (std::size_t i = 0; i < gram.rows(); ++i)
    if (gram(i, i).get_num() % 2 != 0) return false;
  return true;
}

Rational Lattice::inner(const std::vector<Rational>& a, const std::vector<Rational>& b) const {
  if (static_cast<int>(a.size()) != rank() || static_cast<int>(b.size()) != rank())
    throw InputError("vector dimension differs from lattice rank");
  Rational s = 0;
  for (int i = 0; i < rank(); ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; j < rank(); ++j) s += a[i] * gram(i, j) * b[j];
  }
  return s;
}

Rational Lattice::norm(const IntVector& v) const {
  std::vector<Rational> q(v.begin(), v.end());
  return norm(q);
}

std::vector<Rational> Lattice::embed(const IntVector& v) const {
  if (!basis) throw InputError("lattice " + label + " has no embedding");
  std::vector<Rational> q(v.begin(), v.end());
  return la::row_times(q, *basis);
}

Lattice make_lattice(std::string label, la::QMatrix gram) {
  if (!la::is_symmetric(gram)) throw InputError("Gram matrix of " + label + " is not symmetric");
  if (la::determinant(gram) == 0) throw InputError("Gram matrix of " + label + " is degenerate");
  Lattice l;
  l.label = std::move(label);
  l.gram = std::move(gram);
  return l;
}

Lattice integer_lattice(int n) {
  return from_basis("Z^" + std::to_string(n), la::ZMatrix::identity(n), 1);
}

Lattice construction_a(const codes::LinearCode& code) {
  const int n = code.length();
  std::vector<std::vector<long>> rows;
  for (const auto& g : code.generators()) rows.push_back(bits_of(g));
  for (int i = 0; i < n; ++i) {
    std::vector<long> r(n, 0);
    r[i] = 2;
    rows.push_back(r);
  }
  return from_basis("A(" + std::to_string(n) + "," + std::to_string(code.dimension()) + ")",
                    la::hermite_basis(la::from_int_rows(rows)), 1);
}

Lattice barnes_wall_16() {
  std::vector<std::vector<long>> rows;
  for (const auto& g : codes::hamming16_dual().generators()) rows.push_back(bits_of(g));
  for (int i = 1; i < 16; ++i) {
    std::vector<long> r(16, 0);
    r[0] = 2;
    r[i] = 2;
    rows.push_back(r);
  }
  std::vector<long> r(16, 0);
  r[0] = 4;
  rows.push_back(r);
  return from_basis("BW16", la::hermite_basis(la::from_int_rows(rows)), make_rational(1, 2));
}

Lattice hyperbolic_plane() {
  return make_lattice("II11", la::from_rows({{0, -1}, {-1, 0}}));
}

Lattice rescale(const Lattice& l, const Rational& k) {
  if (k == 0) throw InputError("rescaling factor must be nonzero");
  Lattice r = l;
  for (std::size_t i = 0; i < r.gram.rows(); ++i)
    for (std::size_t j = 0; j < r.gram.cols(); ++j) r.gram(i, j) *= k;
  r.ambient_scale *= k;
  r.label = l.label + "(" + to_string(k) + ")";
  return r;
}

Lattice direct_sum(const Lattice& a, const Lattice& b) {
  const int n = a.rank() + b.rank();
  la::QMatrix g(n, n);
  for (int i = 0; i < a.rank(); ++i)
    for (int j = 0; j < a.rank(); ++j) g(i, j) = a.gram(i, j);
  for (int i = 0; i < b.rank(); ++i)
    for (int j = 0; j < b.rank(); ++j) g(a.rank() + i, a.rank() + j) = b.gram(i, j);
  return make_lattice(a.label + "+" + b.label, g);
}

Lattice dual_lattice(const Lattice& l) {
  la::QMatrix inv = la::inverse(l.gram);
  Lattice d = make_lattice(l.label + "'", inv);
  if (l.basis) {
    d.basis = inv * *l.basis;
    d.ambient_scale = l.ambient_scale;
  }
  return d;
}

DiscriminantGroup::DiscriminantGroup(const Lattice& l) : gram_(l.gram) {
  if (!l.is_integral()) throw InputError("discriminant group needs an integral lattice");
  if (l.rank() > 24) throw ResourceError("discriminant group limited to rank 24");
  const Rational det = abs(l.determinant());
  if (det > Rational(Integer(1) << 20)) throw ResourceError("discriminant group limited to |det| <= 2^20");
  const auto snf = la::smith_form(la::to_integer(l.gram));
  vinv_ = la::inverse(la::to_rational(snf.v));
  const int n = l.rank();
  for (int i = 0; i < n; ++i) {
    if (snf.d[i] == 1) continue;
    factors_.push_back(snf.d[i]);
    std::vector<Rational> g(n);
    for (int r = 0; r < n; ++r) g[r] = Rational(snf.v(r, i)) / Rational(snf.d[i]);
    generators_.push_back(g);
    size_ *= snf.d[i].get_ui();
  }
  // Keep the factor positions for index_of.
  std::vector<std::vector<Rational>> rows;
  for (int i = 0; i < n; ++i) {
    if (snf.d[i] == 1) continue;
    rows.push_back(vinv_.row(i));
  }
  la::QMatrix sel(rows.size(), n);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (int j = 0; j < n; ++j) sel(i, j) = rows[i][j];
  vinv_ = sel;
}

std::vector<Rational> DiscriminantGroup::element(std::uint64_t index) const {
  if (index >= size_) throw InputError("discriminant group index out of range");
  const std::size_t n = gram_.rows();
  std::vector<Rational> v(n, Rational(0));
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const std::uint64_t d = factors_[i].get_ui();
    const std::uint64_t a = index % d;
    index /= d;
    for (std::size_t r = 0; r < n; ++r) v[r] += Rational(Integer(static_cast<unsigned long>(a))) * generators_[i][r];
  }
  for (auto& x : v) x -= Rational(floor_of(x));
  return v;
}

std::uint64_t DiscriminantGroup::index_of(const std::vector<Rational>& c) const {
  if (c.size() != gram_.rows()) throw InputError("vector dimension differs from lattice rank");
  for (const auto& x : la::row_times(c, gram_))
    if (!is_integral(x)) throw InputError("vector is not in the dual lattice");
  std::uint64_t index = 0, radix = 1;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    Rational y = 0;
    for (std::size_t j = 0; j < c.size(); ++j) y += vinv_(i, j) * c[j];
    y *= Rational(factors_[i]);
    if (!is_integral(y)) throw ConsistencyError("discriminant coordinates are not integral");
    Integer a = y.get_num() % factors_[i];
    if (a < 0) a += factors_[i];
    index += a.get_ui() * radix;
    radix *= factors_[i].get_ui();
  }
  return index;
}

Rational DiscriminantGroup::norm(std::uint64_t index) const {
  const auto v = element(index);
  Rational s = 0;
  const auto gv = la::row_times(v, gram_);
  for (std::size_t i = 0; i < v.size(); ++i) s += gv[i] * v[i];
  return mod_positive(s, 2);
}

bool GenusInvariants::operator==(const GenusInvariants& o) const {
  return positive == o.positive && negative == o.negative && determinant == o.determinant && even == o.even &&
         invariant_factors == o.invariant_factors && norm_counts == o.norm_counts && gauss_sum == o.gauss_sum &&
         milgram == o.milgram;
}

std::string GenusInvariants::to_string() const {
  std::ostringstream os;
  os << "signature (" << positive << "," << negative << ") det " << fbm::to_string(determinant)
     << (even ? " even" : " odd") << " factors [";
  for (std::size_t i = 0; i < invariant_factors.size(); ++i)
    os << (i ? "," : "") << fbm::to_string(invariant_factors[i]);
  os << "] norms {";
  bool first = true;
  for (const auto& [n, c] : norm_counts) {
    os << (first ? "" : ", ") << fbm::to_string(n) << ":" << c;
    first = false;
  }
  os << "} gauss " << gauss_sum.to_string();
  if (milgram) os << " milgram " << (*milgram ? "ok" : "FAILED");
  return os.str();
}

GenusInvariants genus_invariants(const Lattice& l) {
  GenusInvariants g;
  const auto in = la::inertia(l.gram);
  g.positive = in.positive;
  g.negative = in.negative;
  g.determinant = l.determinant();
  g.even = l.is_even();
  DiscriminantGroup dg(l);
  g.invariant_factors = dg.invariant_factors();
  // Odd lattices: class norms are only defined mod 1.
  const Rational modulus = g.even ? Rational(2) : Rational(1);
  for (std::uint64_t i = 0; i < dg.size(); ++i) {
    const auto v = dg.element(i);
    ++g.norm_counts[mod_positive(l.norm(v), modulus)];
  }
  long order = 1;
  for (const auto& [n, c] : g.norm_counts) order = std::lcm(order, 2 * static_cast<long>(n.get_den().get_ui()));
  if (!g.even) order *= 2;
  cyc::Cyclotomic sum(static_cast<int>(order));
  for (const auto& [n, c] : g.norm_counts) {
    // exp(pi i n) = zeta_order^(n * order / 2); doubled for odd lattices.
    Rational e = n * Rational(order) / (g.even ? 2 : 1);
    auto term = cyc::Cyclotomic::root_power(static_cast<int>(order), e.get_num().get_si());
    term *= Rational(Integer(static_cast<unsigned long>(c)));
    sum += term;
  }
  g.gauss_sum = sum;
  const Integer absdet = abs(g.determinant.get_num());
  Integer root = sqrt(absdet);
  if (g.even && g.determinant.get_den() == 1 && root * root == absdet) {
    auto expected = cyc::Cyclotomic::root_power(8, g.positive - g.negative);
    expected *= Rational(root);
    g.milgram = expected == sum;
  }
  return g;
}

}  // namespace fbm::lat
