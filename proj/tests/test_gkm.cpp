#include <doctest.h>

#include <filesystem>
#include <random>
#include <set>
#include <sstream>

#include "fbm/errors.hpp"
#include "fbm/gkm.hpp"

using namespace fbm;
using namespace fbm::gkm;

namespace {

RootVector vec(std::int64_t m2, std::int64_t n2, std::array<std::int64_t, 16> a = {}) {
  RootVector r;
  r.a = a;
  r.m2 = m2;
  r.n2 = n2;
  return r;
}

std::int64_t s_norm(const RootVector& v) {
  std::int64_t s = 0;
  for (auto x : v.a) s += x * x;
  return s / 8;
}

const std::vector<RootVector>& low_roots() {
  static const std::vector<RootVector> r = [] {
    auto all = simple_roots(Rational(3, 2));
    all.resize(50);
    return all;
  }();
  return r;
}

const std::vector<RootVector>& roots_to_3() {
  static const std::vector<RootVector> r = simple_roots(Rational(3));
  return r;
}

}  // namespace

TEST_CASE("Weyl vector and reference vector") {
  const RootVector rho = weyl_vector();
  CHECK(norm(rho) == 0);
  CHECK(in_dual(rho));
  CHECK_FALSE(in_lattice(rho));
  CHECK(in_lattice(2 * rho));
  CHECK(in_lattice(4 * rho));
  CHECK_FALSE(in_lattice(3 * rho));
  CHECK(norm(reference_vector()) == -2);
  CHECK(height(rho) == Rational(1, 2));
  CHECK(t_exponent(rho) == 2);
  CHECK(to_string(vec(1, -1)) == "(0,1/2,-1/2)");
}

TEST_CASE("lattice data") {
  CHECK(cartan_dimension() == 18);
  CHECK(signature() == std::pair(17, 1));
  const auto& t = shell_table(4);
  CHECK(t.counts[0][1] == 1);
  CHECK(t.counts[1][0] + t.counts[1][1] == 0);
  CHECK(t.counts[2][0] == 4320);
  CHECK(t.counts[2][1] == 0);
  CHECK(t.counts[4][1] == 4320);
  CHECK(t.counts[4][0] + t.counts[4][1] == 522720);
}

TEST_CASE("root vector parsing") {
  const std::string zeros = "0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,";
  CHECK(parse_root_vector(zeros + "1,-1") == vec(1, -1));
  CHECK_THROWS_AS(parse_root_vector(zeros + "1"), InputError);
  CHECK_THROWS_AS(parse_root_vector(zeros + "1,x"), InputError);
  CHECK_THROWS_AS(parse_root_vector("1,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,1,-1"), InputError);
  const RootVector alpha = low_roots().back();
  CHECK(from_coordinates(coordinates(alpha)) == alpha);
}

TEST_CASE("multiplicities") {
  const auto& roots3 = roots_to_3();
  const auto beta = std::find_if(roots3.begin(), roots3.end(), [](const RootVector& r) { return r.m2 == 2; });
  REQUIRE(beta != roots3.end());
  CHECK(in_lattice(*beta));
  CHECK(norm(*beta) == 2);
  CHECK(root_multiplicity(*beta) == 1);

  const RootVector a1 = vec(1, -1);
  CHECK(norm(a1) == 1);
  CHECK(root_multiplicity(a1) == 1);

  // beta + 2 rho: norm -2 in L.
  const RootVector b = *beta + 2 * weyl_vector();
  CHECK(norm(b) == -2);
  CHECK(in_lattice(b));
  CHECK(root_multiplicity(b) == 308);
  CHECK(h_coefficient(2) + h_coefficient(1) == 308);
  // Restricting the second product to L' \ L would give the exponent c(1) alone.
  CHECK(h_coefficient(1) != root_multiplicity(b));

  // (0,1/2,1/2): norm -1, odd class.
  const RootVector c = a1 + 2 * weyl_vector();
  CHECK(norm(c) == -1);
  CHECK(root_multiplicity(c) == 52);
  CHECK(root_multiplicity(vec(0, 3)) == 8);

  // Norm 2 vectors of L' \ L are not roots.
  const auto& t = shell_table(4);
  RootVector d = *t.reps[2][0];
  d.m2 = 0;
  d.n2 = 0;
  CHECK(norm(d) == 2);
  CHECK_FALSE(in_lattice(d));
  CHECK(root_multiplicity(d) == 0);
  CHECK(root_multiplicity(2 * d) == 0);

  CHECK_THROWS_AS(root_multiplicity(RootVector{}), InputError);
  CHECK_THROWS_AS(root_multiplicity(vec(0, 0, {1})), InputError);
}

TEST_CASE("imaginary simple roots") {
  const auto im = imaginary_simple_roots(8);
  REQUIRE(im.size() == 8);
  for (int n = 1; n <= 8; ++n) {
    CHECK(im[n - 1].first == n * weyl_vector());
    CHECK(im[n - 1].second == (n % 2 ? 8 : 16));
  }
  CHECK_THROWS_AS(imaginary_simple_roots(0), InputError);
}

TEST_CASE("simple roots") {
  const auto roots = simple_roots(Rational(3, 2));
  REQUIRE(!roots.empty());
  CHECK(roots.front() == vec(1, -1));
  const RootVector rho = weyl_vector();
  int s2 = 0;
  for (const auto& r : roots) {
    CHECK(pairing(rho, r) == -norm(r) / 2);
    CHECK(pairing(reference_vector(), r) < 0);
    if (r.m2 == 1 && s_norm(r) == 2) ++s2;
  }
  CHECK(s2 == 4320);
  const auto& roots3 = roots_to_3();
  std::size_t norm2 = 0;
  for (std::size_t i = 0; i < roots3.size(); ++i) {
    const auto& r = roots3[i];
    REQUIRE(pairing(rho, r) == -norm(r) / 2);
    REQUIRE(pairing(reference_vector(), r) < 0);
    if (r.m2 == 2) ++norm2;
    if (r.m2 == 2 || i % 97 == 0) CHECK(root_multiplicity(r) == 1);
  }
  CHECK(norm2 == 61440);
  CHECK(std::is_sorted(roots3.begin(), roots3.end(),
                       [](const RootVector& x, const RootVector& y) { return t_exponent(x) < t_exponent(y); }));
  CHECK_THROWS_AS(simple_roots(Rational(0)), InputError);
}

TEST_CASE("real roots have multiplicity one") {
  std::size_t real = 0;
  for (int h2 = 1; h2 <= 4; ++h2)
    for (const auto& r : roots_at_height(Rational(h2, 2), Rational(1), Rational(2))) {
      const Rational n = norm(r);
      if (n == 1 || in_lattice(r)) {
        CHECK(root_multiplicity(r) == 1);
        ++real;
      } else {
        CHECK(root_multiplicity(r) == 0);
      }
    }
  CHECK(real >= 5000);
}

TEST_CASE("slice roots match shell tallies") {
  const auto& t = shell_table(4);
  for (int e2 = 1; e2 <= 3; ++e2) {
    std::uint64_t expected = 0;
    for (std::int64_t m2 = -e2 - 2; m2 <= e2 + 2; ++m2) {
      const std::int64_t n2 = e2 - 2 * m2;
      const std::int64_t p = m2 * n2;
      for (std::int64_t k = std::max<std::int64_t>(0, p - 2); k <= p + 2; ++k) expected += t.counts[k][0] + t.counts[k][1];
    }
    CHECK(roots_at_height(Rational(e2, 2), Rational(-2), Rational(2)).size() == expected);
  }
}

TEST_CASE("chamber reduction") {
  const RootVector rho = weyl_vector();
  const auto r0 = reduce_to_chamber(rho);
  CHECK(r0.reduced == rho);
  CHECK(r0.word.empty());
  CHECK(r0.parity == 1);
  CHECK_FALSE(r0.outside_guarantee);

  const RootVector a = vec(1, -1);
  CHECK(reflect(rho, a) == rho + a);
  const auto r1 = reduce_to_chamber(reflect(rho, a));
  CHECK(r1.reduced == rho);
  REQUIRE(r1.word.size() == 1);
  CHECK(r1.word[0] == a);
  CHECK(r1.parity == -1);

  const RootVector b = low_roots()[1];
  const auto r2 = reduce_to_chamber(reflect(reflect(rho, b), a));
  CHECK(r2.reduced == rho);
  CHECK(r2.parity == 1);

  CHECK_THROWS_AS(reflect(rho, weyl_vector()), InputError);
}

TEST_CASE("parity is multiplicative along random words") {
  std::mt19937 rng(20261017);
  const auto& roots = low_roots();
  std::uniform_int_distribution<std::size_t> pick(0, roots.size() - 1);
  std::uniform_int_distribution<int> len(0, 6);
  for (const RootVector& start : {weyl_vector(), reference_vector()}) {
    for (int trial = 0; trial < 100; ++trial) {
      RootVector v = start;
      const int l = len(rng);
      for (int i = 0; i < l; ++i) v = reflect(v, roots[pick(rng)]);
      const auto r = reduce_to_chamber(v);
      CHECK(r.reduced == start);
      CHECK(r.parity == (r.word.size() % 2 ? -1 : 1));
      CHECK(r.parity == (l % 2 ? -1 : 1));
    }
  }
}

TEST_CASE("reflections preserve norms and lattices") {
  std::mt19937 rng(7);
  const auto& roots = low_roots();
  const auto& roots3 = roots_to_3();
  std::vector<RootVector> mirrors(roots.begin(), roots.end());
  for (const auto& r : roots3)
    if (r.m2 == 2) mirrors.push_back(r);
  REQUIRE(mirrors.size() > roots.size());
  std::uniform_int_distribution<std::size_t> pick(0, mirrors.size() - 1);
  std::uniform_int_distribution<std::int64_t> coef(-3, 3);
  for (int trial = 0; trial < 300; ++trial) {
    RootVector v;
    for (int j = 0; j < 4; ++j) v = v + coef(rng) * mirrors[pick(rng)];
    v = v + coef(rng) * weyl_vector();
    const bool in_l = in_lattice(v);
    const RootVector alpha = mirrors[pick(rng)];
    const RootVector w = reflect(v, alpha);
    CHECK(in_dual(w));
    CHECK(norm(w) == norm(v));
    CHECK(in_lattice(w) == in_l);
  }
}

TEST_CASE("Weyl orbit of rho") {
  const auto pts = weyl_orbit_points(Rational(3, 2));
  REQUIRE(!pts.empty());
  CHECK(pts.front().v == weyl_vector());
  CHECK(pts.front().parity == 1);
  std::set<RootVector> seen;
  for (const auto& p : pts) {
    CHECK(norm(p.v) == 0);
    CHECK(height(p.v) <= Rational(3, 2));
    auto c = coordinates(p.v);
    std::int64_t g = 0;
    for (auto x : c) g = std::gcd(g, x);
    CHECK(g == 1);
    seen.insert(p.v);
  }
  for (const auto& a : simple_roots(Rational(1))) {
    const RootVector w = reflect(weyl_vector(), a);
    REQUIRE(seen.count(w) == 1);
    const auto it = std::find_if(pts.begin(), pts.end(), [&](const OrbitPoint& p) { return p.v == w; });
    CHECK(it->parity == -1);
  }
  CHECK(weyl_orbit_points(Rational(2), false) == weyl_orbit_points(Rational(2), true));
  CHECK_THROWS_AS(weyl_orbit_points(Rational(kDenominatorCap + 1, 4)), ResourceError);
}

TEST_CASE("denominator identity, small bounds") {
  // t^2 (1 - t^2)^8 (1 - t^4)^8 begins t^2 - 8 t^4.
  const auto rho_only = denominator_sum_side(3);
  CHECK(rho_only.integer_coefficient(2 * 48) == 1);
  CHECK(rho_only.integer_coefficient(3 * 48) == 0);
  CHECK(denominator_product_side(3).agrees_with(rho_only));

  const auto rep = verify_denominator(8);
  CHECK(rep.equal);
  CHECK_FALSE(rep.first_difference);
  CHECK(rep.product.integer_coefficient(2 * 48) == 1);
  CHECK(rep.product.integer_coefficient(4 * 48) == -9);
  CHECK(rep.product.integer_coefficient(6 * 48) == 12);
  CHECK(rep.product.integer_coefficient(8 * 48) == -4248);
  CHECK(denominator_sum_side(8, false).agrees_with(rep.sum));
  CHECK_THROWS_AS(verify_denominator(kDenominatorCap + 1), ResourceError);
}

TEST_CASE("exponent consistency, small height") {
  const auto rep = exponent_consistency(Rational(2));
  CHECK(rep.holds);
  CHECK_FALSE(rep.counterexample);
  CHECK(rep.roots_checked > 0);
  CHECK(rep.classes_checked > 0);
  CHECK_THROWS_AS(exponent_consistency(Rational(kConsistencyCap2 + 1, 2)), ResourceError);
}

TEST_CASE("nontermination") {
  CHECK_THROWS_AS(reduce_to_chamber(reflect(weyl_vector(), vec(1, -1)), 0), NonterminationError);
  CHECK_THROWS_AS(reduce_to_chamber(-1 * weyl_vector(), 50), NonterminationError);
}

TEST_CASE("shell table text round trip") {
  const auto& t = shell_table(4);
  std::ostringstream a;
  write_shell_table(t, a);
  std::istringstream in(a.str());
  const auto back = read_shell_table(in, 4);
  REQUIRE(back);
  CHECK(back->counts == t.counts);
  std::ostringstream b;
  write_shell_table(*back, b);
  CHECK(a.str() == b.str());
  std::istringstream wrong(a.str());
  CHECK_FALSE(read_shell_table(wrong, 5));
  std::istringstream cut(a.str().substr(0, a.str().size() / 2));
  CHECK_FALSE(read_shell_table(cut, 4));
}
