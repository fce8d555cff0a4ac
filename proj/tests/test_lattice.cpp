#include <doctest.h>

#include <map>
#include <random>

#include "fbm/enumerate.hpp"
#include "fbm/errors.hpp"
#include "fbm/lattice.hpp"

using namespace fbm;
using namespace fbm::lat;

namespace {

std::map<Rational, std::uint64_t> shell_counts(const Lattice& l, const Rational& max) {
  std::map<Rational, std::uint64_t> c;
  en::EllipsoidEnumerator e(l.gram, max);
  e.for_each([&](std::span<const std::int64_t>, en::i128 num) { ++c[e.norm(num)]; });
  return c;
}

// Vectors of Z^16 with x^2 = 4 and x mod 2 in the code, counted directly:
// +-2e_i, or +-1 on the support of a weight-4 codeword.
std::uint64_t construction_a_norm4(const codes::LinearCode& c) {
  auto we = codes::weight_enumerator(c);
  return 2 * 16 + we[4] * 16;
}

}  // namespace

TEST_CASE("construction A of the hamming code") {
  auto n = construction_a(codes::hamming16());
  CHECK(n.rank() == 16);
  CHECK(n.determinant() == 1024);
  CHECK(n.is_even());
  auto c = shell_counts(n, 4);
  CHECK(c[0] == 1);
  CHECK(c[2] == 0);
  CHECK(c[4] == 2272);
  CHECK(construction_a_norm4(codes::hamming16()) == 2272);
  CHECK(construction_a(codes::full_space(5)).determinant() == 1);
  CHECK(construction_a(codes::build_code({}, 4)).determinant() == 256);
}

TEST_CASE("construction A norms mod 4") {
  auto n = construction_a(codes::hamming16());
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> d(-3, 3);
  for (int t = 0; t < 1000; ++t) {
    IntVector v(16);
    for (auto& x : v) x = d(rng);
    auto amb = n.embed(v);
    std::uint32_t bits = 0;
    for (int i = 0; i < 16; ++i)
      if (amb[i].get_num() % 2 != 0) bits |= 1u << (15 - i);
    Rational diff = n.norm(v) - codes::BitWord(16, bits).weight();
    CHECK(is_integral(diff / 4));
    CHECK(codes::hamming16().contains(codes::BitWord(16, bits)));
  }
}

TEST_CASE("barnes-wall lattice") {
  auto bw = barnes_wall_16();
  CHECK(bw.determinant() == 256);
  CHECK(bw.is_even());
  auto c = shell_counts(bw, 4);
  CHECK(c[2] == 0);
  CHECK(c[4] == 4320);
  // 480 vectors +-2e_i +-2e_j plus 30 * 128 sign patterns on octads.
  CHECK(480 + 30 * 128 == 4320);
  auto dual = dual_lattice(bw);
  auto cd = shell_counts(dual, 2);
  CHECK(cd[1] == 0);
  CHECK(cd[2] == 4320);
  DiscriminantGroup dg(bw);
  CHECK(dg.invariant_factors() == std::vector<Integer>(8, 2));
}

TEST_CASE("small enumerations") {
  auto z2 = integer_lattice(2);
  auto v = en::enumerate_by_norm(z2.gram, 1);
  CHECK(v == std::vector<IntVector>{{-1, 0}, {0, -1}, {0, 0}, {0, 1}, {1, 0}});
  CHECK_THROWS_AS(en::EllipsoidEnumerator(hyperbolic_plane().gram, 1), InputError);
  // Coset Z + 1/2: norms 1/4 twice.
  auto half = en::enumerate_by_norm(integer_lattice(1).gram, make_rational(1, 4), {make_rational(1, 2)});
  CHECK(half == std::vector<IntVector>{{-1}, {0}});
  CHECK(en::enumerate_by_norm(z2.gram, -1).empty());
}

TEST_CASE("enumeration symmetry and shells") {
  auto n = construction_a(codes::hamming16());
  auto c = shell_counts(n, 8);
  for (const auto& [norm, count] : c)
    if (norm != 0) CHECK(count % 2 == 0);
  en::EllipsoidEnumerator shell(n.gram, 8, {}, 6);
  CHECK(shell.count() == c[6] + c[8]);
}

TEST_CASE("serial and parallel task maps agree") {
  auto bw = barnes_wall_16();
  en::EllipsoidEnumerator e(bw.gram, 6);
  auto visit = [](std::uint64_t& acc, std::span<const std::int64_t> y, en::i128 num) {
    acc = acc * 31 + static_cast<std::uint64_t>(num) + static_cast<std::uint64_t>(y[0]);
  };
  auto s = e.map_tasks_serial<std::uint64_t>(3, 0, visit);
  auto p = e.map_tasks_parallel<std::uint64_t>(3, 0, visit);
  CHECK(s == p);
  CHECK(s.size() > 1);
}

TEST_CASE("hyperbolic plane and sums") {
  auto h = hyperbolic_plane();
  CHECK(h.norm(IntVector{1, 1}) == -2);
  CHECK(h.norm(IntVector{1, 0}) == 0);
  auto l = direct_sum(barnes_wall_16(), rescale(h, 2));
  CHECK(l.rank() == 18);
  CHECK(abs(l.determinant()) == 1024);
  auto in = la::inertia(l.gram);
  CHECK(in.positive == 17);
  CHECK(in.negative == 1);
  auto bw = barnes_wall_16();
  CHECK(rescale(rescale(bw, 2), make_rational(1, 2)).gram == bw.gram);
  CHECK_THROWS_AS(rescale(bw, 0), InputError);
  CHECK(dual_lattice(h).gram == la::from_rows({{0, -1}, {-1, 0}}));
}

TEST_CASE("duals") {
  for (const auto& l : {integer_lattice(3), barnes_wall_16(), construction_a(codes::hamming16()), hyperbolic_plane()}) {
    auto d = dual_lattice(l);
    CHECK(d.determinant() == 1 / l.determinant());
    CHECK(dual_lattice(d).gram == l.gram);
  }
  CHECK(dual_lattice(integer_lattice(4)).gram == integer_lattice(4).gram);
}

TEST_CASE("discriminant groups") {
  auto n = construction_a(codes::hamming16());
  DiscriminantGroup dg(n);
  CHECK(dg.size() == 1024);
  CHECK(dg.invariant_factors() == std::vector<Integer>(10, 2));
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> d(-2, 2);
  for (std::uint64_t i = 0; i < dg.size(); ++i) {
    CHECK(is_integral(dg.norm(i)));
    auto v = dg.element(i);
    CHECK(dg.index_of(v) == i);
    // Well defined on classes.
    std::vector<Rational> w = v;
    for (auto& x : w) x += d(rng);
    Rational diff = n.norm(w) - n.norm(v);
    CHECK(is_integral(diff / 2));
    CHECK(dg.index_of(w) == i);
  }
  CHECK(DiscriminantGroup(integer_lattice(5)).size() == 1);
}

TEST_CASE("genus invariants") {
  auto a = direct_sum(construction_a(codes::hamming16()), hyperbolic_plane());
  auto b = direct_sum(barnes_wall_16(), rescale(hyperbolic_plane(), 2));
  auto ga = genus_invariants(a), gb = genus_invariants(b);
  CHECK(ga.positive == 17);
  CHECK(ga.negative == 1);
  CHECK(abs(ga.determinant) == 1024);
  CHECK(ga.invariant_factors == std::vector<Integer>(10, 2));
  CHECK(ga == gb);
  CHECK(ga.milgram == true);
  CHECK(ga.gauss_sum.rational_value() == 32);
  auto z = genus_invariants(integer_lattice(4));
  CHECK(z.positive == 4);
  CHECK(z.determinant == 1);
  CHECK(z.invariant_factors.empty());
  auto bw = genus_invariants(barnes_wall_16());
  CHECK(bw.positive == 16);
  CHECK(bw.determinant == 256);
  CHECK(bw.even);
  CHECK(bw.milgram == true);
}

TEST_CASE("lorentzian slices") {
  auto h = hyperbolic_plane();
  en::LorentzianSlice s(h.gram, {1, 1}, -1, 0, 0);
  CHECK(s.collect() == std::vector<IntVector>{{0, 1}, {1, 0}});
  CHECK_THROWS_AS(en::LorentzianSlice(h.gram, {1, 0}, -1, 0, 0), InputError);
  en::LorentzianSlice none(h.gram, {1, 1}, -1, 5, 4);
  CHECK(none.collect().empty());
}
