#include <doctest.h>

#include <map>
#include <random>

#include "fbm/characters.hpp"
#include "fbm/enumerate.hpp"
#include "fbm/errors.hpp"

using namespace fbm;
using namespace fbm::ch;

namespace {

qs::QSeries series(std::map<int, Rational> t, int trunc) { return qs::QSeries(std::move(t), trunc); }

// Permutation of the 16 coordinates from an affine map of F_2^4 acting on
// the coordinate index.
std::array<int, 16> affine_permutation(std::mt19937& rng) {
  std::uniform_int_distribution<int> nib(0, 15);
  for (;;) {
    std::array<int, 4> cols{};
    for (auto& c : cols) c = nib(rng);
    std::array<int, 16> p{};
    std::array<bool, 16> seen{};
    const int b = nib(rng);
    bool ok = true;
    for (int i = 0; i < 16 && ok; ++i) {
      int img = b;
      for (int k = 0; k < 4; ++k)
        if ((i >> k) & 1) img ^= cols[k];
      ok = !seen[img];
      seen[img] = true;
      p[i] = img;
    }
    if (ok) return p;
  }
}

codes::BitWord permute(const codes::BitWord& w, const std::array<int, 16>& p) {
  std::uint32_t bits = 0;
  for (int i = 0; i < 16; ++i)
    if (w[i]) bits |= 1u << (15 - p[i]);
  return codes::BitWord(16, bits);
}

}  // namespace

TEST_CASE("one-dimensional theta series") {
  auto t0 = theta_scalar(0, 4 * 48);
  auto t1 = theta_scalar(1, 4 * 48);
  auto t2 = theta_scalar(2, 4 * 48);
  // theta_0 = sum q^(2k^2), theta_1 = sum q^((2k+1)^2/2), theta_2 = sum q^(u^2/8), u odd.
  CHECK(t0.agrees_with(series({{0, 1}, {96, 2}}, 4 * 48 + 1)));
  CHECK(t1.agrees_with(series({{24, 2}}, 4 * 48 + 1)));
  CHECK(t2.agrees_with(series({{6, 2}, {54, 2}, {150, 2}}, 4 * 48 + 1)));
  auto w = theta_one_dim(2, 54);
  REQUIRE(w.terms().size() == 4);
  Key k{};
  k[0] = -3;
  CHECK(w.coefficient(54, k) == 1);
  CHECK(specialize_z0(WeightedSeries(16, {}, 48)).agrees_with(qs::QSeries::constant(0).truncated(48)));
  CHECK_THROWS_AS(theta_one_dim(3, 10), InputError);
}

TEST_CASE("level 2 characters of A1") {
  const int order48 = 3 * 48;
  auto ch = level2_characters(order48);
  auto z0 = specialize_z0(ch.chi0);
  auto z1 = specialize_z0(ch.chi1);
  auto z2 = specialize_z0(ch.chi2);
  // Vacuum module: the weight-one space is the adjoint representation.
  CHECK(z0.valuation() == -3);
  CHECK(z0.coefficient(-3) == 1);
  CHECK(z0.coefficient(45) == 3);
  CHECK(z1.valuation() == 21);
  CHECK(z1.coefficient(21) == 3);
  CHECK(z2.valuation() == 6);  // q^(3/16 - 1/16)
  CHECK(z2.coefficient(6) == 2);
  Key zero{};
  CHECK(ch.chi0.coefficient(-3, zero) == 1);
  Key up{};
  up[0] = 2;
  CHECK(ch.chi0.coefficient(45, up) == 1);
  CHECK(ch.chi0.coefficient(93, zero) == 3);
  CHECK(ch.chi0.coefficient(45, zero) == 1);
  for (const auto* c : {&ch.chi0, &ch.chi1, &ch.chi2})
    for (const auto& t : c->terms()) CHECK(t.coeff > 0);
}

TEST_CASE("rank-one products") {
  auto a = theta_one_dim(0, 200);
  auto b = theta_one_dim(2, 200);
  auto p = outer_product(a, b, 201);
  CHECK(p.rank() == 2);
  CHECK(specialize_z0(p).agrees_with(specialize_z0(a) * specialize_z0(b)));
  Key k{};
  k[0] = 4;
  k[1] = -1;
  CHECK(p.coefficient(96 + 6, k) == 1);
  auto s = scale_by(series({{-48, 1}, {0, 5}}, 100), a, 500);
  CHECK(s.trunc() == 100);
  CHECK(s.coefficient(-48, Key{}) == 1);
  CHECK(s.coefficient(0, Key{}) == 5);
}

TEST_CASE("f_gamma") {
  auto w = qs::weight_minus8_functions(2 * 48);
  auto f0 = f_gamma(true, 0, w);
  CHECK(f0.coefficient(-48) == 1);
  CHECK(f0.coefficient(0) == 16);
  CHECK(f0.coefficient(48) == 308);
  CHECK(f_gamma(false, 0, w).agrees_with(w.g0));
  CHECK(f_gamma(false, 1, w).agrees_with(w.g1));
  CHECK(f_gamma(false, 3, w).agrees_with(w.g1));
  CHECK_THROWS_AS(f_gamma(false, Rational(1, 2), w), InputError);
}

TEST_CASE("character of V at z = 0 is J + 48") {
  const int order = kScalarCap;
  auto chi = chi_v_code_form_z0(order);
  auto j = qs::jay_function(order * 48) + qs::QSeries::constant(48);
  CHECK(chi.agrees_with(j.truncated(chi.trunc())));
  CHECK(chi.coefficient(-48) == 1);
  CHECK(chi.coefficient(0) == 48);
  CHECK(chi.coefficient(48) == 196884);
  CHECK(chi.coefficient(96) == 21493760);
  CHECK_THROWS_AS(chi_v_code_form_z0(kScalarCap + 1), ResourceError);
}

TEST_CASE("code and lattice forms agree") {
  for (int order : {-1, 0, 1}) {
    auto serial = compare_character_forms(order, false);
    auto par = compare_character_forms(order, true);
    CHECK(serial.equal);
    CHECK(serial.units == 63);
    CHECK(serial.integral_exponents);
    CHECK(serial.nonnegative);
    CHECK(!serial.first_mismatch);
    CHECK(serial.keys_compared == par.keys_compared);
    CHECK(par.equal);
  }
  CHECK(compare_character_forms(-1).keys_compared == 1);
  CHECK(compare_character_forms(0).keys_compared == 34);
  CHECK_THROWS_AS(compare_character_forms(kCompareCap + 1), ResourceError);
}

TEST_CASE("materialized character") {
  auto code = chi_v_code_form(1);
  auto lat = chi_v_lattice_form(1);
  CHECK(code == lat);
  auto z0 = specialize_z0(code);
  CHECK(z0.agrees_with(series({{-48, 1}, {0, 48}, {48, 196884}}, 49)));
  // Weight-zero part at q^0: the Cartan subalgebra of A1^16.
  CHECK(code.coefficient(0, Key{}) == 16);
  Key root{};
  root[5] = -2;
  CHECK(code.coefficient(0, root) == 1);
  CHECK_THROWS_AS(chi_v_code_form(kMaterializeCap + 1), ResourceError);

  SUBCASE("sign and code automorphism invariance") {
    const auto h = codes::hamming16();
    std::mt19937 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
      auto p = affine_permutation(rng);
      for (const auto& w : h.codewords()) REQUIRE(h.contains(permute(w, p)));
      const int flip = static_cast<int>(rng() % 16);
      for (std::size_t i = 0; i < code.terms().size(); i += 97) {
        const auto& t = code.terms()[i];
        Key k{};
        for (int c = 0; c < 16; ++c) k[p[c]] = t.key[c];
        k[flip] = static_cast<std::int8_t>(-k[flip]);
        CHECK(code.coefficient(t.exp48, k) == t.coeff);
      }
    }
  }
}

TEST_CASE("theta of N from the code") {
  const auto h = codes::hamming16();
  const int order48 = 6 * 48;
  // Theta_N in q^(y^2/2) is W_H(theta_0, theta_1), through norm 12.
  auto code_side = qs::evaluate_enumerator(codes::weight_enumerator(h), theta_scalar(0, order48),
                                           theta_scalar(1, order48));
  auto n = lat::construction_a(h);
  std::map<int, Rational> counts;
  en::EllipsoidEnumerator e(n.gram, 12);
  e.for_each([&](std::span<const std::int64_t>, en::i128 num) {
    counts[to_int64(Rational(e.norm(num) * 24).get_num())] += 1;
  });
  CHECK(code_side.agrees_with(series(counts, order48 + 1)));
}

TEST_CASE("per-class leading exponents") {
  // No product of f_gamma and a coset theta series starts below q^-1.
  for (const auto& u : comparison_units()) {
    auto t = lattice_unit_terms(u, -1);
    for (const auto& term : t) CHECK(term.exp48 >= -48);
  }
  CHECK(lattice_unit_terms(comparison_units()[0], -1).size() == 1);
}

TEST_CASE("decomposition census") {
  auto c = decomposition_census();
  REQUIRE(c.strata.size() == 32);
  CHECK(c.strata[0].delta.weight() == 0);
  CHECK(c.strata[0].labels == 2048);
  CHECK(c.strata[0].multiplicity == 1);
  for (int i = 1; i <= 30; ++i) {
    CHECK(c.strata[i].delta.weight() == 8);
    CHECK(c.strata[i].labels == 128);
  }
  CHECK(c.strata[31].delta.weight() == 16);
  CHECK(c.strata[31].labels == 1);
  CHECK(c.strata[31].multiplicity == 8);
}
