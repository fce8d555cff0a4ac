// Acceptance run: one PASS/FAIL line per criterion. A criterion passes
// only if its check holds and it finishes within its time limit.
// Usage: acceptance [id ...]   (default: all)

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fbm/characters.hpp"
#include "fbm/codes.hpp"
#include "fbm/enumerate.hpp"
#include "fbm/gkm.hpp"
#include "fbm/lattice.hpp"
#include "fbm/qseries.hpp"

using namespace fbm;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double limit_seconds;
  std::function<Outcome()> run;
};

using Counts = std::map<int, std::int64_t>;

bool counts_equal(const codes::WeightEnumerator& w, const Counts& expected) {
  for (int i = 0; i <= w.length; ++i) {
    auto it = expected.find(i);
    if (w[i] != (it == expected.end() ? 0 : it->second)) return false;
  }
  return true;
}

qs::QSeries expected_series(const std::map<int, int>& terms48, int last48) {
  std::map<int, Rational> t;
  for (auto [e, c] : terms48) t[e] = c;
  return qs::QSeries(std::move(t), last48 + 1);
}

// ---- 1 ----
Outcome code_tables() {
  const auto h = codes::hamming16();
  const auto hd = codes::hamming16_dual();
  const auto f8 = codes::even_weight_code(8);
  struct Row {
    std::string name;
    codes::WeightEnumerator w;
    Counts expected;
  };
  const std::vector<Row> rows = {
      {"H16 dual", codes::weight_enumerator(hd), {{0, 1}, {8, 30}, {16, 1}}},
      {"H16", codes::weight_enumerator(h), {{0, 1}, {4, 140}, {6, 448}, {8, 870}, {10, 448}, {12, 140}, {16, 1}}},
      {"H16 + (0^15 1)",
       codes::coset_weight_enumerator(h, codes::BitWord::unit(16, 15)),
       {{1, 1}, {3, 35}, {5, 273}, {7, 715}, {9, 715}, {11, 273}, {13, 35}, {15, 1}}},
      {"H16 + (0^14 1^2)",
       codes::coset_weight_enumerator(h, codes::BitWord::parse("0000000000000011")),
       {{2, 8}, {4, 112}, {6, 504}, {8, 800}, {10, 504}, {12, 112}, {14, 8}}},
      {"(F2^8)_0", codes::weight_enumerator(f8), {{0, 1}, {2, 28}, {4, 70}, {6, 28}, {8, 1}}},
      {"(F2^8)_1", codes::coset_weight_enumerator(f8, codes::BitWord::unit(8, 0)), {{1, 8}, {3, 56}, {5, 56}, {7, 8}}},
  };
  for (const auto& r : rows)
    if (!counts_equal(r.w, r.expected)) return {false, r.name + " gave " + r.w.to_string()};
  return {true, "6 enumerators exact"};
}

// ---- 2 ----
Outcome macwilliams_census() {
  const auto h = codes::hamming16();
  const auto hd = codes::hamming16_dual();
  const auto wh = codes::weight_enumerator(h), whd = codes::weight_enumerator(hd);
  if (codes::macwilliams_transform(whd, 32) != wh) return {false, "W(H16 dual) does not transform to W(H16)"};
  if (codes::macwilliams_transform(wh, 2048) != whd) return {false, "W(H16) does not transform to W(H16 dual)"};
  const auto reps = codes::coset_representatives(h);
  std::map<int, int> by_weight;
  std::vector<std::int64_t> total(17, 0);
  const auto odd = codes::coset_weight_enumerator(h, codes::BitWord::unit(16, 15));
  const auto pair = codes::coset_weight_enumerator(h, codes::BitWord::parse("0000000000000011"));
  for (const auto& r : reps) {
    ++by_weight[r.weight()];
    const auto e = codes::coset_weight_enumerator(h, r);
    if (r.weight() == 1 && e != odd) return {false, "coset " + r.to_string() + " is not of the odd type"};
    if (r.weight() == 2 && e != pair) return {false, "coset " + r.to_string() + " is not of the pair type"};
    for (int i = 0; i <= 16; ++i) total[i] += e[i];
  }
  if (reps.size() != 32 || by_weight != std::map<int, int>{{0, 1}, {1, 16}, {2, 15}})
    return {false, std::to_string(reps.size()) + " cosets with the wrong leader weights"};
  Integer b = 1;
  for (int i = 0; i <= 16; ++i) {
    if (total[i] != b.get_si()) return {false, "coset enumerators do not sum to (x+y)^16"};
    b = b * (16 - i) / (i + 1);
  }
  return {true, "round trip exact; 32 = 1 + 16 + 15 cosets; sum is (x+y)^16"};
}

// ---- 3 ----
Outcome steiner() {
  const auto cert = codes::steiner_property(codes::hamming16(), 4, 3);
  const bool ok = cert.holds && cert.cover_counts.size() == 560 && cert.min_cover == 1 && cert.max_cover == 1;
  return {ok, std::to_string(cert.cover_counts.size()) + " triples, covered " + std::to_string(cert.min_cover) +
                  " to " + std::to_string(cert.max_cover) + " times by " + std::to_string(cert.blocks) + " blocks"};
}

// ---- 4 ----
Outcome qseries_expansions() {
  const int o = 6 * qs::kGrid;
  const auto sf = qs::string_functions(o);
  const auto w = qs::weight_minus8_functions(o);
  struct Row {
    std::string name;
    const qs::QSeries& s;
    qs::QSeries expected;
  };
  const std::vector<Row> rows = {
      {"c0", sf.c0, expected_series({{-3, 1}, {45, 1}, {93, 3}, {141, 5}, {189, 10}}, 189)},
      {"c1", sf.c1, expected_series({{21, 1}, {69, 2}, {117, 4}}, 117)},
      {"c2", sf.c2, expected_series({{0, 1}, {48, 2}, {96, 4}, {144, 8}, {192, 14}, {240, 24}, {288, 40}}, 288)},
      {"h", w.h, expected_series({{-48, 1}, {0, 8}, {48, 52}, {96, 256}, {144, 1122}, {192, 4352}}, 192)},
      {"g0", w.g0, expected_series({{0, 8}, {48, 256}, {96, 4352}, {144, 52224}}, 144)},
      {"g1", w.g1, expected_series({{-24, 1}, {24, 52}, {72, 1122}}, 72)},
  };
  for (const auto& r : rows) {
    if (r.s.trunc() <= r.expected.trunc() - 1) return {false, r.name + " not computed far enough"};
    if (!r.s.agrees_with(r.expected)) return {false, r.name + " differs: " + r.s.to_string()};
  }
  const auto checks = qs::verify_modular_identities(20 * qs::kGrid);
  int held = 0;
  for (const auto& c : checks)
    if (c.holds && c.compared_through48 >= 20 * qs::kGrid) ++held;
  if (checks.size() != 4 || held != 4) return {false, std::to_string(held) + " of 4 identities hold through q^20"};
  return {true, "6 expansions to the last printed term; 4 identities through q^20"};
}

// ---- 5 ----
Outcome characters() {
  const auto rep = ch::compare_character_forms(3, true);
  const bool ok = rep.equal && rep.integral_exponents && rep.nonnegative && rep.keys_compared >= 10000;
  std::string d = std::to_string(rep.keys_compared) + " keys in " + std::to_string(rep.units) + " units";
  if (rep.first_mismatch) d += "; first mismatch " + *rep.first_mismatch;
  return {ok, d};
}

// ---- 6 ----
Outcome graded_dimension() {
  const auto chi = ch::chi_v_code_form_z0(6);
  const auto oracle = (qs::jay_function(6 * qs::kGrid) + qs::QSeries::constant(48)).truncated(chi.trunc());
  if (chi.trunc() <= 6 * qs::kGrid) return {false, "character not known through q^6"};
  const bool ok = chi.agrees_with(oracle) && chi.integer_coefficient(-qs::kGrid) == 1 &&
                  chi.integer_coefficient(0) == 48 && chi.integer_coefficient(qs::kGrid) == 196884 &&
                  chi.integer_coefficient(2 * qs::kGrid) == 21493760;
  return {ok, "q^-1 + 48 + 196884 q + 21493760 q^2 + ... through q^6 against J + 48"};
}

// ---- 7 ----
Outcome root_data() {
  std::uint64_t real = 0;
  for (int h2 = 1; h2 <= 4; ++h2)
    for (const auto& r : gkm::roots_at_height(make_rational(h2, 2), Rational(1), Rational(2))) {
      const bool is_real = gkm::norm(r) == 1 || gkm::in_lattice(r);
      if (!is_real) continue;
      ++real;
      if (gkm::root_multiplicity(r) != 1) return {false, "real root " + gkm::to_string(r) + " has multiplicity != 1"};
    }
  if (real < 5000) return {false, "only " + std::to_string(real) + " real roots sampled"};
  if (gkm::cartan_dimension() != 18) return {false, "Cartan dimension " + std::to_string(gkm::cartan_dimension())};
  std::ostringstream mults;
  for (const auto& [v, m] : gkm::imaginary_simple_roots(8)) {
    const int n = static_cast<int>(v.n2);
    if (m != (n % 2 ? 8 : 16)) return {false, "multiplicity of " + gkm::to_string(v) + " is " + m.get_str()};
    mults << (n > 1 ? "," : "") << m.get_str();
  }
  return {true, std::to_string(real) + " real roots of multiplicity 1; Cartan 18; n rho: " + mults.str()};
}

// ---- 8 ----
Outcome exponent_consistency() {
  const auto rep = gkm::exponent_consistency(Rational(4));
  if (!rep.holds) return {false, rep.counterexample.value_or("failed")};
  // A norm -2 vector of L: (s, 1, 2) with s in Lambda16, s^2 = 6.
  const auto& t = gkm::shell_table(gkm::kShellCap);
  if (!t.reps[6][1]) return {false, "no norm 6 vector of Lambda16"};
  gkm::RootVector a = *t.reps[6][1];
  a.m2 = 2;
  a.n2 = 4;
  const Integer m = gkm::root_multiplicity(a);
  const bool ok = gkm::norm(a) == -2 && gkm::in_lattice(a) && m == 308 &&
                  gkm::h_coefficient(2) + gkm::h_coefficient(1) == m;
  return {ok, std::to_string(rep.roots_checked) + " roots in " + std::to_string(rep.classes_checked) +
                  " classes through t-height 16; norm -2 in L: " + m.get_str() + " = 256 + 52"};
}

// ---- 9 ----
Outcome genus() {
  const auto a = lat::genus_invariants(
      lat::direct_sum(lat::construction_a(codes::hamming16()), lat::hyperbolic_plane()));
  const auto b = lat::genus_invariants(
      lat::direct_sum(lat::barnes_wall_16(), lat::rescale(lat::hyperbolic_plane(), 2)));
  const bool ok = a == b && a.positive == 17 && a.negative == 1 && abs(a.determinant) == 1024 &&
                  a.invariant_factors == std::vector<Integer>(10, 2) && a.milgram == true;
  return {ok, a.to_string()};
}

// ---- 10 ----
Outcome denominator() {
  const auto rep = gkm::verify_denominator(12, true);
  std::string series = rep.product.to_string();
  std::replace(series.begin(), series.end(), 'q', 't');
  std::string d = series + "; " + std::to_string(rep.orbit_points) + " orbit points";
  if (rep.first_difference) d += "; first difference at t^" + std::to_string(*rep.first_difference);
  return {rep.equal, d};
}

// ---- 11 ----
Outcome barnes_wall() {
  const auto bw = lat::barnes_wall_16();
  const auto dual = lat::dual_lattice(bw);
  std::uint64_t kissing = 0, dual2 = 0;
  for (const auto& v : en::enumerate_by_norm(bw.gram, 4, {}, 4)) kissing += bw.norm(v) == 4;
  for (const auto& v : en::enumerate_by_norm(dual.gram, 2, {}, 2)) dual2 += dual.norm(v) == 2;
  // Recount: x / sqrt 2 with x^2 = 8 is +-2e_i +-2e_j, or +-1 on an octad
  // with an even number of minus signs.
  const auto octads = codes::weight_enumerator(codes::hamming16_dual())[8];
  const std::uint64_t recount = 4 * (16 * 15 / 2) + static_cast<std::uint64_t>(octads) * 128;
  const bool ok = kissing == 4320 && recount == 4320 && bw.determinant() == 256 && dual2 == 4320;
  return {ok, "kissing " + std::to_string(kissing) + " (recount " + std::to_string(recount) + "), det " +
                  fbm::to_string(bw.determinant()) + ", dual norm 2: " + std::to_string(dual2)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {1, "code tables", 1, code_tables},
      {2, "MacWilliams and coset census", 1, macwilliams_census},
      {3, "Steiner system S(3,4,16)", 1, steiner},
      {4, "q-series expansions and identities", 5, qseries_expansions},
      {5, "character forms agree through q^3", 600, characters},
      {6, "graded dimension against J + 48", 60, graded_dimension},
      {7, "root data", 60, root_data},
      {8, "exponent consistency", 300, exponent_consistency},
      {9, "genus invariants", 60, genus},
      {10, "denominator identity through t^12", 1800, denominator},
      {11, "Barnes-Wall lattice", 60, barnes_wall},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  int failed = 0;
  for (const auto& c : all) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = s <= c.limit_seconds;
    const bool pass = o.pass && in_time;
    failed += !pass;
    char timing[64];
    std::snprintf(timing, sizeof timing, "%.2f s, limit %.0f s", s, c.limit_seconds);
    std::cout << (pass ? "PASS" : "FAIL") << ' ' << c.id << ' ' << c.name << " [" << timing << "] " << o.detail
              << (in_time ? "" : " (over time limit)") << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
