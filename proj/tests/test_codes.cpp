#include <doctest.h>

#include <bit>
#include <random>

#include "fbm/codes.hpp"
#include "fbm/errors.hpp"

using namespace fbm::codes;

namespace {

// Brute force: all words orthogonal to every generator.
WeightEnumerator brute_dual_enumerator(const LinearCode& c) {
  auto we = WeightEnumerator::empty(c.length());
  for (std::uint32_t v = 0; v < (1u << c.length()); ++v) {
    bool ok = true;
    for (auto r : c.rows()) ok = ok && (std::popcount(r & v) % 2 == 0);
    if (ok) ++we.counts[std::popcount(v)];
  }
  return we;
}

WeightEnumerator from_map(int n, std::initializer_list<std::pair<int, std::int64_t>> m) {
  auto we = WeightEnumerator::empty(n);
  for (auto [w, c] : m) we.counts[w] = c;
  return we;
}

LinearCode random_code(std::mt19937& rng, int n) {
  std::uniform_int_distribution<int> k(0, n);
  std::uniform_int_distribution<std::uint32_t> bits(0, (1u << n) - 1);
  std::vector<std::uint32_t> rows(k(rng));
  for (auto& r : rows) r = bits(rng);
  return LinearCode(n, rows);
}

}  // namespace

TEST_CASE("reed-muller generator matrix") {
  auto rm = hamming16_dual();
  CHECK(rm.length() == 16);
  CHECK(rm.dimension() == 5);
  CHECK(weight_enumerator(rm) == from_map(16, {{0, 1}, {8, 30}, {16, 1}}));
  CHECK(weight_enumerator(rm).to_polynomial() == "x^16 + 30*x^8*y^8 + y^16");
}

TEST_CASE("trivial constructions") {
  auto zero = build_code({}, 16);
  CHECK(zero.dimension() == 0);
  CHECK(weight_enumerator(zero) == from_map(16, {{0, 1}}));
  CHECK(dual_code(zero) == full_space(16));
  std::vector<BitWord> dup{BitWord::all_ones(16), BitWord::all_ones(16)};
  CHECK(build_code(dup).dimension() == 1);
  std::vector<BitWord> mixed{BitWord::all_ones(16), BitWord::all_ones(8)};
  CHECK_THROWS_AS(build_code(mixed), fbm::InputError);
  CHECK_THROWS_AS(build_code({}), fbm::InputError);
}

TEST_CASE("hamming code") {
  auto h = hamming16();
  CHECK(h.dimension() == 11);
  CHECK(dual_code(h) == hamming16_dual());
  auto we = weight_enumerator(h);
  CHECK(we == from_map(16, {{0, 1}, {4, 140}, {6, 448}, {8, 870}, {10, 448}, {12, 140}, {16, 1}}));
  CHECK(we == brute_dual_enumerator(hamming16_dual()));
  for (int w = 1; w <= 16; w += 2) CHECK(we[w] == 0);
  for (const auto& g : hamming16_dual().generators())
    for (const auto& c : h.generators()) CHECK_FALSE(g.dot(c));
}

TEST_CASE("macwilliams") {
  auto rm = weight_enumerator(hamming16_dual());
  auto h = macwilliams_transform(rm, 32);
  CHECK(h == weight_enumerator(hamming16()));
  CHECK(macwilliams_transform(h, 2048) == rm);
  auto xn = from_map(8, {{0, 1}});
  auto full = macwilliams_transform(xn, 1);
  for (int w = 0; w <= 8; ++w) {
    std::int64_t b = 1;
    for (int i = 1; i <= w; ++i) b = b * (8 - w + i) / i;
    CHECK(full[w] == b);
  }
  CHECK_THROWS_AS(macwilliams_transform(rm, 64), fbm::ConsistencyError);
}

TEST_CASE("macwilliams on random subcodes") {
  std::mt19937 rng(20241016);
  for (int n : {8, 16}) {
    for (int i = 0; i < 100; ++i) {
      auto c = random_code(rng, n);
      auto d = dual_code(c);
      CHECK(d.dimension() == n - c.dimension());
      CHECK(dual_code(d) == c);
      auto we = weight_enumerator(c);
      CHECK(we.total() == (std::int64_t{1} << c.dimension()));
      CHECK(macwilliams_transform(we, we.total()) == weight_enumerator(d));
      CHECK(weight_enumerator(d) == brute_dual_enumerator(c));
    }
  }
}

TEST_CASE("coset enumerators") {
  auto h = hamming16();
  CHECK(coset_weight_enumerator(h, BitWord::parse("0000000000000001")) ==
        from_map(16, {{1, 1}, {3, 35}, {5, 273}, {7, 715}, {9, 715}, {11, 273}, {13, 35}, {15, 1}}));
  CHECK(coset_weight_enumerator(h, BitWord::parse("0000000000000011")) ==
        from_map(16, {{2, 8}, {4, 112}, {6, 504}, {8, 800}, {10, 504}, {12, 112}, {14, 8}}));
  auto even8 = even_weight_code(8);
  CHECK(coset_weight_enumerator(even8, BitWord::parse("10000000")) ==
        from_map(8, {{1, 8}, {3, 56}, {5, 56}, {7, 8}}));
  // Depends only on the coset.
  auto r = BitWord::parse("0000000000000011");
  for (const auto& g : h.generators())
    CHECK(coset_weight_enumerator(h, r ^ g) == coset_weight_enumerator(h, r));
}

TEST_CASE("coset representatives") {
  auto h = hamming16();
  auto reps = coset_representatives(h);
  REQUIRE(reps.size() == 32);
  int by_weight[17] = {};
  for (const auto& r : reps) ++by_weight[r.weight()];
  CHECK(by_weight[0] == 1);
  CHECK(by_weight[1] == 16);
  CHECK(by_weight[2] == 15);
  auto dual = dual_code(h);
  for (std::size_t i = 0; i < reps.size(); ++i)
    for (std::size_t j = i + 1; j < reps.size(); ++j) CHECK_FALSE(h.contains(reps[i] ^ reps[j]));
  auto sum = WeightEnumerator::empty(16);
  for (const auto& r : reps) {
    auto we = coset_weight_enumerator(h, r);
    for (int w = 0; w <= 16; ++w) sum.counts[w] += we[w];
  }
  CHECK(sum == macwilliams_transform(from_map(16, {{0, 1}}), 1));
  CHECK(coset_representatives(full_space(16)) == std::vector<BitWord>{BitWord::zero(16)});
  CHECK(coset_representatives(hamming16_dual()).size() == 2048);
}

TEST_CASE("steiner system") {
  auto h = hamming16();
  auto s3 = steiner_property(h, 4, 3);
  CHECK(s3.holds);
  CHECK(s3.cover_counts.size() == 560);
  CHECK(s3.blocks == 140);
  auto s2 = steiner_property(h, 4, 2);
  CHECK_FALSE(s2.holds);
  CHECK(s2.min_cover == 7);
  CHECK(s2.max_cover == 7);
  CHECK_FALSE(steiner_property(build_code({}, 16), 4, 3).holds);
}

TEST_CASE("bit words") {
  auto w = BitWord::parse("1000000000000001");
  CHECK(w[0]);
  CHECK(w[15]);
  CHECK(w.weight() == 2);
  CHECK(w.to_string() == "1000000000000001");
  CHECK(BitWord::unit(16, 0) > BitWord::unit(16, 1));
  CHECK_THROWS_AS(BitWord::parse("10a"), fbm::InputError);
}
