#pragma once

// Characters with weight-lattice coefficients. A weight s = u / sqrt 2 is
// keyed by the integer vector u, and theta series use q^(s^2/4) = q^(u^2/8).

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fbm/codes.hpp"
#include "fbm/lattice.hpp"
#include "fbm/qseries.hpp"

namespace fbm::ch {

inline constexpr int kRank = 16;
using Key = std::array<std::int8_t, kRank>;

struct Term {
  int exp48;
  Key key;
  std::int64_t coeff;
  auto operator<=>(const Term&) const = default;
};

// Finite sum of coeff * q^(exp48/48) * e^(key/sqrt 2), known below trunc.
// Terms are sorted by (exponent, key), merged and nonzero.
class WeightedSeries {
 public:
  WeightedSeries() = default;
  WeightedSeries(int rank, std::vector<Term> terms, int trunc);

  int rank() const { return rank_; }
  int trunc() const { return trunc_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::int64_t coefficient(int exp48, const Key& key) const;

  bool operator==(const WeightedSeries&) const = default;
  // Lines "exp/48<TAB>u1,...,u_rank<TAB>coeff".
  std::string to_text() const;

 private:
  int rank_ = kRank;
  std::vector<Term> terms_;
  int trunc_ = qs::kExact;
};

// Sum of coefficients per exponent.
qs::QSeries specialize_z0(const WeightedSeries& ws);
// Scalar times weighted series, truncated below trunc.
WeightedSeries scale_by(const qs::QSeries& s, const WeightedSeries& ws, int trunc);
// Keys concatenated; ranks add up to at most 16.
WeightedSeries outer_product(const WeightedSeries& a, const WeightedSeries& b, int trunc);

// Rank-1 theta series through q^(order/48): kind 0 has u = 0 mod 4, kind 1
// u = 2 mod 4, kind 2 u odd.
WeightedSeries theta_one_dim(int kind, int order48);
// Same at z = 0, as a scalar series.
qs::QSeries theta_scalar(int kind, int order48);

struct Level2Characters {
  WeightedSeries chi0, chi1, chi2;
};
Level2Characters level2_characters(int order48);

// g0 + h, g0 or g1 according to the class norm (in Q/2Z) of gamma.
// Throws InputError for non-integral norms.
qs::QSeries f_gamma(bool is_zero, const Rational& norm, const qs::WeightMinus8& w);

// Largest order (in units of q) for full materialization of the weighted
// character, for the streamed comparison, and for the scalar character.
inline constexpr int kMaterializeCap = 2;
inline constexpr int kCompareCap = 3;
inline constexpr int kScalarCap = 6;

// The character of V from the code description and from the lattice N.
// Throw ResourceError above kMaterializeCap.
WeightedSeries chi_v_code_form(int order);
WeightedSeries chi_v_lattice_form(int order);

// Scalar z = 0 character from the code description, through q^order.
qs::QSeries chi_v_code_form_z0(int order);

struct CompareReport {
  bool equal = true;
  int order = 0;
  std::uint64_t keys_compared = 0;    // distinct (exponent, key) pairs
  std::uint64_t units = 0;
  std::optional<std::string> first_mismatch;
  bool integral_exponents = true;     // all exponents integral and >= -1
  bool nonnegative = true;
};

// Streams the comparison stratum by stratum. Throws ResourceError above
// kCompareCap.
CompareReport compare_character_forms(int order, bool parallel = true);

struct CensusStratum {
  codes::BitWord delta;
  std::uint64_t labels = 0;
  std::uint64_t multiplicity = 0;
};
struct Census {
  std::vector<CensusStratum> strata;
};
// Irreducible module labels per delta in the Reed-Muller code, from the
// label rule: i_k = 2 exactly where delta_k = 1, and an odd number of
// i_k = 1 on the remaining slots (every c in H16 for delta = 0).
Census decomposition_census();

// Work units used by compare_character_forms, exposed for tests and the
// benchmark: the terms of one unit from either construction.
struct Unit {
  codes::BitWord delta;
  int coset = -1;  // H16 coset syndrome for delta = 0
};
std::vector<Unit> comparison_units();
std::vector<Term> code_unit_terms(const Unit& u, int order);
std::vector<Term> lattice_unit_terms(const Unit& u, int order);

}  // namespace fbm::ch
