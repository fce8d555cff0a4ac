#pragma once

// Root system of the generalized Kac-Moody algebra with root lattice
// L' = Lambda16' + II11(2)'. L = Lambda16 + II11(2) with elements (s, m, n)
// and norm s^2 - 4mn; s is stored in doubled coordinates a with s^2 = a^2/8
// (Lambda16 sits in Z^16 with form x.y/2 and Lambda16' in (1/2)Z^16), and
// m, n as m2 = 2m, n2 = 2n.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fbm/lattice.hpp"
#include "fbm/qseries.hpp"
#include "fbm/rational.hpp"

namespace fbm::gkm {

struct RootVector {
  std::array<std::int64_t, 16> a{};
  std::int64_t m2 = 0;
  std::int64_t n2 = 0;

  bool is_zero() const;
  auto operator<=>(const RootVector&) const = default;
};

RootVector operator+(const RootVector& x, const RootVector& y);
RootVector operator-(const RootVector& x, const RootVector& y);
RootVector operator*(std::int64_t k, const RootVector& x);

// 8 (x, y) and 8 x^2, both integers.
std::int64_t pairing8(const RootVector& x, const RootVector& y);
std::int64_t norm8(const RootVector& x);
Rational pairing(const RootVector& x, const RootVector& y);
Rational norm(const RootVector& x);

// rho = (0, 0, 1/2).
RootVector weyl_vector();
// rho'_ref = (0, 1/2, 1), norm -2, pairs negatively with every simple root.
RootVector reference_vector();
// -(rho'_ref, v) and the specialization exponent -4 (rho'_ref, v) = 4 height.
Rational height(const RootVector& v);
std::int64_t t_exponent(const RootVector& v);

bool in_dual(const RootVector& v);     // v in L'
bool in_lattice(const RootVector& v);  // v in L

// "(0,1/2,-1/2)" for s = 0, otherwise "([a1,...,a16],m,n)".
std::string to_string(const RootVector& v);
// 18 comma separated integers a1..a16,m2,n2. Throws InputError unless the
// vector lies in L'.
RootVector parse_root_vector(const std::string& text);

// Gram matrix of L' in the basis (dual basis of Lambda16, (1/2,0), (0,1/2)).
const la::QMatrix& dual_gram();
// Lattice coordinates of v in that basis, and back.
IntVector coordinates(const RootVector& v);
RootVector from_coordinates(std::span<const std::int64_t> c);

// dim g(alpha) = a_gamma(-alpha^2/2); throws InputError for alpha = 0 or
// alpha outside L'.
Integer root_multiplicity(const RootVector& alpha);
// Coefficient c(n) of h (0 off the grid or below q^-1).
Integer h_coefficient(const Rational& n);
int cartan_dimension();
std::pair<int, int> signature();

// Real simple roots of height at most height_bound, sorted by height and
// then by vector.
std::vector<RootVector> simple_roots(const Rational& height_bound);
// (n rho, multiplicity) for 1 <= n <= n_max.
std::vector<std::pair<RootVector, Integer>> imaginary_simple_roots(int n_max);

// Chamber of rho: (v, alpha) <= 0 for every simple root alpha.
struct ChamberReduction {
  RootVector input;
  RootVector reduced;
  std::vector<RootVector> word;  // simple roots, in the order applied
  int parity = 1;
  bool outside_guarantee = false;  // v^2 > 0 or v not in the cone of rho
};
inline constexpr std::uint64_t kMaxSteps = 1000000;
RootVector reflect(const RootVector& v, const RootVector& alpha);
// Simple root with the largest positive pairing with v (ties: smallest
// vector), if any. Exhaustive for v.m2 > 0; for other inputs only roots of
// height <= kScanHeight2 / 2 are searched and NonterminationError is thrown when
// none of them pairs positively.
inline constexpr int kScanHeight2 = 5;  // 2 * height
std::optional<RootVector> positive_simple_root(const RootVector& v);
// Throws NonterminationError after max_steps reflections or when an entry
// leaves (-2^28, 2^28).
ChamberReduction reduce_to_chamber(const RootVector& v, std::uint64_t max_steps = kMaxSteps);

// Positive roots with the given height and norm range, from a slice of L'.
std::vector<RootVector> roots_at_height(const Rational& h, const Rational& norm_min, const Rational& norm_max);

// Counts of Lambda16' vectors per norm k <= max_norm, split by membership
// in Lambda16, with one representative for each nonempty class.
struct ShellTable {
  int max_norm = 0;
  std::vector<std::array<std::uint64_t, 2>> counts;  // [k][in Lambda16]
  std::vector<std::array<std::optional<RootVector>, 2>> reps;  // s only (m2 = n2 = 0)
};
inline constexpr int kShellCap = 10;
// Cached in memory and, when a cache directory is set, on disk.
const ShellTable& shell_table(int max_norm);
// Default: $FBM_CACHE_DIR if set, otherwise no disk cache.
void set_cache_dir(std::optional<std::string> dir);
std::optional<std::string> cache_dir();
// Text form of a table, as stored in the cache directory.
void write_shell_table(const ShellTable& t, std::ostream& os);
std::optional<ShellTable> read_shell_table(std::istream& is, int max_norm);

struct OrbitPoint {
  RootVector v;
  int parity = 1;
  auto operator<=>(const OrbitPoint&) const = default;
};
// w(rho) for w in W with height <= bound, sorted by height then vector.
std::vector<OrbitPoint> weyl_orbit_points(const Rational& bound, bool parallel = true);

// One-variable specializations e^alpha -> t^(-4 (rho'_ref, alpha)) of both
// sides of the denominator identity through t^bound. The t-series are
// QSeries on the /48 grid with t in place of q.
inline constexpr int kDenominatorCap = 12;
qs::QSeries denominator_product_side(int bound);
qs::QSeries denominator_sum_side(int bound, bool parallel = true);

struct DenominatorReport {
  bool equal = false;
  int bound = 0;
  qs::QSeries product, sum;
  std::optional<int> first_difference;  // t-exponent
  std::uint64_t orbit_points = 0;
  Integer root_count;  // positive roots counted with multiplicity
};
DenominatorReport verify_denominator(int bound, bool parallel = true);

// mult(alpha) = c(-alpha^2) + [alpha in L] c(-alpha^2/2) for every alpha in
// L' with 0 < height <= bound and alpha^2 <= 2.
struct ConsistencyReport {
  bool holds = true;
  Rational bound;
  std::uint64_t roots_checked = 0;
  std::uint64_t classes_checked = 0;  // (height, m, n, s^2, s in Lambda16)
  std::optional<std::string> counterexample;
};
inline constexpr int kConsistencyCap2 = 8;  // 2 * height
ConsistencyReport exponent_consistency(const Rational& bound);

}  // namespace fbm::gkm
