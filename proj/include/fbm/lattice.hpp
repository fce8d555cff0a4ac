#pragma once

// Integral lattices given by Gram matrices, with the constructions used for
// N, the Barnes-Wall lattice and the Lorentzian lattices built from them.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fbm/codes.hpp"
#include "fbm/cyclotomic.hpp"
#include "fbm/linalg.hpp"
#include "fbm/rational.hpp"

namespace fbm::lat {

struct Lattice {
  std::string label;
  la::QMatrix gram;
  // Optional embedding: basis rows in an ambient Q^d whose form is
  // ambient_scale times the standard dot product.
  std::optional<la::QMatrix> basis;
  Rational ambient_scale = 1;

  int rank() const { return static_cast<int>(gram.rows()); }
  Rational determinant() const;
  bool is_integral() const;
  bool is_even() const;
  Rational inner(const std::vector<Rational>& a, const std::vector<Rational>& b) const;
  Rational norm(const std::vector<Rational>& v) const { return inner(v, v); }
  Rational norm(const IntVector& v) const;
  // Ambient coordinates of a vector given in basis coordinates.
  std::vector<Rational> embed(const IntVector& v) const;
};

// Validates symmetry and nondegeneracy.
Lattice make_lattice(std::string label, la::QMatrix gram);

Lattice integer_lattice(int n);
// {x in Z^n : x mod 2 in code}, Euclidean form.
Lattice construction_a(const codes::LinearCode& code);
// {x / sqrt 2 : x mod 2 in the Reed-Muller code, sum x = 0 mod 4}.
Lattice barnes_wall_16();
// Gram [[0,-1],[-1,0]].
Lattice hyperbolic_plane();
// Multiplies the form by k; throws InputError for k = 0.
Lattice rescale(const Lattice& l, const Rational& k);
Lattice direct_sum(const Lattice& a, const Lattice& b);
// Gram inverse; the basis is the dual basis when an embedding exists.
Lattice dual_lattice(const Lattice& l);

// L'/L for an integral lattice, via the Smith normal form of the Gram.
class DiscriminantGroup {
 public:
  explicit DiscriminantGroup(const Lattice& l);

  const std::vector<Integer>& invariant_factors() const { return factors_; }
  std::uint64_t size() const { return size_; }
  // Representative in lattice coordinates with entries in [0,1).
  std::vector<Rational> element(std::uint64_t index) const;
  // Index of the class of a dual vector (lattice coordinates). Throws
  // InputError if the vector is not in the dual.
  std::uint64_t index_of(const std::vector<Rational>& dual_vector) const;
  // Norm of the class in Q/2Z, in [0,2); needs an even lattice.
  Rational norm(std::uint64_t index) const;
  std::vector<Rational> generator(std::size_t i) const { return generators_[i]; }

 private:
  la::QMatrix gram_;
  la::QMatrix vinv_;
  std::vector<Integer> factors_;
  std::vector<std::vector<Rational>> generators_;
  std::uint64_t size_ = 1;
};

struct GenusInvariants {
  int positive = 0, negative = 0;
  Rational determinant;
  bool even = false;
  std::vector<Integer> invariant_factors;
  std::map<Rational, std::uint64_t> norm_counts;  // class norms in [0,2)
  cyc::Cyclotomic gauss_sum;                      // sum of exp(pi i norm)
  // Gauss sum equals sqrt|D| exp(2 pi i signature / 8) (checked when |D| is a square).
  std::optional<bool> milgram;

  bool operator==(const GenusInvariants& o) const;
  std::string to_string() const;
};

// Throws ResourceError beyond rank 24 or |det| > 2^20.
GenusInvariants genus_invariants(const Lattice& l);

}  // namespace fbm::lat
