#pragma once

// Binary linear codes of small length (at most 32), their cosets and
// weight enumerators.

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fbm::codes {

inline constexpr int kMaxLength = 32;

// A word in F_2^n. Coordinate 0 is the most significant of the n stored
// bits, so numeric order of bits() is lexicographic order of the word.
class BitWord {
 public:
  BitWord() = default;
  BitWord(int length, std::uint32_t bits);

  static BitWord zero(int length) { return BitWord(length, 0); }
  static BitWord unit(int length, int coordinate);
  static BitWord all_ones(int length);
  // "0110..." with coordinate 0 first.
  static BitWord parse(std::string_view text);

  int length() const { return length_; }
  std::uint32_t bits() const { return bits_; }
  int weight() const;
  bool operator[](int coordinate) const;
  BitWord with(int coordinate, bool value) const;

  BitWord operator^(const BitWord& other) const;
  BitWord operator&(const BitWord& other) const;
  bool dot(const BitWord& other) const;

  std::string to_string() const;

  bool operator==(const BitWord&) const = default;
  std::strong_ordering operator<=>(const BitWord& other) const;

 private:
  int length_ = 0;
  std::uint32_t bits_ = 0;
};

// Counts of words by Hamming weight, index 0..length.
struct WeightEnumerator {
  int length = 0;
  std::vector<std::int64_t> counts;

  static WeightEnumerator empty(int length);
  std::int64_t total() const;
  std::int64_t operator[](int w) const { return counts.at(w); }
  // "0:1 8:30 16:1" with zero counts omitted.
  std::string to_string() const;
  // "x^16 + 30*x^8*y^8 + y^16"; x marks zero coordinates, y marks ones.
  std::string to_polynomial() const;
  bool operator==(const WeightEnumerator&) const = default;
};

// Linear code stored in reduced row echelon form. Two codes compare equal
// iff they are the same subspace.
class LinearCode {
 public:
  LinearCode() = default;
  LinearCode(int length, std::vector<std::uint32_t> echelon_rows);

  int length() const { return length_; }
  int dimension() const { return static_cast<int>(rows_.size()); }
  const std::vector<std::uint32_t>& rows() const { return rows_; }
  std::vector<BitWord> generators() const;

  bool contains(const BitWord& word) const;
  // All 2^dimension codewords in the order of the binary counter over the
  // echelon rows. Dimension must be at most 24.
  std::vector<BitWord> codewords() const;

  bool operator==(const LinearCode&) const = default;

 private:
  int length_ = 0;
  std::vector<std::uint32_t> rows_;  // sorted by leading bit, descending
};

// Throws InputError on mixed lengths. An empty list needs the length.
LinearCode build_code(std::span<const BitWord> generators, int length = -1);
LinearCode dual_code(const LinearCode& code);

// The 5x16 first order Reed-Muller generator matrix.
LinearCode hamming16_dual();
// Extended Hamming code [16,11,4]: the dual of the Reed-Muller code.
LinearCode hamming16();
// Even-weight subcode of F_2^n.
LinearCode even_weight_code(int length);
LinearCode full_space(int length);

// Throws ResourceError above dimension 24.
WeightEnumerator weight_enumerator(const LinearCode& code);
WeightEnumerator coset_weight_enumerator(const LinearCode& code, const BitWord& representative);
// W(x+y, x-y) / code_size. Throws ConsistencyError if a coefficient is not
// an integer (wrong code_size).
WeightEnumerator macwilliams_transform(const WeightEnumerator& w, std::int64_t code_size);

struct SteinerCertificate {
  bool holds = false;
  int block_weight = 0;
  int t = 0;
  std::int64_t blocks = 0;
  // Cover count of every t-subset, subsets in lexicographic order.
  std::vector<int> cover_counts;
  int min_cover = 0;
  int max_cover = 0;
};

// True iff every t-subset of coordinates lies in exactly one codeword of
// the given weight.
SteinerCertificate steiner_property(const LinearCode& code, int block_weight, int t);

// One representative per coset of the code: the member of least weight,
// ties broken lexicographically. Sorted by (weight, word).
std::vector<BitWord> coset_representatives(const LinearCode& code);

// Coset identifier: the syndrome against the dual code's echelon rows.
std::uint32_t syndrome(const LinearCode& dual, const BitWord& word);

}  // namespace fbm::codes
