#include "fbm/codes.hpp"

#include <algorithm>
#include <bit>
#include <sstream>
#include <unordered_map>

#include <gmpxx.h>

#include "fbm/errors.hpp"

namespace fbm::codes {
namespace {

void check_length(int length) {
  if (length < 0 || length > kMaxLength) throw InputError("code length out of range: " + std::to_string(length));
}

std::uint32_t mask_of(int length) {
  return length == 32 ? 0xffffffffu : ((1u << length) - 1u);
}

// Position of the highest set bit, or -1.
int top_bit(std::uint32_t v) { return v == 0 ? -1 : 31 - std::countl_zero(v); }

std::vector<std::uint32_t> echelon(std::vector<std::uint32_t> rows) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t r : rows) {
    for (std::uint32_t p : out)
      if (r & (1u << top_bit(p))) r ^= p;
    if (r == 0) continue;
    int t = top_bit(r);
    for (auto& p : out)
      if (p & (1u << t)) p ^= r;
    out.push_back(r);
  }
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

std::int64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

BitWord::BitWord(int length, std::uint32_t bits) : length_(length), bits_(bits) {
  check_length(length);
  if (bits & ~mask_of(length)) throw InputError("bits exceed word length");
}

BitWord BitWord::unit(int length, int coordinate) {
  if (coordinate < 0 || coordinate >= length) throw InputError("coordinate out of range");
  return BitWord(length, 1u << (length - 1 - coordinate));
}

BitWord BitWord::all_ones(int length) { return BitWord(length, mask_of(length)); }

BitWord BitWord::parse(std::string_view text) {
  std::uint32_t bits = 0;
  int n = 0;
  for (char c : text) {
    if (c == ' ' || c == ',') continue;
    if (c != '0' && c != '1') throw InputError("bad bit character in word");
    if (++n > kMaxLength) throw InputError("word too long");
    bits = (bits << 1) | static_cast<std::uint32_t>(c == '1');
  }
  if (n == 0) throw InputError("empty word");
  return BitWord(n, bits);
}

int BitWord::weight() const { return std::popcount(bits_); }

bool BitWord::operator[](int coordinate) const {
  return (bits_ >> (length_ - 1 - coordinate)) & 1u;
}

BitWord BitWord::with(int coordinate, bool value) const {
  std::uint32_t m = 1u << (length_ - 1 - coordinate);
  return BitWord(length_, value ? (bits_ | m) : (bits_ & ~m));
}

BitWord BitWord::operator^(const BitWord& other) const {
  if (length_ != other.length_) throw InputError("length mismatch");
  return BitWord(length_, bits_ ^ other.bits_);
}

BitWord BitWord::operator&(const BitWord& other) const {
  if (length_ != other.length_) throw InputError("length mismatch");
  return BitWord(length_, bits_ & other.bits_);
}

bool BitWord::dot(const BitWord& other) const { return (*this & other).weight() & 1; }

std::string BitWord::to_string() const {
  std::string s;
  for (int i = 0; i < length_; ++i) s.push_back((*this)[i] ? '1' : '0');
  return s;
}

std::strong_ordering BitWord::operator<=>(const BitWord& other) const {
  if (auto c = length_ <=> other.length_; c != 0) return c;
  return bits_ <=> other.bits_;
}

WeightEnumerator WeightEnumerator::empty(int length) {
  return WeightEnumerator{length, std::vector<std::int64_t>(length + 1, 0)};
}

std::int64_t WeightEnumerator::total() const {
  std::int64_t t = 0;
  for (auto c : counts) t += c;
  return t;
}

std::string WeightEnumerator::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (int w = 0; w <= length; ++w) {
    if (counts[w] == 0) continue;
    if (!first) os << ' ';
    os << w << ':' << counts[w];
    first = false;
  }
  return os.str();
}

std::string WeightEnumerator::to_polynomial() const {
  std::ostringstream os;
  bool first = true;
  for (int w = 0; w <= length; ++w) {
    std::int64_t c = counts[w];
    if (c == 0) continue;
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << '-';
    first = false;
    std::int64_t a = c < 0 ? -c : c;
    std::vector<std::string> parts;
    if (a != 1) parts.push_back(std::to_string(a));
    int zeros = length - w;
    if (zeros == 1) parts.push_back("x");
    else if (zeros > 1) parts.push_back("x^" + std::to_string(zeros));
    if (w == 1) parts.push_back("y");
    else if (w > 1) parts.push_back("y^" + std::to_string(w));
    if (parts.empty()) parts.push_back("1");
    for (std::size_t i = 0; i < parts.size(); ++i) os << (i ? "*" : "") << parts[i];
  }
  if (first) os << '0';
  return os.str();
}

LinearCode::LinearCode(int length, std::vector<std::uint32_t> echelon_rows)
    : length_(length), rows_(echelon(std::move(echelon_rows))) {
  check_length(length);
  for (auto r : rows_)
    if (r & ~mask_of(length)) throw InputError("row exceeds code length");
}

std::vector<BitWord> LinearCode::generators() const {
  std::vector<BitWord> g;
  for (auto r : rows_) g.emplace_back(length_, r);
  return g;
}

bool LinearCode::contains(const BitWord& word) const {
  if (word.length() != length_) return false;
  std::uint32_t r = word.bits();
  for (auto p : rows_)
    if (r & (1u << top_bit(p))) r ^= p;
  return r == 0;
}

std::vector<BitWord> LinearCode::codewords() const {
  if (dimension() > 24) throw ResourceError("code dimension too large to enumerate");
  std::vector<BitWord> out;
  out.reserve(std::size_t{1} << dimension());
  for (std::size_t i = 0; i < (std::size_t{1} << dimension()); ++i) {
    std::uint32_t v = 0;
    for (int j = 0; j < dimension(); ++j)
      if ((i >> j) & 1) v ^= rows_[j];
    out.emplace_back(length_, v);
  }
  return out;
}

LinearCode build_code(std::span<const BitWord> generators, int length) {
  if (generators.empty()) {
    if (length < 0) throw InputError("empty generator list needs an explicit length");
    return LinearCode(length, {});
  }
  int n = generators.front().length();
  if (length >= 0 && length != n) throw InputError("generator length differs from code length");
  std::vector<std::uint32_t> rows;
  for (const auto& g : generators) {
    if (g.length() != n) throw InputError("generators have mixed lengths");
    rows.push_back(g.bits());
  }
  return LinearCode(n, std::move(rows));
}

LinearCode dual_code(const LinearCode& code) {
  const int n = code.length();
  // Pivot positions as bit indices; the free columns parametrize the dual.
  std::vector<int> pivots;
  std::uint32_t pivot_mask = 0;
  for (auto r : code.rows()) {
    pivots.push_back(top_bit(r));
    pivot_mask |= 1u << top_bit(r);
  }
  std::vector<std::uint32_t> rows;
  for (int f = 0; f < n; ++f) {
    if (pivot_mask & (1u << f)) continue;
    std::uint32_t v = 1u << f;
    for (std::size_t i = 0; i < pivots.size(); ++i)
      if (code.rows()[i] & (1u << f)) v |= 1u << pivots[i];
    rows.push_back(v);
  }
  return LinearCode(n, std::move(rows));
}

LinearCode hamming16_dual() {
  static const char* rows[] = {
      "1111111111111111", "1111111100000000", "1111000011110000",
      "1100110011001100", "1010101010101010"};
  std::vector<BitWord> g;
  for (auto r : rows) g.push_back(BitWord::parse(r));
  return build_code(g);
}

LinearCode hamming16() { return dual_code(hamming16_dual()); }

LinearCode even_weight_code(int length) {
  return dual_code(LinearCode(length, {mask_of(length)}));
}

LinearCode full_space(int length) { return dual_code(LinearCode(length, {})); }

WeightEnumerator weight_enumerator(const LinearCode& code) {
  return coset_weight_enumerator(code, BitWord::zero(code.length()));
}

WeightEnumerator coset_weight_enumerator(const LinearCode& code, const BitWord& representative) {
  if (representative.length() != code.length()) throw InputError("representative length differs from code length");
  if (code.dimension() > 24) throw ResourceError("code dimension too large to enumerate");
  auto we = WeightEnumerator::empty(code.length());
  const auto& rows = code.rows();
  const std::uint64_t size = std::uint64_t{1} << rows.size();
  std::uint32_t v = representative.bits();
  ++we.counts[std::popcount(v)];
  // Gray code walk: one row flip per step.
  for (std::uint64_t i = 1; i < size; ++i) {
    v ^= rows[std::countr_zero(i)];
    ++we.counts[std::popcount(v)];
  }
  return we;
}

WeightEnumerator macwilliams_transform(const WeightEnumerator& w, std::int64_t code_size) {
  if (code_size <= 0) throw InputError("code size must be positive");
  const int n = w.length;
  auto out = WeightEnumerator::empty(n);
  for (int j = 0; j <= n; ++j) {
    // Krawtchouk: coefficient of x^{n-j} y^j in (x+y)^{n-i} (x-y)^i.
    mpz_class s = 0;
    for (int i = 0; i <= n; ++i) {
      if (w.counts[i] == 0) continue;
      mpz_class k = 0;
      for (int a = 0; a <= std::min(i, j); ++a) {
        mpz_class term = mpz_class(binomial(i, a)) * binomial(n - i, j - a);
        if (a & 1) k -= term;
        else k += term;
      }
      s += k * mpz_class(static_cast<long>(w.counts[i]));
    }
    mpz_class q, r;
    mpz_class d(static_cast<long>(code_size));
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), s.get_mpz_t(), d.get_mpz_t());
    if (r != 0) throw ConsistencyError("MacWilliams transform has a non-integer coefficient; wrong code size");
    out.counts[j] = q.get_si();
  }
  return out;
}

SteinerCertificate steiner_property(const LinearCode& code, int block_weight, int t) {
  const int n = code.length();
  if (!(n >= block_weight && block_weight >= t && t >= 0)) throw InputError("need length >= block weight >= t >= 0");
  SteinerCertificate cert;
  cert.block_weight = block_weight;
  cert.t = t;
  // Index t-subsets by their bit mask.
  std::vector<std::uint32_t> subsets;
  for (std::uint32_t m = 0; m < (std::uint64_t{1} << n); ++m) {
    if (std::popcount(m) == t) subsets.push_back(m);
    if (n == 32 && m == 0xffffffffu) break;
  }
  // Lexicographic order on the coordinate sets: coordinate 0 is the top bit.
  std::sort(subsets.begin(), subsets.end(), std::greater<>());
  std::unordered_map<std::uint32_t, std::size_t> index;
  for (std::size_t i = 0; i < subsets.size(); ++i) index[subsets[i]] = i;
  cert.cover_counts.assign(subsets.size(), 0);
  for (const auto& w : code.codewords()) {
    if (w.weight() != block_weight) continue;
    ++cert.blocks;
    // Every t-subset of the support.
    std::vector<int> support;
    for (int b = 0; b < n; ++b)
      if (w.bits() & (1u << b)) support.push_back(b);
    std::vector<int> pick(t);
    for (int i = 0; i < t; ++i) pick[i] = i;
    while (true) {
      std::uint32_t m = 0;
      for (int i : pick) m |= 1u << support[i];
      ++cert.cover_counts[index.at(m)];
      int i = t - 1;
      while (i >= 0 && pick[i] == static_cast<int>(support.size()) - t + i) --i;
      if (i < 0) break;
      ++pick[i];
      for (int j = i + 1; j < t; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  auto [lo, hi] = std::minmax_element(cert.cover_counts.begin(), cert.cover_counts.end());
  cert.min_cover = *lo;
  cert.max_cover = *hi;
  cert.holds = cert.blocks > 0 && cert.min_cover == 1 && cert.max_cover == 1;
  return cert;
}

std::uint32_t syndrome(const LinearCode& dual, const BitWord& word) {
  std::uint32_t s = 0;
  for (std::size_t i = 0; i < dual.rows().size(); ++i)
    if (std::popcount(dual.rows()[i] & word.bits()) & 1) s |= 1u << i;
  return s;
}

std::vector<BitWord> coset_representatives(const LinearCode& code) {
  const int n = code.length();
  const int codim = n - code.dimension();
  if (codim > 12) throw ResourceError("codimension too large for coset enumeration");
  const auto dual = dual_code(code);
  const std::size_t count = std::size_t{1} << codim;
  std::vector<BitWord> reps;
  std::vector<bool> seen(count, false);
  // Words by increasing weight, then lexicographically; the first hit of
  // each syndrome is the representative.
  for (int w = 0; w <= n && reps.size() < count; ++w) {
    std::vector<std::uint32_t> layer;
    std::vector<int> pick(w);
    for (int i = 0; i < w; ++i) pick[i] = i;
    while (true) {
      std::uint32_t m = 0;
      for (int i : pick) m |= 1u << i;
      layer.push_back(m);
      int i = w - 1;
      while (i >= 0 && pick[i] == n - w + i) --i;
      if (i < 0) break;
      ++pick[i];
      for (int j = i + 1; j < w; ++j) pick[j] = pick[j - 1] + 1;
    }
    std::sort(layer.begin(), layer.end());
    for (auto m : layer) {
      BitWord b(n, m);
      auto s = syndrome(dual, b);
      if (!seen[s]) {
        seen[s] = true;
        reps.push_back(b);
        if (reps.size() == count) break;
      }
    }
  }
  return reps;
}

}  // namespace fbm::codes
