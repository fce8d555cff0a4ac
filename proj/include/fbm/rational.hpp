#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace fbm {

using Integer = mpz_class;
using Rational = mpq_class;

using IntVector = std::vector<std::int64_t>;
using RatVector = std::vector<Rational>;

inline Rational make_rational(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline bool is_integral(const Rational& r) { return r.get_den() == 1; }

Integer floor_of(const Rational& r);
Integer ceil_of(const Rational& r);

// "a" for integers, "a/b" otherwise.
std::string to_string(const Rational& r);
std::string to_string(const Integer& z);

// Accepts "a", "-a", "a/b". Throws InputError.
Rational parse_rational(std::string_view text);

// Fits-in-int64 conversion; throws ResourceError on overflow.
std::int64_t to_int64(const Integer& z);

// r mod m, in [0, m).
Rational mod_positive(const Rational& r, const Rational& m);

}  // namespace fbm
