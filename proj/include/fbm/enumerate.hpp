#pragma once

// Exact short-vector enumeration in positive definite lattices and their
// cosets, plus slices of Lorentzian lattices.
//
// Pruning uses fixed-point integer intervals (scale 2^30) that always
// contain the true Fincke-Pohst ranges; every leaf is then tested with an
// exact int128 norm, so the output is exact.

#include <omp.h>

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "fbm/linalg.hpp"
#include "fbm/rational.hpp"

namespace fbm::en {

using i128 = __int128;

// LLL-reduced form of a positive definite Gram matrix with its fixed-point
// LDL data; shared by enumerators on the same Gram.
struct GramReduction {
  int n = 0;
  Integer gs;                         // lcm of the Gram denominators
  std::vector<std::int64_t> t, tinv;  // reduced basis and its inverse, n x n
  std::vector<std::int64_t> g;        // reduced integer Gram (scaled by gs)
  std::vector<std::int64_t> d_lo;     // fp30
  std::vector<std::int64_t> mu_lo, mu_hi;  // fp30, mu(j,i) at [j*n+i]
};
// Memoized by Gram matrix.
std::shared_ptr<const GramReduction> reduce_gram(const la::QMatrix& gram);

class EllipsoidEnumerator {
 public:
  // Vectors y + shift, y in Z^n, with min_norm <= (y+shift)^T gram (y+shift)
  // <= max_norm. An empty shift means zero; min_norm < 0 means no lower bound.
  EllipsoidEnumerator(const la::QMatrix& gram, const Rational& max_norm,
                      std::vector<Rational> shift = {}, const Rational& min_norm = -1);
  EllipsoidEnumerator(std::shared_ptr<const GramReduction> red, const Rational& max_norm,
                      const std::vector<Rational>& shift = {}, const Rational& min_norm = -1);

  int dim() const { return n_; }
  // norm = norm_num / norm_denominator().
  const Integer& norm_denominator() const { return norm_den_; }
  Rational norm(i128 norm_num) const;

  // f(std::span<const int64_t> y, i128 norm_num) for every vector; y are the
  // integer coordinates (without the shift) in the input basis.
  template <class F>
  void for_each(F&& f) const;

  // Independent subtrees after fixing the top `depth` levels (at most
  // dim() - 1), in a fixed order.
  struct Task {
    std::vector<std::int64_t> prefix;
  };
  std::vector<Task> split(int depth) const;
  template <class F>
  void run(const Task& task, F&& f) const;

  // One accumulator per task, visited with visit(acc, y, norm_num). The
  // serial and parallel versions return identical vectors.
  template <class Acc, class Visit>
  std::vector<Acc> map_tasks_serial(int depth, const Acc& init, Visit visit) const;
  template <class Acc, class Visit>
  std::vector<Acc> map_tasks_parallel(int depth, const Acc& init, Visit visit) const;

  std::uint64_t count() const;

 private:
  struct State;
  template <class F>
  void descend(State& s, int level, F& f) const;
  // Fixes x at `level` (> 0) if the interval bound allows it.
  bool apply(State& s, int level, std::int64_t x) const;
  bool feasible(const State& s, int level, std::int64_t x) const;
  std::int64_t nearest(const State& s, int level) const;
  void init_state(State& s) const;

  int n_ = 0;
  int out_dim_ = 0;
  Integer norm_den_;
  i128 max_num_ = 0;
  i128 min_num_ = 0;
  bool has_min_ = false;
  bool empty_ = false;
  i128 budget_fp60_ = 0;
  std::int64_t e_ = 1;  // common denominator of the reduced shift
  std::vector<std::int64_t> shift_num_;   // e * shift in reduced coords
  std::vector<std::int64_t> g_;           // reduced integer Gram, n x n
  std::vector<std::int64_t> t_;           // reduced basis rows, n x out_dim
  std::vector<std::int64_t> d_lo_;        // fp30
  std::vector<std::int64_t> mu_lo_, mu_hi_;  // fp30, mu(j,i) at [j*n+i]
  std::vector<std::int64_t> c0_lo_, c0_hi_;  // fp30
};

struct EllipsoidEnumerator::State {
  std::vector<std::int64_t> x, z;
  std::vector<i128> rem;         // fp60 budget bound before choosing level i
  std::vector<i128> exact;       // exact partial norm of levels > i, at [i]
  std::vector<i128> lin;         // lin[i*n+k], k <= i
  std::vector<std::int64_t> cen_lo, cen_hi;  // [i*n+k]
  std::vector<std::int64_t> acc;             // [i*out+c]
  std::vector<std::int64_t> y;
};

// Sorted list of all vectors (integer coordinates) of norm <= max_norm.
std::vector<IntVector> enumerate_by_norm(const la::QMatrix& gram, const Rational& max_norm,
                                         const std::vector<Rational>& shift = {},
                                         const Rational& min_norm = -1);

// Vectors v of the lattice with Gram `gram` (signature (n-1,1)) with
// (v,u) = pairing and norm_min <= v^2 <= norm_max. u is given in lattice
// coordinates and must satisfy u^2 < 0.
class LorentzianSlice {
 public:
  LorentzianSlice(const la::QMatrix& gram, const std::vector<Rational>& u, const Rational& pairing,
                  const Rational& norm_min, const Rational& norm_max);

  bool empty() const { return !inner_; }
  // f(std::span<const int64_t> v, const Rational& norm) in lattice coordinates.
  template <class F>
  void for_each(F&& f) const;
  std::vector<IntVector> collect() const;

 private:
  int n_ = 0;
  std::vector<std::int64_t> v0_;
  std::vector<std::int64_t> k_;  // n x (n-1), column j of K at [i*(n-1)+j]
  Rational offset_;
  std::unique_ptr<EllipsoidEnumerator> inner_;
};

// ---- implementation ----

template <class F>
void EllipsoidEnumerator::descend(State& s, int level, F& f) const {
  // Zig-zag outward from the nearest integer to the centre; the interval
  // bound is unimodal in x, so the first failure ends each direction.
  const std::int64_t x0 = nearest(s, level);
  if (level > 0) {
    for (std::int64_t x = x0;; ++x) {
      if (!apply(s, level, x)) break;
      descend(s, level - 1, f);
    }
    for (std::int64_t x = x0 - 1;; --x) {
      if (!apply(s, level, x)) break;
      descend(s, level - 1, f);
    }
    return;
  }
  const i128 g00 = g_[0];
  const i128 base = s.exact[0];
  const i128 lin0 = s.lin[0];
  const std::int64_t* acc = &s.acc[0];
  const std::int64_t* t0 = &t_[0];
  auto leaf = [&](std::int64_t x) {
    if (!feasible(s, 0, x)) return false;
    const i128 z = static_cast<i128>(e_) * x + shift_num_[0];
    const i128 norm = base + g00 * z * z + 2 * z * lin0;
    if (norm <= max_num_ && (!has_min_ || norm >= min_num_)) {
      for (int c = 0; c < out_dim_; ++c) s.y[c] = acc[c] + x * t0[c];
      f(std::span<const std::int64_t>(s.y.data(), out_dim_), norm);
    }
    return true;
  };
  for (std::int64_t x = x0; leaf(x); ++x) {
  }
  for (std::int64_t x = x0 - 1; leaf(x); --x) {
  }
}

template <class F>
void EllipsoidEnumerator::for_each(F&& f) const {
  if (empty_) return;
  State s;
  init_state(s);
  descend(s, n_ - 1, f);
}

template <class F>
void EllipsoidEnumerator::run(const Task& task, F&& f) const {
  if (empty_) return;
  State s;
  init_state(s);
  int level = n_ - 1;
  for (std::int64_t x : task.prefix) {
    if (!apply(s, level, x)) return;
    --level;
  }
  descend(s, level, f);
}

template <class Acc, class Visit>
std::vector<Acc> EllipsoidEnumerator::map_tasks_serial(int depth, const Acc& init, Visit visit) const {
  const auto tasks = split(depth);
  std::vector<Acc> out(tasks.size(), init);
  for (std::size_t i = 0; i < tasks.size(); ++i)
    run(tasks[i], [&](std::span<const std::int64_t> y, i128 norm) { visit(out[i], y, norm); });
  return out;
}

template <class Acc, class Visit>
std::vector<Acc> EllipsoidEnumerator::map_tasks_parallel(int depth, const Acc& init, Visit visit) const {
  const auto tasks = split(depth);
  std::vector<Acc> out(tasks.size(), init);
  const long count = static_cast<long>(tasks.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < count; ++i)
    run(tasks[i], [&](std::span<const std::int64_t> y, i128 norm) { visit(out[i], y, norm); });
  return out;
}

template <class F>
void LorentzianSlice::for_each(F&& f) const {
  if (!inner_) return;
  std::vector<std::int64_t> v(n_);
  const int m = n_ - 1;
  inner_->for_each([&](std::span<const std::int64_t> y, i128 num) {
    for (int i = 0; i < n_; ++i) {
      std::int64_t s = v0_[i];
      for (int j = 0; j < m; ++j) s += k_[i * m + j] * y[j];
      v[i] = s;
    }
    f(std::span<const std::int64_t>(v.data(), n_), inner_->norm(num) + offset_);
  });
}

}  // namespace fbm::en
