#include "fbm/characters.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

#include "fbm/enumerate.hpp"
#include "fbm/errors.hpp"

namespace fbm::ch {
namespace {

using Scalar = std::vector<std::pair<int, std::int64_t>>;

bool key_less(const Term& a, const Term& b) {
  if (a.exp48 != b.exp48) return a.exp48 < b.exp48;
  return a.key < b.key;
}

// Sort by (exponent, key), add equal entries, drop zeros.
void normalize(std::vector<Term>& t) {
  std::sort(t.begin(), t.end(), key_less);
  std::size_t out = 0;
  for (std::size_t i = 0; i < t.size();) {
    Term acc = t[i];
    std::size_t j = i + 1;
    while (j < t.size() && t[j].exp48 == acc.exp48 && t[j].key == acc.key) acc.coeff += t[j++].coeff;
    if (acc.coeff != 0) t[out++] = acc;
    i = j;
  }
  t.resize(out);
}

Scalar to_scalar(const qs::QSeries& s) {
  Scalar out;
  for (const auto& [e, c] : s.terms()) {
    if (!is_integral(c)) throw ConsistencyError("scalar coefficient is not an integer");
    out.emplace_back(e, to_int64(c.get_num()));
  }
  return out;
}

std::string key_string(const Key& k, int rank) {
  std::ostringstream os;
  for (int i = 0; i < rank; ++i) os << (i ? "," : "") << static_cast<int>(k[i]);
  return os.str();
}

int theta_exp(int u) { return 6 * u * u; }

// Values u of one coordinate for each theta kind, by increasing exponent.
std::vector<int> kind_values(int kind, int max_exp48) {
  std::vector<int> v;
  for (int a = 0; theta_exp(a) <= max_exp48; ++a) {
    bool ok = kind == 0 ? a % 4 == 0 : kind == 1 ? a % 4 == 2 : a % 2 == 1;
    if (!ok) continue;
    v.push_back(a);
    if (a != 0) v.push_back(-a);
  }
  std::stable_sort(v.begin(), v.end(), [](int x, int y) { return theta_exp(x) < theta_exp(y); });
  return v;
}

int kind_min_exp(int kind) { return kind == 0 ? 0 : kind == 1 ? theta_exp(2) : theta_exp(1); }

struct Gamma {
  std::vector<Rational> shift;  // N basis
  codes::BitWord delta;
  int coset = -1;
  bool zero = false;
  Rational norm;
};

// Everything one order of the comparison needs, built once.
struct Context {
  int order48 = 0;
  codes::LinearCode h, rm;
  std::vector<codes::BitWord> h_words;
  std::vector<codes::BitWord> coset_reps;  // by syndrome
  std::vector<Scalar> coset_scalar;        // W_{H+r}(c0,c1) by syndrome
  Scalar f8_for_even_d, f8_for_odd_d;      // W_{F8_1+d}(c0,c1) c2^8
  Scalar all_ones;                         // 8 c2^16
  lat::Lattice n;
  std::vector<std::int64_t> n_basis;       // 16 x 16
  std::vector<Gamma> gammas;
  Scalar f_zero, f_even, f_odd;
};

int syndrome_of(const Context& c, const codes::BitWord& w) { return static_cast<int>(codes::syndrome(c.rm, w)); }

std::unique_ptr<Context> build_context(int order) {
  auto c = std::make_unique<Context>();
  c->order48 = order * qs::kGrid;
  const int trunc = c->order48 + 1;
  c->h = codes::hamming16();
  c->rm = codes::dual_code(c->h);
  c->h_words = c->h.codewords();
  const auto sf = qs::string_functions(std::max(c->order48, 0) + qs::kGrid);
  const auto wm = qs::weight_minus8_functions(std::max(c->order48, 0));

  c->coset_reps.assign(32, codes::BitWord::zero(16));
  c->coset_scalar.assign(32, {});
  for (const auto& rep : codes::coset_representatives(c->h)) {
    const int s = syndrome_of(*c, rep);
    c->coset_reps[s] = rep;
    auto we = codes::coset_weight_enumerator(c->h, rep);
    c->coset_scalar[s] = to_scalar(qs::evaluate_enumerator(we, sf.c0, sf.c1).truncated(trunc));
  }
  const auto f8 = codes::even_weight_code(8);
  const auto w_even = codes::weight_enumerator(f8);
  const auto w_odd = codes::coset_weight_enumerator(f8, codes::BitWord::unit(8, 0));
  const auto c2_8 = sf.c2.pow(8);
  // d even: F8_1 + d is the odd half; d odd: the even half.
  c->f8_for_even_d = to_scalar((qs::evaluate_enumerator(w_odd, sf.c0, sf.c1) * c2_8).truncated(trunc));
  c->f8_for_odd_d = to_scalar((qs::evaluate_enumerator(w_even, sf.c0, sf.c1) * c2_8).truncated(trunc));
  c->all_ones = to_scalar((sf.c2.pow(16) * Rational(8)).truncated(trunc));

  c->n = lat::construction_a(c->h);
  c->n_basis.resize(256);
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) c->n_basis[i * 16 + j] = to_int64((*c->n.basis)(i, j).get_num());
  lat::DiscriminantGroup dg(c->n);
  for (std::uint64_t i = 0; i < dg.size(); ++i) {
    Gamma g;
    g.shift = dg.element(i);
    g.zero = i == 0;
    g.norm = dg.norm(i);
    const auto amb = la::row_times(g.shift, *c->n.basis);
    std::uint32_t delta = 0, low = 0;
    for (int k = 0; k < 16; ++k) {
      Rational twice = amb[k] * 2;
      if (!is_integral(twice)) throw ConsistencyError("dual vector of N outside (1/2)Z^16");
      if (twice.get_num() % 2 != 0) delta |= 1u << (15 - k);
      else if (amb[k].get_num() % 2 != 0) low |= 1u << (15 - k);
    }
    g.delta = codes::BitWord(16, delta);
    if (delta == 0) g.coset = syndrome_of(*c, codes::BitWord(16, low));
    c->gammas.push_back(std::move(g));
  }
  c->f_zero = to_scalar(f_gamma(true, 0, wm));
  c->f_even = to_scalar(f_gamma(false, 0, wm));
  c->f_odd = to_scalar(f_gamma(false, 1, wm));
  return c;
}

const Context& context(int order) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<Context>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[order];
  if (!slot) slot = build_context(order);
  return *slot;
}

void emit(std::vector<Term>& out, const Key& key, int theta48, const Scalar& s, int order48) {
  for (const auto& [e, c] : s) {
    if (e + theta48 > order48) break;
    out.push_back(Term{e + theta48, key, c});
  }
}

// All products of one-dimensional thetas of the given kinds, times s.
void theta_products(std::vector<Term>& out, const std::array<int, kRank>& kinds, const Scalar& s, int order48) {
  if (s.empty()) return;
  const int budget = order48 - s.front().first;
  if (budget < 0) return;
  std::array<int, kRank + 1> suffix{};
  for (int i = kRank - 1; i >= 0; --i) suffix[i] = suffix[i + 1] + kind_min_exp(kinds[i]);
  if (suffix[0] > budget) return;
  std::array<std::vector<int>, 3> values;
  for (int k = 0; k < 3; ++k) values[k] = kind_values(k, budget);
  Key key{};
  auto dfs = [&](auto&& self, int i, int t) -> void {
    if (i == kRank) {
      emit(out, key, t, s, order48);
      return;
    }
    for (int u : values[kinds[i]]) {
      const int nt = t + theta_exp(u);
      if (nt + suffix[i + 1] > budget) break;
      key[i] = static_cast<std::int8_t>(u);
      self(self, i + 1, nt);
    }
  };
  dfs(dfs, 0, 0);
}

struct UnitResult {
  bool equal = true;
  std::uint64_t keys = 0;
  std::optional<std::string> mismatch;
  bool integral = true;
  bool nonnegative = true;
};

std::string term_string(const Term& t) {
  return qs::exponent_string(t.exp48) + " [" + key_string(t.key, kRank) + "] " + std::to_string(t.coeff);
}

UnitResult compare_unit(const Unit& u, int order) {
  auto a = code_unit_terms(u, order);
  auto b = lattice_unit_terms(u, order);
  UnitResult r;
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    ++r.keys;
    if (j == b.size() || (i < a.size() && key_less(a[i], b[j]))) {
      if (!r.mismatch) r.mismatch = "code form only: " + term_string(a[i]);
      r.equal = false;
      ++i;
    } else if (i == a.size() || key_less(b[j], a[i])) {
      if (!r.mismatch) r.mismatch = "lattice form only: " + term_string(b[j]);
      r.equal = false;
      ++j;
    } else {
      if (a[i].coeff != b[j].coeff) {
        if (!r.mismatch) r.mismatch = "code " + term_string(a[i]) + " vs lattice " + std::to_string(b[j].coeff);
        r.equal = false;
      }
      ++i;
      ++j;
    }
  }
  for (const auto& t : a) {
    if (t.exp48 % qs::kGrid != 0 || t.exp48 < -qs::kGrid) r.integral = false;
    if (t.coeff < 0) r.nonnegative = false;
  }
  return r;
}

}  // namespace

WeightedSeries::WeightedSeries(int rank, std::vector<Term> terms, int trunc)
    : rank_(rank), terms_(std::move(terms)), trunc_(trunc) {
  if (rank < 0 || rank > kRank) throw InputError("weighted series rank out of range");
  std::erase_if(terms_, [&](const Term& t) { return t.exp48 >= trunc_; });
  normalize(terms_);
}

std::int64_t WeightedSeries::coefficient(int exp48, const Key& key) const {
  if (exp48 >= trunc_) throw InputError("coefficient beyond the truncation");
  Term probe{exp48, key, 0};
  auto it = std::lower_bound(terms_.begin(), terms_.end(), probe, key_less);
  return it != terms_.end() && it->exp48 == exp48 && it->key == key ? it->coeff : 0;
}

std::string WeightedSeries::to_text() const {
  std::ostringstream os;
  for (const auto& t : terms_) os << t.exp48 << "/48\t" << key_string(t.key, rank_) << '\t' << t.coeff << '\n';
  return os.str();
}

qs::QSeries specialize_z0(const WeightedSeries& ws) {
  std::map<int, Rational> m;
  for (const auto& t : ws.terms()) m[t.exp48] += Rational(Integer(static_cast<long>(t.coeff)));
  return qs::QSeries(std::move(m), ws.trunc());
}

WeightedSeries scale_by(const qs::QSeries& s, const WeightedSeries& ws, int trunc) {
  int vw = ws.terms().empty() ? ws.trunc() : ws.terms().front().exp48;
  trunc = std::min({trunc, qs::exp_add(s.trunc(), vw), qs::exp_add(ws.trunc(), s.valuation())});
  const Scalar sc = to_scalar(s);
  std::vector<Term> out;
  for (const auto& t : ws.terms())
    for (const auto& [e, c] : sc) {
      if (e + t.exp48 >= trunc) break;
      out.push_back(Term{e + t.exp48, t.key, c * t.coeff});
    }
  return WeightedSeries(ws.rank(), std::move(out), trunc);
}

WeightedSeries outer_product(const WeightedSeries& a, const WeightedSeries& b, int trunc) {
  if (a.rank() + b.rank() > kRank) throw InputError("outer product exceeds rank 16");
  const int va = a.terms().empty() ? a.trunc() : a.terms().front().exp48;
  const int vb = b.terms().empty() ? b.trunc() : b.terms().front().exp48;
  trunc = std::min({trunc, qs::exp_add(a.trunc(), vb), qs::exp_add(b.trunc(), va)});
  std::vector<Term> out;
  for (const auto& x : a.terms())
    for (const auto& y : b.terms()) {
      if (x.exp48 + y.exp48 >= trunc) continue;
      Term t{x.exp48 + y.exp48, x.key, x.coeff * y.coeff};
      for (int i = 0; i < b.rank(); ++i) t.key[a.rank() + i] = y.key[i];
      out.push_back(t);
    }
  return WeightedSeries(a.rank() + b.rank(), std::move(out), trunc);
}

WeightedSeries theta_one_dim(int kind, int order48) {
  if (kind < 0 || kind > 2) throw InputError("theta kind must be 0, 1 or 2");
  std::vector<Term> t;
  for (int u : kind_values(kind, order48)) {
    Key k{};
    k[0] = static_cast<std::int8_t>(u);
    t.push_back(Term{theta_exp(u), k, 1});
  }
  return WeightedSeries(1, std::move(t), order48 + 1);
}

qs::QSeries theta_scalar(int kind, int order48) { return specialize_z0(theta_one_dim(kind, order48)); }

Level2Characters level2_characters(int order48) {
  const auto sf = qs::string_functions(std::max(order48, 0) + qs::kGrid);
  const int pad = order48 + qs::kGrid;
  const auto t0 = theta_one_dim(0, pad), t1 = theta_one_dim(1, pad), t2 = theta_one_dim(2, pad);
  const int trunc = order48 + 1;
  auto add = [&](const WeightedSeries& x, const WeightedSeries& y) {
    std::vector<Term> t = x.terms();
    t.insert(t.end(), y.terms().begin(), y.terms().end());
    return WeightedSeries(1, std::move(t), std::min({trunc, x.trunc(), y.trunc()}));
  };
  return {add(scale_by(sf.c0, t0, trunc), scale_by(sf.c1, t1, trunc)),
          add(scale_by(sf.c1, t0, trunc), scale_by(sf.c0, t1, trunc)), scale_by(sf.c2, t2, trunc)};
}

qs::QSeries f_gamma(bool is_zero, const Rational& norm, const qs::WeightMinus8& w) {
  if (!is_integral(norm)) throw InputError("class norm " + to_string(norm) + " is not integral");
  if (is_zero) return w.g0 + w.h;
  return mod_positive(norm, 2) == 0 ? w.g0 : w.g1;
}

std::vector<Unit> comparison_units() {
  std::vector<Unit> units;
  for (int r = 0; r < 32; ++r) units.push_back(Unit{codes::BitWord::zero(16), r});
  std::vector<codes::BitWord> deltas;
  for (const auto& w : codes::hamming16_dual().codewords())
    if (w.weight() > 0) deltas.push_back(w);
  std::sort(deltas.begin(), deltas.end(),
            [](const auto& a, const auto& b) { return std::pair(a.weight(), a) < std::pair(b.weight(), b); });
  for (const auto& d : deltas) units.push_back(Unit{d, -1});
  return units;
}

std::vector<Term> code_unit_terms(const Unit& u, int order) {
  const Context& c = context(order);
  std::vector<Term> out;
  std::array<int, kRank> kinds{};
  const int wt = u.delta.weight();
  if (wt == 0) {
    const auto& rep = c.coset_reps.at(u.coset);
    const Scalar& s = c.coset_scalar[u.coset];
    for (const auto& cw : c.h_words) {
      const auto d = cw ^ rep;
      for (int i = 0; i < kRank; ++i) kinds[i] = d[i] ? 1 : 0;
      theta_products(out, kinds, s, c.order48);
    }
  } else if (wt == 8) {
    std::vector<int> free;
    for (int i = 0; i < kRank; ++i) {
      if (u.delta[i]) kinds[i] = 2;
      else free.push_back(i);
    }
    for (std::uint32_t d = 0; d < 256; ++d) {
      for (int j = 0; j < 8; ++j) kinds[free[j]] = (d >> (7 - j)) & 1;
      theta_products(out, kinds, std::popcount(d) % 2 == 0 ? c.f8_for_even_d : c.f8_for_odd_d, c.order48);
    }
  } else if (wt == 16) {
    kinds.fill(2);
    theta_products(out, kinds, c.all_ones, c.order48);
  } else {
    throw InputError("delta is not in the Reed-Muller code");
  }
  normalize(out);
  return out;
}

std::vector<Term> lattice_unit_terms(const Unit& u, int order) {
  const Context& c = context(order);
  std::vector<Term> out;
  for (const auto& g : c.gammas) {
    if (g.delta != u.delta || g.coset != u.coset) continue;
    const Scalar& f = g.zero ? c.f_zero : (g.norm == 0 ? c.f_even : c.f_odd);
    if (f.empty()) continue;
    // Theta exponent y^2/2 <= order - v(f), i.e. y^2 <= (order48 - v)/24.
    const Rational bound = Rational(c.order48 - f.front().first) / 24;
    if (bound < 0) continue;
    // Doubled ambient shift: 2 * shift * B is integral.
    std::array<std::int64_t, kRank> base{};
    const auto amb = la::row_times(g.shift, *c.n.basis);
    for (int k = 0; k < kRank; ++k) base[k] = to_int64(Rational(amb[k] * 2).get_num());
    en::EllipsoidEnumerator e(c.n.gram, bound, g.shift);
    e.for_each([&](std::span<const std::int64_t> x, en::i128) {
      Key key{};
      int t = 0;
      for (int k = 0; k < kRank; ++k) {
        std::int64_t v = base[k];
        for (int i = 0; i < kRank; ++i) v += 2 * x[i] * c.n_basis[i * 16 + k];
        key[k] = static_cast<std::int8_t>(v);
        t += theta_exp(static_cast<int>(v));
      }
      emit(out, key, t, f, c.order48);
    });
  }
  normalize(out);
  return out;
}

WeightedSeries chi_v_code_form(int order) {
  if (order < -1 || order > kMaterializeCap)
    throw ResourceError("weighted character materialization is limited to order " + std::to_string(kMaterializeCap));
  std::vector<Term> all;
  for (const auto& u : comparison_units()) {
    auto t = code_unit_terms(u, order);
    all.insert(all.end(), t.begin(), t.end());
  }
  return WeightedSeries(kRank, std::move(all), order * qs::kGrid + 1);
}

WeightedSeries chi_v_lattice_form(int order) {
  if (order < -1 || order > kMaterializeCap)
    throw ResourceError("weighted character materialization is limited to order " + std::to_string(kMaterializeCap));
  std::vector<Term> all;
  for (const auto& u : comparison_units()) {
    auto t = lattice_unit_terms(u, order);
    all.insert(all.end(), t.begin(), t.end());
  }
  return WeightedSeries(kRank, std::move(all), order * qs::kGrid + 1);
}

qs::QSeries chi_v_code_form_z0(int order) {
  if (order < -1 || order > kScalarCap)
    throw ResourceError("scalar character is limited to order " + std::to_string(kScalarCap));
  const int order48 = order * qs::kGrid;
  const int trunc = order48 + 1;
  const auto sf = qs::string_functions(std::max(order48, 0) + qs::kGrid);
  const auto th0 = theta_scalar(0, order48 + qs::kGrid), th1 = theta_scalar(1, order48 + qs::kGrid),
             th2 = theta_scalar(2, order48 + qs::kGrid);
  const auto h = codes::hamming16();
  qs::QSeries total = qs::QSeries::constant(0);
  for (const auto& rep : codes::coset_representatives(h)) {
    const auto we = codes::coset_weight_enumerator(h, rep);
    total += (qs::evaluate_enumerator(we, sf.c0, sf.c1) * qs::evaluate_enumerator(we, th0, th1)).truncated(trunc);
  }
  const auto f8 = codes::even_weight_code(8);
  const auto w_even = codes::weight_enumerator(f8);
  const auto w_odd = codes::coset_weight_enumerator(f8, codes::BitWord::unit(8, 0));
  const qs::QSeries mixed = qs::evaluate_enumerator(w_odd, sf.c0, sf.c1) * qs::evaluate_enumerator(w_even, th0, th1) +
                            qs::evaluate_enumerator(w_even, sf.c0, sf.c1) * qs::evaluate_enumerator(w_odd, th0, th1);
  total += (mixed * sf.c2.pow(8) * th2.pow(8) * Rational(30)).truncated(trunc);
  total += (sf.c2.pow(16) * th2.pow(16) * Rational(8)).truncated(trunc);
  return total.truncated(trunc);
}

CompareReport compare_character_forms(int order, bool parallel) {
  if (order < -1 || order > kCompareCap)
    throw ResourceError("character comparison is limited to order " + std::to_string(kCompareCap));
  context(order);
  const auto units = comparison_units();
  std::vector<UnitResult> results(units.size());
  const long count = static_cast<long>(units.size());
  if (parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < count; ++i) results[i] = compare_unit(units[i], order);
  } else {
    for (long i = 0; i < count; ++i) results[i] = compare_unit(units[i], order);
  }
  CompareReport rep;
  rep.order = order;
  rep.units = units.size();
  for (const auto& r : results) {
    rep.keys_compared += r.keys;
    rep.equal = rep.equal && r.equal;
    rep.integral_exponents = rep.integral_exponents && r.integral;
    rep.nonnegative = rep.nonnegative && r.nonnegative;
    if (!rep.first_mismatch && r.mismatch) rep.first_mismatch = r.mismatch;
  }
  return rep;
}

Census decomposition_census() {
  Census c;
  for (const auto& u : comparison_units()) {
    if (u.delta.weight() == 0 && u.coset != 0) continue;
    CensusStratum s{u.delta, 0, 1};
    const int wt = u.delta.weight();
    if (wt == 0) {
      s.labels = codes::weight_enumerator(codes::hamming16()).total();
    } else if (wt == 16) {
      s.labels = 1;
      s.multiplicity = 8;
    } else {
      // Labels on the free slots: i_k in {0,1} with an odd number of ones.
      for (std::uint32_t v = 0; v < (1u << (16 - wt)); ++v)
        if (std::popcount(v) % 2 == 1) ++s.labels;
    }
    c.strata.push_back(s);
  }
  return c;
}

}  // namespace fbm::ch
