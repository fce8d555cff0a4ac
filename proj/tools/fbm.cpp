// fbm: command line front end for codes, q-series, characters and the root
// system. Exit codes: 0 ok, 1 verification failed, 2 usage, 3 resource,
// 4 nontermination.

#include <CLI11.hpp>
#include <json.hpp>

#include <functional>
#include <iostream>
#include <sstream>

#include "fbm/characters.hpp"
#include "fbm/codes.hpp"
#include "fbm/enumerate.hpp"
#include "fbm/errors.hpp"
#include "fbm/gkm.hpp"
#include "fbm/lattice.hpp"
#include "fbm/qseries.hpp"

using json = nlohmann::ordered_json;
using namespace fbm;

namespace {

enum Exit { kOk = 0, kFailed = 1, kUsage = 2, kResource = 3, kNonterminating = 4 };

constexpr int kMaxSeriesOrder = 200;
constexpr int kSimpleRootHeight2 = 6;  // 2 * height
constexpr int kOrbitHeight2 = 6;

struct Report {
  std::string text;
  json data = json::object();
  int status = kOk;

  void line(const std::string& s) { text += s + '\n'; }
};

std::string str(const Integer& z) { return z.get_str(); }
std::string str(const Rational& r) { return fbm::to_string(r); }
template <class T>
std::string str(T x) requires std::is_integral_v<T> {
  return std::to_string(x);
}

json series_json(const qs::QSeries& s) {
  json terms = json::array();
  for (const auto& [e, c] : s.terms()) terms.push_back({{"exponent", str(qs::from_grid(e))}, {"coefficient", str(c)}});
  json out{{"terms", terms}};
  out["known_below"] = s.is_exact() ? json("exact") : json(str(qs::from_grid(s.trunc())));
  return out;
}

json enumerator_json(const codes::WeightEnumerator& w) {
  json counts = json::object();
  for (int i = 0; i <= w.length; ++i)
    if (w[i] != 0) counts[std::to_string(i)] = str(w[i]);
  return counts;
}

json vector_json(const gkm::RootVector& v) {
  json a = json::array();
  for (auto x : v.a) a.push_back(str(x));
  return {{"a", a}, {"m2", str(v.m2)}, {"n2", str(v.n2)}, {"text", gkm::to_string(v)}};
}

// ---- codes ----

struct NamedCode {
  codes::LinearCode code;
  std::optional<codes::BitWord> offset;  // set for f8-odd, a coset
};

NamedCode named_code(const std::string& name) {
  if (name == "h16") return {codes::hamming16(), std::nullopt};
  if (name == "h16-dual") return {codes::hamming16_dual(), std::nullopt};
  if (name == "f8-even") return {codes::even_weight_code(8), std::nullopt};
  if (name == "f8-odd") return {codes::even_weight_code(8), codes::BitWord::unit(8, 0)};
  throw InputError("unknown code '" + name + "' (h16, h16-dual, f8-even, f8-odd)");
}

const codes::LinearCode& plain_code(const NamedCode& c, const std::string& name) {
  if (c.offset) throw InputError(name + " is a coset, not a code");
  return c.code;
}

Report codes_enumerator(const std::string& name, const std::string& coset, bool polynomial) {
  const NamedCode c = named_code(name);
  std::optional<codes::BitWord> rep = c.offset;
  if (!coset.empty()) {
    const auto w = codes::BitWord::parse(coset);
    if (w.length() != c.code.length())
      throw InputError("coset representative has length " + std::to_string(w.length()) + ", code has " +
                       std::to_string(c.code.length()));
    rep = rep ? *rep ^ w : w;
  }
  const auto w = rep ? codes::coset_weight_enumerator(c.code, *rep) : codes::weight_enumerator(c.code);
  Report r;
  r.line(polynomial ? w.to_polynomial() : w.to_string());
  r.data = {{"code", name}, {"coset", rep ? rep->to_string() : ""}, {"counts", enumerator_json(w)},
            {"polynomial", w.to_polynomial()}};
  return r;
}

std::string subset_word(int t) {
  if (t == 1) return "points";
  if (t == 2) return "pairs";
  if (t == 3) return "triples";
  return std::to_string(t) + "-subsets";
}

Report codes_steiner(const std::string& name, int block, int t) {
  const NamedCode c = named_code(name);
  const auto& code = plain_code(c, name);
  if (t < 1 || block < t || block > code.length()) throw InputError("need 1 <= t <= block <= length");
  const auto cert = codes::steiner_property(code, block, t);
  Report r;
  std::ostringstream os;
  os << "S(" << t << ',' << block << ',' << code.length() << "): ";
  if (cert.holds) {
    os << "OK (" << cert.cover_counts.size() << ' ' << subset_word(t) << ')';
  } else {
    os << "FAILED (" << cert.cover_counts.size() << ' ' << subset_word(t) << ", covered " << cert.min_cover << " to "
       << cert.max_cover << " times)";
    r.status = kFailed;
  }
  r.line(os.str());
  r.data = {{"code", name},
            {"t", str(t)},
            {"block_weight", str(block)},
            {"holds", cert.holds},
            {"blocks", str(cert.blocks)},
            {"subsets", str(cert.cover_counts.size())},
            {"min_cover", str(cert.min_cover)},
            {"max_cover", str(cert.max_cover)}};
  return r;
}

Report codes_cosets(const std::string& name) {
  const NamedCode c = named_code(name);
  const auto& code = plain_code(c, name);
  const auto reps = codes::coset_representatives(code);
  std::map<int, std::uint64_t> by_weight;
  for (const auto& w : reps) ++by_weight[w.weight()];
  Report r;
  std::ostringstream head;
  head << reps.size() << " cosets, leader weights";
  json weights = json::object();
  for (const auto& [w, n] : by_weight) {
    head << ' ' << w << ':' << n;
    weights[std::to_string(w)] = str(n);
  }
  r.line(head.str());
  json rows = json::array();
  for (const auto& w : reps) {
    const auto e = codes::coset_weight_enumerator(code, w);
    r.line(w.to_string() + '\t' + e.to_string());
    rows.push_back({{"leader", w.to_string()}, {"counts", enumerator_json(e)}});
  }
  r.data = {{"code", name}, {"cosets", str(reps.size())}, {"leader_weights", weights}, {"table", rows}};
  return r;
}

Report codes_macwilliams(const std::string& name) {
  const NamedCode c = named_code(name);
  const auto& code = plain_code(c, name);
  const auto w = codes::weight_enumerator(code);
  const auto t = codes::macwilliams_transform(w, std::int64_t{1} << code.dimension());
  const auto d = codes::weight_enumerator(codes::dual_code(code));
  const auto back = codes::macwilliams_transform(t, std::int64_t{1} << (code.length() - code.dimension()));
  const bool ok = t == d && back == w;
  Report r;
  r.line("code:        " + w.to_string());
  r.line("transform:   " + t.to_string());
  r.line("dual code:   " + d.to_string());
  r.line(ok ? "MacWilliams: OK" : "MacWilliams: FAILED");
  r.status = ok ? kOk : kFailed;
  r.data = {{"code", name},
            {"enumerator", enumerator_json(w)},
            {"transform", enumerator_json(t)},
            {"dual", enumerator_json(d)},
            {"ok", ok}};
  return r;
}

// ---- q-series ----

void check_series_order(int order) {
  if (order < 1) throw InputError("--order must be at least 1");
  if (order > kMaxSeriesOrder) throw ResourceError("--order is limited to " + std::to_string(kMaxSeriesOrder));
}

std::string render(const qs::QSeries& s, bool pretty) { return pretty ? s.to_string() + '\n' : s.to_text(); }

Report qseries_verify(int order) {
  check_series_order(order);
  const auto checks = qs::verify_modular_identities(order * qs::kGrid);
  Report r;
  json items = json::array();
  bool all = true;
  for (const auto& c : checks) {
    all = all && c.holds;
    json item{{"name", c.name}, {"holds", c.holds}, {"through", str(qs::from_grid(c.compared_through48))}};
    if (c.first_difference) {
      item["first_difference"] = str(qs::from_grid(*c.first_difference));
      r.line(c.name + ": FAILED at " + qs::exponent_string(*c.first_difference));
    }
    items.push_back(item);
  }
  if (all) r.line(std::to_string(checks.size()) + " identities OK");
  r.status = all ? kOk : kFailed;
  r.data = {{"order", str(order)}, {"identities", items}, {"ok", all}};
  return r;
}

Report qseries_show(const std::string& what, int order, bool pretty) {
  if (what == "verify-lemma") return qseries_verify(order);
  check_series_order(order);
  const int o48 = order * qs::kGrid;
  Report r;
  r.data["order"] = str(order);
  auto emit = [&](const std::string& name, const qs::QSeries& s, bool header) {
    if (header) r.text += "# " + name + '\n';
    r.text += render(s, pretty);
    r.data[name] = series_json(s);
  };
  if (what == "h" || what == "g0" || what == "g1") {
    const auto w = qs::weight_minus8_functions(o48);
    const qs::QSeries& s = what == "h" ? w.h : what == "g0" ? w.g0 : w.g1;
    emit(what, s.truncated(o48 + 1), false);
  } else if (what == "c0" || what == "c1" || what == "c2" || what == "string") {
    const auto sf = qs::string_functions(o48);
    if (what == "string") {
      emit("c0", sf.c0, true);
      emit("c1", sf.c1, true);
      emit("c2", sf.c2, true);
    } else {
      emit(what, what == "c0" ? sf.c0 : what == "c1" ? sf.c1 : sf.c2, false);
    }
  } else if (what == "j") {
    emit("j", qs::jay_function(o48), false);
  } else if (what == "delta") {
    emit("delta", qs::eta_quotient({{qs::EtaScale::One, 24}}, o48), false);
  } else {
    throw InputError("unknown series '" + what + "' (h, g0, g1, c0, c1, c2, string, j, delta, verify-lemma)");
  }
  return r;
}

// ---- characters ----

Report char_verify(int order, bool serial) {
  if (order < -1) throw InputError("--order must be at least -1");
  const auto rep = ch::compare_character_forms(order, !serial);
  Report r;
  const bool ok = rep.equal && rep.integral_exponents && rep.nonnegative;
  if (ok) {
    r.line("EQUAL through q^" + std::to_string(order) + " (" + str(rep.keys_compared) + " keys compared)");
  } else if (!rep.equal) {
    r.line("DIFFERENT through q^" + std::to_string(order) + ": " + rep.first_mismatch.value_or("?"));
  } else {
    r.line("FAILED through q^" + std::to_string(order) + ": exponents or coefficients out of range");
  }
  r.status = ok ? kOk : kFailed;
  r.data = {{"order", str(order)},
            {"equal", rep.equal},
            {"keys_compared", str(rep.keys_compared)},
            {"units", str(rep.units)},
            {"integral_exponents", rep.integral_exponents},
            {"nonnegative", rep.nonnegative}};
  if (rep.first_mismatch) r.data["first_mismatch"] = *rep.first_mismatch;
  return r;
}

Report char_dim(int order) {
  if (order < -1) throw InputError("--order must be at least -1");
  if (order > ch::kScalarCap) throw ResourceError("char dim is limited to order " + std::to_string(ch::kScalarCap));
  const auto chi = ch::chi_v_code_form_z0(order);
  const auto oracle = (qs::jay_function(order * qs::kGrid) + qs::QSeries::constant(48)).truncated(chi.trunc());
  const bool ok = chi.agrees_with(oracle);
  std::ostringstream os;
  json dims = json::object();
  for (int n = -1; n <= order; ++n) {
    const auto c = chi.integer_coefficient(n * qs::kGrid);
    os << (n > -1 ? " " : "") << "q^" << n << ':' << c.get_str();
    dims[std::to_string(n)] = c.get_str();
  }
  os << " (J+48: " << (ok ? "OK" : "FAILED") << ')';
  Report r;
  r.line(os.str());
  r.status = ok ? kOk : kFailed;
  r.data = {{"order", str(order)}, {"dimensions", dims}, {"matches_j_plus_48", ok}};
  return r;
}

Report char_series(int order, const std::string& form, bool z0) {
  if (order < -1) throw InputError("--order must be at least -1");
  ch::WeightedSeries ws;
  if (form == "code")
    ws = ch::chi_v_code_form(order);
  else if (form == "lattice")
    ws = ch::chi_v_lattice_form(order);
  else
    throw InputError("--form must be code or lattice");
  Report r;
  if (z0) {
    const auto s = ch::specialize_z0(ws);
    r.text = s.to_text();
    r.data = {{"order", str(order)}, {"form", form}, {"z0", series_json(s)}};
    return r;
  }
  r.text = ws.to_text();
  json terms = json::array();
  for (const auto& t : ws.terms()) {
    json key = json::array();
    for (auto k : t.key) key.push_back(str(static_cast<int>(k)));
    terms.push_back({{"exponent", str(qs::from_grid(t.exp48))}, {"key", key}, {"coefficient", str(t.coeff)}});
  }
  r.data = {{"order", str(order)}, {"form", form}, {"terms", terms}};
  return r;
}

Report char_census() {
  const auto c = ch::decomposition_census();
  Report r;
  json rows = json::array();
  std::uint64_t total = 0;
  for (const auto& s : c.strata) {
    r.line(s.delta.to_string() + '\t' + str(s.labels) + '\t' + str(s.multiplicity));
    rows.push_back({{"delta", s.delta.to_string()}, {"labels", str(s.labels)}, {"multiplicity", str(s.multiplicity)}});
    total += s.labels;
  }
  r.line("total labels " + str(total));
  r.data = {{"strata", rows}, {"total_labels", str(total)}};
  return r;
}

// ---- lattices ----

Report lattice_barnes_wall() {
  const auto bw = lat::barnes_wall_16();
  const auto dual = lat::dual_lattice(bw);
  std::uint64_t kissing = 0, dual2 = 0;
  for (const auto& v : en::enumerate_by_norm(bw.gram, 4))
    if (bw.norm(v) == 4) ++kissing;
  for (const auto& v : en::enumerate_by_norm(dual.gram, 2))
    if (dual.norm(v) == 2) ++dual2;
  const bool ok = kissing == 4320 && bw.determinant() == 256 && dual2 == 4320;
  Report r;
  r.line("kissing number " + str(kissing) + ", det " + str(bw.determinant()) + ", dual norm 2 vectors " + str(dual2));
  r.status = ok ? kOk : kFailed;
  r.data = {{"kissing", str(kissing)}, {"determinant", str(bw.determinant())}, {"dual_norm2", str(dual2)}, {"ok", ok}};
  return r;
}

Report lattice_genus() {
  const auto a = lat::genus_invariants(
      lat::direct_sum(lat::construction_a(codes::hamming16()), lat::hyperbolic_plane()));
  const auto b = lat::genus_invariants(
      lat::direct_sum(lat::barnes_wall_16(), lat::rescale(lat::hyperbolic_plane(), 2)));
  Report r;
  r.line("N + II(1,1):          " + a.to_string());
  r.line("BW16 + II(1,1)(2):    " + b.to_string());
  r.line(a == b ? "genus invariants EQUAL" : "genus invariants DIFFERENT");
  r.status = a == b ? kOk : kFailed;
  r.data = {{"n_side", a.to_string()}, {"bw_side", b.to_string()}, {"equal", a == b}};
  return r;
}

// ---- root system ----

Rational parse_height(const std::string& text, int cap2) {
  const Rational h = parse_rational(text);
  if (h <= 0) throw InputError("height must be positive");
  if (h * 2 > cap2) throw ResourceError("height is limited to " + str(make_rational(cap2, 2)));
  return h;
}

Report gkm_mult(const std::string& text) {
  const auto v = gkm::parse_root_vector(text);
  Report r;
  Integer m;
  if (v.is_zero()) {
    m = gkm::cartan_dimension();
  } else {
    m = gkm::root_multiplicity(v);
  }
  r.line(m.get_str());
  r.data = {{"vector", vector_json(v)}, {"norm", str(gkm::norm(v))}, {"in_L", gkm::in_lattice(v)}, {"multiplicity", m.get_str()}};
  return r;
}

Report gkm_simple_roots(const std::string& height) {
  const Rational h = parse_height(height, kSimpleRootHeight2);
  Report r;
  json rows = json::array();
  for (const auto& a : gkm::simple_roots(h)) {
    r.line(gkm::to_string(a) + " norm " + str(gkm::norm(a)));
    json row = vector_json(a);
    row["norm"] = str(gkm::norm(a));
    row["height"] = str(gkm::height(a));
    rows.push_back(row);
  }
  r.data = {{"height", str(h)}, {"roots", rows}};
  return r;
}

Report gkm_imaginary(int n) {
  Report r;
  json rows = json::array();
  if (n > 64) throw ResourceError("--count is limited to 64");
  for (const auto& [v, m] : gkm::imaginary_simple_roots(n)) {
    r.line(gkm::to_string(v) + " multiplicity " + m.get_str());
    json row = vector_json(v);
    row["multiplicity"] = m.get_str();
    rows.push_back(row);
  }
  r.data = {{"roots", rows}};
  return r;
}

Report gkm_reduce(const std::string& text, std::uint64_t max_steps) {
  const auto v = gkm::parse_root_vector(text);
  const auto red = gkm::reduce_to_chamber(v, max_steps);
  Report r;
  if (red.outside_guarantee) std::cerr << "warning: input is not a cone vector of nonpositive norm\n";
  r.line("reduced " + gkm::to_string(red.reduced));
  r.line("parity " + std::to_string(red.parity));
  r.line("steps " + std::to_string(red.word.size()));
  json word = json::array();
  for (const auto& a : red.word) word.push_back(vector_json(a));
  r.data = {{"input", vector_json(v)},
            {"reduced", vector_json(red.reduced)},
            {"parity", str(red.parity)},
            {"word", word},
            {"outside_guarantee", red.outside_guarantee}};
  return r;
}

Report gkm_orbit(const std::string& bound, bool serial) {
  const Rational h = parse_height(bound, kOrbitHeight2);
  const auto pts = gkm::weyl_orbit_points(h, !serial);
  Report r;
  json rows = json::array();
  for (const auto& p : pts) {
    r.line(gkm::to_string(p.v) + (p.parity > 0 ? " +1" : " -1"));
    json row = vector_json(p.v);
    row["parity"] = str(p.parity);
    rows.push_back(row);
  }
  r.data = {{"bound", str(h)}, {"points", rows}};
  return r;
}

Report gkm_denominator(int bound, bool serial) {
  const auto rep = gkm::verify_denominator(bound, !serial);
  Report r;
  if (rep.equal)
    r.line("product == sum through t^" + std::to_string(bound));
  else
    r.line("product != sum: first difference at t^" + std::to_string(*rep.first_difference));
  r.status = rep.equal ? kOk : kFailed;
  r.data = {{"bound", str(bound)},
            {"equal", rep.equal},
            {"product", series_json(rep.product)},
            {"sum", series_json(rep.sum)},
            {"orbit_points", str(rep.orbit_points)},
            {"positive_roots", str(rep.root_count)}};
  if (rep.first_difference) r.data["first_difference"] = str(*rep.first_difference);
  return r;
}

Report gkm_consistency(const std::string& bound) {
  const Rational h = parse_height(bound, gkm::kConsistencyCap2);
  const auto rep = gkm::exponent_consistency(h);
  Report r;
  if (rep.holds)
    r.line("consistency OK through height " + str(h) + " (" + str(rep.roots_checked) + " roots in " +
           str(rep.classes_checked) + " classes)");
  else
    r.line("consistency FAILED: " + rep.counterexample.value_or("?"));
  r.status = rep.holds ? kOk : kFailed;
  r.data = {{"bound", str(h)},
            {"holds", rep.holds},
            {"roots_checked", str(rep.roots_checked)},
            {"classes_checked", str(rep.classes_checked)}};
  if (rep.counterexample) r.data["counterexample"] = *rep.counterexample;
  return r;
}

Report gkm_info() {
  const auto [p, n] = gkm::signature();
  Report r;
  r.line("cartan dimension " + std::to_string(gkm::cartan_dimension()));
  r.line("signature (" + std::to_string(p) + "," + std::to_string(n) + ")");
  r.line("weyl vector " + gkm::to_string(gkm::weyl_vector()));
  r.line("reference vector " + gkm::to_string(gkm::reference_vector()));
  r.data = {{"cartan_dimension", str(gkm::cartan_dimension())},
            {"signature", {str(p), str(n)}},
            {"weyl_vector", vector_json(gkm::weyl_vector())},
            {"reference_vector", vector_json(gkm::reference_vector())}};
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Codes, q-series, characters and root system of the fake baby monster algebra"};
  app.require_subcommand(1);
  bool as_json = false;
  std::string cache;
  app.add_flag("--json", as_json, "JSON output, integers as decimal strings");
  app.add_option("--cache-dir", cache, "Directory for enumeration caches (default $FBM_CACHE_DIR)");

  std::function<Report()> action;

  // codes
  auto* codes_cmd = app.add_subcommand("codes", "Binary codes and weight enumerators");
  codes_cmd->require_subcommand(1);
  std::string code_name = "h16", coset;
  bool polynomial = false;
  int block = 4, t = 3;
  auto* c_enum = codes_cmd->add_subcommand("enumerator", "Weight enumerator of a code or coset");
  c_enum->add_option("--code", code_name, "h16, h16-dual, f8-even, f8-odd")->capture_default_str();
  c_enum->add_option("--coset", coset, "Coset representative as a bit string");
  c_enum->add_flag("--polynomial", polynomial, "Print as a polynomial in x, y");
  c_enum->callback([&] { action = [&] { return codes_enumerator(code_name, coset, polynomial); }; });
  auto* c_steiner = codes_cmd->add_subcommand("steiner", "Steiner system certificate");
  c_steiner->add_option("--code", code_name)->capture_default_str();
  c_steiner->add_option("--block", block, "Block weight")->capture_default_str();
  c_steiner->add_option("--t", t, "Subset size")->capture_default_str();
  c_steiner->callback([&] { action = [&] { return codes_steiner(code_name, block, t); }; });
  auto* c_cosets = codes_cmd->add_subcommand("cosets", "Coset leaders and their enumerators");
  c_cosets->add_option("--code", code_name)->capture_default_str();
  c_cosets->callback([&] { action = [&] { return codes_cosets(code_name); }; });
  auto* c_mw = codes_cmd->add_subcommand("macwilliams", "MacWilliams transform against the dual code");
  c_mw->add_option("--code", code_name)->capture_default_str();
  c_mw->callback([&] { action = [&] { return codes_macwilliams(code_name); }; });

  // qseries
  auto* q_cmd = app.add_subcommand("qseries", "Eta quotients and string functions");
  std::string which, verify;
  int q_order = 5;
  bool pretty = false;
  q_cmd->add_option("series", which, "h, g0, g1, c0, c1, c2, string, j, delta or verify-lemma");
  q_cmd->add_option("--order", q_order, "Through q^order (1..200)")->capture_default_str();
  q_cmd->add_option("--verify", verify, "'lemma' runs the modular identity suite");
  q_cmd->add_flag("--pretty", pretty, "One-line rendering instead of the text format");
  q_cmd->callback([&] {
    action = [&] {
      if (!verify.empty()) {
        if (verify != "lemma") throw InputError("--verify accepts only 'lemma'");
        return qseries_verify(q_order);
      }
      if (which.empty()) throw InputError("name a series or pass --verify lemma");
      return qseries_show(which, q_order, pretty);
    };
  });

  // characters
  auto* ch_cmd = app.add_subcommand("char", "Characters of the vertex algebra");
  ch_cmd->require_subcommand(1);
  int ch_order = 1;
  bool serial = false, scalar = false, z0 = false;
  std::string form = "code";
  auto* ch_verify = ch_cmd->add_subcommand("verify", "Code form against lattice form");
  ch_verify->add_option("--order", ch_order)->capture_default_str();
  ch_verify->add_flag("--serial", serial, "Serial reference path");
  ch_verify->add_flag("--scalar", scalar, "Compare at z = 0 against J + 48 (order <= 6)");
  ch_verify->callback([&] {
    action = [&] { return scalar ? char_dim(ch_order) : char_verify(ch_order, serial); };
  });
  auto* ch_dim = ch_cmd->add_subcommand("dim", "Graded dimensions against J + 48");
  ch_dim->add_option("--order", ch_order)->capture_default_str();
  ch_dim->callback([&] { action = [&] { return char_dim(ch_order); }; });
  auto* ch_series = ch_cmd->add_subcommand("series", "Weighted character through q^order (order <= 2)");
  ch_series->add_option("--order", ch_order)->capture_default_str();
  ch_series->add_option("--form", form, "code or lattice")->capture_default_str();
  ch_series->add_flag("--z0", z0, "Specialize to z = 0");
  ch_series->callback([&] { action = [&] { return char_series(ch_order, form, z0); }; });
  auto* ch_census = ch_cmd->add_subcommand("census", "Irreducible module labels per stratum");
  ch_census->callback([&] { action = [&] { return char_census(); }; });

  // lattices
  auto* l_cmd = app.add_subcommand("lattice", "Lattice checks");
  l_cmd->require_subcommand(1);
  l_cmd->add_subcommand("barnes-wall", "Kissing number, determinant, dual shell")->callback([&] {
    action = [&] { return lattice_barnes_wall(); };
  });
  l_cmd->add_subcommand("genus", "Genus invariants of both Lorentzian lattices")->callback([&] {
    action = [&] { return lattice_genus(); };
  });

  // root system
  auto* g_cmd = app.add_subcommand("gkm", "Root system and denominator identity");
  g_cmd->require_subcommand(1);
  std::string vec_text, height = "1", bound_text = "2";
  int bound = gkm::kDenominatorCap, count = 8;
  std::uint64_t max_steps = gkm::kMaxSteps;
  auto* g_mult = g_cmd->add_subcommand("mult", "Root multiplicity");
  g_mult->add_option("--vector", vec_text, "a1,...,a16,m2,n2 (doubled coordinates)")->required();
  g_mult->callback([&] { action = [&] { return gkm_mult(vec_text); }; });
  auto* g_simple = g_cmd->add_subcommand("simple-roots", "Real simple roots up to a height (<= 3)");
  g_simple->add_option("--height", height)->capture_default_str();
  g_simple->callback([&] { action = [&] { return gkm_simple_roots(height); }; });
  auto* g_imag = g_cmd->add_subcommand("imaginary", "Imaginary simple roots n rho");
  g_imag->add_option("--count", count)->capture_default_str();
  g_imag->callback([&] { action = [&] { return gkm_imaginary(count); }; });
  auto* g_reduce = g_cmd->add_subcommand("reduce", "Reflect a vector into the chamber of rho");
  g_reduce->add_option("--vector", vec_text)->required();
  g_reduce->add_option("--max-steps", max_steps)->capture_default_str();
  g_reduce->callback([&] { action = [&] { return gkm_reduce(vec_text, max_steps); }; });
  auto* g_orbit = g_cmd->add_subcommand("orbit", "Weyl orbit of rho up to a height (<= 3)");
  g_orbit->add_option("--bound", bound_text)->capture_default_str();
  g_orbit->add_flag("--serial", serial);
  g_orbit->callback([&] { action = [&] { return gkm_orbit(bound_text, serial); }; });
  auto* g_den = g_cmd->add_subcommand("verify-denominator", "Both sides of the denominator identity");
  g_den->add_option("--bound", bound, "Through t^bound (<= 12)")->capture_default_str();
  g_den->add_flag("--serial", serial);
  g_den->callback([&] { action = [&] { return gkm_denominator(bound, serial); }; });
  auto* g_cons = g_cmd->add_subcommand("consistency", "Multiplicities against exponents up to a height (<= 4)");
  g_cons->add_option("--bound", bound_text)->capture_default_str();
  g_cons->callback([&] { action = [&] { return gkm_consistency(bound_text); }; });
  g_cmd->add_subcommand("info", "Cartan dimension, signature, rho")->callback([&] {
    action = [&] { return gkm_info(); };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (!cache.empty()) gkm::set_cache_dir(cache);
    Report r = action();
    if (as_json) {
      json out{{"status", r.status == kOk ? "ok" : "failed"}, {"result", r.data}};
      std::cout << out.dump(2) << '\n';
    } else {
      std::cout << r.text;
    }
    return r.status;
  } catch (const InputError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << '\n';
    return kResource;
  } catch (const NonterminationError& e) {
    std::cerr << "nontermination: " << e.what() << '\n';
    return kNonterminating;
  } catch (const ConsistencyError& e) {
    std::cerr << "consistency failure: " << e.what() << '\n';
    return kFailed;
  }
}
