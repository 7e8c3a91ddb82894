// boxgal: command line front end for the boxgal library.

#include <boxgal/boxgal.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace boxgal;
using Json = nlohmann::ordered_json;

namespace {

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Output {
  Json json = Json::object();
  std::optional<CsvTable> table;
  std::optional<std::string> raw_csv;
  std::optional<double> elapsed_ms;
};

struct Globals {
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string format = "text";
  std::string out;
  std::string config;
  std::string save_config;
  bool omit_timing = false;
  std::uint64_t cap = kDefaultEnumerationCap;
};

std::string rational_str(const Rational& r) { return r.str(); }

template <class S>
Json scalar_json(const S& v) {
  if constexpr (std::is_same_v<S, Rational>) {
    return Json{{"exact", rational_str(v)}, {"float", static_cast<double>(v)}};
  } else {
    return Json(v);
  }
}

double parse_real(const std::string& s) { return static_cast<double>(parse_rational(s)); }

// "uniform" is the uniform law on Z/P, i.e. a box of length P.
PolyLaw make_law(const std::string& spec, unsigned n, std::optional<std::uint64_t> modulus) {
  if (spec == "uniform") {
    if (!modulus) throw UsageError("--law uniform is only meaningful over a finite prime set");
    return PolyLaw::iid(n, CoeffLaw::box(0, *modulus));
  }
  return PolyLaw::iid(n, parse_law(spec));
}

void flatten(const Json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
  } else if (j.is_array()) {
    std::string s;
    bool nested = false;
    for (const auto& v : j) nested = nested || v.is_structured();
    if (nested) {
      for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), out);
      return;
    }
    for (std::size_t i = 0; i < j.size(); ++i) s += (i ? ";" : "") + (j[i].is_string() ? j[i].get<std::string>() : j[i].dump());
    out.emplace_back(prefix, s);
  } else {
    out.emplace_back(prefix, j.is_string() ? j.get<std::string>() : j.dump());
  }
}

void emit(const Output& o, const Globals& g) {
  std::ostringstream ss;
  Json j = o.json;
  if (o.elapsed_ms && !g.omit_timing) j["elapsed_ms"] = *o.elapsed_ms;
  if (g.format == "json") {
    ss << j.dump(2) << "\n";
  } else if (g.format == "csv") {
    if (o.raw_csv) {
      ss << *o.raw_csv;
    } else if (o.table) {
      o.table->write(ss);
    } else {
      std::vector<std::pair<std::string, std::string>> kv;
      flatten(j, "", kv);
      CsvTable t;
      t.rows.emplace_back();
      for (auto& [k, v] : kv) {
        t.header.push_back(k);
        t.rows[0].push_back(v);
      }
      t.write(ss);
    }
  } else {
    std::vector<std::pair<std::string, std::string>> kv;
    flatten(j, "", kv);
    for (auto& [k, v] : kv) ss << k << ": " << v << "\n";
  }
  if (g.out.empty()) {
    std::cout << ss.str();
  } else {
    std::ofstream f(g.out, std::ios::binary);
    if (!f) throw Error("cannot open output file '" + g.out + "'");
    f << ss.str();
  }
}

// ---------------------------------------------------------------------------
// Subcommands

struct FfArgs {
  std::string action;
  std::uint64_t p = 2;
  std::string poly;
  std::string poly2;
  std::uint64_t a = 0;
};

Output run_ff(const FfArgs& a) {
  const PrimeField field(a.p);
  Output o;
  o.json["action"] = a.action;
  o.json["p"] = a.p;
  auto need_poly = [&]() {
    if (a.poly.empty()) throw UsageError("ff " + a.action + " needs --poly");
    return parse_ffpoly(a.poly, field);
  };
  if (a.action == "chi") {
    o.json["a"] = a.a;
    o.json["value"] = quadratic_character(a.a, field);
    return o;
  }
  const FFPoly f = need_poly();
  o.json["poly"] = to_string(f);
  if (a.action == "mu") {
    o.json["value"] = moebius(f);
  } else if (a.action == "factor") {
    const auto fz = factor(f);
    Json fs = Json::array();
    for (const auto& [g, e] : fz.factors) fs.push_back(Json{{"factor", to_string(g)}, {"multiplicity", e}});
    o.json["unit"] = fz.unit;
    o.json["factors"] = fs;
  } else if (a.action == "disc") {
    const Residue d = discriminant(f);
    o.json["value"] = d;
    if (a.p != 2) o.json["chi"] = quadratic_character(d, field);
  } else if (a.action == "squarefree") {
    o.json["value"] = is_squarefree(f);
  } else if (a.action == "irreducible") {
    o.json["value"] = is_irreducible(f);
  } else if (a.action == "res" || a.action == "gcd") {
    if (a.poly2.empty()) throw UsageError("ff " + a.action + " needs --poly2");
    const FFPoly g = parse_ffpoly(a.poly2, field);
    o.json["poly2"] = to_string(g);
    if (a.action == "res") {
      o.json["value"] = resultant(f, g);
    } else {
      o.json["value"] = to_string(gcd(f, g));
    }
  } else {
    throw UsageError("unknown ff action '" + a.action + "'");
  }
  return o;
}

struct FourierArgs {
  std::vector<std::uint64_t> primes{2, 3};
  unsigned n = 2;
  unsigned trials = 3;
};

Output run_fourier_check(const FourierArgs& a, const Globals& g) {
  const GridShape shape(PrimeSet(a.primes), a.n, g.cap);
  const std::uint64_t size = shape.size();
  Rng rng(stream_seed(g.seed, 0));
  std::uniform_real_distribution<double> unif(-1, 1);
  auto random_real = [&] {
    std::vector<double> v(size);
    for (auto& x : v) x = unif(rng);
    return GridFunction::from_real(shape, v);
  };
  double inv_err = 0, pars_err = 0, naive_err = 0;
  bool naive_done = size <= 4096;
  for (unsigned t = 0; t < a.trials; ++t) {
    auto eta = random_real();
    auto zeta = random_real();
    auto spec = full_spectrum(eta);
    auto back = invert(spec);
    for (std::uint64_t i = 0; i < size; ++i) inv_err = std::max(inv_err, std::abs(back.values[i] - eta.values[i]));
    auto ps = parseval(eta, zeta);
    pars_err = std::max(pars_err, std::abs(Complex(ps.lhs) - ps.rhs));
    if (naive_done) {
      auto naive = full_spectrum_naive(eta);
      for (std::uint64_t i = 0; i < size; ++i) naive_err = std::max(naive_err, std::abs(naive.values[i] - spec.values[i]));
    }
  }
  bool orth_ok = true;
  std::uint64_t orth_checked = 0;
  if (size <= 4096) {
    for (std::uint64_t f = 0; f < size; ++f) {
      const BigInt expect = f == shape.zero_frequency() ? BigInt(size) : BigInt(0);
      orth_ok = orth_ok && verify_orthogonality(shape, f) == expect;
      ++orth_checked;
    }
  }
  Output o;
  o.json["primes"] = to_string(shape.primes());
  o.json["n"] = a.n;
  o.json["grid_size"] = size;
  o.json["trials"] = a.trials;
  o.json["seed"] = g.seed;
  o.json["orthogonality_exact"] = orth_ok;
  o.json["orthogonality_points"] = orth_checked;
  o.json["max_inversion_error"] = inv_err;
  o.json["max_parseval_error"] = pars_err;
  if (naive_done) {
    o.json["max_fast_vs_naive_error"] = naive_err;
  } else {
    o.json["max_fast_vs_naive_error"] = nullptr;
  }
  return o;
}

struct SpectrumArgs {
  std::uint64_t p = 2;
  unsigned n = 2;
  std::string eps = "0.05";
};

Output run_mu_spectrum(const SpectrumArgs& a, const Globals& g) {
  const PrimeField field(a.p);
  const Spectrum spec = moebius_spectrum(field, a.n, g.cap);
  const auto r = moebius_spectrum_report(spec, parse_real(a.eps));
  Output o;
  o.json["p"] = r.p;
  o.json["n"] = r.n;
  o.json["epsilon"] = r.epsilon;
  o.json["max_abs"] = r.max_abs;
  o.json["exponent"] = r.exponent;
  o.json["bound"] = r.bound;
  o.json["bound_holds"] = r.bound_holds;
  std::ostringstream csv;
  write_spectrum_csv(csv, spec);
  o.raw_csv = csv.str();
  return o;
}

struct MeasureArgs {
  std::vector<std::uint64_t> primes{3};
  unsigned n = 2;
  std::string law = "box:a=0,L=10";
  std::string gamma = "1";
  std::string h;
};

Output run_measure_norms(const MeasureArgs& a, const Globals& g) {
  const PrimeSet ps(a.primes);
  const PolyLaw law = make_law(a.law, a.n, ps.product());
  const auto m = pushforward<double>(law, ps);
  const double gamma = parse_real(a.gamma);
  Output o;
  o.json["primes"] = to_string(ps);
  o.json["n"] = a.n;
  o.json["law"] = to_string(law.laws[0]);
  o.json["gamma"] = gamma;
  o.json["l_gamma_norm"] = l_gamma_norm(m, gamma);
  if (GridShape(ps, a.n, UINT64_MAX).size() <= std::min<std::uint64_t>(g.cap, 200'000)) {
    o.json["l_gamma_norm_naive"] = l_gamma_norm_naive(m, gamma, g.cap);
  }
  if (law.laws[0].is_box()) o.json["l1_bound"] = l1_bound(ps, law.laws[0].as_box().L, a.n);
  if (!a.h.empty()) {
    std::map<std::uint64_t, Rational> h;
    std::stringstream ss(a.h);
    for (std::string item; std::getline(ss, item, ',');) {
      auto colon = item.find(':');
      if (colon == std::string::npos) throw UsageError("--h-values expects p:value,...");
      h[std::stoull(item.substr(0, colon))] = parse_rational(item.substr(colon + 1));
    }
    const auto res = check_h_condition(law, ps, h);
    o.json["h_condition"] = res.ok();
    if (res.ok()) {
      Json om = Json::object();
      for (const auto& [p, w] : res.witness->omega) om[std::to_string(p)] = rational_str(w);
      o.json["omega"] = om;
    } else {
      const auto& v = *res.violation;
      o.json["violation"] = Json{{"d", v.d},
                                 {"u", v.u},
                                 {"k", v.k},
                                 {"probability", rational_str(v.probability)},
                                 {"bound", rational_str(v.bound)},
                                 {"reason", v.reason}};
    }
  }
  return o;
}

struct ExpectArgs {
  std::vector<std::uint64_t> primes{3};
  std::vector<std::uint64_t> subset;
  unsigned n = 2;
  std::string law = "box:a=0,L=10";
  std::string mode = "exact";
  bool holder = false;
  std::string gamma = "1";
  std::string eps0 = "0.05";
  std::string alpha = "2";
};

template <class S>
Output expect_mu_impl(const ExpectArgs& a, const Globals& g) {
  const PrimeSet ps(a.primes);
  const PolyLaw law = make_law(a.law, a.n, ps.product());
  const auto m = pushforward<S>(law, ps);
  const SubsetSelector q = a.subset.empty() ? SubsetSelector::all(ps) : SubsetSelector(ps, a.subset);
  const S direct = expected_moebius_direct(m, q, g.cap);
  const S fourier = expected_moebius_fourier(m, q, g.cap);
  Output o;
  o.json["primes"] = to_string(ps);
  o.json["subset"] = q.members();
  o.json["n"] = a.n;
  o.json["law"] = to_string(law.laws[0]);
  o.json["mode"] = a.mode;
  o.json["direct"] = scalar_json(direct);
  o.json["fourier"] = scalar_json(fourier);
  if constexpr (std::is_same_v<S, Rational>) {
    o.json["routes_agree"] = direct == fourier;
  } else {
    o.json["routes_agree"] = std::abs(direct - fourier) <= 1e-10;
  }
  if (a.holder && !q.empty()) {
    const auto r = holder_bound(pushforward<double>(law, ps), q, parse_real(a.gamma), parse_real(a.eps0),
                                parse_real(a.alpha), g.cap);
    o.json["holder"] = Json{{"gamma", r.gamma},
                            {"measure_norm", r.measure_norm},
                            {"moebius_norm", r.moebius_norm},
                            {"raw_bound", r.raw_bound},
                            {"raw_inequality_holds", r.raw_inequality_holds},
                            {"u", r.u},
                            {"simplified_bound", r.simplified_bound},
                            {"spectral_bound_holds", r.spectral_bound_holds},
                            {"measure_norm_within_alpha", r.measure_norm_within_alpha}};
  }
  return o;
}

template <class S>
Output expect_eta_impl(const ExpectArgs& a, const Globals& g) {
  const PrimeSet ps(a.primes);
  const PolyLaw law = make_law(a.law, a.n, ps.product());
  const auto m = pushforward<S>(law, ps);
  const SubsetSelector q = a.subset.empty() ? SubsetSelector::all(ps) : SubsetSelector(ps, a.subset);
  const S direct = expected_eta_direct(m, q, g.cap);
  const S divisor = expected_eta_divisorsum<S>(law, q.members(), g.cap);
  Output o;
  o.json["primes"] = to_string(ps);
  o.json["subset"] = q.members();
  o.json["n"] = a.n;
  o.json["law"] = to_string(law.laws[0]);
  o.json["mode"] = a.mode;
  o.json["direct"] = scalar_json(direct);
  o.json["divisor_sum"] = scalar_json(divisor);
  if constexpr (std::is_same_v<S, Rational>) {
    o.json["routes_agree"] = direct == divisor;
  } else {
    o.json["routes_agree"] = std::abs(direct - divisor) <= 1e-10;
  }
  return o;
}

void check_mode(const std::string& mode) {
  if (mode != "exact" && mode != "float") throw UsageError("--mode must be exact or float");
}

struct DiscFqArgs {
  std::uint64_t p = 3;
  unsigned n = 3;
  std::string law = "uniform";
  std::string mode = "exact";
  std::string omega;
  std::string gamma = "1";
  std::string alpha = "2";
  std::string c = "0.2";
};

template <class S>
Output disc_fq_impl(const DiscFqArgs& a, const Globals& g) {
  const PrimeSet ps{a.p};
  const PolyLaw law = make_law(a.law, a.n, a.p);
  const auto m = pushforward<S>(law, ps);
  const auto t = decomposition_check(m, g.cap);
  Output o;
  o.json["probability"] = std::is_same_v<S, Rational> ? Json(rational_str(Rational(t.lhs))) : Json(to_double(t.lhs));
  o.json["p"] = a.p;
  o.json["n"] = a.n;
  o.json["law"] = to_string(law.laws[0]);
  o.json["mode"] = a.mode;
  o.json["decomposition"] = Json{{"lhs", scalar_json(t.lhs)},
                                 {"rhs", scalar_json(t.rhs)},
                                 {"expected_mu", scalar_json(t.expected_mu)},
                                 {"expected_non_squarefree", scalar_json(t.expected_eta)},
                                 {"signed_moebius_term", scalar_json(t.signed_moebius_term)},
                                 {"holds", std::is_same_v<S, Rational> ? t.exact_match()
                                                                       : std::abs(to_double(t.lhs) - to_double(t.rhs)) < 1e-12}};
  const FqBoundParams params{parse_real(a.gamma), parse_real(a.alpha), parse_real(a.c)};
  const double omega = a.omega.empty() ? static_cast<double>(a.p) : parse_real(a.omega);
  const auto r = prop33_check(m, params, omega, g.cap);
  o.json["finite_field_bound"] = Json{{"gamma", params.gamma},
                                      {"alpha", params.alpha},
                                      {"c", params.c},
                                      {"omega_q", r.omega_q},
                                      {"fourier_norm", r.fourier_norm},
                                      {"fourier_norm_limit", r.fourier_norm_limit},
                                      {"norm_condition", r.norm_condition},
                                      {"divisor_sum", r.divisor_sum},
                                      {"divisor_condition", r.divisor_condition},
                                      {"deviation", r.deviation},
                                      {"bound", r.bound},
                                      {"conclusion_holds", r.conclusion_holds},
                                      {"hypotheses_hold", r.hypotheses_hold()}};
  return o;
}

struct DiscMcArgs {
  unsigned n = 3;
  std::string law = "box:a=0,L=50";
  std::uint64_t samples = 100'000;
  std::vector<std::uint64_t> filter_primes;
  bool verify = false;
  std::string delta = "0.1";
  std::string eps = "0.05";
};

Output run_disc_mc(const DiscMcArgs& a, const Globals& g) {
  const PolyLaw law = make_law(a.law, a.n, std::nullopt);
  McOptions opt;
  opt.samples = a.samples;
  opt.seed = g.seed;
  opt.threads = g.threads;
  opt.filter_primes = a.filter_primes;
  opt.verify_rejections = a.verify;
  const auto e = mc_disc_square(law, opt);
  Output o;
  const auto filters = a.filter_primes.empty() ? default_filter_primes(a.n) : a.filter_primes;
  o.json["params"] = Json{{"n", a.n},
                          {"law", to_string(law.laws[0])},
                          {"samples", a.samples},
                          {"seed", g.seed},
                          {"filter_primes", filters},
                          {"verify_rejections", a.verify}};
  o.json["estimate"] = e.estimate;
  o.json["wilson95"] = {e.wilson95.lo, e.wilson95.hi};
  o.json["hits"] = e.hits;
  o.json["zero_disc"] = e.zero_disc;
  o.json["zero_disc_rate"] = e.zero_disc_rate;
  o.json["exact_checks"] = e.exact_checks;
  if (a.verify) o.json["prescreen_violations"] = e.prescreen_violations;
  Json bound = nullptr;
  if (law.laws[0].is_box()) {
    try {
      bound = theorem2_rhs(static_cast<double>(law.laws[0].as_box().L), a.n, parse_real(a.delta), parse_real(a.eps));
    } catch (const DomainError&) {
      // outside the stated domain (n > 8, L >= 16): no value
    }
  }
  o.json["bound_theorem2"] = bound;
  o.elapsed_ms = e.elapsed_ms;
  return o;
}

struct GaloisArgs {
  unsigned n = 3;
  std::string law = "box:a=-50,L=100";
  std::uint64_t samples = 10'000;
  unsigned budget = 50;
};

Output run_galois_mc(const GaloisArgs& a, const Globals& g) {
  const PolyLaw law = make_law(a.law, a.n, std::nullopt);
  GaloisOptions opt;
  opt.samples = a.samples;
  opt.budget = a.budget;
  opt.seed = g.seed;
  opt.threads = g.threads;
  const auto e = estimate_prob_sn(law, opt);
  Output o;
  o.json["params"] = Json{{"n", a.n}, {"law", to_string(law.laws[0])}, {"samples", a.samples}, {"budget", a.budget}, {"seed", g.seed}};
  o.json["certified_rate"] = e.certified_rate();
  o.json["disc_square_rate"] = e.disc_square_rate();
  o.json["reducible_rate"] = e.reducible_rate();
  o.json["unknown_rate"] = e.unknown_rate();
  o.json["counts"] = Json{{"certified", e.certified}, {"disc_square", e.disc_square}, {"reducible", e.reducible}, {"unknown", e.unknown}};
  o.json["certified_wilson95"] = {wilson(e.certified, e.samples).lo, wilson(e.certified, e.samples).hi};
  o.json["gallagher_bound"] = std::isnan(e.gallagher_bound) ? Json(nullptr) : Json(e.gallagher_bound);
  o.json["regime"] = to_string(e.regime);
  o.elapsed_ms = e.elapsed_ms;
  return o;
}

struct BoundsArgs {
  std::vector<std::string> xs{"100", "1000", "10000", "100000", "1000000"};
  std::vector<std::string> zs;
  std::string C = "4";
};

Output run_bounds(const BoundsArgs& a) {
  Output o;
  CsvTable t;
  t.header = {"x", "pi", "x_over_log_x", "theta", "pi_scaled_error", "theta_scaled_error", "mertens_sum",
              "mertens_residual", "residual_times_log_x"};
  Json rows = Json::array();
  char buf[64];
  auto fmt = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  for (const auto& xs : a.xs) {
    const auto x = static_cast<std::uint64_t>(parse_real(xs));
    const auto pnt = pnt_report(x);
    const auto mer = mertens_sum(x);
    rows.push_back(Json{{"x", x},
                        {"pi", pnt.pi},
                        {"x_over_log_x", pnt.x_over_log},
                        {"theta", pnt.theta},
                        {"pi_scaled_error", pnt.pi_scaled_error},
                        {"theta_scaled_error", pnt.theta_scaled_error},
                        {"mertens_sum", mer.sum},
                        {"mertens_residual", mer.residual},
                        {"residual_times_log_x", mer.scaled_residual()}});
    t.rows.push_back({std::to_string(x), std::to_string(pnt.pi), fmt(pnt.x_over_log), fmt(pnt.theta),
                      fmt(pnt.pi_scaled_error), fmt(pnt.theta_scaled_error), fmt(mer.sum), fmt(mer.residual),
                      fmt(mer.scaled_residual())});
  }
  o.json["rows"] = rows;
  if (!a.zs.empty()) {
    const double C = parse_real(a.C);
    Json dy = Json::array();
    for (const auto& zs : a.zs) {
      const double z = parse_real(zs);
      const auto r = dyadic_product_bound(z, [&](std::uint64_t p) { return static_cast<double>(p) / C; }, C);
      dy.push_back(Json{{"z", z},
                        {"omega", "p/C"},
                        {"C", C},
                        {"primes", r.primes},
                        {"product", r.product},
                        {"exp_bound", r.exp_bound},
                        {"mertens_bound", r.mertens_bound},
                        {"product_le_exp", r.product_le_exp()}});
    }
    o.json["dyadic"] = dy;
  }
  o.table = t;
  return o;
}

struct WindowArgs {
  std::string L = "1e9";
  std::string delta = "0.1";
  unsigned n = 0;
  std::string eps = "0.05";
};

Output run_window(const WindowArgs& a) {
  const double L = parse_real(a.L);
  const double delta = parse_real(a.delta);
  const PrimeSet w = choose_prime_window(L, delta);
  Output o;
  o.json["L"] = L;
  o.json["delta"] = delta;
  o.json["lo"] = (1 - delta) * std::log(L) / 2;
  o.json["hi"] = (1 - delta) * std::log(L);
  o.json["primes"] = w.primes();
  if (a.n > 0) {
    const auto b = prop23_with_window(L, delta, parse_real(a.eps), a.n);
    o.json["prop_bound_applicable"] = b.applicable;
    if (b.applicable) {
      o.json["prop_bound"] = b.value;
    } else {
      o.json["prop_bound_note"] = b.note;
    }
    if (a.n > 8 && L >= 16) o.json["theorem_bound"] = theorem2_rhs(L, a.n, delta, parse_real(a.eps));
  }
  return o;
}

RunConfig collect_config(CLI::App& app, CLI::App* sub) {
  RunConfig cfg;
  cfg.subcommand = sub->get_name();
  auto take = [&](CLI::App* a) {
    for (const CLI::Option* opt : a->get_options()) {
      if (opt->count() == 0) continue;
      std::string name = opt->get_single_name();
      if (opt->get_positional()) {
        if (opt->get_lnames().empty()) continue;
        name = opt->get_lnames().front();
      }
      if (name == "help" || name == "config" || name == "save-config") continue;
      if (opt->get_type_size() == 0) {
        cfg.values[name] = "true";
        continue;
      }
      std::string v;
      const auto& res = opt->results();
      for (std::size_t i = 0; i < res.size(); ++i) v += (i ? "," : "") + res[i];
      cfg.values[name] = v;
    }
  };
  take(&app);
  take(sub);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random polynomials, square discriminants and Galois groups: experiments and checks."};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Seed for all randomness")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads for sampling (0 = all cores)");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"text", "json", "csv"}))->capture_default_str();
  app.add_option("--out", g.out, "Write output to this file instead of stdout");
  app.add_option("--config", g.config, "Flat key=value file; flags on the command line override it");
  app.add_option("--save-config", g.save_config, "Write the effective configuration to this file");
  app.add_flag("--omit-timing", g.omit_timing, "Leave elapsed_ms out of the output");
  app.add_option("--cap", g.cap, "Enumeration cap for exhaustive routes")->capture_default_str();

  FfArgs ff;
  auto* ff_cmd = app.add_subcommand("ff", "Arithmetic in F_p[T] (ffpoly: moebius, factor, discriminant, quadratic_character, resultant, gcd)");
  ff_cmd->add_option("action,--action", ff.action, "mu | factor | disc | chi | squarefree | irreducible | res | gcd")->required();
  ff_cmd->add_option("--p", ff.p, "Field characteristic")->required();
  ff_cmd->add_option("--poly", ff.poly, "Polynomial, e.g. \"T^2+T\"");
  ff_cmd->add_option("--poly2", ff.poly2, "Second polynomial for res and gcd");
  ff_cmd->add_option("--a", ff.a, "Field element for chi");

  FourierArgs fc;
  auto* fc_cmd = app.add_subcommand("fourier-check", "Orthogonality, inversion, Parseval and fast-vs-naive transform checks (fourier: full_spectrum, invert, parseval, verify_orthogonality)");
  fc_cmd->add_option("--primes", fc.primes, "Prime set, comma separated")->delimiter(',');
  fc_cmd->add_option("--n", fc.n, "Degree")->capture_default_str();
  fc_cmd->add_option("--trials", fc.trials, "Random function pairs")->capture_default_str();

  SpectrumArgs sp;
  auto* sp_cmd = app.add_subcommand("mu-spectrum", "Moebius spectrum and its sup-norm report (fourier: moebius_spectrum_report); csv format dumps the spectrum");
  sp_cmd->add_option("--p", sp.p, "Prime")->required();
  sp_cmd->add_option("--n", sp.n, "Degree")->required();
  sp_cmd->add_option("--eps", sp.eps, "epsilon in (0, 1/4)")->capture_default_str();

  MeasureArgs ma;
  auto* ma_cmd = app.add_subcommand("measure-norms", "Fourier L^gamma norm of the pushforward and the h condition (measures: l_gamma_norm, l1_bound, check_h_condition)");
  ma_cmd->add_option("--primes", ma.primes, "Prime set")->delimiter(',');
  ma_cmd->add_option("--n", ma.n, "Degree")->capture_default_str();
  ma_cmd->add_option("--law", ma.law, "Coefficient law: box:a=..,L=.. | explicit:v:m,... | uniform")->capture_default_str();
  ma_cmd->add_option("--gamma", ma.gamma, "gamma >= 1")->capture_default_str();
  ma_cmd->add_option("--h-values", ma.h, "h values as p:value,... to check the h condition");

  ExpectArgs em;
  auto* em_cmd = app.add_subcommand("expect-mu", "E(mu_Q) by enumeration and by the Fourier side (moebius_stats: expected_moebius_direct, expected_moebius_fourier, holder_bound)");
  ExpectArgs ee;
  auto* ee_cmd = app.add_subcommand("expect-eta", "E(eta_Q) by enumeration and by divisor sums (moebius_stats: expected_eta_direct, expected_eta_divisorsum)");
  for (auto [cmd, args] : {std::pair{em_cmd, &em}, std::pair{ee_cmd, &ee}}) {
    cmd->add_option("--primes", args->primes, "Prime set")->delimiter(',');
    cmd->add_option("--subset", args->subset, "Subset Q (default: all primes)")->delimiter(',');
    cmd->add_option("--n", args->n, "Degree")->capture_default_str();
    cmd->add_option("--law", args->law, "Coefficient law")->capture_default_str();
    cmd->add_option("--mode", args->mode, "exact | float")->capture_default_str();
  }
  em_cmd->add_flag("--holder", em.holder, "Also evaluate the Hoelder bound");
  em_cmd->add_option("--gamma", em.gamma, "Hoelder gamma in [1, 4/3)")->capture_default_str();
  em_cmd->add_option("--eps0", em.eps0, "Hoelder epsilon0")->capture_default_str();
  em_cmd->add_option("--alpha", em.alpha, "Hoelder alpha")->capture_default_str();

  DiscFqArgs df;
  auto* df_cmd = app.add_subcommand("disc-fq", "P(disc = square) over F_p with its decomposition and bound report (discprob: prob_disc_square_fq, decomposition_check, prop33_check)");
  df_cmd->add_option("--p", df.p, "Odd prime")->required();
  df_cmd->add_option("--n", df.n, "Degree")->required();
  df_cmd->add_option("--law", df.law, "Coefficient law; uniform = uniform on F_p")->capture_default_str();
  df_cmd->add_option("--mode", df.mode, "exact | float")->capture_default_str();
  df_cmd->add_option("--omega", df.omega, "omega_q (default q)");
  df_cmd->add_option("--gamma", df.gamma, "gamma in [1, 4/3)")->capture_default_str();
  df_cmd->add_option("--alpha", df.alpha, "alpha > 0")->capture_default_str();
  df_cmd->add_option("--c", df.c, "c in (0, (4-3 gamma)/(4 gamma))")->capture_default_str();

  DiscMcArgs dm;
  auto* dm_cmd = app.add_subcommand("disc-mc", "Monte Carlo P(disc = square) over Z (discprob: mc_disc_square, theorem2_rhs)");
  dm_cmd->add_option("--n", dm.n, "Degree")->required();
  dm_cmd->add_option("--law", dm.law, "Coefficient law")->capture_default_str();
  dm_cmd->add_option("--samples", dm.samples, "Sample count")->capture_default_str();
  dm_cmd->add_option("--filter-primes", dm.filter_primes, "Odd primes for the prescreen (default: 25 after max(n, 20))")->delimiter(',');
  dm_cmd->add_flag("--verify-rejections", dm.verify, "Run the exact check on rejected samples too");
  dm_cmd->add_option("--delta", dm.delta, "delta for the bound")->capture_default_str();
  dm_cmd->add_option("--eps", dm.eps, "epsilon for the bound")->capture_default_str();

  GaloisArgs ga;
  auto* ga_cmd = app.add_subcommand("galois-mc", "Monte Carlo S_n certification rates (galois_mc: estimate_prob_sn, sn_certificate, gallagher_rhs)");
  ga_cmd->add_option("--n", ga.n, "Degree")->required();
  ga_cmd->add_option("--law", ga.law, "Coefficient law")->capture_default_str();
  ga_cmd->add_option("--samples", ga.samples, "Sample count")->capture_default_str();
  ga_cmd->add_option("--budget", ga.budget, "Primes scanned per polynomial")->capture_default_str();

  BoundsArgs bd;
  auto* bd_cmd = app.add_subcommand("bounds", "Prime counting, Chebyshev theta and Mertens residuals per x (bounds: pnt_report, mertens_sum, dyadic_product_bound)");
  bd_cmd->add_option("--x", bd.xs, "Values of x")->delimiter(',');
  bd_cmd->add_option("--z", bd.zs, "Dyadic window parameters z (omega(p) = p/C)")->delimiter(',');
  bd_cmd->add_option("--C", bd.C, "Constant C for the dyadic windows")->capture_default_str();

  WindowArgs wa;
  auto* wa_cmd = app.add_subcommand("window", "Prime window (1-delta)/2 log L < p <= (1-delta) log L (discprob: choose_prime_window, prop23_rhs)");
  wa_cmd->add_option("--L", wa.L, "Box length L")->required();
  wa_cmd->add_option("--delta", wa.delta, "delta in (0, 1/2)")->capture_default_str();
  wa_cmd->add_option("--n", wa.n, "Degree, to also evaluate the bounds");
  wa_cmd->add_option("--eps", wa.eps, "epsilon")->capture_default_str();

  for (auto* s : app.get_subcommands({})) s->fallthrough();

  // A config file feeds flags that the command line does not set.
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    for (std::size_t i = 0; i < args.size(); ++i) {
      std::string path;
      if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
      if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
      if (path.empty()) continue;
      std::ifstream in(path);
      if (!in) throw UsageError("cannot read config file '" + path + "'");
      std::vector<std::string> names;
      for (auto* s : app.get_subcommands({})) names.push_back(s->get_name());
      args = merge_config_args(parse_run_config(in), args, names);
      break;
    }
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    if (!g.save_config.empty()) {
      std::ofstream f(g.save_config);
      if (!f) throw Error("cannot write config file '" + g.save_config + "'");
      f << to_string(collect_config(app, sub));
    }
    const std::string name = sub->get_name();
    Output o;
    if (name == "ff") {
      o = run_ff(ff);
    } else if (name == "fourier-check") {
      o = run_fourier_check(fc, g);
    } else if (name == "mu-spectrum") {
      o = run_mu_spectrum(sp, g);
    } else if (name == "measure-norms") {
      o = run_measure_norms(ma, g);
    } else if (name == "expect-mu") {
      check_mode(em.mode);
      o = em.mode == "exact" ? expect_mu_impl<Rational>(em, g) : expect_mu_impl<double>(em, g);
    } else if (name == "expect-eta") {
      check_mode(ee.mode);
      o = ee.mode == "exact" ? expect_eta_impl<Rational>(ee, g) : expect_eta_impl<double>(ee, g);
    } else if (name == "disc-fq") {
      check_mode(df.mode);
      o = df.mode == "exact" ? disc_fq_impl<Rational>(df, g) : disc_fq_impl<double>(df, g);
    } else if (name == "disc-mc") {
      o = run_disc_mc(dm, g);
    } else if (name == "galois-mc") {
      o = run_galois_mc(ga, g);
    } else if (name == "bounds") {
      o = run_bounds(bd);
    } else if (name == "window") {
      o = run_window(wa);
    }
    emit(o, g);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
