// Command-line front end: builds coefficient families, runs the chain
// solver, inverts moments, applies kappa-deformations, and drives the
// verification registry. Emits CSV (17-significant-digit floats, exact
// rationals as "num/den") plus a JSON manifest sidecar when writing to a
// file. Exit codes: 0 success, 2 argument errors, 3 numerical-contract
// failures.

#include <cctype>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "krylov/chain.hpp"
#include "krylov/deform.hpp"
#include "krylov/errors.hpp"
#include "krylov/euler_poly.hpp"
#include "krylov/families.hpp"
#include "krylov/moments.hpp"
#include "krylov/rational.hpp"
#include "krylov/sequence.hpp"
#include "krylov/series.hpp"
#include "krylov/special.hpp"
#include "krylov/verify.hpp"

namespace {

using krylov::Integer;
using krylov::Rational;

constexpr const char* kToolVersion = "1.0.0";

// ---------------------------------------------------------------------------
// parsing helpers

// Accepts "3", "-3", "3/4", and plain decimals like "0.25"; everything is
// converted exactly so downstream rational arithmetic stays exact.
Rational parse_rational(const std::string& text) {
  const auto bad = [&]() -> Rational {
    throw krylov::domain_error("cannot parse '" + text + "' as a rational number");
  };
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  }
  if (s.empty()) return bad();

  const auto parse_int = [&](const std::string& d) -> Integer {
    std::size_t i = d.size() && (d[0] == '-' || d[0] == '+') ? 1 : 0;
    if (i == d.size()) return bad(), Integer(0);
    for (std::size_t j = i; j < d.size(); ++j) {
      if (!std::isdigit(static_cast<unsigned char>(d[j]))) return bad(), Integer(0);
    }
    return Integer(d);
  };

  const std::size_t slash = s.find('/');
  if (slash != std::string::npos) {
    const Integer num = parse_int(s.substr(0, slash));
    const Integer den = parse_int(s.substr(slash + 1));
    if (den == 0) throw krylov::domain_error("zero denominator in '" + text + "'");
    return Rational(num) / Rational(den);
  }
  const std::size_t dot = s.find('.');
  if (dot != std::string::npos) {
    const std::string head = s.substr(0, dot);
    const std::string tail = s.substr(dot + 1);
    if (tail.empty()) return bad();
    for (char c : tail) {
      if (!std::isdigit(static_cast<unsigned char>(c))) return bad();
    }
    const bool neg = !head.empty() && head[0] == '-';
    Integer whole = head.empty() || head == "-" || head == "+" ? Integer(0) : parse_int(head);
    if (neg && whole < 0) whole = -whole;
    Integer scale = 1;
    for (std::size_t i = 0; i < tail.size(); ++i) scale *= 10;
    const Rational mag = Rational(whole) + Rational(Integer(tail)) / Rational(scale);
    return neg ? -mag : mag;
  }
  return Rational(parse_int(s));
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& tok : split_list(text)) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw krylov::domain_error("cannot parse '" + tok + "' as a number");
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSV emission

std::string fmt_double(double x) {
  if (x == 0.0) return "0";  // fold away the sign of a negative zero
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

// Exact cells always carry an explicit denominator ("2/1", "9/4") so the
// column stays uniformly machine-parseable.
std::string fmt_rational(const Rational& q) {
  return boost::multiprecision::numerator(q).str() + "/" +
         boost::multiprecision::denominator(q).str();
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    out.push_back(c);
    if (c == '"') out.push_back('"');
  }
  out.push_back('"');
  return out;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string render() const {
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i) out.push_back(',');
      out += csv_escape(header[i]);
    }
    out.push_back('\n');
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out.push_back(',');
        out += csv_escape(row[i]);
      }
      out.push_back('\n');
    }
    return out;
  }
};

// Every non-default option of the parsed subcommand, keyed by its long flag.
std::map<std::string, std::string> collect_params(const CLI::App* sub) {
  std::map<std::string, std::string> out;
  for (const CLI::Option* opt : sub->get_options()) {
    if (opt->count() == 0) continue;
    const std::string name = opt->get_name();
    if (name.empty() || name == "--help") continue;
    const auto& results = opt->results();
    if (results.empty()) {
      out[name] = "true";
    } else {
      std::string joined;
      for (std::size_t i = 0; i < results.size(); ++i) {
        if (i) joined.push_back(',');
        joined += results[i];
      }
      out[name] = joined;
    }
  }
  return out;
}

void emit_table(const CsvTable& table, const std::string& command, const CLI::App* sub,
                const std::string& out_path) {
  const std::string body = table.render();
  if (out_path.empty()) {
    std::fwrite(body.data(), 1, body.size(), stdout);
    return;
  }
  {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw krylov::domain_error("cannot open output file '" + out_path + "'");
    f.write(body.data(), static_cast<std::streamsize>(body.size()));
  }
  nlohmann::json manifest;
  manifest["command"] = command;
  manifest["params"] = collect_params(sub);
  manifest["outputs"] = {out_path};
  manifest["version"] = kToolVersion;
  manifest["deterministic"] = true;
  std::ofstream mf(out_path + ".manifest.json", std::ios::binary);
  if (!mf) throw krylov::domain_error("cannot open manifest beside '" + out_path + "'");
  mf << manifest.dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// family construction

struct FamilyOptions {
  std::string family;
  std::string a, b;       // two-parameter real pair
  std::string r, omega;   // conjugate pair / alternating frequency
  std::string eta;        // linear subfamily index
  std::string b_list;     // explicit couplings
  std::string inner;      // base family of a deformation
  std::string kappa;
  std::string scale = "1";
};

struct BuiltFamily {
  krylov::LanczosSequence seq;
  std::function<double(std::size_t, double)> phi;  // closed-form waves, may be empty
  std::function<double(double)> autocorr;          // closed-form C(t), may be empty
  std::function<double(double)> measure;           // spectral density, may be empty
  std::function<double(double)> asymptote;         // large-t C(t), may be empty
  std::optional<krylov::HahnParams> hahn;          // set for the two-parameter kinds
  double scale = 1.0;
};

void add_family_flags(CLI::App* sub, FamilyOptions& opt) {
  sub->add_option("--family", opt.family,
                  "family kind: hahn, mp, alternating, hermite, explicit, deformed")
      ->required();
  sub->add_option("--a", opt.a, "first parameter of a real pair");
  sub->add_option("--b", opt.b, "second parameter of a real pair");
  sub->add_option("--r", opt.r, "real part of a conjugate pair");
  sub->add_option("--omega", opt.omega, "imaginary part / alternating frequency");
  sub->add_option("--eta", opt.eta, "index of the linear subfamily");
  sub->add_option("--b-list", opt.b_list, "comma-separated couplings for an explicit family");
  sub->add_option("--inner", opt.inner, "base family kind of a deformation");
  sub->add_option("--kappa", opt.kappa, "deformation strength in [0,1)");
  sub->add_option("--scale", opt.scale, "positive rational rescaling of all couplings");
}

void require_opt(const std::string& value, const char* flag, const char* family) {
  if (value.empty()) {
    throw krylov::domain_error(std::string("family '") + family + "' needs " + flag);
  }
}

void reject_opt(const std::string& value, const char* flag, const char* family) {
  if (!value.empty()) {
    throw krylov::domain_error(std::string("family '") + family + "' does not take " + flag);
  }
}

BuiltFamily build_family(const FamilyOptions& opt, bool as_inner = false);

BuiltFamily build_plain_family(const FamilyOptions& opt) {
  BuiltFamily out;
  if (opt.family == "hahn") {
    const bool real_pair = !opt.a.empty() || !opt.b.empty();
    const bool conj_pair = !opt.r.empty() || !opt.omega.empty();
    if (real_pair == conj_pair) {
      throw krylov::domain_error("family 'hahn' needs either --a/--b or --r/--omega");
    }
    krylov::HahnParams p = krylov::HahnParams::real_pair(1, 1);
    if (real_pair) {
      require_opt(opt.a, "--a", "hahn");
      require_opt(opt.b, "--b", "hahn");
      const Rational a = parse_rational(opt.a);
      const Rational b = parse_rational(opt.b);
      p = krylov::HahnParams::real_pair(krylov::to_double(a), krylov::to_double(b));
      out.seq = krylov::seq_hahn_exact(a, b);
    } else {
      require_opt(opt.r, "--r", "hahn");
      require_opt(opt.omega, "--omega", "hahn");
      const Rational r = parse_rational(opt.r);
      const Rational w = parse_rational(opt.omega);
      p = krylov::HahnParams::conjugate_pair(krylov::to_double(r), krylov::to_double(w));
      out.seq = krylov::seq_conjugate_exact(r, w);
    }
    out.hahn = p;
    out.phi = [p](std::size_t n, double t) { return krylov::hahn_phi(p, n, t); };
    out.autocorr = [p](double t) { return krylov::hahn_phi(p, 0, t); };
    out.measure = [p](double x) { return krylov::hahn_measure(p, x); };
    out.asymptote = [p](double t) { return krylov::hahn_asymptote(p, t); };
    return out;
  }
  if (opt.family == "mp") {
    require_opt(opt.eta, "--eta", "mp");
    const Rational eta = parse_rational(opt.eta);
    const double eta_d = krylov::to_double(eta);
    out.seq = krylov::seq_mp(eta);
    const krylov::HahnParams p = krylov::mp_params(eta_d);
    out.hahn = p;
    out.phi = [eta_d](std::size_t n, double t) { return krylov::mp_phi(eta_d, n, t); };
    out.autocorr = [eta_d](double t) { return std::pow(1.0 / std::cosh(t), eta_d); };
    out.measure = [p](double x) { return krylov::hahn_measure(p, x); };
    out.asymptote = [p](double t) { return krylov::hahn_asymptote(p, t); };
    return out;
  }
  if (opt.family == "alternating") {
    require_opt(opt.omega, "--omega", "alternating");
    const Rational w = parse_rational(opt.omega);
    const double wd = krylov::to_double(w);
    out.seq = krylov::seq_alternating(w);
    auto wave = std::make_shared<krylov::AlternatingWave>(w, 64);
    out.phi = [wave](std::size_t n, double t) { return wave->phi(n, t); };
    out.autocorr = [wd](double t) { return std::cos(wd * t) / std::cosh(t); };
    // cos(wt) sech t splits the sech density into two shifted bumps.
    out.measure = [wd](double x) {
      return 0.25 * (1.0 / std::cosh(krylov::kPi * (x - wd) / 2.0) +
                     1.0 / std::cosh(krylov::kPi * (x + wd) / 2.0));
    };
    out.asymptote = [wd](double t) { return 2.0 * std::cos(wd * t) * std::exp(-t); };
    return out;
  }
  if (opt.family == "hermite") {
    out.seq = krylov::seq_hermite();
    out.phi = [](std::size_t n, double t) { return krylov::hermite_phi(n, t); };
    out.autocorr = [](double t) { return std::exp(-0.5 * t * t); };
    out.measure = [](double x) {
      return std::exp(-0.5 * x * x) / std::sqrt(2.0 * krylov::kPi);
    };
    return out;
  }
  if (opt.family == "explicit") {
    require_opt(opt.b_list, "--b-list", "explicit");
    const auto bs = parse_double_list(opt.b_list);
    if (bs.empty()) throw krylov::domain_error("--b-list needs at least one coupling");
    for (double v : bs) {
      if (!(v > 0.0)) throw krylov::domain_error("explicit couplings must be positive");
    }
    out.seq = krylov::seq_explicit(bs);
    return out;
  }
  throw krylov::domain_error("unknown family '" + opt.family +
                             "' (expected hahn, mp, alternating, hermite, explicit, deformed)");
}

BuiltFamily build_family(const FamilyOptions& opt, bool as_inner) {
  BuiltFamily out;
  if (opt.family == "deformed") {
    if (as_inner) throw krylov::domain_error("deformations do not nest via --inner");
    require_opt(opt.inner, "--inner", "deformed");
    require_opt(opt.kappa, "--kappa", "deformed");
    FamilyOptions inner_opt = opt;
    inner_opt.family = opt.inner;
    inner_opt.inner.clear();
    inner_opt.kappa.clear();
    inner_opt.scale = "1";
    BuiltFamily inner = build_family(inner_opt, true);
    if (!inner.seq.b2_exact) {
      throw krylov::domain_error("deformations need a base family with exact couplings");
    }
    const Rational kappa = parse_rational(opt.kappa);
    out.seq = krylov::seq_deformed(inner.seq, kappa);
    if (inner.autocorr) {
      const double kd = krylov::to_double(kappa);
      auto base_c = inner.autocorr;
      out.autocorr = [kd, base_c](double t) { return kd + (1.0 - kd) * base_c(t); };
    }
  } else {
    out = build_plain_family(opt);
  }

  const Rational alpha = parse_rational(opt.scale);
  if (!(alpha > 0)) throw krylov::domain_error("--scale must be positive");
  if (alpha == 1) return out;

  // Rescaled couplings compress time: every closed form is evaluated at
  // alpha * t and the density widens by the same factor.
  const double ad = krylov::to_double(alpha);
  BuiltFamily scaled;
  scaled.scale = ad;
  scaled.hahn = out.hahn;
  const krylov::LanczosSequence base = out.seq;
  scaled.seq.tag = "scaled(" + base.tag + "," + krylov::rat_string(alpha) + ")";
  scaled.seq.b = [base, ad](std::size_t n) { return ad * base.b(n); };
  if (base.b2_exact) {
    const Rational a2 = alpha * alpha;
    scaled.seq.b2_exact = [base, a2](std::size_t n) { return Rational(a2 * base.b2_exact(n)); };
  }
  if (out.phi) {
    auto f = out.phi;
    scaled.phi = [f, ad](std::size_t n, double t) { return f(n, ad * t); };
  }
  if (out.autocorr) {
    auto f = out.autocorr;
    scaled.autocorr = [f, ad](double t) { return f(ad * t); };
  }
  if (out.measure) {
    auto f = out.measure;
    scaled.measure = [f, ad](double x) { return f(x / ad) / ad; };
  }
  if (out.asymptote) {
    auto f = out.asymptote;
    scaled.asymptote = [f, ad](double t) { return f(ad * t); };
  }
  return scaled;
}

// ---------------------------------------------------------------------------
// shared solver / grid flags

struct SolverOptions {
  std::string method = "cayley";
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  std::size_t n_initial = 256;
  std::size_t n_max = std::size_t(1) << 22;
  std::size_t fixed_n = 0;
  std::size_t guard_band = 16;
  double guard_threshold = 1e-12;
  bool allow_truncation_limited = false;
  std::size_t store_sites = 0;
  double dt_init = 0.0;
};

void add_solver_flags(CLI::App* sub, SolverOptions& opt) {
  sub->add_option("--method", opt.method, "stepper: cayley (unitary) or dopri (explicit)")
      ->check(CLI::IsMember({"cayley", "dopri"}));
  sub->add_option("--rel-tol", opt.rel_tol, "relative step tolerance");
  sub->add_option("--abs-tol", opt.abs_tol, "absolute step tolerance");
  sub->add_option("--n-initial", opt.n_initial, "starting wall position");
  sub->add_option("--n-max-sites", opt.n_max, "hard cap on the chain length");
  sub->add_option("--fixed-n", opt.fixed_n, "pin the wall at this many sites");
  sub->add_option("--guard-band", opt.guard_band, "sites watched next to the wall");
  sub->add_option("--guard-threshold", opt.guard_threshold, "tolerated guard-band amplitude");
  sub->add_flag("--allow-truncation-limited", opt.allow_truncation_limited,
                "report degraded accuracy instead of failing when the wall saturates");
  sub->add_option("--store-sites", opt.store_sites, "keep this many leading sites per sample");
  sub->add_option("--dt-init", opt.dt_init, "initial step size (0 = method default)");
}

krylov::SolverConfig to_config(const SolverOptions& opt) {
  krylov::SolverConfig cfg;
  cfg.method = opt.method == "dopri" ? krylov::StepMethod::dopri54 : krylov::StepMethod::cayley4;
  cfg.rel_tol = opt.rel_tol;
  cfg.abs_tol = opt.abs_tol;
  cfg.n_initial = opt.n_initial;
  cfg.n_max = opt.n_max;
  cfg.fixed_n = opt.fixed_n;
  cfg.guard_band = opt.guard_band;
  cfg.guard_threshold = opt.guard_threshold;
  cfg.allow_truncation_limited = opt.allow_truncation_limited;
  cfg.store_sites = opt.store_sites;
  cfg.dt_init = opt.dt_init;
  return cfg;
}

struct GridOptions {
  double t_max = 0.0;
  double t_step = 0.0;
  std::string times;
};

void add_grid_flags(CLI::App* sub, GridOptions& opt) {
  sub->add_option("--t-max", opt.t_max, "largest sample time");
  sub->add_option("--t-step", opt.t_step, "spacing of the time grid");
  sub->add_option("--times", opt.times, "comma-separated sample times (overrides the grid)");
}

std::vector<double> make_times(const GridOptions& opt) {
  std::vector<double> times;
  if (!opt.times.empty()) {
    times = parse_double_list(opt.times);
  } else {
    if (!(opt.t_step > 0.0) || !(opt.t_max > 0.0)) {
      throw krylov::domain_error("need --times or a positive --t-max/--t-step grid");
    }
    const auto count = static_cast<std::size_t>(opt.t_max / opt.t_step + 1e-9);
    for (std::size_t k = 1; k <= count; ++k) {
      times.push_back(static_cast<double>(k) * opt.t_step);
    }
  }
  if (times.empty()) throw krylov::domain_error("time grid is empty");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0.0) || (i && !(times[i] > times[i - 1]))) {
      throw krylov::domain_error("sample times must be positive and strictly increasing");
    }
  }
  return times;
}

// ---------------------------------------------------------------------------
// subcommands

void run_family(const FamilyOptions& fam, const std::string& emit, std::size_t n_max,
                const GridOptions& grid, double x_max, double x_step,
                const std::string& command, const CLI::App* sub, const std::string& out_path) {
  const BuiltFamily built = build_family(fam);
  CsvTable table;
  if (emit == "bn") {
    if (n_max == 0) throw krylov::domain_error("--n-max must be positive");
    table.header = {"n", "b", "b2_exact"};
    for (std::size_t n = 1; n <= n_max; ++n) {
      std::vector<std::string> row = {std::to_string(n), fmt_double(built.seq.b(n))};
      row.push_back(built.seq.b2_exact ? fmt_rational(built.seq.b2_exact(n)) : std::string());
      table.rows.push_back(std::move(row));
    }
  } else if (emit == "phi") {
    if (!built.phi) {
      throw krylov::domain_error("closed-form wave functions are not available for family '" +
                                 fam.family + "'");
    }
    table.header = {"t"};
    for (std::size_t n = 0; n <= n_max; ++n) table.header.push_back("phi" + std::to_string(n));
    for (double t : make_times(grid)) {
      std::vector<std::string> row = {fmt_double(t)};
      for (std::size_t n = 0; n <= n_max; ++n) row.push_back(fmt_double(built.phi(n, t)));
      table.rows.push_back(std::move(row));
    }
  } else if (emit == "c") {
    if (!built.autocorr) {
      throw krylov::domain_error("closed-form autocorrelation is not available for family '" +
                                 fam.family + "'");
    }
    table.header = {"t", "c"};
    for (double t : make_times(grid)) {
      table.rows.push_back({fmt_double(t), fmt_double(built.autocorr(t))});
    }
  } else if (emit == "measure") {
    if (!built.measure) {
      throw krylov::domain_error("spectral density is not available for family '" + fam.family +
                                 "'");
    }
    if (!(x_max > 0.0) || !(x_step > 0.0)) {
      throw krylov::domain_error("--emit measure needs positive --x-max and --x-step");
    }
    table.header = {"x", "rho"};
    const auto half = static_cast<long>(x_max / x_step + 1e-9);
    for (long k = -half; k <= half; ++k) {
      const double x = static_cast<double>(k) * x_step;
      table.rows.push_back({fmt_double(x), fmt_double(built.measure(x))});
    }
  } else if (emit == "asymptote") {
    if (!built.asymptote) {
      throw krylov::domain_error("large-time asymptote is not available for family '" +
                                 fam.family + "'");
    }
    table.header = {"t", "asymptote"};
    for (double t : make_times(grid)) {
      table.rows.push_back({fmt_double(t), fmt_double(built.asymptote(t))});
    }
  } else {
    throw krylov::domain_error("unknown --emit '" + emit +
                               "' (expected bn, phi, c, measure, asymptote)");
  }
  emit_table(table, command, sub, out_path);
}

void run_solve(const FamilyOptions& fam, const SolverOptions& sol, const GridOptions& grid,
               const std::string& emit, const std::string& command, const CLI::App* sub,
               const std::string& out_path) {
  const BuiltFamily built = build_family(fam);
  const auto times = make_times(grid);
  const krylov::SolverConfig cfg = to_config(sol);
  const krylov::ChainResult res = krylov::evolve_chain(built.seq, times, cfg);

  CsvTable table;
  if (emit == "c") {
    table.header = {"t", "c"};
    for (const auto& s : res.samples) {
      table.rows.push_back({fmt_double(s.t), fmt_double(s.c)});
    }
  } else if (emit == "full") {
    table.header = {"t", "c", "norm_defect", "complexity", "complexity_second", "tail_mass"};
    for (const auto& s : res.samples) {
      table.rows.push_back({fmt_double(s.t), fmt_double(s.c), fmt_double(s.norm_defect),
                            fmt_double(s.complexity), fmt_double(s.complexity_second),
                            fmt_double(s.tail_mass)});
    }
  } else if (emit == "phi") {
    if (sol.store_sites == 0) {
      throw krylov::domain_error("--emit phi needs --store-sites");
    }
    table.header = {"t"};
    for (std::size_t n = 0; n < sol.store_sites; ++n) {
      table.header.push_back("phi" + std::to_string(n));
    }
    for (std::size_t i = 0; i < res.samples.size(); ++i) {
      std::vector<std::string> row = {fmt_double(res.samples[i].t)};
      for (double v : res.stored[i]) row.push_back(fmt_double(v));
      table.rows.push_back(std::move(row));
    }
  } else {
    throw krylov::domain_error("unknown --emit '" + emit + "' (expected c, full, phi)");
  }
  emit_table(table, command, sub, out_path);
}

void run_complexity(const FamilyOptions& fam, const SolverOptions& sol, const GridOptions& grid,
                    const std::string& emit, const std::string& command, const CLI::App* sub,
                    const std::string& out_path) {
  const BuiltFamily built = build_family(fam);
  CsvTable table;
  if (emit == "series") {
    const auto times = make_times(grid);
    const krylov::ChainResult res = krylov::evolve_chain(built.seq, times, to_config(sol));
    table.header = {"t", "complexity", "complexity_second"};
    for (const auto& s : res.samples) {
      table.rows.push_back(
          {fmt_double(s.t), fmt_double(s.complexity), fmt_double(s.complexity_second)});
    }
  } else if (emit == "kinf") {
    if (!built.hahn || built.scale != 1.0) {
      throw krylov::domain_error(
          "k_inf is defined only for the unscaled two-parameter families (hahn, mp)");
    }
    table.header = {"family", "k_inf"};
    table.rows.push_back({built.seq.tag, fmt_double(krylov::complexity_prefactor(*built.hahn))});
  } else {
    throw krylov::domain_error("unknown --emit '" + emit + "' (expected series, kinf)");
  }
  emit_table(table, command, sub, out_path);
}

void run_invert(const std::string& series, const std::string& eta, const std::string& omega,
                const std::string& even_moments, std::size_t n_max, bool exact,
                const std::string& command, const CLI::App* sub, const std::string& out_path) {
  if (series.empty() == even_moments.empty()) {
    throw krylov::domain_error("invert needs exactly one of --series or --even-moments");
  }
  if (n_max == 0) throw krylov::domain_error("--n-max must be positive");

  // Interleave the vanishing odd moments expected by the Hankel machinery.
  std::vector<Rational> even;
  if (!series.empty()) {
    const std::size_t count = n_max + 2;
    const std::size_t order = 2 * count;
    if (series == "sech_power") {
      if (eta.empty()) throw krylov::domain_error("--series sech_power needs --eta");
      const Rational eq = parse_rational(eta);
      if (!(eq > 0) || boost::multiprecision::denominator(eq) != 1) {
        throw krylov::domain_error("--series sech_power needs a positive integer --eta");
      }
      const auto eu = static_cast<unsigned>(krylov::to_double(eq));
      even = krylov::moments_from_series(krylov::autocorr_sech_power(eu, order), count);
    } else if (series == "cos_sech") {
      if (omega.empty()) throw krylov::domain_error("--series cos_sech needs --omega");
      even = krylov::moments_from_series(
          krylov::autocorr_cos_sech(parse_rational(omega), order), count);
    } else if (series == "t_over_sinh") {
      even = krylov::moments_from_series(krylov::autocorr_t_over_sinh(order), count);
    } else {
      throw krylov::domain_error("unknown --series '" + series +
                                 "' (expected sech_power, cos_sech, t_over_sinh)");
    }
  } else {
    for (const auto& tok : split_list(even_moments)) even.push_back(parse_rational(tok));
    if (even.size() < n_max + 2) {
      throw krylov::domain_error("need at least n_max + 2 even moments to invert " +
                                 std::to_string(n_max) + " couplings");
    }
    if (even[0] != 1) throw krylov::domain_error("moment inversion needs mu_0 = 1");
  }
  std::vector<Rational> mu;
  for (const auto& m : even) {
    mu.push_back(m);
    mu.push_back(Rational(0));
  }
  mu.pop_back();

  const auto b2 = krylov::b2_from_moments(mu, n_max);
  CsvTable table;
  if (exact) {
    table.header = {"n", "b2"};
    for (std::size_t n = 1; n <= n_max; ++n) {
      table.rows.push_back({std::to_string(n), fmt_rational(b2[n - 1])});
    }
  } else {
    table.header = {"n", "b", "b2"};
    for (std::size_t n = 1; n <= n_max; ++n) {
      const double v = krylov::to_double(b2[n - 1]);
      table.rows.push_back({std::to_string(n), fmt_double(std::sqrt(v)), fmt_double(v)});
    }
  }
  emit_table(table, command, sub, out_path);
}

void run_deform(const FamilyOptions& fam, const std::string& kappa, const std::string& emit,
                std::size_t n_max, std::size_t k_max, const std::string& command,
                const CLI::App* sub, const std::string& out_path) {
  if (kappa.empty()) throw krylov::domain_error("deform needs --kappa");
  const Rational kq = parse_rational(kappa);
  const BuiltFamily base = build_family(fam);

  CsvTable table;
  if (emit == "bn") {
    if (n_max == 0) throw krylov::domain_error("--n-max must be positive");
    if (!base.seq.b2_exact) {
      throw krylov::domain_error("deformations need a base family with exact couplings");
    }
    const krylov::LanczosSequence seq = krylov::seq_deformed(base.seq, kq);
    table.header = {"n", "b", "b2_exact"};
    for (std::size_t n = 1; n <= n_max; ++n) {
      table.rows.push_back(
          {std::to_string(n), fmt_double(seq.b(n)), fmt_rational(seq.b2_exact(n))});
    }
  } else if (emit == "kappa") {
    if (k_max == 0) throw krylov::domain_error("--k-max must be positive");
    std::vector<std::size_t> ks;
    for (std::size_t k = 1; k < k_max; k *= 2) ks.push_back(k);
    ks.push_back(k_max);
    table.header = {"K", "raw", "telescoped"};
    if (base.seq.b2_exact) {
      const krylov::LanczosSequence seq = krylov::seq_deformed(base.seq, kq);
      for (std::size_t k : ks) {
        const auto est = krylov::stationary_kappa(seq, base.seq, k);
        table.rows.push_back(
            {std::to_string(k), fmt_rational(est.raw), fmt_rational(est.telescoped)});
      }
    } else {
      const double kd = krylov::to_double(kq);
      krylov::LanczosSequence seq;
      seq.tag = "deformed(" + base.seq.tag + ")";
      const krylov::LanczosSequence inner = base.seq;
      seq.b = [inner, kd](std::size_t n) { return krylov::deform_b(inner, kd, n); };
      for (std::size_t k : ks) {
        const auto est = krylov::stationary_kappa_d(seq, base.seq, k);
        table.rows.push_back(
            {std::to_string(k), fmt_double(est.raw), fmt_double(est.telescoped)});
      }
    }
  } else {
    throw krylov::domain_error("unknown --emit '" + emit + "' (expected bn, kappa)");
  }
  emit_table(table, command, sub, out_path);
}

int run_verify(bool list_only, const std::string& only) {
  const auto checks = krylov::verification_suite();
  std::size_t ran = 0;
  std::size_t failed = 0;
  std::string first_failure;
  for (const auto& check : checks) {
    if (!only.empty() && check.name.find(only) == std::string::npos) continue;
    if (list_only) {
      std::printf("%s\n", check.name.c_str());
      continue;
    }
    ++ran;
    const auto result = krylov::run_check(check);
    std::printf("[%s] %s: %s\n", result.pass ? "PASS" : "FAIL", check.name.c_str(),
                result.detail.c_str());
    if (!result.pass && failed++ == 0) first_failure = check.name;
  }
  if (list_only) return 0;
  if (ran == 0) throw krylov::domain_error("no check matches '" + only + "'");
  if (failed) {
    std::fprintf(stderr, "verify: %zu of %zu checks failed, first broken invariant: %s\n",
                 failed, ran, first_failure.c_str());
    return 3;
  }
  std::printf("verify: all %zu checks passed\n", ran);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lanczos coefficient families, chain evolution, and exact moment inversion"};
  app.require_subcommand(1);

  FamilyOptions fam_family, fam_solve, fam_complexity, fam_deform;
  SolverOptions sol_solve, sol_complexity;
  GridOptions grid_family, grid_solve, grid_complexity;
  std::string out_family, out_solve, out_complexity, out_invert, out_deform;

  // family
  auto* family_cmd = app.add_subcommand("family", "emit coefficient and closed-form tables");
  add_family_flags(family_cmd, fam_family);
  add_grid_flags(family_cmd, grid_family);
  std::string family_emit = "bn";
  std::size_t family_n_max = 16;
  double family_x_max = 0.0, family_x_step = 0.0;
  family_cmd->add_option("--emit", family_emit, "table kind: bn, phi, c, measure, asymptote");
  family_cmd->add_option("--n-max", family_n_max, "largest coupling / wave index");
  family_cmd->add_option("--x-max", family_x_max, "half-width of the density grid");
  family_cmd->add_option("--x-step", family_x_step, "spacing of the density grid");
  family_cmd->add_option("--out", out_family, "CSV output path (adds a manifest sidecar)");

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "integrate the semi-infinite chain");
  add_family_flags(solve_cmd, fam_solve);
  add_solver_flags(solve_cmd, sol_solve);
  add_grid_flags(solve_cmd, grid_solve);
  std::string solve_emit = "full";
  solve_cmd->add_option("--emit", solve_emit, "columns: full, c, phi");
  solve_cmd->add_option("--out", out_solve, "CSV output path (adds a manifest sidecar)");

  // complexity
  auto* complexity_cmd =
      app.add_subcommand("complexity", "growth diagnostics from the chain or closed forms");
  add_family_flags(complexity_cmd, fam_complexity);
  add_solver_flags(complexity_cmd, sol_complexity);
  add_grid_flags(complexity_cmd, grid_complexity);
  std::string complexity_emit = "series";
  complexity_cmd->add_option("--emit", complexity_emit, "table kind: series, kinf");
  complexity_cmd->add_option("--out", out_complexity, "CSV output path (adds a manifest sidecar)");

  // invert
  auto* invert_cmd = app.add_subcommand("invert", "recover couplings from moments exactly");
  std::string invert_series, invert_eta, invert_omega, invert_moments;
  std::size_t invert_n_max = 8;
  bool invert_exact = false;
  invert_cmd->add_option("--series", invert_series,
                         "autocorrelation: sech_power, cos_sech, t_over_sinh");
  invert_cmd->add_option("--eta", invert_eta, "power for sech_power");
  invert_cmd->add_option("--omega", invert_omega, "frequency for cos_sech");
  invert_cmd->add_option("--even-moments", invert_moments,
                         "comma-separated rational moments mu_0, mu_2, ...");
  invert_cmd->add_option("--n-max", invert_n_max, "number of couplings to recover");
  invert_cmd->add_flag("--exact", invert_exact, "emit b^2 as exact fractions");
  invert_cmd->add_option("--out", out_invert, "CSV output path (adds a manifest sidecar)");

  // deform
  auto* deform_cmd = app.add_subcommand("deform", "kappa-deform a family / recover kappa");
  add_family_flags(deform_cmd, fam_deform);
  std::string deform_emit = "bn";
  std::size_t deform_n_max = 16, deform_k_max = 1024;
  deform_cmd->add_option("--emit", deform_emit, "table kind: bn, kappa");
  deform_cmd->add_option("--n-max", deform_n_max, "largest deformed coupling index");
  deform_cmd->add_option("--k-max", deform_k_max, "largest partial-sum depth for recovery");
  deform_cmd->add_option("--out", out_deform, "CSV output path (adds a manifest sidecar)");

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "run the cross-module invariant suite");
  bool verify_list = false;
  std::string verify_only;
  verify_cmd->add_flag("--list", verify_list, "print check names without running them");
  verify_cmd->add_option("--only", verify_only, "run only checks whose name contains this");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  // Spec'd emit spellings are lowercase; C(t) columns also accept "C".
  const auto canon = [](std::string& s) {
    if (s == "C") s = "c";
  };
  canon(family_emit);
  canon(solve_emit);

  try {
    if (family_cmd->parsed()) {
      run_family(fam_family, family_emit, family_n_max, grid_family, family_x_max,
                 family_x_step, "family", family_cmd, out_family);
    } else if (solve_cmd->parsed()) {
      run_solve(fam_solve, sol_solve, grid_solve, solve_emit, "solve", solve_cmd, out_solve);
    } else if (complexity_cmd->parsed()) {
      run_complexity(fam_complexity, sol_complexity, grid_complexity, complexity_emit,
                     "complexity", complexity_cmd, out_complexity);
    } else if (invert_cmd->parsed()) {
      run_invert(invert_series, invert_eta, invert_omega, invert_moments, invert_n_max,
                 invert_exact, "invert", invert_cmd, out_invert);
    } else if (deform_cmd->parsed()) {
      run_deform(fam_deform, fam_deform.kappa, deform_emit, deform_n_max, deform_k_max,
                 "deform", deform_cmd, out_deform);
    } else if (verify_cmd->parsed()) {
      return run_verify(verify_list, verify_only);
    }
  } catch (const krylov::domain_error& e) {
    std::fprintf(stderr, "argument error: %s\n", e.what());
    return 2;
  } catch (const krylov::krylov_error& e) {
    std::fprintf(stderr, "numerical contract violated: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}
