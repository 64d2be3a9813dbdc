#pragma once

// Command-line front end. run_cli() is the whole program minus main(), so the
// tests can drive it with captured streams.

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "phmf/verify.hpp"

namespace phmf::cli {

enum ExitCode { kOk = 0, kVerificationFailed = 1, kUsage = 2, kDomain = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Errors raised by argument validation rather than by the mathematics.
inline bool is_usage_code(const std::string& code) {
  static const char* codes[] = {"NonPositive", "LevelTooLarge", "NotADivisor", "NotCoprime", "InvalidCusp",
                                "Precondition", "UnknownSuite", "UnknownMethod"};
  return std::any_of(std::begin(codes), std::end(codes), [&](const char* c) { return code == c; });
}

inline cplx parse_complex(const std::string& text) {
  std::istringstream is(text);
  double re = 0.0, im = 0.0;
  char comma = 0;
  if (!(is >> re)) throw UsageError("cannot parse complex number '" + text + "' (expected re,im)");
  if (is >> comma) {
    if (comma != ',' || !(is >> im)) throw UsageError("cannot parse complex number '" + text + "' (expected re,im)");
  }
  std::string rest;
  if (is >> rest) throw UsageError("trailing characters in complex number '" + text + "'");
  if (!std::isfinite(re) || !std::isfinite(im)) throw UsageError("complex number must be finite");
  return {re, im};
}

inline std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::istringstream is(text);
  std::string item;
  while (std::getline(is, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("cannot parse number list '" + text + "'");
    }
  }
  if (out.empty()) throw UsageError("empty number list");
  return out;
}

inline ojson cj(cplx z) { return ojson::array({z.real(), z.imag()}); }

inline std::string cs(cplx z) {
  std::ostringstream os;
  os.precision(17);
  os << z.real() << ',' << z.imag();
  return os.str();
}

inline ojson approx_json(const ApproxValue& v) {
  return ojson{{"value", cj(v.value)}, {"err", v.err}, {"rigorous", v.rigorous}};
}

namespace detail {

inline void flatten(const ojson& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
  } else if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    out.emplace_back(prefix + "_re", j[0].dump());
    out.emplace_back(prefix + "_im", j[1].dump());
  } else if (j.is_string()) {
    out.emplace_back(prefix, j.get<std::string>());
  } else {
    out.emplace_back(prefix, j.dump());
  }
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string o = "\"";
  for (char c : s) {
    if (c == '"') o += '"';
    o += c;
  }
  return o + "\"";
}

}  // namespace detail

// A "rows" array becomes one CSV line per row, with the other fields repeated.
inline std::string result_csv(const ojson& j) {
  ojson head = j;
  ojson rows = ojson::array({ojson::object()});
  if (j.contains("rows")) {
    rows = j.at("rows");
    head.erase("rows");
  }
  std::ostringstream os;
  bool first = true;
  for (const auto& row : rows) {
    std::vector<std::pair<std::string, std::string>> cells;
    detail::flatten(head, "", cells);
    detail::flatten(row, "", cells);
    if (first) {
      for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << detail::csv_escape(cells[i].first);
      os << '\n';
      first = false;
    }
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << detail::csv_escape(cells[i].second);
    os << '\n';
  }
  return os.str();
}

inline std::string result_human(const ojson& j) {
  std::vector<std::pair<std::string, std::string>> cells;
  detail::flatten(j, "", cells);
  std::size_t w = 0;
  for (const auto& c : cells) w = std::max(w, c.first.size());
  std::ostringstream os;
  for (const auto& [k, v] : cells) os << k << std::string(w - k.size() + 2, ' ') << v << '\n';
  return os.str();
}

struct Globals {
  std::string format = "json";
  int threads = 1;
  std::optional<i64> cmax, mmax, nmax;
  std::optional<double> tol;
  std::uint64_t seed = 12345;

  TruncationPolicy policy() const {
    TruncationPolicy p;
    if (cmax) p.c_max = *cmax;
    if (mmax) p.m_max = *mmax;
    if (nmax) p.n_max = *nmax;
    if (tol) p.tol = *tol;
    p.threads = threads;
    return p;
  }
};

inline int default_threads() {
  if (const char* env = std::getenv("PHMF_THREADS")) {
    const int t = std::atoi(env);
    if (t >= 1) return t;
  }
  return 1;
}

inline void emit(const Globals& g, const ojson& j, std::ostream& out) {
  if (g.format == "csv")
    out << result_csv(j);
  else if (g.format == "human")
    out << result_human(j);
  else
    out << j.dump(2) << '\n';
}

inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fourier coefficients, L-functions and verification suites for the weight-2 polar harmonic "
               "Maass form attached to Gamma0(N)"};
  app.name("phmf");
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  g.threads = default_threads();
  app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"json", "csv", "human"}));
  app.add_option("--threads", g.threads, "worker threads (default from PHMF_THREADS, else 1)")
      ->check(CLI::Range(1, 256));
  app.add_option("--cmax", g.cmax, "Kloosterman modulus cutoff")->check(CLI::Range(i64{1}, i64{100000000}));
  app.add_option("--mmax", g.mmax, "constant-mode cutoff")->check(CLI::Range(i64{1}, i64{100000}));
  app.add_option("--nmax", g.nmax, "Bessel-mode cutoff")->check(CLI::Range(i64{1}, i64{100000}));
  app.add_option("--tol", g.tol, "target absolute tolerance")->check(CLI::Range(1e-300, 1.0));
  app.add_option("--seed", g.seed, "seed for verification suites");

  std::function<ojson()> action;
  bool is_verify = false;
  VerificationReport report;

  // kloosterman
  auto* k = app.add_subcommand("kloosterman", "classical or generalized Kloosterman sum");
  i64 kN = 1, km = 0, kn = 0, kc = 1;
  std::string kcusp = "inf", kmethod = "direct";
  k->add_option("--N", kN, "level")->required();
  k->add_option("--cusp", kcusp, "cusp: inf, 0 or a/g");
  k->add_option("--m", km, "first index")->required();
  k->add_option("--n", kn, "second index")->required();
  k->add_option("--c", kc, "modulus")->required()->check(CLI::PositiveNumber);
  k->add_option("--method", kmethod, "direct, factored or classical")
      ->check(CLI::IsMember({"direct", "factored", "classical"}));
  k->callback([&] {
    action = [&] {
      const auto ctx = make_level(kN);
      ojson j{{"N", kN}, {"cusp", kcusp}, {"m", km}, {"n", kn}, {"c", kc}, {"method", kmethod}};
      ExactCyclotomicSum s;
      bool fallback = false;
      if (kmethod == "classical") {
        s = classical_kloosterman(km, kn, kc);
      } else {
        const auto cusp = parse_cusp(kN, kcusp);
        const auto r = gen_kloosterman(ctx, cusp, km, kn, kc,
                                       kmethod == "direct" ? KloostermanMethod::direct : KloostermanMethod::factored);
        s = r.sum;
        fallback = r.fallback_used;
        j["cusp"] = cusp.label();
        j["admissible"] = kloosterman_admissible(cusp, kc);
      }
      j["value"] = s.value.real();
      j["value_im"] = s.value.imag();
      j["terms"] = s.terms;
      j["exact_zero"] = s.exact_zero;
      j["fallback_used"] = fallback;
      return j;
    };
  });

  // jcoeff
  auto* jc = app.add_subcommand("jcoeff", "Fourier coefficient j_{N,n} at i-infinity or 0");
  i64 jN = 1, jn = 1;
  std::string jcusp = "inf", jmethod = "all";
  jc->add_option("--N", jN, "level")->required();
  jc->add_option("--cusp", jcusp, "inf or 0");
  jc->add_option("--n", jn, "coefficient index")->required()->check(CLI::PositiveNumber);
  jc->add_option("--method", jmethod, "series, euler, closed or all")
      ->check(CLI::IsMember({"series", "euler", "closed", "all"}));
  jc->callback([&] {
    action = [&] {
      const auto ctx = make_level(jN);
      const auto cusp = parse_cusp(jN, jcusp);
      const auto pol = g.policy();
      ojson j{{"N", jN}, {"cusp", cusp.label()}, {"n", jn}, {"method", jmethod}};
      if (jmethod != "all") {
        const JMethod m = jmethod == "series" ? JMethod::series : jmethod == "euler" ? JMethod::euler : JMethod::closed;
        const auto v = j_coeff(ctx, cusp, jn, m, pol);
        j["value"] = cj(v.value);
        j["err"] = v.err;
        if (m == JMethod::series) j["c_max"] = pol.c_max;
        return j;
      }
      const auto se = j_coeff(ctx, cusp, jn, JMethod::series, pol);
      const auto eu = j_coeff(ctx, cusp, jn, JMethod::euler, pol);
      const auto cl = j_coeff(ctx, cusp, jn, JMethod::closed, pol);
      const double e = eu.value.real();
      const bool se_ok = std::abs(se.value - eu.value) <= std::max(0.01 * std::abs(e), se.err);
      const bool cl_ok = std::abs(cl.value - eu.value) <= 1e-9;
      j["series"] = {{"value", se.value.real()}, {"err", se.err}, {"c_max", pol.c_max}};
      j["euler"] = {{"value", e}};
      j["closed"] = {{"value", cl.value.real()}};
      j["agree"] = {{"series_euler", se_ok}, {"euler_closed", cl_ok}};
      j["known_open"] = gcd(jn, jN) > 1;
      return j;
    };
  });

  // lfunction
  auto* lf = app.add_subcommand("lfunction", "L-function of the Eisenstein limit at a cusp");
  i64 lN = 1;
  std::string lcusp = "inf", ls = "3,0", lmethod = "closed";
  std::optional<double> lt0;
  lf->add_option("--N", lN, "level")->required();
  lf->add_option("--cusp", lcusp, "inf or 0");
  lf->add_option("--s", ls, "complex argument re,im")->required();
  lf->add_option("--method", lmethod, "closed or mellin")->check(CLI::IsMember({"closed", "mellin"}));
  lf->add_option("--t0", lt0, "Mellin split point")->check(CLI::PositiveNumber);
  lf->callback([&] {
    action = [&] {
      const auto ctx = make_level(lN);
      const auto cusp = parse_cusp(lN, lcusp);
      require_eisenstein_cusp(ctx, cusp);
      const cplx s = parse_complex(ls);
      ojson j{{"N", lN}, {"cusp", cusp.label()}, {"s", cj(s)}, {"method", lmethod}};
      ApproxValue v;
      if (lmethod == "closed") {
        v = L_closed(ctx, cusp, s);
      } else {
        const double t0 = lt0.value_or(default_t0(ctx));
        j["t0"] = t0;
        v = L_mellin_eisenstein(ctx, cusp, s, t0, g.policy());
      }
      j["value"] = cj(v.value);
      j["err"] = v.err;
      j["rigorous"] = v.rigorous;
      return j;
    };
  });

  // lfunction-z
  auto* lz = app.add_subcommand("lfunction-z", "L-function of H*_{N,z} along the imaginary axis");
  i64 zN = 1;
  std::string zz, zs, zys;
  std::optional<double> zt0;
  bool zfricke = false;
  lz->add_option("--N", zN, "level")->required();
  lz->add_option("--z", zz, "point re,im with Im z > 2")->required();
  lz->add_option("--s", zs, "complex argument re,im")->required();
  lz->add_option("--t0", zt0, "Mellin split point")->check(CLI::PositiveNumber);
  lz->add_flag("--fricke", zfricke, "evaluate L_{N,-1/(Nz)} instead");
  lz->add_option("--ys", zys, "limit table heights y1,y2,... along Re z (uses t0 = 1 unless given)");
  lz->callback([&] {
    action = [&] {
      const auto ctx = make_level(zN);
      const cplx z = parse_complex(zz), s = parse_complex(zs);
      const auto pol = g.policy();
      ojson j{{"N", zN}, {"z", cj(z)}, {"s", cj(s)}, {"target", zfricke ? "fricke_point" : "point"}};
      if (!zys.empty()) {
        const auto ys = parse_list(zys);
        const double t0 = zt0.value_or(1.0);
        const auto variant = zfricke ? LimitVariant::fricke : LimitVariant::point;
        const auto target = zfricke ? (zN == 1 ? cusp_infinity(1) : cusp_zero(zN)) : cusp_infinity(zN);
        j["t0"] = t0;
        j["limit"] = cj(L_closed(ctx, target, s).value);
        ojson rows = ojson::array();
        for (const auto& r : limit_table(ctx, z.real(), s, ys, variant, t0, pol))
          rows.push_back({{"y", r.y}, {"corrected", cj(r.corrected)}, {"error", r.error}, {"err_bound", r.err_bound}});
        j["rows"] = rows;
        return j;
      }
      MellinSpec spec;
      spec.ctx = ctx;
      spec.kind = zfricke ? TargetKind::fricke_point : TargetKind::point;
      spec.z = z;
      spec.s = s;
      spec.t0 = zt0.value_or(default_t0(ctx));
      spec.policy = pol;
      const auto v = L_mellin(spec);
      j["t0"] = *spec.t0;
      j["value"] = cj(v.value);
      j["err"] = v.err;
      j["rigorous"] = v.rigorous;
      return j;
    };
  });

  // eval-h
  auto* eh = app.add_subcommand("eval-h", "evaluate H_{N,rho}(it) or the expansion of H*_{N,z} at a cusp");
  i64 hN = 1;
  std::string hcusp = "inf", hz, htau;
  std::optional<double> ht;
  bool hrelaxed = false;
  eh->add_option("--N", hN, "level")->required();
  eh->add_option("--cusp", hcusp, "cusp: inf, 0 or a/g");
  eh->add_option("--t", ht, "Eisenstein limit at i t")->check(CLI::PositiveNumber);
  eh->add_option("--z", hz, "point z re,im");
  eh->add_option("--tau", htau, "evaluation point tau re,im");
  eh->add_flag("--relaxed", hrelaxed, "only require Im tau > 1/Im z");
  eh->callback([&] {
    action = [&] {
      const auto ctx = make_level(hN);
      const auto cusp = parse_cusp(hN, hcusp);
      ojson j{{"N", hN}, {"cusp", cusp.label()}};
      if (ht) {
        if (!hz.empty() || !htau.empty()) throw UsageError("--t excludes --z and --tau");
        const auto v = eval_H_eisenstein(ctx, cusp, *ht, g.policy());
        j["t"] = *ht;
        j.update(approx_json(v));
        return j;
      }
      if (hz.empty() || htau.empty()) throw UsageError("eval-h needs either --t or both --z and --tau");
      PointEvalRequest req;
      req.ctx = ctx;
      req.cusp = cusp;
      req.z = parse_complex(hz);
      req.tau = parse_complex(htau);
      req.policy = g.policy();
      req.relaxed = hrelaxed;
      const auto v = eval_H_star(req);
      j["z"] = cj(req.z);
      j["tau"] = cj(req.tau);
      j.update(approx_json(v));
      return j;
    };
  });

  // verify
  auto* vf = app.add_subcommand("verify", "run a verification suite");
  std::string vsuite, vscale = "quick";
  vf->add_option("--suite", vsuite, "weil, factorization, cosetcount, funceq, dirichlet, fricke, t0, limit, specfun")
      ->required();
  vf->add_option("--scale", vscale, "quick or full")->check(CLI::IsMember({"quick", "full"}));
  vf->callback([&] {
    action = [&] {
      VerifyOptions o;
      o.seed = g.seed;
      o.scale = vscale == "full" ? Scale::full : Scale::quick;
      o.threads = g.threads;
      o.c_max = g.cmax;
      o.m_max = g.mmax;
      o.n_max = g.nmax;
      o.tol = g.tol;
      report = verify_suite(vsuite, o);
      is_verify = true;
      return ojson{};
    };
  });

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    const ojson j = action();
    if (is_verify) {
      if (g.format == "csv")
        out << to_csv(report);
      else if (g.format == "human")
        out << to_human(report);
      else
        out << to_json(report).dump(2) << '\n';
      if (!report.passed()) {
        err << "verification failed: " << report.count_failed() << " case(s)\n";
        return kVerificationFailed;
      }
      return kOk;
    }
    emit(g, j, out);
    return kOk;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const DomainError& e) {
    const bool usage = is_usage_code(e.code);
    err << (usage ? "usage error" : "domain error") << " [" << e.code << "]: " << e.what() << '\n';
    return usage ? kUsage : kDomain;
  }
}

}  // namespace phmf::cli
