#include "CLI11.hpp"
#include "json.hpp"

#include "gammalab/cuspchar.hpp"
#include "gammalab/error.hpp"
#include "gammalab/levelzero.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

using namespace gammalab;
using nlohmann::json;

namespace {

constexpr const char* kSchema = "gammalab/1";
constexpr int kExitPrecondition = 2;
constexpr int kExitDisagree = 3;

struct Config {
  unsigned p = 0, e = 0, q = 0, n = 2;
  std::string theta = "all-regular";
  bool psi_inverse = false;
  double c_re = 1.0, c_im = 0.0;
  std::uint64_t seed = 1;
  unsigned trials = 100;
  double tol = 1e-7;
  std::string format = "json";
  std::string out;
  bool exhaustive = false;
  std::string closed_variant = "rederived";
  bool timing = false;
};

struct Precondition : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void resolve_field(Config& c) {
  if (c.q) {
    unsigned p = 0;
    for (unsigned d = 2; d <= c.q; ++d)
      if (c.q % d == 0) {
        p = d;
        break;
      }
    unsigned e = 0;
    for (unsigned x = c.q; x > 1 && x % p == 0; x /= p) ++e;
    std::uint64_t back = 1;
    for (unsigned i = 0; i < e; ++i) back *= p;
    if (back != c.q) throw Precondition("q = " + std::to_string(c.q) + " is not a prime power");
    if (c.p && c.p != p) throw Precondition("--p disagrees with --q");
    if (c.e && c.e != e) throw Precondition("--e disagrees with --q");
    c.p = p;
    c.e = e;
  }
  if (!c.p) throw Precondition("give --q or --p");
  if (!c.e) c.e = 1;
  if (c.n < 2 || c.n > kMaxN) throw Precondition("n must be in [2, 6]");
  if (c.format != "json" && c.format != "csv") throw Precondition("--format must be json or csv");
  if (c.closed_variant != "rederived" && c.closed_variant != "printed")
    throw Precondition("--closed-variant must be rederived or printed");
  if (c.trials == 0) throw Precondition("--trials must be positive");
}

std::vector<std::int64_t> resolve_thetas(const Config& c, const GroupCtx& G) {
  if (c.theta == "all-regular") return regular_orbit_reps(G.field(), c.n);
  std::int64_t k = 0;
  try {
    std::size_t used = 0;
    k = std::stoll(c.theta, &used);
    if (used != c.theta.size()) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw Precondition("--theta must be an integer or all-regular");
  }
  const auto mod = static_cast<std::int64_t>(G.field().order());
  k = ((k % mod) + mod) % mod;
  if (!is_regular(MultChar(G.field(), c.n, k), c.n)) throw Precondition("theta exponent " + c.theta + " is not regular");
  return {k};
}

json cjson(cplx z) { return json::array({z.real(), z.imag()}); }

json config_json(const Config& c) {
  return {{"p", c.p},         {"e", c.e},           {"n", c.n},         {"theta", c.theta},
          {"psi_inverse", c.psi_inverse}, {"c", json::array({c.c_re, c.c_im})}, {"seed", c.seed},
          {"trials", c.trials}, {"tol", c.tol},    {"exhaustive", c.exhaustive}, {"closed_variant", c.closed_variant}};
}

FeOptions fe_options(const Config& c) {
  FeOptions o;
  o.seed = c.seed;
  o.trials = c.trials;
  o.tol = std::min(1e-8, c.tol);
  o.force_exhaustive = c.exhaustive;
  return o;
}

struct Row {
  json j;
  bool disagree = false;
};

Row gamma_row(const Config& c, const GroupCtx& G, std::int64_t k) {
  const auto t0 = std::chrono::steady_clock::now();
  CuspidalRep rep(G, k);
  const BesselTable table = bessel_build(rep, c.psi_inverse);
  Row row;
  json& j = row.j;
  j["k"] = k;
  j["orbit"] = galois_orbit(G.field(), c.n, k);
  const bool shalika = c.n % 2 == 0 && admits_shalika_vector(rep);
  j["shalika"] = shalika;
  if (shalika) {
    const LevelZeroCtx ctx{&table, cplx(c.c_re, c.c_im)};
    const LocalFactors f = local_factors(ctx);
    j["local"] = {{"c", cjson(ctx.c)},          {"L", f.L.to_json()},       {"eps", f.eps.to_json()},
                  {"gamma", f.gamma.to_json()}, {"L_str", f.L.str()},       {"eps_str", f.eps.str()},
                  {"gamma_str", f.gamma.str()}};
  } else {
    std::vector<std::pair<std::string, cplx>> values;
    json routes = json::object();
    try {
      const GammaResult r = gamma_ratio(table, fe_options(c));
      routes["ratio"] = {{"value", cjson(r.value)}, {"fe_residual", r.residual}, {"pairs", r.pairs},
                         {"exhaustive", r.exhaustive}};
      values.emplace_back("ratio", r.value);
    } catch (const Error& e) {
      if (e.code() != Errc::NonConstantRatio) throw;
      routes["ratio"] = {{"error", e.what()}};
      row.disagree = true;
    }
    const GammaResult tor = gamma_torus(table);
    routes["torus"] = {{"value", cjson(tor.value)}};
    values.emplace_back("torus", tor.value);
    const bool closed_ok = c.n <= 4 && !(c.n == 2 && rep.central_char().is_trivial()) &&
                           !(c.n == 4 && restriction_is_trivial(rep.theta(), 2));
    if (closed_ok) {
      const auto variant = c.closed_variant == "printed" ? ClosedVariant::Printed : ClosedVariant::Rederived;
      const GammaResult cl = gamma_closed(rep, c.psi_inverse, variant);
      routes["closed_form"] = {{"value", cjson(cl.value)}};
      values.emplace_back("closed_form", cl.value);
    }
    double delta = 0.0;
    for (std::size_t a = 0; a < values.size(); ++a)
      for (std::size_t b = a + 1; b < values.size(); ++b) {
        const double d = std::abs(values[a].second - values[b].second);
        routes["delta_" + values[a].first + "_" + values[b].first] = d;
        delta = std::max(delta, d);
      }
    j["routes"] = routes;
    j["gamma"] = cjson(tor.value);
    j["abs_gamma"] = std::abs(tor.value);
    j["max_route_delta"] = delta;
    if (delta > c.tol) row.disagree = true;
  }
  if (c.timing)
    j["seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return row;
}

std::string csv_field(const std::string& s) { return "\"" + s + "\""; }

std::string gamma_csv(const json& doc) {
  std::ostringstream os;
  os.precision(17);
  os << "# schema " << kSchema << "\n";
  os << "k,shalika,gamma_re,gamma_im,abs_gamma,max_route_delta,fe_residual,local_L,local_eps,local_gamma\n";
  for (const json& r : doc["rows"]) {
    os << r["k"].get<std::int64_t>() << "," << (r["shalika"].get<bool>() ? 1 : 0) << ",";
    if (r["shalika"].get<bool>()) {
      os << ",,,,," << csv_field(r["local"]["L_str"]) << "," << csv_field(r["local"]["eps_str"]) << ","
         << csv_field(r["local"]["gamma_str"]);
    } else {
      const json& ratio = r["routes"]["ratio"];
      os << r["gamma"][0].get<double>() << "," << r["gamma"][1].get<double>() << "," << r["abs_gamma"].get<double>()
         << "," << r["max_route_delta"].get<double>() << ",";
      if (ratio.contains("fe_residual")) os << ratio["fe_residual"].get<double>();
      os << ",,,";
    }
    os << "\n";
  }
  return os.str();
}

void emit(const Config& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + c.out + " for writing");
  f << text;
  if (!f) throw std::runtime_error("write failed for " + c.out);
}

json gamma_doc(const Config& c, const GroupCtx& G, bool& disagree) {
  const auto ks = resolve_thetas(c, G);
  std::vector<Row> rows(ks.size());
  std::vector<std::string> errors(ks.size());
  const auto count = static_cast<std::int64_t>(ks.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      rows[i] = gamma_row(c, G, ks[i]);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  for (const auto& e : errors)
    if (!e.empty()) throw std::runtime_error(e);
  json doc = {{"schema", kSchema}, {"command", "gamma"}, {"config", config_json(c)}, {"rows", json::array()}};
  disagree = false;
  for (const Row& r : rows) {
    doc["rows"].push_back(r.j);
    disagree = disagree || r.disagree;
  }
  return doc;
}

int cmd_gamma(const Config& c) {
  GroupCtx G(c.p, c.e, c.n);
  bool disagree = false;
  const json doc = gamma_doc(c, G, disagree);
  emit(c, c.format == "json" ? doc.dump(2) + "\n" : gamma_csv(doc));
  if (disagree) {
    std::cerr << "route disagreement beyond tolerance " << c.tol << "\n";
    return kExitDisagree;
  }
  return 0;
}

struct Check {
  std::string suite, name;
  bool ok;
  double residual;
};

std::vector<Check> run_verify(const Config& c) {
  GroupCtx G(c.p, c.e, c.n);
  const auto ks = resolve_thetas(c, G);
  const unsigned n = c.n, m = n / 2;
  std::vector<Check> out;
  const FeOptions opt = fe_options(c);
  const ClassHistogram hist =
      gl_order(G.q(), n) <= 2000000 ? class_histogram_parallel(G) : class_histogram_weighted(G);
  std::mt19937_64 rng(c.seed);
  for (std::int64_t k : ks) {
    const std::string tag = "k=" + std::to_string(k);
    CuspidalRep rep(G, k);
    const IrreducibilityReport ir = verify_irreducible(rep, hist, c.seed);
    out.push_back({"character", tag + " <chi,chi>=1 and degree", ir.ok(), std::abs(ir.inner_product - 1.0)});

    const BesselTable table = bessel_build(rep, c.psi_inverse);
    double eq = 0.0, direct = 0.0;
    for (unsigned i = 0; i < 100; ++i) {
      const MatF g = random_gl(G.fq(), n, rng);
      const MatF u = random_upper_unipotent(G.fq(), n, rng), v = random_upper_unipotent(G.fq(), n, rng);
      const cplx lhs = table.eval(mat_mul(G.fq(), mat_mul(G.fq(), u, g), v));
      const cplx rhs = table.psi()(G.fq().add(superdiag_sum(G.fq(), u), superdiag_sum(G.fq(), v))) * table.eval(g);
      eq = std::max(eq, std::abs(lhs - rhs));
      if (i < 10) direct = std::max(direct, std::abs(table.eval(g) - bessel_direct(rep, c.psi_inverse, g)));
    }
    out.push_back({"bessel", tag + " bi-equivariance", eq < 1e-8, eq});
    out.push_back({"bessel", tag + " table equals direct sum", direct < 1e-8, direct});

    const bool shalika = n % 2 == 0 && admits_shalika_vector(rep);
    if (!shalika) {
      try {
        const GammaResult r = gamma_ratio(table, opt);
        out.push_back({"functional_equation", tag + " constancy", true, r.residual});
        const double d = std::abs(r.value - gamma_torus(table).value);
        out.push_back({"functional_equation", tag + " ratio = torus", d < c.tol, d});
        out.push_back({"functional_equation", tag + " |gamma| = 1", std::abs(std::abs(r.value) - 1.0) < 1e-8,
                       std::abs(std::abs(r.value) - 1.0)});
      } catch (const Error& e) {
        out.push_back({"functional_equation", tag + " constancy: " + e.what(), false, 1.0});
      }
    }
    if (n % 2 == 0) {
      const ShalikaReport sr = shalika_detect(table, opt);
      out.push_back({"shalika", tag + " criterion matches search", sr.consistent(), sr.max_js_translates});
      if (sr.criterion) out.push_back({"shalika", tag + " broken equation", sr.broken_dual < 1e-8, sr.broken_dual});
      const LevelZeroCtx ctx{&table, cplx(c.c_re, c.c_im)};
      const LocalFactors f = local_factors(ctx);
      const double r1 = f.gamma.residual(f.eps * f.L_dual / f.L);
      out.push_back({"ratqs", tag + " gamma = eps L~ / L", r1 < 1e-9, r1});
      const double r2 = l_from_lifts(ctx, 10, c.seed).residual(f.L);
      out.push_back({"ratqs", tag + " L from lifted denominators", r2 < 1e-9, r2});
      out.push_back({"ratqs", tag + " pole iff Shalika", f.L.has_pole_off_zero() == sr.criterion, 0.0});
      try {
        const ModifiedFe mf = modified_fe_check(table, opt);
        out.push_back({"ratqs", tag + " modified functional equation", true, mf.residual});
      } catch (const Error& e) {
        out.push_back({"ratqs", tag + " modified functional equation: " + e.what(), false, 1.0});
      }
    }
    const std::uint64_t gm = gl_order(G.q(), m);
    const std::uint64_t hsize = gm * gm * (n % 2 ? static_cast<std::uint64_t>(std::pow(G.q(), m)) : 1);
    if (hsize <= 5000000) {
      try {
        const HomDim h = homdim_check(rep);
        out.push_back({"homdim", tag + " dim in {0,1}", true, std::abs(h.value - std::round(h.value))});
      } catch (const Error& e) {
        out.push_back({"homdim", tag + " " + e.what(), false, 1.0});
      }
    }
  }
  return out;
}

int cmd_verify(const Config& c) {
  const auto checks = run_verify(c);
  bool all = true;
  std::ostringstream os;
  if (c.format == "json") {
    json doc = {{"schema", kSchema}, {"command", "verify"}, {"config", config_json(c)}, {"checks", json::array()}};
    for (const Check& k : checks) {
      doc["checks"].push_back({{"suite", k.suite}, {"name", k.name}, {"ok", k.ok}, {"residual", k.residual}});
      all = all && k.ok;
    }
    doc["ok"] = all;
    os << doc.dump(2) << "\n";
  } else {
    os << "# schema " << kSchema << "\nsuite,name,ok,residual\n";
    for (const Check& k : checks) {
      os << k.suite << "," << csv_field(k.name) << "," << (k.ok ? "PASS" : "FAIL") << "," << k.residual << "\n";
      all = all && k.ok;
    }
  }
  emit(c, os.str());
  return all ? 0 : 1;
}

int cmd_export(const Config& c) {
  if (c.out.empty()) throw Precondition("export needs --out DIR");
  namespace fs = std::filesystem;
  const fs::path dir(c.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
  GroupCtx G(c.p, c.e, c.n);
  const std::string stem = "p" + std::to_string(c.p) + "_e" + std::to_string(c.e) + "_n" + std::to_string(c.n);
  for (std::int64_t k : resolve_thetas(c, G)) {
    CuspidalRep rep(G, k);
    const fs::path path = dir / ("bessel_" + stem + "_k" + std::to_string(k) + ".csv");
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path.string());
    f << "# schema " << kSchema << " p=" << c.p << " e=" << c.e << " n=" << c.n << " k=" << k
      << " psi_inverse=" << (c.psi_inverse ? 1 : 0) << "\n";
    bessel_build(rep, c.psi_inverse).write_csv(f);
    if (!f) throw std::runtime_error("write failed for " + path.string());
    std::cout << path.string() << "\n";
  }
  bool disagree = false;
  const json doc = gamma_doc(c, G, disagree);
  const fs::path gpath = dir / ("gamma_" + stem + (c.format == "json" ? ".json" : ".csv"));
  std::ofstream g(gpath, std::ios::binary);
  if (!g) throw std::runtime_error("cannot open " + gpath.string());
  g << (c.format == "json" ? doc.dump(2) + "\n" : gamma_csv(doc));
  if (!g) throw std::runtime_error("write failed for " + gpath.string());
  std::cout << gpath.string() << "\n";
  return disagree ? kExitDisagree : 0;
}

void add_common(CLI::App* sub, Config& c) {
  sub->add_option("--p", c.p, "characteristic");
  sub->add_option("--e", c.e, "q = p^e");
  sub->add_option("--q", c.q, "field size, alternative to --p/--e");
  sub->add_option("--n", c.n, "rank n of GL_n");
  sub->add_option("--theta", c.theta, "exponent k of theta, or all-regular (Galois orbit representatives)");
  sub->add_flag("--psi-inverse", c.psi_inverse, "use psi^{-1}");
  sub->add_option("--c-re", c.c_re, "real part of omega(varpi) for level-zero factors");
  sub->add_option("--c-im", c.c_im, "imaginary part of omega(varpi)");
  sub->add_option("--seed", c.seed, "sampling seed");
  sub->add_option("--trials", c.trials, "sampled pairs when not exhaustive");
  sub->add_option("--tol", c.tol, "route agreement tolerance");
  sub->add_option("--format", c.format, "json or csv");
  sub->add_option("--out", c.out, "output file (gamma, verify) or directory (export)");
  sub->add_flag("--exhaustive", c.exhaustive, "check all translates regardless of size");
  sub->add_option("--closed-variant", c.closed_variant, "GL4 closed form: rederived or printed");
  sub->add_flag("--timing", c.timing, "add per-row seconds (breaks byte determinism)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exterior-square gamma factors of cuspidal representations of GL_n(F_q)"};
  app.require_subcommand(1);
  Config c;
  auto* g = app.add_subcommand("gamma", "gamma factors by every applicable route");
  auto* v = app.add_subcommand("verify", "run invariant suites");
  auto* x = app.add_subcommand("export", "write Bessel tables and a gamma sweep");
  for (auto* s : {g, v, x}) add_common(s, c);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitPrecondition;
  }
  try {
    resolve_field(c);
    if (g->parsed()) return cmd_gamma(c);
    if (v->parsed()) return cmd_verify(c);
    return cmd_export(c);
  } catch (const Precondition& e) {
    std::cerr << "precondition: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const Error& e) {
    const bool pre = e.code() == Errc::NotPrime || e.code() == Errc::TooLarge || e.code() == Errc::NotRegular ||
                     e.code() == Errc::UnsupportedN || e.code() == Errc::PreconditionViolated;
    std::cerr << (pre ? "precondition: " : "error: ") << e.what() << "\n";
    return pre ? kExitPrecondition : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
