#include "gammalab/levelzero.hpp"

#include "gammalab/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace gammalab {

using Poly = RatQS::Poly;

namespace {

double max_abs(const Poly& p) {
  double m = 0;
  for (const cplx& c : p) m = std::max(m, std::abs(c));
  return m;
}

// Drop high-order coefficients below tol relative to the largest one.
Poly trim(Poly p, double tol) {
  const double cut = tol * max_abs(p);
  while (p.size() > 1 && std::abs(p.back()) <= cut) p.pop_back();
  if (p.empty()) p.push_back(0.0);
  return p;
}

bool is_zero_poly(const Poly& p, double scale, double tol) { return max_abs(p) <= tol * scale; }

std::pair<Poly, Poly> divmod(Poly a, const Poly& b) {
  const std::size_t db = b.size() - 1;
  if (a.size() < b.size()) return {Poly{0.0}, a};
  Poly quo(a.size() - db, 0.0);
  for (std::size_t i = a.size(); i-- > db;) {
    const cplx f = a[i] / b[db];
    quo[i - db] = f;
    for (std::size_t j = 0; j <= db; ++j) a[i - db + j] -= f * b[j];
  }
  a.resize(std::max<std::size_t>(db, 1));
  return {quo, a};
}

Poly scale_poly(Poly p, cplx s) {
  for (cplx& c : p) c *= s;
  return p;
}

Poly shift_up(const Poly& p, int k) {
  Poly r(static_cast<std::size_t>(k), 0.0);
  r.insert(r.end(), p.begin(), p.end());
  return r;
}

Poly poly_sub(const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  return r;
}

Poly poly_add(const Poly& a, const Poly& b) { return poly_sub(a, scale_poly(b, -1.0)); }

constexpr double kCoefTol = 1e-12;

}  // namespace

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly r(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

Poly poly_gcd(const Poly& a0, const Poly& b0, double tol) {
  Poly a = trim(a0, kCoefTol), b = trim(b0, kCoefTol);
  const double scale = std::max(max_abs(a), max_abs(b));
  if (is_zero_poly(a, scale, tol)) return scale_poly(b, 1.0 / b.back());
  while (!is_zero_poly(b, scale, tol)) {
    b = scale_poly(b, 1.0 / b.back());
    Poly r = divmod(a, b).second;
    // Relative cut against the divisor keeps near-zero remainders from
    // surviving as spurious factors.
    if (max_abs(r) <= tol * std::max(1.0, max_abs(a))) r = Poly{0.0};
    a = b;
    b = trim(r, kCoefTol);
  }
  return scale_poly(a, 1.0 / a.back());
}

Poly poly_lcm(const Poly& a, const Poly& b, double tol) {
  const Poly g = poly_gcd(a, b, tol);
  Poly l = divmod(poly_mul(a, b), g).first;
  return scale_poly(l, 1.0 / l[0]);
}

bool poly_divides(const Poly& b, const Poly& a, double tol) {
  const Poly bt = trim(b, kCoefTol);
  const Poly r = divmod(a, bt).second;
  return max_abs(r) <= tol * std::max(1.0, max_abs(a));
}

RatQS::RatQS(Poly num, Poly den, int shift) : num_(std::move(num)), den_(std::move(den)), shift_(shift) {
  if (num_.empty()) num_.push_back(0.0);
  if (den_.empty() || max_abs(den_) == 0.0) throw Error(Errc::DivideByZero, "zero denominator");
  reduce();
}

RatQS RatQS::monomial(cplx c, int power) { return RatQS(Poly{c}, Poly{1.0}, power); }

Poly RatQS::one_minus(cplx c, unsigned m) {
  Poly p(m + 1, 0.0);
  p[0] = 1.0;
  p[m] -= c;
  return p;
}

void RatQS::reduce() {
  num_ = trim(num_, kCoefTol);
  den_ = trim(den_, kCoefTol);
  if (max_abs(num_) == 0.0) {
    num_ = {0.0};
    den_ = {1.0};
    shift_ = 0;
    return;
  }
  auto strip_low = [](Poly& p) {
    const double cut = kCoefTol * max_abs(p);
    std::size_t k = 0;
    while (k + 1 < p.size() && std::abs(p[k]) <= cut) ++k;
    p.erase(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(k));
    return static_cast<int>(k);
  };
  shift_ += strip_low(num_);
  shift_ -= strip_low(den_);
  if (num_.size() > 1 && den_.size() > 1) {
    const Poly g = poly_gcd(num_, den_);
    if (g.size() > 1) {
      num_ = trim(divmod(num_, g).first, kCoefTol);
      den_ = trim(divmod(den_, g).first, kCoefTol);
    }
  }
  const cplx d0 = den_[0];
  num_ = scale_poly(num_, 1.0 / d0);
  den_ = scale_poly(den_, 1.0 / d0);
}

cplx RatQS::operator()(cplx X) const {
  auto ev = [X](const Poly& p) {
    cplx s = 0;
    for (std::size_t i = p.size(); i-- > 0;) s = s * X + p[i];
    return s;
  };
  return std::pow(X, shift_) * ev(num_) / ev(den_);
}

RatQS RatQS::operator+(const RatQS& o) const {
  const int k = std::min(shift_, o.shift_);
  const Poly a = shift_up(poly_mul(num_, o.den_), shift_ - k);
  const Poly b = shift_up(poly_mul(o.num_, den_), o.shift_ - k);
  return RatQS(poly_add(a, b), poly_mul(den_, o.den_), k);
}

RatQS RatQS::operator-(const RatQS& o) const { return *this + o * RatQS(-1.0); }

RatQS RatQS::operator*(const RatQS& o) const {
  return RatQS(poly_mul(num_, o.num_), poly_mul(den_, o.den_), shift_ + o.shift_);
}

RatQS RatQS::inverse() const {
  if (is_zero()) throw Error(Errc::DivideByZero, "inverse of zero rational function");
  return RatQS(den_, num_, -shift_);
}

RatQS RatQS::operator/(const RatQS& o) const { return *this * o.inverse(); }

RatQS RatQS::reflect(double q) const {
  auto rev = [q](const Poly& p) {
    Poly r(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) r[p.size() - 1 - i] = p[i] * std::pow(q, -static_cast<double>(i));
    return r;
  };
  const int dn = static_cast<int>(num_.size()) - 1, dd = static_cast<int>(den_.size()) - 1;
  return RatQS(scale_poly(rev(num_), std::pow(q, -static_cast<double>(shift_))), rev(den_), -shift_ - dn + dd);
}

double RatQS::residual(const RatQS& o) const {
  const int k = std::min(shift_, o.shift_);
  const Poly a = shift_up(poly_mul(num_, o.den_), shift_ - k);
  const Poly b = shift_up(poly_mul(o.num_, den_), o.shift_ - k);
  const double scale = std::max({1.0, max_abs(a), max_abs(b)});
  return max_abs(poly_sub(a, b)) / scale;
}

nlohmann::json RatQS::to_json() const {
  auto arr = [](const Poly& p) {
    nlohmann::json a = nlohmann::json::array();
    for (const cplx& c : p) a.push_back({c.real(), c.imag()});
    return a;
  };
  return {{"num", arr(num_)}, {"den", arr(den_)}, {"x_shift", shift_}};
}

RatQS RatQS::from_json(const nlohmann::json& j) {
  auto poly = [](const nlohmann::json& a) {
    Poly p;
    for (const auto& c : a) p.emplace_back(c.at(0).get<double>(), c.at(1).get<double>());
    return p;
  };
  return RatQS(poly(j.at("num")), poly(j.at("den")), j.at("x_shift").get<int>());
}

std::string RatQS::str() const {
  std::ostringstream os;
  os.precision(6);
  auto term = [&os](const Poly& p) {
    os << "(";
    bool first = true;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (std::abs(p[i]) == 0.0) continue;
      if (!first) os << " + ";
      first = false;
      // Display only: parts below 1e-12 of the modulus print as 0.
      const double cut = 1e-12 * std::abs(p[i]);
      const double re = std::abs(p[i].real()) < cut ? 0.0 : p[i].real();
      const double im = std::abs(p[i].imag()) < cut ? 0.0 : p[i].imag();
      os << "(" << re << (im < 0 ? "-" : "+") << std::abs(im) << "i)";
      if (i) os << "X^" << i;
    }
    if (first) os << "0";
    os << ")";
  };
  if (shift_) os << "X^" << shift_ << " * ";
  term(num_);
  if (den_.size() > 1) {
    os << " / ";
    term(den_);
  }
  return os.str();
}

RatQS l_factor(cplx c, unsigned m) {
  if (m == 0) throw Error(Errc::PreconditionViolated, "L factor needs m >= 1");
  return RatQS(Poly{1.0}, RatQS::one_minus(c, m));
}

Poly root_product(cplx c, unsigned m) {
  Poly p{1.0};
  const double r = std::pow(std::abs(c), 1.0 / m);
  const double a = std::arg(c);
  for (unsigned j = 0; j < m; ++j) {
    const cplx alpha = std::polar(r, (a + 2.0 * std::numbers::pi * j) / m);
    p = poly_mul(p, Poly{1.0, -alpha});
  }
  return p;
}

namespace {

bool omega_unramified(const LevelZeroCtx& ctx) { return ctx.table->rep().central_char().is_trivial(); }

// Finite sums that vanish exactly come out at ~1e-17; snap them so they do
// not leave spurious poles in reduced rational functions.
cplx snap(cplx z) { return std::abs(z) < 1e-12 ? cplx(0.0) : z; }

CFun ones(const LevelZeroCtx& ctx) { return CFun::constant(ctx.table->rep().group().q(), ctx.m(), 1.0); }

}  // namespace

cplx shalika_functional_value(const LevelZeroCtx& ctx, const WhittakerFun& W0) {
  if (ctx.n() % 2) throw Error(Errc::PreconditionViolated, "Shalika functional needs even n");
  return js(W0, ones(ctx));
}

RatQS lifted_js(const LevelZeroCtx& ctx, const WhittakerFun& W0, const CFun& phi0) {
  const RatQS base(snap(js(W0, phi0)));
  if (ctx.n() % 2) return base;
  const unsigned m = ctx.m();
  const RatQS L = omega_unramified(ctx) ? l_factor(ctx.c, m) : RatQS(1.0);
  const cplx j1 = snap(js(W0, ones(ctx)));
  return base + RatQS::monomial(ctx.c * phi0.v[0] * j1, static_cast<int>(m)) * L;
}

RatQS lifted_dual_js(const LevelZeroCtx& ctx, const WhittakerFun& W0, const CFun& phi0) {
  const RatQS base(snap(dual_js(W0, phi0)));
  if (ctx.n() % 2) return base;
  const unsigned m = ctx.m();
  const double q = ctx.q();
  const RatQS Ld = omega_unramified(ctx) ? l_factor(1.0 / ctx.c, m).reflect(q) : RatQS(1.0);
  const cplx j1 = snap(js(W0, ones(ctx)));
  const cplx hat0 = fourier(phi0, W0.psi()).v[0];
  return base + RatQS::monomial(std::pow(q, -static_cast<double>(m)) / ctx.c * hat0 * j1, -static_cast<int>(m)) * Ld;
}

namespace {

// Shalika witness scaled to js(W, 1) = 1.
WhittakerFun normalized_witness(const LevelZeroCtx& ctx) {
  const WhittakerFun W = shalika_witness(*ctx.table);
  return W.scaled(1.0 / shalika_functional_value(ctx, W));
}

bool has_shalika(const LevelZeroCtx& ctx) { return ctx.n() % 2 == 0 && admits_shalika_vector(ctx.table->rep()); }

}  // namespace

RatQS local_gamma(const LevelZeroCtx& ctx) {
  if (has_shalika(ctx)) {
    const WhittakerFun W = normalized_witness(ctx);
    return lifted_dual_js(ctx, W, ones(ctx)) / lifted_js(ctx, W, ones(ctx));
  }
  const WhittakerFun W0 = canonical_whittaker(*ctx.table);
  const CFun phi0 = canonical_phi(ctx.table->rep().group().fq(), ctx.n());
  return lifted_dual_js(ctx, W0, phi0) / lifted_js(ctx, W0, phi0);
}

LocalFactors local_factors(const LevelZeroCtx& ctx) {
  LocalFactors f;
  f.shalika = has_shalika(ctx);
  f.gamma = local_gamma(ctx);
  f.L = f.shalika ? l_factor(ctx.c, ctx.m()) : RatQS(1.0);
  f.L_dual = f.shalika ? l_factor(1.0 / ctx.c, ctx.m()).reflect(ctx.q()) : RatQS(1.0);
  f.eps = f.gamma * f.L / f.L_dual;
  return f;
}

RatQS l_from_lifts(const LevelZeroCtx& ctx, unsigned trials, std::uint64_t seed) {
  const GroupCtx& G = ctx.table->rep().group();
  std::vector<std::pair<WhittakerFun, CFun>> pairs;
  pairs.emplace_back(canonical_whittaker(*ctx.table), canonical_phi(G.fq(), ctx.n()));
  if (has_shalika(ctx)) pairs.emplace_back(normalized_witness(ctx), ones(ctx));
  std::mt19937_64 rng(seed);
  for (unsigned i = 0; i < trials; ++i) {
    const WhittakerFun W = WhittakerFun::translate(*ctx.table, random_gl(G.fq(), ctx.n(), rng));
    pairs.emplace_back(W, ones(ctx));
    pairs.emplace_back(W, CFun::delta(G.q(), ctx.m(), std::vector<Fq::E>(ctx.m(), 0)));
  }
  Poly l{1.0};
  for (const auto& [W, phi] : pairs) {
    const RatQS v = lifted_js(ctx, W, phi);
    if (!v.is_zero()) l = poly_lcm(l, v.den());
  }
  return RatQS(Poly{1.0}, l);
}

RatQS shalika_l_product(const LevelZeroCtx& ctx) {
  if (ctx.n() % 2) return RatQS(1.0);
  const cplx v = shalika_functional_value(ctx, shalika_witness(*ctx.table));
  if (std::abs(v) < 1e-8) return RatQS(1.0);
  return RatQS(Poly{1.0}, root_product(ctx.c, ctx.m()));
}

namespace {

struct FeSides {
  RatQS lhs, rhs;
};

FeSides modified_sides(double q, unsigned m, cplx j, cplx d, cplx j1, cplx phi0, cplx hat0) {
  const double qm = std::pow(q, -static_cast<double>(m));
  const int mi = static_cast<int>(m);
  const RatQS tail = RatQS::monomial(qm, -mi);
  const RatQS lhs = RatQS(d) + tail * RatQS(hat0 * j1) / (RatQS(1.0) - tail);
  const RatQS xm = RatQS::monomial(1.0, mi);
  const RatQS rhs = RatQS(j) + xm * RatQS(phi0 * j1) / (RatQS(1.0) - xm);
  return {lhs, rhs};
}

}  // namespace

ModifiedFe modified_fe_check(const BesselTable& table, const FeOptions& opt) {
  const GroupCtx& G = table.rep().group();
  const unsigned n = G.n(), m = n / 2;
  if (n % 2) throw Error(Errc::PreconditionViolated, "modified functional equation needs even n");
  const JsFrame fr(G.fq(), n);
  const double q = G.q();
  const std::size_t N = fr.phi_size();
  const double norm = std::pow(q, -0.5 * m);

  const WhittakerFun W0 = canonical_whittaker(table);
  const CFun phi0 = canonical_phi(G.fq(), n);
  const CFun one = CFun::constant(G.q(), m, 1.0);
  const FeSides s0 = modified_sides(q, m, js(fr, W0, phi0), dual_js(fr, W0, phi0), js(fr, W0, one), phi0.v[0],
                                    fourier(phi0, table.psi()).v[0]);
  ModifiedFe out;
  out.gamma = s0.lhs / s0.rhs;

  // psi(<v, y>) for the deltas
  std::vector<cplx> pair_tab(N * N);
  for (std::size_t v = 0; v < N; ++v)
    for (std::size_t y = 0; y < N; ++y) {
      const auto a = vec_from_index(G.q(), m, v), b = vec_from_index(G.q(), m, y);
      Fq::E dot = 0;
      for (unsigned i = 0; i < m; ++i) dot = G.fq().add(dot, G.fq().mul(a[i], b[i]));
      pair_tab[v * N + y] = table.psi()(dot);
    }

  const FePlan plan = fe_plan(G, opt);
  std::vector<double> res(plan.hs.size());
  const auto count = static_cast<std::int64_t>(plan.hs.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t i = 0; i < count; ++i) {
    const WhittakerFun W = WhittakerFun::translate(table, plan.hs[i]);
    const auto J = fr.js_buckets(W);
    const auto D = fr.dual_buckets(W);
    cplx j1 = 0;
    for (const cplx& x : J) j1 += x;
    double worst = 0;
    for (std::size_t v = 0; v < N; ++v) {
      cplx d = 0;
      for (std::size_t y = 0; y < N; ++y) d += D[y] * pair_tab[v * N + y];
      const FeSides s = modified_sides(q, m, J[v], norm * d, j1, v == 0 ? 1.0 : 0.0, norm);
      worst = std::max(worst, s.lhs.residual(out.gamma * s.rhs));
    }
    res[i] = worst;
  }
  for (double r : res) out.residual = std::max(out.residual, r);
  out.pairs = plan.hs.size() * N;
  out.exhaustive = plan.exhaustive;
  if (out.residual > opt.tol)
    throw Error(Errc::NonConstantRatio, "modified functional equation residual " + std::to_string(out.residual));
  return out;
}

}  // namespace gammalab
