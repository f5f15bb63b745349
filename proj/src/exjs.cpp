#include "gammalab/exjs.hpp"

#include "gammalab/error.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace gammalab {

namespace {

std::uint64_t ipow(std::uint64_t b, unsigned e) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < e; ++i) r *= b;
  return r;
}

unsigned choose2(unsigned k) { return k * (k - 1) / 2; }

Fq::E trace(const Fq& F, const MatF& x) {
  Fq::E t = 0;
  for (unsigned i = 0; i < x.n; ++i) t = F.add(t, x(i, i));
  return t;
}

std::vector<Fq::E> row_of(const MatF& g, unsigned i) {
  std::vector<Fq::E> r(g.n);
  for (unsigned j = 0; j < g.n; ++j) r[j] = g(i, j);
  return r;
}

std::vector<Fq::E> col_of(const MatF& g, unsigned j) {
  std::vector<Fq::E> c(g.n);
  for (unsigned i = 0; i < g.n; ++i) c[i] = g(i, j);
  return c;
}

// (F_q^m) x (F_q^m) -> psi(<v, y>)
std::vector<cplx> pairing_table(const Fq& F, const AddChar& psi, unsigned m) {
  const std::size_t N = ipow(F.q(), m);
  std::vector<std::vector<Fq::E>> vecs(N);
  for (std::size_t i = 0; i < N; ++i) vecs[i] = vec_from_index(F.q(), m, i);
  std::vector<cplx> t(N * N);
  for (std::size_t v = 0; v < N; ++v)
    for (std::size_t y = 0; y < N; ++y) {
      Fq::E d = 0;
      for (unsigned i = 0; i < m; ++i) d = F.add(d, F.mul(vecs[v][i], vecs[y][i]));
      t[v * N + y] = psi(d);
    }
  return t;
}

void require_no_shalika(const CuspidalRep& rep) {
  if (rep.n() % 2 == 0 && admits_shalika_vector(rep))
    throw Error(Errc::ShalikaVectorPresent,
                "theta is trivial on F_{q^m}^x; use the modified functional equation");
}

std::vector<MatF> mirabolic_coset_reps(const Fq& F, unsigned m) {
  std::vector<MatF> out;
  for (const MatF& g : coset_reps(F, m, CosetKind::NmodG)) {
    bool ok = true;
    for (unsigned j = 0; j < m; ++j) ok = ok && g(m - 1, j) == (j + 1 == m ? 1 : 0);
    if (ok) out.push_back(g);
  }
  return out;
}

}  // namespace

WhittakerFun::WhittakerFun(const BesselTable& table) : table_(&table) {
  terms_.push_back({1.0, MatF::identity(table.rep().n()), MatF::identity(table.rep().n())});
}

WhittakerFun WhittakerFun::translate(const BesselTable& table, const MatF& h, cplx scale) {
  WhittakerFun w(&table, false);
  w.terms_.push_back({scale, MatF::identity(h.n), h});
  return w;
}

const AddChar& WhittakerFun::psi() const { return table_->rep().group().psi(table_->psi_inverse() != flipped_); }

cplx WhittakerFun::operator()(const MatF& g) const {
  const Fq& F = table_->rep().group().fq();
  cplx s = 0;
  for (const Term& t : terms_) {
    if (!flipped_) {
      s += t.scale * table_->eval(mat_mul(F, g, t.Q));
    } else {
      const MatF x = mat_transpose(mat_inverse(F, mat_mul(F, g, t.P)));
      s += t.scale * table_->eval(mat_mul(F, mat_mul(F, long_weyl(g.n), x), t.Q));
    }
  }
  return s;
}

WhittakerFun WhittakerFun::right_translate(const MatF& s) const {
  const Fq& F = table_->rep().group().fq();
  WhittakerFun w = *this;
  for (Term& t : w.terms_) {
    if (flipped_)
      t.P = mat_mul(F, s, t.P);
    else
      t.Q = mat_mul(F, s, t.Q);
  }
  return w;
}

WhittakerFun WhittakerFun::flip() const {
  const Fq& F = table_->rep().group().fq();
  const MatF J = block_swap(n());
  WhittakerFun w(table_, !flipped_);
  for (const Term& t : terms_) {
    if (!flipped_)
      w.terms_.push_back({t.scale, MatF::identity(n()), mat_mul(F, J, t.Q)});
    else
      w.terms_.push_back(
          {t.scale, MatF::identity(n()), mat_mul(F, mat_mul(F, J, mat_transpose(mat_inverse(F, t.P))), t.Q)});
  }
  return w;
}

WhittakerFun WhittakerFun::scaled(cplx c) const {
  WhittakerFun w = *this;
  for (Term& t : w.terms_) t.scale *= c;
  return w;
}

WhittakerFun& WhittakerFun::operator+=(const WhittakerFun& o) {
  if (o.table_ != table_ || o.flipped_ != flipped_)
    throw Error(Errc::PreconditionViolated, "Whittaker functions from different models");
  terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
  return *this;
}

MatF shalika_u(const Fq& F, unsigned n, const MatF& X) {
  (void)F;
  const unsigned m = n / 2;
  if (X.n != m) throw Error(Errc::DimensionMismatch, "X must be m x m");
  MatF u = MatF::identity(n);
  mat_place(u, X, 0, m);
  return u;
}

MatF shalika_d(unsigned n, const MatF& g) {
  const unsigned m = n / 2;
  if (g.n != m) throw Error(Errc::DimensionMismatch, "g must be m x m");
  MatF d = MatF::identity(n);
  mat_place(d, g, 0, 0);
  mat_place(d, g, m, m);
  return d;
}

MatF shalika_lower(const Fq& F, unsigned n, const std::vector<Fq::E>& z) {
  (void)F;
  const unsigned m = n / 2;
  if (n % 2 == 0 || z.size() != m) throw Error(Errc::DimensionMismatch, "Z must be 1 x m, n odd");
  MatF r = MatF::identity(n);
  for (unsigned j = 0; j < m; ++j) r(2 * m, m + j) = z[j];
  return r;
}

MatF shalika_upper(const Fq& F, unsigned n, const std::vector<Fq::E>& y) {
  (void)F;
  const unsigned m = n / 2;
  if (n % 2 == 0 || y.size() != m) throw Error(Errc::DimensionMismatch, "Y must be m x 1, n odd");
  MatF r = MatF::identity(n);
  for (unsigned i = 0; i < m; ++i) r(i, 2 * m) = y[i];
  return r;
}

MatF block_swap(unsigned n) {
  const unsigned m = n / 2;
  MatF J = MatF::zero(n);
  for (unsigned i = 0; i < m; ++i) {
    J(i, m + i) = 1;
    J(m + i, i) = 1;
  }
  if (n % 2) J(2 * m, 2 * m) = 1;
  return J;
}

JsFrame::JsFrame(const Fq& F, unsigned n) : F_(&F), n_(n) {
  if (n < 2 || n > kMaxN) throw Error(Errc::UnsupportedN, "JS sums need 2 <= n <= 6");
  const unsigned m = n / 2;
  const bool odd = n % 2;
  phi_size_ = ipow(F.q(), m);
  const auto greps = coset_reps(F, m, CosetKind::NmodG);
  const auto xreps = coset_reps(F, m, CosetKind::BmodM);
  norm_ = static_cast<double>(greps.size()) * static_cast<double>(xreps.size()) *
          (odd ? static_cast<double>(phi_size_) : 1.0);
  const MatF sigma = sigma_perm(n);
  MatF front = MatF::zero(n);
  if (odd) {
    front(0, n - 1) = 1;
    for (unsigned i = 0; i + 1 < n; ++i) front(i + 1, i) = 1;
  }
  for (const MatF& g : greps) {
    const MatF gi = mat_inverse(F, g);
    for (const MatF& X : xreps) {
      const MatF head = mat_mul(F, mat_mul(F, sigma, shalika_u(F, n, X)), shalika_d(n, g));
      const Fq::E ntr = F.neg(trace(F, X));
      if (!odd) {
        terms_.push_back({head, head, ntr, vec_index(F.q(), row_of(g, m - 1)), vec_index(F.q(), col_of(gi, 0))});
        continue;
      }
      for (std::size_t zi = 0; zi < phi_size_; ++zi) {
        const auto z = vec_from_index(F.q(), m, zi);
        std::vector<Fq::E> negz(m);
        for (unsigned j = 0; j < m; ++j) negz[j] = F.neg(z[j]);
        terms_.push_back({mat_mul(F, head, shalika_lower(F, n, z)),
                          mat_mul(F, mat_mul(F, front, head), shalika_upper(F, n, negz)), ntr, zi, zi});
      }
    }
  }
}

std::vector<cplx> JsFrame::js_buckets(const WhittakerFun& W) const {
  if (W.n() != n_) throw Error(Errc::DimensionMismatch, "Whittaker function has the wrong n");
  const AddChar& psi = W.psi();
  std::vector<cplx> b(phi_size_, 0.0);
  for (const Term& t : terms_) b[t.idx] += W(t.k) * psi(t.neg_tr);
  for (cplx& v : b) v /= norm_;
  return b;
}

std::vector<cplx> JsFrame::dual_buckets(const WhittakerFun& W) const {
  if (W.n() != n_) throw Error(Errc::DimensionMismatch, "Whittaker function has the wrong n");
  const AddChar& psi = W.psi();
  std::vector<cplx> b(phi_size_, 0.0);
  for (const Term& t : terms_) b[t.dual_idx] += W(t.k_dual) * psi(t.neg_tr);
  for (cplx& v : b) v /= norm_;
  return b;
}

namespace {
cplx dot(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  cplx s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void check_phi(const JsFrame& fr, const CFun& phi) {
  if (phi.m != fr.m() || phi.v.size() != fr.phi_size())
    throw Error(Errc::DimensionMismatch, "phi must live on F_q^m");
}
}  // namespace

cplx js(const JsFrame& fr, const WhittakerFun& W, const CFun& phi) {
  check_phi(fr, phi);
  return dot(fr.js_buckets(W), phi.v);
}

namespace {
// Odd n transforms against psi^{-1}; the psi kernel breaks equivariance under
// the Y and Z generators when p is odd.
AddChar dual_kernel(const JsFrame& fr, const WhittakerFun& W, DualConvention c) {
  return fr.n() % 2 && c == DualConvention::Equivariant ? W.psi().inverted() : W.psi();
}
}  // namespace

cplx dual_js(const JsFrame& fr, const WhittakerFun& W, const CFun& phi, DualConvention c) {
  check_phi(fr, phi);
  return dot(fr.dual_buckets(W), fourier(phi, dual_kernel(fr, W, c)).v);
}

cplx dual_js_definition(const JsFrame& fr, const WhittakerFun& W, const CFun& phi, DualConvention c) {
  check_phi(fr, phi);
  return js(fr, W.flip(), fourier(phi, dual_kernel(fr, W, c)));
}

cplx js(const WhittakerFun& W, const CFun& phi) {
  return js(JsFrame(W.table().rep().group().fq(), W.n()), W, phi);
}

cplx dual_js(const WhittakerFun& W, const CFun& phi) {
  return dual_js(JsFrame(W.table().rep().group().fq(), W.n()), W, phi);
}

MatF shalika_matrix(const Fq& F, unsigned n, const ShalikaElem& s) {
  const unsigned m = n / 2;
  if (s.g.n != m || s.X.n != m || !mat_invertible(F, s.g))
    throw Error(Errc::MalformedShalikaElement, "g must be invertible m x m and X m x m");
  if (n % 2 == 0 && (!s.Y.empty() || !s.Z.empty()))
    throw Error(Errc::MalformedShalikaElement, "Y and Z only exist for odd n");
  if (n % 2 == 1 && (s.Y.size() != m || s.Z.size() != m))
    throw Error(Errc::MalformedShalikaElement, "odd n needs Y and Z of length m");
  MatF r = shalika_d(n, s.g);
  mat_place(r, s.X, 0, m);
  if (n % 2) {
    for (unsigned i = 0; i < m; ++i) r(i, 2 * m) = s.Y[i];
    for (unsigned j = 0; j < m; ++j) r(2 * m, m + j) = s.Z[j];
  }
  return r;
}

CFun shalika_action(const Fq& F, const AddChar& psi, unsigned n, const ShalikaElem& s, const CFun& phi) {
  shalika_matrix(F, n, s);  // validates
  const unsigned m = n / 2;
  const unsigned q = F.q();
  if (phi.m != m) throw Error(Errc::DimensionMismatch, "phi must live on F_q^m");
  auto vec_times = [&](const std::vector<Fq::E>& v, const MatF& g) {
    std::vector<Fq::E> r(m, 0);
    for (unsigned j = 0; j < m; ++j)
      for (unsigned i = 0; i < m; ++i) r[j] = F.add(r[j], F.mul(v[i], g(i, j)));
    return r;
  };
  CFun out = CFun::zeros(q, m);
  if (n % 2 == 0) {
    for (std::size_t i = 0; i < out.v.size(); ++i)
      out.v[i] = phi.at(q, vec_times(vec_from_index(q, m, i), s.g));
    return out;
  }
  // s = UR(Y) U((X - Y Z) g^{-1}) D(g) L(Z), applied right to left.
  MatF YZ = MatF::zero(m);
  for (unsigned i = 0; i < m; ++i)
    for (unsigned j = 0; j < m; ++j) YZ(i, j) = F.mul(s.Y[i], s.Z[j]);
  MatF x = s.X;
  for (unsigned i = 0; i < m; ++i)
    for (unsigned j = 0; j < m; ++j) x(i, j) = F.sub(s.X(i, j), YZ(i, j));
  x = mat_mul(F, x, mat_inverse(F, s.g));
  const cplx scale = psi(F.neg(trace(F, x)));
  for (std::size_t i = 0; i < out.v.size(); ++i) {
    const auto v = vec_from_index(q, m, i);
    auto w = vec_times(v, s.g);
    for (unsigned j = 0; j < m; ++j) w[j] = F.add(w[j], s.Z[j]);
    Fq::E d = 0;
    for (unsigned j = 0; j < m; ++j) d = F.add(d, F.mul(v[j], s.Y[j]));
    out.v[i] = psi(d) * scale * phi.at(q, w);
  }
  return out;
}

cplx shalika_character(const Fq& F, const AddChar& psi, const ShalikaElem& s) {
  return psi(trace(F, mat_mul(F, s.X, mat_inverse(F, s.g))));
}

WhittakerFun canonical_whittaker(const BesselTable& table) {
  const GroupCtx& G = table.rep().group();
  const unsigned n = G.n(), m = n / 2;
  const double gn = static_cast<double>(gl_order(G.q(), m)) / static_cast<double>(ipow(G.q(), choose2(m)));
  double scale = gn * static_cast<double>(ipow(G.q(), choose2(m)));
  if (n % 2) scale *= static_cast<double>(ipow(G.q(), m));
  return WhittakerFun::translate(table, mat_inverse(G.fq(), sigma_perm(n)), scale);
}

CFun canonical_phi(const Fq& F, unsigned n) {
  const unsigned m = n / 2;
  std::vector<Fq::E> at(m, 0);
  if (n % 2 == 0) at[m - 1] = 1;
  return CFun::delta(F.q(), m, at);
}

const char* route_name(GammaRoute r) {
  switch (r) {
    case GammaRoute::Ratio: return "ratio";
    case GammaRoute::Torus: return "torus";
    case GammaRoute::ClosedForm: return "closed_form";
  }
  return "?";
}

bool admits_shalika_vector(const CuspidalRep& rep) {
  if (rep.n() % 2) return false;
  return restriction_is_trivial(rep.theta(), rep.n() / 2);
}

FePlan fe_plan(const GroupCtx& G, const FeOptions& opt) {
  const unsigned n = G.n();
  const std::uint64_t total = gl_order(G.q(), n) * ipow(G.q(), n / 2);
  FePlan plan;
  plan.exhaustive = opt.force_exhaustive || total <= opt.exhaustive_limit;
  if (plan.exhaustive) {
    plan.hs = enumerate_gl(G.fq(), n);
  } else {
    std::mt19937_64 rng(opt.seed);
    const std::uint64_t per_h = ipow(G.q(), n / 2);
    const std::uint64_t count = std::max<std::uint64_t>(1, (opt.trials + per_h - 1) / per_h);
    for (std::uint64_t i = 0; i < count; ++i) plan.hs.push_back(random_gl(G.fq(), n, rng));
  }
  return plan;
}

namespace {

double fe_residual_at(const JsFrame& fr, const BesselTable& table, const std::vector<cplx>& pair_tab, cplx gamma,
                      const MatF& h) {
  const WhittakerFun W = WhittakerFun::translate(table, h);
  const auto J = fr.js_buckets(W);
  const auto D = fr.dual_buckets(W);
  const std::size_t N = fr.phi_size();
  const double s = std::pow(static_cast<double>(fr.fq().q()), -0.5 * fr.m());
  double worst = 0.0;
  for (std::size_t v = 0; v < N; ++v) {
    cplx dual = 0;
    for (std::size_t y = 0; y < N; ++y) dual += D[y] * pair_tab[v * N + y];
    worst = std::max(worst, std::abs(s * dual - gamma * J[v]));
  }
  return worst;
}

FeCheck fe_check_impl(const BesselTable& table, cplx gamma, const FeOptions& opt, bool parallel) {
  const GroupCtx& G = table.rep().group();
  const JsFrame fr(G.fq(), G.n());
  const FePlan plan = fe_plan(G, opt);
  const AddChar kernel = G.n() % 2 && opt.dual == DualConvention::Equivariant ? table.psi().inverted() : table.psi();
  const auto pair_tab = pairing_table(G.fq(), kernel, G.n() / 2);
  std::vector<double> res(plan.hs.size());
  const auto count = static_cast<std::int64_t>(plan.hs.size());
  if (parallel) {
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t i = 0; i < count; ++i) res[i] = fe_residual_at(fr, table, pair_tab, gamma, plan.hs[i]);
  } else {
    for (std::int64_t i = 0; i < count; ++i) res[i] = fe_residual_at(fr, table, pair_tab, gamma, plan.hs[i]);
  }
  FeCheck out;
  for (double r : res) out.residual = std::max(out.residual, r);
  out.pairs = plan.hs.size() * fr.phi_size();
  out.exhaustive = plan.exhaustive;
  return out;
}

}  // namespace

FeCheck fe_check(const BesselTable& table, cplx gamma, const FeOptions& opt) {
  return fe_check_impl(table, gamma, opt, true);
}

FeCheck fe_check_serial(const BesselTable& table, cplx gamma, const FeOptions& opt) {
  return fe_check_impl(table, gamma, opt, false);
}

GammaResult gamma_ratio(const BesselTable& table, const FeOptions& opt) {
  require_no_shalika(table.rep());
  const GroupCtx& G = table.rep().group();
  const JsFrame fr(G.fq(), G.n());
  const WhittakerFun W0 = canonical_whittaker(table);
  const CFun phi0 = canonical_phi(G.fq(), G.n());
  const cplx j = js(fr, W0, phi0);
  if (std::abs(j - 1.0) > opt.tol) throw Error(Errc::OracleFailed, "canonical pair does not give js = 1");
  GammaResult r;
  r.route = GammaRoute::Ratio;
  r.value = dual_js(fr, W0, phi0);
  const FeCheck fe = fe_check(table, r.value, opt);
  r.residual = fe.residual;
  r.pairs = fe.pairs;
  r.exhaustive = fe.exhaustive;
  if (fe.residual > opt.tol)
    throw Error(Errc::NonConstantRatio, "dual_js / js is not constant, residual " + std::to_string(fe.residual));
  return r;
}

GammaResult gamma_torus(const BesselTable& table) {
  require_no_shalika(table.rep());
  const GroupCtx& G = table.rep().group();
  const Fq& F = G.fq();
  const unsigned n = G.n(), m = n / 2;
  const bool odd = n % 2;
  const double q = G.q();
  cplx sum = 0;
  for (const auto& comp : compositions(m)) {
    unsigned sc = 0;
    for (unsigned c : comp) sc += 2 * choose2(c);
    const double w = std::pow(q, -static_cast<double>(sc));
    for (const auto& key : bessel_keys(F, m)) {
      if (key.first != comp) continue;
      const MatF a = antidiag_elem(comp, key.second, 2, odd);
      cplx v = table.eval(mat_inverse(F, a));
      if (!odd && comp.back() == 1) v *= table.psi()(key.second.back());
      sum += w * v;
    }
  }
  const double lead = (odd ? 0.5 : -0.5) * m + 2.0 * choose2(m);
  GammaResult r;
  r.route = GammaRoute::Torus;
  r.value = std::pow(q, lead) * sum;
  return r;
}

GammaResult gamma_closed(const CuspidalRep& rep, bool psi_inverse, ClosedVariant variant) {
  const GroupCtx& G = rep.group();
  const FieldCtx& F = G.field();
  const AddChar& psi = G.psi(psi_inverse);
  const double q = G.q();
  GammaResult r;
  r.route = GammaRoute::ClosedForm;
  switch (rep.n()) {
    case 2:
      if (rep.central_char().is_trivial())
        throw Error(Errc::PreconditionViolated, "GL2 closed form needs a nontrivial central character");
      r.value = gauss_sum(rep.central_char(), psi) / std::sqrt(q);
      return r;
    case 3: {
      cplx s = 0;
      for (std::uint64_t j = 0; j < F.order(); ++j) {
        const FElem xi = F.exp(static_cast<std::int64_t>(j));
        const FElem x2 = F.mul(xi, xi);
        s += psi.ambient(F.neg(F.div(F.trace(x2, 3, 1), F.norm(xi, 3, 1)))) * rep.theta()(x2);
      }
      r.value = s * std::pow(q, -1.5);
      return r;
    }
    case 4: {
      if (restriction_is_trivial(rep.theta(), 2))
        throw Error(Errc::PreconditionViolated, "GL4 closed form needs theta nontrivial on F_{q^2}^x");
      const double T0 = rep.central_char().is_trivial() ? q * q - 1 : 0.0;
      const cplx gs = gauss_sum(rep.central_char(), psi);
      const FElem one = F.exp(0);
      cplx sp = 0, sm = 0;
      for (std::uint64_t j = 0; j < F.order(); ++j) {
        const FElem xi = F.exp(static_cast<std::int64_t>(j));
        const FElem x2 = F.mul(xi, xi);
        const FElem N = F.norm(xi, 4, 1);
        FElem a, b;
        if (variant == ClosedVariant::Printed) {
          a = F.div(F.trace(x2, 4, 1), F.mul(N, N));
          b = F.mul(N, F.trace(F.inv(x2), 4, 1));
        } else {
          a = F.trace(F.inv(x2), 4, 1);
          b = F.div(F.trace(x2, 4, 1), N);
        }
        const cplx th = rep.theta()(x2);
        sp += th * kloosterman(one, F.add(a, b), psi);
        sm += th * kloosterman(one, F.sub(a, b), psi);
      }
      r.value = T0 / (q * q) - 0.5 * std::pow(q, -3.0) * gs * (sp + sm);
      return r;
    }
    default:
      throw Error(Errc::UnsupportedN, "closed forms exist for n = 2, 3, 4");
  }
}

S0S1 s0_s1_decomposition(const BesselTable& table) {
  require_no_shalika(table.rep());
  const GroupCtx& G = table.rep().group();
  const Fq& F = G.fq();
  const unsigned n = G.n(), m = n / 2;
  if (n % 2) throw Error(Errc::PreconditionViolated, "S0/S1 split needs even n");
  const double q = G.q();
  auto weight = [&](const std::vector<unsigned>& comp) {
    unsigned sc = 0;
    for (unsigned c : comp) sc += 2 * choose2(c);
    return std::pow(q, -static_cast<double>(sc));
  };
  S0S1 r{0.0, 0.0, 0.0};
  for (const auto& key : bessel_keys(F, m)) {
    if (key.first.front() <= 1) continue;
    r.s0 += weight(key.first) * table.eval(antidiag_elem(key.first, key.second, 2, false));
  }
  std::vector<BesselKey> tail = m > 1 ? bessel_keys(F, m - 1) : std::vector<BesselKey>{BesselKey{}};
  for (const auto& key : tail) {
    std::vector<unsigned> comp{1};
    std::vector<Fq::E> sc{1};
    comp.insert(comp.end(), key.first.begin(), key.first.end());
    sc.insert(sc.end(), key.second.begin(), key.second.end());
    r.s1 += weight(comp) * table.eval(antidiag_elem(comp, sc, 2, false));
  }
  const cplx gs = gauss_sum(table.rep().central_char(), table.psi());
  r.gamma = std::pow(q, -0.5 * m + 2.0 * choose2(m)) * (r.s0 + r.s1 * gs);
  return r;
}

WhittakerFun shalika_witness(const BesselTable& table) {
  const GroupCtx& G = table.rep().group();
  const Fq& F = G.fq();
  const unsigned n = G.n(), m = n / 2;
  if (n % 2) throw Error(Errc::PreconditionViolated, "Shalika vectors need even n");
  const MatF sinv = mat_inverse(F, sigma_perm(n));
  std::optional<WhittakerFun> W;
  for (const MatF& g : mirabolic_coset_reps(F, m))
    for (const MatF& X : coset_reps(F, m, CosetKind::BmodM)) {
      const MatF h = mat_mul(F, mat_mul(F, shalika_u(F, n, X), shalika_d(n, g)), sinv);
      const auto t = WhittakerFun::translate(table, h, table.psi()(F.neg(trace(F, X))));
      if (W)
        *W += t;
      else
        W = t;
    }
  return *W;
}

ShalikaReport shalika_detect(const BesselTable& table, const FeOptions& opt) {
  const GroupCtx& G = table.rep().group();
  const unsigned n = G.n(), m = n / 2;
  if (n % 2) throw Error(Errc::PreconditionViolated, "Shalika vectors need even n");
  const JsFrame fr(G.fq(), n);
  const CFun one = CFun::constant(G.q(), m, 1.0);
  ShalikaReport r;
  r.criterion = admits_shalika_vector(table.rep());
  const WhittakerFun W = shalika_witness(table);
  r.witness_js = js(fr, W, one);
  r.witness_at_sigma = W(sigma_perm(n));
  if (std::abs(r.witness_js) > opt.tol) r.broken_dual = std::abs(dual_js(fr, W.scaled(1.0 / r.witness_js), one));

  std::vector<MatF> hs;
  if (gl_order(G.q(), n) <= opt.exhaustive_limit) {
    hs = enumerate_gl(G.fq(), n);
  } else {
    std::mt19937_64 rng(opt.seed);
    for (unsigned i = 0; i < std::max(1000u, opt.trials); ++i) hs.push_back(random_gl(G.fq(), n, rng));
  }
  std::vector<double> vals(hs.size());
  const auto count = static_cast<std::int64_t>(hs.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t i = 0; i < count; ++i) vals[i] = std::abs(js(fr, WhittakerFun::translate(table, hs[i]), one));
  for (double v : vals) r.max_js_translates = std::max(r.max_js_translates, v);
  r.translates = hs.size();
  r.search_nonzero = std::abs(r.witness_js) > opt.tol || r.max_js_translates > opt.tol;
  return r;
}

std::vector<MatF> homdim_subgroup(const Fq& F, unsigned n) {
  const unsigned m = n / 2;
  const auto gl = enumerate_gl(F, m);
  std::vector<MatF> out;
  if (n % 2 == 0) {
    for (const MatF& g1 : gl)
      for (const MatF& g2 : gl) {
        bool mir = true;
        for (unsigned j = 0; j < m; ++j) mir = mir && g2(m - 1, j) == (j + 1 == m ? 1 : 0);
        if (mir) out.push_back(block_diag(g1, g2));
      }
    return out;
  }
  const std::size_t nu = ipow(F.q(), m);
  for (const MatF& g1 : gl)
    for (const MatF& g2 : gl)
      for (std::size_t ui = 0; ui < nu; ++ui) {
        const auto u = vec_from_index(F.q(), m, ui);
        MatF h = MatF::identity(n);
        mat_place(h, g1, 0, 0);
        mat_place(h, g2, m, m);
        for (unsigned i = 0; i < m; ++i) h(i, 2 * m) = u[i];
        out.push_back(h);
      }
  return out;
}

HomDim homdim_check(const CuspidalRep& rep) {
  const auto H = homdim_subgroup(rep.group().fq(), rep.n());
  cplx s = 0;
  for (const MatF& h : H) s += rep.character(h);
  HomDim r;
  r.order = H.size();
  r.value = s.real() / static_cast<double>(H.size());
  const double imag = s.imag() / static_cast<double>(H.size());
  const double rounded = std::round(r.value);
  if (std::abs(imag) > 1e-6 || std::abs(r.value - rounded) > 1e-6 || rounded < 0 || rounded > 1)
    throw Error(Errc::DimensionBoundViolated, "invariant dimension " + std::to_string(r.value) + " is not 0 or 1");
  return r;
}

}  // namespace gammalab
