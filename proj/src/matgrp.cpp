#include "gammalab/matgrp.hpp"

#include "gammalab/error.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace gammalab {

MatF MatF::zero(unsigned n) {
  if (n == 0 || n > kMaxN) throw Error(Errc::DimensionMismatch, "matrix size out of range");
  MatF m;
  m.n = n;
  return m;
}

MatF MatF::identity(unsigned n) {
  MatF m = zero(n);
  for (unsigned i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

MatF mat_mul(const Fq& F, const MatF& x, const MatF& y) {
  if (x.n != y.n) throw Error(Errc::DimensionMismatch, "mat_mul size");
  MatF r = MatF::zero(x.n);
  for (unsigned i = 0; i < x.n; ++i)
    for (unsigned k = 0; k < x.n; ++k) {
      const Fq::E a = x(i, k);
      if (a == 0) continue;
      for (unsigned j = 0; j < x.n; ++j)
        if (y(k, j) != 0) r(i, j) = F.add(r(i, j), F.mul(a, y(k, j)));
    }
  return r;
}

MatF mat_add(const Fq& F, const MatF& x, const MatF& y) {
  if (x.n != y.n) throw Error(Errc::DimensionMismatch, "mat_add size");
  MatF r = MatF::zero(x.n);
  for (unsigned i = 0; i < x.n; ++i)
    for (unsigned j = 0; j < x.n; ++j) r(i, j) = F.add(x(i, j), y(i, j));
  return r;
}

MatF mat_scale(const Fq& F, Fq::E c, const MatF& x) {
  MatF r = MatF::zero(x.n);
  for (unsigned i = 0; i < x.n; ++i)
    for (unsigned j = 0; j < x.n; ++j) r(i, j) = F.mul(c, x(i, j));
  return r;
}

MatF mat_transpose(const MatF& x) {
  MatF r = MatF::zero(x.n);
  for (unsigned i = 0; i < x.n; ++i)
    for (unsigned j = 0; j < x.n; ++j) r(j, i) = x(i, j);
  return r;
}

namespace {

void row_axpy(const Fq& F, MatF& m, unsigned dst, unsigned src, Fq::E c) {
  // row_dst -= c row_src
  for (unsigned j = 0; j < m.n; ++j)
    if (m(src, j) != 0) m(dst, j) = F.sub(m(dst, j), F.mul(c, m(src, j)));
}

void col_axpy(const Fq& F, MatF& m, unsigned dst, unsigned src, Fq::E c) {
  // col_dst -= c col_src
  for (unsigned i = 0; i < m.n; ++i)
    if (m(i, src) != 0) m(i, dst) = F.sub(m(i, dst), F.mul(c, m(i, src)));
}

// Gaussian elimination on a copy; returns rank and det.
std::pair<unsigned, Fq::E> eliminate(const Fq& F, MatF a) {
  unsigned rank = 0;
  Fq::E det = 1;
  bool sign_flip = false;
  for (unsigned j = 0; j < a.n && rank < a.n; ++j) {
    unsigned piv = a.n;
    for (unsigned i = rank; i < a.n; ++i)
      if (a(i, j) != 0) {
        piv = i;
        break;
      }
    if (piv == a.n) {
      det = 0;
      continue;
    }
    if (piv != rank) {
      for (unsigned c = 0; c < a.n; ++c) std::swap(a(piv, c), a(rank, c));
      sign_flip = !sign_flip;
    }
    det = F.mul(det, a(rank, j));
    const Fq::E inv = F.inv(a(rank, j));
    for (unsigned i = rank + 1; i < a.n; ++i)
      if (a(i, j) != 0) row_axpy(F, a, i, rank, F.mul(a(i, j), inv));
    ++rank;
  }
  if (rank < a.n) det = 0;
  if (sign_flip) det = F.neg(det);
  return {rank, det};
}

}  // namespace

Fq::E mat_det(const Fq& F, const MatF& x) { return eliminate(F, x).second; }
unsigned mat_rank(const Fq& F, const MatF& x) { return eliminate(F, x).first; }
bool mat_invertible(const Fq& F, const MatF& x) { return eliminate(F, x).first == x.n; }

MatF mat_inverse(const Fq& F, const MatF& x) {
  MatF a = x;
  MatF r = MatF::identity(x.n);
  for (unsigned j = 0; j < x.n; ++j) {
    unsigned piv = x.n;
    for (unsigned i = j; i < x.n; ++i)
      if (a(i, j) != 0) {
        piv = i;
        break;
      }
    if (piv == x.n) throw Error(Errc::Singular, "matrix is singular");
    if (piv != j)
      for (unsigned c = 0; c < x.n; ++c) {
        std::swap(a(piv, c), a(j, c));
        std::swap(r(piv, c), r(j, c));
      }
    const Fq::E inv = F.inv(a(j, j));
    for (unsigned c = 0; c < x.n; ++c) {
      a(j, c) = F.mul(a(j, c), inv);
      r(j, c) = F.mul(r(j, c), inv);
    }
    for (unsigned i = 0; i < x.n; ++i)
      if (i != j && a(i, j) != 0) {
        const Fq::E f = a(i, j);
        row_axpy(F, a, i, j, f);
        row_axpy(F, r, i, j, f);
      }
  }
  return r;
}

MatF block_diag(const MatF& x, const MatF& y) {
  MatF r = MatF::zero(x.n + y.n);
  mat_place(r, x, 0, 0);
  mat_place(r, y, x.n, x.n);
  return r;
}

void mat_place(MatF& dst, const MatF& src, unsigned r0, unsigned c0) {
  for (unsigned i = 0; i < src.n; ++i)
    for (unsigned j = 0; j < src.n; ++j) dst(r0 + i, c0 + j) = src(i, j);
}

MatF mat_sub_block(const MatF& x, unsigned r0, unsigned c0, unsigned rows, unsigned cols) {
  MatF r = MatF::zero(std::max(rows, cols));
  for (unsigned i = 0; i < rows; ++i)
    for (unsigned j = 0; j < cols; ++j) r(i, j) = x(r0 + i, c0 + j);
  return r;
}

Fq::E superdiag_sum(const Fq& F, const MatF& u) {
  Fq::E s = 0;
  for (unsigned i = 0; i + 1 < u.n; ++i) s = F.add(s, u(i, i + 1));
  return s;
}

namespace {

// L g R = M with L, R upper unipotent and M monomial.
void bruhat_reduce(const Fq& F, const MatF& g, MatF& M, MatF* L, MatF* R) {
  M = g;
  const unsigned n = g.n;
  for (unsigned j = 0; j < n; ++j) {
    unsigned piv = n;
    for (unsigned i = n; i-- > 0;)
      if (M(i, j) != 0) {
        piv = i;
        break;
      }
    if (piv == n) throw Error(Errc::Singular, "bruhat of a singular matrix");
    const Fq::E inv = F.inv(M(piv, j));
    for (unsigned r = 0; r < piv; ++r)
      if (M(r, j) != 0) {
        const Fq::E c = F.mul(M(r, j), inv);
        row_axpy(F, M, r, piv, c);
        if (L) row_axpy(F, *L, r, piv, c);
      }
    for (unsigned c = j + 1; c < n; ++c)
      if (M(piv, c) != 0) {
        const Fq::E f = F.mul(M(piv, c), inv);
        col_axpy(F, M, c, j, f);
        if (R) col_axpy(F, *R, c, j, f);
      }
  }
}

}  // namespace

BruhatDecomp bruhat(const Fq& F, const MatF& g) {
  MatF M, L = MatF::identity(g.n), R = MatF::identity(g.n);
  bruhat_reduce(F, g, M, &L, &R);
  BruhatDecomp b;
  b.u1 = mat_inverse(F, L);
  b.u2 = mat_inverse(F, R);
  b.w = MatF::zero(g.n);
  b.d = MatF::zero(g.n);
  for (unsigned i = 0; i < g.n; ++i)
    for (unsigned j = 0; j < g.n; ++j)
      if (M(i, j) != 0) {
        b.w(i, j) = 1;
        b.d(j, j) = M(i, j);
      }
  return b;
}

BruhatCell bruhat_cell(const Fq& F, const MatF& g) {
  MatF M, L = MatF::identity(g.n), R = MatF::identity(g.n);
  bruhat_reduce(F, g, M, &L, &R);
  // Inverting a unipotent matrix negates its superdiagonal.
  const Fq::E s = F.add(superdiag_sum(F, L), superdiag_sum(F, R));
  return BruhatCell{M, F.neg(s)};
}

MatF n_coset_canonical(const Fq& F, const MatF& g) {
  MatF a = g;
  const unsigned m = g.n;
  std::vector<unsigned> pivot(m, 0);
  for (unsigned i = m; i-- > 0;) {
    for (unsigned k = m; k-- > i + 1;) {
      const Fq::E v = a(i, pivot[k]);
      if (v != 0) row_axpy(F, a, i, k, F.div(v, a(k, pivot[k])));
    }
    unsigned p = m;
    for (unsigned j = 0; j < m; ++j)
      if (a(i, j) != 0) {
        p = j;
        break;
      }
    if (p == m) throw Error(Errc::Singular, "coset of a singular matrix");
    pivot[i] = p;
  }
  return a;
}

std::vector<MatF> coset_reps(const Fq& F, unsigned m, CosetKind kind) {
  std::vector<MatF> out;
  if (kind == CosetKind::BmodM) {
    const unsigned cells = m * (m - 1) / 2;
    std::size_t total = 1;
    for (unsigned i = 0; i < cells; ++i) total *= F.q();
    for (std::size_t idx = 0; idx < total; ++idx) {
      MatF x = MatF::zero(m);
      std::size_t t = idx;
      for (unsigned i = 0; i < m; ++i)
        for (unsigned j = 0; j < i; ++j) {
          x(i, j) = static_cast<Fq::E>(t % F.q());
          t /= F.q();
        }
      out.push_back(x);
    }
    return out;
  }
  std::set<MatF> reps;
  for (const MatF& g : enumerate_gl(F, m)) reps.insert(n_coset_canonical(F, g));
  out.assign(reps.begin(), reps.end());
  return out;
}

MatF sigma_perm(unsigned n) {
  if (n < 2) throw Error(Errc::DimensionMismatch, "sigma needs n >= 2");
  const unsigned m = n / 2;
  MatF s = MatF::zero(n);
  for (unsigned j = 1; j <= n; ++j) {
    unsigned img;
    if (j <= m)
      img = 2 * j - 1;
    else if (j <= 2 * m)
      img = 2 * (j - m);
    else
      img = j;
    s(img - 1, j - 1) = 1;
  }
  return s;
}

MatF antidiag_elem(const std::vector<unsigned>& weights, const std::vector<Fq::E>& scalars,
                   unsigned block_scale, bool tail_one) {
  if (weights.size() != scalars.size()) throw Error(Errc::DimensionMismatch, "weights vs scalars");
  std::vector<unsigned> sizes;
  std::vector<Fq::E> vals;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (scalars[i] == 0) throw Error(Errc::ZeroScalar, "antidiag scalar is zero");
    sizes.push_back(block_scale * weights[i]);
    vals.push_back(scalars[i]);
  }
  if (tail_one) {
    sizes.push_back(1);
    vals.push_back(1);
  }
  unsigned N = 0;
  for (unsigned s : sizes) N += s;
  MatF r = MatF::zero(N);
  unsigned off = 0;
  for (std::size_t b = 0; b < sizes.size(); ++b) {
    const unsigned c0 = N - off - sizes[b];
    for (unsigned a = 0; a < sizes[b]; ++a) r(off + a, c0 + a) = vals[b];
    off += sizes[b];
  }
  return r;
}

MatF long_weyl(unsigned n) {
  MatF r = MatF::zero(n);
  for (unsigned i = 0; i < n; ++i) r(i, n - 1 - i) = 1;
  return r;
}

std::uint64_t gl_order(std::uint64_t q, unsigned n) {
  std::uint64_t qn = 1;
  for (unsigned i = 0; i < n; ++i) qn *= q;
  std::uint64_t r = 1, qi = 1;
  for (unsigned i = 0; i < n; ++i) {
    r *= (qn - qi);
    qi *= q;
  }
  return r;
}

std::vector<MatF> enumerate_gl(const Fq& F, unsigned n) {
  std::vector<MatF> out;
  out.reserve(static_cast<std::size_t>(gl_order(F.q(), n)));
  for_each_gl(F, n, [&](const MatF& g) { out.push_back(g); });
  return out;
}

void for_each_gl(const Fq& F, unsigned n, const std::function<void(const MatF&)>& visit) {
  const unsigned q = F.q();
  std::size_t qn = 1;
  for (unsigned i = 0; i < n; ++i) qn *= q;
  std::vector<std::vector<Fq::E>> vecs(qn);
  for (std::size_t v = 0; v < qn; ++v) {
    vecs[v].resize(n);
    std::size_t t = v;
    for (unsigned j = 0; j < n; ++j) {
      vecs[v][j] = static_cast<Fq::E>(t % q);
      t /= q;
    }
  }
  auto combine = [&](std::size_t a, Fq::E c, std::size_t b) {
    std::size_t idx = 0, w = 1;
    for (unsigned j = 0; j < n; ++j) {
      idx += F.add(vecs[a][j], F.mul(c, vecs[b][j])) * w;
      w *= q;
    }
    return idx;
  };
  MatF cur = MatF::zero(n);
  std::function<void(unsigned, const std::vector<std::size_t>&)> rec =
      [&](unsigned row, const std::vector<std::size_t>& span) {
        if (row == n) {
          visit(cur);
          return;
        }
        std::vector<char> in(qn, 0);
        for (std::size_t s : span) in[s] = 1;
        for (std::size_t v = 0; v < qn; ++v) {
          if (in[v]) continue;
          for (unsigned j = 0; j < n; ++j) cur(row, j) = vecs[v][j];
          std::vector<std::size_t> next;
          next.reserve(span.size() * q);
          for (std::size_t s : span)
            for (unsigned c = 0; c < q; ++c) next.push_back(combine(s, static_cast<Fq::E>(c), v));
          rec(row + 1, next);
        }
      };
  rec(0, std::vector<std::size_t>{0});
}

std::vector<MatF> enumerate_upper_unipotent(const Fq& F, unsigned n) {
  const unsigned cells = n * (n - 1) / 2;
  std::size_t total = 1;
  for (unsigned i = 0; i < cells; ++i) total *= F.q();
  std::vector<MatF> out;
  out.reserve(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    MatF u = MatF::identity(n);
    std::size_t t = idx;
    for (unsigned i = 0; i < n; ++i)
      for (unsigned j = i + 1; j < n; ++j) {
        u(i, j) = static_cast<Fq::E>(t % F.q());
        t /= F.q();
      }
    out.push_back(u);
  }
  return out;
}

MatF random_gl(const Fq& F, unsigned n, std::mt19937_64& rng) {
  std::uniform_int_distribution<unsigned> dist(0, F.q() - 1);
  for (;;) {
    MatF g = MatF::zero(n);
    for (unsigned i = 0; i < n; ++i)
      for (unsigned j = 0; j < n; ++j) g(i, j) = static_cast<Fq::E>(dist(rng));
    if (mat_invertible(F, g)) return g;
  }
}

MatF random_upper_unipotent(const Fq& F, unsigned n, std::mt19937_64& rng) {
  std::uniform_int_distribution<unsigned> dist(0, F.q() - 1);
  MatF u = MatF::identity(n);
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = i + 1; j < n; ++j) u(i, j) = static_cast<Fq::E>(dist(rng));
  return u;
}

// ---- polynomials over F_q ----

namespace {

void trim(PolyF& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

PolyF poly_mul(const Fq& F, const PolyF& a, const PolyF& b) {
  if (a.empty() || b.empty()) return {};
  PolyF r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0)
      for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
  trim(r);
  return r;
}

PolyF poly_mod(const Fq& F, PolyF a, const PolyF& m) {
  trim(a);
  const std::size_t dm = m.size() - 1;
  const Fq::E lead_inv = F.inv(m.back());
  while (a.size() > dm) {
    const Fq::E c = F.mul(a.back(), lead_inv);
    const std::size_t shift = a.size() - 1 - dm;
    for (std::size_t i = 0; i <= dm; ++i) a[shift + i] = F.sub(a[shift + i], F.mul(c, m[i]));
    trim(a);
  }
  return a;
}

PolyF poly_sub(const Fq& F, const PolyF& a, const PolyF& b) {
  PolyF r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i) {
    const Fq::E x = i < a.size() ? a[i] : 0;
    const Fq::E y = i < b.size() ? b[i] : 0;
    r[i] = F.sub(x, y);
  }
  trim(r);
  return r;
}

PolyF poly_monic(const Fq& F, PolyF a) {
  trim(a);
  if (a.empty()) return a;
  const Fq::E inv = F.inv(a.back());
  for (auto& c : a) c = F.mul(c, inv);
  return a;
}

PolyF poly_gcd(const Fq& F, PolyF a, PolyF b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    PolyF r = poly_mod(F, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return poly_monic(F, a);
}

PolyF poly_powmod(const Fq& F, PolyF base, std::uint64_t e, const PolyF& m) {
  PolyF r{1};
  base = poly_mod(F, base, m);
  while (e > 0) {
    if (e & 1) r = poly_mod(F, poly_mul(F, r, base), m);
    base = poly_mod(F, poly_mul(F, base, base), m);
    e >>= 1;
  }
  return r;
}

}  // namespace

PolyF char_poly(const Fq& F, const MatF& g) {
  const unsigned n = g.n;
  MatF H = g;
  // Similarity reduction to upper Hessenberg form.
  for (unsigned j = 0; j + 2 < n; ++j) {
    unsigned piv = n;
    for (unsigned i = j + 1; i < n; ++i)
      if (H(i, j) != 0) {
        piv = i;
        break;
      }
    if (piv == n) continue;
    if (piv != j + 1) {
      for (unsigned c = 0; c < n; ++c) std::swap(H(piv, c), H(j + 1, c));
      for (unsigned r = 0; r < n; ++r) std::swap(H(r, piv), H(r, j + 1));
    }
    const Fq::E inv = F.inv(H(j + 1, j));
    for (unsigned r = j + 2; r < n; ++r) {
      if (H(r, j) == 0) continue;
      const Fq::E f = F.mul(H(r, j), inv);
      row_axpy(F, H, r, j + 1, f);
      // column j+1 += f column r
      for (unsigned i = 0; i < n; ++i)
        if (H(i, r) != 0) H(i, j + 1) = F.add(H(i, j + 1), F.mul(f, H(i, r)));
    }
  }
  // p_k = (t - h_kk) p_{k-1} - sum_{i<k} h_{ik} (prod_{j=i+1}^{k} h_{j,j-1}) p_{i-1}
  std::vector<PolyF> p(n + 1);
  p[0] = PolyF{1};
  for (unsigned k = 1; k <= n; ++k) {
    PolyF cur = poly_mul(F, PolyF{F.neg(H(k - 1, k - 1)), 1}, p[k - 1]);
    Fq::E prod = 1;
    for (unsigned i = k - 1; i >= 1; --i) {
      prod = F.mul(prod, H(i, i - 1));
      if (prod == 0) break;
      const Fq::E coef = F.mul(H(i - 1, k - 1), prod);
      if (coef != 0) cur = poly_sub(F, cur, poly_mul(F, PolyF{coef}, p[i - 1]));
    }
    p[k] = cur;
  }
  PolyF r = p[n];
  r.resize(n + 1, 0);
  return r;
}

ClassTyper::ClassTyper(const FieldCtx& F, const Fq& fq) : F_(&F), fq_(&fq) {
  const unsigned n = F.n();
  irr_.resize(n + 1);
  std::vector<char> done(F.size(), 0);
  for (std::uint64_t j = 0; j < F.order(); ++j) {
    const FElem xi = F.exp(static_cast<std::int64_t>(j));
    if (done[xi]) continue;
    std::vector<FElem> orbit{xi};
    for (FElem y = F.frobenius(xi); y != xi; y = F.frobenius(y)) orbit.push_back(y);
    for (FElem y : orbit) done[y] = 1;
    // minimal polynomial prod (t - y) over the orbit, in ambient arithmetic
    std::vector<FElem> poly{1};
    for (FElem y : orbit) {
      std::vector<FElem> next(poly.size() + 1, 0);
      for (std::size_t i = 0; i < poly.size(); ++i) {
        next[i + 1] = F.add(next[i + 1], poly[i]);
        next[i] = F.sub(next[i], F.mul(y, poly[i]));
      }
      poly = std::move(next);
    }
    PolyF f(poly.size());
    for (std::size_t i = 0; i < poly.size(); ++i) f[i] = fq.from_ambient(poly[i]);
    root_of_.emplace(key(f), xi);
    irr_[orbit.size()].push_back({f, xi});
  }
}

std::uint64_t ClassTyper::key(const PolyF& f) const {
  std::uint64_t code = 0, w = 1;
  for (std::size_t i = 0; i + 1 < f.size(); ++i) {
    code += f[i] * w;
    w *= fq_->q();
  }
  return (code << 3) | (f.size() - 1);
}

std::vector<std::pair<PolyF, FElem>> ClassTyper::irreducibles(unsigned d) const {
  if (d >= irr_.size()) return {};
  return irr_[d];
}

ClassType ClassTyper::operator()(const MatF& g) const {
  const Fq& F = *fq_;
  const unsigned n = g.n;
  const PolyF P = char_poly(F, g);
  if (P[0] == 0) throw Error(Errc::Singular, "class type of a singular matrix");
  ClassType ct;
  const PolyF t{0, 1};
  PolyF h = t;
  for (unsigned d = 1; d <= n; ++d) {
    h = poly_powmod(F, h, F.q(), P);
    const PolyF G = poly_gcd(F, P, poly_sub(F, h, t));
    if (G.size() <= 1) continue;
    const unsigned deg = static_cast<unsigned>(G.size() - 1);
    if (deg != d || n % d != 0) return ct;
    PolyF pw{1};
    for (unsigned i = 0; i < n / d; ++i) pw = poly_mul(F, pw, G);
    if (pw != P) return ct;
    auto it = root_of_.find(key(G));
    if (it == root_of_.end()) throw Error(Errc::OracleFailed, "irreducible factor has no root in the ambient field");
    ct.primary = true;
    ct.d = d;
    ct.c = n / d;
    ct.alpha = it->second;
    ct.f = G;
    MatF fg = MatF::zero(n);
    for (std::size_t i = G.size(); i-- > 0;) {
      fg = mat_mul(F, fg, g);
      for (unsigned r = 0; r < n; ++r) fg(r, r) = F.add(fg(r, r), G[i]);
    }
    ct.k = (n - mat_rank(F, fg)) / d;
    return ct;
  }
  return ct;
}

}  // namespace gammalab
