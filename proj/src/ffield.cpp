#include "gammalab/ffield.hpp"

#include "gammalab/error.hpp"

#include <string>

namespace gammalab {

bool is_prime(std::uint64_t v) {
  if (v < 2) return false;
  for (std::uint64_t d = 2; d * d <= v; ++d)
    if (v % d == 0) return false;
  return true;
}

namespace {

constexpr std::uint64_t kMaxSize = std::uint64_t{1} << 24;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

}  // namespace

FieldCtx::FieldCtx(unsigned p, unsigned e, unsigned n) : p_(p), e_(e), n_(n) {
  if (!is_prime(p)) throw Error(Errc::NotPrime, "p = " + std::to_string(p));
  if (e == 0 || n == 0) throw Error(Errc::TooLarge, "degrees must be positive");
  const unsigned D = e * n;
  size_ = 1;
  ppow_.assign(D + 1, 1);
  for (unsigned i = 0; i < D; ++i) {
    size_ *= p;
    if (size_ > kMaxSize) throw Error(Errc::TooLarge, "p^(e n) exceeds 2^24");
    ppow_[i + 1] = size_;
  }
  q_ = ppow_[e];

  // Candidates in increasing order of c_0 + c_1 p + ... ; the first whose
  // root generates the full multiplicative group wins.
  const std::uint64_t ord = size_ - 1;
  const std::uint64_t top = ppow_[D - 1];
  std::vector<unsigned> c(D);
  for (std::uint64_t code = 0; code < size_; ++code) {
    std::uint64_t t = code;
    for (unsigned i = 0; i < D; ++i) {
      c[i] = static_cast<unsigned>(t % p);
      t /= p;
    }
    if (c[0] == 0) continue;
    exp_.assign(ord, 0);
    log_.assign(size_, 0);
    std::vector<char> seen(size_, 0);
    std::uint64_t cur = 1;
    bool ok = true;
    for (std::uint64_t j = 0; j < ord; ++j) {
      if (seen[cur] || cur == 0) {
        ok = false;
        break;
      }
      seen[cur] = 1;
      exp_[j] = static_cast<FElem>(cur);
      log_[cur] = static_cast<std::uint32_t>(j);
      // cur *= x, reducing x^D = -(c_0 + ... + c_{D-1} x^{D-1})
      const unsigned hi = static_cast<unsigned>(cur / top);
      std::uint64_t shifted = (cur % top) * p;
      if (hi != 0) {
        std::uint64_t out = 0;
        for (unsigned i = 0; i < D; ++i) {
          const unsigned digit = static_cast<unsigned>((shifted / ppow_[i]) % p);
          const unsigned red = (p - (hi * c[i]) % p) % p;
          out += ((digit + red) % p) * ppow_[i];
        }
        shifted = out;
      }
      cur = shifted;
    }
    if (ok && cur == 1) {
      modulus_ = c;
      return;
    }
  }
  throw Error(Errc::OracleFailed, "no primitive modulus found");
}

std::uint64_t FieldCtx::q_pow(unsigned d) const {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < d; ++i) r *= q_;
  return r;
}

FElem FieldCtx::subfield_gen(unsigned d) const {
  if (d == 0 || n_ % d != 0) throw Error(Errc::NotInSubfield, "degree does not divide n");
  return exp(static_cast<std::int64_t>(order() / (q_pow(d) - 1)));
}

FElem FieldCtx::add(FElem a, FElem b) const {
  if (p_ == 2) return a ^ b;
  std::uint64_t out = 0;
  for (unsigned i = 0; i < degree(); ++i) {
    const std::uint64_t da = a % p_, db = b % p_;
    out += ((da + db) % p_) * ppow_[i];
    a /= p_;
    b /= p_;
  }
  return static_cast<FElem>(out);
}

FElem FieldCtx::neg(FElem a) const {
  if (p_ == 2) return a;
  std::uint64_t out = 0;
  for (unsigned i = 0; i < degree(); ++i) {
    out += ((p_ - a % p_) % p_) * ppow_[i];
    a /= p_;
  }
  return static_cast<FElem>(out);
}

FElem FieldCtx::sub(FElem a, FElem b) const { return add(a, neg(b)); }

FElem FieldCtx::mul(FElem a, FElem b) const {
  if (a == 0 || b == 0) return 0;
  std::uint64_t s = std::uint64_t{log_[a]} + log_[b];
  if (s >= order()) s -= order();
  return exp_[s];
}

FElem FieldCtx::inv(FElem a) const {
  if (a == 0) throw Error(Errc::DivideByZero, "inverse of zero");
  return exp_[(order() - log_[a]) % order()];
}

FElem FieldCtx::div(FElem a, FElem b) const { return mul(a, inv(b)); }

FElem FieldCtx::pow(FElem a, std::int64_t k) const {
  if (a == 0) {
    if (k < 0) throw Error(Errc::DivideByZero, "negative power of zero");
    return k == 0 ? 1 : 0;
  }
  const auto ord = static_cast<std::int64_t>(order());
  std::int64_t km = k % ord;
  if (km < 0) km += ord;
  return exp_[mulmod(log_[a], static_cast<std::uint64_t>(km), order())];
}

FElem FieldCtx::frobenius(FElem a, unsigned i) const {
  if (a == 0) return 0;
  std::uint64_t k = 1;
  for (unsigned j = 0; j < i; ++j) k = mulmod(k, q_, order());
  return exp_[mulmod(log_[a], k, order())];
}

FElem FieldCtx::exp(std::int64_t j) const {
  const auto ord = static_cast<std::int64_t>(order());
  std::int64_t r = j % ord;
  if (r < 0) r += ord;
  return exp_[r];
}

std::uint32_t FieldCtx::dlog(FElem a) const {
  if (a == 0) throw Error(Errc::ZeroHasNoLog, "dlog of zero");
  return log_[a];
}

bool FieldCtx::in_subfield(FElem a, unsigned d) const {
  if (d == 0) return false;
  return frobenius(a, d) == a;
}

FElem FieldCtx::norm(FElem x, unsigned from_deg, unsigned to_deg) const {
  if (to_deg == 0 || from_deg % to_deg != 0 || n_ % from_deg != 0)
    throw Error(Errc::NotInSubfield, "degrees must satisfy d2 | d1 | n");
  if (!in_subfield(x, from_deg)) throw Error(Errc::NotInSubfield, "element outside subfield");
  FElem r = 1;
  for (unsigned i = 0; i < from_deg / to_deg; ++i) r = mul(r, frobenius(x, to_deg * i));
  return r;
}

FElem FieldCtx::trace(FElem x, unsigned from_deg, unsigned to_deg) const {
  if (to_deg == 0 || from_deg % to_deg != 0 || n_ % from_deg != 0)
    throw Error(Errc::NotInSubfield, "degrees must satisfy d2 | d1 | n");
  if (!in_subfield(x, from_deg)) throw Error(Errc::NotInSubfield, "element outside subfield");
  FElem r = 0;
  for (unsigned i = 0; i < from_deg / to_deg; ++i) r = add(r, frobenius(x, to_deg * i));
  return r;
}

FElem FieldCtx::embed(FElem x, unsigned from_deg) const {
  if (!in_subfield(x, from_deg)) throw Error(Errc::NotInSubfield, "element outside subfield");
  return x;
}

FElem FieldCtx::from_int(std::int64_t v) const {
  std::int64_t r = v % static_cast<std::int64_t>(p_);
  if (r < 0) r += p_;
  return static_cast<FElem>(r);
}

Fq::Fq(const FieldCtx& F) : F_(&F) {
  if (F.q() > 1024) throw Error(Errc::TooLarge, "matrix tables need q <= 1024");
  q_ = static_cast<unsigned>(F.q());
  amb_.resize(q_);
  amb_[0] = 0;
  const FElem g1 = F.subfield_gen(1);
  FElem cur = 1;
  for (unsigned i = 1; i < q_; ++i) {
    amb_[i] = cur;
    cur = F.mul(cur, g1);
  }
  add_.resize(q_ * q_);
  mul_.resize(q_ * q_);
  neg_.resize(q_);
  for (unsigned a = 0; a < q_; ++a) {
    neg_[a] = from_ambient(F.neg(amb_[a]));
    for (unsigned b = 0; b < q_; ++b) {
      add_[a * q_ + b] = from_ambient(F.add(amb_[a], amb_[b]));
      mul_[a * q_ + b] = (a == 0 || b == 0) ? 0 : static_cast<E>(1 + (a - 1 + b - 1) % (q_ - 1));
    }
  }
}

Fq::E Fq::inv(E a) const {
  if (a == 0) throw Error(Errc::DivideByZero, "inverse of zero in F_q");
  return static_cast<E>(1 + (q_ - 1 - (a - 1)) % (q_ - 1));
}

Fq::E Fq::exp(std::int64_t j) const {
  const std::int64_t m = q_ - 1;
  std::int64_t r = j % m;
  if (r < 0) r += m;
  return static_cast<E>(1 + r);
}

Fq::E Fq::from_ambient(FElem x) const {
  if (x == 0) return 0;
  const std::uint64_t step = F_->order() / (q_ - 1);
  const std::uint32_t l = F_->dlog(x);
  if (l % step != 0) throw Error(Errc::NotInSubfield, "element not in F_q");
  return static_cast<E>(1 + l / step);
}

}  // namespace gammalab
