#pragma once

// Finite field arithmetic GF(r^m) and univariate polynomial factorization.
//
// A Field is determined by (characteristic, degree): the modulus is always the
// monic irreducible polynomial of that degree over the prime field with the
// least integer encoding, so two fields with equal parameters are bit-identical
// and serialized data is reproducible across runs and machines.
//
// Elements are encoded as integers in [0, r^m): the base-r digits are the
// residue-polynomial coefficients, constant term first. Multiplication goes
// through discrete-log tables, addition through digit-split tables.

#include <algorithm>
#include <map>
#include <memory>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "common.hpp"

namespace brpairs {
namespace gf {

using elt = uint32_t;  // encoded field element

inline constexpr uint64_t kDefaultFieldBound = 1u << 20;

namespace detail {

// dense polynomial over the prime field GF(r), coefficients in [0, r)
using ppoly = std::vector<uint32_t>;

inline void ptrim(ppoly& f) {
  while (!f.empty() && f.back() == 0)
    f.pop_back();
}

inline ppoly pmulmod(const ppoly& a, const ppoly& b, const ppoly& mod, uint32_t r) {
  if (a.empty() || b.empty())
    return {};
  ppoly c(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i])
      for (size_t j = 0; j < b.size(); ++j)
        c[i + j] = (c[i + j] + uint64_t(a[i]) * b[j]) % r;
  // reduce mod the monic modulus
  size_t m = mod.size() - 1;
  for (size_t i = c.size(); i-- > m;) {
    uint32_t lead = c[i];
    if (!lead)
      continue;
    c[i] = 0;
    for (size_t j = 0; j < m; ++j)
      c[i - m + j] = (c[i - m + j] + uint64_t(lead) * (r - mod[j] % r) % r) % r;
  }
  c.resize(m);
  ptrim(c);
  return c;
}

inline ppoly pgcd(ppoly a, ppoly b, uint32_t r) {
  auto inv_mod = [&](uint32_t x) {
    // r prime, x != 0
    uint32_t res = 1, e = r - 2, base = x;
    while (e) {
      if (e & 1)
        res = uint64_t(res) * base % r;
      base = uint64_t(base) * base % r;
      e >>= 1;
    }
    return res;
  };
  ptrim(a);
  ptrim(b);
  while (!b.empty()) {
    // a mod b
    uint32_t lead_inv = inv_mod(b.back());
    while (a.size() >= b.size() && !a.empty()) {
      uint32_t f = uint64_t(a.back()) * lead_inv % r;
      size_t off = a.size() - b.size();
      for (size_t i = 0; i < b.size(); ++i)
        a[off + i] = (a[off + i] + uint64_t(f) * (r - b[i] % r) % r) % r;
      ptrim(a);
      if (a.size() < b.size())
        break;
    }
    std::swap(a, b);
    ptrim(b);
  }
  return a;
}

// irreducibility over GF(r): f monic of degree m; uses x^{r^d} - x gcd tests
inline bool pirreducible(const ppoly& f, uint32_t r) {
  size_t m = f.size() - 1;
  if (m == 0)
    return false;
  if (m == 1)
    return true;
  ppoly x = {0, 1};
  ppoly xp = x;  // x^{r^d} mod f
  for (size_t d = 1; d <= m; ++d) {
    // xp <- xp^r mod f
    ppoly acc = {1};
    ppoly base = xp;
    uint32_t e = r;
    while (e) {
      if (e & 1)
        acc = pmulmod(acc, base, f, r);
      base = pmulmod(base, base, f, r);
      e >>= 1;
    }
    xp = acc;
    ppoly diff = xp;
    diff.resize(std::max<size_t>(diff.size(), 2), 0);
    diff[1] = (diff[1] + r - 1) % r;
    ptrim(diff);
    if (d < m && (m % d == 0)) {
      ppoly g = pgcd(f, diff, r);
      if (g.size() != 1)
        return false;  // nontrivial factor of degree dividing d
    }
    if (d == m && !diff.empty())
      return false;  // x^{r^m} != x mod f
  }
  return true;
}

}  // namespace detail

class Field {
public:
  uint32_t characteristic;  // r, prime
  uint32_t degree;          // m
  uint64_t size;            // q = r^m
  std::vector<uint32_t> modulus;  // monic, degree m, prime-field coefficients, constant first

  elt zero() const { return 0; }
  elt one() const { return 1; }

  elt add(elt a, elt b) const {
    return add_lo_[(a % half_) * half_ + (b % half_)] + half_ * add_hi_[(a / half_) * hi_size_ + (b / half_)];
  }
  elt neg(elt a) const { return neg_[a]; }
  elt sub(elt a, elt b) const { return add(a, neg_[b]); }
  elt mul(elt a, elt b) const {
    if (a == 0 || b == 0)
      return 0;
    return exp_[log_[a] + log_[b]];
  }
  elt inv(elt a) const {
    require(a != 0, "division by zero in GF");
    return exp_[size - 1 - log_[a]];
  }
  elt div(elt a, elt b) const { return mul(a, inv(b)); }
  elt pow(elt a, uint64_t e) const {
    if (a == 0)
      return e == 0 ? 1 : 0;
    uint64_t le = (uint64_t(log_[a]) * (e % (size - 1))) % (size - 1);
    return exp_[le];
  }
  // Frobenius x -> x^r and its iterates
  elt frob(elt a, unsigned times = 1) const {
    elt x = a;
    for (unsigned i = 0; i < times; ++i)
      x = pow(x, characteristic);
    return x;
  }
  elt inv_frob(elt a, unsigned times = 1) const {
    // frob has order m on GF(r^m)
    unsigned t = (degree - times % degree) % degree;
    return frob(a, t);
  }
  // integer n -> n * 1 in the prime subfield
  elt from_int(int64_t n) const {
    int64_t v = n % int64_t(characteristic);
    if (v < 0)
      v += characteristic;
    return elt(v);
  }
  uint64_t mult_order_of(elt a) const {
    require(a != 0, "order of zero");
    uint64_t n = size - 1, d = gcd_u64(log_[a], n);
    return n / d;
  }

  std::vector<uint32_t> digits(elt a) const {
    std::vector<uint32_t> d(degree);
    for (uint32_t i = 0; i < degree; ++i) {
      d[i] = a % characteristic;
      a /= characteristic;
    }
    return d;
  }
  elt from_digits(const std::vector<uint32_t>& d) const {
    elt v = 0;
    for (size_t i = d.size(); i-- > 0;)
      v = elt(v * characteristic + d[i] % characteristic);
    return v;
  }

  std::string describe() const {
    return "GF(" + std::to_string(characteristic) + "^" + std::to_string(degree) + ")";
  }

  Field(uint32_t r, uint32_t m, uint64_t bound);
  Field(const Field&) = delete;
  Field& operator=(const Field&) = delete;

private:
  uint32_t half_, hi_size_;
  std::vector<elt> add_lo_, add_hi_, neg_;
  std::vector<uint32_t> log_;  // defined for a != 0
  std::vector<elt> exp_;       // length 2(q-1), doubled to skip the mod
};

inline Field::Field(uint32_t r, uint32_t m, uint64_t bound) {
  require(is_prime_u64(r), "field characteristic must be prime");
  require(m >= 1, "field degree must be positive");
  uint64_t q = 1;
  for (uint32_t i = 0; i < m; ++i) {
    q *= r;
    require(q <= bound, "field size exceeds configured bound");
  }
  characteristic = r;
  degree = m;
  size = q;

  // canonical modulus: least monic irreducible by integer encoding of
  // (c_0, c_1, ..., c_{m-1}); found by exhaustive scan
  modulus.assign(m + 1, 0);
  modulus[m] = 1;
  if (m == 1) {
    // x itself is irreducible; encoding 0 is the least
  } else {
    uint64_t lower = ipow_u64(r, m);
    bool found = false;
    for (uint64_t code = 0; code < lower; ++code) {
      detail::ppoly f(m + 1, 0);
      uint64_t c = code;
      for (uint32_t i = 0; i < m; ++i) {
        f[i] = c % r;
        c /= r;
      }
      f[m] = 1;
      if (detail::pirreducible(f, r)) {
        for (uint32_t i = 0; i <= m; ++i)
          modulus[i] = f[i];
        found = true;
        break;
      }
    }
    check(found, "no irreducible modulus found (impossible)");
  }

  // digit-split addition tables
  uint32_t lo_deg = (m + 1) / 2;
  half_ = uint32_t(ipow_u64(r, lo_deg));
  hi_size_ = uint32_t((q + half_ - 1) / half_);
  add_lo_.resize(uint64_t(half_) * half_);
  for (uint32_t a = 0; a < half_; ++a)
    for (uint32_t b = 0; b < half_; ++b) {
      uint32_t v = 0, pw = 1, x = a, y = b;
      for (uint32_t i = 0; i < lo_deg; ++i) {
        v += ((x + y) % r) * pw;
        pw *= r;
        x /= r;
        y /= r;
      }
      add_lo_[uint64_t(a) * half_ + b] = v;
    }
  add_hi_.resize(uint64_t(hi_size_) * hi_size_);
  for (uint32_t a = 0; a < hi_size_; ++a)
    for (uint32_t b = 0; b < hi_size_; ++b) {
      uint32_t v = 0, pw = 1, x = a, y = b;
      for (uint32_t i = 0; i < m - lo_deg; ++i) {
        v += ((x + y) % r) * pw;
        pw *= r;
        x /= r;
        y /= r;
      }
      add_hi_[uint64_t(a) * hi_size_ + b] = v;
    }
  neg_.resize(q);
  for (uint64_t a = 0; a < q; ++a) {
    uint32_t v = 0, pw = 1, x = uint32_t(a);
    for (uint32_t i = 0; i < m; ++i) {
      v += ((r - x % r) % r) * pw;
      pw *= r;
      x /= r;
    }
    neg_[a] = v;
  }

  // discrete-log tables from the least primitive element (by encoding)
  auto raw_mul = [&](elt a, elt b) -> elt {
    detail::ppoly pa(m, 0), pb(m, 0);
    elt x = a;
    for (uint32_t i = 0; i < m; ++i) {
      pa[i] = x % r;
      x /= r;
    }
    x = b;
    for (uint32_t i = 0; i < m; ++i) {
      pb[i] = x % r;
      x /= r;
    }
    detail::ppoly mod(modulus.begin(), modulus.end());
    detail::ppoly pc = detail::pmulmod(pa, pb, mod, r);
    elt v = 0;
    for (size_t i = pc.size(); i-- > 0;)
      v = elt(v * r + pc[i]);
    return v;
  };
  auto raw_pow = [&](elt a, uint64_t e) -> elt {
    elt res = 1, base = a;
    while (e) {
      if (e & 1)
        res = raw_mul(res, base);
      base = raw_mul(base, base);
      e >>= 1;
    }
    return res;
  };
  std::vector<uint64_t> pf = prime_factors(q - 1);
  elt g = 0;
  for (elt cand = 1; cand < q; ++cand) {
    bool primitive = true;
    for (uint64_t p : pf)
      if (raw_pow(cand, (q - 1) / p) == 1) {
        primitive = false;
        break;
      }
    if (primitive) {
      g = cand;
      break;
    }
  }
  check(g != 0 || q == 2, "no primitive element found (impossible)");
  if (q == 2)
    g = 1;
  log_.assign(q, 0);
  exp_.assign(2 * (q - 1), 0);
  elt cur = 1;
  for (uint64_t i = 0; i < q - 1; ++i) {
    exp_[i] = cur;
    exp_[i + (q - 1)] = cur;
    log_[cur] = uint32_t(i);
    cur = raw_mul(cur, g);
  }
  check(cur == 1, "primitive element order mismatch");
}

// Canonical field registry: repeated calls return the identical object.
inline const Field& make_field(uint32_t characteristic, uint32_t degree,
                               uint64_t bound = kDefaultFieldBound) {
  static std::map<std::pair<uint32_t, uint32_t>, std::unique_ptr<Field>> registry;
  static std::mutex mx;
  std::lock_guard<std::mutex> lk(mx);
  auto key = std::make_pair(characteristic, degree);
  auto it = registry.find(key);
  if (it == registry.end())
    it = registry.emplace(key, std::make_unique<Field>(characteristic, degree, bound)).first;
  return *it->second;
}

// owner-tagged element, for call sites that want checked arithmetic
struct FieldElement {
  const Field* field = nullptr;
  elt v = 0;
  FieldElement() = default;
  FieldElement(const Field& f, elt x) : field(&f), v(x) {}
  FieldElement operator+(FieldElement o) const {
    require(field == o.field, "field mismatch");
    return {*field, field->add(v, o.v)};
  }
  FieldElement operator*(FieldElement o) const {
    require(field == o.field, "field mismatch");
    return {*field, field->mul(v, o.v)};
  }
  FieldElement operator-() const { return {*field, field->neg(v)}; }
  bool operator==(const FieldElement& o) const { return field == o.field && v == o.v; }
};

// ---------------------------------------------------------------------------
// Polynomials over a Field (normalized: no trailing zero coefficients)
// ---------------------------------------------------------------------------

struct Poly {
  const Field* field = nullptr;
  std::vector<elt> c;  // c[i] is the coefficient of x^i

  Poly() = default;
  Poly(const Field& f, std::vector<elt> coeffs) : field(&f), c(std::move(coeffs)) { trim(); }

  void trim() {
    while (!c.empty() && c.back() == 0)
      c.pop_back();
  }
  bool is_zero() const { return c.empty(); }
  int degree() const { return int(c.size()) - 1; }
  elt lead() const { return c.empty() ? 0 : c.back(); }
  elt coeff(size_t i) const { return i < c.size() ? c[i] : 0; }

  static Poly zero(const Field& f) { return Poly(f, {}); }
  static Poly constant(const Field& f, elt a) { return Poly(f, {a}); }
  static Poly x(const Field& f) { return Poly(f, {0, 1}); }
  // x - a
  static Poly x_minus(const Field& f, elt a) { return Poly(f, {f.neg(a), 1}); }

  bool operator==(const Poly& o) const { return field == o.field && c == o.c; }
  bool operator<(const Poly& o) const {  // by degree, then encoding, high coeff first
    if (c.size() != o.c.size())
      return c.size() < o.c.size();
    for (size_t i = c.size(); i-- > 0;)
      if (c[i] != o.c[i])
        return c[i] < o.c[i];
    return false;
  }
};

inline Poly operator+(const Poly& a, const Poly& b) {
  const Field& F = *a.field;
  std::vector<elt> c(std::max(a.c.size(), b.c.size()), 0);
  for (size_t i = 0; i < c.size(); ++i)
    c[i] = F.add(a.coeff(i), b.coeff(i));
  return Poly(F, std::move(c));
}

inline Poly operator-(const Poly& a, const Poly& b) {
  const Field& F = *a.field;
  std::vector<elt> c(std::max(a.c.size(), b.c.size()), 0);
  for (size_t i = 0; i < c.size(); ++i)
    c[i] = F.sub(a.coeff(i), b.coeff(i));
  return Poly(F, std::move(c));
}

inline Poly operator*(const Poly& a, const Poly& b) {
  const Field& F = *a.field;
  if (a.is_zero() || b.is_zero())
    return Poly::zero(F);
  std::vector<elt> c(a.c.size() + b.c.size() - 1, 0);
  for (size_t i = 0; i < a.c.size(); ++i)
    if (a.c[i])
      for (size_t j = 0; j < b.c.size(); ++j)
        c[i + j] = F.add(c[i + j], F.mul(a.c[i], b.c[j]));
  return Poly(F, std::move(c));
}

inline Poly scale(const Poly& a, elt s) {
  const Field& F = *a.field;
  std::vector<elt> c(a.c);
  for (auto& x : c)
    x = F.mul(x, s);
  return Poly(F, std::move(c));
}

inline Poly monic(const Poly& a) {
  require(!a.is_zero(), "monic of zero polynomial");
  return scale(a, a.field->inv(a.lead()));
}

inline std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
  const Field& F = *a.field;
  require(!b.is_zero(), "polynomial division by zero");
  std::vector<elt> rem(a.c), quo;
  int db = b.degree();
  if (a.degree() < db)
    return {Poly::zero(F), a};
  quo.assign(a.degree() - db + 1, 0);
  elt lead_inv = F.inv(b.lead());
  for (int i = a.degree(); i >= db; --i) {
    elt f = F.mul(rem[i], lead_inv);
    quo[i - db] = f;
    if (f == 0)
      continue;
    for (int j = 0; j <= db; ++j)
      rem[i - db + j] = F.sub(rem[i - db + j], F.mul(f, b.c[j]));
  }
  return {Poly(F, std::move(quo)), Poly(F, std::move(rem))};
}

inline Poly pmod(const Poly& a, const Poly& b) { return divmod(a, b).second; }

inline Poly gcd(Poly a, Poly b) {
  while (!b.is_zero()) {
    Poly r = pmod(a, b);
    a = b;
    b = r;
  }
  return a.is_zero() ? a : monic(a);
}

inline Poly derivative(const Poly& a) {
  const Field& F = *a.field;
  if (a.c.size() <= 1)
    return Poly::zero(F);
  std::vector<elt> c(a.c.size() - 1);
  for (size_t i = 1; i < a.c.size(); ++i)
    c[i - 1] = F.mul(a.c[i], F.from_int(int64_t(i)));
  return Poly(F, std::move(c));
}

inline elt eval(const Poly& a, elt x) {
  const Field& F = *a.field;
  elt v = 0;
  for (size_t i = a.c.size(); i-- > 0;)
    v = F.add(F.mul(v, x), a.c[i]);
  return v;
}

inline Poly powmod(const Poly& a, uint64_t e, const Poly& mod) {
  const Field& F = *a.field;
  Poly res = Poly::constant(F, 1), base = pmod(a, mod);
  while (e) {
    if (e & 1)
      res = pmod(res * base, mod);
    base = pmod(base * base, mod);
    e >>= 1;
  }
  return res;
}

inline std::string to_string(const Poly& f) {
  if (f.is_zero())
    return "0";
  std::string s;
  for (size_t i = f.c.size(); i-- > 0;) {
    if (f.c[i] == 0)
      continue;
    if (!s.empty())
      s += " + ";
    if (i == 0 || f.c[i] != 1)
      s += std::to_string(f.c[i]);
    if (i > 0) {
      if (f.c[i] != 1)
        s += "*";
      s += "x";
      if (i > 1)
        s += "^" + std::to_string(i);
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// Factorization: squarefree decomposition + distinct degree + equal degree.
// The equal-degree splitter draws its trial polynomials from a counter-mode
// stream seeded from the polynomial bytes, so output order is reproducible.
// ---------------------------------------------------------------------------

namespace detail {

inline uint64_t poly_seed(const Poly& f) {
  uint64_t h = fnv1a_vec(f.c);
  h = fnv1a(&f.field->characteristic, sizeof(uint32_t), h);
  h = fnv1a(&f.field->degree, sizeof(uint32_t), h);
  return h;
}

// f = g(x^r) => returns g with coefficients mapped through the inverse Frobenius
inline Poly root_of_frobenius_part(const Poly& f) {
  const Field& F = *f.field;
  uint32_t r = F.characteristic;
  std::vector<elt> c(f.c.size() / r + 1, 0);
  for (size_t i = 0; i < f.c.size(); ++i)
    if (f.c[i]) {
      check(i % r == 0, "polynomial is not of the form g(x^r)");
      c[i / r] = F.inv_frob(f.c[i]);
    }
  return Poly(F, std::move(c));
}

inline void squarefree_decompose(const Poly& f, unsigned mult, std::vector<std::pair<Poly, unsigned>>& out) {
  const Field& F = *f.field;
  uint32_t r = F.characteristic;
  if (f.degree() <= 0)
    return;
  Poly df = derivative(f);
  if (df.is_zero()) {
    squarefree_decompose(root_of_frobenius_part(f), mult * r, out);
    return;
  }
  Poly g = gcd(f, df);
  Poly w = divmod(f, g).first;  // product of squarefree part of the non-p-power content
  unsigned i = 1;
  while (w.degree() > 0) {
    Poly y = gcd(w, g);
    Poly fac = divmod(w, y).first;
    if (fac.degree() > 0)
      out.emplace_back(monic(fac), mult * i);
    w = y;
    g = divmod(g, y).first;
    ++i;
  }
  if (g.degree() > 0)
    squarefree_decompose(root_of_frobenius_part(g), mult * r, out);
}

// random polynomial of degree < n from the deterministic stream
inline Poly draw_poly(const Field& F, int n, DetRng& rng) {
  std::vector<elt> c(size_t(n), 0);
  for (auto& x : c)
    x = elt(rng.below(F.size));
  return Poly(F, std::move(c));
}

// split a product of distinct irreducibles of equal degree d
inline void equal_degree_split(const Poly& f, int d, DetRng& rng, std::vector<Poly>& out) {
  const Field& F = *f.field;
  if (f.degree() == d) {
    out.push_back(monic(f));
    return;
  }
  Poly factor = Poly::zero(F);
  while (true) {
    Poly a = draw_poly(F, f.degree(), rng);
    if (a.degree() < 1)
      continue;
    Poly g = gcd(a, f);
    if (g.degree() > 0 && g.degree() < f.degree()) {
      factor = g;
      break;
    }
    Poly b;
    if (F.characteristic == 2) {
      // trace map over GF(2): a + a^2 + a^4 + ... (m*d summands)
      Poly t = Poly::zero(F), cur = pmod(a, f);
      for (uint32_t i = 0, reps = F.degree * uint32_t(d); i < reps; ++i) {
        t = t + cur;
        cur = pmod(cur * cur, f);
      }
      b = t;
    } else {
      uint64_t e = (ipow_u64(F.size, unsigned(d)) - 1) / 2;
      b = powmod(a, e, f) - Poly::constant(F, 1);
    }
    Poly g2 = gcd(b, f);
    if (g2.degree() > 0 && g2.degree() < f.degree()) {
      factor = g2;
      break;
    }
  }
  equal_degree_split(factor, d, rng, out);
  equal_degree_split(divmod(f, factor).first, d, rng, out);
}

}  // namespace detail

// factor f into monic irreducibles with multiplicities, deterministically ordered
inline std::vector<std::pair<Poly, unsigned>> factor_poly(const Poly& f) {
  require(!f.is_zero(), "cannot factor the zero polynomial");
  const Field& F = *f.field;
  std::vector<std::pair<Poly, unsigned>> result;
  if (f.degree() == 0)
    return result;
  DetRng rng(detail::poly_seed(f));

  std::vector<std::pair<Poly, unsigned>> squarefree;
  detail::squarefree_decompose(monic(f), 1, squarefree);

  for (auto& [sf, mult] : squarefree) {
    // distinct-degree: peel gcd(x^{q^d} - x, rest)
    Poly rest = sf;
    Poly xq = Poly::x(F);
    for (int d = 1; rest.degree() > 0; ++d) {
      if (2 * d > rest.degree()) {
        result.emplace_back(monic(rest), mult);
        break;
      }
      xq = powmod(xq, F.size, rest);
      Poly g = gcd(xq - Poly::x(F), rest);
      if (g.degree() > 0) {
        std::vector<Poly> irr;
        detail::equal_degree_split(g, d, rng, irr);
        for (auto& p : irr)
          result.emplace_back(p, mult);
        rest = divmod(rest, g).first;
        xq = pmod(xq, rest);
      }
    }
  }
  std::sort(result.begin(), result.end(), [](const auto& a, const auto& b) {
    if (!(a.first == b.first))
      return a.first < b.first;
    return a.second < b.second;
  });
  return result;
}

// least e >= 1 with q^e = 1 mod ell
inline uint32_t mult_order(uint64_t q, uint64_t ell) {
  require(ell >= 2, "modulus must be at least 2");
  require(q % ell != 0, "q and ell must be coprime");
  uint64_t x = q % ell;
  uint32_t e = 1;
  uint64_t cur = x;
  while (cur != 1) {
    cur = cur * x % ell;
    ++e;
    check(e <= ell, "multiplicative order runaway");
  }
  return e;
}

// ---------------------------------------------------------------------------
// Dense matrices over a Field: just enough linear algebra for the block work.
// ---------------------------------------------------------------------------

struct FMatrix {
  const Field* field = nullptr;
  size_t rows = 0, cols = 0;
  std::vector<elt> a;

  FMatrix() = default;
  FMatrix(const Field& f, size_t r, size_t c) : field(&f), rows(r), cols(c), a(r * c, 0) {}
  elt& at(size_t i, size_t j) { return a[i * cols + j]; }
  elt at(size_t i, size_t j) const { return a[i * cols + j]; }

  static FMatrix identity(const Field& f, size_t n) {
    FMatrix m(f, n, n);
    for (size_t i = 0; i < n; ++i)
      m.at(i, i) = 1;
    return m;
  }
};

inline FMatrix matmul(const FMatrix& x, const FMatrix& y) {
  const Field& F = *x.field;
  require(x.cols == y.rows, "matrix shape mismatch");
  FMatrix z(F, x.rows, y.cols);
  for (size_t i = 0; i < x.rows; ++i)
    for (size_t k = 0; k < x.cols; ++k) {
      elt v = x.at(i, k);
      if (!v)
        continue;
      for (size_t j = 0; j < y.cols; ++j)
        z.at(i, j) = F.add(z.at(i, j), F.mul(v, y.at(k, j)));
    }
  return z;
}

// reduced row echelon form in place; returns pivot column indices
inline std::vector<size_t> rref(FMatrix& m) {
  const Field& F = *m.field;
  std::vector<size_t> pivots;
  size_t row = 0;
  for (size_t col = 0; col < m.cols && row < m.rows; ++col) {
    size_t sel = row;
    while (sel < m.rows && m.at(sel, col) == 0)
      ++sel;
    if (sel == m.rows)
      continue;
    for (size_t j = 0; j < m.cols; ++j)
      std::swap(m.at(sel, j), m.at(row, j));
    elt inv = F.inv(m.at(row, col));
    for (size_t j = 0; j < m.cols; ++j)
      m.at(row, j) = F.mul(m.at(row, j), inv);
    for (size_t i = 0; i < m.rows; ++i)
      if (i != row && m.at(i, col) != 0) {
        elt f = m.at(i, col);
        for (size_t j = 0; j < m.cols; ++j)
          m.at(i, j) = F.sub(m.at(i, j), F.mul(f, m.at(row, j)));
      }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

// basis of the right null space of m, as rows
inline std::vector<std::vector<elt>> kernel_basis(FMatrix m) {
  const Field& F = *m.field;
  std::vector<size_t> pivots = rref(m);
  std::vector<bool> is_pivot(m.cols, false);
  for (size_t p : pivots)
    is_pivot[p] = true;
  std::vector<std::vector<elt>> basis;
  for (size_t free_col = 0; free_col < m.cols; ++free_col) {
    if (is_pivot[free_col])
      continue;
    std::vector<elt> v(m.cols, 0);
    v[free_col] = 1;
    for (size_t r = 0; r < pivots.size(); ++r)
      v[pivots[r]] = F.neg(m.at(r, free_col));
    basis.push_back(std::move(v));
  }
  return basis;
}

// monic least-degree annihilating polynomial of a square matrix (Krylov + lcm)
inline Poly min_poly_of_operator(const FMatrix& m) {
  const Field& F = *m.field;
  require(m.rows == m.cols, "operator must be square");
  size_t n = m.rows;
  if (n == 0)
    return Poly::x(F);
  Poly result = Poly::constant(F, 1);
  for (size_t start = 0; start < n; ++start) {
    // Krylov sequence v, Mv, M^2 v, ... for v = e_start
    std::vector<std::vector<elt>> kry;
    std::vector<elt> v(n, 0);
    v[start] = 1;
    kry.push_back(v);
    for (size_t step = 0; step <= n; ++step) {
      std::vector<elt> w(n, 0);
      for (size_t i = 0; i < n; ++i) {
        elt acc = 0;
        for (size_t j = 0; j < n; ++j)
          acc = F.add(acc, F.mul(m.at(i, j), kry.back()[j]));
        w[i] = acc;
      }
      // find least dependency among kry[0..], w
      FMatrix sys(F, n, kry.size());
      for (size_t jc = 0; jc < kry.size(); ++jc)
        for (size_t i = 0; i < n; ++i)
          sys.at(i, jc) = kry[jc][i];
      // solve sys * x = w
      FMatrix aug(F, n, kry.size() + 1);
      for (size_t i = 0; i < n; ++i) {
        for (size_t jc = 0; jc < kry.size(); ++jc)
          aug.at(i, jc) = kry[jc][i];
        aug.at(i, kry.size()) = w[i];
      }
      FMatrix probe = aug;
      std::vector<size_t> piv = rref(probe);
      bool solvable = true;
      for (size_t p : piv)
        if (p == kry.size())
          solvable = false;
      if (solvable) {
        // w = sum coeff_j kry[j]: local minimal polynomial ends here
        std::vector<elt> coeffs(kry.size(), 0);
        for (size_t r = 0; r < piv.size(); ++r)
          coeffs[piv[r]] = probe.at(r, kry.size());
        std::vector<elt> pc(kry.size() + 1, 0);
        pc[kry.size()] = 1;
        for (size_t j = 0; j < kry.size(); ++j)
          pc[j] = F.neg(coeffs[j]);
        Poly local(F, std::move(pc));
        Poly g = gcd(result, local);
        result = divmod(result * local, g).first;
        break;
      }
      kry.push_back(w);
    }
    if (result.degree() >= int(n))
      break;
  }
  return monic(result);
}

// eigenvalue list of a diagonalizable operator via its (squarefree) min poly
inline std::vector<elt> roots_of_split_poly(const Poly& f) {
  std::vector<elt> roots;
  for (auto& [p, mult] : factor_poly(f)) {
    check(p.degree() == 1, "polynomial does not split into linear factors over " + f.field->describe());
    // p = x + c  =>  root -c
    roots.push_back(f.field->neg(p.coeff(0)));
    (void)mult;
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

// ---------------------------------------------------------------------------
// Relative extensions: canonical degree-e modulus over an arbitrary Field,
// used by the companion-matrix embedding of GL_a(q^e) into GL_{ae}(q).
// ---------------------------------------------------------------------------

inline bool is_irreducible(const Poly& f) {
  const Field& F = *f.field;
  int m = f.degree();
  if (m <= 0)
    return false;
  if (m == 1)
    return true;
  Poly xq = Poly::x(F);
  for (int d = 1; d <= m; ++d) {
    xq = powmod(xq, F.size, f);
    Poly diff = xq - Poly::x(F);
    if (d < m && m % d == 0) {
      if (gcd(f, diff).degree() != 0)
        return false;
    }
    if (d == m && !diff.is_zero())
      return false;
  }
  return true;
}

// least (by coefficient encoding) monic irreducible of degree e over F
inline Poly canonical_extension_modulus(const Field& F, uint32_t e) {
  require(e >= 1, "extension degree must be positive");
  uint64_t count = 1;
  for (uint32_t i = 0; i < e; ++i) {
    count *= F.size;
    require(count <= (1ull << 30), "extension scan too large");
  }
  for (uint64_t code = 0; code < count; ++code) {
    std::vector<elt> c(e + 1, 0);
    uint64_t t = code;
    for (uint32_t i = 0; i < e; ++i) {
      c[i] = elt(t % F.size);
      t /= F.size;
    }
    c[e] = 1;
    Poly f(F, std::move(c));
    if (is_irreducible(f))
      return f;
  }
  check(false, "no irreducible extension modulus found (impossible)");
  return Poly::zero(F);
}

// least element of GF(q)[x]/(mod) of full multiplicative order q^e - 1
inline Poly primitive_element_mod(const Poly& mod) {
  const Field& F = *mod.field;
  uint32_t e = uint32_t(mod.degree());
  uint64_t group = ipow_u64(F.size, e) - 1;
  std::vector<uint64_t> pf = prime_factors(group);
  uint64_t count = group + 1;
  for (uint64_t code = 1; code < count; ++code) {
    std::vector<elt> c(e, 0);
    uint64_t t = code;
    for (uint32_t i = 0; i < e; ++i) {
      c[i] = elt(t % F.size);
      t /= F.size;
    }
    Poly cand(F, std::move(c));
    bool primitive = true;
    for (uint64_t p : pf)
      if (powmod(cand, group / p, mod) == Poly::constant(F, 1)) {
        primitive = false;
        break;
      }
    if (primitive)
      return cand;
  }
  check(false, "no primitive element found (impossible)");
  return Poly::zero(F);
}

// embedding GF(r^m) -> GF(r^M) for m | M: sends the canonical generator (the
// residue of x) to the least root of the small modulus in the big field
inline std::vector<elt> field_embedding(const Field& small, const Field& big) {
  require(small.characteristic == big.characteristic && big.degree % small.degree == 0,
          "no embedding between these fields");
  // find least root of small.modulus in big
  elt root = 0;
  bool found = false;
  for (uint64_t x = 0; x < big.size; ++x) {
    elt acc = 0;
    for (size_t i = small.modulus.size(); i-- > 0;)
      acc = big.add(big.mul(acc, elt(x)), big.from_int(small.modulus[i]));
    if (acc == 0) {
      root = elt(x);
      found = true;
      break;
    }
  }
  check(found, "modulus has no root in the larger field");
  std::vector<elt> img(small.size);
  for (uint64_t v = 0; v < small.size; ++v) {
    std::vector<uint32_t> d = small.digits(elt(v));
    elt acc = 0;
    for (size_t i = d.size(); i-- > 0;)
      acc = big.add(big.mul(acc, root), big.from_int(d[i]));
    img[v] = acc;
  }
  return img;
}

}  // namespace gf
}  // namespace brpairs
