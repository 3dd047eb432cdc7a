#pragma once

// Poset topology: order complexes, integer homology via Smith normal form,
// contractibility certificates, and Quillen-fiber checking.
//
// Homotopy equivalence is not decidable in general; the standard of evidence
// used throughout is (a) an exact fiber certificate per target element, which
// is a proof via Quillen's Theorem A, plus (b) homology equality as an
// independent cross-check. All homology is computed over the integers with
// exact Smith normal forms; every SNF is re-verified by undoing the recorded
// row/column operations and comparing against the input matrix.

#include <algorithm>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "common.hpp"

namespace brpairs {
namespace topo {

// --- bit matrix for order relations ---

struct BitMatrix {
  size_t n = 0, words = 0;
  std::vector<uint64_t> bits;

  BitMatrix() = default;
  explicit BitMatrix(size_t size) : n(size), words((size + 63) / 64), bits(size * ((size + 63) / 64), 0) {}
  bool get(size_t i, size_t j) const { return (bits[i * words + j / 64] >> (j % 64)) & 1; }
  void set(size_t i, size_t j, bool v = true) {
    uint64_t& w = bits[i * words + j / 64];
    if (v)
      w |= 1ull << (j % 64);
    else
      w &= ~(1ull << (j % 64));
  }
  // row(i) subset of row(j)?
  bool row_subset(size_t i, size_t j) const {
    for (size_t w = 0; w < words; ++w)
      if (bits[i * words + w] & ~bits[j * words + w])
        return false;
    return true;
  }
  bool operator==(const BitMatrix& o) const { return n == o.n && bits == o.bits; }
};

struct Poset {
  std::vector<std::string> labels;
  BitMatrix leq;  // leq(i,j): element i is below element j
  // group action: one vertex permutation per acting generator (may be empty)
  std::vector<std::vector<uint32_t>> action;

  size_t size() const { return labels.size(); }
  bool le(size_t i, size_t j) const { return leq.get(i, j); }
  bool lt(size_t i, size_t j) const { return i != j && leq.get(i, j); }

  void validate() const {
    size_t n = size();
    for (size_t i = 0; i < n; ++i) {
      check(le(i, i), "order not reflexive at " + labels[i]);
      for (size_t j = 0; j < n; ++j)
        if (i != j && le(i, j)) {
          check(!le(j, i), "order not antisymmetric at " + labels[i] + ", " + labels[j]);
          // row k is the upper set of k, so i <= j forces row(j) inside row(i)
          check(leq.row_subset(j, i), "order not transitive through " + labels[j]);
        }
    }
    for (const auto& perm : action) {
      check(perm.size() == n, "action permutation has wrong size");
      for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
          check(le(i, j) == le(perm[i], perm[j]), "action does not preserve the order");
    }
  }
};

inline Poset opposite(const Poset& p) {
  Poset q;
  q.labels = p.labels;
  q.action = p.action;
  q.leq = BitMatrix(p.size());
  for (size_t i = 0; i < p.size(); ++i)
    for (size_t j = 0; j < p.size(); ++j)
      if (p.le(i, j))
        q.leq.set(j, i);
  return q;
}

// induced subposet on the given vertices (which keep their labels); the
// returned index map sends local indices to parent indices
inline std::pair<Poset, std::vector<uint32_t>> induced_subposet(const Poset& p,
                                                                std::vector<uint32_t> verts) {
  std::sort(verts.begin(), verts.end());
  Poset q;
  q.leq = BitMatrix(verts.size());
  q.labels.reserve(verts.size());
  for (uint32_t v : verts)
    q.labels.push_back(p.labels[v]);
  for (size_t i = 0; i < verts.size(); ++i)
    for (size_t j = 0; j < verts.size(); ++j)
      if (p.le(verts[i], verts[j]))
        q.leq.set(i, j);
  return {std::move(q), std::move(verts)};
}

// --- simplicial complexes ---

struct SimplicialComplex {
  // simplices[d]: sorted list of sorted (d+1)-vertex tuples
  std::vector<std::vector<std::vector<uint32_t>>> simplices;

  int dim() const { return int(simplices.size()) - 1; }
  size_t count(int d) const {
    return (d >= 0 && d < int(simplices.size())) ? simplices[d].size() : 0;
  }
  size_t total() const {
    size_t t = 0;
    for (auto& level : simplices)
      t += level.size();
    return t;
  }
  int64_t euler_characteristic() const {
    int64_t chi = 0;
    for (size_t d = 0; d < simplices.size(); ++d)
      chi += (d % 2 ? -1 : 1) * int64_t(simplices[d].size());
    return chi;
  }
  bool operator==(const SimplicialComplex& o) const { return simplices == o.simplices; }
};

// simplices are the strictly increasing chains of the poset
inline SimplicialComplex order_complex(const Poset& p) {
  SimplicialComplex c;
  size_t n = p.size();
  if (n == 0)
    return c;
  std::vector<std::vector<uint32_t>> chains;
  for (uint32_t v = 0; v < n; ++v)
    chains.push_back({v});
  while (!chains.empty()) {
    for (auto& ch : chains)
      std::sort(ch.begin(), ch.end());
    std::sort(chains.begin(), chains.end());
    c.simplices.push_back(chains);
    std::vector<std::vector<uint32_t>> longer;
    for (const auto& ch : chains) {
      // the poset-maximal element of the chain is unique; find it
      uint32_t top = ch[0];
      for (uint32_t v : ch)
        if (p.lt(top, v))
          top = v;
      for (uint32_t w = 0; w < n; ++w)
        if (p.lt(top, w)) {
          std::vector<uint32_t> ext = ch;
          ext.push_back(w);
          longer.push_back(std::move(ext));
        }
    }
    chains = std::move(longer);
  }
  return c;
}

// full simplex on the label set and all faces (test/build helper)
inline SimplicialComplex full_simplex_complex(uint32_t nverts, bool include_top = true) {
  SimplicialComplex c;
  for (uint32_t d = 0; d < nverts; ++d) {
    if (!include_top && d + 1 == nverts)
      break;
    std::vector<std::vector<uint32_t>> level;
    std::vector<uint32_t> idx(d + 1);
    // enumerate (d+1)-subsets of {0..nverts-1}
    for (uint32_t i = 0; i <= d; ++i)
      idx[i] = i;
    while (true) {
      level.push_back(idx);
      int pos = int(d);
      while (pos >= 0 && idx[pos] == nverts - (d + 1 - pos))
        --pos;
      if (pos < 0)
        break;
      ++idx[pos];
      for (uint32_t i = pos + 1; i <= d; ++i)
        idx[i] = idx[i - 1] + 1;
    }
    c.simplices.push_back(std::move(level));
  }
  return c;
}

// --- exact integer matrices and Smith normal form ---

struct IntMat {
  size_t rows = 0, cols = 0;
  std::vector<int64_t> a;
  IntMat() = default;
  IntMat(size_t r, size_t c) : rows(r), cols(c), a(r * c, 0) {}
  int64_t& at(size_t i, size_t j) { return a[i * cols + j]; }
  int64_t at(size_t i, size_t j) const { return a[i * cols + j]; }
  bool operator==(const IntMat& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
};

namespace detail {

inline int64_t checked_add(int64_t x, int64_t y) {
  int64_t r;
  if (__builtin_add_overflow(x, y, &r))
    throw Error("integer overflow in exact linear algebra");
  return r;
}
inline int64_t checked_mul(int64_t x, int64_t y) {
  int64_t r;
  if (__builtin_mul_overflow(x, y, &r))
    throw Error("integer overflow in exact linear algebra");
  return r;
}

struct ElemOp {
  bool row;       // row or column op
  uint8_t kind;   // 0 swap(i,j), 1 negate(i), 2 add: i += c * j
  uint32_t i, j;
  int64_t c;
};

struct OpJournal {
  std::vector<ElemOp> ops;
  void swap_rows(IntMat& m, size_t i, size_t j) {
    if (i == j)
      return;
    for (size_t k = 0; k < m.cols; ++k)
      std::swap(m.at(i, k), m.at(j, k));
    ops.push_back({true, 0, uint32_t(i), uint32_t(j), 0});
  }
  void swap_cols(IntMat& m, size_t i, size_t j) {
    if (i == j)
      return;
    for (size_t k = 0; k < m.rows; ++k)
      std::swap(m.at(k, i), m.at(k, j));
    ops.push_back({false, 0, uint32_t(i), uint32_t(j), 0});
  }
  void negate_row(IntMat& m, size_t i) {
    for (size_t k = 0; k < m.cols; ++k)
      m.at(i, k) = -m.at(i, k);
    ops.push_back({true, 1, uint32_t(i), uint32_t(i), 0});
  }
  void add_row(IntMat& m, size_t i, size_t j, int64_t c) {  // row i += c * row j
    if (c == 0)
      return;
    for (size_t k = 0; k < m.cols; ++k)
      m.at(i, k) = checked_add(m.at(i, k), checked_mul(c, m.at(j, k)));
    ops.push_back({true, 2, uint32_t(i), uint32_t(j), c});
  }
  void add_col(IntMat& m, size_t i, size_t j, int64_t c) {  // col i += c * col j
    if (c == 0)
      return;
    for (size_t k = 0; k < m.rows; ++k)
      m.at(k, i) = checked_add(m.at(k, i), checked_mul(c, m.at(k, j)));
    ops.push_back({false, 2, uint32_t(i), uint32_t(j), c});
  }
  // undo everything on a copy of the reduced matrix; must reproduce the input
  void verify(const IntMat& original, const IntMat& reduced) const {
    IntMat m = reduced;
    for (size_t t = ops.size(); t-- > 0;) {
      const ElemOp& op = ops[t];
      if (op.kind == 0) {
        if (op.row)
          for (size_t k = 0; k < m.cols; ++k)
            std::swap(m.at(op.i, k), m.at(op.j, k));
        else
          for (size_t k = 0; k < m.rows; ++k)
            std::swap(m.at(k, op.i), m.at(k, op.j));
      } else if (op.kind == 1) {
        if (op.row)
          for (size_t k = 0; k < m.cols; ++k)
            m.at(op.i, k) = -m.at(op.i, k);
        else
          for (size_t k = 0; k < m.rows; ++k)
            m.at(k, op.i) = -m.at(k, op.i);
      } else {
        if (op.row)
          for (size_t k = 0; k < m.cols; ++k)
            m.at(op.i, k) = checked_add(m.at(op.i, k), checked_mul(-op.c, m.at(op.j, k)));
        else
          for (size_t k = 0; k < m.rows; ++k)
            m.at(k, op.i) = checked_add(m.at(k, op.i), checked_mul(-op.c, m.at(k, op.j)));
      }
    }
    check(m == original, "Smith normal form transform failed re-multiplication identity");
  }
};

}  // namespace detail

struct SnfResult {
  std::vector<int64_t> diag;  // positive, each dividing the next
  size_t rank = 0;
};

// Smith normal form with full pivoting on the smallest nonzero entry: the
// pivot is re-selected over the whole remaining block after every reduction
// sweep, which keeps entry growth tame. The transform is journaled and
// verified against the input on every call.
inline SnfResult smith_normal_form(const IntMat& input) {
  IntMat m = input;
  detail::OpJournal journal;
  size_t r = 0, nmin = std::min(m.rows, m.cols);
  while (r < nmin) {
    bool done = false;
    while (!done) {
      // smallest |entry| in the remaining block, +-1 exits early
      size_t pi = SIZE_MAX, pj = SIZE_MAX;
      int64_t best = 0;
      for (size_t i = r; i < m.rows && best != 1; ++i)
        for (size_t j = r; j < m.cols; ++j) {
          int64_t v = m.at(i, j) < 0 ? -m.at(i, j) : m.at(i, j);
          if (v != 0 && (best == 0 || v < best)) {
            best = v;
            pi = i;
            pj = j;
            if (best == 1)
              break;
          }
        }
      if (pi == SIZE_MAX) {
        done = true;
        break;  // the remaining block is zero
      }
      journal.swap_rows(m, r, pi);
      journal.swap_cols(m, r, pj);
      // one reduction sweep; any nonzero remainder strictly shrinks the
      // minimum, so the outer loop terminates
      bool clean = true;
      for (size_t i = r + 1; i < m.rows; ++i)
        if (m.at(i, r) != 0) {
          journal.add_row(m, i, r, -(m.at(i, r) / m.at(r, r)));
          if (m.at(i, r) != 0)
            clean = false;
        }
      for (size_t j = r + 1; j < m.cols; ++j)
        if (m.at(r, j) != 0) {
          journal.add_col(m, j, r, -(m.at(r, j) / m.at(r, r)));
          if (m.at(r, j) != 0)
            clean = false;
        }
      if (!clean)
        continue;
      // divisibility: pull in any entry the pivot does not divide yet
      int64_t piv = m.at(r, r);
      if (piv != 1 && piv != -1)
        for (size_t i = r + 1; i < m.rows && clean; ++i)
          for (size_t j = r + 1; j < m.cols && clean; ++j)
            if (m.at(i, j) % piv != 0) {
              journal.add_row(m, r, i, 1);
              clean = false;
            }
      done = clean;
    }
    if (m.at(r, r) == 0)
      break;  // nothing left
    if (m.at(r, r) < 0)
      journal.negate_row(m, r);
    ++r;
  }
  journal.verify(input, m);

  SnfResult res;
  res.rank = r;
  for (size_t i = 0; i < r; ++i)
    res.diag.push_back(m.at(i, i));
  for (size_t i = 0; i + 1 < res.diag.size(); ++i)
    check(res.diag[i + 1] % res.diag[i] == 0, "Smith diagonal lost the divisibility chain");
  return res;
}

// --- homology ---

struct Homology {
  bool reduced = false;
  int64_t betti_neg1 = 0;  // only the empty complex has reduced homology here
  std::vector<int64_t> betti;
  std::vector<std::vector<int64_t>> torsion;

  bool operator==(const Homology& o) const {
    return reduced == o.reduced && betti_neg1 == o.betti_neg1 && betti == o.betti &&
           torsion == o.torsion;
  }
  bool all_zero() const {
    if (betti_neg1)
      return false;
    for (int64_t b : betti)
      if (b)
        return false;
    for (auto& t : torsion)
      if (!t.empty())
        return false;
    return true;
  }
  std::string to_string() const {
    std::ostringstream os;
    os << (reduced ? "reduced " : "") << "betti=[";
    if (betti_neg1)
      os << "deg-1:" << betti_neg1 << (betti.empty() ? "" : ",");
    for (size_t i = 0; i < betti.size(); ++i)
      os << (i ? "," : "") << betti[i];
    os << "] torsion=[";
    for (size_t i = 0; i < torsion.size(); ++i) {
      os << (i ? ",[" : "[");
      for (size_t j = 0; j < torsion[i].size(); ++j)
        os << (j ? "," : "") << torsion[i][j];
      os << "]";
    }
    os << "]";
    return os.str();
  }
};

// trailing zero degrees carry no information; strip them so that equal
// homology compares equal regardless of the ambient complex dimension
inline void normalize_homology(Homology& h) {
  while (!h.betti.empty() && h.betti.back() == 0 &&
         (h.torsion.size() < h.betti.size() || h.torsion[h.betti.size() - 1].empty()))
    h.betti.pop_back();
  while (h.torsion.size() > h.betti.size()) {
    check(h.torsion.back().empty(), "torsion above the last nonzero degree");
    h.torsion.pop_back();
  }
}

inline IntMat boundary_matrix(const SimplicialComplex& c, int k) {
  // rows: (k-1)-simplices, cols: k-simplices
  const auto& lower = c.simplices[k - 1];
  const auto& upper = c.simplices[k];
  IntMat m(lower.size(), upper.size());
  auto find_lower = [&](const std::vector<uint32_t>& face) {
    auto it = std::lower_bound(lower.begin(), lower.end(), face);
    check(it != lower.end() && *it == face, "complex is not closed under faces");
    return size_t(it - lower.begin());
  };
  for (size_t j = 0; j < upper.size(); ++j) {
    const auto& simplex = upper[j];
    int sign = 1;
    for (size_t drop = 0; drop < simplex.size(); ++drop) {
      std::vector<uint32_t> face;
      face.reserve(simplex.size() - 1);
      for (size_t i = 0; i < simplex.size(); ++i)
        if (i != drop)
          face.push_back(simplex[i]);
      m.at(find_lower(face), j) = sign;
      sign = -sign;
    }
  }
  return m;
}

inline Homology homology(const SimplicialComplex& c, bool reduced) {
  Homology h;
  h.reduced = reduced;
  int top = c.dim();
  if (top < 0) {
    h.betti_neg1 = reduced ? 1 : 0;
    return h;
  }

  std::vector<IntMat> boundaries(top + 1);
  for (int k = 1; k <= top; ++k)
    boundaries[k] = boundary_matrix(c, k);
  // boundary-of-boundary vanishes
  for (int k = 2; k <= top; ++k) {
    const IntMat& a = boundaries[k - 1];
    const IntMat& b = boundaries[k];
    for (size_t i = 0; i < a.rows; ++i)
      for (size_t j = 0; j < b.cols; ++j) {
        int64_t acc = 0;
        for (size_t t = 0; t < a.cols; ++t)
          acc = detail::checked_add(acc, detail::checked_mul(a.at(i, t), b.at(t, j)));
        check(acc == 0, "boundary of boundary is nonzero");
      }
  }

  std::vector<size_t> rank(top + 2, 0);
  std::vector<std::vector<int64_t>> tor(top + 1);
  for (int k = 1; k <= top; ++k) {
    SnfResult s = smith_normal_form(boundaries[k]);
    rank[k] = s.rank;
    for (int64_t d : s.diag)
      if (d > 1)
        tor[k - 1].push_back(d);
  }
  size_t rank0 = 0;  // augmentation rank
  if (reduced && c.count(0) > 0)
    rank0 = 1;

  h.betti.resize(top + 1);
  h.torsion = std::move(tor);
  for (int k = 0; k <= top; ++k) {
    int64_t nk = int64_t(c.count(k));
    int64_t rk = int64_t(k == 0 ? rank0 : rank[k]);
    int64_t rk1 = int64_t(k + 1 <= top ? rank[k + 1] : 0);
    h.betti[k] = nk - rk - rk1;
    check(h.betti[k] >= 0, "negative Betti number (rank accounting bug)");
  }

  // Euler characteristic consistency
  int64_t chi_simplices = c.euler_characteristic();
  int64_t chi_betti = 0;
  for (int k = 0; k <= top; ++k)
    chi_betti += (k % 2 ? -1 : 1) * h.betti[k];
  if (reduced)
    check(chi_betti - h.betti_neg1 == chi_simplices - 1, "Euler characteristic mismatch");
  else
    check(chi_betti == chi_simplices, "Euler characteristic mismatch");

  normalize_homology(h);
  return h;
}

// --- contractibility certificates ---

struct ContractionCertificate {
  enum class Kind { minimum, maximum, cone, conical };
  Kind kind = Kind::minimum;
  uint32_t witness = 0;                // x0
  std::vector<uint32_t> self_map;      // j, for conical certificates

  std::string kind_name() const {
    switch (kind) {
      case Kind::minimum: return "minimum";
      case Kind::maximum: return "maximum";
      case Kind::cone: return "cone";
      default: return "conical";
    }
  }
};

inline std::optional<ContractionCertificate> try_minimum(const Poset& p) {
  for (uint32_t m = 0; m < p.size(); ++m) {
    bool ok = true;
    for (uint32_t x = 0; x < p.size() && ok; ++x)
      ok = p.le(m, x);
    if (ok)
      return ContractionCertificate{ContractionCertificate::Kind::minimum, m, {}};
  }
  return std::nullopt;
}

inline std::optional<ContractionCertificate> try_maximum(const Poset& p) {
  for (uint32_t m = 0; m < p.size(); ++m) {
    bool ok = true;
    for (uint32_t x = 0; x < p.size() && ok; ++x)
      ok = p.le(x, m);
    if (ok)
      return ContractionCertificate{ContractionCertificate::Kind::maximum, m, {}};
  }
  return std::nullopt;
}

// an element comparable with everything cones the complex
inline std::optional<ContractionCertificate> try_cone(const Poset& p) {
  for (uint32_t m = 0; m < p.size(); ++m) {
    bool ok = true;
    for (uint32_t x = 0; x < p.size() && ok; ++x)
      ok = p.le(m, x) || p.le(x, m);
    if (ok)
      return ContractionCertificate{ContractionCertificate::Kind::cone, m, {}};
  }
  return std::nullopt;
}

// x <= j(x) >= x0 with j monotone; failure reports a witness
inline bool check_conical(const Poset& p, uint32_t x0, const std::vector<uint32_t>& j,
                          std::string* err = nullptr) {
  auto bad = [&](const std::string& msg) {
    if (err)
      *err = msg;
    return false;
  };
  if (j.size() != p.size())
    return bad("self-map is not total");
  if (x0 >= p.size())
    return bad("apex is not a poset element");
  for (uint32_t x = 0; x < p.size(); ++x) {
    if (!p.le(x, j[x]))
      return bad("x <= j(x) fails at " + p.labels[x]);
    if (!p.le(x0, j[x]))
      return bad("x0 <= j(x) fails at " + p.labels[x]);
  }
  for (uint32_t x = 0; x < p.size(); ++x)
    for (uint32_t y = 0; y < p.size(); ++y)
      if (p.le(x, y) && !p.le(j[x], j[y]))
        return bad("j not monotone at " + p.labels[x] + " <= " + p.labels[y]);
  return true;
}

inline std::optional<ContractionCertificate> conical_certificate(const Poset& p, uint32_t x0,
                                                                 const std::vector<uint32_t>& j,
                                                                 std::string* err = nullptr) {
  if (!check_conical(p, x0, j, err))
    return std::nullopt;
  return ContractionCertificate{ContractionCertificate::Kind::conical, x0, j};
}

// conical certificate with j(x) = the least upper bound of {x, x0}, when that
// bound exists uniquely for every x
inline std::optional<ContractionCertificate> conical_via_join(const Poset& p, uint32_t x0,
                                                              std::string* err = nullptr) {
  std::vector<uint32_t> j(p.size());
  for (uint32_t x = 0; x < p.size(); ++x) {
    std::vector<uint32_t> upper;
    for (uint32_t y = 0; y < p.size(); ++y)
      if (p.le(x, y) && p.le(x0, y))
        upper.push_back(y);
    uint32_t lub = UINT32_MAX;
    for (uint32_t y : upper) {
      bool least = true;
      for (uint32_t z : upper)
        if (!p.le(y, z)) {
          least = false;
          break;
        }
      if (least) {
        lub = y;
        break;
      }
    }
    if (lub == UINT32_MAX) {
      if (err)
        *err = "no least upper bound with the apex at " + p.labels[x];
      return std::nullopt;
    }
    j[x] = lub;
  }
  return conical_certificate(p, x0, j, err);
}

// invariance of a certificate under vertex permutations (stabilizer action)
inline bool certificate_invariant(const ContractionCertificate& cert,
                                  const std::vector<std::vector<uint32_t>>& perms,
                                  std::string* err = nullptr) {
  for (const auto& s : perms) {
    if (s[cert.witness] != cert.witness) {
      if (err)
        *err = "witness moved by the stabilizer action";
      return false;
    }
    if (cert.kind == ContractionCertificate::Kind::conical)
      for (uint32_t x = 0; x < s.size(); ++x)
        if (cert.self_map[s[x]] != s[cert.self_map[x]]) {
          if (err)
            *err = "self-map is not stabilizer-equivariant";
          return false;
        }
  }
  return true;
}

// --- Quillen fiber checking ---

enum class FiberDirection { up, down };  // x with f(x) >= y, or f(x) <= y

struct FiberEntry {
  uint32_t target = 0;
  size_t fiber_size = 0;
  bool certified = false;
  std::string certificate;  // kind plus witness label
  std::string detail;       // failure reason when not certified
};

struct FiberReport {
  bool pass = false;
  bool monotone = true;
  bool equivariant = true;
  std::string failure;
  std::vector<FiberEntry> entries;
};

// Supplies conical data (apex, self-map) for the fiber over a given target:
// arguments are the target index, the fiber poset, and local->source indices.
using ConicalProvider = std::function<std::optional<std::pair<uint32_t, std::vector<uint32_t>>>(
    uint32_t, const Poset&, const std::vector<uint32_t>&)>;

// Supplies the stabilizer action on a fiber as local vertex permutations.
using FiberActionProvider =
    std::function<std::vector<std::vector<uint32_t>>(uint32_t, const std::vector<uint32_t>&)>;

inline FiberReport quillen_fiber_check(const Poset& src, const Poset& tgt,
                                       const std::vector<uint32_t>& f, FiberDirection dir,
                                       const ConicalProvider& conical = nullptr,
                                       const FiberActionProvider& fiber_action = nullptr,
                                       size_t soundness_cutoff = 200) {
  require(f.size() == src.size(), "map is not total on the source");
  FiberReport report;
  // monotone?
  for (uint32_t x = 0; x < src.size(); ++x)
    for (uint32_t y = 0; y < src.size(); ++y)
      if (src.le(x, y) && !tgt.le(f[x], f[y])) {
        report.monotone = false;
        report.failure = "map not monotone at " + src.labels[x] + " <= " + src.labels[y];
        return report;
      }
  // equivariant? (only when both posets carry an action over the same generators)
  if (!src.action.empty() && src.action.size() == tgt.action.size()) {
    for (size_t g = 0; g < src.action.size() && report.equivariant; ++g)
      for (uint32_t x = 0; x < src.size(); ++x)
        if (f[src.action[g][x]] != tgt.action[g][f[x]]) {
          report.equivariant = false;
          report.failure = "map not equivariant at " + src.labels[x] + " under generator " +
                           std::to_string(g);
          return report;
        }
  }

  bool all = true;
  for (uint32_t y = 0; y < tgt.size(); ++y) {
    std::vector<uint32_t> verts;
    for (uint32_t x = 0; x < src.size(); ++x) {
      bool in = dir == FiberDirection::up ? tgt.le(y, f[x]) : tgt.le(f[x], y);
      if (in)
        verts.push_back(x);
    }
    auto [fiber, ids] = induced_subposet(src, verts);
    FiberEntry entry;
    entry.target = y;
    entry.fiber_size = fiber.size();

    std::optional<ContractionCertificate> cert = try_minimum(fiber);
    if (!cert)
      cert = try_maximum(fiber);
    if (!cert && conical) {
      if (auto data = conical(y, fiber, ids)) {
        std::string err;
        cert = conical_certificate(fiber, data->first, data->second, &err);
        if (!cert)
          entry.detail = err;
      }
    }
    if (cert && fiber_action) {
      std::string err;
      std::vector<std::vector<uint32_t>> perms = fiber_action(y, ids);
      for (const auto& s : perms) {
        check(s.size() == fiber.size(), "fiber action permutation has wrong size");
        for (uint32_t a = 0; a < fiber.size(); ++a)
          for (uint32_t b = 0; b < fiber.size(); ++b)
            check(fiber.le(a, b) == fiber.le(s[a], s[b]),
                  "stabilizer action does not preserve the fiber order");
      }
      if (!certificate_invariant(*cert, perms, &err)) {
        entry.detail = err;
        cert.reset();
      }
    }
    if (cert) {
      entry.certified = true;
      entry.certificate = cert->kind_name() + " at " + fiber.labels[cert->witness];
      // soundness: a certified fiber must be acyclic
      if (fiber.size() > 0) {
        SimplicialComplex fc = order_complex(fiber);
        if (fc.total() <= soundness_cutoff)
          check(homology(fc, true).all_zero(), "certified fiber has nonzero reduced homology");
      }
    } else {
      all = false;
      if (entry.detail.empty())
        entry.detail = fiber.size() == 0 ? "empty fiber" : "no certificate found";
    }
    report.entries.push_back(std::move(entry));
  }
  report.pass = all && report.monotone && report.equivariant;
  return report;
}

// f(g.x) = g.f(x) on every generator; false with a witness otherwise
inline bool equivariance_check(const Poset& src, const Poset& tgt, const std::vector<uint32_t>& f,
                               std::string* witness = nullptr) {
  require(src.action.size() == tgt.action.size(), "acting generator lists differ");
  for (size_t g = 0; g < src.action.size(); ++g)
    for (uint32_t x = 0; x < src.size(); ++x)
      if (f[src.action[g][x]] != tgt.action[g][f[x]]) {
        if (witness)
          *witness = src.labels[x] + " under generator " + std::to_string(g);
        return false;
      }
  return true;
}

// order isomorphism along an explicit bijection
inline bool order_isomorphic_by(const Poset& src, const Poset& tgt, const std::vector<uint32_t>& f,
                                std::string* witness = nullptr) {
  if (src.size() != tgt.size())
    return false;
  std::vector<bool> hit(tgt.size(), false);
  for (uint32_t x = 0; x < src.size(); ++x) {
    if (hit[f[x]]) {
      if (witness)
        *witness = "not injective at " + src.labels[x];
      return false;
    }
    hit[f[x]] = true;
  }
  for (uint32_t x = 0; x < src.size(); ++x)
    for (uint32_t y = 0; y < src.size(); ++y)
      if (src.le(x, y) != tgt.le(f[x], f[y])) {
        if (witness)
          *witness = "order mismatch at " + src.labels[x] + ", " + src.labels[y];
        return false;
      }
  return true;
}

}  // namespace topo
}  // namespace brpairs
