#pragma once

// Group algebra kH over a finite splitting field of characteristic ell:
// class sums, central primitive (block) idempotents, the Brauer map,
// principal-block detection, and central characters of blocks.
//
// All central arithmetic runs in the class-sum basis (dimension = class
// count); dense element-coefficient vectors are expanded only when a
// computation genuinely leaves the center. Blocks are computed once per
// subgroup and memoized in a Workspace keyed by the canonical subgroup
// serialization.
//
// Block algorithm: the radical of Z(kH) is the kernel of the iterated
// ell-power map (a Frobenius-semilinear map, so its kernel is a linear
// solve after twisting coordinates); the semisimple quotient splits by
// factoring minimal polynomials of multiplication operators and forming
// the usual interpolation idempotents; each idempotent lifts through the
// radical by e <- 3e^2 - 2e^3 until it is exactly idempotent.

#include <algorithm>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "common.hpp"
#include "gf.hpp"
#include "groups.hpp"

namespace brpairs {
namespace alg {

struct SplittingContext {
  std::shared_ptr<const grp::Group> G;
  uint32_t ell = 0;
  const gf::Field* k = nullptr;
  uint64_t exponent = 1;           // exp(G)
  uint64_t exponent_ell_prime = 1; // ell'-part of exp(G)

  std::string describe() const {
    return G->spec + " at ell=" + std::to_string(ell) + " over " + k->describe();
  }
};

// minimal m with ell^m = 1 mod exp(G)_{ell'}; valid for every subgroup of G
inline SplittingContext splitting_context(std::shared_ptr<const grp::Group> G, uint32_t ell,
                                          uint64_t field_bound = gf::kDefaultFieldBound) {
  require(is_prime_u64(ell), "ell must be prime");
  SplittingContext ctx;
  ctx.G = std::move(G);
  ctx.ell = ell;
  ctx.exponent = ctx.G->exponent;
  ctx.exponent_ell_prime = coprime_part(ctx.exponent, ell);
  uint32_t m = ctx.exponent_ell_prime == 1 ? 1 : gf::mult_order(ell, ctx.exponent_ell_prime);
  ctx.k = &gf::make_field(ell, m, field_bound);
  return ctx;
}

// conjugacy data and central structure constants of one subgroup
struct SubgroupAlgebra {
  grp::Subgroup H;
  const gf::Field* k = nullptr;
  uint32_t ell = 0;

  std::vector<std::vector<uint32_t>> classes;  // global indices, identity class first
  std::vector<uint32_t> class_of_pos;          // position in H.elems -> class id
  std::vector<gf::elt> structure;              // [i*c*c + j*c + k] over the field
  size_t nclasses = 0;

  // block idempotents as class-basis coordinate vectors; principal first,
  // then lexicographic on the coordinates
  std::vector<std::vector<gf::elt>> blocks;

  uint32_t class_of_global(uint32_t g) const {
    auto it = std::lower_bound(H.elems.begin(), H.elems.end(), g);
    check(it != H.elems.end() && *it == g, "element is not in the subgroup");
    return class_of_pos[size_t(it - H.elems.begin())];
  }
  uint32_t rep(uint32_t cls) const { return classes[cls][0]; }

  // class-basis product of two central elements
  std::vector<gf::elt> mulz(const std::vector<gf::elt>& x, const std::vector<gf::elt>& y) const {
    const gf::Field& F = *k;
    size_t c = nclasses;
    std::vector<gf::elt> z(c, 0);
    for (size_t i = 0; i < c; ++i) {
      if (!x[i])
        continue;
      for (size_t j = 0; j < c; ++j) {
        if (!y[j])
          continue;
        gf::elt xy = F.mul(x[i], y[j]);
        const gf::elt* row = &structure[(i * c + j) * c];
        for (size_t t = 0; t < c; ++t)
          if (row[t])
            z[t] = F.add(z[t], F.mul(xy, row[t]));
      }
    }
    return z;
  }

  std::vector<gf::elt> identity_coords() const {
    std::vector<gf::elt> e(nclasses, 0);
    e[0] = 1;
    return e;
  }

  static bool is_zero(const std::vector<gf::elt>& v) {
    for (gf::elt x : v)
      if (x)
        return false;
    return true;
  }

  gf::elt augmentation(const std::vector<gf::elt>& coords) const {
    const gf::Field& F = *k;
    gf::elt a = 0;
    for (size_t i = 0; i < nclasses; ++i)
      a = F.add(a, F.mul(coords[i], F.from_int(int64_t(classes[i].size()))));
    return a;
  }

  // dense element-coefficient vector parallel to H.elems
  std::vector<gf::elt> expand(const std::vector<gf::elt>& coords) const {
    std::vector<gf::elt> v(H.elems.size());
    for (size_t p = 0; p < v.size(); ++p)
      v[p] = coords[class_of_pos[p]];
    return v;
  }

  size_t principal_block() const { return 0; }
};

// dense algebra element over a subgroup, for the few off-center computations
struct AlgebraElement {
  const SubgroupAlgebra* owner = nullptr;
  std::vector<gf::elt> coeff;  // parallel to owner->H.elems

  gf::elt at_global(uint32_t g) const {
    const auto& elems = owner->H.elems;
    auto it = std::lower_bound(elems.begin(), elems.end(), g);
    if (it == elems.end() || *it != g)
      return 0;
    return coeff[size_t(it - elems.begin())];
  }
  bool is_zero() const {
    for (gf::elt x : coeff)
      if (x)
        return false;
    return true;
  }
  gf::elt augmentation() const {
    gf::elt a = 0;
    for (gf::elt x : coeff)
      a = owner->k->add(a, x);
    return a;
  }
};

namespace detail {

// compute block idempotents of A's center, in class coordinates
inline void compute_blocks(SubgroupAlgebra& A) {
  const gf::Field& F = *A.k;
  uint32_t ell = A.ell;
  size_t c = A.nclasses;

  auto pow_ell = [&](std::vector<gf::elt> v) {
    std::vector<gf::elt> acc = v;
    for (uint32_t i = 1; i < ell; ++i)
      acc = A.mulz(acc, v);
    return acc;
  };

  // iterated ell-power map: t with ell^t >= c kills every nilpotent
  uint32_t t = 0;
  uint64_t p = 1;
  while (p < c) {
    p *= ell;
    ++t;
  }
  std::vector<std::vector<gf::elt>> images(c);
  for (size_t i = 0; i < c; ++i) {
    std::vector<gf::elt> v(c, 0);
    v[i] = 1;
    for (uint32_t s = 0; s < t; ++s)
      v = pow_ell(v);
    images[i] = std::move(v);
  }
  // x = sum lambda_i K_i lies in the radical iff sum lambda_i^{ell^t} T(K_i) = 0;
  // substitute mu_i = lambda_i^{ell^t} and solve the linear system in mu
  gf::FMatrix M(F, c, c);
  for (size_t i = 0; i < c; ++i)
    for (size_t r = 0; r < c; ++r)
      M.at(r, i) = images[i][r];
  std::vector<std::vector<gf::elt>> mu_basis = gf::kernel_basis(M);
  std::vector<std::vector<gf::elt>> radical;
  for (auto& mu : mu_basis) {
    std::vector<gf::elt> lam(c);
    for (size_t i = 0; i < c; ++i)
      lam[i] = F.inv_frob(mu[i], t);
    radical.push_back(std::move(lam));
  }

  // echelonize the radical; quotient coordinates are the non-pivot classes
  gf::FMatrix R(F, radical.size(), c);
  for (size_t i = 0; i < radical.size(); ++i)
    for (size_t j = 0; j < c; ++j)
      R.at(i, j) = radical[i][j];
  std::vector<size_t> pivots = gf::rref(R);
  std::vector<bool> is_pivot(c, false);
  for (size_t p2 : pivots)
    is_pivot[p2] = true;
  std::vector<size_t> free_cols;
  for (size_t j = 0; j < c; ++j)
    if (!is_pivot[j])
      free_cols.push_back(j);
  size_t s = free_cols.size();  // number of blocks
  check(s >= 1, "center has no semisimple part (impossible)");

  auto project = [&](std::vector<gf::elt> v) {
    // reduce modulo the echelonized radical, then read off free coordinates
    for (size_t r = 0; r < pivots.size(); ++r) {
      gf::elt f = v[pivots[r]];
      if (!f)
        continue;
      for (size_t j = 0; j < c; ++j)
        v[j] = F.sub(v[j], F.mul(f, R.at(r, j)));
    }
    std::vector<gf::elt> q(s);
    for (size_t i = 0; i < s; ++i)
      q[i] = v[free_cols[i]];
    return q;
  };
  auto lift = [&](const std::vector<gf::elt>& q) {
    std::vector<gf::elt> v(c, 0);
    for (size_t i = 0; i < s; ++i)
      v[free_cols[i]] = q[i];
    return v;
  };
  auto mulq = [&](const std::vector<gf::elt>& x, const std::vector<gf::elt>& y) {
    return project(A.mulz(lift(x), lift(y)));
  };
  std::vector<gf::elt> oneq = project(A.identity_coords());

  // split the (commutative, split semisimple) quotient into its points
  std::vector<std::vector<gf::elt>> idems{oneq};
  auto ideal_basis = [&](const std::vector<gf::elt>& e) {
    gf::FMatrix B(F, s, s);
    for (size_t i = 0; i < s; ++i) {
      std::vector<gf::elt> unit(s, 0);
      unit[i] = 1;
      std::vector<gf::elt> w = mulq(e, unit);
      for (size_t j = 0; j < s; ++j)
        B.at(i, j) = w[j];
    }
    std::vector<size_t> piv = gf::rref(B);
    std::vector<std::vector<gf::elt>> basis;
    for (size_t r = 0; r < piv.size(); ++r) {
      std::vector<gf::elt> row(s);
      for (size_t j = 0; j < s; ++j)
        row[j] = B.at(r, j);
      basis.push_back(std::move(row));
    }
    return basis;
  };

  for (size_t bi = 0; bi < s; ++bi) {
    std::vector<gf::elt> basis_vec(s, 0);
    basis_vec[bi] = 1;
    std::vector<std::vector<gf::elt>> refined;
    for (auto& e : idems) {
      auto basis = ideal_basis(e);
      size_t d = basis.size();
      if (d <= 1) {
        refined.push_back(e);
        continue;
      }
      std::vector<gf::elt> y = mulq(e, basis_vec);
      // operator of multiplication by y on the ideal e*A
      gf::FMatrix coords(F, s, d);
      for (size_t j = 0; j < d; ++j)
        for (size_t i = 0; i < s; ++i)
          coords.at(i, j) = basis[j][i];
      gf::FMatrix op(F, d, d);
      for (size_t j = 0; j < d; ++j) {
        std::vector<gf::elt> w = mulq(y, basis[j]);
        // solve coords * x = w
        gf::FMatrix aug(F, s, d + 1);
        for (size_t i = 0; i < s; ++i) {
          for (size_t jc = 0; jc < d; ++jc)
            aug.at(i, jc) = coords.at(i, jc);
          aug.at(i, d) = w[i];
        }
        std::vector<size_t> piv = gf::rref(aug);
        for (size_t r = 0; r < piv.size(); ++r) {
          check(piv[r] < d, "ideal basis solve failed");
          op.at(piv[r], j) = aug.at(r, d);
        }
      }
      gf::Poly mp = gf::min_poly_of_operator(op);
      std::vector<gf::elt> roots = gf::roots_of_split_poly(mp);
      if (roots.size() <= 1) {
        refined.push_back(e);
        continue;
      }
      for (gf::elt lam : roots) {
        // e * prod_{mu != lam} (y - mu) / (lam - mu)
        std::vector<gf::elt> part = e;
        for (gf::elt mu : roots) {
          if (mu == lam)
            continue;
          std::vector<gf::elt> factor = y;
          for (size_t i = 0; i < s; ++i)
            factor[i] = F.sub(factor[i], F.mul(mu, oneq[i]));
          part = mulq(part, factor);
          gf::elt scale = F.inv(F.sub(lam, mu));
          for (auto& x : part)
            x = F.mul(x, scale);
        }
        refined.push_back(std::move(part));
      }
    }
    idems = std::move(refined);
    if (idems.size() == s)
      break;
  }
  check(idems.size() == s, "semisimple quotient did not split into " + std::to_string(s) +
                               " points (got " + std::to_string(idems.size()) + ")");

  // lift each idempotent through the radical: e <- 3e^2 - 2e^3
  std::vector<std::vector<gf::elt>> blocks;
  for (auto& eq : idems) {
    std::vector<gf::elt> e = lift(eq);
    for (int iter = 0;; ++iter) {
      std::vector<gf::elt> e2 = A.mulz(e, e);
      if (e2 == e)
        break;
      check(iter < 64, "idempotent lifting did not converge");
      std::vector<gf::elt> e3 = A.mulz(e2, e);
      for (size_t i = 0; i < c; ++i)
        e[i] = F.sub(F.mul(F.from_int(3), e2[i]), F.mul(F.from_int(2), e3[i]));
    }
    blocks.push_back(std::move(e));
  }

  // axioms: orthogonal, sum to 1, nonzero
  std::vector<gf::elt> sum(c, 0);
  for (size_t i = 0; i < blocks.size(); ++i) {
    check(!SubgroupAlgebra::is_zero(blocks[i]), "zero block idempotent");
    for (size_t j = 0; j < c; ++j)
      sum[j] = F.add(sum[j], blocks[i][j]);
    for (size_t j2 = i + 1; j2 < blocks.size(); ++j2)
      check(SubgroupAlgebra::is_zero(A.mulz(blocks[i], blocks[j2])),
            "block idempotents are not orthogonal");
  }
  check(sum == A.identity_coords(), "block idempotents do not sum to 1");

  // support only on ell-regular classes (Osima), used as a cross-check
  for (auto& b : blocks)
    for (size_t i = 0; i < c; ++i)
      if (b[i])
        check(A.H.G->elt_order[A.rep(uint32_t(i))] % ell != 0,
              "block idempotent supported on an ell-singular class");

  // exactly one block of augmentation 1, the rest 0; principal comes first
  size_t principal = SIZE_MAX;
  for (size_t i = 0; i < blocks.size(); ++i) {
    gf::elt a = A.augmentation(blocks[i]);
    if (a == 1) {
      check(principal == SIZE_MAX, "two blocks of augmentation 1");
      principal = i;
    } else {
      check(a == 0, "block augmentation is neither 0 nor 1");
    }
  }
  check(principal != SIZE_MAX, "no principal block found");
  std::swap(blocks[0], blocks[principal]);
  std::sort(blocks.begin() + 1, blocks.end());
  A.blocks = std::move(blocks);
}

}  // namespace detail

// Memoized per-subgroup algebra store. Thread-safe: concurrent requests for
// the same subgroup compute identical data and the first insert wins.
class Workspace {
public:
  explicit Workspace(SplittingContext ctx) : ctx_(std::move(ctx)) {}

  const SplittingContext& ctx() const { return ctx_; }
  const gf::Field& field() const { return *ctx_.k; }
  uint32_t ell() const { return ctx_.ell; }
  const grp::Group& group() const { return *ctx_.G; }

  const SubgroupAlgebra& algebra(const grp::Subgroup& H) {
    {
      std::lock_guard<std::mutex> lk(mx_);
      auto it = algebras_.find(H.elems);
      if (it != algebras_.end())
        return *it->second;
    }
    auto A = std::make_unique<SubgroupAlgebra>();
    build_algebra(*A, H);
    std::lock_guard<std::mutex> lk(mx_);
    auto [it, fresh] = algebras_.emplace(H.elems, std::move(A));
    (void)fresh;
    return *it->second;
  }

  // centralizer of Q inside the ambient subgroup, memoized; the ambient enters
  // the key by order and content hash to keep whole-group keys cheap
  const grp::Subgroup& centralizer(const grp::Subgroup& ambient, const grp::Subgroup& Q) {
    std::tuple<uint64_t, uint64_t, std::vector<uint32_t>> key{ambient.order(),
                                                              fnv1a_vec(ambient.elems), Q.elems};
    {
      std::lock_guard<std::mutex> lk(mx_);
      auto it = centralizers_.find(key);
      if (it != centralizers_.end())
        return it->second;
    }
    grp::Subgroup C = grp::centralizer(ambient, Q);
    std::lock_guard<std::mutex> lk(mx_);
    auto [it, fresh] = centralizers_.emplace(std::move(key), std::move(C));
    (void)fresh;
    return it->second;
  }

private:
  void build_algebra(SubgroupAlgebra& A, const grp::Subgroup& H) const {
    const grp::Group& G = *ctx_.G;
    A.H = H;
    if (A.H.gens.empty() && A.H.order() > 1)
      A.H.gens = grp::small_generating_set(G, A.H.elems);
    A.k = ctx_.k;
    A.ell = ctx_.ell;

    // conjugacy classes of H by orbit closure over its generators
    size_t n = H.elems.size();
    A.class_of_pos.assign(n, UINT32_MAX);
    auto pos_of = [&](uint32_t g) {
      auto it = std::lower_bound(A.H.elems.begin(), A.H.elems.end(), g);
      check(it != A.H.elems.end() && *it == g, "conjugation left the subgroup");
      return size_t(it - A.H.elems.begin());
    };
    for (size_t p = 0; p < n; ++p) {
      if (A.class_of_pos[p] != UINT32_MAX)
        continue;
      uint32_t id = uint32_t(A.classes.size());
      std::vector<uint32_t> members;
      std::vector<size_t> stack{p};
      A.class_of_pos[p] = id;
      while (!stack.empty()) {
        size_t cur = stack.back();
        stack.pop_back();
        members.push_back(A.H.elems[cur]);
        for (uint32_t g : A.H.gens) {
          size_t q = pos_of(G.conj(A.H.elems[cur], g));
          if (A.class_of_pos[q] == UINT32_MAX) {
            A.class_of_pos[q] = id;
            stack.push_back(q);
          }
        }
      }
      std::sort(members.begin(), members.end());
      A.classes.push_back(std::move(members));
    }
    A.nclasses = A.classes.size();

    // structure constants: for each target class pick its least representative
    // z and count x with x in C_i, x^-1 z in C_j
    size_t c = A.nclasses;
    std::vector<uint32_t> counts(c * c * c, 0);
    for (size_t kcl = 0; kcl < c; ++kcl) {
      uint32_t z = A.classes[kcl][0];
      for (size_t p = 0; p < n; ++p) {
        uint32_t x = A.H.elems[p];
        uint32_t y = G.mul(G.inv[x], z);
        size_t i = A.class_of_pos[p];
        size_t j = A.class_of_pos[pos_of(y)];
        counts[(i * c + j) * c + kcl] += 1;
      }
    }
    const gf::Field& F = *ctx_.k;
    A.structure.resize(c * c * c);
    for (size_t i = 0; i < A.structure.size(); ++i)
      A.structure[i] = F.from_int(int64_t(counts[i]));

    detail::compute_blocks(A);
  }

  SplittingContext ctx_;
  mutable std::mutex mx_;
  std::map<std::vector<uint32_t>, std::unique_ptr<SubgroupAlgebra>> algebras_;
  std::map<std::tuple<uint64_t, uint64_t, std::vector<uint32_t>>, grp::Subgroup> centralizers_;
};

// ---------------------------------------------------------------------------
// Central-element utilities shared by the Brauer-pair machinery.
// ---------------------------------------------------------------------------

// class coordinates of the restriction (coefficient truncation) of a central
// element of kS to kT, for T.H inside S.H; the restriction of a central
// element is class-constant on T because T-classes refine S-classes
inline std::vector<gf::elt> truncate_central(const SubgroupAlgebra& S,
                                             const std::vector<gf::elt>& coords,
                                             const SubgroupAlgebra& T) {
  std::vector<gf::elt> out(T.nclasses);
  for (size_t i = 0; i < T.nclasses; ++i)
    out[i] = coords[S.class_of_global(T.rep(uint32_t(i)))];
  return out;
}

// is the central element (class coords over A) fixed by conjugation with g?
// g must normalize A.H
inline bool central_fixed_by(const SubgroupAlgebra& A, const std::vector<gf::elt>& coords,
                             uint32_t g) {
  const grp::Group& G = *A.H.G;
  for (size_t i = 0; i < A.nclasses; ++i) {
    uint32_t image = G.conj(A.rep(uint32_t(i)), g);
    if (coords[A.class_of_global(image)] != coords[i])
      return false;
  }
  return true;
}

// class coords over A^g of the conjugate of a central element of A
inline std::vector<gf::elt> conj_central(const SubgroupAlgebra& A,
                                         const std::vector<gf::elt>& coords, uint32_t g,
                                         const SubgroupAlgebra& Ag) {
  const grp::Group& G = *A.H.G;
  std::vector<gf::elt> out(Ag.nclasses);
  for (size_t i = 0; i < Ag.nclasses; ++i) {
    uint32_t pre = G.conj(Ag.rep(uint32_t(i)), G.inv[g]);
    out[i] = coords[A.class_of_global(pre)];
  }
  return out;
}

// index of the block of A with the given class coordinates
inline size_t match_block(const SubgroupAlgebra& A, const std::vector<gf::elt>& coords) {
  for (size_t b = 0; b < A.blocks.size(); ++b)
    if (A.blocks[b] == coords)
      return b;
  throw ContractViolation("central idempotent does not match any block");
}

// canonical serialization of one block idempotent: the subgroup key, the
// block index and the sparse list of nonzero class coefficients (field
// elements by their integer encoding)
inline std::string serialize_block_idempotent(const SubgroupAlgebra& A, size_t block) {
  std::string s = A.H.key() + ";b" + std::to_string(block) + ";";
  for (size_t i = 0; i < A.nclasses; ++i)
    if (A.blocks[block][i])
      s += std::to_string(i) + ":" + std::to_string(A.blocks[block][i]) + ",";
  return s;
}

// ---------------------------------------------------------------------------
// Brauer map on dense coefficient vectors (the poset machinery uses
// truncate_central on class coordinates instead).
// ---------------------------------------------------------------------------

// coefficient truncation of a Q-stable element of k[A.H] to k[C.H];
// Q-stability is checked
inline AlgebraElement brauer_map(const AlgebraElement& x, const grp::Subgroup& Q,
                                 const SubgroupAlgebra& C) {
  const SubgroupAlgebra& A = *x.owner;
  const grp::Group& G = *A.H.G;
  for (uint32_t q : (Q.gens.empty() ? Q.elems : Q.gens)) {
    for (size_t p = 0; p < A.H.elems.size(); ++p) {
      uint32_t image = G.conj(A.H.elems[p], q);
      if (x.at_global(image) != x.coeff[p])
        fail("element is not fixed by Q");
    }
  }
  AlgebraElement out;
  out.owner = &C;
  out.coeff.resize(C.H.elems.size());
  for (size_t p = 0; p < C.H.elems.size(); ++p)
    out.coeff[p] = x.at_global(C.H.elems[p]);
  return out;
}

// ---------------------------------------------------------------------------
// Central characters and the central idempotents they generate.
// ---------------------------------------------------------------------------

// the |Z| characters of a cyclic group Z of order prime to ell, as value
// vectors parallel to Z.elems; the trivial character comes first
inline std::vector<std::vector<gf::elt>> characters_of_cyclic(const grp::Subgroup& Z,
                                                              const gf::Field& F) {
  const grp::Group& G = *Z.G;
  uint64_t n = Z.order();
  require(n % F.characteristic != 0, "group order not invertible in the field");
  require((F.size - 1) % n == 0, "field too small for the character values");
  // generator of Z
  uint32_t gen = 0;
  for (uint32_t x : Z.elems)
    if (G.elt_order[x] == n) {
      gen = x;
      break;
    }
  require(n == 1 || gen != 0, "subgroup is not cyclic");
  // least field element of multiplicative order n
  gf::elt omega = 1;
  if (n > 1) {
    omega = 0;
    for (gf::elt cand = 1; cand < F.size; ++cand)
      if (F.mult_order_of(cand) == n) {
        omega = cand;
        break;
      }
    check(omega != 0, "no field element of the required order");
  }
  // discrete log of each element of Z with respect to gen
  std::vector<uint64_t> dlog(Z.elems.size(), 0);
  uint32_t cur = 0;
  for (uint64_t t = 0; t < n; ++t) {
    auto it = std::lower_bound(Z.elems.begin(), Z.elems.end(), cur);
    dlog[size_t(it - Z.elems.begin())] = t;
    cur = G.mul(cur, gen);
  }
  std::vector<std::vector<gf::elt>> chars;
  for (uint64_t j = 0; j < n; ++j) {
    std::vector<gf::elt> chi(Z.elems.size());
    for (size_t p = 0; p < Z.elems.size(); ++p)
      chi[p] = F.pow(omega, (j * dlog[p]) % n);
    chars.push_back(std::move(chi));
  }
  return chars;
}

// the scalar character z -> lambda_z with z*e = lambda_z*e, for Z central in
// the owner of the block; checked to be a homomorphism into k^x
inline std::vector<gf::elt> block_central_character(const SubgroupAlgebra& A, size_t block,
                                                    const grp::Subgroup& Z) {
  const gf::Field& F = *A.k;
  const grp::Group& G = *A.H.G;
  require(Z.order() % F.characteristic != 0, "central subgroup order not invertible");
  for (uint32_t z : Z.gens)
    for (uint32_t h : A.H.gens)
      require(G.mul(z, h) == G.mul(h, z), "Z is not central in the block's owner");
  const std::vector<gf::elt>& e = A.blocks[block];
  // z * (class sum C_i) is the class sum of z*rep_i when z is central
  std::vector<gf::elt> lambdas(Z.elems.size());
  size_t first_nonzero = 0;
  while (e[first_nonzero] == 0)
    ++first_nonzero;
  for (size_t p = 0; p < Z.elems.size(); ++p) {
    uint32_t z = Z.elems[p];
    std::vector<gf::elt> ze(A.nclasses, 0);
    for (size_t i = 0; i < A.nclasses; ++i) {
      if (!e[i])
        continue;
      uint32_t target = A.class_of_global(G.mul(z, A.rep(uint32_t(i))));
      ze[target] = F.add(ze[target], e[i]);
    }
    gf::elt lam = F.div(ze[first_nonzero], e[first_nonzero]);
    for (size_t i = 0; i < A.nclasses; ++i)
      check(ze[i] == F.mul(lam, e[i]), "central element does not act by a scalar on the block");
    lambdas[p] = lam;
  }
  // homomorphism property
  for (size_t p = 0; p < Z.elems.size(); ++p)
    for (size_t q = 0; q < Z.elems.size(); ++q) {
      uint32_t zw = G.mul(Z.elems[p], Z.elems[q]);
      auto it = std::lower_bound(Z.elems.begin(), Z.elems.end(), zw);
      check(lambdas[size_t(it - Z.elems.begin())] == F.mul(lambdas[p], lambdas[q]),
            "central character is not multiplicative");
    }
  return lambdas;
}

// epsilon_zeta = |Z|^{-1} sum zeta(z) z^{-1}, an idempotent of k[C] for Z
// central in C; returned in class coordinates over C (centrality checked)
inline std::vector<gf::elt> make_epsilon_zeta(const SubgroupAlgebra& C, const grp::Subgroup& Z,
                                              const std::vector<gf::elt>& zeta) {
  const gf::Field& F = *C.k;
  const grp::Group& G = *C.H.G;
  require(Z.order() % F.characteristic != 0, "|Z| is not invertible in the field");
  // zeta must be multiplicative
  for (size_t p = 0; p < Z.elems.size(); ++p)
    for (size_t q = 0; q < Z.elems.size(); ++q) {
      uint32_t zw = G.mul(Z.elems[p], Z.elems[q]);
      auto it = std::lower_bound(Z.elems.begin(), Z.elems.end(), zw);
      require(it != Z.elems.end() && *it == zw, "Z is not closed");
      require(zeta[size_t(it - Z.elems.begin())] == F.mul(zeta[p], zeta[q]),
              "zeta is not a homomorphism");
    }
  gf::elt inv_n = F.inv(F.from_int(int64_t(Z.order())));
  std::vector<gf::elt> dense(C.H.elems.size(), 0);
  auto pos_of = [&](uint32_t g) {
    auto it = std::lower_bound(C.H.elems.begin(), C.H.elems.end(), g);
    require(it != C.H.elems.end() && *it == g, "Z is not inside C");
    return size_t(it - C.H.elems.begin());
  };
  for (size_t p = 0; p < Z.elems.size(); ++p)
    dense[pos_of(G.inv[Z.elems[p]])] = F.mul(zeta[p], inv_n);
  // centrality: the coefficients must be class-constant
  std::vector<gf::elt> coords(C.nclasses);
  for (size_t i = 0; i < C.nclasses; ++i) {
    gf::elt v = dense[pos_of(C.rep(uint32_t(i)))];
    for (uint32_t member : C.classes[i])
      check(dense[pos_of(member)] == v, "epsilon_zeta is not central (Z not central in C?)");
    coords[i] = v;
  }
  check(C.mulz(coords, coords) == coords, "epsilon_zeta is not idempotent");
  return coords;
}

}  // namespace alg
}  // namespace brpairs
