#pragma once

// Brauer pairs (Q, b_Q) and the poset of B-Brauer pairs with its abelian,
// elementary-abelian, almost-centric and centric subposets; defect groups
// via maximal pairs.
//
// The order is the one generated by normal containments: (Q1,b1) is normally
// contained in (Q2,b2) when Q1 is normal in Q2, e_{b1} is Q2-stable and
// Br_{Q2}(e_{b1}) e_{b2} != 0. General comparisons go through descend_pair,
// which walks a subnormal chain (normalizer tower) and selects the unique
// stable block with nonzero Brauer product at each step; existence and
// uniqueness of that block at every step is asserted at runtime.

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "algebra.hpp"
#include "common.hpp"
#include "groups.hpp"
#include "topo.hpp"

namespace brpairs {
namespace pairs {

struct BrauerPair {
  grp::Subgroup Q;
  uint32_t block = 0;  // index into the block list of k C_ambient(Q)

  bool operator==(const BrauerPair& o) const { return Q.elems == o.Q.elems && block == o.block; }
  bool operator<(const BrauerPair& o) const {
    if (Q.elems.size() != o.Q.elems.size())
      return Q.elems.size() < o.Q.elems.size();
    if (Q.elems != o.Q.elems)
      return Q.elems < o.Q.elems;
    return block < o.block;
  }
};

enum class Flavor { full, abelian, elem_abelian, almost_centric, abelian_almost_centric, centric };

inline std::string flavor_name(Flavor f) {
  switch (f) {
    case Flavor::full: return "full";
    case Flavor::abelian: return "abelian";
    case Flavor::elem_abelian: return "elementary-abelian";
    case Flavor::almost_centric: return "almost-centric";
    case Flavor::abelian_almost_centric: return "abelian-almost-centric";
    default: return "centric";
  }
}

struct BrauerPoset {
  grp::Subgroup ambient;
  size_t block = 0;  // index of B in the ambient algebra
  Flavor flavor = Flavor::full;
  std::vector<BrauerPair> pairs;
  topo::Poset poset;  // labels/order/action parallel to pairs

  std::optional<uint32_t> index_of(const BrauerPair& p) const {
    auto it = std::lower_bound(pairs.begin(), pairs.end(), p);
    if (it == pairs.end() || !(*it == p))
      return std::nullopt;
    return uint32_t(it - pairs.begin());
  }
};

class PairEngine {
public:
  explicit PairEngine(alg::SplittingContext ctx) : ws_(std::move(ctx)) {}

  alg::Workspace& workspace() { return ws_; }
  uint32_t ell() const { return ws_.ctx().ell; }
  const grp::Group& group() const { return ws_.group(); }

  // enable the on-disk poset cache; whole-group posets are stored under keys
  // derived from the canonical spec, the field and the flavor. The cache
  // never changes results. Notes about hits go to the optional stream.
  void enable_cache(std::string dir, std::string canonical_spec, std::ostream* notes = nullptr) {
    cache_dir_ = std::move(dir);
    cache_spec_ = std::move(canonical_spec);
    cache_notes_ = notes;
  }
  const std::string& cache_dir() const { return cache_dir_; }
  const std::string& cache_spec() const { return cache_spec_; }
  std::ostream* cache_notes() const { return cache_notes_; }

  const grp::Subgroup& cent(const grp::Subgroup& ambient, const grp::Subgroup& Q) {
    return ws_.centralizer(ambient, Q);
  }
  const alg::SubgroupAlgebra& cent_algebra(const grp::Subgroup& ambient, const grp::Subgroup& Q) {
    return ws_.algebra(cent(ambient, Q));
  }

  // (Q1,b1) normally contained in (Q2,b2): Q1 normal in Q2, e_{b1} stable
  // under Q2, and Br_{Q2}(e_{b1}) e_{b2} != 0
  bool normal_containment(const grp::Subgroup& ambient, const BrauerPair& p1,
                          const BrauerPair& p2) {
    const grp::Group& G = group();
    if (!p2.Q.contains_all(p1.Q))
      return false;
    for (uint32_t g : p2.Q.gens)
      for (uint32_t q : p1.Q.gens)
        if (!p1.Q.contains(G.conj(q, g)))
          return false;  // not normal
    const alg::SubgroupAlgebra& A1 = cent_algebra(ambient, p1.Q);
    const alg::SubgroupAlgebra& A2 = cent_algebra(ambient, p2.Q);
    const std::vector<gf::elt>& e1 = A1.blocks[p1.block];
    for (uint32_t g : p2.Q.gens)
      if (!alg::central_fixed_by(A1, e1, g))
        return false;
    std::vector<gf::elt> t = alg::truncate_central(A1, e1, A2);
    return !alg::SubgroupAlgebra::is_zero(A2.mulz(t, A2.blocks[p2.block]));
  }

  // the unique block below (P, c) along one normal step down to R (R normal in P)
  BrauerPair descend_normal_step(const grp::Subgroup& ambient, const BrauerPair& p,
                                 const grp::Subgroup& R) {
    const alg::SubgroupAlgebra& AR = cent_algebra(ambient, R);
    const alg::SubgroupAlgebra& AP = cent_algebra(ambient, p.Q);
    const std::vector<gf::elt>& ec = AP.blocks[p.block];
    std::optional<uint32_t> found;
    for (uint32_t b = 0; b < AR.blocks.size(); ++b) {
      bool stable = true;
      for (uint32_t g : p.Q.gens)
        if (!alg::central_fixed_by(AR, AR.blocks[b], g)) {
          stable = false;
          break;
        }
      if (!stable)
        continue;
      std::vector<gf::elt> t = alg::truncate_central(AR, AR.blocks[b], AP);
      if (!alg::SubgroupAlgebra::is_zero(AP.mulz(t, ec))) {
        check(!found, "two blocks lie below the same pair at one normal step");
        found = b;
      }
    }
    check(found.has_value(), "no block lies below the pair at a normal step");
    return BrauerPair{R, *found};
  }

  // subnormal chain Q = R_0 normal in R_1 normal in ... normal in P,
  // by the normalizer tower inside P
  std::vector<grp::Subgroup> normalizer_tower(const grp::Subgroup& P, const grp::Subgroup& Q) {
    std::vector<grp::Subgroup> chain{Q};
    while (chain.back().order() < P.order()) {
      grp::Subgroup next = grp::normalizer(P, chain.back());
      check(next.order() > chain.back().order(),
            "normalizer tower stalled (P is not an ell-group?)");
      chain.push_back(std::move(next));
    }
    return chain;
  }

  // the unique Brauer pair over Q below p, for nontrivial Q inside p.Q
  BrauerPair descend_pair(const grp::Subgroup& ambient, const BrauerPair& p,
                          const grp::Subgroup& Q) {
    require(Q.order() > 1, "descend target must be nontrivial");
    require(p.Q.contains_all(Q), "descend target is not inside the pair");
    if (Q.elems == p.Q.elems)
      return p;
    return descend_along_chain(ambient, p, normalizer_tower(p.Q, Q));
  }

  // descend along an explicit subnormal chain ending at p.Q
  BrauerPair descend_along_chain(const grp::Subgroup& ambient, const BrauerPair& p,
                                 const std::vector<grp::Subgroup>& chain) {
    require(!chain.empty() && chain.back().elems == p.Q.elems, "chain must end at the pair");
    BrauerPair cur = p;
    for (size_t i = chain.size() - 1; i-- > 0;)
      cur = descend_normal_step(ambient, cur, chain[i]);
    return cur;
  }

  // order of the poset of Brauer pairs
  bool pair_leq(const grp::Subgroup& ambient, const BrauerPair& p1, const BrauerPair& p2) {
    if (p1.Q.elems == p2.Q.elems)
      return p1.block == p2.block;
    if (!p2.Q.contains_all(p1.Q))
      return false;
    return descend_pair(ambient, p2, p1.Q) == p1;
  }

  // membership test (1, B) <= (Q, b): Br_Q(e_B) e_b != 0 (e_B is central,
  // hence Q-stable, and 1 is normal in Q)
  bool is_block_pair(const grp::Subgroup& ambient, size_t B, const BrauerPair& p) {
    const alg::SubgroupAlgebra& AG = ws_.algebra(ambient);
    const alg::SubgroupAlgebra& AC = cent_algebra(ambient, p.Q);
    std::vector<gf::elt> t = alg::truncate_central(AG, AG.blocks[B], AC);
    return !alg::SubgroupAlgebra::is_zero(AC.mulz(t, AC.blocks[p.block]));
  }

  BrauerPair conj_pair(const grp::Subgroup& ambient, const BrauerPair& p, uint32_t g) {
    grp::Subgroup Qg = grp::conj_subgroup(p.Q, g);
    const alg::SubgroupAlgebra& A = cent_algebra(ambient, p.Q);
    const alg::SubgroupAlgebra& Ag = cent_algebra(ambient, Qg);
    std::vector<gf::elt> moved = alg::conj_central(A, A.blocks[p.block], g, Ag);
    return BrauerPair{std::move(Qg), uint32_t(alg::match_block(Ag, moved))};
  }

  // N_ambient(Q, b_Q): stabilizer of the block inside the normalizer of Q
  grp::Subgroup pair_stabilizer(const grp::Subgroup& ambient, const BrauerPair& p) {
    grp::Subgroup N = grp::normalizer(ambient, p.Q);
    const alg::SubgroupAlgebra& A = cent_algebra(ambient, p.Q);
    const std::vector<gf::elt>& e = A.blocks[p.block];
    std::vector<uint32_t> keep;
    for (uint32_t g : N.elems)
      if (alg::central_fixed_by(A, e, g))
        keep.push_back(g);
    return grp::subgroup_from_elements(group(), std::move(keep));
  }

  // memoized ell-subgroup enumeration per ambient
  const std::vector<grp::Subgroup>& ell_subgroups(const grp::Subgroup& ambient) {
    std::pair<uint64_t, uint64_t> key{ambient.order(), fnv1a_vec(ambient.elems)};
    std::lock_guard<std::mutex> lk(subs_mx_);
    auto it = subgroup_memo_.find(key);
    if (it == subgroup_memo_.end())
      it = subgroup_memo_.emplace(key, grp::enumerate_ell_subgroups(ambient, ell())).first;
    return it->second;
  }

  bool almost_centric(const grp::Subgroup& ambient, const grp::Subgroup& Q) {
    auto [Z, Zell] = grp::center_and_ell_part(cent(ambient, Q), ell());
    (void)Z;
    return grp::center(Q).elems == Zell.elems;
  }

  // defect group of a block of the subgroup H (up to conjugacy), as the first
  // component of a maximal pair of its own Brauer-pair poset; memoized
  grp::Subgroup defect_group_of_block(const grp::Subgroup& H, size_t block) {
    std::pair<std::vector<uint32_t>, size_t> key{H.elems, block};
    {
      std::lock_guard<std::mutex> lk(defect_mx_);
      auto it = defect_memo_.find(key);
      if (it != defect_memo_.end())
        return it->second;
    }
    BrauerPoset poset = build_poset(H, block, Flavor::full);
    grp::Subgroup D = poset.pairs.empty() ? grp::trivial_subgroup(group())
                                          : maximal_pairs_and_defect(poset).second;
    std::lock_guard<std::mutex> lk(defect_mx_);
    defect_memo_.emplace(std::move(key), D);
    return D;
  }

  // b_Q has defect group Z(Q) inside C(Q)
  bool centric(const grp::Subgroup& ambient, const BrauerPair& p) {
    grp::Subgroup D = defect_group_of_block(cent(ambient, p.Q), p.block);
    return D.elems == grp::center(p.Q).elems;
  }

  bool flavor_admits(const grp::Subgroup& ambient, Flavor flavor, const grp::Subgroup& Q) {
    switch (flavor) {
      case Flavor::full:
      case Flavor::centric:
        return true;  // centric filtering happens at pair level
      case Flavor::abelian:
        return grp::is_abelian(Q);
      case Flavor::elem_abelian:
        return grp::is_elementary_abelian(Q, ell());
      case Flavor::almost_centric:
        return almost_centric(ambient, Q);
      case Flavor::abelian_almost_centric:
        return grp::is_abelian(Q) && almost_centric(ambient, Q);
    }
    return false;
  }

  // the poset of B-Brauer pairs (B given by its block index in k[ambient])
  // restricted to the requested flavor, with the conjugation action of the
  // ambient generators
  BrauerPoset build_poset(const grp::Subgroup& ambient, size_t B, Flavor flavor,
                          unsigned threads = 1) {
    BrauerPoset out;
    out.ambient = ambient;
    out.block = B;
    out.flavor = flavor;

    const std::vector<grp::Subgroup>& subgroups = ell_subgroups(ambient);
    // warm the centralizer algebras deterministically before any parallel work
    std::vector<const alg::SubgroupAlgebra*> algebras;
    std::vector<size_t> subgroup_id;  // per admitted subgroup: index in the full list
    std::vector<const grp::Subgroup*> admitted;
    for (size_t si = 0; si < subgroups.size(); ++si) {
      if (!flavor_admits(ambient, flavor, subgroups[si]))
        continue;
      admitted.push_back(&subgroups[si]);
      subgroup_id.push_back(si);
      algebras.push_back(&cent_algebra(ambient, subgroups[si]));
    }

    const alg::SubgroupAlgebra& AG = ws_.algebra(ambient);
    for (size_t a = 0; a < admitted.size(); ++a) {
      const alg::SubgroupAlgebra& AC = *algebras[a];
      std::vector<gf::elt> t = alg::truncate_central(AG, AG.blocks[B], AC);
      for (uint32_t b = 0; b < AC.blocks.size(); ++b) {
        if (alg::SubgroupAlgebra::is_zero(AC.mulz(t, AC.blocks[b])))
          continue;
        BrauerPair p{*admitted[a], b};
        if (flavor == Flavor::centric && !centric(ambient, p))
          continue;
        out.pairs.push_back(std::move(p));
        out.poset.labels.push_back("(Q" + std::to_string(subgroup_id[a]) + ":o" +
                                   std::to_string(admitted[a]->order()) + ",b" +
                                   std::to_string(b) + ")");
      }
    }
    check(std::is_sorted(out.pairs.begin(), out.pairs.end()),
          "pair vertex list is not canonically sorted");

    size_t n = out.pairs.size();
    out.poset.leq = topo::BitMatrix(n);

    // group vertices by underlying subgroup for shared descents
    std::map<std::vector<uint32_t>, std::vector<uint32_t>> verts_by_subgroup;
    for (uint32_t v = 0; v < n; ++v)
      verts_by_subgroup[out.pairs[v].Q.elems].push_back(v);

    // below(j, i) means pair i <= pair j; row j is owned by the thread
    // handling vertex j, transposed into leq afterwards
    topo::BitMatrix below(n);
    parallel_for(n, threads, [&](size_t j) {
      const BrauerPair& pj = out.pairs[j];
      for (auto& [qelems, verts] : verts_by_subgroup) {
        if (qelems.size() > pj.Q.elems.size())
          continue;
        if (qelems == pj.Q.elems) {
          below.set(j, j);
          continue;
        }
        if (!std::includes(pj.Q.elems.begin(), pj.Q.elems.end(), qelems.begin(), qelems.end()))
          continue;
        BrauerPair down = descend_pair(ambient, pj, out.pairs[verts[0]].Q);
        bool landed = false;
        for (uint32_t vi : verts)
          if (out.pairs[vi].block == down.block) {
            below.set(j, vi);
            landed = true;
          }
        // membership is inherited downward: the pair below a B-pair is a
        // B-pair, so it must be a vertex whenever the flavor admits whole
        // subgroups (the centric flavor filters at pair level and may
        // legitimately drop the descended pair)
        if (flavor != Flavor::centric)
          check(landed, "descended pair is not a vertex (membership consistency violated)");
      }
    });
    for (size_t j = 0; j < n; ++j)
      for (size_t i = 0; i < n; ++i)
        if (below.get(j, i))
          out.poset.leq.set(i, j);

    // conjugation action of the ambient generators
    for (uint32_t g : ambient.gens) {
      std::vector<uint32_t> perm(n);
      for (uint32_t v = 0; v < n; ++v) {
        BrauerPair moved = conj_pair(ambient, out.pairs[v], g);
        auto idx = out.index_of(moved);
        check(idx.has_value(), "conjugation left the pair poset");
        perm[v] = *idx;
      }
      out.poset.action.push_back(std::move(perm));
    }

    out.poset.validate();
    return out;
  }

  // maximal pairs of a full-flavor poset; asserts the ambient group acts
  // transitively on them and returns the defect group (first maximal pair)
  std::pair<std::vector<uint32_t>, grp::Subgroup> maximal_pairs_and_defect(const BrauerPoset& bp) {
    require(bp.flavor == Flavor::full, "defect needs the full poset");
    size_t n = bp.pairs.size();
    std::vector<uint32_t> maximal;
    for (uint32_t i = 0; i < n; ++i) {
      bool top = true;
      for (uint32_t j = 0; j < n && top; ++j)
        if (j != i && bp.poset.le(i, j))
          top = false;
      if (top)
        maximal.push_back(i);
    }
    if (maximal.empty())
      return {maximal, grp::trivial_subgroup(group())};
    // the action must be transitive on maximal pairs
    std::vector<bool> seen(n, false);
    std::vector<uint32_t> orbit{maximal[0]};
    seen[maximal[0]] = true;
    for (size_t i = 0; i < orbit.size(); ++i)
      for (const auto& perm : bp.poset.action) {
        uint32_t next = perm[orbit[i]];
        if (!seen[next]) {
          seen[next] = true;
          orbit.push_back(next);
        }
      }
    size_t maximal_in_orbit = 0;
    for (uint32_t m : maximal) {
      check(seen[m], "maximal pairs are not conjugate (transitivity violation)");
      ++maximal_in_orbit;
    }
    (void)maximal_in_orbit;
    return {maximal, bp.pairs[maximal[0]].Q};
  }

private:
  alg::Workspace ws_;
  std::mutex defect_mx_;
  std::map<std::pair<std::vector<uint32_t>, size_t>, grp::Subgroup> defect_memo_;
  std::mutex subs_mx_;
  std::map<std::pair<uint64_t, uint64_t>, std::vector<grp::Subgroup>> subgroup_memo_;
  std::string cache_dir_, cache_spec_;
  std::ostream* cache_notes_ = nullptr;
};

}  // namespace pairs
}  // namespace brpairs
