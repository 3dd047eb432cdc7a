#pragma once

// End-to-end theorem harnesses. Each harness verifies one statement on one
// instance and returns a report with one record per check; a pass is a
// machine-checked certificate for that instance (fiber minima, conical
// contractions, exact order isomorphisms), with homology equality recorded
// as an independent cross-check. Harnesses never soft-pass: a violated
// internal contract surfaces as a failed check with the witness message.

#include <algorithm>
#include <chrono>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cache.hpp"
#include "common.hpp"
#include "esplit.hpp"
#include "pairs.hpp"
#include "reductive.hpp"
#include "topo.hpp"

namespace brpairs {
namespace verify {

struct Check {
  std::string name;
  bool pass = false;
  std::string witness;  // failure detail or short evidence summary
};

struct HomologyRecord {
  std::string complex_name;
  topo::Homology h;
  size_t vertices = 0;
  size_t simplices = 0;
};

struct VerificationReport {
  std::string task;
  std::string instance;
  std::vector<Check> checks;
  std::vector<HomologyRecord> homology;
  bool precondition_failed = false;
  std::string precondition_detail;
  int64_t timing_ms = 0;

  bool pass() const {
    if (precondition_failed)
      return false;
    for (const Check& c : checks)
      if (!c.pass)
        return false;
    return true;
  }
  void add(const std::string& name, bool ok, const std::string& witness = "") {
    checks.push_back(Check{name, ok, witness});
  }
  // run a step that proves itself by not throwing
  template <typename F>
  void guarded(const std::string& name, F&& body) {
    try {
      body();
      add(name, true);
    } catch (const std::exception& ex) {
      add(name, false, ex.what());
    }
  }
  void record_homology(const std::string& name, const topo::SimplicialComplex& c,
                       const topo::Homology& h) {
    homology.push_back(HomologyRecord{name, h, c.count(0), c.total()});
  }
};

// --- small helpers shared by the harnesses ---

// the poset of non-trivial ell-subgroups under inclusion, with conjugation action
inline std::pair<std::vector<grp::Subgroup>, topo::Poset> subgroup_poset(
    pairs::PairEngine& eng, const grp::Subgroup& ambient) {
  const std::vector<grp::Subgroup>& subs = eng.ell_subgroups(ambient);
  topo::Poset p;
  p.leq = topo::BitMatrix(subs.size());
  for (size_t i = 0; i < subs.size(); ++i) {
    p.labels.push_back("Q" + std::to_string(i) + ":o" + std::to_string(subs[i].order()));
    for (size_t j = 0; j < subs.size(); ++j)
      if (subs[j].contains_all(subs[i]))
        p.leq.set(i, j);
  }
  auto index_of = [&](const std::vector<uint32_t>& elems) {
    grp::Subgroup probe;
    probe.G = ambient.G;
    probe.elems = elems;
    auto it = std::lower_bound(subs.begin(), subs.end(), probe);
    check(it != subs.end() && it->elems == elems, "conjugate subgroup not enumerated");
    return uint32_t(it - subs.begin());
  };
  for (uint32_t g : ambient.gens) {
    std::vector<uint32_t> perm(subs.size());
    for (size_t i = 0; i < subs.size(); ++i)
      perm[i] = index_of(grp::conj_subgroup(subs[i], g).elems);
    p.action.push_back(std::move(perm));
  }
  p.validate();
  return {subs, std::move(p)};
}

inline std::string first_failure(const topo::FiberReport& fr) {
  for (auto& e : fr.entries)
    if (!e.certified)
      return " fiber over target " + std::to_string(e.target) + ": " + e.detail;
  return "";
}

inline std::vector<size_t> positive_defect_blocks(pairs::PairEngine& eng,
                                                  const grp::Subgroup& ambient) {
  const alg::SubgroupAlgebra& A = eng.workspace().algebra(ambient);
  std::vector<size_t> out;
  for (size_t b = 0; b < A.blocks.size(); ++b)
    if (eng.defect_group_of_block(ambient, b).order() > 1)
      out.push_back(b);
  return out;
}

// Brown correspondence: Q -> (Q, principal block of C(Q)) is an order
// isomorphism from the subgroup poset onto the principal-block pair poset
inline void check_brown_homeomorphism(pairs::PairEngine& eng, const grp::Subgroup& ambient,
                                      VerificationReport& rep, unsigned threads = 1) {
  auto [subs, spos] = subgroup_poset(eng, ambient);
  size_t B0 = eng.workspace().algebra(ambient).principal_block();
  pairs::BrauerPoset bp =
      cache::build_brauer_poset_cached(eng, ambient, B0, pairs::Flavor::full, threads);
  bool sizes = subs.size() == bp.pairs.size();
  rep.add("principal-poset-vertex-count", sizes,
          std::to_string(subs.size()) + " subgroups vs " + std::to_string(bp.pairs.size()) +
              " pairs");
  if (!sizes)
    return;
  std::vector<uint32_t> f(subs.size());
  bool welldef = true;
  std::string witness;
  for (size_t i = 0; i < subs.size(); ++i) {
    pairs::BrauerPair expect{subs[i], uint32_t(eng.cent_algebra(ambient, subs[i]).principal_block())};
    auto idx = bp.index_of(expect);
    if (!idx.has_value()) {
      welldef = false;
      witness = "no principal pair over subgroup " + std::to_string(i);
      break;
    }
    f[i] = *idx;
  }
  rep.add("principal-pairs-exist-uniquely", welldef, witness);
  if (!welldef)
    return;
  std::string w2;
  bool iso = topo::order_isomorphic_by(spos, bp.poset, f, &w2);
  rep.add("brown-poset-isomorphism", iso, w2);
  bool equi = topo::equivariance_check(spos, bp.poset, f, &w2);
  rep.add("brown-map-equivariant", equi, w2);
}

// --- block axioms harness ---

inline VerificationReport verify_block_axioms(pairs::PairEngine& eng,
                                              const grp::Subgroup& ambient,
                                              const std::string& instance, uint64_t seed,
                                              unsigned threads = 1) {
  VerificationReport rep;
  rep.task = "block-axioms";
  rep.instance = instance;
  alg::Workspace& ws = eng.workspace();

  // sum/orthogonality/centrality of every centralizer algebra are asserted on
  // construction; the guarded step makes that an explicit check
  rep.guarded("idempotent-axioms-ambient-and-centralizers", [&] {
    ws.algebra(ambient);
    for (auto& Q : eng.ell_subgroups(ambient))
      eng.cent_algebra(ambient, Q);
  });

  const alg::SubgroupAlgebra& A = ws.algebra(ambient);
  DetRng rng(seed);
  size_t chains_checked = 0;
  bool chains_ok = true;
  std::string chain_witness;

  for (size_t B = 0; B < A.blocks.size() && chains_ok; ++B) {
    pairs::BrauerPoset bp =
        cache::build_brauer_poset_cached(eng, ambient, B, pairs::Flavor::full, threads);

    rep.guarded("maximal-pair-transitivity-block-" + std::to_string(B), [&] {
      eng.maximal_pairs_and_defect(bp);
    });

    // descend uniqueness and chain independence on random chains
    for (const pairs::BrauerPair& p : bp.pairs) {
      if (p.Q.order() <= eng.ell())
        continue;
      auto subs_of_p = grp::all_subgroups_of_ell_group(p.Q);
      std::vector<grp::Subgroup> proper;
      for (auto& s : subs_of_p)
        if (s.order() > 1 && s.order() < p.Q.order())
          proper.push_back(s);
      if (proper.empty())
        continue;
      const grp::Subgroup& Q = proper[rng.below(proper.size())];
      try {
        pairs::BrauerPair via_tower = eng.descend_pair(ambient, p, Q);
        // a random maximal chain from p.Q down to Q
        std::vector<grp::Subgroup> chain{p.Q};
        while (!(chain.back().elems == Q.elems)) {
          std::vector<grp::Subgroup> options;
          for (auto& s : grp::all_subgroups_of_ell_group(chain.back()))
            if (s.order() * eng.ell() == chain.back().order() && s.contains_all(Q))
              options.push_back(s);
          check(!options.empty(), "no maximal subgroup over the target (not an ell-group?)");
          chain.push_back(options[rng.below(options.size())]);
        }
        std::reverse(chain.begin(), chain.end());
        pairs::BrauerPair via_random = eng.descend_along_chain(ambient, p, chain);
        if (!(via_tower == via_random)) {
          chains_ok = false;
          chain_witness = "chain disagreement below a pair over a subgroup of order " +
                          std::to_string(p.Q.order());
        }
        ++chains_checked;
      } catch (const std::exception& ex) {
        chains_ok = false;
        chain_witness = ex.what();
      }
      if (!chains_ok)
        break;
    }
  }
  rep.add("descend-uniqueness-and-chain-independence", chains_ok,
          chains_ok ? std::to_string(chains_checked) + " chains" : chain_witness);

  // third main theorem consistency: pairs of the principal block carry
  // principal centralizer blocks
  rep.guarded("principal-pairs-carry-principal-blocks", [&] {
    pairs::BrauerPoset b0 = cache::build_brauer_poset_cached(
        eng, ambient, A.principal_block(), pairs::Flavor::full, threads);
    for (const pairs::BrauerPair& p : b0.pairs)
      check(p.block == eng.cent_algebra(ambient, p.Q).principal_block(),
            "non-principal block under the principal block");
  });

  check_brown_homeomorphism(eng, ambient, rep, threads);
  return rep;
}

// --- abelian-pairs contractibility harness ---

inline VerificationReport verify_lemma_abelian(pairs::PairEngine& eng,
                                               const grp::Subgroup& ambient, size_t B,
                                               const std::string& instance,
                                               unsigned threads = 1,
                                               size_t fiber_cutoff = 200) {
  VerificationReport rep;
  rep.task = "lemma-abelian";
  rep.instance = instance;

  pairs::BrauerPoset full =
      cache::build_brauer_poset_cached(eng, ambient, B, pairs::Flavor::full, threads);
  rep.add("poset-nonempty-iff-positive-defect",
          full.pairs.empty() == (eng.defect_group_of_block(ambient, B).order() == 1));

  for (pairs::Flavor flavor : {pairs::Flavor::abelian, pairs::Flavor::elem_abelian}) {
    std::string tag = flavor == pairs::Flavor::abelian ? "abelian" : "elem-abelian";
    pairs::BrauerPoset sub = cache::build_brauer_poset_cached(eng, ambient, B, flavor, threads);

    topo::SimplicialComplex cf = topo::order_complex(full.poset);
    topo::SimplicialComplex cs = topo::order_complex(sub.poset);
    topo::Homology hf = topo::homology(cf, true);
    topo::Homology hs = topo::homology(cs, true);
    if (flavor == pairs::Flavor::abelian) {
      rep.record_homology("full", cf, hf);
      rep.record_homology(tag, cs, hs);
    } else {
      rep.record_homology(tag, cs, hs);
    }
    rep.add(tag + "-homology-equality", hf == hs, hf.to_string() + " vs " + hs.to_string());

    // inclusion map and its downward fibers, conically contracted by joining
    // with the pair over Z(Q) (or Omega_1(Z(Q)) in the elementary variant)
    std::vector<uint32_t> incl(sub.pairs.size());
    bool incl_ok = true;
    for (uint32_t v = 0; v < sub.pairs.size() && incl_ok; ++v) {
      auto idx = full.index_of(sub.pairs[v]);
      incl_ok = idx.has_value();
      if (incl_ok)
        incl[v] = *idx;
    }
    rep.add(tag + "-is-subposet", incl_ok);
    if (!incl_ok)
      continue;

    topo::ConicalProvider provider = [&](uint32_t y, const topo::Poset& fiber,
                                         const std::vector<uint32_t>& ids)
        -> std::optional<std::pair<uint32_t, std::vector<uint32_t>>> {
      const pairs::BrauerPair& top = full.pairs[y];
      grp::Subgroup ZQ = grp::center(top.Q);
      if (flavor == pairs::Flavor::elem_abelian)
        ZQ = grp::omega1(ZQ, eng.ell());
      pairs::BrauerPair apex = eng.descend_pair(ambient, top, ZQ);
      auto apex_sub = sub.index_of(apex);
      if (!apex_sub.has_value())
        return std::nullopt;
      uint32_t apex_local = UINT32_MAX;
      for (uint32_t l = 0; l < ids.size(); ++l)
        if (ids[l] == *apex_sub)
          apex_local = l;
      if (apex_local == UINT32_MAX)
        return std::nullopt;
      std::vector<uint32_t> j(fiber.size());
      for (uint32_t l = 0; l < ids.size(); ++l) {
        const pairs::BrauerPair& pl = sub.pairs[ids[l]];
        grp::Subgroup joined = grp::product_subgroup(pl.Q, ZQ);
        pairs::BrauerPair jp = eng.descend_pair(ambient, top, joined);
        auto js = sub.index_of(jp);
        if (!js.has_value())
          return std::nullopt;
        uint32_t jl = UINT32_MAX;
        for (uint32_t l2 = 0; l2 < ids.size(); ++l2)
          if (ids[l2] == *js)
            jl = l2;
        if (jl == UINT32_MAX)
          return std::nullopt;
        j[l] = jl;
      }
      return std::make_pair(apex_local, j);
    };

    topo::FiberActionProvider actions = [&](uint32_t y, const std::vector<uint32_t>& ids) {
      grp::Subgroup stab = eng.pair_stabilizer(ambient, full.pairs[y]);
      std::vector<std::vector<uint32_t>> perms;
      for (uint32_t s : stab.gens) {
        std::vector<uint32_t> perm(ids.size());
        for (uint32_t l = 0; l < ids.size(); ++l) {
          pairs::BrauerPair moved = eng.conj_pair(ambient, sub.pairs[ids[l]], s);
          auto ms = sub.index_of(moved);
          check(ms.has_value(), "stabilizer left the subposet");
          uint32_t ml = UINT32_MAX;
          for (uint32_t l2 = 0; l2 < ids.size(); ++l2)
            if (ids[l2] == *ms)
              ml = l2;
          check(ml != UINT32_MAX, "stabilizer left the fiber");
          perm[l] = ml;
        }
        perms.push_back(std::move(perm));
      }
      return perms;
    };

    topo::FiberReport fr = topo::quillen_fiber_check(sub.poset, full.poset, incl,
                                                     topo::FiberDirection::down, provider,
                                                     actions, fiber_cutoff);
    size_t conical = 0;
    for (auto& e : fr.entries)
      if (e.certified && e.certificate.rfind("conical", 0) == 0)
        ++conical;
    rep.add(tag + "-fibers-certified", fr.pass,
            fr.pass ? std::to_string(fr.entries.size()) + " fibers (" + std::to_string(conical) +
                          " conical)"
                    : fr.failure + first_failure(fr));
  }
  return rep;
}

// --- almost-centric proposition harness ---

inline VerificationReport verify_prop_almost_centric(pairs::PairEngine& eng,
                                                     const grp::Subgroup& ambient, size_t B,
                                                     const std::string& instance,
                                                     bool centric_control = false,
                                                     unsigned threads = 1) {
  VerificationReport rep;
  rep.task = "prop-almost-centric";
  rep.instance = instance;

  pairs::BrauerPoset full =
      cache::build_brauer_poset_cached(eng, ambient, B, pairs::Flavor::full, threads);
  pairs::BrauerPoset ab =
      cache::build_brauer_poset_cached(eng, ambient, B, pairs::Flavor::abelian, threads);
  pairs::BrauerPoset abac = cache::build_brauer_poset_cached(
      eng, ambient, B, pairs::Flavor::abelian_almost_centric, threads);

  bool pos_defect = eng.defect_group_of_block(ambient, B).order() > 1;
  rep.add("almost-centric-nonempty-for-positive-defect", !pos_defect || !abac.pairs.empty());

  topo::SimplicialComplex cf = topo::order_complex(full.poset);
  topo::SimplicialComplex ca = topo::order_complex(abac.poset);
  topo::Homology hf = topo::homology(cf, true);
  topo::Homology ha = topo::homology(ca, true);
  rep.record_homology("full", cf, hf);
  rep.record_homology("abelian-almost-centric", ca, ha);
  rep.add("almost-centric-homology-equality", hf == ha, hf.to_string() + " vs " + ha.to_string());

  // upward fibers over abelian pairs have the predicted invariant minimum
  bool minima_ok = true;
  std::string witness;
  size_t fibers = 0;
  for (uint32_t y = 0; y < ab.pairs.size() && minima_ok; ++y) {
    const pairs::BrauerPair& q = ab.pairs[y];
    const grp::Subgroup& C = eng.cent(ambient, q.Q);
    auto [ZC, ZCl] = grp::center_and_ell_part(C, eng.ell());
    (void)ZC;
    // C(Q) = C(Z(C(Q))_ell) for abelian Q
    if (!(eng.cent(ambient, ZCl).elems == C.elems)) {
      minima_ok = false;
      witness = "centralizer identity fails at " + ab.poset.labels[y];
      break;
    }
    pairs::BrauerPair predicted{ZCl, q.block};
    auto pv = abac.index_of(predicted);
    if (!pv.has_value()) {
      minima_ok = false;
      witness = "predicted minimum is not almost-centric at " + ab.poset.labels[y];
      break;
    }
    // fiber: almost-centric pairs above (Q, b_Q)
    ++fibers;
    for (uint32_t v = 0; v < abac.pairs.size(); ++v) {
      auto in_ab = ab.index_of(abac.pairs[v]);
      check(in_ab.has_value(), "almost-centric pair missing from the abelian poset");
      if (!ab.poset.le(y, *in_ab))
        continue;
      if (!eng.pair_leq(ambient, predicted, abac.pairs[v])) {
        minima_ok = false;
        witness = "predicted minimum not below " + abac.poset.labels[v];
        break;
      }
    }
    if (!minima_ok)
      break;
    // invariance under the pair stabilizer
    grp::Subgroup stab = eng.pair_stabilizer(ambient, q);
    for (uint32_t s : stab.gens)
      if (!(eng.conj_pair(ambient, predicted, s) == predicted)) {
        minima_ok = false;
        witness = "stabilizer moves the predicted minimum at " + ab.poset.labels[y];
        break;
      }
  }
  rep.add("fiber-minima-invariant", minima_ok,
          minima_ok ? std::to_string(fibers) + " fibers" : witness);

  if (centric_control) {
    // the centric analogue genuinely fails on this instance: the centric
    // subposet must NOT have the homology of the full poset
    pairs::BrauerPoset centr =
        cache::build_brauer_poset_cached(eng, ambient, B, pairs::Flavor::centric, threads);
    topo::SimplicialComplex cc = topo::order_complex(centr.poset);
    topo::Homology hc = topo::homology(cc, true);
    rep.record_homology("centric", cc, hc);
    rep.add("centric-analogue-fails-as-expected", !(hc == hf),
            hc.to_string() + " vs " + hf.to_string());
  }
  return rep;
}

// --- defining characteristic harness ---

inline VerificationReport verify_thm_defining(const red::ReductiveSpec& spec,
                                              uint64_t cap = grp::kDefaultGroupCap,
                                              unsigned threads = 1) {
  VerificationReport rep;
  rep.task = "defining-characteristic";
  rep.instance = spec.describe() + " p=" + std::to_string(spec.p);
  require(spec.family == red::ReductiveSpec::Family::SL,
          "defining-characteristic harness expects an SL spec (simple type)");
  require(!(spec.n == 2 && (spec.q == 2 || spec.q == 3)),
          "SL_2(2) and SL_2(3) are not perfect; instance excluded");

  red::ReductiveGroup rg = red::build_reductive(spec, cap);
  pairs::PairEngine eng(alg::splitting_context(rg.G, spec.p));
  alg::Workspace& ws = eng.workspace();
  const gf::Field& F = ws.field();

  red::DefiningCharData dc = red::defining_char_data(rg);
  rep.add("centralizer-of-unipotent-radical", dc.centralizer_identity,
          "C(U) = Z(G)Z(U), |U| = " + std::to_string(dc.U.order()));

  const alg::SubgroupAlgebra& A = ws.algebra(rg.whole);
  grp::Subgroup Z = grp::center(rg.whole);
  std::vector<size_t> positive = positive_defect_blocks(eng, rg.whole);
  rep.add("positive-defect-count-equals-central-characters",
          positive.size() == Z.order(),
          std::to_string(positive.size()) + " blocks vs |Irr(Z)| = " + std::to_string(Z.order()));

  // the central characters of the positive-defect blocks exhaust Irr(Z)
  rep.guarded("central-characters-biject", [&] {
    auto chars = alg::characters_of_cyclic(Z, F);
    std::set<std::vector<gf::elt>> expected(chars.begin(), chars.end());
    std::set<std::vector<gf::elt>> got;
    for (size_t B : positive)
      got.insert(alg::block_central_character(A, B, Z));
    check(got == expected, "central characters of positive-defect blocks do not exhaust Irr(Z)");
  });

  // every positive-defect block has Sylow defect
  rep.guarded("positive-defect-blocks-have-sylow-defect", [&] {
    for (size_t B : positive)
      check(eng.defect_group_of_block(rg.whole, B).order() == dc.U.order(),
            "block defect is not the full Sylow p-subgroup");
  });

  // (U, B_U) built from epsilon_zeta is a B-pair
  rep.guarded("epsilon-zeta-pair-membership", [&] {
    const grp::Subgroup& C = eng.cent(rg.whole, dc.U);
    const alg::SubgroupAlgebra& AC = ws.algebra(C);
    for (size_t B : positive) {
      std::vector<gf::elt> zeta = alg::block_central_character(A, B, Z);
      std::vector<gf::elt> eps = alg::make_epsilon_zeta(AC, Z, zeta);
      uint32_t BU = uint32_t(alg::match_block(AC, eps));
      check(eng.is_block_pair(rg.whole, B, pairs::BrauerPair{dc.U, BU}),
            "(U, B_U) is not a B-Brauer pair");
    }
  });

  // the building, once
  red::ParabolicData pd = red::parabolic_poset(rg);
  topo::SimplicialComplex building = red::tits_building(pd);
  topo::Homology hb = topo::homology(building, true);
  rep.record_homology("tits-building", building, hb);

  auto [subs, spos] = subgroup_poset(eng, rg.whole);
  for (size_t B : positive) {
    std::string tag = "block-" + std::to_string(B);
    pairs::BrauerPoset bp =
        cache::build_brauer_poset_cached(eng, rg.whole, B, pairs::Flavor::full, threads);

    // Q -> (Q, B_Q) is well-defined (unique block per subgroup) and bijective
    bool unique_ok = true;
    std::string witness;
    std::vector<uint32_t> f(subs.size());
    for (size_t i = 0; i < subs.size() && unique_ok; ++i) {
      std::vector<uint32_t> candidates;
      const alg::SubgroupAlgebra& AC = eng.cent_algebra(rg.whole, subs[i]);
      for (uint32_t b = 0; b < AC.blocks.size(); ++b)
        if (eng.is_block_pair(rg.whole, B, pairs::BrauerPair{subs[i], b}))
          candidates.push_back(b);
      if (candidates.size() != 1) {
        unique_ok = false;
        witness = std::to_string(candidates.size()) + " blocks over subgroup " +
                  std::to_string(i);
        break;
      }
      auto idx = bp.index_of(pairs::BrauerPair{subs[i], candidates[0]});
      unique_ok = idx.has_value();
      if (unique_ok)
        f[i] = *idx;
    }
    rep.add(tag + "-pair-per-subgroup-unique", unique_ok, witness);
    if (!unique_ok)
      continue;
    bool sizes = subs.size() == bp.pairs.size();
    std::string w2;
    bool iso = sizes && topo::order_isomorphic_by(spos, bp.poset, f, &w2);
    rep.add(tag + "-poset-isomorphic-to-subgroup-poset", iso, w2);

    topo::SimplicialComplex cb = topo::order_complex(bp.poset);
    topo::Homology hp = topo::homology(cb, true);
    rep.record_homology(tag, cb, hp);
    rep.add(tag + "-homology-matches-building", hp == hb,
            hp.to_string() + " vs " + hb.to_string());
  }
  return rep;
}

// --- Theorem A harness ---

inline VerificationReport verify_theorem_A(const red::ReductiveSpec& spec, uint32_t ell,
                                           uint64_t cap = grp::kDefaultGroupCap,
                                           unsigned threads = 1, size_t fiber_cutoff = 200,
                                           const std::string& cache_dir = "") {
  VerificationReport rep;
  rep.task = "theorem-A";
  rep.instance = spec.describe() + " ell=" + std::to_string(ell);

  red::PrimeContext pc = red::prime_context(spec, ell);
  if (!pc.applicable) {
    rep.precondition_failed = true;
    rep.precondition_detail = pc.flag_report();
    return rep;
  }
  rep.add("prime-in-pi-and-coprime-to-center", true, pc.flag_report());

  red::ReductiveGroup rg = red::build_reductive(spec, cap);
  pairs::PairEngine eng(alg::splitting_context(rg.G, ell));
  if (!cache_dir.empty())
    eng.enable_cache(cache_dir, rg.G->spec);
  esplit::EsplitEngine es(eng, rg, pc.e);

  std::vector<size_t> positive = positive_defect_blocks(eng, rg.whole);
  rep.add("positive-defect-blocks", !positive.empty(),
          std::to_string(positive.size()) + " blocks");

  for (size_t B : positive) {
    std::string tag = "block-" + std::to_string(B);
    pairs::BrauerPoset full =
        cache::build_brauer_poset_cached(eng, rg.whole, B, pairs::Flavor::full, threads);
    pairs::BrauerPoset abac = cache::build_brauer_poset_cached(
        eng, rg.whole, B, pairs::Flavor::abelian_almost_centric, threads);
    esplit::EsplitPoset ep = cache::build_esplit_poset_cached(es, B, threads);

    rep.add(tag + "-esplit-poset-nonempty", !ep.pairs.empty());
    rep.add(tag + "-no-levi-excluded", ep.excluded_levis.empty(),
            std::to_string(ep.excluded_levis.size()) + " Levi subgroups outside the regime");

    bool phi_ok = true;
    std::string witness;
    esplit::EsplitEngine::PhiResult pr;
    try {
      pr = es.phi(abac, ep);
    } catch (const std::exception& ex) {
      phi_ok = false;
      witness = ex.what();
    }
    rep.add(tag + "-phi-well-defined-monotone-equivariant", phi_ok, witness);
    if (!phi_ok)
      continue;

    // Quillen certificate per fiber (minimum search + stabilizer invariance
    // + acyclicity double-check), plus the exact predicted-minimum check
    topo::FiberActionProvider actions = [&](uint32_t y, const std::vector<uint32_t>& ids) {
      grp::Subgroup stab = es.esplit_pair_stabilizer(ep.pairs[y]);
      std::vector<std::vector<uint32_t>> perms;
      for (uint32_t s : stab.gens) {
        std::vector<uint32_t> perm(ids.size());
        for (uint32_t l = 0; l < ids.size(); ++l) {
          pairs::BrauerPair moved = eng.conj_pair(rg.whole, abac.pairs[ids[l]], s);
          auto ms = abac.index_of(moved);
          check(ms.has_value(), "stabilizer left the almost-centric poset");
          uint32_t ml = UINT32_MAX;
          for (uint32_t l2 = 0; l2 < ids.size(); ++l2)
            if (ids[l2] == *ms)
              ml = l2;
          check(ml != UINT32_MAX, "stabilizer left the fiber");
          perm[l] = ml;
        }
        perms.push_back(std::move(perm));
      }
      return perms;
    };
    topo::FiberReport fr = topo::quillen_fiber_check(abac.poset, pr.target_op, pr.map,
                                                     topo::FiberDirection::up, nullptr, actions,
                                                     fiber_cutoff);
    rep.add(tag + "-fibers-certified", fr.pass,
            fr.pass ? std::to_string(fr.entries.size()) + " fibers"
                    : fr.failure + first_failure(fr));

    bool minima_ok = true;
    for (auto& fm : es.fiber_minima(abac, ep, pr))
      if (!fm.pass()) {
        minima_ok = false;
        witness = "target " + std::to_string(fm.target) + ": " + fm.detail;
        break;
      }
    rep.add(tag + "-fiber-minima-are-the-predicted-pairs", minima_ok, witness);

    topo::SimplicialComplex cs = topo::order_complex(full.poset);
    topo::SimplicialComplex cl = topo::order_complex(ep.poset);
    topo::Homology hs = topo::homology(cs, true);
    topo::Homology hl = topo::homology(cl, true);
    rep.record_homology(tag + "-brauer-pairs", cs, hs);
    rep.record_homology(tag + "-esplit-pairs", cl, hl);
    rep.add(tag + "-homology-equality", hs == hl, hs.to_string() + " vs " + hl.to_string());
  }
  return rep;
}

// --- Brown-complex corollary harness ---

inline VerificationReport verify_brown_corollary(const red::ReductiveSpec& spec, uint32_t ell,
                                                 uint64_t cap = grp::kDefaultGroupCap,
                                                 unsigned threads = 1,
                                                 const std::string& cache_dir = "") {
  VerificationReport rep;
  rep.task = "brown-corollary";
  rep.instance = spec.describe() + " ell=" + std::to_string(ell);

  red::PrimeContext pc = red::prime_context(spec, ell);
  if (!pc.applicable) {
    rep.precondition_failed = true;
    rep.precondition_detail = pc.flag_report();
    return rep;
  }

  red::ReductiveGroup rg = red::build_reductive(spec, cap);
  pairs::PairEngine eng(alg::splitting_context(rg.G, ell));
  if (!cache_dir.empty())
    eng.enable_cache(cache_dir, rg.G->spec);
  esplit::EsplitEngine es(eng, rg, pc.e);
  alg::Workspace& ws = eng.workspace();
  size_t B0 = ws.algebra(rg.whole).principal_block();

  check_brown_homeomorphism(eng, rg.whole, rep, threads);

  // L -> (L, principal block of L^F) is an order isomorphism onto the
  // principal e-split poset, whose order is plain containment
  esplit::EsplitPoset ep = cache::build_esplit_poset_cached(es, B0, threads);
  const auto& levis = es.levis();

  rep.guarded("principal-blocks-induce-principal", [&] {
    for (uint32_t li = 0; li < levis.size(); ++li)
      check(es.twisted_induction(li, uint32_t(ws.algebra(levis[li].sub).principal_block())) == B0,
            "principal block of a Levi does not induce the principal block");
  });

  bool onto = ep.pairs.size() == levis.size();
  std::string witness;
  for (auto& p : ep.pairs)
    if (p.block != ws.algebra(levis[p.levi].sub).principal_block()) {
      onto = false;
      witness = "a non-principal block appears in the principal e-split poset";
    }
  rep.add("esplit-principal-poset-is-the-levi-poset", onto, witness);

  if (onto) {
    bool order_is_containment = true;
    for (uint32_t i = 0; i < ep.pairs.size() && order_is_containment; ++i)
      for (uint32_t j = 0; j < ep.pairs.size(); ++j) {
        bool incl = levis[ep.pairs[j].levi].sub.contains_all(levis[ep.pairs[i].levi].sub);
        if (incl != ep.poset.le(i, j)) {
          order_is_containment = false;
          witness = "order and containment disagree at (" + std::to_string(i) + "," +
                    std::to_string(j) + ")";
          break;
        }
      }
    rep.add("esplit-order-equals-containment", order_is_containment, witness);
  }

  // negative control: swapping in a non-principal block must break membership
  bool control_possible = false, control_ok = true;
  for (uint32_t li = 0; li < levis.size() && !control_possible; ++li) {
    const alg::SubgroupAlgebra& AL = ws.algebra(levis[li].sub);
    for (uint32_t b = 0; b < AL.blocks.size(); ++b)
      if (b != AL.principal_block()) {
        control_possible = true;
        if (ep.index_of(esplit::EsplitPair{li, b}).has_value())
          control_ok = false;
        break;
      }
  }
  rep.add("non-principal-control-detected", !control_possible || control_ok,
          control_possible ? "" : "no Levi with a second block; control skipped");

  // homology of the Brown complex equals that of the Levi poset
  auto [subs, spos] = subgroup_poset(eng, rg.whole);
  (void)subs;
  topo::SimplicialComplex cbrown = topo::order_complex(spos);
  topo::SimplicialComplex clevi = topo::order_complex(ep.poset);
  topo::Homology hbrown = topo::homology(cbrown, true);
  topo::Homology hlevi = topo::homology(clevi, true);
  rep.record_homology("brown-complex", cbrown, hbrown);
  rep.record_homology("esplit-levi-complex", clevi, hlevi);
  rep.add("brown-vs-levi-homology", hbrown == hlevi,
          hbrown.to_string() + " vs " + hlevi.to_string());
  return rep;
}

// --- instance registry ---

struct RegistryEntry {
  std::string name;
  std::string group_spec;
  uint32_t ell = 0;
  std::string tag;
};

inline std::vector<RegistryEntry> parse_registry_text(const std::string& text) {
  std::vector<RegistryEntry> out;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    std::string s = grp::detail::strip(line);
    if (s.empty() || s[0] == '#')
      continue;
    std::vector<std::string> parts = grp::detail::split_toplevel(s, '|');
    require(parts.size() >= 3, "registry line needs name | spec | ell [| tag]: " + line);
    RegistryEntry e;
    e.name = grp::detail::strip(parts[0]);
    e.group_spec = grp::detail::strip(parts[1]);
    e.ell = uint32_t(std::stoul(grp::detail::strip(parts[2])));
    if (parts.size() >= 4)
      e.tag = grp::detail::strip(parts[3]);
    out.push_back(std::move(e));
  }
  return out;
}

inline std::vector<RegistryEntry> load_registry(const std::string& path) {
  std::ifstream in(path);
  require(bool(in), "cannot open registry file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_registry_text(buf.str());
}

}  // namespace verify
}  // namespace brpairs
