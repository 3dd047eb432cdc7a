#pragma once

// Explicit finite reductive groups of type A: GL_n(q) and SL_n(q) as matrix
// groups, flags and parabolic subgroups with the Tits building, the prime
// predicates of generalized Harish-Chandra theory, and the enumeration of
// e-split Levi subgroups with their centers.
//
// e-split Levi subgroups are enumerated from the type classification for
// GL_n: an untwisted GL_m(q) block plus one GL_{a_i}(q^e) block per twisted
// part, embedded through the companion matrix of the canonical modulus of
// GF(q^e) over GF(q), then closed under conjugation. Algebraic-group objects
// (Sylow Phi_e-tori, connected centralizers) are never represented; the
// finite-side identity L^F = C_{G^F}(O_ell(Z(L^F))) is checked instead
// wherever the surrounding theory relies on it.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "common.hpp"
#include "gf.hpp"
#include "groups.hpp"
#include "topo.hpp"

namespace brpairs {
namespace red {

struct ReductiveSpec {
  enum class Family { GL, SL };
  Family family = Family::GL;
  uint32_t n = 0;
  uint64_t q = 0;
  uint32_t p = 0, f = 0;  // q = p^f

  static ReductiveSpec parse(const grp::GroupSpec& gs) {
    require(gs.kind == "GL" || gs.kind == "SL", "not a reductive group spec: " + gs.kind);
    ReductiveSpec rs;
    rs.family = gs.kind == "GL" ? Family::GL : Family::SL;
    rs.n = gs.n;
    rs.q = gs.q;
    auto [p, f] = grp::detail::prime_power(gs.q);
    rs.p = p;
    rs.f = f;
    return rs;
  }
  static ReductiveSpec parse(const std::string& text) {
    return parse(grp::parse_group_spec(text));
  }

  std::string kind() const { return family == Family::GL ? "GL" : "SL"; }
  std::string describe() const {
    return kind() + "_" + std::to_string(n) + "(" + std::to_string(q) + ")";
  }
  grp::GroupSpec group_spec() const {
    grp::GroupSpec gs;
    gs.kind = kind();
    gs.n = n;
    gs.q = q;
    return gs;
  }
  uint64_t group_order() const {
    uint64_t o = grp::gl_order(n, q);
    return family == Family::GL ? o : o / (q - 1);
  }
  uint64_t center_order() const {
    return family == Family::GL ? q - 1 : gcd_u64(n, q - 1);
  }
  // order of Z(G_sc)^F for G_sc = SL_n
  uint64_t center_sc_order() const { return gcd_u64(n, q - 1); }
  // |Z(G)^F : Z(G)^{F,o}|: the center of GL is connected, for SL it is finite
  uint64_t component_index() const {
    return family == Family::GL ? 1 : gcd_u64(n, q - 1);
  }
  // dual side: GL is self-dual, the dual of SL is adjoint with trivial center
  uint64_t dual_component_index() const { return 1; }
};

struct ReductiveGroup {
  ReductiveSpec spec;
  std::shared_ptr<grp::Group> G;
  grp::Subgroup whole;
  const gf::Field* Fq = nullptr;

  uint32_t n() const { return spec.n; }
};

inline ReductiveGroup build_reductive(const ReductiveSpec& spec,
                                      uint64_t cap = grp::kDefaultGroupCap) {
  ReductiveGroup rg;
  rg.spec = spec;
  rg.G = grp::generate_group(spec.group_spec(), cap);
  rg.whole = grp::whole_group(*rg.G);
  rg.Fq = rg.G->field;
  check(rg.G->size() == spec.group_order(), "group order does not match the product formula");
  check(grp::center(rg.whole).order() == spec.center_order(),
        "center order does not match the formula");
  return rg;
}

// --- vectors and subspaces of the natural module ---

namespace detail {

// vectors of F_q^n encoded as integers, digit i = coordinate i
inline uint64_t vec_code(const std::vector<gf::elt>& v, uint64_t q) {
  uint64_t code = 0;
  for (size_t i = v.size(); i-- > 0;)
    code = code * q + v[i];
  return code;
}
inline std::vector<gf::elt> vec_decode(uint64_t code, uint32_t n, uint64_t q) {
  std::vector<gf::elt> v(n);
  for (uint32_t i = 0; i < n; ++i) {
    v[i] = gf::elt(code % q);
    code /= q;
  }
  return v;
}

// row vector times matrix (packed group element key)
inline uint64_t vec_apply(const ReductiveGroup& rg, uint64_t vcode, uint64_t mkey) {
  const gf::Field& F = *rg.Fq;
  uint32_t n = rg.n(), bits = rg.G->entry_bits;
  uint64_t emask = (1ull << bits) - 1;
  std::vector<gf::elt> v = vec_decode(vcode, n, F.size);
  std::vector<gf::elt> w(n, 0);
  for (uint32_t j = 0; j < n; ++j) {
    gf::elt acc = 0;
    for (uint32_t i = 0; i < n; ++i)
      if (v[i])
        acc = F.add(acc, F.mul(v[i], gf::elt((mkey >> (bits * (i * n + j))) & emask)));
    w[j] = acc;
  }
  return vec_code(w, F.size);
}

}  // namespace detail

// a subspace is the sorted list of its member vector codes (0 included)
using Subspace = std::vector<uint64_t>;

inline Subspace span_with(const ReductiveGroup& rg, const Subspace& base, uint64_t extra) {
  const gf::Field& F = *rg.Fq;
  uint32_t n = rg.n();
  std::set<uint64_t> out(base.begin(), base.end());
  for (uint64_t s : base) {
    std::vector<gf::elt> vs = detail::vec_decode(s, n, F.size);
    std::vector<gf::elt> ve = detail::vec_decode(extra, n, F.size);
    for (gf::elt c = 0; c < F.size; ++c) {
      std::vector<gf::elt> sum(n);
      for (uint32_t i = 0; i < n; ++i)
        sum[i] = F.add(vs[i], F.mul(c, ve[i]));
      out.insert(detail::vec_code(sum, F.size));
    }
  }
  return Subspace(out.begin(), out.end());
}

// all proper nonzero subspaces, sorted by (size, member list)
inline std::vector<Subspace> proper_subspaces(const ReductiveGroup& rg) {
  uint64_t total = ipow_u64(rg.Fq->size, rg.n());
  std::set<Subspace> seen;
  std::vector<Subspace> queue{Subspace{0}};
  seen.insert(queue[0]);
  for (size_t i = 0; i < queue.size(); ++i) {
    if (queue[i].size() == total)
      continue;
    for (uint64_t v = 1; v < total; ++v) {
      if (std::binary_search(queue[i].begin(), queue[i].end(), v))
        continue;
      Subspace bigger = span_with(rg, queue[i], v);
      if (seen.insert(bigger).second)
        queue.push_back(std::move(bigger));
    }
  }
  std::vector<Subspace> out;
  for (auto& s : seen)
    if (s.size() > 1 && s.size() < total)
      out.push_back(s);
  std::sort(out.begin(), out.end(), [](const Subspace& a, const Subspace& b) {
    if (a.size() != b.size())
      return a.size() < b.size();
    return a < b;
  });
  return out;
}

// stabilizer of a subspace in the finite group
inline grp::Subgroup subspace_stabilizer(const ReductiveGroup& rg, const Subspace& V) {
  // a small spanning set: greedily take vectors independent of the span so far
  std::vector<uint64_t> basis;
  Subspace span{0};
  for (uint64_t v : V)
    if (v && !std::binary_search(span.begin(), span.end(), v)) {
      basis.push_back(v);
      span = span_with(rg, span, v);
    }
  std::vector<uint32_t> keep;
  for (uint32_t gi = 0; gi < rg.G->size(); ++gi) {
    bool ok = true;
    for (uint64_t b : basis)
      if (!std::binary_search(V.begin(), V.end(), detail::vec_apply(rg, b, rg.G->keys[gi]))) {
        ok = false;
        break;
      }
    if (ok)
      keep.push_back(gi);
  }
  return grp::subgroup_from_elements(*rg.G, std::move(keep));
}

// --- flags, parabolic subgroups, Tits building ---

struct FlagParabolic {
  std::vector<uint32_t> flag;  // indices into the proper_subspaces list, increasing dimension
  grp::Subgroup parabolic;
};

struct ParabolicData {
  std::vector<Subspace> subspaces;
  std::vector<FlagParabolic> flags;  // all nonempty flags
  topo::Poset poset;                 // parabolics ordered by inclusion
};

inline ParabolicData parabolic_poset(const ReductiveGroup& rg) {
  ParabolicData out;
  out.subspaces = proper_subspaces(rg);
  size_t ns = out.subspaces.size();

  std::vector<grp::Subgroup> stabs;
  stabs.reserve(ns);
  for (auto& V : out.subspaces)
    stabs.push_back(subspace_stabilizer(rg, V));

  // enumerate flags: chains of subspaces under set inclusion
  std::vector<std::vector<uint32_t>> chains;
  for (uint32_t i = 0; i < ns; ++i)
    chains.push_back({i});
  for (size_t i = 0; i < chains.size(); ++i) {
    uint32_t top = chains[i].back();
    for (uint32_t j = top + 1; j < ns; ++j) {
      if (out.subspaces[j].size() <= out.subspaces[top].size())
        continue;
      if (std::includes(out.subspaces[j].begin(), out.subspaces[j].end(),
                        out.subspaces[top].begin(), out.subspaces[top].end()))
        chains.push_back([&] {
          std::vector<uint32_t> ext = chains[i];
          ext.push_back(j);
          return ext;
        }());
    }
  }
  std::sort(chains.begin(), chains.end());

  std::set<std::vector<uint32_t>> distinct_parabolics;
  for (auto& ch : chains) {
    FlagParabolic fp;
    fp.flag = ch;
    std::vector<uint32_t> inter = stabs[ch[0]].elems;
    for (size_t t = 1; t < ch.size(); ++t) {
      std::vector<uint32_t> next;
      std::set_intersection(inter.begin(), inter.end(), stabs[ch[t]].elems.begin(),
                            stabs[ch[t]].elems.end(), std::back_inserter(next));
      inter = std::move(next);
    }
    fp.parabolic = grp::subgroup_from_elements(*rg.G, std::move(inter));
    check(distinct_parabolics.insert(fp.parabolic.elems).second,
          "two distinct flags produced the same parabolic subgroup");
    out.flags.push_back(std::move(fp));
  }

  size_t np = out.flags.size();
  out.poset.leq = topo::BitMatrix(np);
  for (size_t i = 0; i < np; ++i) {
    std::string lbl = "P[";
    for (size_t t = 0; t < out.flags[i].flag.size(); ++t)
      lbl += (t ? "<" : "") + std::to_string(out.flags[i].flag[t]);
    out.poset.labels.push_back(lbl + "]");
    for (size_t j = 0; j < np; ++j)
      if (out.flags[j].parabolic.contains_all(out.flags[i].parabolic))
        out.poset.leq.set(i, j);
  }
  out.poset.validate();
  return out;
}

// the barycentric model of the building: the order complex of the opposite
// of the poset of proper parabolic subgroups
inline topo::SimplicialComplex tits_building(const ParabolicData& pd) {
  return topo::order_complex(topo::opposite(pd.poset));
}

// --- prime predicates ---

struct PrimeContext {
  uint32_t ell = 0;
  uint32_t e = 0;  // multiplicative order of q mod ell
  bool good = false, odd = false, coprime_q = false, coprime_center_sc = false;
  bool no_triality = true;  // vacuous in type A
  bool coprime_component_index = false, coprime_dual_component_index = false;
  uint64_t center_order = 0;
  bool in_pi_prime = false, in_pi = false;
  // the full hypotheses of the non-defining equivalence: in pi, and ell
  // coprime to the order of the fixed-point center
  bool applicable = false;

  std::string flag_report() const {
    std::string s;
    auto add = [&](const char* name, bool v) {
      s += std::string(name) + "=" + (v ? "yes" : "no") + " ";
    };
    add("good", good);
    add("odd", odd);
    add("coprime-q", coprime_q);
    add("coprime-|Z(Gsc)^F|", coprime_center_sc);
    add("no-3D4", no_triality);
    add("coprime-|Z:Z0|", coprime_component_index);
    add("coprime-dual-|Z:Z0|", coprime_dual_component_index);
    add("in-pi'", in_pi_prime);
    add("in-pi", in_pi);
    s += "ell-coprime-|Z(G)^F|=" + std::string(applicable ? "yes" : "no");
    return s;
  }
};

inline PrimeContext prime_context(const ReductiveSpec& spec, uint32_t ell) {
  require(is_prime_u64(ell), "ell must be prime");
  require(spec.q % ell != 0, "ell equals the defining characteristic");
  PrimeContext pc;
  pc.ell = ell;
  pc.e = gf::mult_order(spec.q, ell);
  pc.good = true;  // every prime is good in type A
  pc.odd = ell != 2;
  pc.coprime_q = spec.q % ell != 0;
  pc.coprime_center_sc = spec.center_sc_order() % ell != 0;
  pc.coprime_component_index = spec.component_index() % ell != 0;
  pc.coprime_dual_component_index = spec.dual_component_index() % ell != 0;
  pc.center_order = spec.center_order();
  pc.in_pi_prime = pc.good && pc.odd && pc.coprime_q && pc.coprime_center_sc && pc.no_triality;
  pc.in_pi = pc.in_pi_prime && pc.coprime_component_index && pc.coprime_dual_component_index;
  pc.applicable = pc.in_pi && (pc.center_order % ell != 0);
  return pc;
}

// --- e-split Levi subgroups ---

struct LeviType {
  uint32_t m = 0;                // size of the untwisted GL_m(q) block
  std::vector<uint32_t> a;       // twisted block sizes, descending

  std::string describe() const {
    std::string s = "(" + std::to_string(m) + ",[";
    for (size_t i = 0; i < a.size(); ++i)
      s += (i ? "," : "") + std::to_string(a[i]);
    return s + "])";
  }
  bool operator<(const LeviType& o) const {
    if (m != o.m)
      return m > o.m;  // more split first
    return a > o.a;
  }
  bool operator==(const LeviType& o) const { return m == o.m && a == o.a; }
};

// all types with m + e * sum(a) = n, excluding the full group (n, [])
inline std::vector<LeviType> levi_types(uint32_t n, uint32_t e) {
  std::vector<LeviType> out;
  std::vector<uint32_t> part;
  std::function<void(uint32_t, uint32_t)> rec = [&](uint32_t remaining, uint32_t maxpart) {
    if (remaining == 0) {
      LeviType t;
      t.m = n - e * uint32_t([&] {
              uint32_t s = 0;
              for (uint32_t x : part)
                s += x;
              return s;
            }());
      t.a = part;
      if (!(t.m == n && t.a.empty()))
        out.push_back(t);
      return;
    }
    for (uint32_t next = std::min(remaining, maxpart); next >= 1; --next) {
      part.push_back(next);
      rec(remaining - next, next);
      part.pop_back();
    }
  };
  for (uint32_t twisted = 0; e * twisted <= n; ++twisted) {
    part.clear();
    rec(twisted, twisted ? twisted : 1);
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct EmbeddedLevi {
  LeviType type;
  grp::Subgroup sub;         // L^F
  grp::Subgroup center;      // Z(L^F)
  grp::Subgroup center_ell;  // O_ell(Z(L^F))
  uint64_t order_formula = 0;

  bool operator<(const EmbeddedLevi& o) const { return sub < o.sub; }
};

namespace detail {

// e x e companion-matrix image of a residue polynomial over GF(q)
inline std::vector<std::vector<gf::elt>> companion_image(const gf::Poly& f, const gf::Poly& mu) {
  const gf::Field& F = *mu.field;
  uint32_t e = uint32_t(mu.degree());
  // companion matrix of mu: C[i][j], rows are images of basis vectors
  std::vector<std::vector<gf::elt>> C(e, std::vector<gf::elt>(e, 0));
  for (uint32_t i = 0; i + 1 < e; ++i)
    C[i][i + 1] = 1;
  for (uint32_t j = 0; j < e; ++j)
    C[e - 1][j] = F.neg(mu.coeff(j));
  auto matmul = [&](const std::vector<std::vector<gf::elt>>& x,
                    const std::vector<std::vector<gf::elt>>& y) {
    std::vector<std::vector<gf::elt>> z(e, std::vector<gf::elt>(e, 0));
    for (uint32_t i = 0; i < e; ++i)
      for (uint32_t k = 0; k < e; ++k)
        if (x[i][k])
          for (uint32_t j = 0; j < e; ++j)
            z[i][j] = F.add(z[i][j], F.mul(x[i][k], y[k][j]));
    return z;
  };
  std::vector<std::vector<gf::elt>> acc(e, std::vector<gf::elt>(e, 0));
  std::vector<std::vector<gf::elt>> power(e, std::vector<gf::elt>(e, 0));
  for (uint32_t i = 0; i < e; ++i)
    power[i][i] = 1;
  for (int d = 0; d <= f.degree(); ++d) {
    gf::elt c = f.coeff(size_t(d));
    if (c)
      for (uint32_t i = 0; i < e; ++i)
        for (uint32_t j = 0; j < e; ++j)
          acc[i][j] = F.add(acc[i][j], F.mul(c, power[i][j]));
    power = matmul(power, C);
  }
  return acc;
}

// generators of GL_a(q^e) as (ae) x (ae) matrices over GF(q)
inline std::vector<std::vector<std::vector<gf::elt>>> twisted_block_generators(const gf::Field& Fq,
                                                                               uint32_t a,
                                                                               uint32_t e) {
  gf::Poly mu = gf::canonical_extension_modulus(Fq, e);
  gf::Poly xi = gf::primitive_element_mod(mu);
  uint32_t size = a * e;
  auto ident = [&]() {
    std::vector<std::vector<gf::elt>> m(size, std::vector<gf::elt>(size, 0));
    for (uint32_t i = 0; i < size; ++i)
      m[i][i] = 1;
    return m;
  };
  auto put_block = [&](std::vector<std::vector<gf::elt>>& m, uint32_t bi, uint32_t bj,
                       const std::vector<std::vector<gf::elt>>& blk) {
    for (uint32_t i = 0; i < e; ++i)
      for (uint32_t j = 0; j < e; ++j)
        m[bi * e + i][bj * e + j] = blk[i][j];
  };
  std::vector<std::vector<std::vector<gf::elt>>> gens;
  // diag(xi, 1, ..., 1)
  {
    auto m = ident();
    put_block(m, 0, 0, companion_image(xi, mu));
    gens.push_back(m);
  }
  // adjacent transvections with entries running over a GF(q)-basis of GF(q^e)
  for (uint32_t i = 0; i + 1 < a; ++i)
    for (uint32_t s = 0; s < e; ++s) {
      std::vector<gf::elt> basis_coeffs(s + 1, 0);
      basis_coeffs[s] = 1;
      gf::Poly t(Fq, basis_coeffs);
      auto m1 = ident();
      put_block(m1, i, i + 1, companion_image(t, mu));
      gens.push_back(m1);
      auto m2 = ident();
      put_block(m2, i + 1, i, companion_image(t, mu));
      gens.push_back(m2);
    }
  return gens;
}

inline uint64_t pack_matrix(const ReductiveGroup& rg, const std::vector<std::vector<gf::elt>>& m) {
  uint32_t n = rg.n(), bits = rg.G->entry_bits;
  uint64_t key = 0;
  for (uint32_t i = 0; i < n; ++i)
    for (uint32_t j = 0; j < n; ++j)
      key |= uint64_t(m[i][j]) << (bits * (i * n + j));
  return key;
}

}  // namespace detail

// the standard block-diagonal Levi of the given type, inside G^F
inline grp::Subgroup standard_levi(const ReductiveGroup& rg, const LeviType& type, uint32_t e) {
  const gf::Field& Fq = *rg.Fq;
  uint32_t n = rg.n();
  auto ident = [&]() {
    std::vector<std::vector<gf::elt>> m(n, std::vector<gf::elt>(n, 0));
    for (uint32_t i = 0; i < n; ++i)
      m[i][i] = 1;
    return m;
  };
  std::vector<uint64_t> gen_keys;
  auto add_submatrix = [&](uint32_t offset, const std::vector<std::vector<gf::elt>>& blk) {
    auto m = ident();
    for (size_t i = 0; i < blk.size(); ++i)
      for (size_t j = 0; j < blk.size(); ++j)
        m[offset + i][offset + j] = blk[i][j];
    gen_keys.push_back(detail::pack_matrix(rg, m));
  };

  // untwisted GL_m(q) part
  if (type.m >= 1) {
    if (Fq.size > 2) {
      gf::elt xi = 0;
      for (gf::elt cand = 1; cand < Fq.size && !xi; ++cand)
        if (Fq.mult_order_of(cand) == Fq.size - 1)
          xi = cand;
      std::vector<std::vector<gf::elt>> d(type.m, std::vector<gf::elt>(type.m, 0));
      for (uint32_t i = 0; i < type.m; ++i)
        d[i][i] = i == 0 ? xi : 1;
      add_submatrix(0, d);
    }
    for (uint32_t i = 0; i + 1 < type.m; ++i) {
      std::vector<std::vector<gf::elt>> t1(type.m, std::vector<gf::elt>(type.m, 0)),
          t2(type.m, std::vector<gf::elt>(type.m, 0));
      for (uint32_t d2 = 0; d2 < type.m; ++d2)
        t1[d2][d2] = t2[d2][d2] = 1;
      t1[i][i + 1] = 1;
      t2[i + 1][i] = 1;
      add_submatrix(0, t1);
      add_submatrix(0, t2);
    }
  }
  // twisted parts
  uint32_t offset = type.m;
  for (uint32_t ai : type.a) {
    for (auto& blk : detail::twisted_block_generators(Fq, ai, e))
      add_submatrix(offset, blk);
    offset += ai * e;
  }
  check(offset == n, "Levi type does not fill the natural module");

  std::vector<uint32_t> gen_idx;
  for (uint64_t k : gen_keys)
    gen_idx.push_back(rg.G->index_of(k));
  return grp::subgroup_from_generators(*rg.G, gen_idx);
}

inline uint64_t levi_order_formula(const ReductiveSpec& spec, const LeviType& type, uint32_t e) {
  uint64_t o = type.m ? grp::gl_order(type.m, spec.q) : 1;
  for (uint32_t ai : type.a)
    o *= grp::gl_order(ai, ipow_u64(spec.q, e));
  return o;
}

// every proper e-split Levi subgroup: standard representatives per type,
// closed under conjugation, deduplicated, deterministically ordered
inline std::vector<EmbeddedLevi> enumerate_esplit_levis(const ReductiveGroup& rg, uint32_t e,
                                                        uint32_t ell) {
  require(rg.spec.family == ReductiveSpec::Family::GL,
          "e-split enumeration is implemented for GL only");
  std::set<std::vector<uint32_t>> seen;
  std::vector<EmbeddedLevi> out;
  auto push = [&](const LeviType& type, grp::Subgroup sub, uint64_t formula) {
    if (!seen.insert(sub.elems).second)
      return false;
    EmbeddedLevi lv;
    lv.type = type;
    lv.center = grp::center(sub);
    lv.center_ell = grp::ell_torsion(lv.center, ell);
    lv.order_formula = formula;
    lv.sub = std::move(sub);
    check(lv.sub.order() == formula, "Levi order does not match the product formula for type " +
                                         type.describe());
    // the finite-side e-split identity: whenever ell divides the center, the
    // Levi is the full centralizer of the ell-part of its center
    if (lv.center_ell.order() > 1)
      check(grp::centralizer(rg.whole, lv.center_ell).elems == lv.sub.elems,
            "Levi is not the centralizer of the ell-part of its center: " + type.describe());
    out.push_back(std::move(lv));
    return true;
  };

  for (const LeviType& type : levi_types(rg.n(), e)) {
    uint64_t formula = levi_order_formula(rg.spec, type, e);
    if (formula == rg.G->size())
      continue;  // the improper full group (split types collapse at e = 1)
    grp::Subgroup standard = standard_levi(rg, type, e);
    if (standard.order() == rg.G->size())
      continue;
    size_t first = out.size();
    if (!push(type, standard, formula))
      continue;  // same subgroup as an earlier type (e = 1 collapse)
    for (size_t i = first; i < out.size(); ++i)
      for (uint32_t g : rg.whole.gens) {
        grp::Subgroup conj = grp::conj_subgroup(out[i].sub, g);
        push(type, std::move(conj), formula);
      }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// inclusion-minimal enumerated Levi containing H; absent when only the full
// group contains H. Uniqueness of the minimal element is asserted, and the
// minimum is verified against every containing Levi.
inline std::optional<size_t> minimal_esplit_containing(const std::vector<EmbeddedLevi>& levis,
                                                       const grp::Subgroup& H) {
  std::vector<size_t> containing;
  for (size_t i = 0; i < levis.size(); ++i)
    if (levis[i].sub.contains_all(H))
      containing.push_back(i);
  if (containing.empty())
    return std::nullopt;  // the sentinel full-group case
  std::vector<size_t> minimal;
  for (size_t i : containing) {
    bool is_min = true;
    for (size_t j : containing)
      if (j != i && levis[i].sub.contains_all(levis[j].sub) && !(levis[j].sub == levis[i].sub))
        is_min = false;
    if (is_min)
      minimal.push_back(i);
  }
  check(minimal.size() == 1, "minimal containing e-split Levi is not unique (" +
                                 std::to_string(minimal.size()) + " candidates)");
  for (size_t j : containing)
    check(levis[j].sub.contains_all(levis[minimal[0]].sub),
          "minimal Levi is not below every containing Levi");
  return minimal[0];
}

// --- defining characteristic data ---

struct DefiningCharData {
  grp::Subgroup U;  // upper unitriangular subgroup, a Sylow p-subgroup
  bool centralizer_identity = false;  // C_{G^F}(U) = Z(G^F) Z(U), checked exactly
};

inline DefiningCharData defining_char_data(const ReductiveGroup& rg) {
  const gf::Field& F = *rg.Fq;
  uint32_t n = rg.n();
  // enumerate all unitriangular matrices directly
  uint32_t positions = n * (n - 1) / 2;
  uint64_t count = ipow_u64(F.size, positions);
  std::vector<uint32_t> elems;
  for (uint64_t code = 0; code < count; ++code) {
    std::vector<std::vector<gf::elt>> m(n, std::vector<gf::elt>(n, 0));
    for (uint32_t i = 0; i < n; ++i)
      m[i][i] = 1;
    uint64_t t = code;
    for (uint32_t i = 0; i < n; ++i)
      for (uint32_t j = i + 1; j < n; ++j) {
        m[i][j] = gf::elt(t % F.size);
        t /= F.size;
      }
    elems.push_back(rg.G->index_of(detail::pack_matrix(rg, m)));
  }
  DefiningCharData out;
  out.U = grp::subgroup_from_elements(*rg.G, std::move(elems));
  uint64_t sylow_order = 1, rest = rg.G->size();
  while (rest % rg.spec.p == 0) {
    rest /= rg.spec.p;
    sylow_order *= rg.spec.p;
  }
  check(out.U.order() == sylow_order, "unitriangular subgroup is not a Sylow p-subgroup");

  grp::Subgroup C = grp::centralizer(rg.whole, out.U);
  grp::Subgroup ZG = grp::center(rg.whole);
  grp::Subgroup ZU = grp::center(out.U);
  grp::Subgroup prod = grp::product_subgroup(ZG, ZU);
  out.centralizer_identity = C.elems == prod.elems;
  return out;
}

}  // namespace red
}  // namespace brpairs
