#pragma once

// Finite group engine: element arithmetic, full enumeration, subgroup queries.
//
// Groups are fully enumerated (desk scale, default cap 25000 elements), so
// every query is an honest scan over the element table. Elements live in one
// of two representations: permutations on up to 16 points, or invertible
// matrices over a small finite field, packed into a single 64-bit key.
// The identity always has index 0; the rest follow in breadth-first order
// from the generators, which makes the numbering reproducible.

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "common.hpp"
#include "gf.hpp"

namespace brpairs {
namespace grp {

inline constexpr uint64_t kDefaultGroupCap = 25000;

enum class Rep { perm, mat };

struct Group {
  Rep rep = Rep::perm;
  uint32_t degree = 0;                // points (perm) or matrix dimension (mat)
  const gf::Field* field = nullptr;   // matrix entries
  uint32_t entry_bits = 0;
  std::string spec;                   // canonical spec string

  std::vector<uint64_t> keys;         // packed element per index
  std::vector<uint32_t> inv;
  std::vector<uint32_t> elt_order;
  uint64_t exponent = 1;
  std::vector<uint32_t> gens;         // generator indices

  std::vector<uint32_t> class_of;     // conjugacy class id per element
  std::vector<std::vector<uint32_t>> classes;  // id -> sorted member indices

  size_t size() const { return keys.size(); }

  // --- packed-key arithmetic ---

  uint64_t mul_key(uint64_t a, uint64_t b) const {
    if (rep == Rep::perm) {
      uint64_t c = 0;
      for (uint32_t i = 0; i < degree; ++i) {
        uint64_t ai = (a >> (4 * i)) & 15;
        uint64_t ci = (b >> (4 * ai)) & 15;
        c |= ci << (4 * i);
      }
      return c;
    }
    if (field->size == 2) {
      // rows are bit masks inside the key
      uint32_t n = degree;
      uint64_t mask = (1ull << n) - 1, c = 0;
      for (uint32_t i = 0; i < n; ++i) {
        uint64_t row = (a >> (n * i)) & mask, acc = 0;
        for (uint32_t j = 0; j < n; ++j)
          if ((row >> j) & 1)
            acc ^= (b >> (n * j)) & mask;
        c |= acc << (n * i);
      }
      return c;
    }
    const gf::Field& F = *field;
    uint32_t n = degree, bits = entry_bits;
    uint64_t emask = (1ull << bits) - 1, c = 0;
    for (uint32_t i = 0; i < n; ++i)
      for (uint32_t j = 0; j < n; ++j) {
        gf::elt acc = 0;
        for (uint32_t k = 0; k < n; ++k) {
          gf::elt x = gf::elt((a >> (bits * (i * n + k))) & emask);
          gf::elt y = gf::elt((b >> (bits * (k * n + j))) & emask);
          acc = F.add(acc, F.mul(x, y));
        }
        c |= uint64_t(acc) << (bits * (i * n + j));
      }
    return c;
  }

  uint64_t identity_key() const {
    uint64_t k = 0;
    if (rep == Rep::perm) {
      for (uint32_t i = 0; i < degree; ++i)
        k |= uint64_t(i) << (4 * i);
    } else {
      for (uint32_t i = 0; i < degree; ++i)
        k |= 1ull << (entry_bits * (i * degree + i));
    }
    return k;
  }

  uint64_t inv_key(uint64_t a) const {
    if (rep == Rep::perm) {
      uint64_t c = 0;
      for (uint32_t i = 0; i < degree; ++i) {
        uint64_t ai = (a >> (4 * i)) & 15;
        c |= uint64_t(i) << (4 * ai);
      }
      return c;
    }
    // Gauss-Jordan over the field
    const gf::Field& F = *field;
    uint32_t n = degree, bits = entry_bits;
    uint64_t emask = (1ull << bits) - 1;
    gf::FMatrix m(F, n, 2 * n);
    for (uint32_t i = 0; i < n; ++i) {
      for (uint32_t j = 0; j < n; ++j)
        m.at(i, j) = gf::elt((a >> (bits * (i * n + j))) & emask);
      m.at(i, n + i) = 1;
    }
    std::vector<size_t> piv = gf::rref(m);
    require(piv.size() == n && piv.back() == n - 1, "singular matrix has no inverse");
    uint64_t c = 0;
    for (uint32_t i = 0; i < n; ++i)
      for (uint32_t j = 0; j < n; ++j)
        c |= uint64_t(m.at(i, n + j)) << (bits * (i * n + j));
    return c;
  }

  // --- index-level arithmetic ---

  uint32_t index_of(uint64_t key) const {
    if (!direct_.empty()) {
      int32_t v = direct_[key];
      check(v >= 0, "element key outside the enumerated group");
      return uint32_t(v);
    }
    auto it = map_.find(key);
    check(it != map_.end(), "element key outside the enumerated group");
    return it->second;
  }
  std::optional<uint32_t> try_index_of(uint64_t key) const {
    if (!direct_.empty()) {
      int32_t v = direct_[key];
      return v < 0 ? std::nullopt : std::optional<uint32_t>(uint32_t(v));
    }
    auto it = map_.find(key);
    return it == map_.end() ? std::nullopt : std::optional<uint32_t>(it->second);
  }

  uint32_t mul(uint32_t i, uint32_t j) const { return index_of(mul_key(keys[i], keys[j])); }
  // x^g = g^-1 x g
  uint32_t conj(uint32_t x, uint32_t g) const { return mul(mul(inv[g], x), g); }

  bool is_ell_element(uint32_t i, uint32_t ell) const {
    uint32_t o = elt_order[i];
    while (o % ell == 0)
      o /= ell;
    return o == 1;
  }

  std::string describe_element(uint32_t i) const {
    uint64_t k = keys[i];
    std::ostringstream os;
    if (rep == Rep::perm) {
      os << "[";
      for (uint32_t p = 0; p < degree; ++p)
        os << (p ? "," : "") << (((k >> (4 * p)) & 15) + 1);
      os << "]";
    } else {
      uint64_t emask = (1ull << entry_bits) - 1;
      os << "[";
      for (uint32_t r = 0; r < degree; ++r) {
        os << (r ? ";[" : "[");
        for (uint32_t c = 0; c < degree; ++c)
          os << (c ? "," : "") << ((k >> (entry_bits * (r * degree + c))) & emask);
        os << "]";
      }
      os << "]";
    }
    return os.str();
  }

  void build_from_generator_keys(const std::vector<uint64_t>& gen_keys, uint64_t cap);

private:
  std::vector<int32_t> direct_;
  std::unordered_map<uint64_t, uint32_t> map_;
  uint32_t key_bits_ = 0;

  friend struct GroupBuilder;
};

inline void Group::build_from_generator_keys(const std::vector<uint64_t>& gen_keys, uint64_t cap) {
  key_bits_ = rep == Rep::perm ? 4 * degree : entry_bits * degree * degree;
  bool use_direct = key_bits_ <= 22;
  if (use_direct)
    direct_.assign(1ull << key_bits_, -1);

  auto insert = [&](uint64_t key) -> std::pair<uint32_t, bool> {
    if (use_direct) {
      int32_t& slot = direct_[key];
      if (slot >= 0)
        return {uint32_t(slot), false};
      slot = int32_t(keys.size());
      keys.push_back(key);
      return {uint32_t(slot), true};
    }
    auto [it, fresh] = map_.emplace(key, uint32_t(keys.size()));
    if (fresh)
      keys.push_back(key);
    return {it->second, fresh};
  };

  keys.clear();
  insert(identity_key());
  std::vector<uint64_t> gk = gen_keys;
  for (uint64_t g : gk)
    insert(g);
  // breadth-first closure under right multiplication
  for (size_t i = 0; i < keys.size(); ++i) {
    for (uint64_t g : gk) {
      insert(mul_key(keys[i], g));
      require(keys.size() <= cap, "group order exceeds cap (" + std::to_string(cap) + ")");
    }
  }

  gens.clear();
  for (uint64_t g : gk)
    gens.push_back(index_of(g));

  inv.resize(size());
  for (size_t i = 0; i < size(); ++i)
    inv[i] = index_of(inv_key(keys[i]));

  elt_order.resize(size());
  exponent = 1;
  for (size_t i = 0; i < size(); ++i) {
    uint32_t o = 1, cur = uint32_t(i);
    while (cur != 0) {
      cur = mul(cur, uint32_t(i));
      ++o;
    }
    elt_order[i] = o;
    exponent = lcm_u64(exponent, o);
  }

  // conjugacy classes: orbits under conjugation by the generators
  class_of.assign(size(), UINT32_MAX);
  classes.clear();
  for (uint32_t i = 0; i < size(); ++i) {
    if (class_of[i] != UINT32_MAX)
      continue;
    uint32_t id = uint32_t(classes.size());
    std::vector<uint32_t> members, stack{i};
    class_of[i] = id;
    while (!stack.empty()) {
      uint32_t x = stack.back();
      stack.pop_back();
      members.push_back(x);
      for (uint32_t g : gens) {
        uint32_t y = conj(x, g);
        if (class_of[y] == UINT32_MAX) {
          class_of[y] = id;
          stack.push_back(y);
        }
      }
    }
    std::sort(members.begin(), members.end());
    classes.push_back(std::move(members));
  }
}

// ---------------------------------------------------------------------------
// Subgroups: sorted element-index sets plus a small generating set.
// The sorted index vector is the canonical serialization.
// ---------------------------------------------------------------------------

struct Subgroup {
  const Group* G = nullptr;
  std::vector<uint32_t> elems;  // ascending
  std::vector<uint32_t> gens;

  size_t order() const { return elems.size(); }
  bool contains(uint32_t x) const {
    return std::binary_search(elems.begin(), elems.end(), x);
  }
  bool contains_all(const Subgroup& other) const {
    return std::includes(elems.begin(), elems.end(), other.elems.begin(), other.elems.end());
  }
  bool operator==(const Subgroup& o) const { return G == o.G && elems == o.elems; }
  bool operator<(const Subgroup& o) const {
    if (elems.size() != o.elems.size())
      return elems.size() < o.elems.size();
    return elems < o.elems;
  }

  std::string key() const {
    std::string s = "S" + std::to_string(elems.size()) + ":";
    for (uint32_t e : elems)
      s += std::to_string(e) + ",";
    return s;
  }
};

inline std::vector<uint32_t> closure_indices(const Group& G, std::vector<uint32_t> seed) {
  std::sort(seed.begin(), seed.end());
  seed.erase(std::unique(seed.begin(), seed.end()), seed.end());
  std::set<uint32_t> have(seed.begin(), seed.end());
  have.insert(0);
  std::vector<uint32_t> queue(have.begin(), have.end());
  for (size_t i = 0; i < queue.size(); ++i)
    for (uint32_t g : seed) {
      uint32_t x = G.mul(queue[i], g);
      if (have.insert(x).second)
        queue.push_back(x);
    }
  return std::vector<uint32_t>(have.begin(), have.end());
}

// greedy small generating set for a subgroup given by its element list
inline std::vector<uint32_t> small_generating_set(const Group& G, const std::vector<uint32_t>& elems) {
  std::vector<uint32_t> gens;
  std::vector<uint32_t> closed{0};
  for (uint32_t cand : elems) {
    if (std::binary_search(closed.begin(), closed.end(), cand))
      continue;
    gens.push_back(cand);
    closed = closure_indices(G, gens);
    if (closed.size() == elems.size())
      break;
  }
  return gens;
}

inline Subgroup subgroup_from_elements(const Group& G, std::vector<uint32_t> elems,
                                       bool verify_closure = false) {
  std::sort(elems.begin(), elems.end());
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
  require(!elems.empty() && elems[0] == 0, "subgroup must contain the identity");
  Subgroup H;
  H.G = &G;
  H.elems = std::move(elems);
  if (verify_closure)
    for (uint32_t a : H.elems)
      for (uint32_t b : H.elems)
        require(H.contains(G.mul(a, b)), "element set is not closed under products");
  H.gens = small_generating_set(G, H.elems);
  return H;
}

inline Subgroup subgroup_from_generators(const Group& G, const std::vector<uint32_t>& gens) {
  Subgroup H;
  H.G = &G;
  H.elems = closure_indices(G, gens);
  H.gens = small_generating_set(G, H.elems);
  return H;
}

inline Subgroup whole_group(const Group& G) {
  Subgroup H;
  H.G = &G;
  H.elems.resize(G.size());
  for (uint32_t i = 0; i < G.size(); ++i)
    H.elems[i] = i;
  H.gens = G.gens.empty() ? std::vector<uint32_t>{} : G.gens;
  if (G.size() == 1)
    H.gens.clear();
  return H;
}

inline Subgroup trivial_subgroup(const Group& G) {
  Subgroup H;
  H.G = &G;
  H.elems = {0};
  return H;
}

inline Subgroup conj_subgroup(const Subgroup& H, uint32_t g) {
  const Group& G = *H.G;
  Subgroup K;
  K.G = H.G;
  K.elems.reserve(H.elems.size());
  for (uint32_t x : H.elems)
    K.elems.push_back(G.conj(x, g));
  std::sort(K.elems.begin(), K.elems.end());
  K.gens.reserve(H.gens.size());
  for (uint32_t x : H.gens)
    K.gens.push_back(G.conj(x, g));
  return K;
}

// {g in ambient : gs = sg for all s in targets}
inline Subgroup centralizer_in(const Subgroup& ambient, const std::vector<uint32_t>& targets) {
  const Group& G = *ambient.G;
  Subgroup C;
  C.G = &G;
  for (uint32_t g : ambient.elems) {
    bool ok = true;
    for (uint32_t s : targets)
      if (G.mul(g, s) != G.mul(s, g)) {
        ok = false;
        break;
      }
    if (ok)
      C.elems.push_back(g);
  }
  C.gens = small_generating_set(G, C.elems);
  return C;
}

inline Subgroup centralizer(const Subgroup& ambient, const Subgroup& S) {
  require(ambient.contains_all(S), "centralizer target not inside the ambient subgroup");
  return centralizer_in(ambient, S.gens.empty() ? std::vector<uint32_t>{0} : S.gens);
}

inline Subgroup normalizer(const Subgroup& ambient, const Subgroup& H) {
  const Group& G = *ambient.G;
  Subgroup N;
  N.G = &G;
  const std::vector<uint32_t>& hgens = H.gens.empty() ? H.elems : H.gens;
  for (uint32_t g : ambient.elems) {
    bool ok = true;
    for (uint32_t h : hgens)
      if (!H.contains(G.conj(h, g))) {
        ok = false;
        break;
      }
    if (ok)
      N.elems.push_back(g);
  }
  N.gens = small_generating_set(G, N.elems);
  return N;
}

inline Subgroup center(const Subgroup& H) {
  return centralizer_in(H, H.gens.empty() ? std::vector<uint32_t>{0} : H.gens);
}

inline bool is_abelian(const Subgroup& H) {
  const Group& G = *H.G;
  for (uint32_t a : H.gens)
    for (uint32_t b : H.gens)
      if (G.mul(a, b) != G.mul(b, a))
        return false;
  return true;
}

// O_ell(Z) for abelian Z: the full ell-torsion subgroup
inline Subgroup ell_torsion(const Subgroup& Z, uint32_t ell) {
  const Group& G = *Z.G;
  Subgroup T;
  T.G = &G;
  for (uint32_t x : Z.elems)
    if (G.is_ell_element(x, ell))
      T.elems.push_back(x);
  T.gens = small_generating_set(G, T.elems);
  return T;
}

// (Z(H), O_ell(Z(H)))
inline std::pair<Subgroup, Subgroup> center_and_ell_part(const Subgroup& H, uint32_t ell) {
  Subgroup Z = center(H);
  return {Z, ell_torsion(Z, ell)};
}

// elements of order dividing ell in an abelian ell-group
inline Subgroup omega1(const Subgroup& Q, uint32_t ell) {
  const Group& G = *Q.G;
  Subgroup T;
  T.G = &G;
  for (uint32_t x : Q.elems)
    if (x == 0 || G.elt_order[x] == ell)
      T.elems.push_back(x);
  T.gens = small_generating_set(G, T.elems);
  return T;
}

inline bool is_elementary_abelian(const Subgroup& Q, uint32_t ell) {
  if (!is_abelian(Q))
    return false;
  const Group& G = *Q.G;
  for (uint32_t x : Q.elems)
    if (x != 0 && G.elt_order[x] != ell)
      return false;
  return true;
}

// product set A*B, required to be a subgroup (holds when one factor
// normalizes the other, the only way it is used here)
inline Subgroup product_subgroup(const Subgroup& A, const Subgroup& B) {
  const Group& G = *A.G;
  std::set<uint32_t> prod;
  for (uint32_t a : A.elems)
    for (uint32_t b : B.elems)
      prod.insert(G.mul(a, b));
  std::vector<uint32_t> elems(prod.begin(), prod.end());
  Subgroup H;
  H.G = &G;
  H.elems = std::move(elems);
  std::vector<uint32_t> gens = A.gens;
  gens.insert(gens.end(), B.gens.begin(), B.gens.end());
  for (uint32_t g : gens)
    for (uint32_t x : H.elems)
      require(H.contains(G.mul(x, g)), "product set is not a subgroup");
  H.gens = small_generating_set(G, H.elems);
  return H;
}

// Sylow ell-subgroup of the ambient subgroup: grow an ell-subgroup by
// ell-elements of its normalizer until the full ell-part is reached.
inline Subgroup sylow_subgroup(const Subgroup& ambient, uint32_t ell) {
  const Group& G = *ambient.G;
  uint64_t target = 1, n = ambient.order();
  while (n % ell == 0) {
    n /= ell;
    target *= ell;
  }
  if (target == 1)
    return trivial_subgroup(G);
  Subgroup P = trivial_subgroup(G);
  while (P.order() < target) {
    Subgroup N = P.order() == 1 ? ambient : normalizer(ambient, P);
    bool extended = false;
    for (uint32_t y : N.elems) {
      if (y == 0 || P.contains(y) || !G.is_ell_element(y, ell))
        continue;
      std::vector<uint32_t> gens = P.gens;
      gens.push_back(y);
      Subgroup bigger = subgroup_from_generators(G, gens);
      // P is normal in N, y is an ell-element of N, so P<y> is an ell-group
      check(bigger.order() % ell == 0 && coprime_part(bigger.order(), ell) == 1,
            "Sylow extension left the ell-world");
      P = bigger;
      extended = true;
      break;
    }
    check(extended, "Sylow growth stalled (impossible by Sylow theory)");
  }
  check(P.order() == target, "Sylow subgroup has wrong order");
  return P;
}

// all subgroups of an ell-group, by breadth-first extension
inline std::vector<Subgroup> all_subgroups_of_ell_group(const Subgroup& P) {
  const Group& G = *P.G;
  require(P.order() <= 512, "ell-group too large for exhaustive subgroup enumeration");
  std::set<std::vector<uint32_t>> seen;
  std::vector<Subgroup> out;
  std::vector<Subgroup> queue{trivial_subgroup(G)};
  seen.insert(queue[0].elems);
  for (size_t i = 0; i < queue.size(); ++i) {
    Subgroup H = queue[i];
    out.push_back(H);
    for (uint32_t y : P.elems) {
      if (H.contains(y))
        continue;
      std::vector<uint32_t> gens = H.gens;
      gens.push_back(y);
      Subgroup K = subgroup_from_generators(G, gens);
      if (seen.insert(K.elems).second)
        queue.push_back(K);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// all non-trivial ell-subgroups of the ambient subgroup: subgroups of one
// Sylow ell-subgroup, closed under conjugation, deterministically ordered
inline std::vector<Subgroup> enumerate_ell_subgroups(const Subgroup& ambient, uint32_t ell) {
  Subgroup P = sylow_subgroup(ambient, ell);
  if (P.order() == 1)
    return {};
  std::set<std::vector<uint32_t>> seen;
  std::vector<Subgroup> queue;
  for (Subgroup& H : all_subgroups_of_ell_group(P))
    if (H.order() > 1 && seen.insert(H.elems).second)
      queue.push_back(std::move(H));
  const std::vector<uint32_t>& conj_gens = ambient.gens;
  for (size_t i = 0; i < queue.size(); ++i)
    for (uint32_t g : conj_gens) {
      Subgroup K = conj_subgroup(queue[i], g);
      if (seen.insert(K.elems).second)
        queue.push_back(std::move(K));
    }
  std::sort(queue.begin(), queue.end());
  return queue;
}

// some g in ambient with H1^g = H2, if one exists; least such g
inline std::optional<uint32_t> subgroup_conjugacy(const Subgroup& ambient, const Subgroup& H1,
                                                  const Subgroup& H2) {
  if (H1.order() != H2.order())
    return std::nullopt;
  const Group& G = *ambient.G;
  const std::vector<uint32_t>& hgens = H1.gens.empty() ? H1.elems : H1.gens;
  for (uint32_t g : ambient.elems) {
    bool ok = true;
    for (uint32_t h : hgens)
      if (!H2.contains(G.conj(h, g))) {
        ok = false;
        break;
      }
    if (ok)
      return g;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Group specifications.
//
// Text format, comma separated key=value with brackets protecting commas:
//   kind=symmetric|cyclic|dihedral|perm|matrix|GL|SL|product
//   n=<int>           points / matrix dimension
//   q=<prime power>   matrix entry field
//   gens=[2,1,3];[..]            permutation images, 1-based
//   gens=[[1,0],[1,1]];[..]      matrix rows, integer-encoded field entries
//   factors=cyclic:2*symmetric:3 product factors, kind:n or kind:n:q
// ---------------------------------------------------------------------------

struct GroupSpec {
  std::string kind;
  uint32_t n = 0;
  uint64_t q = 0;
  std::string gens_text;
  std::vector<GroupSpec> factors;

  std::string canonical() const {
    std::string s = "kind=" + kind;
    if (n)
      s += ",n=" + std::to_string(n);
    if (q)
      s += ",q=" + std::to_string(q);
    if (!gens_text.empty())
      s += ",gens=" + gens_text;
    if (!factors.empty()) {
      s += ",factors=";
      for (size_t i = 0; i < factors.size(); ++i) {
        if (i)
          s += "*";
        s += factors[i].kind + ":" + std::to_string(factors[i].n);
        if (factors[i].q)
          s += ":" + std::to_string(factors[i].q);
      }
    }
    return s;
  }
};

namespace detail {

inline std::vector<std::string> split_toplevel(const std::string& s, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char ch : s) {
    if (ch == '[')
      ++depth;
    if (ch == ']')
      --depth;
    if (ch == sep && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

inline std::string strip(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos)
    return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline std::vector<int64_t> parse_int_list(const std::string& s) {
  std::vector<int64_t> out;
  std::string cur;
  for (char ch : s) {
    if (ch == '-' || (ch >= '0' && ch <= '9')) {
      cur += ch;
    } else if (!cur.empty()) {
      out.push_back(std::stoll(cur));
      cur.clear();
    }
  }
  if (!cur.empty())
    out.push_back(std::stoll(cur));
  return out;
}

inline std::pair<uint32_t, uint32_t> prime_power(uint64_t q) {
  require(q >= 2, "q must be a prime power");
  uint64_t p = 2;
  while (q % p != 0)
    ++p;
  uint32_t f = 0;
  uint64_t t = q;
  while (t % p == 0) {
    t /= p;
    ++f;
  }
  require(t == 1, "q is not a prime power");
  return {uint32_t(p), f};
}

}  // namespace detail

inline GroupSpec parse_group_spec(const std::string& text) {
  GroupSpec spec;
  // accept both comma-joined and semicolon/newline-joined key=value entries
  std::string normalized;
  for (char ch : text)
    normalized += (ch == '\n') ? ',' : ch;
  for (std::string& item : detail::split_toplevel(normalized, ',')) {
    std::string entry = detail::strip(item);
    if (entry.empty())
      continue;
    size_t eq = entry.find('=');
    require(eq != std::string::npos, "group spec entry lacks '=': " + entry);
    std::string key = detail::strip(entry.substr(0, eq));
    std::string val = detail::strip(entry.substr(eq + 1));
    if (key == "kind")
      spec.kind = val;
    else if (key == "n")
      spec.n = uint32_t(std::stoul(val));
    else if (key == "q")
      spec.q = std::stoull(val);
    else if (key == "gens")
      spec.gens_text = spec.gens_text.empty() ? val : spec.gens_text + ";" + val;
    else if (key == "factors") {
      for (std::string& f : detail::split_toplevel(val, '*')) {
        std::vector<std::string> parts = detail::split_toplevel(detail::strip(f), ':');
        require(parts.size() >= 2, "product factor must be kind:n[:q]");
        GroupSpec sub;
        sub.kind = detail::strip(parts[0]);
        sub.n = uint32_t(std::stoul(parts[1]));
        if (parts.size() >= 3)
          sub.q = std::stoull(parts[2]);
        spec.factors.push_back(std::move(sub));
      }
    } else {
      fail("unknown group spec key: " + key);
    }
  }
  require(!spec.kind.empty(), "group spec lacks kind=");
  static const std::set<std::string> known = {"symmetric", "cyclic",  "dihedral", "perm",
                                             "matrix",    "GL",      "SL",       "product"};
  require(known.count(spec.kind) == 1, "unknown group kind: " + spec.kind);
  for (const GroupSpec& f : spec.factors)
    require(known.count(f.kind) == 1, "unknown group kind: " + f.kind);
  return spec;
}

namespace detail {

struct RawGroup {
  Rep rep;
  uint32_t degree;
  const gf::Field* field = nullptr;
  std::vector<std::vector<uint8_t>> perm_gens;             // images, 0-based
  std::vector<std::vector<gf::elt>> mat_gens;              // row-major entries
};

inline RawGroup raw_perm(uint32_t degree, std::vector<std::vector<uint8_t>> gens) {
  require(degree >= 1 && degree <= 16, "permutation degree must be between 1 and 16");
  RawGroup r;
  r.rep = Rep::perm;
  r.degree = degree;
  r.perm_gens = std::move(gens);
  return r;
}

inline RawGroup build_raw(const GroupSpec& spec);

inline RawGroup raw_product(const std::vector<GroupSpec>& factors) {
  std::vector<RawGroup> parts;
  for (const GroupSpec& f : factors)
    parts.push_back(build_raw(f));
  bool all_perm = true;
  for (auto& p : parts)
    if (p.rep != Rep::perm)
      all_perm = false;
  require(all_perm, "only products of permutation-type factors are supported");
  uint32_t degree = 0;
  for (auto& p : parts)
    degree += p.degree;
  RawGroup r = raw_perm(degree, {});
  uint32_t off = 0;
  for (auto& p : parts) {
    for (auto& g : p.perm_gens) {
      std::vector<uint8_t> img(degree);
      for (uint32_t i = 0; i < degree; ++i)
        img[i] = uint8_t(i);
      for (uint32_t i = 0; i < p.degree; ++i)
        img[off + i] = uint8_t(off + g[i]);
      r.perm_gens.push_back(std::move(img));
    }
    off += p.degree;
  }
  return r;
}

inline RawGroup raw_matrix_group(uint32_t n, uint64_t q) {
  auto [p, f] = prime_power(q);
  const gf::Field& F = gf::make_field(p, f);
  uint32_t bits = 1;
  while ((1ull << bits) < F.size)
    ++bits;
  require(uint64_t(bits) * n * n <= 64, "matrix group too large to pack");
  RawGroup r;
  r.rep = Rep::mat;
  r.degree = n;
  r.field = &F;
  return r;
}

// adjacent elementary matrices I + t E_{i,i+1}, I + t E_{i+1,i} for t a field
// basis element, plus diag(xi,1,..,1) with xi a generator of the units
inline void add_linear_generators(RawGroup& r, bool want_gl) {
  const gf::Field& F = *r.field;
  uint32_t n = r.degree;
  auto ident = [&]() {
    std::vector<gf::elt> m(n * n, 0);
    for (uint32_t i = 0; i < n; ++i)
      m[i * n + i] = 1;
    return m;
  };
  // basis 1, x, x^2, ... of the field over its prime subfield
  std::vector<gf::elt> basis;
  for (uint32_t d = 0; d < F.degree; ++d)
    basis.push_back(gf::elt(ipow_u64(F.characteristic, d)));
  if (n >= 2) {
    for (uint32_t i = 0; i + 1 < n; ++i)
      for (gf::elt t : basis) {
        auto m1 = ident();
        m1[i * n + (i + 1)] = t;
        r.mat_gens.push_back(m1);
        auto m2 = ident();
        m2[(i + 1) * n + i] = t;
        r.mat_gens.push_back(m2);
      }
  }
  if (want_gl && F.size > 2) {
    // least primitive element of the field
    gf::elt xi = 0;
    for (gf::elt cand = 1; cand < F.size && !xi; ++cand)
      if (F.mult_order_of(cand) == F.size - 1)
        xi = cand;
    auto m = ident();
    m[0] = xi;
    r.mat_gens.push_back(m);
  }
  if (r.mat_gens.empty())
    r.mat_gens.push_back(ident());
}

inline RawGroup build_raw(const GroupSpec& spec) {
  const std::string& kind = spec.kind;
  if (kind == "symmetric") {
    require(spec.n >= 1, "symmetric needs n");
    std::vector<std::vector<uint8_t>> gens;
    if (spec.n >= 2) {
      std::vector<uint8_t> t(spec.n), c(spec.n);
      for (uint32_t i = 0; i < spec.n; ++i)
        t[i] = uint8_t(i), c[i] = uint8_t((i + 1) % spec.n);
      std::swap(t[0], t[1]);
      gens = {t, c};
    }
    return raw_perm(spec.n, gens);
  }
  if (kind == "cyclic") {
    require(spec.n >= 1, "cyclic needs n");
    std::vector<uint8_t> c(spec.n);
    for (uint32_t i = 0; i < spec.n; ++i)
      c[i] = uint8_t((i + 1) % spec.n);
    return raw_perm(spec.n, spec.n >= 2 ? std::vector<std::vector<uint8_t>>{c}
                                        : std::vector<std::vector<uint8_t>>{});
  }
  if (kind == "dihedral") {
    // n points, order 2n
    require(spec.n >= 3, "dihedral needs n >= 3");
    std::vector<uint8_t> rot(spec.n), ref(spec.n);
    for (uint32_t i = 0; i < spec.n; ++i) {
      rot[i] = uint8_t((i + 1) % spec.n);
      ref[i] = uint8_t((spec.n - i) % spec.n);
    }
    return raw_perm(spec.n, {rot, ref});
  }
  if (kind == "perm") {
    require(!spec.gens_text.empty(), "perm needs gens");
    std::vector<std::vector<uint8_t>> gens;
    uint32_t degree = spec.n;
    for (std::string& gtext : split_toplevel(spec.gens_text, ';')) {
      std::vector<int64_t> img = parse_int_list(gtext);
      require(!img.empty(), "empty permutation generator");
      if (!degree)
        degree = uint32_t(img.size());
      require(img.size() == degree, "permutation generators of unequal degree");
      std::vector<uint8_t> g(degree);
      std::vector<bool> hit(degree, false);
      for (uint32_t i = 0; i < degree; ++i) {
        require(img[i] >= 1 && img[i] <= int64_t(degree), "permutation image out of range");
        g[i] = uint8_t(img[i] - 1);
        require(!hit[g[i]], "not a permutation");
        hit[g[i]] = true;
      }
      gens.push_back(std::move(g));
    }
    return raw_perm(degree, gens);
  }
  if (kind == "matrix" || kind == "GL" || kind == "SL") {
    require(spec.n >= 1 && spec.q >= 2, kind + " needs n and q");
    RawGroup r = raw_matrix_group(spec.n, spec.q);
    if (kind == "matrix") {
      require(!spec.gens_text.empty(), "matrix needs gens");
      const gf::Field& F = *r.field;
      for (std::string& gtext : split_toplevel(spec.gens_text, ';')) {
        std::vector<int64_t> entries = parse_int_list(gtext);
        require(entries.size() == size_t(spec.n) * spec.n, "matrix generator has wrong size");
        std::vector<gf::elt> m(entries.size());
        for (size_t i = 0; i < entries.size(); ++i) {
          require(entries[i] >= 0 && uint64_t(entries[i]) < F.size,
                  "matrix entry out of field range");
          m[i] = gf::elt(entries[i]);
        }
        r.mat_gens.push_back(std::move(m));
      }
    } else {
      add_linear_generators(r, kind == "GL");
    }
    return r;
  }
  if (kind == "product") {
    require(!spec.factors.empty(), "product needs factors");
    return raw_product(spec.factors);
  }
  fail("unknown group kind: " + kind);
}

}  // namespace detail

inline uint64_t gl_order(uint32_t n, uint64_t q) {
  uint64_t o = 1, qn = ipow_u64(q, n);
  for (uint32_t i = 0; i < n; ++i)
    o *= qn - ipow_u64(q, i);
  return o;
}

inline std::shared_ptr<Group> generate_group(const GroupSpec& spec, uint64_t cap = kDefaultGroupCap) {
  detail::RawGroup raw = detail::build_raw(spec);
  auto G = std::make_shared<Group>();
  G->rep = raw.rep;
  G->degree = raw.degree;
  G->field = raw.field;
  G->spec = spec.canonical();
  std::vector<uint64_t> gen_keys;
  if (raw.rep == Rep::perm) {
    G->entry_bits = 4;
    for (auto& g : raw.perm_gens) {
      uint64_t k = 0;
      for (uint32_t i = 0; i < raw.degree; ++i)
        k |= uint64_t(g[i]) << (4 * i);
      gen_keys.push_back(k);
    }
  } else {
    uint32_t bits = 1;
    while ((1ull << bits) < raw.field->size)
      ++bits;
    G->entry_bits = bits;
    for (auto& g : raw.mat_gens) {
      uint64_t k = 0;
      for (uint32_t i = 0; i < raw.degree * raw.degree; ++i)
        k |= uint64_t(g[i]) << (bits * i);
      gen_keys.push_back(k);
    }
    // reject singular generators up front
    for (uint64_t k : gen_keys) {
      Group probe;
      probe.rep = Rep::mat;
      probe.degree = raw.degree;
      probe.field = raw.field;
      probe.entry_bits = bits;
      probe.inv_key(k);  // throws if singular
    }
  }
  if (spec.kind == "GL" || spec.kind == "SL") {
    uint64_t expected = gl_order(spec.n, spec.q);
    if (spec.kind == "SL")
      expected /= (spec.q - 1);
    require(expected <= cap, "group order exceeds cap (" + std::to_string(cap) + ")");
  }
  G->build_from_generator_keys(gen_keys, cap);
  return G;
}

inline std::shared_ptr<Group> generate_group(const std::string& spec_text,
                                             uint64_t cap = kDefaultGroupCap) {
  return generate_group(parse_group_spec(spec_text), cap);
}

}  // namespace grp
}  // namespace brpairs
