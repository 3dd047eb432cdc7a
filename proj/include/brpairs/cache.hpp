#pragma once

// Content-addressed on-disk cache for computed posets. Keys hash the
// canonical group spec, the prime, the field choice, the flavor and a
// code-version tag, so algorithm changes invalidate old entries
// automatically. Corrupt or version-mismatched entries read as misses.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "common.hpp"
#include "esplit.hpp"
#include "pairs.hpp"

namespace brpairs {
namespace cache {

inline constexpr const char* kMagic = "BRPCACHE1\n";

struct Writer {
  std::vector<unsigned char> bytes;
  void u32(uint32_t v) {
    for (int i = 0; i < 4; ++i)
      bytes.push_back((unsigned char)(v >> (8 * i)));
  }
  void u64(uint64_t v) {
    for (int i = 0; i < 8; ++i)
      bytes.push_back((unsigned char)(v >> (8 * i)));
  }
  void str(const std::string& s) {
    u64(s.size());
    bytes.insert(bytes.end(), s.begin(), s.end());
  }
  void vec32(const std::vector<uint32_t>& v) {
    u64(v.size());
    for (uint32_t x : v)
      u32(x);
  }
  void vec64(const std::vector<uint64_t>& v) {
    u64(v.size());
    for (uint64_t x : v)
      u64(x);
  }
};

struct Reader {
  const std::vector<unsigned char>* bytes;
  size_t pos = 0;
  explicit Reader(const std::vector<unsigned char>& b) : bytes(&b) {}
  void need(size_t n) { require(pos + n <= bytes->size(), "cache payload truncated"); }
  uint32_t u32() {
    need(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v |= uint32_t((*bytes)[pos++]) << (8 * i);
    return v;
  }
  uint64_t u64() {
    need(8);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
      v |= uint64_t((*bytes)[pos++]) << (8 * i);
    return v;
  }
  std::string str() {
    uint64_t n = u64();
    need(n);
    std::string s(bytes->begin() + pos, bytes->begin() + pos + n);
    pos += n;
    return s;
  }
  std::vector<uint32_t> vec32() {
    uint64_t n = u64();
    std::vector<uint32_t> v(n);
    for (auto& x : v)
      x = u32();
    return v;
  }
  std::vector<uint64_t> vec64() {
    uint64_t n = u64();
    std::vector<uint64_t> v(n);
    for (auto& x : v)
      x = u64();
    return v;
  }
};

inline std::string content_key(const std::string& group_spec, uint32_t ell,
                               const std::string& field_desc, const std::string& kind,
                               const std::string& selector) {
  std::string input = group_spec + "|ell=" + std::to_string(ell) + "|" + field_desc + "|" + kind +
                      "|" + selector + "|" + kVersion;
  uint64_t h1 = fnv1a_str(input);
  uint64_t h2 = fnv1a_str(input, 0x6c62272e07bb0142ULL);
  char buf[36];
  std::snprintf(buf, sizeof buf, "%016llx%016llx", (unsigned long long)h1,
                (unsigned long long)h2);
  return buf;
}

inline std::filesystem::path entry_path(const std::string& dir, const std::string& key) {
  return std::filesystem::path(dir) / (key + ".brp");
}

inline void store(const std::string& dir, const std::string& key,
                  const std::vector<unsigned char>& payload) {
  std::filesystem::create_directories(dir);
  Writer head;
  head.bytes.assign(kMagic, kMagic + std::string(kMagic).size());
  head.str(key);
  head.u64(payload.size());
  head.u64(fnv1a(payload.data(), payload.size()));
  std::ofstream out(entry_path(dir, key), std::ios::binary | std::ios::trunc);
  require(bool(out), "cannot write cache entry");
  out.write(reinterpret_cast<const char*>(head.bytes.data()), std::streamsize(head.bytes.size()));
  out.write(reinterpret_cast<const char*>(payload.data()), std::streamsize(payload.size()));
}

// checksum or key mismatch reads as a miss, never as an error
inline std::optional<std::vector<unsigned char>> load(const std::string& dir,
                                                      const std::string& key) {
  std::ifstream in(entry_path(dir, key), std::ios::binary);
  if (!in)
    return std::nullopt;
  std::vector<unsigned char> all((std::istreambuf_iterator<char>(in)),
                                 std::istreambuf_iterator<char>());
  std::string magic(kMagic);
  if (all.size() < magic.size() ||
      !std::equal(magic.begin(), magic.end(), all.begin()))
    return std::nullopt;
  try {
    Reader r(all);
    r.pos = magic.size();
    if (r.str() != key)
      return std::nullopt;
    uint64_t n = r.u64();
    uint64_t sum = r.u64();
    if (r.pos + n != all.size())
      return std::nullopt;
    std::vector<unsigned char> payload(all.begin() + r.pos, all.end());
    if (fnv1a(payload.data(), payload.size()) != sum)
      return std::nullopt;
    return payload;
  } catch (const Error&) {
    return std::nullopt;
  }
}

// --- poset payloads ---

inline std::vector<unsigned char> serialize_brauer_poset(const pairs::BrauerPoset& bp) {
  Writer w;
  w.vec32(bp.ambient.elems);
  w.u64(bp.block);
  w.u32(uint32_t(bp.flavor));
  w.u64(bp.pairs.size());
  for (const pairs::BrauerPair& p : bp.pairs) {
    w.vec32(p.Q.elems);
    w.u32(p.block);
  }
  for (const std::string& l : bp.poset.labels)
    w.str(l);
  w.u64(bp.poset.leq.words);
  w.vec64(bp.poset.leq.bits);
  w.u64(bp.poset.action.size());
  for (const auto& perm : bp.poset.action)
    w.vec32(perm);
  return w.bytes;
}

inline pairs::BrauerPoset deserialize_brauer_poset(const std::vector<unsigned char>& bytes,
                                                   const grp::Group& G) {
  Reader r(bytes);
  pairs::BrauerPoset bp;
  bp.ambient = grp::subgroup_from_elements(G, r.vec32());
  bp.block = r.u64();
  bp.flavor = pairs::Flavor(r.u32());
  uint64_t n = r.u64();
  for (uint64_t i = 0; i < n; ++i) {
    pairs::BrauerPair p;
    p.Q = grp::subgroup_from_elements(G, r.vec32());
    p.block = r.u32();
    bp.pairs.push_back(std::move(p));
  }
  for (uint64_t i = 0; i < n; ++i)
    bp.poset.labels.push_back(r.str());
  bp.poset.leq.n = n;
  bp.poset.leq.words = r.u64();
  bp.poset.leq.bits = r.vec64();
  require(bp.poset.leq.bits.size() == n * bp.poset.leq.words, "order matrix shape mismatch");
  uint64_t ngens = r.u64();
  for (uint64_t g = 0; g < ngens; ++g)
    bp.poset.action.push_back(r.vec32());
  require(r.pos == bytes.size(), "trailing bytes in cache payload");
  bp.poset.validate();
  return bp;
}

inline std::vector<unsigned char> serialize_esplit_poset(const esplit::EsplitPoset& ep) {
  Writer w;
  w.u64(ep.block);
  w.u64(ep.pairs.size());
  for (const esplit::EsplitPair& p : ep.pairs) {
    w.u32(p.levi);
    w.u32(p.block);
  }
  for (const std::string& l : ep.poset.labels)
    w.str(l);
  w.u64(ep.poset.leq.words);
  w.vec64(ep.poset.leq.bits);
  w.u64(ep.poset.action.size());
  for (const auto& perm : ep.poset.action)
    w.vec32(perm);
  w.vec32(ep.excluded_levis);
  return w.bytes;
}

inline esplit::EsplitPoset deserialize_esplit_poset(const std::vector<unsigned char>& bytes) {
  Reader r(bytes);
  esplit::EsplitPoset ep;
  ep.block = r.u64();
  uint64_t n = r.u64();
  for (uint64_t i = 0; i < n; ++i) {
    esplit::EsplitPair p;
    p.levi = r.u32();
    p.block = r.u32();
    ep.pairs.push_back(p);
  }
  for (uint64_t i = 0; i < n; ++i)
    ep.poset.labels.push_back(r.str());
  ep.poset.leq.n = n;
  ep.poset.leq.words = r.u64();
  ep.poset.leq.bits = r.vec64();
  require(ep.poset.leq.bits.size() == n * ep.poset.leq.words, "order matrix shape mismatch");
  uint64_t ngens = r.u64();
  for (uint64_t g = 0; g < ngens; ++g)
    ep.poset.action.push_back(r.vec32());
  ep.excluded_levis = r.vec32();
  require(r.pos == bytes.size(), "trailing bytes in cache payload");
  ep.poset.validate();
  return ep;
}

// cache-aware poset builders: they degrade to plain construction when the
// engine has no cache directory, and only whole-group posets are cached
inline pairs::BrauerPoset build_brauer_poset_cached(pairs::PairEngine& eng,
                                                    const grp::Subgroup& ambient, size_t B,
                                                    pairs::Flavor flavor, unsigned threads = 1) {
  if (eng.cache_dir().empty() || ambient.order() != eng.group().size())
    return eng.build_poset(ambient, B, flavor, threads);
  std::string key =
      content_key(eng.cache_spec(), eng.ell(), eng.workspace().field().describe(), "brauer-poset",
                  pairs::flavor_name(flavor) + "|block=" + std::to_string(B));
  if (auto payload = load(eng.cache_dir(), key)) {
    if (eng.cache_notes())
      *eng.cache_notes() << "cache hit: " << key << "\n";
    return deserialize_brauer_poset(*payload, eng.group());
  }
  pairs::BrauerPoset bp = eng.build_poset(ambient, B, flavor, threads);
  store(eng.cache_dir(), key, serialize_brauer_poset(bp));
  return bp;
}

inline esplit::EsplitPoset build_esplit_poset_cached(esplit::EsplitEngine& es, size_t B,
                                                     unsigned threads = 1) {
  pairs::PairEngine& eng = es.pair_engine();
  if (eng.cache_dir().empty())
    return es.build_poset(B, threads);
  std::string key =
      content_key(eng.cache_spec(), eng.ell(), eng.workspace().field().describe(), "esplit-poset",
                  "e=" + std::to_string(es.e()) + "|block=" + std::to_string(B));
  if (auto payload = load(eng.cache_dir(), key)) {
    if (eng.cache_notes())
      *eng.cache_notes() << "cache hit: " << key << "\n";
    return deserialize_esplit_poset(*payload);
  }
  esplit::EsplitPoset ep = es.build_poset(B, threads);
  store(eng.cache_dir(), key, serialize_esplit_poset(ep));
  return ep;
}

}  // namespace cache
}  // namespace brpairs
