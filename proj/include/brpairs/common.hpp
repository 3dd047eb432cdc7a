#pragma once

#include <atomic>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <type_traits>
#include <vector>

namespace brpairs {

inline constexpr const char* kVersion = "brpairs 1.0.0";

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Violated internal contract (an algebraic identity that theory guarantees).
// These stay on in release builds; everything here is desk-scale.
struct ContractViolation : Error {
  explicit ContractViolation(const std::string& msg) : Error("contract: " + msg) {}
};

[[noreturn]] inline void fail(const std::string& msg) { throw Error(msg); }

inline void check(bool cond, const std::string& msg) {
  if (!cond)
    throw ContractViolation(msg);
}

inline void require(bool cond, const std::string& msg) {
  if (!cond)
    fail(msg);
}

// --- deterministic pseudo-random stream (counter mode, splitmix64) ---

struct DetRng {
  uint64_t state;
  explicit DetRng(uint64_t seed) : state(seed) {}
  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  // uniform in [0, n)
  uint64_t below(uint64_t n) { return n ? next() % n : 0; }
};

inline uint64_t fnv1a(const void* data, size_t len, uint64_t h = 0xcbf29ce484222325ULL) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  for (size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline uint64_t fnv1a_str(const std::string& s, uint64_t h = 0xcbf29ce484222325ULL) {
  return fnv1a(s.data(), s.size(), h);
}

template <typename T>
uint64_t fnv1a_vec(const std::vector<T>& v, uint64_t h = 0xcbf29ce484222325ULL) {
  static_assert(std::is_trivially_copyable_v<T>);
  return v.empty() ? h : fnv1a(v.data(), v.size() * sizeof(T), h);
}

// --- integer helpers ---

inline uint64_t gcd_u64(uint64_t a, uint64_t b) {
  while (b) {
    uint64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline uint64_t lcm_u64(uint64_t a, uint64_t b) {
  return a / gcd_u64(a, b) * b;
}

inline bool is_prime_u64(uint64_t n) {
  if (n < 2)
    return false;
  for (uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0)
      return false;
  return true;
}

inline uint64_t ipow_u64(uint64_t b, unsigned e) {
  uint64_t r = 1;
  while (e--) {
    require(b == 0 || r <= UINT64_MAX / (b ? b : 1), "integer power overflow");
    r *= b;
  }
  return r;
}

inline std::vector<uint64_t> prime_factors(uint64_t n) {
  std::vector<uint64_t> out;
  for (uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0)
        n /= d;
    }
  if (n > 1)
    out.push_back(n);
  return out;
}

// largest divisor of n coprime to ell
inline uint64_t coprime_part(uint64_t n, uint64_t ell) {
  while (n % ell == 0)
    n /= ell;
  return n;
}

// --- tiny thread pool: parallel index loop with deterministic output ---
// Results must be written positionally by the body; chunk order is irrelevant.

inline void parallel_for(size_t n, unsigned threads, const std::function<void(size_t)>& body) {
  if (threads <= 1 || n < 2) {
    for (size_t i = 0; i < n; ++i)
      body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<size_t> next{0};
  unsigned t = std::min<unsigned>(threads, std::thread::hardware_concurrency() ? std::thread::hardware_concurrency() : 2);
  std::exception_ptr err;
  std::mutex err_mx;
  for (unsigned w = 0; w < t; ++w)
    pool.emplace_back([&]() {
      try {
        for (size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1))
          body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lk(err_mx);
        if (!err)
          err = std::current_exception();
        next.store(n);
      }
    });
  for (auto& th : pool)
    th.join();
  if (err)
    std::rethrow_exception(err);
}

}  // namespace brpairs
