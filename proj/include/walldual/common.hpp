#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace walldual {

using PointId = std::uint32_t;
using WallId = std::uint32_t;
using VertexId = std::uint32_t;

using Bits = boost::dynamic_bitset<std::uint64_t>;
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

enum class ErrorCode {
  kStructural,
  kInputNotFilter,
  kSearchCap,
  kStateExplosion,
  kEmptyTarget,
  kNotWallPreserving,
  kNotDisjoint,
  kNonTermination,
  kInvalidArgument,
  kParse,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kStructural: return "STRUCTURAL";
    case ErrorCode::kInputNotFilter: return "INPUT_NOT_FILTER";
    case ErrorCode::kSearchCap: return "SEARCH_CAP";
    case ErrorCode::kStateExplosion: return "STATE_EXPLOSION";
    case ErrorCode::kEmptyTarget: return "EMPTY_TARGET";
    case ErrorCode::kNotWallPreserving: return "NOT_WALL_PRESERVING";
    case ErrorCode::kNotDisjoint: return "NOT_DISJOINT";
    case ErrorCode::kNonTermination: return "NON_TERMINATION";
    case ErrorCode::kInvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::kParse: return "PARSE";
  }
  return "UNKNOWN";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string to_string(const Rational& q) {
  auto num = boost::multiprecision::numerator(q);
  auto den = boost::multiprecision::denominator(q);
  return num.str() + "/" + den.str();
}

inline Rational parse_rational(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) return Rational(BigInt(s));
  return Rational(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
}

// Worker count from WALLDUAL_THREADS, else hardware concurrency.
inline unsigned thread_count() {
  if (const char* env = std::getenv("WALLDUAL_THREADS")) {
    long n = std::strtol(env, nullptr, 10);
    if (n >= 1) return static_cast<unsigned>(n);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

// Runs body(i) for i in [0, n). Indices are claimed dynamically; body must
// only write to slots owned by its index.
template <typename Body>
void parallel_for(std::size_t n, Body&& body) {
  unsigned workers = std::min<std::size_t>(thread_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto run = [&] {
    for (std::size_t i = next++; i < n; i = next++) body(i);
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (unsigned t = 1; t < workers; ++t) pool.emplace_back(run);
  run();
  for (auto& th : pool) th.join();
}

inline std::size_t popcount(const Bits& b) { return b.count(); }

inline bool intersects(const Bits& a, const Bits& b) { return a.intersects(b); }

struct BitsHash {
  std::size_t operator()(const Bits& b) const noexcept { return boost::hash_value(b); }
};

inline Bits make_bits(std::size_t n, const std::vector<std::uint32_t>& members) {
  Bits b(n);
  for (auto m : members) b.set(m);
  return b;
}

inline std::vector<std::uint32_t> members_of(const Bits& b) {
  std::vector<std::uint32_t> out;
  out.reserve(b.count());
  for (auto i = b.find_first(); i != Bits::npos; i = b.find_next(i)) out.push_back(static_cast<std::uint32_t>(i));
  return out;
}

}  // namespace walldual
