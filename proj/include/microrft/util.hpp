#pragma once

// Small shared helpers: stable hashing, seeded RNG streams and the text
// tokenizer used by the embedder, the mock critic and the text metrics.
// Hash constants are fixed so outputs are stable across platforms and runs.

#include <cctype>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace microrft {

// FNV-1a, 64-bit. offset 14695981039346656037, prime 1099511628211.
inline std::uint64_t fnv1a64(std::string_view s, std::uint64_t h = 14695981039346656037ull) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Independent seed for sub-stream i of a master seed. Parallel generation
// partitions the seed space per item so the result does not depend on
// evaluation order.
inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t i) {
  return splitmix64(master ^ splitmix64(i + 1));
}

inline std::uint64_t stream_seed(std::uint64_t master, std::string_view tag) {
  return splitmix64(master ^ fnv1a64(tag));
}

// Uniform helpers on top of mt19937_64. std::uniform_*_distribution is
// implementation-defined, so draws go through these to keep byte-identical
// outputs under a fixed seed.
inline double uniform_double(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_range(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform_double(rng);
}

// Uniform integer in [0, n), n >= 1. Rejection-free modulo is fine here: n is
// tiny compared with 2^64 and determinism matters more than the 2^-50 bias.
inline std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t n) {
  return rng() % n;
}

inline std::string_view trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

// Lowercase, split on non-alphanumeric bytes. Shared by BLEU/CIDEr/METEOR,
// the hashed-ngram embedder and the mock critic.
inline std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (unsigned char c : text) {
    if (std::isalnum(c)) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

} // namespace microrft
