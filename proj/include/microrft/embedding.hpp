#pragma once

// Sentence-embedding provider for the semantic reward. The built-in embedder
// hashes unigrams and bigrams into 256 buckets (FNV-1a 64), TF-weights them
// and L2-normalizes, so it is dependency-free and bit-deterministic. A remote
// provider can replace it behind the same contract; remote failures fall back
// to the built-in vector with a flag.

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "microrft/util.hpp"

namespace microrft {

inline constexpr int kEmbeddingDim = 256;

struct Embedding {
  std::vector<double> values;

  std::size_t dim() const { return values.size(); }
};

// Bucket of a unigram or of a bigram joined with a 0x1f separator.
inline std::size_t embed_bucket(std::string_view gram) {
  return static_cast<std::size_t>(fnv1a64(gram) % kEmbeddingDim);
}

inline std::string join_bigram(const std::string& a, const std::string& b) {
  std::string g = a;
  g.push_back('\x1f');
  g += b;
  return g;
}

inline Embedding embed_builtin(std::string_view text) {
  Embedding e;
  e.values.assign(kEmbeddingDim, 0.0);
  const auto toks = tokenize(text);
  for (std::size_t i = 0; i < toks.size(); ++i) {
    e.values[embed_bucket(toks[i])] += 1.0;
    if (i + 1 < toks.size()) {
      e.values[embed_bucket(join_bigram(toks[i], toks[i + 1]))] += 1.0;
    }
  }
  double norm2 = 0.0;
  for (double v : e.values) norm2 += v * v;
  if (norm2 == 0.0) {
    e.values[0] = 1.0; // zero guard for empty / non-alphanumeric text
    return e;
  }
  const double inv = 1.0 / std::sqrt(norm2);
  for (double& v : e.values) v *= inv;
  return e;
}

// Standard cosine in [-1, 1]. Dimension mismatch is a config error.
inline double cosine(const Embedding& a, const Embedding& b) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("embedding dimension mismatch: " + std::to_string(a.dim()) +
                                " vs " + std::to_string(b.dim()));
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    dot += a.values[i] * b.values[i];
    na += a.values[i] * a.values[i];
    nb += b.values[i] * b.values[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / std::sqrt(na * nb);
}

// Reward-path cosine, clamped to [0, 1]: raw cosine can be negative but the
// semantic reward is defined on [0, 1].
inline double cosine01(const Embedding& a, const Embedding& b) {
  const double c = cosine(a, b);
  return c < 0.0 ? 0.0 : (c > 1.0 ? 1.0 : c);
}

struct EmbedOutcome {
  Embedding embedding;
  bool fallback{false}; // remote provider failed, built-in vector returned
};

class EmbeddingProvider {
public:
  virtual ~EmbeddingProvider() = default;
  virtual EmbedOutcome embed(const std::string& text) = 0;
};

class BuiltinEmbedder final : public EmbeddingProvider {
public:
  EmbedOutcome embed(const std::string& text) override { return {embed_builtin(text), false}; }
};

} // namespace microrft
