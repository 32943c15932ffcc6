#pragma once

// Reference segmenters: random and uniform placement given a boundary count,
// and sparse one-hot count vectors scored with the same gap/threshold machinery.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hyperseg/error.hpp"
#include "hyperseg/random.hpp"
#include "hyperseg/segmenter.hpp"
#include "hyperseg/tokenizer.hpp"
#include "hyperseg/transcript.hpp"

namespace hyperseg {

namespace detail {

inline void require_boundary_count(std::size_t utterances, std::size_t k) {
  const std::size_t gaps = utterances == 0 ? 0 : utterances - 1;
  if (k > gaps) {
    throw InvalidArgument("boundary count " + std::to_string(k) + " exceeds the " + std::to_string(gaps) +
                          " gaps of a " + std::to_string(utterances) + "-utterance transcript");
  }
}

}  // namespace detail

// k distinct gaps drawn uniformly without replacement (partial Fisher-Yates).
[[nodiscard]] inline Segmentation random_segmentation(std::size_t utterances, std::size_t k, std::uint64_t seed) {
  detail::require_boundary_count(utterances, k);
  Segmentation out;
  if (k == 0) return out;
  std::vector<std::size_t> gaps(utterances - 1);
  for (std::size_t j = 0; j < gaps.size(); ++j) gaps[j] = j;
  rng::SplitMix64 gen(rng::mix64(seed ^ 0x52414e444f4dULL));
  for (std::size_t t = 0; t < k; ++t) {
    const std::size_t pick = t + static_cast<std::size_t>(gen.below(gaps.size() - t));
    std::swap(gaps[t], gaps[pick]);
  }
  out.boundaries.assign(gaps.begin(), gaps.begin() + static_cast<std::ptrdiff_t>(k));
  std::sort(out.boundaries.begin(), out.boundaries.end());
  return out;
}

// k + 1 near-equal segments: boundaries at floor(U*t/(k+1)) - 1, t = 1..k.
[[nodiscard]] inline Segmentation uniform_segmentation(std::size_t utterances, std::size_t k) {
  detail::require_boundary_count(utterances, k);
  Segmentation out;
  for (std::size_t t = 1; t <= k; ++t) {
    const std::size_t end = utterances * t / (k + 1);
    const std::size_t b = std::clamp<std::size_t>(end == 0 ? 0 : end - 1, 0, utterances - 2);
    if (out.boundaries.empty() || out.boundaries.back() != b) out.boundaries.push_back(b);
  }
  return out;
}

// Sparse token -> count map for one utterance.
class CountVector {
 public:
  CountVector() = default;

  explicit CountVector(const std::vector<std::string>& tokens) {
    for (const auto& t : tokens) ++counts_[t];
  }

  [[nodiscard]] bool empty() const noexcept { return counts_.empty(); }
  [[nodiscard]] const std::map<std::string, std::size_t>& counts() const noexcept { return counts_; }

  [[nodiscard]] std::size_t count(const std::string& token) const {
    const auto it = counts_.find(token);
    return it == counts_.end() ? 0 : it->second;
  }

 private:
  std::map<std::string, std::size_t> counts_;
};

// Cosine of raw counts. Both empty -> 1, exactly one empty -> 0.
[[nodiscard]] inline double count_cosine(const CountVector& a, const CountVector& b) {
  if (a.empty() && b.empty()) return 1.0;
  if (a.empty() || b.empty()) return 0.0;
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  auto ia = a.counts().begin();
  auto ib = b.counts().begin();
  // Ordered maps: merge walk over the sorted keys.
  while (ia != a.counts().end() && ib != b.counts().end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      dot += static_cast<double>(ia->second) * static_cast<double>(ib->second);
      ++ia;
      ++ib;
    }
  }
  for (const auto& [_, c] : a.counts()) na += static_cast<double>(c) * static_cast<double>(c);
  for (const auto& [_, c] : b.counts()) nb += static_cast<double>(c) * static_cast<double>(c);
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

[[nodiscard]] inline BoundaryScores count_boundary_scores(const Transcript& transcript, const TokenizerConfig& cfg,
                                                          StddevKind kind = StddevKind::population) {
  std::vector<CountVector> vectors;
  vectors.reserve(transcript.utterances.size());
  for (const auto& u : transcript.utterances) vectors.emplace_back(tokenize(u, cfg));
  std::vector<double> scores;
  for (std::size_t j = 0; j + 1 < vectors.size(); ++j) scores.push_back(count_cosine(vectors[j], vectors[j + 1]));
  return summarize_scores(std::move(scores), kind);
}

}  // namespace hyperseg
