#pragma once

// Topic boundaries from an embedding sequence.
//
// Gap j scores cosine(u_j, u_{j+1}). The threshold is T = mean - stddev of the
// document's gap scores. Auto mode keeps every strict local minimum below T;
// damp mode keeps at most N = floor(log(m)^2) of those, m being the number of
// gaps below T.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "hyperseg/encoder.hpp"
#include "hyperseg/error.hpp"
#include "hyperseg/hypervector.hpp"
#include "hyperseg/tokenizer.hpp"
#include "hyperseg/transcript.hpp"

namespace hyperseg {

enum class SegmentMode { automatic, damp };
enum class StddevKind { population, sample };
enum class LogBase { natural, base2 };

[[nodiscard]] constexpr std::string_view to_string(SegmentMode m) noexcept {
  return m == SegmentMode::automatic ? "auto" : "damp";
}

struct SegmenterConfig {
  SegmentMode mode = SegmentMode::automatic;
  StddevKind stddev = StddevKind::population;
  LogBase log_base = LogBase::natural;
};

// Below-threshold tests use this margin. T = mean - stddev is derived from the
// scores themselves and can equal a score exactly in real arithmetic (with two
// gaps, T is always the smaller score); the margin keeps such ties on the
// "not below" side regardless of rounding.
inline constexpr double kThresholdMargin = 1e-9;

struct BoundaryScores {
  std::vector<double> scores;
  double mean = 0.0;
  double stddev = 0.0;
  double threshold = 0.0;

  [[nodiscard]] bool below_threshold(std::size_t j) const noexcept {
    return scores[j] < threshold - kThresholdMargin;
  }

  [[nodiscard]] std::size_t count_below_threshold() const noexcept {
    std::size_t m = 0;
    for (std::size_t j = 0; j < scores.size(); ++j) m += below_threshold(j) ? 1 : 0;
    return m;
  }
};

struct Segmentation {
  BoundarySet boundaries;
  SegmentMode mode = SegmentMode::automatic;
  std::optional<std::size_t> damp_cap;

  [[nodiscard]] std::size_t segment_count() const noexcept { return boundaries.size() + 1; }
};

// Mean, standard deviation and threshold over an arbitrary score series.
[[nodiscard]] inline BoundaryScores summarize_scores(std::vector<double> scores,
                                                     StddevKind kind = StddevKind::population) {
  BoundaryScores out;
  out.scores = std::move(scores);
  const std::size_t n = out.scores.size();
  if (n == 0) return out;
  const double mean = std::accumulate(out.scores.begin(), out.scores.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double s : out.scores) ss += (s - mean) * (s - mean);
  double var = 0.0;
  if (kind == StddevKind::population) {
    var = ss / static_cast<double>(n);
  } else if (n > 1) {
    var = ss / static_cast<double>(n - 1);
  }
  out.mean = mean;
  out.stddev = std::sqrt(var);
  out.threshold = out.mean - out.stddev;
  return out;
}

[[nodiscard]] inline BoundaryScores boundary_scores(std::span<const UtteranceEmbedding> embeddings,
                                                    StddevKind kind = StddevKind::population) {
  std::vector<double> scores;
  if (embeddings.size() > 1) {
    scores.reserve(embeddings.size() - 1);
    for (std::size_t j = 0; j + 1 < embeddings.size(); ++j) {
      scores.push_back(cosine(embeddings[j].vector, embeddings[j + 1].vector));
    }
  }
  return summarize_scores(std::move(scores), kind);
}

// Strictly below both neighbours; a missing neighbour counts as +infinity.
[[nodiscard]] inline bool is_strict_local_minimum(std::span<const double> s, std::size_t j) noexcept {
  const bool left = j == 0 || s[j] < s[j - 1];
  const bool right = j + 1 == s.size() || s[j] < s[j + 1];
  return left && right;
}

[[nodiscard]] inline Segmentation select_boundaries(const BoundaryScores& bs) {
  Segmentation out;
  for (std::size_t j = 0; j < bs.scores.size(); ++j) {
    if (bs.below_threshold(j) && is_strict_local_minimum(bs.scores, j)) out.boundaries.push_back(j);
  }
  return out;
}

// floor(log(m)^2); 0 when m == 0.
[[nodiscard]] inline std::size_t damp_cap(std::size_t m, LogBase base = LogBase::natural) {
  if (m == 0) return 0;
  const double x = static_cast<double>(m);
  const double l = base == LogBase::natural ? std::log(x) : std::log2(x);
  return static_cast<std::size_t>(std::floor(l * l));
}

// The N auto-mode candidates with the lowest scores (ties -> lower gap index),
// returned in increasing gap order.
[[nodiscard]] inline Segmentation select_boundaries_damped(const BoundaryScores& bs,
                                                           LogBase base = LogBase::natural) {
  Segmentation candidates = select_boundaries(bs);
  const std::size_t cap = damp_cap(bs.count_below_threshold(), base);
  auto& c = candidates.boundaries;
  if (c.size() > cap) {
    std::stable_sort(c.begin(), c.end(), [&](std::size_t a, std::size_t b) { return bs.scores[a] < bs.scores[b]; });
    c.resize(cap);
    std::sort(c.begin(), c.end());
  }
  candidates.mode = SegmentMode::damp;
  candidates.damp_cap = cap;
  return candidates;
}

[[nodiscard]] inline Segmentation select(const BoundaryScores& bs, const SegmenterConfig& cfg) {
  return cfg.mode == SegmentMode::automatic ? select_boundaries(bs) : select_boundaries_damped(bs, cfg.log_base);
}

// tokenize -> encode -> score -> select.
[[nodiscard]] inline Segmentation segment(const Transcript& transcript, const TokenizerConfig& tokenizer,
                                          const SeedContext& ctx, const SegmenterConfig& cfg = {},
                                          std::size_t threads = 1) {
  const auto embeddings = encode_transcript(transcript, tokenizer, ctx, threads);
  return select(boundary_scores(embeddings, cfg.stddev), cfg);
}

}  // namespace hyperseg
