#pragma once

// Segmentation evaluation.
//
// boundary_f1 treats every gap as a binary boundary-or-not decision with exact
// position matching. boundary_similarity is Boundary Similarity (B) over the
// boundary edit distance with near-miss transpositions, computed exactly as
// the segeval reference implementation does for a single boundary type.
// pk and window_diff are provided for comparison with older work.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hyperseg/error.hpp"
#include "hyperseg/segmenter.hpp"
#include "hyperseg/transcript.hpp"

namespace hyperseg {

struct BoundaryCounts {
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;
};

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Both sets empty is perfect agreement; exactly one empty scores zero.
[[nodiscard]] inline PrecisionRecall precision_recall(const BoundaryCounts& c) {
  const std::size_t hyp = c.true_positives + c.false_positives;
  const std::size_t ref = c.true_positives + c.false_negatives;
  if (hyp == 0 && ref == 0) return {1.0, 1.0, 1.0};
  if (hyp == 0 || ref == 0) return {0.0, 0.0, 0.0};
  PrecisionRecall out;
  out.precision = static_cast<double>(c.true_positives) / static_cast<double>(hyp);
  out.recall = static_cast<double>(c.true_positives) / static_cast<double>(ref);
  const double denom = out.precision + out.recall;
  out.f1 = denom == 0.0 ? 0.0 : 2.0 * out.precision * out.recall / denom;
  return out;
}

[[nodiscard]] inline BoundaryCounts boundary_counts(const BoundarySet& hyp, const BoundarySet& ref,
                                                    std::size_t utterances) {
  validate_boundaries(hyp, utterances, "hypothesis");
  validate_boundaries(ref, utterances, "reference");
  BoundaryCounts c;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < hyp.size() && j < ref.size()) {
    if (hyp[i] == ref[j]) {
      ++c.true_positives, ++i, ++j;
    } else if (hyp[i] < ref[j]) {
      ++c.false_positives, ++i;
    } else {
      ++c.false_negatives, ++j;
    }
  }
  c.false_positives += hyp.size() - i;
  c.false_negatives += ref.size() - j;
  return c;
}

[[nodiscard]] inline PrecisionRecall boundary_f1(const BoundarySet& hyp, const BoundarySet& ref,
                                                 std::size_t utterances) {
  return precision_recall(boundary_counts(hyp, ref, utterances));
}

enum class EditKind { match, addition_or_deletion, transposition };

struct BoundaryEdit {
  EditKind kind = EditKind::match;
  std::size_t first = 0;   // position; the lower position for transpositions
  std::size_t second = 0;  // equals `first` except for transpositions
  bool in_hypothesis = false;  // which side holds an addition

  [[nodiscard]] std::size_t offset() const noexcept { return second - first; }
};

struct BoundaryEditDistance {
  std::vector<BoundaryEdit> matches;
  std::vector<BoundaryEdit> additions;
  std::vector<BoundaryEdit> transpositions;
  std::size_t window = 2;

  // Additions count 1 each; a transposition costs offset / window.
  [[nodiscard]] double weighted_edits() const noexcept {
    double w = static_cast<double>(additions.size());
    std::size_t spans = 0;
    for (const auto& t : transpositions) spans += t.offset();
    return w + static_cast<double>(spans) / static_cast<double>(window);
  }

  [[nodiscard]] std::size_t denominator() const noexcept {
    return additions.size() + transpositions.size() + matches.size();
  }
};

// Near misses are paired shortest span first, then left to right; a position
// takes part in at most one transposition.
[[nodiscard]] inline BoundaryEditDistance boundary_edit_distance(const BoundarySet& hyp, const BoundarySet& ref,
                                                                 std::size_t utterances, std::size_t window = 2) {
  if (window < 2) throw InvalidArgument("near-miss window n_t must be >= 2");
  validate_boundaries(hyp, utterances, "hypothesis");
  validate_boundaries(ref, utterances, "reference");
  BoundaryEditDistance out;
  out.window = window;
  const std::size_t gaps = utterances < 2 ? 0 : utterances - 1;
  std::vector<char> in_hyp(gaps, 0);
  std::vector<char> in_ref(gaps, 0);
  for (auto b : hyp) in_hyp[b] = 1;
  for (auto b : ref) in_ref[b] = 1;
  std::vector<char> used(gaps, 0);
  for (std::size_t span = 1; span < window; ++span) {
    for (std::size_t i = 0; i + span < gaps; ++i) {
      const std::size_t j = i + span;
      if (used[i] || used[j]) continue;
      const bool diff_i = in_hyp[i] != in_ref[i];
      const bool diff_j = in_hyp[j] != in_ref[j];
      if (diff_i && diff_j && in_hyp[i] != in_hyp[j]) {
        used[i] = used[j] = 1;
        out.transpositions.push_back({EditKind::transposition, i, j, false});
      }
    }
  }
  for (std::size_t p = 0; p < gaps; ++p) {
    if (in_hyp[p] && in_ref[p]) {
      out.matches.push_back({EditKind::match, p, p, true});
    } else if (in_hyp[p] != in_ref[p] && !used[p]) {
      out.additions.push_back({EditKind::addition_or_deletion, p, p, in_hyp[p] != 0});
    }
  }
  return out;
}

[[nodiscard]] inline double boundary_similarity(const BoundaryEditDistance& ed) {
  const std::size_t denom = ed.denominator();
  if (denom == 0) return 1.0;
  const auto d = static_cast<double>(denom);
  return (d - ed.weighted_edits()) / d;
}

[[nodiscard]] inline double boundary_similarity(const BoundarySet& hyp, const BoundarySet& ref,
                                                std::size_t utterances, std::size_t window = 2) {
  return boundary_similarity(boundary_edit_distance(hyp, ref, utterances, window));
}

namespace detail {

// Mean reference segment length / 2, rounded half-to-even, at least 2.
[[nodiscard]] inline std::size_t default_window_size(const BoundarySet& ref, std::size_t utterances) {
  const double half = static_cast<double>(utterances) / static_cast<double>(ref.size() + 1) / 2.0;
  const auto k = static_cast<std::size_t>(std::nearbyint(half));
  return std::max<std::size_t>(k, 2);
}

[[nodiscard]] inline std::vector<std::size_t> boundary_prefix(const BoundarySet& b, std::size_t gaps) {
  std::vector<std::size_t> prefix(gaps + 1, 0);
  std::vector<char> mark(gaps, 0);
  for (auto x : b) mark[x] = 1;
  for (std::size_t g = 0; g < gaps; ++g) prefix[g + 1] = prefix[g] + static_cast<std::size_t>(mark[g]);
  return prefix;
}

}  // namespace detail

// Pk: fraction of windows of k units whose endpoints disagree on being in the
// same segment. Lower is better.
[[nodiscard]] inline double pk(const BoundarySet& hyp, const BoundarySet& ref, std::size_t utterances,
                               std::optional<std::size_t> window = std::nullopt) {
  validate_boundaries(hyp, utterances, "hypothesis");
  validate_boundaries(ref, utterances, "reference");
  const std::size_t k = window.value_or(detail::default_window_size(ref, utterances));
  if (utterances <= k) return 0.0;
  const std::size_t gaps = utterances - 1;
  const auto ph = detail::boundary_prefix(hyp, gaps);
  const auto pr = detail::boundary_prefix(ref, gaps);
  std::size_t differ = 0;
  const std::size_t windows = utterances - k;
  for (std::size_t i = 0; i < windows; ++i) {
    const bool same_h = ph[i + k] == ph[i];
    const bool same_r = pr[i + k] == pr[i];
    differ += same_h != same_r ? 1 : 0;
  }
  return static_cast<double>(differ) / static_cast<double>(windows);
}

// WindowDiff: fraction of windows whose boundary counts differ. Lower is better.
[[nodiscard]] inline double window_diff(const BoundarySet& hyp, const BoundarySet& ref, std::size_t utterances,
                                        std::optional<std::size_t> window = std::nullopt) {
  validate_boundaries(hyp, utterances, "hypothesis");
  validate_boundaries(ref, utterances, "reference");
  const std::size_t k = window.value_or(detail::default_window_size(ref, utterances));
  if (utterances <= k) return 0.0;
  const std::size_t gaps = utterances - 1;
  const auto ph = detail::boundary_prefix(hyp, gaps);
  const auto pr = detail::boundary_prefix(ref, gaps);
  std::size_t differ = 0;
  const std::size_t windows = utterances - k;
  for (std::size_t i = 0; i < windows; ++i) {
    differ += (ph[i + k] - ph[i]) != (pr[i + k] - pr[i]) ? 1 : 0;
  }
  return static_cast<double>(differ) / static_cast<double>(windows);
}

// ---------------------------------------------------------------------------
// Corpus-level reports
// ---------------------------------------------------------------------------

enum class Aggregate { micro, macro };

struct Scores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double boundary_similarity = 0.0;
  std::optional<double> pk;
  std::optional<double> window_diff;
};

struct DocumentResult {
  std::string id;
  std::size_t utterances = 0;
  BoundaryCounts counts;
  Scores scores;
  // Boundary Similarity parts for pooling: value = (denominator - edits) / denominator.
  double bs_weighted_edits = 0.0;
  std::size_t bs_denominator = 0;
};

struct EvalOptions {
  std::size_t window = 2;
  bool window_metrics = false;  // also compute Pk and WindowDiff
};

[[nodiscard]] inline DocumentResult evaluate_document(std::string id, const BoundarySet& hyp, const BoundarySet& ref,
                                                      std::size_t utterances, const EvalOptions& opts = {}) {
  DocumentResult r;
  r.id = std::move(id);
  r.utterances = utterances;
  r.counts = boundary_counts(hyp, ref, utterances);
  const auto pr = precision_recall(r.counts);
  const auto ed = boundary_edit_distance(hyp, ref, utterances, opts.window);
  r.bs_weighted_edits = ed.weighted_edits();
  r.bs_denominator = ed.denominator();
  r.scores = {pr.precision, pr.recall, pr.f1, boundary_similarity(ed), std::nullopt, std::nullopt};
  if (opts.window_metrics) {
    r.scores.pk = pk(hyp, ref, utterances);
    r.scores.window_diff = window_diff(hyp, ref, utterances);
  }
  return r;
}

struct EvalReport {
  Scores micro;
  Scores macro;
  std::vector<DocumentResult> per_document;
  Aggregate aggregate = Aggregate::macro;  // the one used for headline comparisons

  [[nodiscard]] const Scores& headline() const noexcept { return aggregate == Aggregate::macro ? macro : micro; }
};

// Micro pools TP/FP/FN and boundary edits across documents; macro averages the
// per-document scores.
[[nodiscard]] inline EvalReport aggregate_corpus(std::vector<DocumentResult> docs,
                                                 Aggregate headline = Aggregate::macro) {
  if (docs.empty()) throw InvalidArgument("cannot aggregate an empty corpus");
  EvalReport rep;
  rep.aggregate = headline;
  BoundaryCounts pooled;
  double edits = 0.0;
  std::size_t denom = 0;
  const auto n = static_cast<double>(docs.size());
  bool window_metrics = true;
  double pk_sum = 0.0;
  double wd_sum = 0.0;
  for (const auto& d : docs) {
    pooled.true_positives += d.counts.true_positives;
    pooled.false_positives += d.counts.false_positives;
    pooled.false_negatives += d.counts.false_negatives;
    edits += d.bs_weighted_edits;
    denom += d.bs_denominator;
    rep.macro.precision += d.scores.precision / n;
    rep.macro.recall += d.scores.recall / n;
    rep.macro.f1 += d.scores.f1 / n;
    rep.macro.boundary_similarity += d.scores.boundary_similarity / n;
    if (d.scores.pk && d.scores.window_diff) {
      pk_sum += *d.scores.pk;
      wd_sum += *d.scores.window_diff;
    } else {
      window_metrics = false;
    }
  }
  const auto pr = precision_recall(pooled);
  rep.micro.precision = pr.precision;
  rep.micro.recall = pr.recall;
  rep.micro.f1 = pr.f1;
  rep.micro.boundary_similarity = denom == 0 ? 1.0 : (static_cast<double>(denom) - edits) / static_cast<double>(denom);
  if (window_metrics) {
    // Window metrics have no pooled form here; both aggregates use the mean.
    rep.macro.pk = rep.micro.pk = pk_sum / n;
    rep.macro.window_diff = rep.micro.window_diff = wd_sum / n;
  }
  rep.per_document = std::move(docs);
  return rep;
}

}  // namespace hyperseg
