#include "hyperseg/metrics.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <iterator>
#include <json.hpp>
#include <string>
#include <vector>

#include "hyperseg/random.hpp"

namespace hyperseg {
namespace {

using Json = nlohmann::json;

BoundarySet random_boundaries(rng::SplitMix64& gen, std::size_t u) {
  BoundarySet b;
  for (std::size_t j = 0; j + 1 < u; ++j) {
    if (gen.below(4) == 0) b.push_back(j);
  }
  return b;
}

std::vector<Json> reference_cases() {
  std::ifstream in(std::string(HYPERSEG_TEST_DATA_DIR) + "/metric_reference.jsonl");
  std::vector<Json> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(Json::parse(line));
  }
  return out;
}

TEST(BoundaryF1, HandCase) {
  const auto pr = boundary_f1({2, 5}, {2, 7}, 10);
  EXPECT_DOUBLE_EQ(pr.precision, 0.5);
  EXPECT_DOUBLE_EQ(pr.recall, 0.5);
  EXPECT_DOUBLE_EQ(pr.f1, 0.5);
}

TEST(BoundaryF1, EmptyConventions) {
  EXPECT_DOUBLE_EQ(boundary_f1({}, {}, 5).f1, 1.0);
  EXPECT_DOUBLE_EQ(boundary_f1({1}, {}, 5).f1, 0.0);
  EXPECT_DOUBLE_EQ(boundary_f1({}, {1}, 5).f1, 0.0);
  EXPECT_DOUBLE_EQ(boundary_f1({1}, {2}, 5).f1, 0.0);
}

TEST(BoundaryF1, RejectsInvalidSets) {
  EXPECT_THROW((void)boundary_f1({3, 2}, {}, 10), ValidationError);
  EXPECT_THROW((void)boundary_f1({}, {9}, 10), ValidationError);
  EXPECT_THROW((void)boundary_f1({1, 1}, {}, 10), ValidationError);
}

TEST(BoundaryF1, MatchesSetIntersectionOracle) {
  rng::SplitMix64 gen(17);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t u = 2 + gen.below(60);
    const auto h = random_boundaries(gen, u);
    const auto r = random_boundaries(gen, u);
    BoundarySet both;
    std::set_intersection(h.begin(), h.end(), r.begin(), r.end(), std::back_inserter(both));
    const auto c = boundary_counts(h, r, u);
    ASSERT_EQ(c.true_positives, both.size());
    ASSERT_EQ(c.false_positives, h.size() - both.size());
    ASSERT_EQ(c.false_negatives, r.size() - both.size());
    const auto pr = precision_recall(c);
    if (!h.empty() && !r.empty() && !both.empty()) {
      const double p = static_cast<double>(both.size()) / static_cast<double>(h.size());
      const double rc = static_cast<double>(both.size()) / static_cast<double>(r.size());
      ASSERT_NEAR(pr.f1, 2 * p * rc / (p + rc), 1e-12);
    }
  }
}

TEST(BoundarySimilarity, HandCases) {
  EXPECT_DOUBLE_EQ(boundary_similarity({}, {}, 10), 1.0);
  EXPECT_DOUBLE_EQ(boundary_similarity({3, 6}, {3, 6}, 10), 1.0);
  // one transposition of span 1 at n_t = 2: (1 - 0.5) / 1
  EXPECT_DOUBLE_EQ(boundary_similarity({4}, {3}, 10), 0.5);
  EXPECT_DOUBLE_EQ(boundary_similarity({5}, {3}, 10), 0.0);
  EXPECT_DOUBLE_EQ(boundary_similarity({5}, {3}, 10, 3), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(boundary_similarity({}, {3}, 10), 0.0);
  EXPECT_THROW((void)boundary_similarity({}, {3}, 10, 1), InvalidArgument);
}

TEST(BoundarySimilarity, EditDecomposition) {
  const auto ed = boundary_edit_distance({1, 4, 8}, {1, 5, 12}, 20, 2);
  EXPECT_EQ(ed.matches.size(), 1u);
  EXPECT_EQ(ed.transpositions.size(), 1u);
  EXPECT_EQ(ed.transpositions.front().first, 4u);
  EXPECT_EQ(ed.transpositions.front().second, 5u);
  EXPECT_EQ(ed.additions.size(), 2u);
  EXPECT_EQ(ed.denominator(), 4u);
  EXPECT_DOUBLE_EQ(ed.weighted_edits(), 2.5);
}

TEST(BoundarySimilarity, ShortSpansArePairedFirst) {
  // 3 could pair with 5 (span 2) but 4-5 (span 1) wins; 3 is then an addition.
  const auto ed = boundary_edit_distance({3, 4}, {5}, 10, 3);
  ASSERT_EQ(ed.transpositions.size(), 1u);
  EXPECT_EQ(ed.transpositions.front().first, 4u);
  EXPECT_EQ(ed.additions.size(), 1u);
  EXPECT_EQ(ed.additions.front().first, 3u);
}

TEST(BoundarySimilarity, MatchesSegevalReference) {
  const auto cases = reference_cases();
  ASSERT_GE(cases.size(), 250u);
  for (const auto& c : cases) {
    const auto h = c["hyp"].get<BoundarySet>();
    const auto r = c["ref"].get<BoundarySet>();
    const auto u = c["utterances"].get<std::size_t>();
    const auto n_t = c["n_t"].get<std::size_t>();
    ASSERT_NEAR(boundary_similarity(h, r, u, n_t), c["bs"].get<double>(), 1e-9) << c.dump();
  }
}

TEST(BoundarySimilarity, SymmetricInHypothesisAndReference) {
  rng::SplitMix64 gen(23);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t u = 2 + gen.below(50);
    const auto h = random_boundaries(gen, u);
    const auto r = random_boundaries(gen, u);
    const std::size_t n_t = 2 + gen.below(3);
    ASSERT_DOUBLE_EQ(boundary_similarity(h, r, u, n_t), boundary_similarity(r, h, u, n_t));
  }
}

TEST(BoundarySimilarity, NearMissBeatsFarMissAndExactBeatsBoth) {
  const BoundarySet ref{10};
  const double exact = boundary_similarity({10}, ref, 30, 3);
  const double near = boundary_similarity({11}, ref, 30, 3);
  const double nearish = boundary_similarity({12}, ref, 30, 3);
  const double far = boundary_similarity({13}, ref, 30, 3);
  EXPECT_GT(exact, near);
  EXPECT_GT(near, nearish);
  EXPECT_GT(nearish, far);
  EXPECT_EQ(far, 0.0);
  EXPECT_EQ(boundary_f1({11}, ref, 30).f1, 0.0);
}

TEST(WindowMetrics, DefaultWindowSize) {
  EXPECT_EQ(detail::default_window_size({9}, 20), 5u);        // 10 / 2
  EXPECT_EQ(detail::default_window_size({}, 5), 2u);          // 2.5 -> 2 (half to even)
  EXPECT_EQ(detail::default_window_size({}, 7), 4u);          // 3.5 -> 4
  EXPECT_EQ(detail::default_window_size({1, 2, 3}, 8), 2u);   // 1 -> floor at 2
}

TEST(WindowMetrics, MatchSegevalReference) {
  std::size_t checked = 0;
  for (const auto& c : reference_cases()) {
    const auto h = c["hyp"].get<BoundarySet>();
    const auto r = c["ref"].get<BoundarySet>();
    const auto u = c["utterances"].get<std::size_t>();
    if (c.contains("pk")) {
      ASSERT_NEAR(pk(h, r, u), c["pk"].get<double>(), 1e-12) << c.dump();
      ASSERT_NEAR(window_diff(h, r, u), c["window_diff"].get<double>(), 1e-12) << c.dump();
      ++checked;
    }
    if (c.contains("pk_w3")) {
      ASSERT_NEAR(pk(h, r, u, 3), c["pk_w3"].get<double>(), 1e-12) << c.dump();
      ASSERT_NEAR(window_diff(h, r, u, 3), c["window_diff_w3"].get<double>(), 1e-12) << c.dump();
    }
  }
  EXPECT_GE(checked, 250u);
}

TEST(WindowMetrics, PerfectAndDegenerate) {
  EXPECT_EQ(pk({3, 7}, {3, 7}, 12), 0.0);
  EXPECT_EQ(window_diff({3, 7}, {3, 7}, 12), 0.0);
  EXPECT_EQ(pk({}, {}, 2), 0.0);  // no window fits
}

TEST(Aggregation, MicroPoolsMacroAverages) {
  rng::SplitMix64 gen(31);
  std::vector<DocumentResult> docs;
  BoundaryCounts pooled;
  double edits = 0, denom = 0, f1_sum = 0, bs_sum = 0, pk_sum = 0;
  for (int d = 0; d < 25; ++d) {
    const std::size_t u = 2 + gen.below(40);
    const auto h = random_boundaries(gen, u);
    const auto r = random_boundaries(gen, u);
    const auto c = boundary_counts(h, r, u);
    pooled.true_positives += c.true_positives;
    pooled.false_positives += c.false_positives;
    pooled.false_negatives += c.false_negatives;
    const auto ed = boundary_edit_distance(h, r, u);
    edits += ed.weighted_edits();
    denom += static_cast<double>(ed.denominator());
    f1_sum += precision_recall(c).f1;
    bs_sum += boundary_similarity(ed);
    pk_sum += pk(h, r, u);
    docs.push_back(evaluate_document("d" + std::to_string(d), h, r, u, {2, true}));
  }
  const auto rep = aggregate_corpus(docs);
  const double tp = static_cast<double>(pooled.true_positives);
  const double p = tp / static_cast<double>(pooled.true_positives + pooled.false_positives);
  const double rc = tp / static_cast<double>(pooled.true_positives + pooled.false_negatives);
  EXPECT_NEAR(rep.micro.f1, 2 * p * rc / (p + rc), 1e-12);
  EXPECT_NEAR(rep.micro.boundary_similarity, (denom - edits) / denom, 1e-12);
  EXPECT_NEAR(rep.macro.f1, f1_sum / 25, 1e-12);
  EXPECT_NEAR(rep.macro.boundary_similarity, bs_sum / 25, 1e-12);
  ASSERT_TRUE(rep.macro.pk.has_value());
  EXPECT_NEAR(*rep.macro.pk, pk_sum / 25, 1e-12);
  EXPECT_EQ(&rep.headline(), &rep.macro);
  EXPECT_EQ(rep.per_document.size(), 25u);
}

TEST(Aggregation, MicroAndMacroDiffer) {
  // A long perfect document and a short wrong one.
  std::vector<DocumentResult> docs{evaluate_document("a", {1, 3, 5, 7}, {1, 3, 5, 7}, 10),
                                   evaluate_document("b", {1}, {3}, 10)};
  const auto rep = aggregate_corpus(docs, Aggregate::micro);
  EXPECT_DOUBLE_EQ(rep.macro.f1, 0.5);
  EXPECT_DOUBLE_EQ(rep.micro.f1, 0.8);  // P = R = 4/5
  EXPECT_EQ(&rep.headline(), &rep.micro);
  EXPECT_FALSE(rep.macro.pk.has_value());
  EXPECT_THROW((void)aggregate_corpus({}), InvalidArgument);
}

}  // namespace
}  // namespace hyperseg
