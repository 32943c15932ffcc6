// Segments a small hand-written meeting transcript and scores it against the
// boundary we know is there.

#include <cstdio>

#include "hyperseg/hyperseg.hpp"

int main() {
  using namespace hyperseg;

  Transcript meeting;
  meeting.id = "weekly-sync";
  meeting.utterances = {
      "The budget review shows travel spending over budget again this quarter.",
      "Travel budget cuts would bring quarter spending back under the budget line.",
      "Finance wants the revised budget and spending numbers for next quarter.",
      "Spending on travel dropped once the budget freeze started last quarter.",
      "The website launch moved because the homepage design is not finished.",
      "Design feedback on the homepage needs to land before the launch date.",
      "Once the homepage design ships the website launch can go ahead.",
      "Launch checklist: homepage design, website copy, and final review.",
  };
  meeting.gold_boundaries = BoundarySet{3};

  const SeedContext ctx;  // D = 10000, seed 42
  const auto tokenizer = TokenizerConfig::words();

  const auto embeddings = encode_transcript(meeting, tokenizer, ctx);
  const auto scores = boundary_scores(embeddings);
  std::printf("threshold %.4f (mean %.4f, stddev %.4f)\n", scores.threshold, scores.mean, scores.stddev);
  for (std::size_t j = 0; j < scores.scores.size(); ++j) {
    std::printf("  gap %zu  cos %+.4f%s\n", j, scores.scores[j], scores.below_threshold(j) ? "  below" : "");
  }

  const auto seg = segment(meeting, tokenizer, ctx);
  std::printf("boundaries:");
  for (auto b : seg.boundaries) std::printf(" %zu", b);
  std::printf("\n");

  const auto result = evaluate_document(meeting.id, seg.boundaries, *meeting.gold_boundaries, meeting.size());
  std::printf("F1 %.2f  BS %.2f\n", 100 * result.scores.f1, 100 * result.scores.boundary_similarity);
}
