#pragma once

// Utterance hypervectors by positional permutation and majority bundling.
//
// Token i of an l-token utterance is rotated right by l - i - 1, so the last
// token keeps shift 0, and the rotated vectors are majority-bundled. Vote ties
// follow ctx.tie_break.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hyperseg/hypervector.hpp"
#include "hyperseg/parallel.hpp"
#include "hyperseg/tokenizer.hpp"
#include "hyperseg/transcript.hpp"

namespace hyperseg {

// Reserved lexicon keys. The leading NUL keeps them out of reach of any
// tokenizer output.
inline constexpr std::string_view kEmptyUtteranceKey{"\0EMPTY", 6};
inline constexpr std::string_view kTieKeyPrefix{"\0TIE", 4};

struct UtteranceEmbedding {
  Hypervector vector;
  std::size_t token_count = 0;
  std::size_t utterance_index = 0;
};

[[nodiscard]] inline Hypervector empty_utterance_vector(const SeedContext& ctx) {
  return random_hypervector(ctx, kEmptyUtteranceKey);
}

// Tie-breaking vector for an even-length utterance under TieBreak::content:
// keyed by the exact token sequence, so equal utterances still encode equally.
[[nodiscard]] inline Hypervector content_tie_vector(std::span<const std::string> tokens, const SeedContext& ctx) {
  std::string key(kTieKeyPrefix);
  for (const auto& t : tokens) {
    key += t;
    key.push_back('\x1f');
  }
  return random_hypervector(ctx, key);
}

[[nodiscard]] inline UtteranceEmbedding encode_utterance(std::span<const std::string> tokens, const SeedContext& ctx,
                                                         std::size_t utterance_index = 0) {
  ctx.validate();
  if (tokens.empty()) return {empty_utterance_vector(ctx), 0, utterance_index};
  const std::size_t l = tokens.size();
  MajorityAccumulator acc(ctx.dimension);
  for (std::size_t i = 0; i < l; ++i) {
    acc.add_rotated(random_hypervector(ctx, tokens[i]), l - i - 1);
  }
  if (l % 2 == 0 && ctx.tie_break == TieBreak::content) {
    const Hypervector tie = content_tie_vector(tokens, ctx);
    return {acc.result(&tie), l, utterance_index};
  }
  return {acc.result(), l, utterance_index};
}

// One embedding per utterance, in order; identical for any thread count.
[[nodiscard]] inline std::vector<UtteranceEmbedding> encode_transcript(const Transcript& transcript,
                                                                       const TokenizerConfig& cfg,
                                                                       const SeedContext& ctx,
                                                                       std::size_t threads = 1) {
  ctx.validate();
  cfg.validate();
  const std::size_t n = transcript.utterances.size();
  std::vector<UtteranceEmbedding> out;
  if (n == 0) return out;
  // Slots are filled out of order, so start every one from a valid vector.
  out.assign(n, UtteranceEmbedding{Hypervector(ctx.dimension), 0, 0});
  parallel_for(n, threads, [&](std::size_t u) {
    const auto tokens = tokenize(transcript.utterances[u], cfg);
    out[u] = encode_utterance(tokens, ctx, u);
  });
  return out;
}

}  // namespace hyperseg
