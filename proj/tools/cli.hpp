#pragma once

// Command-line front end. `run` is the whole program minus process exit, so
// tests can drive it in-process with captured streams.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <json.hpp>
#include <string>
#include <vector>

#include "hyperseg/hyperseg.hpp"

namespace hyperseg::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitFailure = 2;  // I/O, parse or validation errors

enum class Representation { hdc, count };

struct RunConfig {
  std::size_t dim = kDefaultDimension;
  std::uint64_t seed = kDefaultSeed;
  std::string mode = "auto";
  std::string granularity = "word";
  std::string log_base = "natural";
  std::string stddev = "population";
  std::string repr = "hdc";
  std::string tie = "plus-one";
  std::size_t n_t = 2;
  std::size_t threads = 1;
  std::string input;
  std::string output;

  [[nodiscard]] SeedContext seed_context() const;
  [[nodiscard]] TokenizerConfig tokenizer() const;
  [[nodiscard]] SegmenterConfig segmenter() const;
  [[nodiscard]] Representation representation() const;
  // Everything that affects results. Paths and thread count are left out so
  // the echo is identical across runs that must produce identical output.
  [[nodiscard]] nlohmann::json echo() const;
};

// Gap scores for one transcript under the configured representation.
[[nodiscard]] BoundaryScores score_transcript(const Transcript& t, const RunConfig& cfg, std::size_t threads);

// Segments a corpus; documents are spread across cfg.threads workers.
[[nodiscard]] std::vector<Segmentation> segment_corpus(const std::vector<Transcript>& corpus, const RunConfig& cfg);

// Filesystem-safe stem for a document id; distinct ids in `taken` stay distinct.
[[nodiscard]] std::string sanitize_id(const std::string& id, std::vector<std::string>& taken);

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hyperseg::cli
