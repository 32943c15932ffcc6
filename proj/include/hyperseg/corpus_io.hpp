#pragma once

// Transcript corpora, segmentation results and similarity traces on disk,
// plus the synthetic disjoint-vocabulary corpus generator.
//
// Transcript JSONL, one object per line:
//   {"id": str, "utterances": [str...], "boundaries": [int...]?, "meta": {str: str}?}
// Segmentation JSONL, one object per line:
//   {"id", "boundaries", "mode", "seed", "num_utterances", "config"}
// Trace CSV (RFC 4180, CRLF rows):
//   gap_index,score,score_normalized,threshold,is_boundary

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hyperseg/error.hpp"
#include "hyperseg/random.hpp"
#include "hyperseg/segmenter.hpp"
#include "hyperseg/transcript.hpp"

namespace hyperseg {

using Json = nlohmann::json;

namespace detail {

[[nodiscard]] inline bool is_blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(), [](char c) { return c == ' ' || c == '\t' || c == '\r'; });
}

[[nodiscard]] inline BoundarySet parse_boundaries(const Json& j, std::size_t line) {
  if (!j.is_array()) throw ParseError(line, "\"boundaries\" must be an array of non-negative integers");
  BoundarySet out;
  out.reserve(j.size());
  for (const auto& b : j) {
    if (!b.is_number_integer() || b.get<long long>() < 0) {
      throw ParseError(line, "\"boundaries\" must be an array of non-negative integers");
    }
    out.push_back(b.get<std::size_t>());
  }
  return out;
}

[[nodiscard]] inline std::string required_string(const Json& rec, const char* key, std::size_t line) {
  const auto it = rec.find(key);
  if (it == rec.end() || !it->is_string()) {
    throw ParseError(line, std::string("missing or non-string \"") + key + "\"");
  }
  return it->get<std::string>();
}

// Shortest decimal form that is stable across runs (12 significant digits).
[[nodiscard]] inline std::string format_real(double x) {
  if (x == 0.0) x = 0.0;  // drop the sign of -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  return in;
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path);
  return out;
}

inline void finish_output(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace detail

[[nodiscard]] inline Transcript parse_transcript(const std::string& line_text, std::size_t line) {
  Json rec;
  try {
    rec = Json::parse(line_text);
  } catch (const Json::parse_error& e) {
    throw ParseError(line, std::string("malformed JSON: ") + e.what());
  }
  if (!rec.is_object()) throw ParseError(line, "record must be a JSON object");
  Transcript t;
  t.id = detail::required_string(rec, "id", line);
  const auto utts = rec.find("utterances");
  if (utts == rec.end() || !utts->is_array()) throw ParseError(line, "missing or non-array \"utterances\"");
  for (const auto& u : *utts) {
    if (!u.is_string()) throw ParseError(line, "\"utterances\" must contain only strings");
    t.utterances.push_back(u.get<std::string>());
  }
  if (const auto b = rec.find("boundaries"); b != rec.end() && !b->is_null()) {
    t.gold_boundaries = detail::parse_boundaries(*b, line);
  }
  if (const auto m = rec.find("meta"); m != rec.end() && !m->is_null()) {
    if (!m->is_object()) throw ParseError(line, "\"meta\" must be an object of strings");
    for (const auto& [k, v] : m->items()) {
      if (!v.is_string()) throw ParseError(line, "\"meta\" values must be strings");
      t.meta.emplace(k, v.get<std::string>());
    }
  }
  t.validate();
  return t;
}

[[nodiscard]] inline std::vector<Transcript> read_corpus(std::istream& in) {
  std::vector<Transcript> corpus;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::is_blank(line)) continue;
    corpus.push_back(parse_transcript(line, lineno));
  }
  return corpus;
}

[[nodiscard]] inline std::vector<Transcript> read_corpus(const std::string& path) {
  auto in = detail::open_input(path);
  try {
    return read_corpus(in);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path + ": " + e.detail());
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

[[nodiscard]] inline Json to_json(const Transcript& t) {
  Json rec = {{"id", t.id}, {"utterances", t.utterances}};
  if (t.gold_boundaries) rec["boundaries"] = *t.gold_boundaries;
  if (!t.meta.empty()) rec["meta"] = t.meta;
  return rec;
}

inline void write_corpus(std::ostream& out, const std::vector<Transcript>& corpus) {
  for (const auto& t : corpus) out << to_json(t).dump() << '\n';
}

inline void write_corpus(const std::string& path, const std::vector<Transcript>& corpus) {
  auto out = detail::open_output(path);
  write_corpus(out, corpus);
  detail::finish_output(out, path);
}

// One segmented document.
struct SegmentationRecord {
  std::string id;
  BoundarySet boundaries;
  std::string mode = "auto";
  std::uint64_t seed = 0;
  std::size_t num_utterances = 0;
  Json config;  // resolved run configuration; null when absent

  friend bool operator==(const SegmentationRecord&, const SegmentationRecord&) = default;
};

[[nodiscard]] inline Json to_json(const SegmentationRecord& r) {
  Json rec = {{"id", r.id},
              {"boundaries", r.boundaries},
              {"mode", r.mode},
              {"seed", r.seed},
              {"num_utterances", r.num_utterances}};
  if (!r.config.is_null()) rec["config"] = r.config;
  return rec;
}

inline void write_segmentation(std::ostream& out, const std::vector<SegmentationRecord>& results) {
  for (const auto& r : results) out << to_json(r).dump() << '\n';
}

inline void write_segmentation(const std::string& path, const std::vector<SegmentationRecord>& results) {
  auto out = detail::open_output(path);
  write_segmentation(out, results);
  detail::finish_output(out, path);
}

// Accepts segmentation records and transcript records alike: a transcript's
// utterance array supplies num_utterances.
[[nodiscard]] inline std::vector<SegmentationRecord> read_segmentation(std::istream& in) {
  std::vector<SegmentationRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::is_blank(line)) continue;
    Json rec;
    try {
      rec = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw ParseError(lineno, std::string("malformed JSON: ") + e.what());
    }
    if (!rec.is_object()) throw ParseError(lineno, "record must be a JSON object");
    SegmentationRecord r;
    r.id = detail::required_string(rec, "id", lineno);
    if (const auto b = rec.find("boundaries"); b != rec.end() && !b->is_null()) {
      r.boundaries = detail::parse_boundaries(*b, lineno);
    }
    if (const auto m = rec.find("mode"); m != rec.end() && m->is_string()) r.mode = m->get<std::string>();
    if (const auto s = rec.find("seed"); s != rec.end() && s->is_number_unsigned()) r.seed = s->get<std::uint64_t>();
    if (const auto n = rec.find("num_utterances"); n != rec.end() && n->is_number_unsigned()) {
      r.num_utterances = n->get<std::size_t>();
    } else if (const auto u = rec.find("utterances"); u != rec.end() && u->is_array()) {
      r.num_utterances = u->size();
    }
    if (const auto c = rec.find("config"); c != rec.end()) r.config = *c;
    out.push_back(std::move(r));
  }
  return out;
}

[[nodiscard]] inline std::vector<SegmentationRecord> read_segmentation(const std::string& path) {
  auto in = detail::open_input(path);
  return read_segmentation(in);
}

// Min-max normalised copy of the scores; a constant series maps to 0.
[[nodiscard]] inline std::vector<double> min_max_normalize(const std::vector<double>& s) {
  std::vector<double> out(s.size(), 0.0);
  if (s.empty()) return out;
  const auto [lo, hi] = std::minmax_element(s.begin(), s.end());
  const double range = *hi - *lo;
  if (range <= 0.0) return out;
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = (s[i] - *lo) / range;
  return out;
}

inline void write_trace(std::ostream& out, const BoundaryScores& bs, const BoundarySet& boundaries) {
  const auto norm = min_max_normalize(bs.scores);
  std::vector<char> marked(bs.scores.size(), 0);
  for (auto b : boundaries) {
    if (b >= marked.size()) throw InvalidArgument("trace boundary " + std::to_string(b) + " out of range");
    marked[b] = 1;
  }
  out << "gap_index,score,score_normalized,threshold,is_boundary\r\n";
  const std::string threshold = detail::format_real(bs.threshold);
  for (std::size_t j = 0; j < bs.scores.size(); ++j) {
    out << j << ',' << detail::format_real(bs.scores[j]) << ',' << detail::format_real(norm[j]) << ',' << threshold
        << ',' << (marked[j] ? "true" : "false") << "\r\n";
  }
}

inline void write_trace(const std::string& path, const BoundaryScores& bs, const BoundarySet& boundaries) {
  auto out = detail::open_output(path);
  write_trace(out, bs, boundaries);
  detail::finish_output(out, path);
}

struct TraceRow {
  std::size_t gap_index = 0;
  double score = 0.0;
  double score_normalized = 0.0;
  double threshold = 0.0;
  bool is_boundary = false;
};

[[nodiscard]] inline std::vector<TraceRow> read_trace(std::istream& in) {
  std::vector<TraceRow> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (lineno == 1 || line.empty()) continue;
    std::stringstream ss(line);
    std::string f[5];
    for (auto& field : f) {
      if (!std::getline(ss, field, ',')) throw ParseError(lineno, "trace row needs 5 fields");
    }
    try {
      rows.push_back({std::stoul(f[0]), std::stod(f[1]), std::stod(f[2]), std::stod(f[3]), f[4] == "true"});
    } catch (const std::exception&) {
      throw ParseError(lineno, "non-numeric trace field");
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Synthetic corpus
// ---------------------------------------------------------------------------

struct SynthSpec {
  std::size_t documents = 1;
  std::size_t topics = 2;
  // Topics per document are drawn uniformly from [topics, max_topics];
  // 0 means exactly `topics`.
  std::size_t max_topics = 0;
  std::size_t utterances_per_topic = 10;
  std::size_t vocab_size_per_topic = 50;
  std::size_t tokens_per_utterance = 8;
  std::uint64_t seed = 42;

  void validate() const {
    if (documents == 0 || topics == 0 || utterances_per_topic == 0 || vocab_size_per_topic == 0 ||
        tokens_per_utterance == 0) {
      throw InvalidArgument("synthetic corpus counts must all be >= 1");
    }
    if (max_topics != 0 && max_topics < topics) throw InvalidArgument("max_topics must be >= topics");
  }
};

// Token k of topic block b in document d. Blocks never share a token.
[[nodiscard]] inline std::string synth_token(std::size_t document, std::size_t block, std::size_t k) {
  return "d" + std::to_string(document) + "t" + std::to_string(block) + "w" + std::to_string(k);
}

// Each document concatenates topic blocks with disjoint vocabularies; tokens
// are drawn uniformly from the block's vocabulary. Gold boundaries sit at the
// block joints.
[[nodiscard]] inline std::vector<Transcript> synth_corpus(const SynthSpec& spec) {
  spec.validate();
  std::vector<Transcript> corpus;
  corpus.reserve(spec.documents);
  for (std::size_t d = 0; d < spec.documents; ++d) {
    rng::SplitMix64 gen(rng::mix64(spec.seed) ^ rng::mix64(d + 0x53594e54ULL));
    std::size_t topics = spec.topics;
    if (spec.max_topics > spec.topics) topics += static_cast<std::size_t>(gen.below(spec.max_topics - spec.topics + 1));
    Transcript t;
    t.id = "synth-" + std::to_string(d);
    t.gold_boundaries.emplace();
    t.meta = {{"source", "synthetic"}, {"topics", std::to_string(topics)}};
    for (std::size_t b = 0; b < topics; ++b) {
      for (std::size_t u = 0; u < spec.utterances_per_topic; ++u) {
        std::string text;
        for (std::size_t k = 0; k < spec.tokens_per_utterance; ++k) {
          if (k) text.push_back(' ');
          text += synth_token(d, b, static_cast<std::size_t>(gen.below(spec.vocab_size_per_topic)));
        }
        t.utterances.push_back(std::move(text));
      }
      if (b + 1 < topics) t.gold_boundaries->push_back(t.utterances.size() - 1);
    }
    corpus.push_back(std::move(t));
  }
  return corpus;
}

}  // namespace hyperseg
