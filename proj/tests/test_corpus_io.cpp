#include "hyperseg/corpus_io.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <set>
#include <sstream>
#include <string>

namespace hyperseg {
namespace {

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("hyperseg_test_" + name);
}

TEST(ReadCorpus, ParsesRecord) {
  std::istringstream in(R"({"id":"d1","utterances":["a","b"],"boundaries":[0]})");
  const auto corpus = read_corpus(in);
  ASSERT_EQ(corpus.size(), 1u);
  EXPECT_EQ(corpus[0].id, "d1");
  EXPECT_EQ(corpus[0].size(), 2u);
  ASSERT_TRUE(corpus[0].gold_boundaries.has_value());
  EXPECT_EQ(*corpus[0].gold_boundaries, BoundarySet{0});
}

TEST(ReadCorpus, OptionalFieldsAndBlankLines) {
  std::istringstream in("\n{\"id\":\"x\",\"utterances\":[],\"meta\":{\"domain\":\"meetings\"}}\n\n"
                        "{\"id\":\"y\",\"utterances\":[\"hi\"],\"boundaries\":null}\n");
  const auto corpus = read_corpus(in);
  ASSERT_EQ(corpus.size(), 2u);
  EXPECT_FALSE(corpus[0].gold_boundaries);
  EXPECT_EQ(corpus[0].meta.at("domain"), "meetings");
  EXPECT_EQ(corpus[0].size(), 0u);
  EXPECT_FALSE(corpus[1].gold_boundaries);
}

TEST(ReadCorpus, EmptyInputIsEmptyCorpus) {
  std::istringstream in("");
  EXPECT_TRUE(read_corpus(in).empty());
}

TEST(ReadCorpus, OutOfRangeBoundaryNamesDocument) {
  std::istringstream in(R"({"id":"doc-7","utterances":["a","b","c"],"boundaries":[5]})");
  try {
    (void)read_corpus(in);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("doc-7"), std::string::npos) << e.what();
  }
}

TEST(ReadCorpus, MalformedLineReportsLineNumber) {
  std::istringstream in("{\"id\":\"a\",\"utterances\":[]}\n\n{\"id\": oops}\n");
  try {
    (void)read_corpus(in);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_EQ(std::string(e.what()).rfind("line 3:", 0), 0u) << e.what();
  }
}

TEST(ReadCorpus, SchemaErrors) {
  for (const char* bad : {R"({"utterances":["a"]})", R"({"id":"a"})", R"({"id":"a","utterances":[1]})",
                          R"({"id":"a","utterances":["a"],"boundaries":[-1]})", R"({"id":"a","utterances":["a"],"meta":[]})",
                          R"(["id"])", R"({"id":3,"utterances":[]})"}) {
    std::istringstream in(bad);
    EXPECT_THROW((void)read_corpus(in), ParseError) << bad;
  }
}

TEST(ReadCorpus, MissingFileNamesPath) {
  try {
    (void)read_corpus("/nonexistent/corpus.jsonl");
    FAIL() << "expected IoError";
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/corpus.jsonl"), std::string::npos);
  }
}

TEST(ReadCorpus, FileErrorsCarryPath) {
  const auto p = temp_path("bad.jsonl");
  {
    std::ofstream out(p);
    out << "{\"id\":\"a\",\"utterances\":[]}\nnot json\n";
  }
  try {
    (void)read_corpus(p.string());
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_NE(std::string(e.what()).find(p.string()), std::string::npos) << e.what();
  }
  std::filesystem::remove(p);
}

TEST(WriteCorpus, RoundTripsThroughFile) {
  SynthSpec spec;
  spec.documents = 3;
  spec.topics = 2;
  spec.max_topics = 4;
  auto corpus = synth_corpus(spec);
  corpus.push_back(Transcript{"unicode \"quoted\"", {"Ünïcödé … text", ""}, std::nullopt, {}});
  const auto p = temp_path("corpus.jsonl");
  write_corpus(p.string(), corpus);
  EXPECT_EQ(read_corpus(p.string()), corpus);
  std::filesystem::remove(p);
}

TEST(Segmentation, RoundTripAndEmptyBoundaries) {
  const std::vector<SegmentationRecord> recs{{"a", {3, 9}, "auto", 42, 12, Json{{"dim", 10000}}},
                                             {"b", {}, "damp", 7, 1, Json()}};
  std::stringstream ss;
  write_segmentation(ss, recs);
  const std::string text = ss.str();
  EXPECT_NE(text.find("\"boundaries\":[]"), std::string::npos) << text;
  EXPECT_NE(text.find("\"config\":{\"dim\":10000}"), std::string::npos) << text;
  EXPECT_EQ(read_segmentation(ss), recs);
}

TEST(Segmentation, TranscriptRecordsReadAsReferences) {
  std::istringstream in(R"({"id":"d1","utterances":["a","b","c"],"boundaries":[1]})");
  const auto recs = read_segmentation(in);
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_EQ(recs[0].boundaries, BoundarySet{1});
  EXPECT_EQ(recs[0].num_utterances, 3u);
}

TEST(Trace, HandComputedSeries) {
  const auto bs = summarize_scores({0.9, 0.9, 0.9, 0.1, 0.9});
  std::stringstream ss;
  write_trace(ss, bs, select_boundaries(bs).boundaries);
  const std::string text = ss.str();
  EXPECT_EQ(text.rfind("gap_index,score,score_normalized,threshold,is_boundary\r\n", 0), 0u);
  const auto rows = read_trace(ss);
  ASSERT_EQ(rows.size(), 5u);
  for (std::size_t j = 0; j < rows.size(); ++j) {
    EXPECT_EQ(rows[j].gap_index, j);
    EXPECT_NEAR(rows[j].threshold, 0.42, 1e-12);
    EXPECT_EQ(rows[j].is_boundary, j == 3);
    EXPECT_NEAR(rows[j].score_normalized, j == 3 ? 0.0 : 1.0, 1e-12);
  }
  EXPECT_NE(text.find("3,0.1,0,0.42,true\r\n"), std::string::npos) << text;
}

TEST(Trace, ConstantSeriesNormalizesToZero) {
  EXPECT_EQ(min_max_normalize({0.4, 0.4}), (std::vector<double>{0.0, 0.0}));
  EXPECT_TRUE(min_max_normalize({}).empty());
  std::stringstream ss;
  EXPECT_THROW(write_trace(ss, summarize_scores({0.1}), {1}), InvalidArgument);
}

TEST(Synth, StructureAndDeterminism) {
  SynthSpec spec;
  spec.documents = 20;
  spec.topics = 3;
  spec.max_topics = 6;
  const auto corpus = synth_corpus(spec);
  ASSERT_EQ(corpus.size(), 20u);
  std::set<std::size_t> seen_topics;
  for (std::size_t d = 0; d < corpus.size(); ++d) {
    const auto& t = corpus[d];
    const std::size_t topics = std::stoul(t.meta.at("topics"));
    seen_topics.insert(topics);
    ASSERT_GE(topics, 3u);
    ASSERT_LE(topics, 6u);
    ASSERT_EQ(t.size(), topics * 10);
    ASSERT_EQ(t.gold_boundaries->size(), topics - 1);
    for (std::size_t b = 0; b + 1 < topics; ++b) EXPECT_EQ((*t.gold_boundaries)[b], 10 * b + 9);
    // Tokens of block b come from block b's vocabulary only.
    for (std::size_t u = 0; u < t.size(); ++u) {
      std::istringstream words(t.utterances[u]);
      std::string w;
      std::size_t n = 0;
      const std::string prefix = "d" + std::to_string(d) + "t" + std::to_string(u / 10) + "w";
      while (words >> w) {
        ++n;
        ASSERT_EQ(w.rfind(prefix, 0), 0u) << w;
        ASSERT_LT(std::stoul(w.substr(prefix.size())), 50u);
      }
      ASSERT_EQ(n, 8u);
    }
  }
  EXPECT_GT(seen_topics.size(), 2u);
  EXPECT_EQ(synth_corpus(spec), corpus);
  spec.seed = 43;
  EXPECT_NE(synth_corpus(spec), corpus);
}

TEST(Synth, TokensSurviveTokenization) {
  const auto t = synth_corpus(SynthSpec{}).front();
  EXPECT_EQ(tokenize(t.utterances[0], TokenizerConfig::words()).size(), 8u);
}

TEST(Synth, RejectsZeroCounts) {
  SynthSpec spec;
  spec.vocab_size_per_topic = 0;
  EXPECT_THROW((void)synth_corpus(spec), InvalidArgument);
  spec = {};
  spec.max_topics = 1;
  EXPECT_THROW((void)synth_corpus(spec), InvalidArgument);
}

}  // namespace
}  // namespace hyperseg
