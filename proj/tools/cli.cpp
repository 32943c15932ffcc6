#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace hyperseg::cli {

using Json = nlohmann::json;

SeedContext RunConfig::seed_context() const {
  SeedContext ctx{seed, dim, tie == "plus-one" ? TieBreak::plus_one : TieBreak::content};
  ctx.validate();
  return ctx;
}

TokenizerConfig RunConfig::tokenizer() const {
  return granularity == "char3" ? TokenizerConfig::char_ngrams(3) : TokenizerConfig::words();
}

SegmenterConfig RunConfig::segmenter() const {
  return {mode == "damp" ? SegmentMode::damp : SegmentMode::automatic,
          stddev == "sample" ? StddevKind::sample : StddevKind::population,
          log_base == "base2" ? LogBase::base2 : LogBase::natural};
}

Representation RunConfig::representation() const { return repr == "count" ? Representation::count : Representation::hdc; }

Json RunConfig::echo() const {
  return {{"dim", dim},         {"seed", seed},       {"mode", mode},       {"granularity", granularity},
          {"log_base", log_base}, {"stddev", stddev}, {"repr", repr},       {"tie", tie},
          {"n_t", n_t},         {"stopwords_version", kStopwordListVersion}};
}

BoundaryScores score_transcript(const Transcript& t, const RunConfig& cfg, std::size_t threads) {
  const auto kind = cfg.segmenter().stddev;
  if (cfg.representation() == Representation::count) return count_boundary_scores(t, cfg.tokenizer(), kind);
  return boundary_scores(encode_transcript(t, cfg.tokenizer(), cfg.seed_context(), threads), kind);
}

std::vector<Segmentation> segment_corpus(const std::vector<Transcript>& corpus, const RunConfig& cfg) {
  std::vector<Segmentation> out(corpus.size());
  const SegmenterConfig seg = cfg.segmenter();
  const std::size_t inner = corpus.size() == 1 ? cfg.threads : 1;
  parallel_for(corpus.size(), cfg.threads,
               [&](std::size_t i) { out[i] = select(score_transcript(corpus[i], cfg, inner), seg); });
  return out;
}

std::string sanitize_id(const std::string& id, std::vector<std::string>& taken) {
  std::string stem;
  for (char c : id) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' ||
                    c == '_' || c == '.';
    stem.push_back(ok ? c : '_');
  }
  if (stem.empty() || stem.front() == '.') stem.insert(stem.begin(), '_');
  std::string name = stem;
  for (int k = 2; std::find(taken.begin(), taken.end(), name) != taken.end(); ++k) {
    name = stem + "-" + std::to_string(k);
  }
  taken.push_back(name);
  return name;
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string fixed(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

void add_run_options(CLI::App& sub, RunConfig& cfg) {
  sub.add_option("--dim", cfg.dim, "hypervector dimension")->check(CLI::Range(std::size_t{64}, std::size_t{1} << 24));
  sub.add_option("--seed", cfg.seed, "global seed")->envname("HYPERSEG_SEED");
  sub.add_option("--mode", cfg.mode, "boundary selection")->check(CLI::IsMember({"auto", "damp"}));
  sub.add_option("--granularity", cfg.granularity, "token unit")->check(CLI::IsMember({"word", "char3"}));
  sub.add_option("--log-base", cfg.log_base, "logarithm in the damp cap")->check(CLI::IsMember({"natural", "base2"}));
  sub.add_option("--stddev", cfg.stddev, "threshold deviation")->check(CLI::IsMember({"population", "sample"}));
  sub.add_option("--repr", cfg.repr, "utterance representation")->check(CLI::IsMember({"hdc", "count"}));
  sub.add_option("--tie", cfg.tie, "majority tie rule")->check(CLI::IsMember({"content", "plus-one"}));
  sub.add_option("--threads", cfg.threads, "worker threads, 0 = all cores");
}

int cmd_segment(const RunConfig& cfg, std::ostream& out) {
  const auto start = Clock::now();
  const auto corpus = read_corpus(cfg.input);
  const auto segs = segment_corpus(corpus, cfg);
  std::vector<SegmentationRecord> recs;
  recs.reserve(corpus.size());
  std::size_t segments = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    recs.push_back({corpus[i].id, segs[i].boundaries, cfg.mode, cfg.seed, corpus[i].size(), cfg.echo()});
    segments += segs[i].segment_count();
  }
  write_segmentation(cfg.output, recs);
  const double mean = corpus.empty() ? 0.0 : static_cast<double>(segments) / static_cast<double>(corpus.size());
  out << "documents: " << corpus.size() << "\nmean segments: " << fixed(mean, 2)
      << "\nwall time: " << fixed(elapsed_ms(start), 1) << " ms\n";
  return kExitOk;
}

struct EvalArgs {
  std::string hyp;
  std::string ref;
  std::string baseline;
  std::size_t n_t = 2;
  std::uint64_t seed = kDefaultSeed;
  bool json = false;
  bool window_metrics = false;
};

struct Reference {
  std::string id;
  BoundarySet boundaries;
  std::size_t utterances = 0;
};

std::vector<Reference> load_reference(const std::string& path) {
  std::vector<Reference> out;
  std::set<std::string> seen;
  for (auto& r : read_segmentation(path)) {
    if (!seen.insert(r.id).second) throw ValidationError(path + ": duplicate document id '" + r.id + "'");
    out.push_back({r.id, std::move(r.boundaries), r.num_utterances});
  }
  return out;
}

std::vector<DocumentResult> evaluate_against(const std::vector<Reference>& ref,
                                             const std::vector<SegmentationRecord>& hyp, const std::string& hyp_path,
                                             const EvalOptions& opts) {
  std::map<std::string, const SegmentationRecord*> by_id;
  for (const auto& h : hyp) {
    if (!by_id.emplace(h.id, &h).second) throw ValidationError(hyp_path + ": duplicate document id '" + h.id + "'");
  }
  std::vector<std::string> missing;
  std::set<std::string> ref_ids;
  for (const auto& r : ref) {
    ref_ids.insert(r.id);
    if (!by_id.contains(r.id)) missing.push_back(r.id);
  }
  std::vector<std::string> extra;
  for (const auto& h : hyp) {
    if (!ref_ids.contains(h.id)) extra.push_back(h.id);
  }
  if (!missing.empty() || !extra.empty()) {
    std::string msg = "document ids differ between hypothesis and reference";
    if (!missing.empty()) msg += "; missing from hypothesis: '" + missing.front() + "'";
    if (!extra.empty()) msg += "; not in reference: '" + extra.front() + "'";
    throw ValidationError(msg);
  }
  std::vector<DocumentResult> docs;
  docs.reserve(ref.size());
  for (const auto& r : ref) {
    const auto& h = *by_id.at(r.id);
    std::size_t u = r.utterances != 0 ? r.utterances : h.num_utterances;
    if (r.utterances != 0 && h.num_utterances != 0 && r.utterances != h.num_utterances) {
      throw ValidationError("document '" + r.id + "': utterance counts differ (" + std::to_string(h.num_utterances) +
                            " vs " + std::to_string(r.utterances) + ")");
    }
    docs.push_back(evaluate_document(r.id, h.boundaries, r.boundaries, u, opts));
  }
  return docs;
}

Json scores_json(const Scores& s) {
  Json j = {{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}, {"boundary_similarity", s.boundary_similarity}};
  if (s.pk) j["pk"] = *s.pk;
  if (s.window_diff) j["window_diff"] = *s.window_diff;
  return j;
}

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  if (a.hyp.empty() && a.baseline.empty()) throw InvalidArgument("eval needs --hyp, --baseline or both");
  const auto ref = load_reference(a.ref);
  const EvalOptions opts{a.n_t, a.window_metrics};
  std::vector<std::pair<std::string, EvalReport>> systems;
  if (!a.hyp.empty()) systems.emplace_back("hyp", aggregate_corpus(evaluate_against(ref, read_segmentation(a.hyp), a.hyp, opts)));
  if (!a.baseline.empty()) {
    std::vector<SegmentationRecord> base;
    for (const auto& r : ref) {
      // Per-document seed so equal-length documents get independent draws.
      const std::uint64_t seed = rng::mix64(a.seed) ^ rng::fnv1a64(r.id);
      const auto s = a.baseline == "random" ? random_segmentation(r.utterances, r.boundaries.size(), seed)
                                            : uniform_segmentation(r.utterances, r.boundaries.size());
      base.push_back({r.id, s.boundaries, a.baseline, a.seed, r.utterances, Json()});
    }
    systems.emplace_back(a.baseline, aggregate_corpus(evaluate_against(ref, base, a.baseline, opts)));
  }

  if (a.json) {
    Json j = {{"n_t", a.n_t}, {"documents", ref.size()}, {"systems", Json::array()}};
    for (const auto& [name, rep] : systems) {
      j["systems"].push_back({{"name", name}, {"micro", scores_json(rep.micro)}, {"macro", scores_json(rep.macro)}});
    }
    out << j.dump(2) << '\n';
    return kExitOk;
  }
  char line[160];
  std::snprintf(line, sizeof line, "%-10s %-9s %9s %8s %8s", "system", "aggregate", "documents", "F1", "BS");
  out << line << (a.window_metrics ? "       Pk       WD" : "") << '\n';
  for (const auto& [name, rep] : systems) {
    for (const auto* which : {"micro", "macro"}) {
      const Scores& s = std::string(which) == "micro" ? rep.micro : rep.macro;
      std::snprintf(line, sizeof line, "%-10s %-9s %9zu %8.2f %8.2f", name.c_str(), which, ref.size(), 100 * s.f1,
                    100 * s.boundary_similarity);
      out << line;
      if (s.pk && s.window_diff) {
        std::snprintf(line, sizeof line, " %8.2f %8.2f", 100 * *s.pk, 100 * *s.window_diff);
        out << line;
      }
      out << '\n';
    }
  }
  return kExitOk;
}

struct BenchArgs {
  std::size_t repeats = 5;
  std::size_t documents = 10;
  std::size_t tokens = 80;
  bool json = false;
};

struct Timing {
  double mean = 0.0;
  double stddev = 0.0;
};

Timing time_per_utterance(const std::vector<Transcript>& corpus, RunConfig cfg, std::size_t threads,
                          std::size_t repeats, std::size_t utterances) {
  cfg.threads = threads;
  (void)segment_corpus(corpus, cfg);  // warm-up
  std::vector<double> ms;
  for (std::size_t r = 0; r < repeats; ++r) {
    const auto start = Clock::now();
    const auto segs = segment_corpus(corpus, cfg);
    ms.push_back(elapsed_ms(start) / static_cast<double>(utterances));
    if (segs.size() != corpus.size()) throw Error("benchmark run lost documents");
  }
  Timing t;
  t.mean = std::accumulate(ms.begin(), ms.end(), 0.0) / static_cast<double>(ms.size());
  for (double x : ms) t.stddev += (x - t.mean) * (x - t.mean);
  t.stddev = ms.size() > 1 ? std::sqrt(t.stddev / static_cast<double>(ms.size() - 1)) : 0.0;
  return t;
}

int cmd_bench(const RunConfig& cfg, const BenchArgs& b, std::ostream& out) {
  if (b.repeats == 0) throw InvalidArgument("--repeats must be >= 1");
  std::vector<Transcript> corpus;
  if (!cfg.input.empty()) {
    corpus = read_corpus(cfg.input);
  } else {
    SynthSpec spec;
    spec.documents = b.documents;
    spec.topics = 3;
    spec.max_topics = 6;
    spec.tokens_per_utterance = b.tokens;
    spec.seed = cfg.seed;
    corpus = synth_corpus(spec);
  }
  std::size_t utterances = 0;
  std::size_t tokens = 0;
  const auto tok = cfg.tokenizer();
  for (const auto& t : corpus) {
    utterances += t.size();
    for (const auto& u : t.utterances) tokens += tokenize(u, tok).size();
  }
  if (utterances == 0) throw InvalidArgument("benchmark corpus has no utterances");
  const std::size_t threads = resolve_threads(cfg.threads <= 1 ? 0 : cfg.threads);
  const Timing single = time_per_utterance(corpus, cfg, 1, b.repeats, utterances);
  const Timing multi = time_per_utterance(corpus, cfg, threads, b.repeats, utterances);
  const double tokens_per_utt = static_cast<double>(tokens) / static_cast<double>(utterances);
  constexpr double kReferenceMs = 1.09;

  if (b.json) {
    const Json j = {{"documents", corpus.size()},
                    {"utterances", utterances},
                    {"tokens_per_utterance", tokens_per_utt},
                    {"repeats", b.repeats},
                    {"single_thread", {{"ms_per_utterance", single.mean}, {"stddev", single.stddev},
                                       {"utterances_per_second", 1000.0 / single.mean}}},
                    {"multi_thread", {{"threads", threads}, {"ms_per_utterance", multi.mean}, {"stddev", multi.stddev},
                                      {"utterances_per_second", 1000.0 / multi.mean}}},
                    {"reference_ms_per_utterance", kReferenceMs},
                    {"config", cfg.echo()}};
    out << j.dump(2) << '\n';
    return kExitOk;
  }
  out << "corpus: " << corpus.size() << " documents, " << utterances << " utterances, "
      << fixed(tokens_per_utt, 1) << " tokens/utterance\n"
      << "single thread: " << fixed(single.mean, 4) << " +- " << fixed(single.stddev, 4) << " ms/utterance ("
      << fixed(1000.0 / single.mean, 0) << " utterances/s)\n"
      << threads << " threads: " << fixed(multi.mean, 4) << " +- " << fixed(multi.stddev, 4) << " ms/utterance ("
      << fixed(1000.0 / multi.mean, 0) << " utterances/s)\n"
      << "reference point: " << fixed(kReferenceMs, 2) << " ms/utterance\n";
  return kExitOk;
}

int cmd_trace(const RunConfig& cfg, std::ostream& out) {
  const auto corpus = read_corpus(cfg.input);
  const std::filesystem::path dir(cfg.output);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + cfg.output + ": " + ec.message());
  std::vector<BoundaryScores> scores(corpus.size());
  parallel_for(corpus.size(), cfg.threads, [&](std::size_t i) { scores[i] = score_transcript(corpus[i], cfg, 1); });
  std::vector<std::string> taken;
  Json files = Json::array();
  const auto seg = cfg.segmenter();
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const std::string name = sanitize_id(corpus[i].id, taken) + ".csv";
    write_trace((dir / name).string(), scores[i], select(scores[i], seg).boundaries);
    files.push_back({{"id", corpus[i].id}, {"file", name}});
  }
  const std::string config_path = (dir / "config.json").string();
  std::ofstream cfg_out(config_path);
  if (!cfg_out) throw IoError("cannot open for writing: " + config_path);
  cfg_out << Json{{"config", cfg.echo()}, {"documents", files}}.dump(2) << '\n';
  if (!cfg_out) throw IoError("write failed: " + config_path);
  out << "wrote " << corpus.size() << " trace files to " << cfg.output << '\n';
  return kExitOk;
}

int cmd_synth(const SynthSpec& spec, const std::string& output, std::ostream& out) {
  const auto corpus = synth_corpus(spec);
  write_corpus(output, corpus);
  out << "wrote " << corpus.size() << " documents to " << output << '\n';
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Unsupervised topic segmentation with bipolar hypervectors"};
  app.name("hyperseg");
  app.require_subcommand(1);

  RunConfig seg_cfg;
  auto* segment = app.add_subcommand("segment", "segment a transcript corpus");
  add_run_options(*segment, seg_cfg);
  segment->add_option("--input,-i", seg_cfg.input, "transcript JSONL")->required();
  segment->add_option("--output,-o", seg_cfg.output, "segmentation JSONL")->required();

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "score segmentations against reference boundaries");
  eval->add_option("--hyp", eval_args.hyp, "hypothesis segmentation JSONL");
  eval->add_option("--ref", eval_args.ref, "reference JSONL (transcripts or segmentations)")->required();
  eval->add_option("--baseline", eval_args.baseline, "also score a baseline given the gold boundary count")
      ->check(CLI::IsMember({"random", "uniform"}));
  eval->add_option("--n-t", eval_args.n_t, "near-miss window for boundary similarity")->check(CLI::Range(2, 1000));
  eval->add_option("--seed", eval_args.seed, "random baseline seed")->envname("HYPERSEG_SEED");
  eval->add_flag("--json", eval_args.json, "emit JSON");
  eval->add_flag("--window-metrics", eval_args.window_metrics, "also report Pk and WindowDiff");

  RunConfig bench_cfg;
  BenchArgs bench_args;
  auto* bench = app.add_subcommand("bench", "measure segmentation latency per utterance");
  add_run_options(*bench, bench_cfg);
  bench->add_option("--input,-i", bench_cfg.input, "transcript JSONL (default: synthetic corpus)");
  bench->add_option("--repeats", bench_args.repeats, "timed repetitions");
  bench->add_option("--documents", bench_args.documents, "synthetic documents")->check(CLI::PositiveNumber);
  bench->add_option("--tokens", bench_args.tokens, "synthetic tokens per utterance")->check(CLI::PositiveNumber);
  bench->add_flag("--json", bench_args.json, "emit JSON");

  RunConfig trace_cfg;
  auto* trace = app.add_subcommand("trace", "write per-gap similarity traces as CSV");
  add_run_options(*trace, trace_cfg);
  trace->add_option("--input,-i", trace_cfg.input, "transcript JSONL")->required();
  trace->add_option("--output-dir,-o", trace_cfg.output, "directory for CSV files")->required();

  SynthSpec synth_spec;
  std::string synth_output;
  auto* synth = app.add_subcommand("synth", "generate a synthetic corpus with disjoint topic vocabularies");
  synth->add_option("--output,-o", synth_output, "transcript JSONL")->required();
  synth->add_option("--documents", synth_spec.documents);
  synth->add_option("--topics", synth_spec.topics);
  synth->add_option("--max-topics", synth_spec.max_topics, "draw topics per document from [topics, max-topics]");
  synth->add_option("--utterances-per-topic", synth_spec.utterances_per_topic);
  synth->add_option("--vocab", synth_spec.vocab_size_per_topic, "vocabulary size per topic");
  synth->add_option("--tokens", synth_spec.tokens_per_utterance, "tokens per utterance");
  synth->add_option("--seed", synth_spec.seed)->envname("HYPERSEG_SEED");

  std::vector<std::string> argv_store{"hyperseg"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*segment) return cmd_segment(seg_cfg, out);
    if (*eval) return cmd_eval(eval_args, out);
    if (*bench) return cmd_bench(bench_cfg, bench_args, out);
    if (*trace) return cmd_trace(trace_cfg, out);
    if (*synth) return cmd_synth(synth_spec, synth_output, out);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvalidConfiguration& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace hyperseg::cli
