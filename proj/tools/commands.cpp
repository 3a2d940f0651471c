#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "absa/corpus.hpp"
#include "absa/errors.hpp"
#include "absa/lexicon.hpp"
#include "absa/metrics.hpp"
#include "absa/pipeline.hpp"
#include "absa/prediction_dump.hpp"
#include "absa/remote.hpp"
#include "absa/replay.hpp"
#include "absa/report.hpp"
#include "absa/sha256.hpp"

namespace absa::cli {
namespace {

namespace fs = std::filesystem;

// Raised inside a command to end it with a specific exit code.
struct Exit {
  int code;
  std::string message;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Exit{kInputError, "cannot read " + path.string()};
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const fs::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Exit{kInputError, "cannot write " + path.string()};
}

Split guess_split(const fs::path& path) {
  std::string stem = path.stem().string();
  std::transform(stem.begin(), stem.end(), stem.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (stem.find("train") != std::string::npos) return Split::kTrain;
  if (stem.find("test") != std::string::npos) return Split::kTest;
  return Split::kOther;
}

struct LoadedCorpus {
  Corpus corpus;
  std::string sha256;
};

LoadedCorpus load_corpus(const fs::path& path, ParseMode mode = ParseMode::kStrict) {
  std::string bytes = read_file(path);
  ParseOptions options;
  options.mode = mode;
  options.name = path.stem().string();
  options.split = guess_split(path);
  try {
    return {parse_semeval_xml(bytes, options), sha256_hex(bytes)};
  } catch (const Error& e) {
    throw Exit{kInputError, path.string() + ": " + e.what()};
  }
}

// Settings shared by run, score and record.
struct EvalOptions {
  std::string corpus;
  std::string conflict = "drop";
  std::vector<std::string> formats{"json"};
  std::string out;
  std::string dataset;
  bool strict_offsets = false;
  bool strip_articles = false;
  bool dedupe = true;
  bool require_substring = true;
  std::size_t max_terms = 0;
};

struct BackendOptions {
  std::string ate;
  std::string asc;
  std::string fixtures;
  std::string lexicon;
  std::string endpoint;
  std::size_t parallelism = 1;
  int timeout_ms = 60000;
  int max_retries = 3;
  std::size_t batch_size = 16;
  std::size_t max_in_flight = 4;
  bool asc_given_gold = false;
};

void add_eval_options(CLI::App* cmd, EvalOptions& o, bool with_filter) {
  cmd->add_option("--corpus", o.corpus, "SemEval XML corpus")->required();
  cmd->add_option("--conflict", o.conflict, "Conflict label policy")
      ->check(CLI::IsMember({"drop", "keep", "map_to_neutral"}))
      ->capture_default_str();
  cmd->add_option("--format", o.formats, "Report formats")
      ->delimiter(',')
      ->check(CLI::IsMember({"json", "csv", "markdown"}))
      ->capture_default_str();
  cmd->add_option("--dataset", o.dataset, "Dataset label (Res-14, Lap-14, Res-15, Res-16)");
  cmd->add_flag("--strict-offsets", o.strict_offsets,
                "Terms must also match gold character offsets");
  cmd->add_flag("--strip-articles", o.strip_articles,
                "Drop a leading the/a/an before matching");
  if (with_filter) {
    cmd->add_flag("!--no-dedupe", o.dedupe, "Keep repeated candidate terms");
    cmd->add_flag("!--no-require-substring", o.require_substring,
                  "Keep candidates that do not occur in the sentence");
    cmd->add_option("--max-terms", o.max_terms, "Keep at most N aspects per sentence")
        ->check(CLI::PositiveNumber);
  }
}

void add_backend_options(CLI::App* cmd, BackendOptions& o) {
  const auto kinds = CLI::IsMember({"lexicon", "replay", "remote"});
  cmd->add_option("--ate", o.ate, "ATE backend")->required()->check(kinds);
  cmd->add_option("--asc", o.asc, "ASC backend")->required()->check(kinds);
  cmd->add_option("--lexicon", o.lexicon, "Lexicon backend configuration (JSON)");
  cmd->add_option("--endpoint", o.endpoint, "Inference service base URL")
      ->envname("ABSA_ENDPOINT");
  cmd->add_option("--parallelism", o.parallelism, "Sentences processed concurrently")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--timeout-ms", o.timeout_ms, "Remote request timeout")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-retries", o.max_retries, "Remote retries on transient failure")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--batch-size", o.batch_size, "Remote items per request")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-in-flight", o.max_in_flight, "Remote concurrent requests")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--asc-given-gold", o.asc_given_gold,
                "Also classify every gold aspect (ASC independent of ATE)");
}

ReportManifest make_manifest(const LoadedCorpus& loaded, const EvalOptions& o) {
  ReportManifest m;
  m.corpus_name = loaded.corpus.name;
  m.corpus_sha256 = loaded.sha256;
  m.dataset = o.dataset;
  m.filter.dedupe = o.dedupe;
  m.filter.require_substring = o.require_substring;
  if (o.max_terms > 0) m.filter.max_terms = o.max_terms;
  m.score.strict_offsets = o.strict_offsets;
  m.score.norm.strip_articles = o.strip_articles;
  m.conflict = *parse_conflict_policy(o.conflict);
  return m;
}

std::vector<Format> formats_of(const EvalOptions& o) {
  std::vector<Format> out;
  for (const std::string& f : o.formats) {
    Format parsed = *parse_format(f);
    if (std::find(out.begin(), out.end(), parsed) == out.end()) out.push_back(parsed);
  }
  return out;
}

void write_reports(const fs::path& dir, const ReportDocument& report,
                   const std::vector<Format>& formats) {
  for (Format f : formats) {
    write_file(dir / ("report." + std::string(file_extension(f))), emit(report, f));
  }
}

void print_headline(std::ostream& out, const ReportDocument& r) {
  auto pct = [](double v) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%.2f", std::round(v * 10000.0) / 100.0);
    return std::string(buf);
  };
  out << "ATE F1 " << pct(r.ate.f1) << "  ASC accuracy " << pct(r.asc_pipelined.accuracy)
      << "  Joint F1 " << pct(r.joint.f1) << "\n";
}

// Owns whichever backends the flags select.
struct Backends {
  std::unique_ptr<AteBackend> ate;
  std::unique_ptr<AscBackend> asc;
  std::string service_version = "n/a";
};

Backends make_backends(const BackendOptions& o, bool replay_allowed) {
  Backends b;
  std::shared_ptr<const ReplayStore> store;
  std::shared_ptr<RemoteClient> client;
  std::optional<LexiconConfig> lexicon;

  auto need_store = [&] {
    if (!replay_allowed) throw Exit{kInputError, "replay backends cannot be recorded"};
    if (store) return;
    if (o.fixtures.empty()) throw Exit{kInputError, "--fixtures is required for replay"};
    try {
      store = std::make_shared<const ReplayStore>(ReplayStore::load(o.fixtures));
    } catch (const Error& e) {
      throw Exit{kInputError, e.what()};
    }
  };
  auto need_lexicon = [&] {
    if (lexicon) return;
    if (o.lexicon.empty()) throw Exit{kInputError, "--lexicon is required for lexicon"};
    try {
      lexicon = parse_lexicon_config(read_file(o.lexicon));
    } catch (const std::invalid_argument& e) {
      throw Exit{kInputError, e.what()};
    }
  };
  auto need_client = [&] {
    if (client) return;
    if (o.endpoint.empty()) {
      throw Exit{kInputError, "--endpoint or ABSA_ENDPOINT is required for remote"};
    }
    RemoteEndpointConfig cfg;
    cfg.base_url = o.endpoint;
    cfg.timeout_ms = o.timeout_ms;
    cfg.max_retries = o.max_retries;
    cfg.max_batch = o.batch_size;
    cfg.max_in_flight = o.max_in_flight;
    try {
      client = std::make_shared<RemoteClient>(cfg);
    } catch (const std::invalid_argument& e) {
      throw Exit{kInputError, e.what()};
    }
    try {
      HealthInfo health = client->health();
      b.service_version = health.service_version.empty()
                              ? "health:" + sha256_hex(health.body).substr(0, 12)
                              : health.service_version;
    } catch (const Error& e) {
      throw Exit{kBackendFailure, std::string("health probe failed: ") + e.what()};
    }
  };

  if (o.ate == "lexicon") {
    need_lexicon();
    b.ate = std::make_unique<LexiconAte>(*lexicon);
  } else if (o.ate == "replay") {
    need_store();
    b.ate = std::make_unique<ReplayAte>(store);
  } else {
    need_client();
    b.ate = std::make_unique<RemoteAte>(client);
  }
  if (o.asc == "lexicon") {
    need_lexicon();
    b.asc = std::make_unique<LexiconAsc>(*lexicon);
  } else if (o.asc == "replay") {
    need_store();
    b.asc = std::make_unique<ReplayAsc>(store);
  } else {
    need_client();
    b.asc = std::make_unique<RemoteAsc>(client);
  }
  return b;
}

// Shared body of run and record: pipeline, optional gold ASC, report files.
int execute(const EvalOptions& eval, const BackendOptions& backend_opts,
            AteBackend& ate, AscBackend& asc, const std::string& service_version,
            std::ostream& out, std::ostream& err,
            const std::shared_ptr<FixtureWriter>& writer) {
  LoadedCorpus loaded = load_corpus(eval.corpus);
  ReportManifest manifest = make_manifest(loaded, eval);
  manifest.ate_backend = ate.id();
  manifest.asc_backend = asc.id();
  manifest.service_version = service_version;
  Corpus gold = apply_conflict_policy(loaded.corpus, manifest.conflict);

  std::vector<PipelineOutput> outputs;
  std::optional<AscSummary> given_gold;
  try {
    outputs = run_corpus(ate, asc, loaded.corpus, manifest.filter,
                         backend_opts.parallelism);
    if (backend_opts.asc_given_gold) {
      // Conflict has no counterpart among predicted labels; score it as neutral
      // only when the policy already did so.
      Corpus for_gold = manifest.conflict == ConflictPolicy::kKeep
                            ? apply_conflict_policy(gold, ConflictPolicy::kDrop)
                            : gold;
      given_gold = score_asc_given_gold(for_gold, asc, manifest.score);
    }
  } catch (const BackendUnavailable& e) {
    if (writer) writer->mark_incomplete(e.completed(), e.what());
    err << "backend failure at sentence '" << e.sentence_id() << "' (" << e.stage()
        << "): " << e.what() << "\ncompleted " << e.completed() << " of "
        << loaded.corpus.sentences.size() << " sentences\n";
    return kBackendFailure;
  } catch (const Error& e) {
    if (writer) writer->mark_incomplete(0, e.what());
    err << "backend failure: " << e.what() << "\n";
    return kBackendFailure;
  }

  if (eval.out.empty()) {
    ReportDocument report = evaluate(gold, outputs, manifest, given_gold);
    print_headline(out, report);
    return kOk;
  }
  fs::path dir(eval.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Exit{kInputError, "cannot create " + dir.string() + ": " + ec.message()};

  ReportDocument report = evaluate(gold, outputs, manifest, given_gold);
  write_file(dir / "predictions.jsonl", write_prediction_dump(outputs));
  write_reports(dir, report, formats_of(eval));
  write_file(dir / "manifest.json",
             emit_manifest(RunManifest{manifest, utc_timestamp_now(),
                                       backend_opts.parallelism}));
  print_headline(out, report);
  return kOk;
}

int cmd_validate(const std::vector<std::string>& paths, std::ostream& out,
                 std::ostream& err) {
  int status = kOk;
  for (const std::string& path : paths) {
    LoadedCorpus loaded;
    try {
      loaded = load_corpus(path, ParseMode::kLenient);
    } catch (const Exit& e) {
      err << e.message << "\n";
      return kInputError;
    }
    auto violations = validate_corpus(loaded.corpus);
    if (violations.empty()) {
      out << path << ": ok (" << loaded.corpus.sentences.size() << " sentences)\n";
      continue;
    }
    status = kEvaluationFailure;
    for (const Violation& v : violations) {
      out << path << "\t" << v.sentence_id << "\t" << v.rule << "\t" << v.detail << "\n";
    }
  }
  return status;
}

int cmd_stats(const std::vector<std::string>& paths, std::ostream& out) {
  std::vector<std::pair<std::string, CorpusStats>> rows;
  for (const std::string& path : paths) {
    rows.emplace_back(path, corpus_stats(load_corpus(path).corpus));
  }
  out << "corpus,sentences,aspects,positive,negative,neutral,conflict,no_aspect,"
         "mean_aspects\n";
  for (const auto& [path, s] : rows) {
    char mean[32];
    std::snprintf(mean, sizeof(mean), "%.2f", s.mean_aspects);
    out << fs::path(path).stem().string() << "," << s.sentences << "," << s.aspects
        << "," << s.count(Polarity::kPositive) << "," << s.count(Polarity::kNegative)
        << "," << s.count(Polarity::kNeutral) << "," << s.count(Polarity::kConflict)
        << "," << s.sentences_without_aspects << "," << mean << "\n";
  }
  return kOk;
}

int cmd_run(const EvalOptions& eval, const BackendOptions& backend_opts,
            std::ostream& out, std::ostream& err) {
  Backends b = make_backends(backend_opts, true);
  return execute(eval, backend_opts, *b.ate, *b.asc, b.service_version, out, err, nullptr);
}

int cmd_record(const EvalOptions& eval, const BackendOptions& backend_opts,
               std::ostream& out, std::ostream& err) {
  if (backend_opts.fixtures.empty()) {
    throw Exit{kInputError, "--fixtures names the fixture file to write"};
  }
  Backends b = make_backends(backend_opts, false);
  std::shared_ptr<FixtureWriter> writer;
  try {
    writer = std::make_shared<FixtureWriter>(backend_opts.fixtures);
  } catch (const IoError& e) {
    throw Exit{kInputError, e.what()};
  }
  auto ate = record_wrap(*b.ate, writer);
  auto asc = record_wrap(*b.asc, writer);
  int status = execute(eval, backend_opts, *ate, *asc, b.service_version, out, err, writer);
  if (status == kOk) {
    out << "recorded " << writer->records_written() << " fixture records to "
        << backend_opts.fixtures << "\n";
  } else {
    err << "fixture " << backend_opts.fixtures << " is marked incomplete\n";
  }
  return status;
}

struct ScoreOptions {
  std::string predictions;
  std::string manifest;
};

int cmd_score(const EvalOptions& eval, const ScoreOptions& score, const CLI::App& cmd,
              std::ostream& out, std::ostream& err) {
  LoadedCorpus loaded = load_corpus(eval.corpus);
  ReportManifest manifest = make_manifest(loaded, eval);

  // Settings of the producing run come from its manifest; explicit flags win.
  fs::path manifest_path = score.manifest;
  if (manifest_path.empty()) {
    fs::path sibling = fs::path(score.predictions).parent_path() / "manifest.json";
    if (fs::exists(sibling)) manifest_path = sibling;
  }
  if (!manifest_path.empty()) {
    RunManifest run;
    try {
      run = parse_manifest_json(read_file(manifest_path));
    } catch (const std::invalid_argument& e) {
      throw Exit{kInputError, manifest_path.string() + ": " + e.what()};
    }
    manifest.ate_backend = run.report.ate_backend;
    manifest.asc_backend = run.report.asc_backend;
    manifest.service_version = run.report.service_version;
    manifest.filter = run.report.filter;
    if (cmd.count("--dataset") == 0) manifest.dataset = run.report.dataset;
    if (cmd.count("--conflict") == 0) manifest.conflict = run.report.conflict;
    if (cmd.count("--strict-offsets") == 0) {
      manifest.score.strict_offsets = run.report.score.strict_offsets;
    }
    if (cmd.count("--strip-articles") == 0) {
      manifest.score.norm.strip_articles = run.report.score.norm.strip_articles;
    }
  } else {
    manifest.ate_backend = "unknown";
    manifest.asc_backend = "unknown";
  }

  std::vector<PipelineOutput> dumped;
  try {
    dumped = read_prediction_dump(read_file(score.predictions), manifest.score.norm);
  } catch (const DumpCorrupt& e) {
    throw Exit{kInputError, e.what()};
  }

  std::map<std::string, PipelineOutput> by_id;
  for (PipelineOutput& o : dumped) {
    std::string id = o.sentence_id;
    if (!by_id.emplace(id, std::move(o)).second) {
      err << "duplicate sentence id in predictions: " << id << "\n";
      return kEvaluationFailure;
    }
  }
  std::vector<PipelineOutput> outputs;
  for (const Sentence& s : loaded.corpus.sentences) {
    auto it = by_id.find(s.id);
    if (it == by_id.end()) {
      err << "warning: no prediction for sentence '" << s.id << "', scored as empty\n";
      PipelineOutput empty;
      empty.sentence_id = s.id;
      outputs.push_back(std::move(empty));
    } else {
      outputs.push_back(std::move(it->second));
      by_id.erase(it);
    }
  }
  if (!by_id.empty()) {
    err << "predictions name " << by_id.size() << " sentence(s) not in the corpus, e.g. '"
        << by_id.begin()->first << "'\n";
    return kEvaluationFailure;
  }

  Corpus gold = apply_conflict_policy(loaded.corpus, manifest.conflict);
  ReportDocument report = evaluate(gold, outputs, manifest);
  if (!eval.out.empty()) {
    std::error_code ec;
    fs::create_directories(eval.out, ec);
    if (ec) throw Exit{kInputError, "cannot create " + eval.out};
    write_reports(eval.out, report, formats_of(eval));
  }
  print_headline(out, report);
  return kOk;
}

struct CompareOptions {
  std::string report;
  std::string dataset;
  double tolerance = kDefaultTolerance;
  std::string format = "markdown";
  std::string series;
};

int cmd_compare(const CompareOptions& o, std::ostream& out, std::ostream& err) {
  ReportDocument report;
  try {
    report = parse_report_json(read_file(o.report));
  } catch (const std::invalid_argument& e) {
    throw Exit{kInputError, o.report + ": " + e.what()};
  }
  std::string dataset = o.dataset.empty() ? report.manifest.dataset : o.dataset;
  if (dataset.empty()) throw Exit{kInputError, "--dataset is required"};

  ComparisonResult result;
  try {
    result = compare_to_baseline(report, dataset, PublishedBaselines::shipped(), o.tolerance);
  } catch (const UnknownDataset& e) {
    err << e.what() << "\n";
    return kInputError;
  }
  out << emit(result, *parse_format(o.format));
  if (!o.series.empty()) write_file(o.series, emit_series_csv(result, PublishedBaselines::shipped()));
  return result.any_below() ? kEvaluationFailure : kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Aspect-based sentiment analysis evaluation harness", "absa"};
  app.require_subcommand(1);
  app.set_config("--config", "",
                 "TOML-style key = value file with one [subcommand] section per "
                 "command; flags override it");
  app.set_version_flag("--version", std::string(kToolVersion));

  std::vector<std::string> validate_paths;
  auto* validate = app.add_subcommand("validate", "Check corpus files against the invariants");
  validate->add_option("paths", validate_paths, "Corpus files")->required();

  std::vector<std::string> stats_paths;
  auto* stats = app.add_subcommand("stats", "Corpus statistics as csv");
  stats->add_option("paths", stats_paths, "Corpus files")->required();

  EvalOptions run_eval;
  BackendOptions run_backends;
  auto* run_cmd = app.add_subcommand("run", "Run the pipeline and score it");
  add_eval_options(run_cmd, run_eval, true);
  add_backend_options(run_cmd, run_backends);
  run_cmd->add_option("--fixtures", run_backends.fixtures, "Replay fixture file");
  run_cmd->add_option("--out", run_eval.out, "Output directory");

  EvalOptions score_eval;
  ScoreOptions score_opts;
  auto* score = app.add_subcommand("score", "Score a prediction dump");
  add_eval_options(score, score_eval, false);
  score->add_option("--predictions", score_opts.predictions, "Prediction dump")->required();
  score->add_option("--manifest", score_opts.manifest,
                    "Manifest of the producing run (default: next to the dump)");
  score->add_option("--out", score_eval.out, "Output directory");

  CompareOptions compare_opts;
  auto* compare = app.add_subcommand("compare", "Compare a report with published results");
  compare->add_option("--report", compare_opts.report, "report.json")->required();
  compare->add_option("--dataset", compare_opts.dataset, "Res-14, Lap-14, Res-15 or Res-16");
  compare->add_option("--tolerance", compare_opts.tolerance, "Allowed F1 points below")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  compare->add_option("--format", compare_opts.format, "Output format")
      ->check(CLI::IsMember({"json", "csv", "markdown"}))
      ->capture_default_str();
  compare->add_option("--series", compare_opts.series,
                      "Also write per-model F1 series csv for plotting");

  EvalOptions record_eval;
  BackendOptions record_backends;
  auto* record = app.add_subcommand("record", "Run the pipeline and record fixtures");
  add_eval_options(record, record_eval, true);
  add_backend_options(record, record_backends);
  record->add_option("--fixtures", record_backends.fixtures, "Fixture file to write")
      ->required();
  record->add_option("--out", record_eval.out, "Output directory");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (validate->parsed()) return cmd_validate(validate_paths, out, err);
    if (stats->parsed()) return cmd_stats(stats_paths, out);
    if (run_cmd->parsed()) return cmd_run(run_eval, run_backends, out, err);
    if (score->parsed()) return cmd_score(score_eval, score_opts, *score, out, err);
    if (compare->parsed()) return cmd_compare(compare_opts, out, err);
    if (record->parsed()) return cmd_record(record_eval, record_backends, out, err);
  } catch (const Exit& e) {
    err << e.message << "\n";
    return e.code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

}  // namespace absa::cli
