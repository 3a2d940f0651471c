#include "absa/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <stdexcept>

#include <json.hpp>

#include "absa/errors.hpp"

namespace absa {
namespace {

using ordered_json = nlohmann::ordered_json;

double round2(double v) { return std::round(v * 100.0) / 100.0; }

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string pct(double fraction) { return fixed2(round2(fraction * 100.0)); }

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string md_cell(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += '\\';
    out += c == '\n' ? ' ' : c;
  }
  return out;
}

// JSON <-> value helpers --------------------------------------------------

ordered_json to_json(const PrfScore& s) {
  return {{"tp", s.counts.tp},
          {"fp", s.counts.fp},
          {"fn", s.counts.fn},
          {"precision", round2(s.precision * 100.0)},
          {"recall", round2(s.recall * 100.0)},
          {"f1", round2(s.f1 * 100.0)},
          {"degenerate", s.degenerate()}};
}

MatchCounts counts_from_json(const ordered_json& j) {
  return {j.at("tp").get<std::size_t>(), j.at("fp").get<std::size_t>(),
          j.at("fn").get<std::size_t>()};
}

ordered_json to_json(const AscSummary& s) {
  ordered_json per_class;
  for (Polarity p : kSentimentClasses) {
    per_class[std::string(to_string(p))] = to_json(s.per_class[index_of(p)]);
  }
  return {{"total", s.total},
          {"correct", s.correct},
          {"accuracy", round2(s.accuracy * 100.0)},
          {"micro_f1", round2(s.micro_f1 * 100.0)},
          {"macro_f1", round2(s.macro_f1 * 100.0)},
          {"degenerate", s.degenerate()},
          {"per_class", per_class}};
}

// Mirrors summarize_asc so that parsed values are bit-identical.
AscSummary asc_from_json(const ordered_json& j) {
  AscSummary s;
  s.total = j.at("total").get<std::size_t>();
  s.correct = j.at("correct").get<std::size_t>();
  MatchCounts micro;
  double macro = 0.0;
  for (Polarity p : kSentimentClasses) {
    MatchCounts c = counts_from_json(j.at("per_class").at(std::string(to_string(p))));
    s.per_class[index_of(p)] = prf(c);
    micro += c;
    macro += s.per_class[index_of(p)].f1;
  }
  if (s.total > 0) {
    s.accuracy = static_cast<double>(s.correct) / static_cast<double>(s.total);
  }
  s.micro_f1 = prf(micro).f1;
  s.macro_f1 = macro / 3.0;
  return s;
}

ordered_json to_json(const FilterConfig& f) {
  ordered_json j;
  j["require_substring"] = f.require_substring;
  j["lowercase"] = f.lowercase;
  j["strip_chars"] = f.strip_chars;
  j["dedupe"] = f.dedupe;
  j["max_terms"] = f.max_terms ? ordered_json(*f.max_terms) : ordered_json(nullptr);
  return j;
}

FilterConfig filter_from_json(const ordered_json& j) {
  FilterConfig f;
  f.require_substring = j.at("require_substring").get<bool>();
  f.lowercase = j.at("lowercase").get<bool>();
  f.strip_chars = j.at("strip_chars").get<std::string>();
  f.dedupe = j.at("dedupe").get<bool>();
  if (!j.at("max_terms").is_null()) f.max_terms = j.at("max_terms").get<std::size_t>();
  return f;
}

ordered_json to_json(const NormConfig& n) {
  return {{"lowercase", n.lowercase},
          {"strip_chars", n.strip_chars},
          {"collapse_whitespace", n.collapse_whitespace},
          {"strip_articles", n.strip_articles}};
}

NormConfig norm_from_json(const ordered_json& j) {
  NormConfig n;
  n.lowercase = j.at("lowercase").get<bool>();
  n.strip_chars = j.at("strip_chars").get<std::string>();
  n.collapse_whitespace = j.at("collapse_whitespace").get<bool>();
  n.strip_articles = j.at("strip_articles").get<bool>();
  return n;
}

ordered_json to_json(const ReportManifest& m) {
  ordered_json j;
  j["corpus"] = m.corpus_name;
  j["corpus_sha256"] = m.corpus_sha256;
  j["dataset"] = m.dataset;
  j["ate_backend"] = m.ate_backend;
  j["asc_backend"] = m.asc_backend;
  j["service_version"] = m.service_version;
  j["filter"] = to_json(m.filter);
  j["norm"] = to_json(m.score.norm);
  j["strict_offsets"] = m.score.strict_offsets;
  j["conflict_policy"] = std::string(to_string(m.conflict));
  j["term_matching"] = "multiset";
  j["averaging"] = "micro";
  j["tool_version"] = m.tool_version;
  return j;
}

ReportManifest manifest_from_json(const ordered_json& j) {
  ReportManifest m;
  m.corpus_name = j.at("corpus").get<std::string>();
  m.corpus_sha256 = j.at("corpus_sha256").get<std::string>();
  m.dataset = j.at("dataset").get<std::string>();
  m.ate_backend = j.at("ate_backend").get<std::string>();
  m.asc_backend = j.at("asc_backend").get<std::string>();
  m.service_version = j.at("service_version").get<std::string>();
  m.filter = filter_from_json(j.at("filter"));
  m.score.norm = norm_from_json(j.at("norm"));
  m.score.strict_offsets = j.at("strict_offsets").get<bool>();
  auto policy = parse_conflict_policy(j.at("conflict_policy").get<std::string>());
  if (!policy) throw std::invalid_argument("unknown conflict policy in manifest");
  m.conflict = *policy;
  m.tool_version = j.at("tool_version").get<std::string>();
  return m;
}

ordered_json pairs_to_json(const std::vector<TermPolarity>& pairs) {
  ordered_json arr = ordered_json::array();
  for (const TermPolarity& p : pairs) {
    arr.push_back({{"term", p.term}, {"polarity", std::string(to_string(p.polarity))}});
  }
  return arr;
}

std::vector<TermPolarity> pairs_from_json(const ordered_json& arr) {
  std::vector<TermPolarity> out;
  for (const auto& p : arr) {
    auto polarity = parse_polarity(p.at("polarity").get<std::string>());
    if (!polarity) throw std::invalid_argument("unknown polarity in error listing");
    out.push_back({p.at("term").get<std::string>(), *polarity});
  }
  return out;
}

ordered_json report_json(const ReportDocument& r) {
  ordered_json j;
  j["manifest"] = to_json(r.manifest);
  j["ate"] = to_json(r.ate);
  j["asc"] = {{"pipelined", to_json(r.asc_pipelined)},
              {"given_gold", r.asc_given_gold ? to_json(*r.asc_given_gold)
                                              : ordered_json(nullptr)}};
  j["joint"] = to_json(r.joint);
  ordered_json errors = ordered_json::array();
  for (const SentenceErrors& e : r.errors) {
    errors.push_back({{"id", e.sentence_id},
                      {"missing", pairs_to_json(e.missing)},
                      {"spurious", pairs_to_json(e.spurious)}});
  }
  j["errors"] = std::move(errors);
  return j;
}

std::string dataset_label(const ReportManifest& m) {
  return m.dataset.empty() ? m.corpus_name : m.dataset;
}

std::string report_csv(const ReportDocument& r) {
  const std::string ds = csv_field(dataset_label(r.manifest));
  std::string out = "dataset,task,metric,value\n";
  auto row = [&](std::string_view task, std::string_view metric, double fraction) {
    out += ds + "," + std::string(task) + "," + std::string(metric) + "," +
           pct(fraction) + "\n";
  };
  auto prf_rows = [&](std::string_view task, const PrfScore& s) {
    row(task, "precision", s.precision);
    row(task, "recall", s.recall);
    row(task, "f1", s.f1);
  };
  auto asc_rows = [&](std::string_view task, const AscSummary& s) {
    row(task, "accuracy", s.accuracy);
    row(task, "micro_f1", s.micro_f1);
    row(task, "macro_f1", s.macro_f1);
  };
  prf_rows(task::kAte, r.ate);
  asc_rows(task::kAsc, r.asc_pipelined);
  if (r.asc_given_gold) asc_rows(task::kAscGivenGold, *r.asc_given_gold);
  prf_rows(task::kJoint, r.joint);
  return out;
}

std::string report_markdown(const ReportDocument& r) {
  static constexpr std::string_view kNone = "---";
  std::string out = "## " + md_cell(r.manifest.corpus_name);
  if (!r.manifest.dataset.empty()) out += " (" + md_cell(r.manifest.dataset) + ")";
  out += "\n\nATE: `" + md_cell(r.manifest.ate_backend) + "`, ASC: `" +
         md_cell(r.manifest.asc_backend) + "`\n\n";
  out += "| Task | Precision | Recall | F1 | Accuracy | Macro-F1 |\n";
  out += "|---|---|---|---|---|---|\n";
  auto prf_row = [&](std::string_view name, const PrfScore& s) {
    out += "| " + std::string(name) + " | " + pct(s.precision) + " | " + pct(s.recall) +
           " | " + pct(s.f1) + " | " + std::string(kNone) + " | " + std::string(kNone) +
           " |\n";
  };
  auto asc_row = [&](std::string_view name, const AscSummary& s) {
    out += "| " + std::string(name) + " | " + std::string(kNone) + " | " +
           std::string(kNone) + " | " + pct(s.micro_f1) + " | " + pct(s.accuracy) +
           " | " + pct(s.macro_f1) + " |\n";
  };
  prf_row("ATE", r.ate);
  asc_row("ASC (pipelined)", r.asc_pipelined);
  if (r.asc_given_gold) asc_row("ASC (gold aspects)", *r.asc_given_gold);
  prf_row("Joint", r.joint);
  out += "\nSentences with pair errors: " + std::to_string(r.errors.size()) + "\n";
  return out;
}

ordered_json comparison_json(const ComparisonResult& c) {
  ordered_json j;
  j["dataset"] = c.dataset;
  j["tolerance"] = c.tolerance;
  ordered_json entries = ordered_json::array();
  for (const ComparisonEntry& e : c.entries) {
    entries.push_back({{"model", e.model},
                       {"dataset", e.dataset},
                       {"task", e.task},
                       {"baseline", e.baseline},
                       {"measured", e.measured},
                       {"delta", e.delta},
                       {"verdict", std::string(to_string(e.verdict))},
                       {"provenance", e.provenance}});
  }
  j["entries"] = std::move(entries);
  return j;
}

std::string comparison_csv(const ComparisonResult& c) {
  std::string out = "dataset,task,metric,value\n";
  for (const ComparisonEntry& e : c.entries) {
    out += csv_field(e.dataset) + "," + e.task + ",delta," + fixed2(e.delta) + "\n";
  }
  return out;
}

std::string comparison_markdown(const ComparisonResult& c) {
  std::string out = "## Comparison with published results: " + md_cell(c.dataset) +
                    " (tolerance " + fixed2(c.tolerance) + " F1 points)\n\n";
  out += "| Model | Dataset | Task | Published | Measured | Delta | Verdict |\n";
  out += "|---|---|---|---|---|---|---|\n";
  for (const ComparisonEntry& e : c.entries) {
    std::string delta = fixed2(e.delta);
    if (e.delta >= 0) delta = "+" + delta;
    out += "| " + md_cell(e.model) + " | " + md_cell(e.dataset) + " | " + e.task + " | " +
           fixed2(e.baseline) + " | " + fixed2(e.measured) + " | " + delta + " | " +
           std::string(to_string(e.verdict)) + " |\n";
  }
  return out;
}

}  // namespace

std::string utc_timestamp_now() {
  std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ReportDocument build_report(ReportManifest manifest, const PrfScore& ate,
                            const AscSummary& asc_pipelined,
                            std::optional<AscSummary> asc_given_gold,
                            const PrfScore& joint,
                            std::vector<SentenceErrors> errors) {
  std::stable_sort(errors.begin(), errors.end(), [](const auto& a, const auto& b) {
    return a.sentence_id < b.sentence_id;
  });
  return ReportDocument{std::move(manifest), ate,   asc_pipelined,
                        std::move(asc_given_gold), joint, std::move(errors)};
}

ReportDocument evaluate(const Corpus& corpus, std::span<const PipelineOutput> outputs,
                        ReportManifest manifest,
                        std::optional<AscSummary> asc_given_gold) {
  const ScoreConfig& cfg = manifest.score;
  PrfScore ate = score_ate(corpus, outputs, cfg);
  PrfScore joint = score_joint(corpus, outputs, cfg);
  AscSummary asc = score_asc_pipelined(corpus, outputs, cfg);
  auto errors = pair_errors(corpus, outputs, cfg);
  return build_report(std::move(manifest), ate, asc, std::move(asc_given_gold), joint,
                      std::move(errors));
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::kWithin:
      return "within";
    case Verdict::kBelow:
      return "below";
    case Verdict::kAbove:
      return "above";
  }
  return "within";
}

bool ComparisonResult::any_below() const {
  return std::any_of(entries.begin(), entries.end(),
                     [](const ComparisonEntry& e) { return e.verdict == Verdict::kBelow; });
}

ComparisonResult compare_to_baseline(const ReportDocument& report,
                                     std::string_view dataset,
                                     const PublishedBaselines& baselines, double tolerance,
                                     const ComparisonTargets& targets) {
  if (!(tolerance >= 0.0)) {
    throw std::invalid_argument("tolerance must be non-negative");
  }
  if (!baselines.has_dataset(dataset)) {
    throw UnknownDataset("no published baselines for dataset '" + std::string(dataset) +
                         "'");
  }
  ComparisonResult result;
  result.dataset = std::string(dataset);
  result.tolerance = tolerance;

  struct Measurement {
    std::string_view task;
    const std::string& model;
    std::optional<double> fraction;
  };
  const Measurement measurements[] = {
      {task::kAte, targets.pipeline_model, report.ate.f1},
      {task::kAsc, targets.pipeline_model, report.asc_pipelined.accuracy},
      {task::kJoint, targets.pipeline_model, report.joint.f1},
      {task::kAscGivenGold, targets.asc_given_gold_model,
       report.asc_given_gold ? std::optional<double>(report.asc_given_gold->accuracy)
                             : std::nullopt},
  };
  for (const Measurement& m : measurements) {
    if (!m.fraction) continue;
    for (const Baseline& b : baselines.entries()) {
      if (b.dataset != dataset || b.task != m.task || b.model != m.model) continue;
      ComparisonEntry e;
      e.model = b.model;
      e.dataset = b.dataset;
      e.task = b.task;
      e.baseline = b.f1;
      e.measured = round2(*m.fraction * 100.0);
      e.delta = round2(e.measured - e.baseline);
      constexpr double kSlack = 1e-9;
      if (e.delta < -tolerance - kSlack) {
        e.verdict = Verdict::kBelow;
      } else if (e.delta > tolerance + kSlack) {
        e.verdict = Verdict::kAbove;
      } else {
        e.verdict = Verdict::kWithin;
      }
      e.provenance = b.provenance;
      result.entries.push_back(std::move(e));
    }
  }
  return result;
}

std::string_view to_string(Format f) {
  switch (f) {
    case Format::kJson:
      return "json";
    case Format::kCsv:
      return "csv";
    case Format::kMarkdown:
      return "markdown";
  }
  return "json";
}

std::optional<Format> parse_format(std::string_view s) {
  for (Format f : {Format::kJson, Format::kCsv, Format::kMarkdown}) {
    if (to_string(f) == s) return f;
  }
  return std::nullopt;
}

std::string_view file_extension(Format f) {
  switch (f) {
    case Format::kJson:
      return "json";
    case Format::kCsv:
      return "csv";
    case Format::kMarkdown:
      return "md";
  }
  return "txt";
}

std::string emit(const ReportDocument& report, Format format) {
  switch (format) {
    case Format::kJson:
      return report_json(report).dump(2) + "\n";
    case Format::kCsv:
      return report_csv(report);
    case Format::kMarkdown:
      return report_markdown(report);
  }
  return {};
}

std::string emit(const ComparisonResult& comparison, Format format) {
  switch (format) {
    case Format::kJson:
      return comparison_json(comparison).dump(2) + "\n";
    case Format::kCsv:
      return comparison_csv(comparison);
    case Format::kMarkdown:
      return comparison_markdown(comparison);
  }
  return {};
}

std::string emit_manifest(const RunManifest& manifest) {
  ordered_json j = to_json(manifest.report);
  j["timestamp"] = manifest.timestamp;
  j["parallelism"] = manifest.parallelism;
  return j.dump(2) + "\n";
}

std::string emit_series_csv(const ComparisonResult& comparison,
                            const PublishedBaselines& baselines) {
  std::string out = "dataset,task,metric,value\n";
  for (const Baseline& b : baselines.entries()) {
    if (b.dataset != comparison.dataset) continue;
    out += csv_field(b.dataset) + "," + b.task + "," + csv_field(b.model) + "," +
           fixed2(b.f1) + "\n";
  }
  for (const ComparisonEntry& e : comparison.entries) {
    out += csv_field(e.dataset) + "," + e.task + ",measured," + fixed2(e.measured) + "\n";
  }
  return out;
}

ReportDocument parse_report_json(std::string_view json_text) {
  ordered_json j = ordered_json::parse(json_text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw std::invalid_argument("report is not a JSON object");
  }
  try {
    ReportDocument r;
    r.manifest = manifest_from_json(j.at("manifest"));
    r.ate = prf(counts_from_json(j.at("ate")));
    r.asc_pipelined = asc_from_json(j.at("asc").at("pipelined"));
    if (!j.at("asc").at("given_gold").is_null()) {
      r.asc_given_gold = asc_from_json(j.at("asc").at("given_gold"));
    }
    r.joint = prf(counts_from_json(j.at("joint")));
    for (const auto& e : j.at("errors")) {
      r.errors.push_back({e.at("id").get<std::string>(), pairs_from_json(e.at("missing")),
                          pairs_from_json(e.at("spurious"))});
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed report: ") + e.what());
  }
}

RunManifest parse_manifest_json(std::string_view json_text) {
  ordered_json j = ordered_json::parse(json_text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw std::invalid_argument("manifest is not a JSON object");
  }
  try {
    RunManifest m;
    m.report = manifest_from_json(j);
    m.timestamp = j.at("timestamp").get<std::string>();
    m.parallelism = j.at("parallelism").get<std::size_t>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed manifest: ") + e.what());
  }
}

}  // namespace absa
