#ifndef ABSA_REPORT_HPP_
#define ABSA_REPORT_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absa/corpus.hpp"
#include "absa/metrics.hpp"
#include "absa/pipeline.hpp"

namespace absa {

inline constexpr std::string_view kToolVersion = "absa-harness 0.1.0";

// Task names used in reports and baselines.
namespace task {
inline constexpr std::string_view kAte = "ate";
inline constexpr std::string_view kAsc = "asc";  // ASC behind the ATE stage
inline constexpr std::string_view kAscGivenGold = "asc_given_gold";
inline constexpr std::string_view kJoint = "joint";
}  // namespace task

struct Baseline {
  std::string model;
  std::string dataset;  // Res-14, Lap-14, Res-15, Res-16
  std::string task;
  double f1 = 0.0;      // percent
  std::string provenance;
};

// Published F1 values (percent) shipped read-only with the tool.
class PublishedBaselines {
 public:
  static const PublishedBaselines& shipped();

  std::span<const Baseline> entries() const { return entries_; }
  std::optional<double> find(std::string_view model, std::string_view dataset,
                             std::string_view task) const;
  bool has_dataset(std::string_view dataset) const;
  // SHA-256 over a canonical rendering of every entry.
  std::string checksum() const;

  explicit PublishedBaselines(std::vector<Baseline> entries) : entries_(std::move(entries)) {}

 private:
  std::vector<Baseline> entries_;
};

// The run settings that determine report contents.
struct ReportManifest {
  std::string corpus_name;
  std::string corpus_sha256;
  std::string dataset;  // may be empty
  std::string ate_backend;
  std::string asc_backend;
  std::string service_version = "n/a";
  FilterConfig filter;
  ScoreConfig score;
  ConflictPolicy conflict = ConflictPolicy::kDrop;
  std::string tool_version{kToolVersion};
  bool operator==(const ReportManifest&) const = default;
};

// ReportManifest plus the fields that vary between otherwise identical runs.
// Written next to the report, not inside it.
struct RunManifest {
  ReportManifest report;
  std::string timestamp;  // UTC, ISO-8601
  std::size_t parallelism = 1;
  bool operator==(const RunManifest&) const = default;
};

std::string utc_timestamp_now();

struct ReportDocument {
  ReportManifest manifest;
  PrfScore ate;
  AscSummary asc_pipelined;
  std::optional<AscSummary> asc_given_gold;
  PrfScore joint;
  std::vector<SentenceErrors> errors;  // sorted by sentence id
  bool operator==(const ReportDocument&) const = default;
};

ReportDocument build_report(ReportManifest manifest, const PrfScore& ate,
                            const AscSummary& asc_pipelined,
                            std::optional<AscSummary> asc_given_gold,
                            const PrfScore& joint,
                            std::vector<SentenceErrors> errors);

// Scores `outputs` against `corpus` and assembles the report.
ReportDocument evaluate(const Corpus& corpus, std::span<const PipelineOutput> outputs,
                        ReportManifest manifest,
                        std::optional<AscSummary> asc_given_gold = std::nullopt);

enum class Verdict { kWithin, kBelow, kAbove };
std::string_view to_string(Verdict v);

struct ComparisonEntry {
  std::string model;
  std::string dataset;
  std::string task;
  double baseline = 0.0;
  double measured = 0.0;  // percent, two decimals as reported
  double delta = 0.0;     // measured - baseline, F1 points
  Verdict verdict = Verdict::kWithin;
  std::string provenance;
  bool operator==(const ComparisonEntry&) const = default;
};

struct ComparisonResult {
  std::string dataset;
  double tolerance = 0.0;
  std::vector<ComparisonEntry> entries;

  bool any_below() const;
  bool operator==(const ComparisonResult&) const = default;
};

// Which published model each task is compared against.
struct ComparisonTargets {
  std::string pipeline_model = "Instruct-DeBERTa";
  std::string asc_given_gold_model = "DeBERTa-V3-base-absa-v1";
};

// Default tolerance for live-model comparisons, in F1 points.
inline constexpr double kDefaultTolerance = 1.5;

// One entry per target baseline of `dataset` for which the report has a
// measurement. |delta| <= tolerance is within. Throws UnknownDataset when the
// dataset has no baselines, std::invalid_argument on negative tolerance.
ComparisonResult compare_to_baseline(const ReportDocument& report,
                                     std::string_view dataset,
                                     const PublishedBaselines& baselines,
                                     double tolerance,
                                     const ComparisonTargets& targets = {});

enum class Format { kJson, kCsv, kMarkdown };
std::string_view to_string(Format f);
std::optional<Format> parse_format(std::string_view s);
std::string_view file_extension(Format f);

// Deterministic renderings; percentages carry two decimals.
std::string emit(const ReportDocument& report, Format format);
std::string emit(const ComparisonResult& comparison, Format format);
std::string emit_manifest(const RunManifest& manifest);

// Per-model F1 series for one dataset (every baseline plus the measured
// values), csv with header dataset,task,metric,value.
std::string emit_series_csv(const ComparisonResult& comparison,
                            const PublishedBaselines& baselines);

// Inverse of emit(report, kJson). Scores are rebuilt from the stored counts.
// Throws std::invalid_argument on a malformed document.
ReportDocument parse_report_json(std::string_view json_text);
RunManifest parse_manifest_json(std::string_view json_text);

}  // namespace absa

#endif  // ABSA_REPORT_HPP_
