#include "absa/prediction_dump.hpp"

#include <json.hpp>

#include "absa/errors.hpp"

namespace absa {
namespace {

using ordered_json = nlohmann::ordered_json;

[[noreturn]] void corrupt(std::size_t line, const std::string& what) {
  throw DumpCorrupt("prediction dump line " + std::to_string(line) + ": " + what);
}

PolarityScores read_scores(const ordered_json& j, std::size_t line) {
  if (!j.is_object()) corrupt(line, "'scores' is not an object");
  PolarityScores s;
  try {
    s.positive = j.at("positive").get<double>();
    s.negative = j.at("negative").get<double>();
    s.neutral = j.at("neutral").get<double>();
  } catch (const nlohmann::json::exception& e) {
    corrupt(line, std::string("bad 'scores': ") + e.what());
  }
  return s;
}

}  // namespace

std::string write_prediction_dump(std::span<const PipelineOutput> outputs) {
  std::string out;
  for (const PipelineOutput& o : outputs) {
    ordered_json record;
    record["id"] = o.sentence_id;
    record["aspects"] = ordered_json::array();
    for (const LabeledAspect& a : o.labeled) {
      ordered_json item;
      item["term"] = a.aspect.term;
      item["polarity"] = std::string(to_string(a.polarity));
      if (a.aspect.span) {
        item["span"] = {a.aspect.span->from, a.aspect.span->to};
      }
      if (a.scores) {
        item["scores"] = {{"positive", a.scores->positive},
                          {"negative", a.scores->negative},
                          {"neutral", a.scores->neutral}};
      }
      record["aspects"].push_back(std::move(item));
    }
    out += record.dump();
    out += '\n';
  }
  return out;
}

std::vector<PipelineOutput> read_prediction_dump(std::string_view bytes,
                                                 const NormConfig& norm) {
  std::vector<PipelineOutput> outputs;
  std::size_t line_no = 0;
  while (!bytes.empty()) {
    ++line_no;
    std::size_t nl = bytes.find('\n');
    std::string_view line = bytes.substr(0, nl);
    bytes = nl == std::string_view::npos ? std::string_view{} : bytes.substr(nl + 1);
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;

    ordered_json record = ordered_json::parse(line, nullptr, false);
    if (record.is_discarded() || !record.is_object()) corrupt(line_no, "not a JSON object");
    if (!record.contains("id") || !record["id"].is_string()) corrupt(line_no, "missing string 'id'");
    if (!record.contains("aspects") || !record["aspects"].is_array()) {
      corrupt(line_no, "missing array 'aspects'");
    }

    PipelineOutput o;
    o.sentence_id = record["id"].get<std::string>();
    for (const ordered_json& item : record["aspects"]) {
      if (!item.is_object() || !item.contains("term") || !item["term"].is_string() ||
          !item.contains("polarity") || !item["polarity"].is_string()) {
        corrupt(line_no, "aspect needs string 'term' and 'polarity'");
      }
      LabeledAspect a;
      a.aspect.term = item["term"].get<std::string>();
      if (a.aspect.term.empty()) corrupt(line_no, "empty term");
      a.aspect.normalized = normalize_term(a.aspect.term, norm);
      auto polarity = parse_polarity(item["polarity"].get<std::string>());
      if (!polarity || *polarity == Polarity::kConflict) {
        corrupt(line_no, "polarity must be positive, negative or neutral");
      }
      a.polarity = *polarity;
      if (item.contains("span")) {
        const ordered_json& span = item["span"];
        if (!span.is_array() || span.size() != 2 || !span[0].is_number_unsigned() ||
            !span[1].is_number_unsigned()) {
          corrupt(line_no, "'span' must be [from, to]");
        }
        a.aspect.span = Span{span[0].get<std::size_t>(), span[1].get<std::size_t>()};
      }
      if (item.contains("scores")) a.scores = read_scores(item["scores"], line_no);
      o.labeled.push_back(std::move(a));
    }
    outputs.push_back(std::move(o));
  }
  return outputs;
}

}  // namespace absa
