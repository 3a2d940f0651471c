#include "absa/replay.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "absa/errors.hpp"
#include "absa/normalize.hpp"
#include "absa/sha256.hpp"

namespace absa {
namespace {

using ordered_json = nlohmann::ordered_json;

[[noreturn]] void corrupt(const std::string& source, std::size_t line,
                          const std::string& what) {
  throw FixtureCorrupt((source.empty() ? std::string("fixture") : source) + ":" +
                       std::to_string(line) + ": " + what);
}

std::string excerpt(std::string_view s) {
  return std::string(s.substr(0, 48)) + (s.size() > 48 ? "..." : "");
}

class RecordingAte : public AteBackend {
 public:
  RecordingAte(AteBackend& inner, std::shared_ptr<FixtureWriter> writer)
      : inner_(inner), writer_(std::move(writer)) {}
  std::string id() const override { return inner_.id(); }
  bool single_flight() const override { return inner_.single_flight(); }
  CandidateAspects extract(std::string_view text) override {
    CandidateAspects out = inner_.extract(text);
    writer_->record_ate(text, out);
    return out;
  }

 private:
  AteBackend& inner_;
  std::shared_ptr<FixtureWriter> writer_;
};

class RecordingAsc : public AscBackend {
 public:
  RecordingAsc(AscBackend& inner, std::shared_ptr<FixtureWriter> writer)
      : inner_(inner), writer_(std::move(writer)) {}
  std::string id() const override { return inner_.id(); }
  bool single_flight() const override { return inner_.single_flight(); }
  AscResult classify(std::string_view text, std::string_view term) override {
    AscResult out = inner_.classify(text, term);
    writer_->record_asc(text, term, out);
    return out;
  }

 private:
  AscBackend& inner_;
  std::shared_ptr<FixtureWriter> writer_;
};

}  // namespace

std::string ate_fixture_key(std::string_view text) { return sha256_hex(text); }

std::string asc_fixture_key(std::string_view text, std::string_view term) {
  std::string material(text);
  material += '\0';
  material += normalize_term(term);
  return sha256_hex(material);
}

std::string ate_fixture_record(std::string_view text, const CandidateAspects& out) {
  ordered_json j;
  j["kind"] = "ate";
  j["key"] = ate_fixture_key(text);
  j["text"] = std::string(text);
  j["terms"] = out.terms;
  return j.dump();
}

std::string asc_fixture_record(std::string_view text, std::string_view term,
                               const AscResult& out) {
  ordered_json j;
  j["kind"] = "asc";
  j["key"] = asc_fixture_key(text, term);
  j["term"] = std::string(term);
  j["polarity"] = std::string(to_string(out.polarity));
  if (out.scores) {
    j["scores"] = {{"positive", out.scores->positive},
                   {"negative", out.scores->negative},
                   {"neutral", out.scores->neutral}};
  }
  return j.dump();
}

std::string incomplete_fixture_record(std::size_t completed, std::string_view reason) {
  ordered_json j;
  j["kind"] = "incomplete";
  j["completed"] = completed;
  j["reason"] = std::string(reason);
  return j.dump();
}

ReplayStore ReplayStore::parse(std::string_view bytes, std::string source) {
  ReplayStore store;
  store.source_ = std::move(source);
  store.content_hash_ = sha256_hex(bytes);

  std::size_t line_no = 0;
  while (!bytes.empty()) {
    ++line_no;
    std::size_t nl = bytes.find('\n');
    std::string_view line = bytes.substr(0, nl);
    bytes = nl == std::string_view::npos ? std::string_view{} : bytes.substr(nl + 1);
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;

    ordered_json j = ordered_json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) corrupt(store.source_, line_no, "not a JSON object");
    try {
      const std::string kind = j.at("kind").get<std::string>();
      if (kind == "incomplete") {
        store.incomplete_ = true;
        continue;
      }
      const std::string key = j.at("key").get<std::string>();
      if (kind == "ate") {
        const std::string text = j.at("text").get<std::string>();
        if (ate_fixture_key(text) != key) {
          corrupt(store.source_, line_no, "key does not match text hash");
        }
        CandidateAspects terms{j.at("terms").get<std::vector<std::string>>()};
        if (!store.ate_.emplace(key, std::move(terms)).second) {
          throw DuplicateKey("duplicate ate fixture key " + key + " at line " +
                             std::to_string(line_no));
        }
      } else if (kind == "asc") {
        AscResult r;
        auto polarity = parse_polarity(j.at("polarity").get<std::string>());
        if (!polarity || *polarity == Polarity::kConflict) {
          corrupt(store.source_, line_no, "bad polarity");
        }
        r.polarity = *polarity;
        if (j.contains("scores")) {
          const auto& s = j.at("scores");
          r.scores = PolarityScores{s.at("positive").get<double>(),
                                    s.at("negative").get<double>(),
                                    s.at("neutral").get<double>()};
        }
        if (!store.asc_.emplace(key, r).second) {
          throw DuplicateKey("duplicate asc fixture key " + key + " at line " +
                             std::to_string(line_no));
        }
      } else {
        corrupt(store.source_, line_no, "unknown kind '" + kind + "'");
      }
    } catch (const nlohmann::json::exception& e) {
      corrupt(store.source_, line_no, e.what());
    }
  }
  return store;
}

ReplayStore ReplayStore::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read fixture file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), path.string());
}

const CandidateAspects& ReplayStore::ate(std::string_view text) const {
  std::string key = ate_fixture_key(text);
  auto it = ate_.find(key);
  if (it == ate_.end()) {
    throw MissingFixture(key, "no ate record for text '" + excerpt(text) + "'");
  }
  return it->second;
}

const AscResult& ReplayStore::asc(std::string_view text, std::string_view term) const {
  std::string key = asc_fixture_key(text, term);
  auto it = asc_.find(key);
  if (it == asc_.end()) {
    throw MissingFixture(key, "no asc record for term '" + std::string(term) +
                                  "' in text '" + excerpt(text) + "'");
  }
  return it->second;
}

ReplayAte::ReplayAte(std::shared_ptr<const ReplayStore> store)
    : store_(std::move(store)), id_("replay:" + store_->content_hash().substr(0, 12)) {}

ReplayAsc::ReplayAsc(std::shared_ptr<const ReplayStore> store)
    : store_(std::move(store)), id_("replay:" + store_->content_hash().substr(0, 12)) {}

FixtureWriter::FixtureWriter(std::filesystem::path path) : path_(std::move(path)) {
  if (std::ifstream existing(path_); existing) {
    std::string line;
    while (std::getline(existing, line)) {
      auto j = nlohmann::json::parse(line, nullptr, false);
      if (j.is_object() && j.contains("key") && j["key"].is_string()) {
        keys_.insert(j["key"].get<std::string>());
      }
    }
  }
  std::ofstream out(path_, std::ios::app | std::ios::binary);
  if (!out) throw IoError("cannot open fixture file " + path_.string());
}

void FixtureWriter::append(const std::string& key, const std::string& line) {
  std::lock_guard lock(mu_);
  if (!key.empty() && !keys_.insert(key).second) return;
  std::ofstream out(path_, std::ios::app | std::ios::binary);
  out << line << '\n';
  out.flush();
  if (!out) throw IoError("write to fixture file " + path_.string() + " failed");
  ++written_;
}

void FixtureWriter::record_ate(std::string_view text, const CandidateAspects& out) {
  append(ate_fixture_key(text), ate_fixture_record(text, out));
}

void FixtureWriter::record_asc(std::string_view text, std::string_view term,
                               const AscResult& out) {
  append(asc_fixture_key(text, term), asc_fixture_record(text, term, out));
}

void FixtureWriter::mark_incomplete(std::size_t completed, std::string_view reason) {
  append({}, incomplete_fixture_record(completed, reason));
}

std::size_t FixtureWriter::records_written() const {
  std::lock_guard lock(mu_);
  return written_;
}

std::unique_ptr<AteBackend> record_wrap(AteBackend& inner,
                                        std::shared_ptr<FixtureWriter> writer) {
  return std::make_unique<RecordingAte>(inner, std::move(writer));
}

std::unique_ptr<AscBackend> record_wrap(AscBackend& inner,
                                        std::shared_ptr<FixtureWriter> writer) {
  return std::make_unique<RecordingAsc>(inner, std::move(writer));
}

}  // namespace absa
