#ifndef ABSA_REPLAY_HPP_
#define ABSA_REPLAY_HPP_

#include <cstddef>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "absa/backend.hpp"

namespace absa {

// Fixture keys: SHA-256 hex of the UTF-8 text, and of
// text + "\0" + normalize_term(term) for ASC records.
std::string ate_fixture_key(std::string_view text);
std::string asc_fixture_key(std::string_view text, std::string_view term);

// Fixture lines (line-delimited JSON):
//   {"kind":"ate","key":...,"text":...,"terms":[...]}
//   {"kind":"asc","key":...,"term":...,"polarity":...,"scores":{...}}
//   {"kind":"incomplete","completed":n,"reason":...}   (recording aborted)
std::string ate_fixture_record(std::string_view text, const CandidateAspects& out);
std::string asc_fixture_record(std::string_view text, std::string_view term,
                               const AscResult& out);
std::string incomplete_fixture_record(std::size_t completed, std::string_view reason);

// Recorded backend answers. Lookups are total over recorded keys; anything
// else is a MissingFixture error, never a default.
class ReplayStore {
 public:
  // Throws FixtureCorrupt (bad record) or DuplicateKey.
  static ReplayStore parse(std::string_view bytes, std::string source = {});
  // replay_load. Also throws IoError when the file cannot be read.
  static ReplayStore load(const std::filesystem::path& path);

  const CandidateAspects& ate(std::string_view text) const;
  const AscResult& asc(std::string_view text, std::string_view term) const;

  std::size_t size() const { return ate_.size() + asc_.size(); }
  std::size_t ate_records() const { return ate_.size(); }
  std::size_t asc_records() const { return asc_.size(); }
  // The fixture carries an "incomplete" marker from an aborted recording.
  bool incomplete() const { return incomplete_; }
  const std::string& source() const { return source_; }
  // SHA-256 of the fixture bytes.
  const std::string& content_hash() const { return content_hash_; }

 private:
  std::unordered_map<std::string, CandidateAspects> ate_;
  std::unordered_map<std::string, AscResult> asc_;
  bool incomplete_ = false;
  std::string source_;
  std::string content_hash_;
};

class ReplayAte : public AteBackend {
 public:
  explicit ReplayAte(std::shared_ptr<const ReplayStore> store);
  std::string id() const override { return id_; }
  CandidateAspects extract(std::string_view text) override { return store_->ate(text); }

 private:
  std::shared_ptr<const ReplayStore> store_;
  std::string id_;
};

class ReplayAsc : public AscBackend {
 public:
  explicit ReplayAsc(std::shared_ptr<const ReplayStore> store);
  std::string id() const override { return id_; }
  AscResult classify(std::string_view text, std::string_view term) override {
    return store_->asc(text, term);
  }

 private:
  std::shared_ptr<const ReplayStore> store_;
  std::string id_;
};

// Appends fixture records to a file, once per key. Keys already present in
// an existing file are not written again. Writes are serialized.
class FixtureWriter {
 public:
  // Creates the file if needed. Throws IoError.
  explicit FixtureWriter(std::filesystem::path path);

  void record_ate(std::string_view text, const CandidateAspects& out);
  void record_asc(std::string_view text, std::string_view term, const AscResult& out);
  void mark_incomplete(std::size_t completed, std::string_view reason);

  std::size_t records_written() const;
  const std::filesystem::path& path() const { return path_; }

 private:
  void append(const std::string& key, const std::string& line);

  std::filesystem::path path_;
  mutable std::mutex mu_;
  std::unordered_set<std::string> keys_;
  std::size_t written_ = 0;
};

// record_wrap: proxies `inner` and records every call. Outputs and ids are
// the inner backend's.
std::unique_ptr<AteBackend> record_wrap(AteBackend& inner,
                                        std::shared_ptr<FixtureWriter> writer);
std::unique_ptr<AscBackend> record_wrap(AscBackend& inner,
                                        std::shared_ptr<FixtureWriter> writer);

}  // namespace absa

#endif  // ABSA_REPLAY_HPP_
