#ifndef ABSA_TESTS_TEST_SUPPORT_HPP_
#define ABSA_TESTS_TEST_SUPPORT_HPP_

#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "absa/backend.hpp"
#include "absa/corpus.hpp"
#include "absa/replay.hpp"

namespace absa::testing {

inline constexpr std::string_view kSampleText =
    "The price was high, but the restaurant was breathtaking";

inline Sentence sample_sentence() {
  return {"s1",
          std::string(kSampleText),
          {{"price", Span{4, 9}, Polarity::kNegative},
           {"restaurant", Span{28, 38}, Polarity::kPositive}}};
}

inline Corpus sample_corpus() {
  Corpus c;
  c.name = "sample";
  c.split = Split::kTest;
  c.sentences.push_back(sample_sentence());
  return c;
}

// Fixture bytes answering the sample sentence the way the published example
// reads: (price, negative), (restaurant, positive).
inline std::string sample_fixture_bytes() {
  std::string out;
  out += ate_fixture_record(kSampleText, {{"price", "restaurant"}}) + "\n";
  out += asc_fixture_record(kSampleText, "price",
                            {Polarity::kNegative, PolarityScores{0.02, 0.95, 0.03}}) +
         "\n";
  out += asc_fixture_record(kSampleText, "restaurant",
                            {Polarity::kPositive, PolarityScores{0.97, 0.01, 0.02}}) +
         "\n";
  return out;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void spit(const std::filesystem::path& p, std::string_view bytes) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("absa-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// Scripted backends for pipeline tests.
class FixedAte : public AteBackend {
 public:
  explicit FixedAte(std::map<std::string, std::vector<std::string>> answers)
      : answers_(std::move(answers)) {}
  std::string id() const override { return "fixed-ate"; }
  CandidateAspects extract(std::string_view text) override {
    ++calls;
    auto it = answers_.find(std::string(text));
    return it == answers_.end() ? CandidateAspects{} : CandidateAspects{it->second};
  }
  std::atomic<int> calls{0};

 private:
  std::map<std::string, std::vector<std::string>> answers_;
};

class ConstantAsc : public AscBackend {
 public:
  explicit ConstantAsc(Polarity p) : p_(p) {}
  std::string id() const override { return "constant-asc"; }
  AscResult classify(std::string_view, std::string_view) override {
    ++calls;
    return {p_, PolarityScores::one_hot(p_)};
  }
  std::atomic<int> calls{0};

 private:
  Polarity p_;
};

}  // namespace absa::testing

#endif  // ABSA_TESTS_TEST_SUPPORT_HPP_
