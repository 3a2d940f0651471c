#include "absa/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <unordered_set>

#include "absa/errors.hpp"
#include "absa/utf8.hpp"

namespace absa {
namespace {

using Clock = std::chrono::steady_clock;

std::chrono::microseconds since(Clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() -
                                                               start);
}

class SerializedAte : public AteBackend {
 public:
  explicit SerializedAte(AteBackend& inner) : inner_(inner) {}
  std::string id() const override { return inner_.id(); }
  CandidateAspects extract(std::string_view text) override {
    std::lock_guard lock(mu_);
    return inner_.extract(text);
  }

 private:
  AteBackend& inner_;
  std::mutex mu_;
};

class SerializedAsc : public AscBackend {
 public:
  explicit SerializedAsc(AscBackend& inner) : inner_(inner) {}
  std::string id() const override { return inner_.id(); }
  AscResult classify(std::string_view text, std::string_view term) override {
    std::lock_guard lock(mu_);
    return inner_.classify(text, term);
  }

 private:
  AscBackend& inner_;
  std::mutex mu_;
};

}  // namespace

NormConfig FilterConfig::norm() const {
  NormConfig n;
  n.lowercase = lowercase;
  n.strip_chars = strip_chars;
  n.collapse_whitespace = true;
  n.strip_articles = false;
  return n;
}

void FilterConfig::check() const {
  if (max_terms && *max_terms == 0) {
    throw std::invalid_argument("max_terms must be at least 1");
  }
}

CandidateAspects extract_aspects(AteBackend& ate, std::string_view text) {
  return ate.extract(text);
}

std::vector<PredictedAspect> filter_aspects(const CandidateAspects& candidates,
                                            const FilterConfig& cfg,
                                            std::string_view text) {
  cfg.check();
  const NormConfig norm = cfg.norm();
  const std::string normalized_text = normalize_term(text, norm);
  const std::string search_text =
      cfg.lowercase ? text::ascii_lower(text) : std::string(text);

  auto strippable = [&](char c) {
    return text::is_space(c) || cfg.strip_chars.find(c) != std::string::npos;
  };

  std::vector<PredictedAspect> out;
  std::unordered_set<std::string> seen;
  for (const std::string& raw : candidates.terms) {
    if (cfg.max_terms && out.size() >= *cfg.max_terms) break;

    std::string_view trimmed = raw;
    while (!trimmed.empty() && strippable(trimmed.front())) trimmed.remove_prefix(1);
    while (!trimmed.empty() && strippable(trimmed.back())) trimmed.remove_suffix(1);
    if (trimmed.empty()) continue;

    std::string normalized = normalize_term(trimmed, norm);
    if (normalized.empty()) continue;
    if (cfg.dedupe && seen.contains(normalized)) continue;
    if (cfg.require_substring &&
        normalized_text.find(normalized) == std::string::npos) {
      continue;
    }

    PredictedAspect aspect;
    aspect.term = std::string(trimmed);
    const std::string needle =
        cfg.lowercase ? text::ascii_lower(trimmed) : std::string(trimmed);
    if (std::size_t at = search_text.find(needle); at != std::string::npos) {
      std::size_t from = utf8::char_index(text, at);
      std::size_t to = from + utf8::length(needle);
      aspect.span = Span{from, to};
      // Keep the sentence's own spelling so the span slice equals the term.
      aspect.term = std::string(text.substr(at, needle.size()));
    }
    aspect.normalized = std::move(normalized);
    seen.insert(aspect.normalized);
    out.push_back(std::move(aspect));
  }
  return out;
}

LabeledAspect classify_aspect(AscBackend& asc, std::string_view text,
                              const PredictedAspect& aspect) {
  if (aspect.term.empty()) {
    throw std::invalid_argument("classify_aspect: empty aspect term");
  }
  AscResult result = asc.classify(text, aspect.term);
  if (result.polarity == Polarity::kConflict) {
    throw ProtocolError("ASC backend '" + asc.id() +
                        "' returned 'conflict' for term '" + aspect.term + "'");
  }
  if (result.scores && !scores_consistent(*result.scores, result.polarity)) {
    throw ProtocolError("ASC backend '" + asc.id() +
                        "' returned scores inconsistent with label for term '" +
                        aspect.term + "'");
  }
  return LabeledAspect{aspect, result.polarity, result.scores};
}

PipelineOutput run_pipeline(AteBackend& ate, AscBackend& asc,
                            const Sentence& sentence,
                            const FilterConfig& filter_cfg) {
  PipelineOutput out;
  out.sentence_id = sentence.id;
  out.ate_backend_id = ate.id();
  out.asc_backend_id = asc.id();

  auto start = Clock::now();
  CandidateAspects candidates;
  try {
    candidates = extract_aspects(ate, sentence.text);
  } catch (const BackendUnavailable& e) {
    throw BackendUnavailable(e.what(), sentence.id, "ate");
  }
  out.timing.extract = since(start);

  start = Clock::now();
  std::vector<PredictedAspect> aspects =
      filter_aspects(candidates, filter_cfg, sentence.text);
  out.timing.filter = since(start);

  start = Clock::now();
  out.labeled.reserve(aspects.size());
  for (const PredictedAspect& aspect : aspects) {
    try {
      out.labeled.push_back(classify_aspect(asc, sentence.text, aspect));
    } catch (const BackendUnavailable& e) {
      throw BackendUnavailable(e.what(), sentence.id, "asc");
    }
  }
  out.timing.classify = since(start);
  return out;
}

std::vector<PipelineOutput> run_corpus(AteBackend& ate, AscBackend& asc,
                                       const Corpus& corpus,
                                       const FilterConfig& filter_cfg,
                                       std::size_t parallelism) {
  if (parallelism == 0) {
    throw std::invalid_argument("run_corpus: parallelism must be at least 1");
  }
  filter_cfg.check();
  const std::size_t n = corpus.sentences.size();
  std::vector<PipelineOutput> outputs(n);
  if (n == 0) return outputs;

  std::optional<SerializedAte> serialized_ate;
  std::optional<SerializedAsc> serialized_asc;
  AteBackend* ate_ptr = &ate;
  AscBackend* asc_ptr = &asc;
  if (parallelism > 1 && ate.single_flight()) ate_ptr = &serialized_ate.emplace(ate);
  if (parallelism > 1 && asc.single_flight()) asc_ptr = &serialized_asc.emplace(asc);

  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> completed{0};
  std::atomic<bool> stop{false};
  std::mutex error_mu;
  std::size_t error_index = n;
  std::exception_ptr error;

  auto worker = [&] {
    while (!stop.load()) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        outputs[i] = run_pipeline(*ate_ptr, *asc_ptr, corpus.sentences[i], filter_cfg);
        completed.fetch_add(1);
      } catch (...) {
        std::lock_guard lock(error_mu);
        // Report the earliest failing sentence so errors are reproducible.
        if (i < error_index) {
          error_index = i;
          error = std::current_exception();
        }
        stop.store(true);
      }
    }
  };

  const std::size_t workers = std::min(parallelism, n);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> threads;
    threads.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t) threads.emplace_back(worker);
  }

  if (error) {
    try {
      std::rethrow_exception(error);
    } catch (const BackendUnavailable& e) {
      throw BackendUnavailable(e.what(), e.sentence_id(), e.stage(),
                               completed.load());
    }
  }
  return outputs;
}

}  // namespace absa
