#include "absa/metrics.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include "absa/errors.hpp"

namespace absa {
namespace {

MatchCounts multiset_match(const std::vector<std::string>& gold,
                           const std::vector<std::string>& pred) {
  std::map<std::string_view, std::size_t> gold_counts;
  for (const std::string& k : gold) ++gold_counts[k];
  MatchCounts c;
  for (const std::string& k : pred) {
    auto it = gold_counts.find(k);
    if (it != gold_counts.end() && it->second > 0) {
      --it->second;
      ++c.tp;
    }
  }
  c.fp = pred.size() - c.tp;
  c.fn = gold.size() - c.tp;
  return c;
}

std::string pair_key(std::string term_key, Polarity p) {
  term_key += '\0';
  term_key += to_string(p);
  return term_key;
}

std::vector<std::string> keys_of(std::span<const std::string> terms,
                                 const NormConfig& cfg) {
  std::vector<std::string> out;
  out.reserve(terms.size());
  for (const std::string& t : terms) out.push_back(normalize_term(t, cfg));
  return out;
}

std::vector<std::string> keys_of(std::span<const TermPolarity> pairs,
                                 const NormConfig& cfg) {
  std::vector<std::string> out;
  out.reserve(pairs.size());
  for (const TermPolarity& p : pairs) {
    out.push_back(pair_key(normalize_term(p.term, cfg), p.polarity));
  }
  return out;
}

class ExhaustiveMatcher {
 public:
  ExhaustiveMatcher(const std::vector<std::string>& gold,
                    const std::vector<std::string>& pred)
      : gold_(gold), pred_(pred), used_(pred.size(), false) {}

  std::size_t best() {
    search(0, 0);
    return best_;
  }

 private:
  // Each gold item is either left unmatched or assigned to an unused pred
  // item with an equal key. Branches that cannot beat the best found so far
  // are cut.
  void search(std::size_t i, std::size_t matched) {
    if (matched + (gold_.size() - i) <= best_ && i < gold_.size()) return;
    if (i == gold_.size()) {
      best_ = std::max(best_, matched);
      return;
    }
    for (std::size_t j = 0; j < pred_.size(); ++j) {
      if (used_[j] || pred_[j] != gold_[i]) continue;
      used_[j] = true;
      search(i + 1, matched + 1);
      used_[j] = false;
    }
    search(i + 1, matched);
  }

  const std::vector<std::string>& gold_;
  const std::vector<std::string>& pred_;
  std::vector<bool> used_;
  std::size_t best_ = 0;
};

MatchCounts oracle_on_keys(const std::vector<std::string>& gold,
                           const std::vector<std::string>& pred) {
  if (gold.size() > kOracleMaxItems || pred.size() > kOracleMaxItems) {
    throw SizeExceeded("brute_force_oracle supports at most " +
                       std::to_string(kOracleMaxItems) + " items per side");
  }
  MatchCounts c;
  c.tp = ExhaustiveMatcher(gold, pred).best();
  c.fp = pred.size() - c.tp;
  c.fn = gold.size() - c.tp;
  return c;
}

// Per-sentence view used by every corpus-level scorer.
struct SentenceView {
  const Sentence* sentence;
  const PipelineOutput* output;
};

std::vector<SentenceView> align(const Corpus& corpus,
                                std::span<const PipelineOutput> outputs) {
  std::unordered_map<std::string_view, const PipelineOutput*> by_id;
  for (const PipelineOutput& o : outputs) {
    if (!by_id.emplace(o.sentence_id, &o).second) {
      throw IdMismatch("sentence id '" + o.sentence_id +
                       "' appears more than once in predictions");
    }
  }
  std::vector<SentenceView> views;
  views.reserve(corpus.sentences.size());
  for (const Sentence& s : corpus.sentences) {
    auto it = by_id.find(s.id);
    if (it == by_id.end()) {
      throw IdMismatch("no prediction for sentence '" + s.id + "'");
    }
    views.push_back({&s, it->second});
    by_id.erase(it);
  }
  if (!by_id.empty()) {
    throw IdMismatch("prediction for unknown sentence '" +
                     std::string(by_id.begin()->first) + "'");
  }
  return views;
}

std::string span_suffix(const std::optional<Span>& span) {
  return "\x1f" + std::to_string(span->from) + ":" + std::to_string(span->to);
}

// Term keys for one sentence, honouring strict offset mode. Aspects without a
// span get a key that cannot collide with anything.
std::vector<std::string> gold_term_keys(const Sentence& s, const ScoreConfig& cfg) {
  std::vector<std::string> keys;
  for (std::size_t i = 0; i < s.gold.size(); ++i) {
    const GoldAspect& a = s.gold[i];
    std::string key = normalize_term(a.term, cfg.norm);
    if (cfg.strict_offsets) {
      key = a.span ? key + span_suffix(a.span) : "\x1eg" + std::to_string(i);
    }
    keys.push_back(std::move(key));
  }
  return keys;
}

std::vector<std::string> pred_term_keys(const PipelineOutput& o,
                                        const ScoreConfig& cfg) {
  std::vector<std::string> keys;
  for (std::size_t i = 0; i < o.labeled.size(); ++i) {
    const PredictedAspect& a = o.labeled[i].aspect;
    std::string key = normalize_term(a.term, cfg.norm);
    if (cfg.strict_offsets) {
      key = a.span ? key + span_suffix(a.span) : "\x1ep" + std::to_string(i);
    }
    keys.push_back(std::move(key));
  }
  return keys;
}

std::vector<std::string> with_polarity(std::vector<std::string> keys,
                                       const auto& items, auto polarity_of) {
  for (std::size_t i = 0; i < keys.size(); ++i) {
    keys[i] = pair_key(std::move(keys[i]), polarity_of(items[i]));
  }
  return keys;
}

std::vector<std::string> gold_pair_keys(const Sentence& s, const ScoreConfig& cfg) {
  return with_polarity(gold_term_keys(s, cfg), s.gold,
                       [](const GoldAspect& a) { return a.polarity; });
}

std::vector<std::string> pred_pair_keys(const PipelineOutput& o,
                                        const ScoreConfig& cfg) {
  return with_polarity(pred_term_keys(o, cfg), o.labeled,
                       [](const LabeledAspect& a) { return a.polarity; });
}

}  // namespace

PrfScore prf(const MatchCounts& counts) {
  PrfScore s;
  s.counts = counts;
  const double tp = static_cast<double>(counts.tp);
  if (counts.tp + counts.fp > 0) {
    s.precision = tp / static_cast<double>(counts.tp + counts.fp);
  }
  if (counts.tp + counts.fn > 0) {
    s.recall = tp / static_cast<double>(counts.tp + counts.fn);
  }
  if (s.precision + s.recall > 0.0) {
    s.f1 = 2.0 * s.precision * s.recall / (s.precision + s.recall);
  }
  return s;
}

MatchCounts match_terms(std::span<const std::string> gold,
                        std::span<const std::string> pred,
                        const NormConfig& cfg) {
  return multiset_match(keys_of(gold, cfg), keys_of(pred, cfg));
}

MatchCounts match_pairs(std::span<const TermPolarity> gold,
                        std::span<const TermPolarity> pred,
                        const NormConfig& cfg) {
  return multiset_match(keys_of(gold, cfg), keys_of(pred, cfg));
}

MatchCounts brute_force_oracle(std::span<const std::string> gold,
                               std::span<const std::string> pred,
                               const NormConfig& cfg) {
  return oracle_on_keys(keys_of(gold, cfg), keys_of(pred, cfg));
}

MatchCounts brute_force_oracle(std::span<const TermPolarity> gold,
                               std::span<const TermPolarity> pred,
                               const NormConfig& cfg) {
  return oracle_on_keys(keys_of(gold, cfg), keys_of(pred, cfg));
}

PrfScore score_ate(const Corpus& corpus, std::span<const PipelineOutput> outputs,
                   const ScoreConfig& cfg) {
  MatchCounts total;
  for (const SentenceView& v : align(corpus, outputs)) {
    total += multiset_match(gold_term_keys(*v.sentence, cfg),
                            pred_term_keys(*v.output, cfg));
  }
  return prf(total);
}

PrfScore score_joint(const Corpus& corpus, std::span<const PipelineOutput> outputs,
                     const ScoreConfig& cfg) {
  MatchCounts total;
  for (const SentenceView& v : align(corpus, outputs)) {
    total += multiset_match(gold_pair_keys(*v.sentence, cfg),
                            pred_pair_keys(*v.output, cfg));
  }
  return prf(total);
}

AscSummary summarize_asc(std::span<const std::pair<Polarity, Polarity>> labels) {
  AscSummary out;
  std::array<MatchCounts, 3> per_class{};
  MatchCounts micro;
  for (const auto& [gold, pred] : labels) {
    ++out.total;
    if (gold == pred) ++out.correct;
    for (Polarity c : kSentimentClasses) {
      MatchCounts& m = per_class[index_of(c)];
      if (pred == c && gold == c) ++m.tp;
      if (pred == c && gold != c) ++m.fp;
      if (gold == c && pred != c) ++m.fn;
    }
  }
  double macro = 0.0;
  for (Polarity c : kSentimentClasses) {
    out.per_class[index_of(c)] = prf(per_class[index_of(c)]);
    micro += per_class[index_of(c)];
    macro += out.per_class[index_of(c)].f1;
  }
  if (out.total > 0) {
    out.accuracy = static_cast<double>(out.correct) / static_cast<double>(out.total);
  }
  out.micro_f1 = prf(micro).f1;
  out.macro_f1 = macro / 3.0;
  return out;
}

AscSummary score_asc_given_gold(const Corpus& corpus, AscBackend& asc,
                                const ScoreConfig&) {
  std::vector<std::pair<Polarity, Polarity>> labels;
  for (const Sentence& s : corpus.sentences) {
    for (const GoldAspect& a : s.gold) {
      if (a.polarity == Polarity::kConflict) {
        throw std::invalid_argument(
            "score_asc_given_gold: sentence '" + s.id +
            "' has a conflict label; apply a conflict policy first");
      }
      AscResult r;
      try {
        r = asc.classify(s.text, a.term);
      } catch (const BackendUnavailable& e) {
        throw BackendUnavailable(e.what(), s.id, "asc-gold");
      }
      if (r.polarity == Polarity::kConflict) {
        throw ProtocolError("ASC backend '" + asc.id() + "' returned 'conflict'");
      }
      labels.emplace_back(a.polarity, r.polarity);
    }
  }
  return summarize_asc(labels);
}

AscSummary score_asc_pipelined(const Corpus& corpus,
                               std::span<const PipelineOutput> outputs,
                               const ScoreConfig& cfg) {
  std::vector<std::pair<Polarity, Polarity>> labels;
  for (const SentenceView& v : align(corpus, outputs)) {
    // Group polarities by term key on both sides.
    std::map<std::string, std::array<std::size_t, 4>> gold_by_term, pred_by_term;
    auto gold_keys = gold_term_keys(*v.sentence, cfg);
    for (std::size_t i = 0; i < gold_keys.size(); ++i) {
      ++gold_by_term[gold_keys[i]][index_of(v.sentence->gold[i].polarity)];
    }
    auto pred_keys = pred_term_keys(*v.output, cfg);
    for (std::size_t i = 0; i < pred_keys.size(); ++i) {
      ++pred_by_term[pred_keys[i]][index_of(v.output->labeled[i].polarity)];
    }

    for (auto& [key, gold] : gold_by_term) {
      auto it = pred_by_term.find(key);
      if (it == pred_by_term.end()) continue;
      std::array<std::size_t, 4>& pred = it->second;
      std::size_t gold_n = 0, pred_n = 0;
      for (std::size_t k = 0; k < 4; ++k) {
        gold_n += gold[k];
        pred_n += pred[k];
      }
      std::size_t pairs = std::min(gold_n, pred_n);
      // Agreeing polarities pair up first; the rest pair in class order.
      for (Polarity p : kAllPolarities) {
        std::size_t same = std::min({gold[index_of(p)], pred[index_of(p)], pairs});
        for (std::size_t k = 0; k < same; ++k) labels.emplace_back(p, p);
        gold[index_of(p)] -= same;
        pred[index_of(p)] -= same;
        pairs -= same;
      }
      std::size_t gi = 0, pi = 0;
      while (pairs > 0) {
        while (gold[gi] == 0) ++gi;
        while (pred[pi] == 0) ++pi;
        labels.emplace_back(kAllPolarities[gi], kAllPolarities[pi]);
        --gold[gi];
        --pred[pi];
        --pairs;
      }
    }
  }
  return summarize_asc(labels);
}

std::vector<SentenceErrors> pair_errors(const Corpus& corpus,
                                        std::span<const PipelineOutput> outputs,
                                        const ScoreConfig& cfg) {
  std::vector<SentenceErrors> out;
  for (const SentenceView& v : align(corpus, outputs)) {
    auto gold_keys = gold_pair_keys(*v.sentence, cfg);
    auto pred_keys = pred_pair_keys(*v.output, cfg);
    std::map<std::string, std::size_t> pred_counts, gold_counts;
    for (const auto& k : pred_keys) ++pred_counts[k];
    for (const auto& k : gold_keys) ++gold_counts[k];

    SentenceErrors e;
    e.sentence_id = v.sentence->id;
    for (std::size_t i = 0; i < gold_keys.size(); ++i) {
      auto& remaining = pred_counts[gold_keys[i]];
      if (remaining > 0) {
        --remaining;
      } else {
        const GoldAspect& a = v.sentence->gold[i];
        e.missing.push_back({a.term, a.polarity});
      }
    }
    for (std::size_t i = 0; i < pred_keys.size(); ++i) {
      auto& remaining = gold_counts[pred_keys[i]];
      if (remaining > 0) {
        --remaining;
      } else {
        const LabeledAspect& a = v.output->labeled[i];
        e.spurious.push_back({a.aspect.term, a.polarity});
      }
    }
    if (!e.missing.empty() || !e.spurious.empty()) out.push_back(std::move(e));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.sentence_id < b.sentence_id;
  });
  return out;
}

}  // namespace absa
