#include <random>

#include <gtest/gtest.h>

#include "absa/errors.hpp"
#include "absa/metrics.hpp"
#include "test_support.hpp"

namespace absa {
namespace {

using Terms = std::vector<std::string>;
using Pairs = std::vector<TermPolarity>;
constexpr Polarity kPos = Polarity::kPositive;
constexpr Polarity kNeg = Polarity::kNegative;
constexpr Polarity kNeu = Polarity::kNeutral;

TEST(MatchTerms, Examples) {
  EXPECT_EQ(match_terms(Terms{"price", "restaurant"}, Terms{"price", "restaurant"}),
            (MatchCounts{2, 0, 0}));
  EXPECT_EQ(match_terms(Terms{"price", "restaurant"}, Terms{}), (MatchCounts{0, 0, 2}));
  EXPECT_EQ(match_terms(Terms{"a", "b"}, Terms{"a", "c", "d"}), (MatchCounts{1, 2, 1}));
}

TEST(MatchTerms, MultisetAndNormalization) {
  EXPECT_EQ(match_terms(Terms{"Price", "price"}, Terms{"price."}), (MatchCounts{1, 0, 1}));
  EXPECT_EQ(match_terms(Terms{"price"}, Terms{"price", "PRICE"}), (MatchCounts{1, 1, 0}));
}

TEST(MatchPairs, Examples) {
  Pairs gold{{"price", kNeg}, {"restaurant", kPos}};
  EXPECT_EQ(match_pairs(gold, gold), (MatchCounts{2, 0, 0}));
  EXPECT_EQ(match_pairs(gold, Pairs{{"price", kPos}, {"restaurant", kPos}}),
            (MatchCounts{1, 1, 1}));
  EXPECT_EQ(match_pairs(gold, Pairs{}), (MatchCounts{0, 0, 2}));
}

TEST(Prf, HandArithmetic) {
  PrfScore s = prf({1, 2, 1});
  EXPECT_DOUBLE_EQ(s.precision, 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(s.recall, 0.5);
  EXPECT_DOUBLE_EQ(s.f1, 0.4);
  EXPECT_FALSE(s.degenerate());
}

TEST(Prf, Degenerate) {
  PrfScore s = prf({0, 0, 0});
  EXPECT_EQ(s.precision, 0.0);
  EXPECT_EQ(s.recall, 0.0);
  EXPECT_EQ(s.f1, 0.0);
  EXPECT_TRUE(s.degenerate());
}

TEST(Prf, PerfectForAnyN) {
  for (std::size_t n : {1u, 2u, 7u, 1000u}) {
    PrfScore s = prf({n, 0, 0});
    EXPECT_EQ(s.precision, 1.0);
    EXPECT_EQ(s.recall, 1.0);
    EXPECT_EQ(s.f1, 1.0);
  }
}

TEST(BruteForceOracle, Examples) {
  EXPECT_EQ(brute_force_oracle(Terms{"a", "b"}, Terms{"a", "c", "d"}),
            (MatchCounts{1, 2, 1}));
  EXPECT_EQ(brute_force_oracle(Terms{}, Terms{}), (MatchCounts{0, 0, 0}));
  EXPECT_THROW(brute_force_oracle(Terms(kOracleMaxItems + 1, "x"), Terms{}), SizeExceeded);
}

Terms random_terms(std::mt19937& rng, int max_len) {
  static const Terms alphabet = {"a", "b", "c", "d", "e", "f", "g", "h", "i", "j"};
  Terms out(std::uniform_int_distribution<int>(0, max_len)(rng));
  for (auto& t : out) t = alphabet[rng() % alphabet.size()];
  return out;
}

Pairs random_pairs(std::mt19937& rng, int max_len) {
  Pairs out;
  for (auto& t : random_terms(rng, max_len)) out.push_back({t, kSentimentClasses[rng() % 3]});
  return out;
}

TEST(MatchTerms, AgreesWithOracle) {
  std::mt19937 rng(3);
  for (int i = 0; i < 2000; ++i) {
    Terms g = random_terms(rng, 6), p = random_terms(rng, 6);
    ASSERT_EQ(match_terms(g, p), brute_force_oracle(g, p));
    Pairs gp = random_pairs(rng, 6), pp = random_pairs(rng, 6);
    ASSERT_EQ(match_pairs(gp, pp), brute_force_oracle(gp, pp));
  }
}

TEST(MatchTerms, SymmetricAndMonotone) {
  std::mt19937 rng(5);
  for (int i = 0; i < 2000; ++i) {
    Terms g = random_terms(rng, 6), p = random_terms(rng, 6);
    MatchCounts ab = match_terms(g, p), ba = match_terms(p, g);
    ASSERT_EQ(ab.tp, ba.tp);
    ASSERT_EQ(ab.fp, ba.fn);
    // Adding a prediction never lowers tp.
    Terms more = p;
    more.push_back(std::string(1, static_cast<char>('a' + rng() % 10)));
    ASSERT_GE(match_terms(g, more).tp, ab.tp);
    // Polarity agreement is a stricter requirement than term agreement.
    Pairs gp = random_pairs(rng, 6), pp = random_pairs(rng, 6);
    Terms gt, pt;
    for (auto& x : gp) gt.push_back(x.term);
    for (auto& x : pp) pt.push_back(x.term);
    ASSERT_LE(match_pairs(gp, pp).tp, match_terms(gt, pt).tp);
  }
}

PipelineOutput output_for(const std::string& id, const Pairs& pairs) {
  PipelineOutput o;
  o.sentence_id = id;
  for (const auto& p : pairs) {
    LabeledAspect a;
    a.aspect.term = p.term;
    a.aspect.normalized = normalize_term(p.term);
    a.polarity = p.polarity;
    o.labeled.push_back(a);
  }
  return o;
}

TEST(ScoreJoint, PerfectAndFlipped) {
  Corpus c = testing::sample_corpus();
  std::vector<PipelineOutput> perfect{output_for("s1", {{"price", kNeg}, {"restaurant", kPos}})};
  EXPECT_EQ(score_joint(c, perfect).f1, 1.0);
  EXPECT_EQ(score_ate(c, perfect).f1, 1.0);

  std::vector<PipelineOutput> flipped{output_for("s1", {{"price", kPos}, {"restaurant", kPos}})};
  PrfScore j = score_joint(c, flipped);
  EXPECT_DOUBLE_EQ(j.precision, 0.5);
  EXPECT_DOUBLE_EQ(j.recall, 0.5);
  EXPECT_DOUBLE_EQ(j.f1, 0.5);
  EXPECT_EQ(score_ate(c, flipped).f1, 1.0);
}

TEST(ScoreAte, EmptyPredictions) {
  Corpus c = testing::sample_corpus();
  std::vector<PipelineOutput> empty{output_for("s1", {})};
  PrfScore s = score_ate(c, empty);
  EXPECT_EQ(s.f1, 0.0);
  EXPECT_EQ(s.counts.fn, 2u);
}

TEST(ScoreAte, IdsMustMatchCorpus) {
  Corpus c = testing::sample_corpus();
  std::vector<PipelineOutput> wrong{output_for("zz", {})};
  EXPECT_THROW(score_ate(c, wrong), IdMismatch);
  std::vector<PipelineOutput> none;
  EXPECT_THROW(score_ate(c, none), IdMismatch);
  std::vector<PipelineOutput> twice{output_for("s1", {}), output_for("s1", {})};
  EXPECT_THROW(score_ate(c, twice), IdMismatch);
}

TEST(ScoreAte, StrictOffsets) {
  Corpus c = testing::sample_corpus();
  auto out = output_for("s1", {{"price", kNeg}});
  ScoreConfig strict;
  strict.strict_offsets = true;
  std::vector<PipelineOutput> no_span{out};
  EXPECT_EQ(score_ate(c, no_span, strict).counts.tp, 0u);
  out.labeled[0].aspect.span = Span{4, 9};
  std::vector<PipelineOutput> with_span{out};
  EXPECT_EQ(score_ate(c, with_span, strict).counts.tp, 1u);
  out.labeled[0].aspect.span = Span{5, 10};
  std::vector<PipelineOutput> shifted{out};
  EXPECT_EQ(score_ate(c, shifted, strict).counts.tp, 0u);
}

// Oracle for corpus-level scores: sum of per-sentence oracle counts.
TEST(ScoreJoint, MicroAverageEqualsOracleOnRandomCorpora) {
  std::mt19937 rng(17);
  for (int round = 0; round < 200; ++round) {
    Corpus c;
    std::vector<PipelineOutput> outs;
    MatchCounts ate_sum, joint_sum;
    int n = std::uniform_int_distribution<int>(0, 5)(rng);
    for (int i = 0; i < n; ++i) {
      Pairs g = random_pairs(rng, 4), p = random_pairs(rng, 4);
      Sentence s{"s" + std::to_string(i), "text", {}};
      Terms gt, pt;
      for (auto& x : g) {
        s.gold.push_back({x.term, std::nullopt, x.polarity});
        gt.push_back(x.term);
      }
      for (auto& x : p) pt.push_back(x.term);
      c.sentences.push_back(s);
      outs.push_back(output_for(s.id, p));
      ate_sum += brute_force_oracle(gt, pt);
      joint_sum += brute_force_oracle(g, p);
    }
    PrfScore ate = score_ate(c, outs), joint = score_joint(c, outs);
    ASSERT_EQ(ate.counts, ate_sum);
    ASSERT_EQ(joint.counts, joint_sum);
    ASSERT_LE(joint.counts.tp, ate.counts.tp);
    ASSERT_LE(joint.f1, ate.f1);
  }
}

TEST(SummarizeAsc, AllNeutralOnBalancedToySet) {
  std::vector<std::pair<Polarity, Polarity>> labels{{kPos, kNeu}, {kNeg, kNeu}, {kNeu, kNeu}};
  AscSummary s = summarize_asc(labels);
  EXPECT_EQ(s.total, 3u);
  EXPECT_EQ(s.correct, 1u);
  EXPECT_DOUBLE_EQ(s.accuracy, 1.0 / 3.0);
}

TEST(SummarizeAsc, EmptyIsDegenerate) {
  AscSummary s = summarize_asc({});
  EXPECT_EQ(s.total, 0u);
  EXPECT_EQ(s.accuracy, 0.0);
  EXPECT_TRUE(s.degenerate());
}

TEST(ScoreAscGivenGold, AgreeingBackendScoresOne) {
  class Oracle : public AscBackend {
   public:
    std::string id() const override { return "oracle"; }
    AscResult classify(std::string_view, std::string_view term) override {
      Polarity p = term == "price" ? kNeg : kPos;
      return {p, PolarityScores::one_hot(p)};
    }
  } oracle;
  AscSummary s = score_asc_given_gold(testing::sample_corpus(), oracle);
  EXPECT_EQ(s.total, 2u);
  EXPECT_EQ(s.accuracy, 1.0);

  Corpus conflict = testing::sample_corpus();
  conflict.sentences[0].gold[0].polarity = Polarity::kConflict;
  EXPECT_THROW(score_asc_given_gold(conflict, oracle), std::invalid_argument);
}

TEST(ScoreAscPipelined, AccuracyIsJointOverAteTp) {
  Corpus c = testing::sample_corpus();
  std::vector<PipelineOutput> outs{
      output_for("s1", {{"price", kPos}, {"restaurant", kPos}, {"decor", kPos}})};
  AscSummary s = score_asc_pipelined(c, outs);
  EXPECT_EQ(s.total, score_ate(c, outs).counts.tp);
  EXPECT_EQ(s.correct, score_joint(c, outs).counts.tp);
  EXPECT_DOUBLE_EQ(s.accuracy, 0.5);
}

TEST(PairErrors, OneFlippedPolarity) {
  Corpus c = testing::sample_corpus();
  std::vector<PipelineOutput> outs{output_for("s1", {{"price", kPos}, {"restaurant", kPos}})};
  auto errors = pair_errors(c, outs);
  ASSERT_EQ(errors.size(), 1u);
  EXPECT_EQ(errors[0].sentence_id, "s1");
  ASSERT_EQ(errors[0].missing.size(), 1u);
  EXPECT_EQ(errors[0].missing[0], (TermPolarity{"price", kNeg}));
  ASSERT_EQ(errors[0].spurious.size(), 1u);
  EXPECT_EQ(errors[0].spurious[0], (TermPolarity{"price", kPos}));
}

}  // namespace
}  // namespace absa
