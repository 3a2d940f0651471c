#include <random>

#include <gtest/gtest.h>

#include "absa/corpus.hpp"
#include "absa/errors.hpp"
#include "absa/utf8.hpp"
#include "test_support.hpp"

namespace absa {
namespace {

using testing::kSampleText;
using testing::sample_corpus;

constexpr const char* kSample2014 = R"(<?xml version="1.0" encoding="UTF-8"?>
<sentences>
  <sentence id="813">
    <text>The price was high, but the restaurant was breathtaking</text>
    <aspectTerms>
      <aspectTerm term="price" polarity="negative" from="4" to="9"/>
    </aspectTerms>
  </sentence>
</sentences>
)";

TEST(ParseSemevalXml, OneSentenceSample) {
  Corpus c = parse_semeval_xml(kSample2014);
  ASSERT_EQ(c.sentences.size(), 1u);
  const Sentence& s = c.sentences[0];
  EXPECT_EQ(s.id, "813");
  EXPECT_EQ(s.text, kSampleText);
  ASSERT_EQ(s.gold.size(), 1u);
  EXPECT_EQ(s.gold[0].term, "price");
  EXPECT_EQ(s.gold[0].span, (Span{4, 9}));
  EXPECT_EQ(s.gold[0].polarity, Polarity::kNegative);
}

TEST(ParseSemevalXml, NoAspectTermsElements) {
  Corpus c = parse_semeval_xml(
      "<sentences><sentence id=\"a\"><text>Nice.</text></sentence>"
      "<sentence id=\"b\"><text>Fine.</text></sentence></sentences>");
  ASSERT_EQ(c.sentences.size(), 2u);
  for (const Sentence& s : c.sentences) EXPECT_TRUE(s.gold.empty());
}

TEST(ParseSemevalXml, OffsetMismatchNamesSentence) {
  std::string xml = kSample2014;
  xml.replace(xml.find("from=\"4\""), 8, "from=\"5\"");
  try {
    parse_semeval_xml(xml);
    FAIL() << "expected OffsetMismatch";
  } catch (const OffsetMismatch& e) {
    EXPECT_NE(std::string(e.what()).find("813"), std::string::npos);
  }
}

TEST(ParseSemevalXml, LenientModeDefersToValidator) {
  std::string xml = kSample2014;
  xml.replace(xml.find("from=\"4\""), 8, "from=\"5\"");
  Corpus c = parse_semeval_xml(xml, {ParseMode::kLenient, "", Split::kOther});
  auto v = validate_corpus(c);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].rule, "offset-mismatch");
  EXPECT_EQ(v[0].sentence_id, "813");
}

TEST(ParseSemevalXml, MalformedAndSchemaErrors) {
  EXPECT_THROW(parse_semeval_xml("<sentences><sentence id=\"1\">"), MalformedXml);
  EXPECT_THROW(parse_semeval_xml("<corpus/>"), SchemaViolation);
  EXPECT_THROW(parse_semeval_xml(
                   "<sentences><sentence id=\"1\"><text>a b</text><aspectTerms>"
                   "<aspectTerm term=\"a\" polarity=\"great\" from=\"0\" to=\"1\"/>"
                   "</aspectTerms></sentence></sentences>"),
               SchemaViolation);
}

TEST(ParseSemevalXml, OffsetsCountCharactersNotBytes) {
  Corpus c = parse_semeval_xml(
      "<sentences><sentence id=\"1\"><text>Caf\xC3\xA9 cr\xC3\xA8me was good</text>"
      "<aspectTerms><aspectTerm term=\"cr\xC3\xA8me\" polarity=\"positive\" from=\"5\" "
      "to=\"10\"/></aspectTerms></sentence></sentences>");
  EXPECT_EQ(c.sentences[0].gold[0].span, (Span{5, 10}));
}

TEST(ParseSemevalXml, Schema2015Opinions) {
  const char* xml = R"(<?xml version="1.0" encoding="UTF-8"?>
<Reviews>
  <Review rid="1004293">
    <sentences>
      <sentence id="1004293:0">
        <text>The price was high, but the restaurant was breathtaking</text>
        <Opinions>
          <Opinion target="price" category="RESTAURANT#PRICES" polarity="negative" from="4" to="9"/>
          <Opinion target="price" category="FOOD#PRICES" polarity="negative" from="4" to="9"/>
          <Opinion target="NULL" category="AMBIENCE#GENERAL" polarity="positive" from="0" to="0"/>
          <Opinion target="restaurant" category="RESTAURANT#GENERAL" polarity="positive" from="28" to="38"/>
        </Opinions>
      </sentence>
      <sentence id="1">
        <text>Will be back.</text>
      </sentence>
    </sentences>
  </Review>
</Reviews>
)";
  Corpus c = parse_semeval_xml(xml);
  ASSERT_EQ(c.sentences.size(), 2u);
  EXPECT_EQ(c.sentences[0].id, "1004293:0");
  EXPECT_EQ(c.sentences[1].id, "1004293:1");
  ASSERT_EQ(c.sentences[0].gold.size(), 2u);
  EXPECT_EQ(c.sentences[0].gold[0].term, "price");
  EXPECT_EQ(c.sentences[0].gold[1].term, "restaurant");
  EXPECT_TRUE(c.sentences[1].gold.empty());
}

TEST(SerializeSemevalXml, RoundTripSample) {
  Corpus c = sample_corpus();
  EXPECT_EQ(parse_semeval_xml(serialize_semeval_xml(c)), c);
}

TEST(SerializeSemevalXml, EmptyCorpus) {
  Corpus c;
  c.name = "empty";
  std::string xml = serialize_semeval_xml(c);
  EXPECT_NE(xml.find("<sentences"), std::string::npos);
  Corpus back = parse_semeval_xml(xml);
  EXPECT_TRUE(back.sentences.empty());
  EXPECT_EQ(back, c);
}

TEST(SerializeSemevalXml, ConflictPreserved) {
  Corpus c;
  c.sentences.push_back({"x", "mixed feelings about the food",
                         {{"food", Span{25, 29}, Polarity::kConflict}}});
  std::string xml = serialize_semeval_xml(c);
  EXPECT_NE(xml.find("polarity=\"conflict\""), std::string::npos);
  EXPECT_EQ(parse_semeval_xml(xml), c);
}

TEST(SerializeSemevalXml, EscapesMarkupCharacters) {
  Corpus c;
  std::string text = "Fish & \"chips\" <b>'ok'</b>\r\n\tend";
  c.sentences.push_back({"e&<\"1\">", text, {{"Fish & \"chips\"", Span{0, 14},
                                             Polarity::kPositive}}});
  c.sentences.push_back({"e2", "tab\there", {{"tab\there", Span{0, 8}, Polarity::kNeutral}}});
  EXPECT_TRUE(validate_corpus(c).empty());
  EXPECT_EQ(parse_semeval_xml(serialize_semeval_xml(c)), c);
}

// Random corpora built from awkward pieces survive a serialize/parse cycle.
TEST(SerializeSemevalXml, RoundTripProperty) {
  std::mt19937 rng(7);
  const std::vector<std::string> words = {"food", "&", "<tag>", "\"q\"", "it's",
                                          "caf\xC3\xA9", "a\tb", "x>y", "plain"};
  for (int round = 0; round < 200; ++round) {
    Corpus c;
    c.name = "fuzz";
    c.split = Split::kTrain;
    int n = std::uniform_int_distribution<int>(0, 4)(rng);
    for (int i = 0; i < n; ++i) {
      Sentence s;
      s.id = "id" + std::to_string(i) + (i % 2 ? "&" : "");
      int len = std::uniform_int_distribution<int>(1, 6)(rng);
      std::vector<std::string> parts;
      std::vector<std::size_t> starts;
      std::size_t chars = 0;
      for (int w = 0; w < len; ++w) {
        if (w > 0) {
          s.text += ' ';
          ++chars;
        }
        parts.push_back(words[rng() % words.size()]);
        starts.push_back(chars);
        s.text += parts.back();
        chars += utf8::length(parts.back());
      }
      int pick = std::uniform_int_distribution<int>(0, len - 1)(rng);
      s.gold.push_back({parts[pick],
                        Span{starts[pick], starts[pick] + utf8::length(parts[pick])},
                        kAllPolarities[rng() % 4]});
      c.sentences.push_back(std::move(s));
    }
    ASSERT_TRUE(validate_corpus(c).empty());
    ASSERT_EQ(parse_semeval_xml(serialize_semeval_xml(c)), c);
  }
}

TEST(ValidateCorpus, ValidCorpusHasNoViolations) {
  EXPECT_TRUE(validate_corpus(sample_corpus()).empty());
}

TEST(ValidateCorpus, OneViolationPerExtraDuplicate) {
  Corpus c;
  for (int i = 0; i < 3; ++i) c.sentences.push_back({"dup", "text", {}});
  c.sentences.push_back({"other", "text", {}});
  auto v = validate_corpus(c);
  ASSERT_EQ(v.size(), 2u);
  for (const Violation& x : v) {
    EXPECT_EQ(x.rule, "duplicate-id");
    EXPECT_EQ(x.sentence_id, "dup");
  }
}

TEST(ValidateCorpus, EmptyTerm) {
  Corpus c;
  c.sentences.push_back({"1", "text", {{"", std::nullopt, Polarity::kPositive}}});
  auto v = validate_corpus(c);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].rule, "empty-term");
}

TEST(CorpusStats, SampleSentence) {
  CorpusStats s = corpus_stats(sample_corpus());
  EXPECT_EQ(s.sentences, 1u);
  EXPECT_EQ(s.aspects, 2u);
  EXPECT_EQ(s.count(Polarity::kPositive), 1u);
  EXPECT_EQ(s.count(Polarity::kNegative), 1u);
  EXPECT_EQ(s.count(Polarity::kNeutral), 0u);
  EXPECT_EQ(s.count(Polarity::kConflict), 0u);
  EXPECT_EQ(s.sentences_without_aspects, 0u);
  EXPECT_DOUBLE_EQ(s.mean_aspects, 2.0);
}

TEST(CorpusStats, EmptyCorpus) {
  EXPECT_EQ(corpus_stats(Corpus{}), CorpusStats{});
}

TEST(CorpusStats, MeanOverZeroOneThree) {
  Corpus c;
  auto g = [](int n) {
    return std::vector<GoldAspect>(n, GoldAspect{"t", std::nullopt, Polarity::kNeutral});
  };
  c.sentences = {{"a", "t", g(0)}, {"b", "t", g(1)}, {"c", "t", g(3)}};
  CorpusStats s = corpus_stats(c);
  EXPECT_DOUBLE_EQ(s.mean_aspects, 4.0 / 3.0);
  EXPECT_EQ(s.sentences_without_aspects, 1u);
}

Corpus three_with_conflict() {
  Corpus c;
  c.sentences.push_back({"1", "food service decor",
                         {{"food", Span{0, 4}, Polarity::kPositive},
                          {"service", Span{5, 12}, Polarity::kConflict},
                          {"decor", Span{13, 18}, Polarity::kNegative}}});
  return c;
}

TEST(ApplyConflictPolicy, Keep) {
  Corpus c = three_with_conflict();
  EXPECT_EQ(apply_conflict_policy(c, ConflictPolicy::kKeep), c);
}

TEST(ApplyConflictPolicy, Drop) {
  Corpus out = apply_conflict_policy(three_with_conflict(), ConflictPolicy::kDrop);
  EXPECT_EQ(corpus_stats(out).aspects, 2u);
}

TEST(ApplyConflictPolicy, MapToNeutral) {
  Corpus out = apply_conflict_policy(three_with_conflict(), ConflictPolicy::kMapToNeutral);
  CorpusStats s = corpus_stats(out);
  EXPECT_EQ(s.aspects, 3u);
  EXPECT_EQ(s.count(Polarity::kConflict), 0u);
  EXPECT_EQ(s.count(Polarity::kNeutral), 1u);
}

}  // namespace
}  // namespace absa
