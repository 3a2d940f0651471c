#include "absa/corpus.hpp"

#include <expat.h>

#include <charconv>
#include <memory>
#include <set>
#include <tuple>
#include <unordered_set>

#include "absa/errors.hpp"
#include "absa/utf8.hpp"

namespace absa {
namespace {

// Just enough of a DOM for the SemEval schemas.
struct Element {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<std::unique_ptr<Element>> children;
  std::string text;
  int line = 0;

  const std::string* attribute(std::string_view key) const {
    for (const auto& [k, v] : attributes) {
      if (k == key) return &v;
    }
    return nullptr;
  }

  std::vector<const Element*> children_named(std::string_view tag) const {
    std::vector<const Element*> out;
    for (const auto& c : children) {
      if (c->name == tag) out.push_back(c.get());
    }
    return out;
  }
};

class DomBuilder {
 public:
  DomBuilder() : parser_(XML_ParserCreate("UTF-8")) {
    XML_SetUserData(parser_, this);
    XML_SetElementHandler(parser_, &DomBuilder::on_start, &DomBuilder::on_end);
    XML_SetCharacterDataHandler(parser_, &DomBuilder::on_text);
  }
  ~DomBuilder() { XML_ParserFree(parser_); }
  DomBuilder(const DomBuilder&) = delete;
  DomBuilder& operator=(const DomBuilder&) = delete;

  std::unique_ptr<Element> parse(std::string_view bytes) {
    // Expat takes an int length; feed in chunks.
    constexpr std::size_t kChunk = 1 << 20;
    std::size_t pos = 0;
    do {
      std::size_t n = std::min(kChunk, bytes.size() - pos);
      bool last = pos + n == bytes.size();
      if (XML_Parse(parser_, bytes.data() + pos, static_cast<int>(n),
                    last ? XML_TRUE : XML_FALSE) == XML_STATUS_ERROR) {
        throw MalformedXml(
            std::string(XML_ErrorString(XML_GetErrorCode(parser_))) +
            " at line " + std::to_string(XML_GetCurrentLineNumber(parser_)));
      }
      pos += n;
    } while (pos < bytes.size());
    if (!root_) throw MalformedXml("document has no root element");
    return std::move(root_);
  }

 private:
  static void on_start(void* data, const XML_Char* name,
                       const XML_Char** attrs) {
    auto* self = static_cast<DomBuilder*>(data);
    auto element = std::make_unique<Element>();
    element->name = name;
    element->line = static_cast<int>(XML_GetCurrentLineNumber(self->parser_));
    for (int i = 0; attrs[i] != nullptr; i += 2) {
      element->attributes.emplace_back(attrs[i], attrs[i + 1]);
    }
    Element* raw = element.get();
    if (self->stack_.empty()) {
      self->root_ = std::move(element);
    } else {
      self->stack_.back()->children.push_back(std::move(element));
    }
    self->stack_.push_back(raw);
  }

  static void on_end(void* data, const XML_Char*) {
    static_cast<DomBuilder*>(data)->stack_.pop_back();
  }

  static void on_text(void* data, const XML_Char* s, int len) {
    auto* self = static_cast<DomBuilder*>(data);
    if (!self->stack_.empty()) self->stack_.back()->text.append(s, len);
  }

  XML_Parser parser_;
  std::unique_ptr<Element> root_;
  std::vector<Element*> stack_;
};

[[noreturn]] void schema_error(const Element& e, const std::string& what) {
  throw SchemaViolation("<" + e.name + "> at line " + std::to_string(e.line) +
                        ": " + what);
}

const std::string& required(const Element& e, std::string_view key) {
  const std::string* v = e.attribute(key);
  if (v == nullptr) schema_error(e, "missing attribute '" + std::string(key) + "'");
  return *v;
}

std::size_t parse_offset(const Element& e, std::string_view key,
                         const std::string& value) {
  std::size_t out = 0;
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end || value.empty()) {
    schema_error(e, "attribute '" + std::string(key) +
                        "' is not a non-negative integer: '" + value + "'");
  }
  return out;
}

Polarity parse_polarity_attr(const Element& e) {
  const std::string& value = required(e, "polarity");
  auto p = parse_polarity(value);
  if (!p) schema_error(e, "unknown polarity '" + value + "'");
  return *p;
}

std::optional<Span> parse_span(const Element& e) {
  const std::string* from = e.attribute("from");
  const std::string* to = e.attribute("to");
  if (from == nullptr && to == nullptr) return std::nullopt;
  if (from == nullptr || to == nullptr) {
    schema_error(e, "'from' and 'to' must appear together");
  }
  return Span{parse_offset(e, "from", *from), parse_offset(e, "to", *to)};
}

const Element& single_text(const Element& sentence) {
  auto texts = sentence.children_named("text");
  if (texts.size() != 1) {
    schema_error(sentence, "expected exactly one <text>, found " +
                               std::to_string(texts.size()));
  }
  return *texts.front();
}

Sentence read_sentence_2014(const Element& e) {
  Sentence s;
  s.id = required(e, "id");
  s.text = single_text(e).text;
  for (const Element* group : e.children_named("aspectTerms")) {
    for (const Element* term : group->children_named("aspectTerm")) {
      GoldAspect a;
      a.term = required(*term, "term");
      a.polarity = parse_polarity_attr(*term);
      a.span = parse_span(*term);
      s.gold.push_back(std::move(a));
    }
  }
  return s;
}

Sentence read_sentence_2015(const Element& e, const std::string& review_id) {
  Sentence s;
  const std::string& sid = required(e, "id");
  // Sentence ids in the released files already embed the review id.
  std::string prefix = review_id + ":";
  s.id = sid.starts_with(prefix) ? sid : prefix + sid;
  s.text = single_text(e).text;
  std::set<std::tuple<std::string, std::size_t, std::size_t, int, Polarity>> seen;
  for (const Element* group : e.children_named("Opinions")) {
    for (const Element* op : group->children_named("Opinion")) {
      const std::string& target = required(*op, "target");
      Polarity polarity = parse_polarity_attr(*op);
      if (target == "NULL") continue;
      GoldAspect a;
      a.term = target;
      a.polarity = polarity;
      a.span = parse_span(*op);
      // One opinion per category is annotated; the same target span and
      // polarity repeated across categories is a single term-level aspect.
      auto key = std::make_tuple(a.term, a.span ? a.span->from : 0,
                                 a.span ? a.span->to : 0, a.span ? 1 : 0,
                                 a.polarity);
      if (!seen.insert(key).second) continue;
      s.gold.push_back(std::move(a));
    }
  }
  return s;
}

void apply_root_attributes(const Element& root, Corpus& corpus) {
  if (const std::string* name = root.attribute("name")) corpus.name = *name;
  if (const std::string* split = root.attribute("split")) {
    auto parsed = parse_split(*split);
    if (!parsed) schema_error(root, "unknown split '" + *split + "'");
    corpus.split = *parsed;
  }
}

void escape_into(std::string& out, std::string_view s, bool attribute) {
  for (char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        if (attribute) {
          out += "&quot;";
        } else {
          out += c;
        }
        break;
      case '\r':
        // Would be normalized away by any conforming reader.
        out += "&#13;";
        break;
      case '\n':
        out += attribute ? "&#10;" : "\n";
        break;
      case '\t':
        out += attribute ? "&#9;" : "\t";
        break;
      default:
        out += c;
    }
  }
}

}  // namespace

std::string_view to_string(Split s) {
  switch (s) {
    case Split::kTrain:
      return "train";
    case Split::kTest:
      return "test";
    case Split::kOther:
      return "other";
  }
  return "other";
}

std::optional<Split> parse_split(std::string_view s) {
  for (Split v : {Split::kTrain, Split::kTest, Split::kOther}) {
    if (to_string(v) == s) return v;
  }
  return std::nullopt;
}

std::string_view to_string(ConflictPolicy p) {
  switch (p) {
    case ConflictPolicy::kDrop:
      return "drop";
    case ConflictPolicy::kKeep:
      return "keep";
    case ConflictPolicy::kMapToNeutral:
      return "map_to_neutral";
  }
  return "drop";
}

std::optional<ConflictPolicy> parse_conflict_policy(std::string_view s) {
  for (ConflictPolicy p : {ConflictPolicy::kDrop, ConflictPolicy::kKeep,
                           ConflictPolicy::kMapToNeutral}) {
    if (to_string(p) == s) return p;
  }
  return std::nullopt;
}

Corpus parse_semeval_xml(std::string_view bytes, const ParseOptions& options) {
  std::unique_ptr<Element> root = DomBuilder().parse(bytes);

  Corpus corpus;
  corpus.name = options.name;
  corpus.split = options.split;
  apply_root_attributes(*root, corpus);

  if (root->name == "sentences") {
    for (const Element* e : root->children_named("sentence")) {
      corpus.sentences.push_back(read_sentence_2014(*e));
    }
  } else if (root->name == "Reviews") {
    for (const Element* review : root->children_named("Review")) {
      const std::string& rid = required(*review, "rid");
      for (const Element* group : review->children_named("sentences")) {
        for (const Element* e : group->children_named("sentence")) {
          corpus.sentences.push_back(read_sentence_2015(*e, rid));
        }
      }
    }
  } else {
    schema_error(*root, "unknown root element");
  }

  if (options.mode == ParseMode::kStrict) {
    auto violations = validate_corpus(corpus);
    if (!violations.empty()) {
      const Violation& v = violations.front();
      if (v.rule == "offset-mismatch" || v.rule == "span-range") {
        throw OffsetMismatch(v.sentence_id, v.detail);
      }
      throw SchemaViolation("sentence '" + v.sentence_id + "': " + v.rule +
                            ": " + v.detail);
    }
  }
  return corpus;
}

std::string serialize_semeval_xml(const Corpus& corpus) {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<sentences";
  if (!corpus.name.empty()) {
    out += " name=\"";
    escape_into(out, corpus.name, true);
    out += '"';
  }
  out += " split=\"";
  out += to_string(corpus.split);
  out += "\">\n";
  for (const Sentence& s : corpus.sentences) {
    out += "  <sentence id=\"";
    escape_into(out, s.id, true);
    out += "\">\n    <text>";
    escape_into(out, s.text, false);
    out += "</text>\n";
    if (!s.gold.empty()) {
      out += "    <aspectTerms>\n";
      for (const GoldAspect& a : s.gold) {
        out += "      <aspectTerm term=\"";
        escape_into(out, a.term, true);
        out += "\" polarity=\"";
        out += to_string(a.polarity);
        out += '"';
        if (a.span) {
          out += " from=\"" + std::to_string(a.span->from) + "\" to=\"" +
                 std::to_string(a.span->to) + '"';
        }
        out += "/>\n";
      }
      out += "    </aspectTerms>\n";
    }
    out += "  </sentence>\n";
  }
  out += "</sentences>\n";
  return out;
}

std::vector<Violation> validate_corpus(const Corpus& corpus) {
  std::vector<Violation> out;
  std::unordered_set<std::string> ids;
  for (const Sentence& s : corpus.sentences) {
    if (s.id.empty()) out.push_back({s.id, "empty-id", "sentence id is empty"});
    if (!ids.insert(s.id).second) {
      out.push_back({s.id, "duplicate-id", "sentence id appears more than once"});
    }
    if (s.text.empty()) out.push_back({s.id, "empty-text", "sentence text is empty"});
    const std::size_t length = utf8::length(s.text);
    for (const GoldAspect& a : s.gold) {
      if (text::trim(a.term).empty()) {
        out.push_back({s.id, "empty-term", "aspect term is empty"});
      }
      if (!a.span) continue;
      const Span& span = *a.span;
      if (!(span.from < span.to && span.to <= length)) {
        out.push_back({s.id, "span-range",
                       "span [" + std::to_string(span.from) + ", " +
                           std::to_string(span.to) + ") outside text of " +
                           std::to_string(length) + " characters"});
        continue;
      }
      std::string_view slice = *utf8::slice(s.text, span.from, span.to);
      if (slice != a.term) {
        out.push_back({s.id, "offset-mismatch",
                       "text[" + std::to_string(span.from) + ":" +
                           std::to_string(span.to) + "] is '" +
                           std::string(slice) + "', term is '" + a.term + "'"});
      }
    }
  }
  return out;
}

CorpusStats corpus_stats(const Corpus& corpus) {
  CorpusStats stats;
  stats.sentences = corpus.sentences.size();
  for (const Sentence& s : corpus.sentences) {
    stats.aspects += s.gold.size();
    if (s.gold.empty()) ++stats.sentences_without_aspects;
    for (const GoldAspect& a : s.gold) ++stats.histogram[index_of(a.polarity)];
  }
  if (stats.sentences > 0) {
    stats.mean_aspects = static_cast<double>(stats.aspects) /
                         static_cast<double>(stats.sentences);
  }
  return stats;
}

Corpus apply_conflict_policy(const Corpus& corpus, ConflictPolicy policy) {
  Corpus out = corpus;
  if (policy == ConflictPolicy::kKeep) return out;
  for (Sentence& s : out.sentences) {
    if (policy == ConflictPolicy::kDrop) {
      std::erase_if(s.gold, [](const GoldAspect& a) {
        return a.polarity == Polarity::kConflict;
      });
    } else {
      for (GoldAspect& a : s.gold) {
        if (a.polarity == Polarity::kConflict) a.polarity = Polarity::kNeutral;
      }
    }
  }
  return out;
}

}  // namespace absa
