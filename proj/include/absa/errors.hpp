#ifndef ABSA_ERRORS_HPP_
#define ABSA_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace absa {

// Base for every error raised by the harness.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Corpus input errors.
class MalformedXml : public Error {
 public:
  using Error::Error;
};

class SchemaViolation : public Error {
 public:
  using Error::Error;
};

class OffsetMismatch : public Error {
 public:
  OffsetMismatch(std::string sentence_id, const std::string& detail)
      : Error("offset mismatch in sentence '" + sentence_id + "': " + detail),
        sentence_id_(std::move(sentence_id)) {}
  const std::string& sentence_id() const { return sentence_id_; }

 private:
  std::string sentence_id_;
};

// A model backend could not produce an answer (remote failure after retries).
// Callers add the sentence and stage as the error travels up; run_corpus adds
// the number of sentences completed before the failure.
class BackendUnavailable : public Error {
 public:
  explicit BackendUnavailable(const std::string& what) : Error(what) {}
  BackendUnavailable(const std::string& what, std::string sentence_id,
                     std::string stage, std::size_t completed = 0)
      : Error(what),
        sentence_id_(std::move(sentence_id)),
        stage_(std::move(stage)),
        completed_(completed) {}

  const std::string& sentence_id() const { return sentence_id_; }
  const std::string& stage() const { return stage_; }
  std::size_t completed() const { return completed_; }

 private:
  std::string sentence_id_;
  std::string stage_;
  std::size_t completed_ = 0;
};

// The remote service answered with something that violates the wire contract.
class ProtocolError : public Error {
 public:
  ProtocolError(const std::string& what, std::string body_excerpt = {})
      : Error(body_excerpt.empty() ? what : what + " (body: " + body_excerpt + ")"),
        body_excerpt_(std::move(body_excerpt)) {}
  const std::string& body_excerpt() const { return body_excerpt_; }

 private:
  std::string body_excerpt_;
};

class TermNotFound : public Error {
 public:
  using Error::Error;
};

class FixtureCorrupt : public Error {
 public:
  using Error::Error;
};

class DuplicateKey : public Error {
 public:
  using Error::Error;
};

class MissingFixture : public Error {
 public:
  MissingFixture(std::string key, const std::string& detail)
      : Error("missing fixture " + key + ": " + detail), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// A prediction dump line that does not follow the dump format.
class DumpCorrupt : public Error {
 public:
  using Error::Error;
};

class IdMismatch : public Error {
 public:
  using Error::Error;
};

class SizeExceeded : public Error {
 public:
  using Error::Error;
};

class UnknownDataset : public Error {
 public:
  using Error::Error;
};

}  // namespace absa

#endif  // ABSA_ERRORS_HPP_
