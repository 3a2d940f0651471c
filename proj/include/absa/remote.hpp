#ifndef ABSA_REMOTE_HPP_
#define ABSA_REMOTE_HPP_

#include <atomic>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absa/backend.hpp"

namespace absa {

struct RemoteEndpointConfig {
  // http://host:port[/prefix]
  std::string base_url;
  int timeout_ms = 60000;
  int max_retries = 3;
  int retry_backoff_ms = 200;
  std::size_t max_batch = 16;
  std::size_t max_in_flight = 4;

  // Throws std::invalid_argument unless every field is positive and the URL
  // is a plain http URL.
  void check() const;
};

struct AteItem {
  std::string id;
  std::string text;
};
struct AteReply {
  std::string id;
  std::vector<std::string> terms;
  bool operator==(const AteReply&) const = default;
};
struct AscItem {
  std::string id;
  std::string text;
  std::string term;
};
struct AscReply {
  std::string id;
  std::string term;
  Polarity polarity = Polarity::kNeutral;
  PolarityScores scores;
  bool operator==(const AscReply&) const = default;
};

struct HealthInfo {
  std::string body;             // raw JSON as served
  std::string service_version;  // "version" or "service_version" field, if any
};

// Batching client for the inference service (POST /v1/ate, POST /v1/asc,
// GET /v1/health). Items are sent in chunks of max_batch with at most
// max_in_flight requests outstanding across all callers; replies come back
// in input order. Timeouts, connection failures and 5xx are retried with
// exponential backoff and end in BackendUnavailable; 4xx and malformed
// bodies are ProtocolError. Safe for concurrent use.
class RemoteClient {
 public:
  explicit RemoteClient(RemoteEndpointConfig cfg);
  ~RemoteClient();

  std::vector<AteReply> ate(std::span<const AteItem> items);
  std::vector<AscReply> asc(std::span<const AscItem> items);
  HealthInfo health();

  // HTTP attempts made so far, retries included.
  std::size_t requests_sent() const { return requests_.load(); }
  const RemoteEndpointConfig& config() const { return cfg_; }

 private:
  struct Impl;
  std::string post(const std::string& path, const std::string& body);

  RemoteEndpointConfig cfg_;
  std::unique_ptr<Impl> impl_;
  std::atomic<std::size_t> requests_{0};
};

class RemoteAte : public AteBackend {
 public:
  explicit RemoteAte(std::shared_ptr<RemoteClient> client) : client_(std::move(client)) {}
  std::string id() const override { return "remote:" + client_->config().base_url; }
  CandidateAspects extract(std::string_view text) override;

 private:
  std::shared_ptr<RemoteClient> client_;
};

class RemoteAsc : public AscBackend {
 public:
  explicit RemoteAsc(std::shared_ptr<RemoteClient> client) : client_(std::move(client)) {}
  std::string id() const override { return "remote:" + client_->config().base_url; }
  AscResult classify(std::string_view text, std::string_view term) override;

 private:
  std::shared_ptr<RemoteClient> client_;
};

}  // namespace absa

#endif  // ABSA_REMOTE_HPP_
