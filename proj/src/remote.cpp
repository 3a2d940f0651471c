#include "absa/remote.hpp"

#include <algorithm>
#include <chrono>
#include <exception>
#include <mutex>
#include <semaphore>
#include <stdexcept>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "absa/errors.hpp"

namespace absa {
namespace {

using json = nlohmann::json;

std::string excerpt(std::string_view body) {
  constexpr std::size_t kMax = 200;
  return std::string(body.substr(0, kMax)) + (body.size() > kMax ? "..." : "");
}

// Splits "http://host:port/prefix" into "http://host:port" and "/prefix".
std::pair<std::string, std::string> split_url(const std::string& url) {
  auto scheme_end = url.find("://");
  auto path_begin = url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
  if (path_begin == std::string::npos) return {url, ""};
  std::string prefix = url.substr(path_begin);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  return {url.substr(0, path_begin), prefix};
}

json parse_body(const std::string& body) {
  json j = json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw ProtocolError("response is not a JSON object", excerpt(body));
  }
  return j;
}

const json& results_of(const json& j, std::size_t expected, const std::string& body) {
  if (!j.contains("results") || !j["results"].is_array()) {
    throw ProtocolError("response has no 'results' array", excerpt(body));
  }
  const json& results = j["results"];
  if (results.size() != expected) {
    throw ProtocolError("expected " + std::to_string(expected) + " results, got " +
                            std::to_string(results.size()),
                        excerpt(body));
  }
  return results;
}

void check_echo(const json& r, const std::string& id, const std::string& body) {
  if (!r.is_object() || !r.contains("id") || !r["id"].is_string() ||
      r["id"].get<std::string>() != id) {
    throw ProtocolError("result does not echo request id '" + id + "'", excerpt(body));
  }
}

// Runs `process` over consecutive chunks of at most `batch` items using up to
// `workers` threads and concatenates the replies in input order. The first
// failing chunk (by position) decides the exception.
template <class Item, class Reply, class Process>
std::vector<Reply> chunked(std::span<const Item> items, std::size_t batch,
                           std::size_t workers, Process process) {
  const std::size_t chunks = (items.size() + batch - 1) / batch;
  std::vector<std::vector<Reply>> replies(chunks);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::mutex mu;
  std::size_t failed_chunk = chunks;
  std::exception_ptr error;

  auto worker = [&] {
    while (!stop.load()) {
      std::size_t c = next.fetch_add(1);
      if (c >= chunks) return;
      auto chunk = items.subspan(c * batch, std::min(batch, items.size() - c * batch));
      try {
        replies[c] = process(chunk);
      } catch (...) {
        std::lock_guard lock(mu);
        if (c < failed_chunk) {
          failed_chunk = c;
          error = std::current_exception();
        }
        stop.store(true);
      }
    }
  };

  const std::size_t n = std::min(workers, chunks);
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::jthread> threads;
    for (std::size_t t = 0; t < n; ++t) threads.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);

  std::vector<Reply> out;
  out.reserve(items.size());
  for (auto& r : replies) {
    for (auto& v : r) out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

struct RemoteClient::Impl {
  explicit Impl(std::size_t in_flight)
      : slots(static_cast<std::ptrdiff_t>(in_flight)) {}
  std::string host;
  std::string prefix;
  std::counting_semaphore<> slots;
};

void RemoteEndpointConfig::check() const {
  if (!base_url.starts_with("http://")) {
    throw std::invalid_argument("endpoint must be an http:// URL, got '" + base_url + "'");
  }
  if (timeout_ms <= 0 || max_retries < 0 || retry_backoff_ms <= 0 ||
      max_batch == 0 || max_in_flight == 0) {
    throw std::invalid_argument("remote endpoint settings must be positive");
  }
}

RemoteClient::RemoteClient(RemoteEndpointConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.check();
  impl_ = std::make_unique<Impl>(cfg_.max_in_flight);
  std::tie(impl_->host, impl_->prefix) = split_url(cfg_.base_url);
}

RemoteClient::~RemoteClient() = default;

std::string RemoteClient::post(const std::string& path, const std::string& body) {
  const auto timeout = std::chrono::milliseconds(cfg_.timeout_ms);
  std::string last_error;
  for (int attempt = 0; attempt <= cfg_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(
          std::chrono::milliseconds(cfg_.retry_backoff_ms) * (1 << (attempt - 1)));
    }
    impl_->slots.acquire();
    httplib::Result res;
    {
      httplib::Client client(impl_->host);
      client.set_connection_timeout(timeout);
      client.set_read_timeout(timeout);
      client.set_write_timeout(timeout);
      ++requests_;
      res = body.empty() ? client.Get(impl_->prefix + path)
                         : client.Post(impl_->prefix + path, body, "application/json");
    }
    impl_->slots.release();

    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw ProtocolError(path + " returned HTTP " + std::to_string(res->status),
                          excerpt(res->body));
    }
    return res->body;
  }
  throw BackendUnavailable(cfg_.base_url + path + " unavailable after " +
                           std::to_string(cfg_.max_retries + 1) +
                           " attempts: " + last_error);
}

std::vector<AteReply> RemoteClient::ate(std::span<const AteItem> items) {
  return chunked<AteItem, AteReply>(
      items, cfg_.max_batch, cfg_.max_in_flight, [&](std::span<const AteItem> chunk) {
        json request;
        request["items"] = json::array();
        for (const AteItem& item : chunk) {
          request["items"].push_back({{"id", item.id}, {"text", item.text}});
        }
        const std::string body = post("/v1/ate", request.dump());
        const json response = parse_body(body);
        const json& results = results_of(response, chunk.size(), body);
        std::vector<AteReply> out;
        for (std::size_t k = 0; k < chunk.size(); ++k) {
          const json& r = results[k];
          check_echo(r, chunk[k].id, body);
          if (!r.contains("terms") || !r["terms"].is_array()) {
            throw ProtocolError("result has no 'terms' array", excerpt(body));
          }
          AteReply reply{chunk[k].id, {}};
          for (const json& t : r["terms"]) {
            if (!t.is_string()) throw ProtocolError("term is not a string", excerpt(body));
            reply.terms.push_back(t.get<std::string>());
          }
          out.push_back(std::move(reply));
        }
        return out;
      });
}

std::vector<AscReply> RemoteClient::asc(std::span<const AscItem> items) {
  return chunked<AscItem, AscReply>(
      items, cfg_.max_batch, cfg_.max_in_flight, [&](std::span<const AscItem> chunk) {
        json request;
        request["items"] = json::array();
        for (const AscItem& item : chunk) {
          request["items"].push_back(
              {{"id", item.id}, {"text", item.text}, {"term", item.term}});
        }
        const std::string body = post("/v1/asc", request.dump());
        const json response = parse_body(body);
        const json& results = results_of(response, chunk.size(), body);
        std::vector<AscReply> out;
        for (std::size_t k = 0; k < chunk.size(); ++k) {
          const json& r = results[k];
          check_echo(r, chunk[k].id, body);
          AscReply reply;
          reply.id = chunk[k].id;
          try {
            reply.term = r.at("term").get<std::string>();
            auto polarity = parse_polarity(r.at("polarity").get<std::string>());
            if (!polarity || *polarity == Polarity::kConflict) {
              throw ProtocolError("bad polarity", excerpt(body));
            }
            reply.polarity = *polarity;
            const json& s = r.at("scores");
            reply.scores = {s.at("positive").get<double>(), s.at("negative").get<double>(),
                            s.at("neutral").get<double>()};
          } catch (const json::exception& e) {
            throw ProtocolError(std::string("malformed asc result: ") + e.what(),
                                excerpt(body));
          }
          if (reply.term != chunk[k].term) {
            throw ProtocolError("result does not echo term '" + chunk[k].term + "'",
                                excerpt(body));
          }
          if (!scores_consistent(reply.scores, reply.polarity)) {
            throw ProtocolError("scores do not sum to 1 or disagree with polarity",
                                excerpt(body));
          }
          out.push_back(std::move(reply));
        }
        return out;
      });
}

HealthInfo RemoteClient::health() {
  HealthInfo info;
  info.body = post("/v1/health", "");
  json j = parse_body(info.body);
  for (const char* key : {"service_version", "version"}) {
    if (j.contains(key) && j[key].is_string()) {
      info.service_version = j[key].get<std::string>();
      break;
    }
  }
  return info;
}

CandidateAspects RemoteAte::extract(std::string_view text) {
  std::vector<AteItem> items{{"0", std::string(text)}};
  return CandidateAspects{client_->ate(items).front().terms};
}

AscResult RemoteAsc::classify(std::string_view text, std::string_view term) {
  std::vector<AscItem> items{{"0", std::string(text), std::string(term)}};
  AscReply reply = client_->asc(items).front();
  return AscResult{reply.polarity, reply.scores};
}

}  // namespace absa
