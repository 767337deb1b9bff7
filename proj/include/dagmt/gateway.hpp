#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "dagmt/errors.hpp"
#include "dagmt/json.hpp"
#include "dagmt/prompts.hpp"

namespace dagmt {

struct ChatRequest {
  AgentKind agent = AgentKind::Translation;
  std::string prompt;
  std::string model;
  double temperature = 0.1;
  int max_output_tokens = 4096;

  // Applies the per-agent output budget: one token for the binary agents,
  // 4096 for memory and translation.
  static ChatRequest make(AgentKind agent, std::string prompt, std::string model,
                          double temperature);
  void validate() const;
};

struct BackendResponse {
  std::string text;
  long prompt_tokens = 0;
  long completion_tokens = 0;
  std::chrono::milliseconds latency{0};
};

class Backend {
 public:
  virtual ~Backend() = default;
  virtual BackendResponse complete(const ChatRequest& req) = 0;
};

// Case-insensitive leading yes/true -> true, no/false -> false, after
// stripping punctuation and whitespace. Anything else is a ParseError,
// never a silent coercion.
bool parse_binary(const std::string& text);

// --- scripted mock backend ----------------------------------------------

struct CallRecord {
  AgentKind agent;
  long ordinal = 0;  // per-agent-kind call counter, 0-based
  std::string prompt;
};

// Deterministic scripted backend for offline tests. Script format: a JSON
// array of {"match": {"agent": ..., "ordinal": ...} | {"prompt_sha256": ...},
// "response": ...}. A call matches the first rule whose prompt hash equals
// the rendered prompt's SHA-256 or whose (agent, ordinal) equals the call's.
// Unmatched calls throw MockScriptError.
class MockBackend : public Backend {
 public:
  explicit MockBackend(const Json& script);
  static std::shared_ptr<MockBackend> from_file(const std::filesystem::path& path);

  BackendResponse complete(const ChatRequest& req) override;

  std::vector<CallRecord> log() const;
  long calls_for(AgentKind kind) const;
  long memory_calls() const;  // all five memory agents combined
  long total_calls() const;

 private:
  struct Rule {
    std::optional<std::string> agent;
    std::optional<long> ordinal;
    std::optional<std::string> prompt_sha256;
    std::string response;
  };
  std::vector<Rule> rules_;
  std::unordered_map<std::string, long> counters_;
  std::vector<CallRecord> log_;
  mutable std::mutex mu_;
};

// A backend that always fails with TransportError; used to exercise retry.
class UnreachableBackend : public Backend {
 public:
  BackendResponse complete(const ChatRequest& req) override;
  long attempts() const { return attempts_; }

 private:
  std::atomic<long> attempts_{0};
};

// --- HTTP chat-completion backend -----------------------------------------

// Talks to any server speaking the de-facto chat-completion schema:
// POST {base_url}/chat/completions with {model, messages, temperature,
// max_tokens}. The API key is read from the named environment variable.
class HttpBackend : public Backend {
 public:
  HttpBackend(std::string base_url, std::string api_key_env);
  BackendResponse complete(const ChatRequest& req) override;

 private:
  std::string base_url_;
  std::string api_key_;
};

// --- response cache ---------------------------------------------------------

// Content-addressed response cache. Key = sha256(agent, model, temperature,
// prompt). Optionally persisted as one JSON record per key under `dir`.
class ResponseCache {
 public:
  explicit ResponseCache(std::optional<std::filesystem::path> dir);

  static std::string key_for(const ChatRequest& req);

  std::optional<BackendResponse> lookup(const std::string& key);
  void store(const std::string& key, const BackendResponse& response);

 private:
  std::optional<std::filesystem::path> dir_;
  std::unordered_map<std::string, BackendResponse> mem_;
  std::mutex mu_;
};

// --- client -----------------------------------------------------------------

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds initial_backoff{100};
  double multiplier = 2.0;
};

struct Pricing {
  double prompt_per_million = 0.0;      // currency units per 1M prompt tokens
  double completion_per_million = 0.0;  // currency units per 1M completion tokens
};

struct Accounting {
  long backend_calls = 0;
  long cache_hits = 0;
  long prompt_tokens = 0;
  long completion_tokens = 0;
  long latency_ms = 0;
  double estimated_cost = 0.0;

  Accounting& operator+=(const Accounting& other);
};

void to_json(Json& j, const Accounting& a);
void from_json(const Json& j, Accounting& a);

// Front door for all LLM traffic: cache lookup, transient-failure retries
// with exponential backoff, token/latency/cost accounting, and the one-re-ask
// policy for malformed binary or JSON outputs. Safe for concurrent use; the
// accounting and cache serialize internally.
class LlmClient {
 public:
  LlmClient(std::shared_ptr<Backend> backend, std::shared_ptr<ResponseCache> cache,
            RetryPolicy retry = {}, Pricing pricing = {});

  BackendResponse complete(const ChatRequest& req);

  // Binary agents: parse yes/no; on a parse failure re-ask the backend once
  // (bypassing the cache read), then fail hard.
  bool complete_binary(const ChatRequest& req);

  // Memory map components: strict JSON object of string values, one re-ask.
  Json complete_json_object(const ChatRequest& req);

  Accounting accounting() const;

 private:
  BackendResponse complete_impl(const ChatRequest& req, bool use_cache_read);
  BackendResponse call_with_retry(const ChatRequest& req);

  std::shared_ptr<Backend> backend_;
  std::shared_ptr<ResponseCache> cache_;
  RetryPolicy retry_;
  Pricing pricing_;
  Accounting acc_;
  mutable std::mutex mu_;
};

}  // namespace dagmt
