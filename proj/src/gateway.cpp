#include "dagmt/gateway.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "dagmt/sha256.hpp"

namespace dagmt {

namespace {

long whitespace_token_count(const std::string& s) {
  long count = 0;
  bool in_token = false;
  for (char c : s) {
    const bool space = std::isspace(static_cast<unsigned char>(c)) != 0;
    if (!space && !in_token) ++count;
    in_token = !space;
  }
  return count;
}

std::string format_temperature(double t) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", t);
  return buf;
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

ChatRequest ChatRequest::make(AgentKind agent, std::string prompt, std::string model,
                              double temperature) {
  ChatRequest req;
  req.agent = agent;
  req.prompt = std::move(prompt);
  req.model = std::move(model);
  req.temperature = temperature;
  req.max_output_tokens = default_max_output_tokens(agent);
  return req;
}

void ChatRequest::validate() const {
  if (prompt.empty()) throw Error("chat request has an empty prompt");
  if (temperature < 0.0 || temperature > 1.0) {
    throw Error("temperature " + format_temperature(temperature) + " outside [0,1]");
  }
  const int expected = default_max_output_tokens(agent);
  if (max_output_tokens != expected) {
    throw Error("agent " + agent_kind_name(agent) + " must use max_output_tokens=" +
                std::to_string(expected));
  }
}

bool parse_binary(const std::string& text) {
  std::string word;
  for (char c : text) {
    if (std::isalpha(static_cast<unsigned char>(c))) {
      word.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    } else if (!word.empty()) {
      break;
    }
  }
  if (word == "yes" || word == "true") return true;
  if (word == "no" || word == "false") return false;
  throw ParseError("expected a yes/no answer, got \"" + text + "\"");
}

// --- MockBackend -------------------------------------------------------------

MockBackend::MockBackend(const Json& script) {
  if (!script.is_array()) throw MockScriptError("mock script must be a JSON array");
  for (const auto& entry : script) {
    Rule rule;
    const Json& match = entry.at("match");
    if (match.contains("prompt_sha256")) {
      rule.prompt_sha256 = match.at("prompt_sha256").get<std::string>();
    } else {
      rule.agent = match.at("agent").get<std::string>();
      rule.ordinal = match.at("ordinal").get<long>();
    }
    rule.response = entry.at("response").get<std::string>();
    rules_.push_back(std::move(rule));
  }
}

std::shared_ptr<MockBackend> MockBackend::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MockScriptError("cannot open mock script " + path.string());
  Json script = Json::parse(in, nullptr, true, true);
  return std::make_shared<MockBackend>(script);
}

BackendResponse MockBackend::complete(const ChatRequest& req) {
  req.validate();
  const std::string kind = agent_kind_name(req.agent);
  const std::string hash = sha256_hex(req.prompt);

  std::lock_guard<std::mutex> lock(mu_);
  const long ordinal = counters_[kind]++;
  log_.push_back(CallRecord{req.agent, ordinal, req.prompt});

  for (const Rule& rule : rules_) {
    const bool by_hash = rule.prompt_sha256 && *rule.prompt_sha256 == hash;
    const bool by_ordinal = rule.agent && *rule.agent == kind && rule.ordinal &&
                            *rule.ordinal == ordinal;
    if (by_hash || by_ordinal) {
      BackendResponse resp;
      resp.text = rule.response;
      resp.prompt_tokens = whitespace_token_count(req.prompt);
      resp.completion_tokens = whitespace_token_count(rule.response);
      resp.latency = std::chrono::milliseconds(0);
      return resp;
    }
  }
  throw MockScriptError("no scripted response for agent=" + kind + " ordinal=" +
                        std::to_string(ordinal) + " prompt_sha256=" + hash);
}

std::vector<CallRecord> MockBackend::log() const {
  std::lock_guard<std::mutex> lock(mu_);
  return log_;
}

long MockBackend::calls_for(AgentKind kind) const {
  std::lock_guard<std::mutex> lock(mu_);
  long n = 0;
  for (const CallRecord& r : log_) {
    if (r.agent == kind) ++n;
  }
  return n;
}

long MockBackend::memory_calls() const {
  std::lock_guard<std::mutex> lock(mu_);
  long n = 0;
  for (const CallRecord& r : log_) {
    if (is_memory_agent(r.agent)) ++n;
  }
  return n;
}

long MockBackend::total_calls() const {
  std::lock_guard<std::mutex> lock(mu_);
  return static_cast<long>(log_.size());
}

BackendResponse UnreachableBackend::complete(const ChatRequest&) {
  ++attempts_;
  throw TransportError("endpoint unreachable");
}

// --- HttpBackend -------------------------------------------------------------

HttpBackend::HttpBackend(std::string base_url, std::string api_key_env)
    : base_url_(std::move(base_url)) {
  while (!base_url_.empty() && base_url_.back() == '/') base_url_.pop_back();
  if (!api_key_env.empty()) {
    if (const char* key = std::getenv(api_key_env.c_str())) api_key_ = key;
  }
}

BackendResponse HttpBackend::complete(const ChatRequest& req) {
  req.validate();

  std::string origin = base_url_;
  std::string prefix;
  const std::size_t scheme = base_url_.find("://");
  if (scheme != std::string::npos) {
    const std::size_t slash = base_url_.find('/', scheme + 3);
    if (slash != std::string::npos) {
      origin = base_url_.substr(0, slash);
      prefix = base_url_.substr(slash);
    }
  }

  httplib::Client cli(origin);
  cli.set_connection_timeout(10, 0);
  cli.set_read_timeout(120, 0);
  httplib::Headers headers;
  if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

  Json body{{"model", req.model},
            {"messages", Json::array({Json{{"role", "user"}, {"content", req.prompt}}})},
            {"temperature", req.temperature},
            {"max_tokens", req.max_output_tokens}};

  const auto start = std::chrono::steady_clock::now();
  httplib::Result res = cli.Post(prefix + "/chat/completions", headers, body.dump(),
                                 "application/json");
  const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - start);

  if (!res) {
    throw TransportError("POST " + base_url_ + "/chat/completions failed: " +
                         httplib::to_string(res.error()));
  }
  if (res->status == 401 || res->status == 403) {
    throw AuthError("backend rejected credentials (HTTP " + std::to_string(res->status) + ")");
  }
  if (res->status == 429 || res->status >= 500) {
    throw TransportError("backend transient failure (HTTP " + std::to_string(res->status) + ")");
  }
  if (res->status != 200) {
    throw PayloadError("backend returned HTTP " + std::to_string(res->status) + ": " + res->body);
  }

  Json payload = Json::parse(res->body, nullptr, false);
  if (payload.is_discarded()) throw PayloadError("backend returned malformed JSON");
  try {
    BackendResponse out;
    out.text = payload.at("choices").at(0).at("message").at("content").get<std::string>();
    if (payload.contains("usage")) {
      const Json& usage = payload["usage"];
      out.prompt_tokens = usage.value("prompt_tokens", 0L);
      out.completion_tokens = usage.value("completion_tokens", 0L);
    }
    out.latency = elapsed;
    return out;
  } catch (const Json::exception& e) {
    throw PayloadError(std::string("backend payload missing fields: ") + e.what());
  }
}

// --- ResponseCache -----------------------------------------------------------

ResponseCache::ResponseCache(std::optional<std::filesystem::path> dir) : dir_(std::move(dir)) {
  if (dir_) std::filesystem::create_directories(*dir_);
}

std::string ResponseCache::key_for(const ChatRequest& req) {
  std::string material = agent_kind_name(req.agent);
  material.push_back('\x1f');
  material += req.model;
  material.push_back('\x1f');
  material += format_temperature(req.temperature);
  material.push_back('\x1f');
  material += req.prompt;
  return sha256_hex(material);
}

std::optional<BackendResponse> ResponseCache::lookup(const std::string& key) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = mem_.find(key);
  if (it != mem_.end()) return it->second;
  if (!dir_) return std::nullopt;
  const std::filesystem::path file = *dir_ / (key + ".json");
  std::ifstream in(file);
  if (!in) return std::nullopt;
  Json record = Json::parse(in, nullptr, false);
  if (record.is_discarded()) return std::nullopt;
  BackendResponse resp;
  resp.text = record.at("response").at("text").get<std::string>();
  resp.prompt_tokens = record.at("response").at("prompt_tokens").get<long>();
  resp.completion_tokens = record.at("response").at("completion_tokens").get<long>();
  resp.latency = std::chrono::milliseconds(record.at("response").at("latency_ms").get<long>());
  mem_[key] = resp;
  return resp;
}

void ResponseCache::store(const std::string& key, const BackendResponse& response) {
  std::lock_guard<std::mutex> lock(mu_);
  mem_[key] = response;
  if (!dir_) return;
  Json record{{"key", key},
              {"response",
               Json{{"text", response.text},
                    {"prompt_tokens", response.prompt_tokens},
                    {"completion_tokens", response.completion_tokens},
                    {"latency_ms", static_cast<long>(response.latency.count())}}}};
  atomic_write(*dir_ / (key + ".json"), record.dump(2) + "\n");
}

// --- Accounting --------------------------------------------------------------

Accounting& Accounting::operator+=(const Accounting& other) {
  backend_calls += other.backend_calls;
  cache_hits += other.cache_hits;
  prompt_tokens += other.prompt_tokens;
  completion_tokens += other.completion_tokens;
  latency_ms += other.latency_ms;
  estimated_cost += other.estimated_cost;
  return *this;
}

void to_json(Json& j, const Accounting& a) {
  j = Json{{"backend_calls", a.backend_calls},
           {"cache_hits", a.cache_hits},
           {"prompt_tokens", a.prompt_tokens},
           {"completion_tokens", a.completion_tokens},
           {"latency_ms", a.latency_ms},
           {"estimated_cost", a.estimated_cost}};
}

void from_json(const Json& j, Accounting& a) {
  a.backend_calls = j.at("backend_calls").get<long>();
  a.cache_hits = j.at("cache_hits").get<long>();
  a.prompt_tokens = j.at("prompt_tokens").get<long>();
  a.completion_tokens = j.at("completion_tokens").get<long>();
  a.latency_ms = j.at("latency_ms").get<long>();
  a.estimated_cost = j.at("estimated_cost").get<double>();
}

// --- LlmClient ---------------------------------------------------------------

LlmClient::LlmClient(std::shared_ptr<Backend> backend, std::shared_ptr<ResponseCache> cache,
                     RetryPolicy retry, Pricing pricing)
    : backend_(std::move(backend)), cache_(std::move(cache)), retry_(retry), pricing_(pricing) {
  if (!backend_) throw Error("LlmClient requires a backend");
}

BackendResponse LlmClient::call_with_retry(const ChatRequest& req) {
  std::chrono::milliseconds backoff = retry_.initial_backoff;
  for (int attempt = 1;; ++attempt) {
    try {
      return backend_->complete(req);
    } catch (const TransportError& e) {
      if (attempt >= retry_.max_attempts) {
        throw TransportError(std::string(e.what()) + " (after " + std::to_string(attempt) +
                             " attempts)");
      }
      std::this_thread::sleep_for(backoff);
      backoff = std::chrono::milliseconds(
          static_cast<long>(static_cast<double>(backoff.count()) * retry_.multiplier));
    }
  }
}

BackendResponse LlmClient::complete_impl(const ChatRequest& req, bool use_cache_read) {
  req.validate();
  const std::string key = cache_ ? ResponseCache::key_for(req) : std::string();

  if (cache_ && use_cache_read) {
    if (auto hit = cache_->lookup(key)) {
      std::lock_guard<std::mutex> lock(mu_);
      ++acc_.cache_hits;
      return *hit;
    }
  }

  BackendResponse resp = call_with_retry(req);
  {
    std::lock_guard<std::mutex> lock(mu_);
    ++acc_.backend_calls;
    acc_.prompt_tokens += resp.prompt_tokens;
    acc_.completion_tokens += resp.completion_tokens;
    acc_.latency_ms += static_cast<long>(resp.latency.count());
    acc_.estimated_cost +=
        (static_cast<double>(resp.prompt_tokens) * pricing_.prompt_per_million +
         static_cast<double>(resp.completion_tokens) * pricing_.completion_per_million) /
        1e6;
  }
  if (cache_) cache_->store(key, resp);
  return resp;
}

BackendResponse LlmClient::complete(const ChatRequest& req) { return complete_impl(req, true); }

bool LlmClient::complete_binary(const ChatRequest& req) {
  const BackendResponse first = complete_impl(req, true);
  try {
    return parse_binary(first.text);
  } catch (const ParseError&) {
    // One re-ask, bypassing the cache read so the same malformed answer is
    // not replayed.
    const BackendResponse second = complete_impl(req, false);
    return parse_binary(second.text);
  }
}

namespace {

Json parse_flat_string_object(const std::string& text) {
  Json parsed = Json::parse(text, nullptr, false);
  if (parsed.is_discarded() || !parsed.is_object()) {
    throw ParseError("expected a flat JSON object, got \"" + text + "\"");
  }
  for (const auto& [key, value] : parsed.items()) {
    if (key.empty()) throw ParseError("JSON object contains an empty key");
    if (!value.is_string()) {
      throw ParseError("JSON object value for \"" + key + "\" is not a string");
    }
  }
  return parsed;
}

}  // namespace

Json LlmClient::complete_json_object(const ChatRequest& req) {
  const BackendResponse first = complete_impl(req, true);
  try {
    return parse_flat_string_object(first.text);
  } catch (const ParseError&) {
    const BackendResponse second = complete_impl(req, false);
    return parse_flat_string_object(second.text);
  }
}

Accounting LlmClient::accounting() const {
  std::lock_guard<std::mutex> lock(mu_);
  return acc_;
}

}  // namespace dagmt
