#include "dagmt/config.hpp"

#include <fstream>
#include <set>

namespace dagmt {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ConfigError(path + ": " + msg);
}

void check_known_keys(const Json& obj, const std::string& path,
                      const std::set<std::string>& known) {
  for (const auto& [key, value] : obj.items()) {
    if (!known.count(key)) fail(path.empty() ? key : path + "." + key, "unknown field");
  }
}

template <typename T>
T get_field(const Json& obj, const std::string& path, const std::string& key, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const Json::exception&) {
    fail(path.empty() ? key : path + "." + key, "has the wrong type");
  }
}

std::string resolve_path(const std::string& p, const std::filesystem::path& base) {
  if (p.empty()) return p;
  std::filesystem::path fp(p);
  if (fp.is_absolute()) return fp.string();
  return (base / fp).lexically_normal().string();
}

void check_one_of(const std::string& path, const std::string& value,
                  const std::set<std::string>& allowed) {
  if (!allowed.count(value)) {
    std::string opts;
    for (const auto& a : allowed) opts += (opts.empty() ? "" : ", ") + a;
    fail(path, "value '" + value + "' is not one of {" + opts + "}");
  }
}

}  // namespace

std::string RunConfig::effective_segmentation() const {
  if (ablation.profile == "ta_only") return "whole";
  return segmentation.kind;
}

std::string RunConfig::effective_edges() const {
  if (ablation.profile == "full" || ablation.profile == "custom") return edges.kind;
  return "chain";  // ta_only / ta_da / ta_da_ma never call the edge agent
}

MemoryFlags RunConfig::effective_memory() const {
  if (ablation.profile == "ta_only" || ablation.profile == "ta_da") return MemoryFlags::none();
  if (ablation.profile == "custom") return ablation.memory;
  return MemoryFlags{};  // full / ta_da_ma use every component
}

RunConfig RunConfig::from_json(const Json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");
  check_known_keys(j, "", {"model", "temperature", "source_language", "target_language",
                           "backend", "retry", "cache", "segmentation", "edges", "ablation",
                           "memory", "pricing", "corpus", "workers"});

  RunConfig cfg;
  cfg.model = get_field<std::string>(j, "", "model", cfg.model);
  cfg.temperature = get_field<double>(j, "", "temperature", cfg.temperature);
  if (cfg.temperature < 0.0 || cfg.temperature > 1.0) fail("temperature", "must lie in [0,1]");
  cfg.source_language = get_field<std::string>(j, "", "source_language", cfg.source_language);
  cfg.target_language = get_field<std::string>(j, "", "target_language", cfg.target_language);
  if (cfg.source_language.empty()) fail("source_language", "must be non-empty");
  if (cfg.target_language.empty()) fail("target_language", "must be non-empty");

  if (j.contains("backend")) {
    const Json& b = j.at("backend");
    check_known_keys(b, "backend", {"kind", "url", "mock_script", "api_key_env"});
    cfg.backend.kind = get_field<std::string>(b, "backend", "kind", cfg.backend.kind);
    check_one_of("backend.kind", cfg.backend.kind, {"mock", "http"});
    cfg.backend.url = get_field<std::string>(b, "backend", "url", cfg.backend.url);
    cfg.backend.mock_script =
        resolve_path(get_field<std::string>(b, "backend", "mock_script", cfg.backend.mock_script),
                     base_dir);
    cfg.backend.api_key_env =
        get_field<std::string>(b, "backend", "api_key_env", cfg.backend.api_key_env);
    if (cfg.backend.kind == "http" && cfg.backend.url.empty()) {
      fail("backend.url", "required for the http backend");
    }
    if (cfg.backend.kind == "mock" && cfg.backend.mock_script.empty()) {
      fail("backend.mock_script", "required for the mock backend");
    }
  }

  if (j.contains("retry")) {
    const Json& r = j.at("retry");
    check_known_keys(r, "retry", {"max_attempts", "initial_backoff_ms", "multiplier"});
    cfg.retry.max_attempts = get_field<int>(r, "retry", "max_attempts", cfg.retry.max_attempts);
    if (cfg.retry.max_attempts < 1) fail("retry.max_attempts", "must be >= 1");
    cfg.retry.initial_backoff = std::chrono::milliseconds(
        get_field<long>(r, "retry", "initial_backoff_ms",
                        static_cast<long>(cfg.retry.initial_backoff.count())));
    cfg.retry.multiplier = get_field<double>(r, "retry", "multiplier", cfg.retry.multiplier);
  }

  if (j.contains("cache")) {
    const Json& c = j.at("cache");
    check_known_keys(c, "cache", {"enabled", "dir"});
    cfg.cache_enabled = get_field<bool>(c, "cache", "enabled", cfg.cache_enabled);
    cfg.cache_dir = resolve_path(get_field<std::string>(c, "cache", "dir", cfg.cache_dir),
                                 base_dir);
  }

  if (j.contains("segmentation")) {
    const Json& s = j.at("segmentation");
    check_known_keys(s, "segmentation",
                     {"kind", "seed", "threshold", "max_sentences_per_discourse"});
    cfg.segmentation.kind = get_field<std::string>(s, "segmentation", "kind", cfg.segmentation.kind);
    check_one_of("segmentation.kind", cfg.segmentation.kind, {"llm", "random", "semantic"});
    cfg.segmentation.seed =
        get_field<std::uint64_t>(s, "segmentation", "seed", cfg.segmentation.seed);
    cfg.segmentation.threshold =
        get_field<double>(s, "segmentation", "threshold", cfg.segmentation.threshold);
    if (cfg.segmentation.threshold <= 0.0 || cfg.segmentation.threshold >= 1.0) {
      fail("segmentation.threshold", "must lie in (0,1)");
    }
    cfg.segmentation.max_sentences_per_discourse =
        get_field<int>(s, "segmentation", "max_sentences_per_discourse",
                       cfg.segmentation.max_sentences_per_discourse);
    if (cfg.segmentation.max_sentences_per_discourse < 1) {
      fail("segmentation.max_sentences_per_discourse", "must be >= 1");
    }
  }

  if (j.contains("edges")) {
    const Json& e = j.at("edges");
    check_known_keys(e, "edges", {"kind", "tau", "window", "workers"});
    cfg.edges.kind = get_field<std::string>(e, "edges", "kind", cfg.edges.kind);
    check_one_of("edges.kind", cfg.edges.kind, {"llm", "chain", "tfidf"});
    cfg.edges.tau = get_field<double>(e, "edges", "tau", cfg.edges.tau);
    if (cfg.edges.tau <= 0.0 || cfg.edges.tau >= 1.0) fail("edges.tau", "must lie in (0,1)");
    cfg.edges.window = get_field<int>(e, "edges", "window", cfg.edges.window);
    if (cfg.edges.window < 0) fail("edges.window", "must be >= 0");
    cfg.edges.workers = get_field<int>(e, "edges", "workers", cfg.edges.workers);
    if (cfg.edges.workers < 1) fail("edges.workers", "must be >= 1");
  }

  if (j.contains("ablation")) {
    const Json& a = j.at("ablation");
    check_known_keys(a, "ablation", {"profile", "memory"});
    cfg.ablation.profile = get_field<std::string>(a, "ablation", "profile", cfg.ablation.profile);
    check_one_of("ablation.profile", cfg.ablation.profile,
                 {"full", "ta_only", "ta_da", "ta_da_ma", "custom"});
    if (a.contains("memory")) {
      const Json& m = a.at("memory");
      check_known_keys(m, "ablation.memory",
                       {"noun_pronoun", "entities", "phrases", "connectives", "summary"});
      cfg.ablation.memory.noun_pronoun =
          get_field<bool>(m, "ablation.memory", "noun_pronoun", true);
      cfg.ablation.memory.entities = get_field<bool>(m, "ablation.memory", "entities", true);
      cfg.ablation.memory.phrases = get_field<bool>(m, "ablation.memory", "phrases", true);
      cfg.ablation.memory.connectives =
          get_field<bool>(m, "ablation.memory", "connectives", true);
      cfg.ablation.memory.summary = get_field<bool>(m, "ablation.memory", "summary", true);
    }
  }

  if (j.contains("memory")) {
    const Json& m = j.at("memory");
    check_known_keys(m, "memory", {"summary_cap"});
    cfg.memory.summary_cap = get_field<int>(m, "memory", "summary_cap", cfg.memory.summary_cap);
    if (cfg.memory.summary_cap < 1) fail("memory.summary_cap", "must be >= 1");
  }

  if (j.contains("pricing")) {
    const Json& p = j.at("pricing");
    check_known_keys(p, "pricing", {"prompt_per_million", "completion_per_million"});
    cfg.pricing.prompt_per_million =
        get_field<double>(p, "pricing", "prompt_per_million", cfg.pricing.prompt_per_million);
    cfg.pricing.completion_per_million = get_field<double>(
        p, "pricing", "completion_per_million", cfg.pricing.completion_per_million);
  }

  if (j.contains("corpus")) {
    const Json& c = j.at("corpus");
    check_known_keys(c, "corpus", {"format", "source", "references"});
    cfg.corpus.format = get_field<std::string>(c, "corpus", "format", cfg.corpus.format);
    check_one_of("corpus.format", cfg.corpus.format, {"lines", "jsonl"});
    cfg.corpus.source =
        resolve_path(get_field<std::string>(c, "corpus", "source", cfg.corpus.source), base_dir);
    cfg.corpus.references =
        get_field<std::vector<std::string>>(c, "corpus", "references", cfg.corpus.references);
    for (std::string& r : cfg.corpus.references) r = resolve_path(r, base_dir);
  }

  cfg.workers = get_field<int>(j, "", "workers", cfg.workers);
  if (cfg.workers < 1) fail("workers", "must be >= 1");
  return cfg;
}

RunConfig RunConfig::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  Json j = Json::parse(in, nullptr, false, true);
  if (j.is_discarded()) throw ConfigError("config file " + path.string() + " is not valid JSON");
  return from_json(j, path.has_parent_path() ? path.parent_path() : ".");
}

Json RunConfig::to_json() const {
  return Json{
      {"model", model},
      {"temperature", temperature},
      {"source_language", source_language},
      {"target_language", target_language},
      {"backend",
       Json{{"kind", backend.kind},
            {"url", backend.url},
            {"mock_script", backend.mock_script},
            {"api_key_env", backend.api_key_env}}},
      {"retry",
       Json{{"max_attempts", retry.max_attempts},
            {"initial_backoff_ms", static_cast<long>(retry.initial_backoff.count())},
            {"multiplier", retry.multiplier}}},
      {"cache", Json{{"enabled", cache_enabled}, {"dir", cache_dir}}},
      {"segmentation",
       Json{{"kind", segmentation.kind},
            {"seed", segmentation.seed},
            {"threshold", segmentation.threshold},
            {"max_sentences_per_discourse", segmentation.max_sentences_per_discourse}}},
      {"edges",
       Json{{"kind", edges.kind},
            {"tau", edges.tau},
            {"window", edges.window},
            {"workers", edges.workers}}},
      {"ablation",
       Json{{"profile", ablation.profile},
            {"memory",
             Json{{"noun_pronoun", ablation.memory.noun_pronoun},
                  {"entities", ablation.memory.entities},
                  {"phrases", ablation.memory.phrases},
                  {"connectives", ablation.memory.connectives},
                  {"summary", ablation.memory.summary}}}}},
      {"memory", Json{{"summary_cap", memory.summary_cap}}},
      {"pricing",
       Json{{"prompt_per_million", pricing.prompt_per_million},
            {"completion_per_million", pricing.completion_per_million}}},
      {"corpus",
       Json{{"format", corpus.format},
            {"source", corpus.source},
            {"references", corpus.references}}},
      {"workers", workers},
  };
}

}  // namespace dagmt
