#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dagmt/gateway.hpp"
#include "dagmt/json.hpp"
#include "dagmt/memory.hpp"
#include "dagmt/prompts.hpp"

namespace dagmt {

struct BackendConfig {
  std::string kind = "mock";  // mock | http
  std::string url;            // http only
  std::string mock_script;    // mock only
  std::string api_key_env = "DAGMT_API_KEY";
};

struct SegmentationConfig {
  std::string kind = "llm";  // llm | random | semantic
  std::uint64_t seed = 0;
  double threshold = 0.5;  // semantic
  int max_sentences_per_discourse = 40;
};

struct EdgeConfig {
  std::string kind = "llm";  // llm | chain | tfidf
  double tau = 0.3;
  int window = 0;  // 0 = unlimited
  int workers = 1;
};

struct AblationConfig {
  // full: all agents, all memory components
  // ta_only: one block, no segmentation/edge/memory calls
  // ta_da: segmentation only, empty memory, chain graph, no edge calls
  // ta_da_ma: segmentation + full memory over the chain graph
  // custom: segmentation/edge strategies and memory flags as configured
  std::string profile = "full";
  MemoryFlags memory;
};

struct MemoryOptionsConfig {
  int summary_cap = 5;
};

struct CorpusConfig {
  std::string format = "lines";  // lines | jsonl
  std::string source;            // source corpus path
  std::vector<std::string> references;  // reference corpus paths (lines only)
};

struct RunConfig {
  std::string model = "mock-model";
  double temperature = 0.1;
  std::string source_language = "en";
  std::string target_language = "de";
  BackendConfig backend;
  RetryPolicy retry;
  bool cache_enabled = true;
  std::string cache_dir;  // empty = <out>/cache
  SegmentationConfig segmentation;
  EdgeConfig edges;
  AblationConfig ablation;
  MemoryOptionsConfig memory;
  Pricing pricing;
  CorpusConfig corpus;
  int workers = 1;

  LangPair lang_pair() const { return LangPair{source_language, target_language}; }

  // Profile-resolved strategy views used by the pipeline.
  std::string effective_segmentation() const;  // "whole" | "llm" | "random" | "semantic"
  std::string effective_edges() const;         // "chain" | "llm" | "tfidf"
  MemoryFlags effective_memory() const;

  // Throws ConfigError naming the offending field path. Relative file paths
  // are resolved against base_dir.
  static RunConfig from_json(const Json& j, const std::filesystem::path& base_dir = ".");
  static RunConfig from_file(const std::filesystem::path& path);
  Json to_json() const;
};

}  // namespace dagmt
