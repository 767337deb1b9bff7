#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dagmt/config.hpp"
#include "dagmt/core.hpp"
#include "dagmt/gateway.hpp"
#include "dagmt/graph.hpp"
#include "dagmt/ingestion.hpp"
#include "dagmt/memory.hpp"
#include "dagmt/prompts.hpp"
#include "dagmt/segmentation.hpp"

namespace dagmt {

// Everything one pipeline run produces for a document. Persisted layout:
//   config.json, source.json, segmentation.json, graph.json,
//   memories/<i>.json, translations/<i>.txt, document.txt, accounting.json
struct RunRecord {
  std::string doc_id;
  std::string target_language;
  Document source;
  std::vector<Discourse> segmentation;
  DiscourseGraph graph;
  std::vector<std::optional<LocalMemory>> memories;  // per node; empty when ablated
  std::vector<Translation> translations;
  std::string document_text;
  Accounting accounting;

  // Writes whatever exists; used both for complete and partial (failed)
  // runs. Byte-deterministic for identical content.
  void save(const std::filesystem::path& dir) const;
  static RunRecord load(const std::filesystem::path& dir);
};

struct PipelineContext {
  std::shared_ptr<Backend> backend;
  std::shared_ptr<ResponseCache> cache;  // null when caching is disabled
  PromptLibrary prompts;
};

// Builds the backend (and cache, rooted at cache_dir when enabled) described
// by the config.
PipelineContext make_context(const RunConfig& cfg,
                             const std::optional<std::filesystem::path>& cache_dir);

// Renders the translation prompt from the discourse text and the non-empty
// incident-memory components, and returns the model output verbatim.
Translation translate_discourse(const Document& doc, const Discourse& d,
                                const LocalMemory& incident_memory, const LangPair& lang,
                                LlmClient& client, const PromptLibrary& prompts,
                                const std::string& model, double temperature);

// Full pipeline for one document: segment, build the graph, then walk nodes
// in index order aggregating predecessor memories, translating, and
// extracting this node's memory. Any stage error aborts the document with
// the stage and node identity attached; partial artifacts are persisted
// when persist_dir is set.
RunRecord run_pipeline(const Document& doc, const RunConfig& cfg, const PipelineContext& ctx,
                       const std::optional<std::filesystem::path>& persist_dir = std::nullopt);

struct DocumentOutcome {
  std::string doc_id;
  bool ok = false;
  std::string error;  // set when !ok
  Accounting accounting;
};

struct CorpusRunResult {
  std::vector<DocumentOutcome> documents;  // corpus order
  Accounting total;
  int failures = 0;
};

// Runs every corpus document through the pipeline with a worker pool,
// persisting one run directory per document under out_dir (written to a
// temporary directory first, renamed when the document finishes) plus
// config.json and summary.json at the top level.
CorpusRunResult run_corpus(const std::vector<CorpusEntry>& entries, const RunConfig& cfg,
                           const std::filesystem::path& out_dir);

// Directory-safe form of a doc id (non [A-Za-z0-9._-] replaced by '_').
std::string sanitize_doc_id(const std::string& doc_id);

}  // namespace dagmt
