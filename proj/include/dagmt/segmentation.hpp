#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "dagmt/core.hpp"
#include "dagmt/gateway.hpp"
#include "dagmt/prompts.hpp"
#include "dagmt/tfidf.hpp"

namespace dagmt {

struct LlmSegmentationOptions {
  // Hard cap on sentences per discourse; when the current segment reaches it,
  // a boundary is forced without consulting the decision function.
  int max_sentences_per_discourse = 40;
};

// LLM-driven segmentation: the first sentence opens the current segment; each
// later sentence is kept in it while the decision function answers true, and
// opens the next segment when it answers false. The final segment is always
// flushed, so the output is a partition of the sentence indices. Issues
// exactly n-1 decision calls unless the length cap forces boundaries.
std::vector<Discourse> segment_llm(const Document& doc, LlmClient& client,
                                   const PromptLibrary& prompts, const LangPair& lang,
                                   const std::string& model, double temperature,
                                   const LlmSegmentationOptions& options = {});

// Draws a boundary count uniformly from {0..floor(n/3)}, then that many
// distinct boundary positions uniformly; deterministic for a fixed seed.
std::vector<Discourse> segment_random(const Document& doc, std::uint64_t seed);

class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual std::vector<double> embed(const std::string& text) = 0;
};

// Offline default embedder: TF-IDF vectors fitted over the document's own
// sentences.
class TfidfSentenceEmbedder : public Embedder {
 public:
  explicit TfidfSentenceEmbedder(const Document& doc);
  std::vector<double> embed(const std::string& text) override;

 private:
  std::unique_ptr<TfidfVectorizer> vectorizer_;
};

// Opens a new segment wherever the cosine similarity between consecutive
// sentence embeddings drops below `threshold`.
std::vector<Discourse> segment_semantic(const Document& doc, Embedder& embedder, double threshold);

// The whole document as one discourse; used by the translation-agent-only
// ablation.
std::vector<Discourse> segment_whole_document(const Document& doc);

// Turns sorted boundary positions (each in 1..n-1, meaning "a new segment
// starts at this sentence") into a segmentation.
std::vector<Discourse> segmentation_from_boundaries(int sentence_count,
                                                    const std::vector<int>& boundaries);

}  // namespace dagmt
