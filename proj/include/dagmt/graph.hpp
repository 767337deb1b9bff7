#pragma once

#include <cstddef>
#include <vector>

#include "dagmt/core.hpp"
#include "dagmt/gateway.hpp"
#include "dagmt/prompts.hpp"

namespace dagmt {

struct EdgeAgentOptions {
  int window = 0;   // limit relevance queries to i - j <= window; 0 = unlimited
  int workers = 1;  // concurrent relevance queries; results applied in pair order
};

// Chain edges only: (i-1 -> i) for every i >= 1.
DiscourseGraph build_chain(const std::vector<Discourse>& segments);

// Chain edges plus an edge (j -> i) for every non-adjacent ordered pair the
// relevance function accepts. Relevance is queried exactly once per pair
// (j, i) with j < i-1, in ascending (i, j) order.
DiscourseGraph build_llm(const Document& doc, const std::vector<Discourse>& segments,
                         LlmClient& client, const PromptLibrary& prompts, const LangPair& lang,
                         const std::string& model, double temperature,
                         const EdgeAgentOptions& options = {});

// Chain edges plus an edge (j -> i) for every non-adjacent pair whose TF-IDF
// cosine similarity exceeds tau. TF-IDF is fitted over this document's
// segments only; all-zero vectors compare as similarity 0.
DiscourseGraph build_tfidf(const Document& doc, const std::vector<Discourse>& segments,
                           double tau);

// All j with (j -> i) in the edge set, ascending.
std::vector<int> predecessors(const DiscourseGraph& g, int node);

// Every directed path of node-count 2..max_len, without duplicates, in
// lexicographic order. Throws Error if more than max_paths paths exist.
std::vector<std::vector<int>> enumerate_paths(const DiscourseGraph& g, int max_len,
                                              std::size_t max_paths = 10'000'000);

}  // namespace dagmt
