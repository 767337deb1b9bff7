#include "dagmt/graph.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "dagmt/tfidf.hpp"

namespace dagmt {

namespace {

DiscourseGraph chain_skeleton(const std::vector<Discourse>& segments) {
  DiscourseGraph g;
  g.nodes = segments;
  for (std::size_t i = 1; i < segments.size(); ++i) {
    g.edges.emplace(static_cast<int>(i) - 1, static_cast<int>(i));
  }
  return g;
}

// Non-adjacent ordered pairs (j, i), j < i-1, in ascending (i, j) order,
// optionally windowed.
std::vector<std::pair<int, int>> candidate_pairs(int node_count, int window) {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 2; i < node_count; ++i) {
    for (int j = 0; j < i - 1; ++j) {
      if (window > 0 && i - j > window) continue;
      pairs.emplace_back(j, i);
    }
  }
  return pairs;
}

}  // namespace

DiscourseGraph build_chain(const std::vector<Discourse>& segments) {
  return chain_skeleton(segments);
}

DiscourseGraph build_llm(const Document& doc, const std::vector<Discourse>& segments,
                         LlmClient& client, const PromptLibrary& prompts, const LangPair& lang,
                         const std::string& model, double temperature,
                         const EdgeAgentOptions& options) {
  validate_segmentation(doc, segments);
  DiscourseGraph g = chain_skeleton(segments);

  const std::string joiner = joiner_for_language(doc.language);
  const PromptTemplate tpl = prompts.edge_relevance(lang);
  const std::vector<std::pair<int, int>> pairs =
      candidate_pairs(g.node_count(), options.window);

  auto query = [&](const std::pair<int, int>& pair) {
    const auto [j, i] = pair;
    try {
      const std::string prompt =
          render(tpl, {{"earlier_discourse", discourse_text(doc, segments[j], joiner)},
                       {"later_discourse", discourse_text(doc, segments[i], joiner)}});
      return client.complete_binary(
          ChatRequest::make(AgentKind::Edge, prompt, model, temperature));
    } catch (const Error& e) {
      throw Error("edge relevance query (" + std::to_string(j) + "->" + std::to_string(i) +
                  "): " + e.what());
    }
  };

  std::vector<char> relevant(pairs.size(), 0);
  const int workers = std::max(1, options.workers);
  if (workers == 1 || pairs.size() <= 1) {
    for (std::size_t p = 0; p < pairs.size(); ++p) relevant[p] = query(pairs[p]) ? 1 : 0;
  } else {
    // Queries are independent; results land in slots indexed by the pair
    // list, so the edge set is deterministic regardless of arrival order.
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> failures(workers);
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) {
      threads.emplace_back([&, w] {
        for (;;) {
          const std::size_t p = next.fetch_add(1);
          if (p >= pairs.size()) return;
          try {
            relevant[p] = query(pairs[p]) ? 1 : 0;
          } catch (...) {
            failures[w] = std::current_exception();
            return;
          }
        }
      });
    }
    for (auto& t : threads) t.join();
    for (const auto& failure : failures) {
      if (failure) std::rethrow_exception(failure);
    }
  }

  for (std::size_t p = 0; p < pairs.size(); ++p) {
    if (relevant[p]) g.edges.emplace(pairs[p].first, pairs[p].second);
  }
  return g;
}

DiscourseGraph build_tfidf(const Document& doc, const std::vector<Discourse>& segments,
                           double tau) {
  validate_segmentation(doc, segments);
  if (tau <= 0.0 || tau >= 1.0) throw Error("tfidf tau must lie in (0,1)");
  DiscourseGraph g = chain_skeleton(segments);

  const std::string joiner = joiner_for_language(doc.language);
  std::vector<std::string> texts;
  texts.reserve(segments.size());
  for (const Discourse& d : segments) texts.push_back(discourse_text(doc, d, joiner));

  TfidfVectorizer vectorizer(texts);
  std::vector<std::vector<double>> vectors;
  vectors.reserve(texts.size());
  for (const std::string& t : texts) vectors.push_back(vectorizer.transform(t));

  for (const auto& [j, i] : candidate_pairs(g.node_count(), 0)) {
    if (TfidfVectorizer::cosine(vectors[j], vectors[i]) > tau) g.edges.emplace(j, i);
  }
  return g;
}

std::vector<int> predecessors(const DiscourseGraph& g, int node) {
  std::vector<int> preds;
  for (const auto& [from, to] : g.edges) {
    if (to == node) preds.push_back(from);
  }
  std::sort(preds.begin(), preds.end());
  return preds;
}

std::vector<std::vector<int>> enumerate_paths(const DiscourseGraph& g, int max_len,
                                              std::size_t max_paths) {
  if (max_len < 2) throw Error("enumerate_paths requires max_len >= 2");

  // successor adjacency, ascending for lexicographic output
  std::vector<std::vector<int>> succ(g.node_count());
  for (const auto& [from, to] : g.edges) succ[from].push_back(to);
  for (auto& s : succ) std::sort(s.begin(), s.end());

  std::vector<std::vector<int>> paths;
  std::vector<int> current;

  auto extend = [&](auto&& self, int node) -> void {
    current.push_back(node);
    if (current.size() >= 2) {
      if (paths.size() >= max_paths) throw Error("path enumeration exceeded max_paths");
      paths.push_back(current);
    }
    if (static_cast<int>(current.size()) < max_len) {
      for (int next : succ[node]) self(self, next);
    }
    current.pop_back();
  };

  for (int start = 0; start < g.node_count(); ++start) extend(extend, start);
  return paths;
}

}  // namespace dagmt
