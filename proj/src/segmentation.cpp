#include "dagmt/segmentation.hpp"

#include <algorithm>
#include <limits>
#include <random>

#include "dagmt/tfidf.hpp"

namespace dagmt {

namespace {

// Bounded draw with rejection sampling so results are pinned to the engine's
// standardized output stream (uniform_int_distribution varies across stdlibs).
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  if (bound == 0) return 0;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

}  // namespace

std::vector<Discourse> segmentation_from_boundaries(int sentence_count,
                                                    const std::vector<int>& boundaries) {
  std::vector<Discourse> segments;
  int lo = 0;
  int index = 0;
  for (int b : boundaries) {
    segments.push_back(Discourse{index++, lo, b - 1});
    lo = b;
  }
  segments.push_back(Discourse{index, lo, sentence_count - 1});
  return segments;
}

std::vector<Discourse> segment_llm(const Document& doc, LlmClient& client,
                                   const PromptLibrary& prompts, const LangPair& lang,
                                   const std::string& model, double temperature,
                                   const LlmSegmentationOptions& options) {
  validate_document(doc);
  const std::string joiner = joiner_for_language(doc.language);
  const PromptTemplate tpl = prompts.segmentation_decision(lang);

  std::vector<int> boundaries;
  int current_lo = 0;
  for (int i = 1; i < doc.size(); ++i) {
    bool keep;
    if (i - current_lo >= options.max_sentences_per_discourse) {
      keep = false;  // forced boundary, no decision call
    } else {
      const Discourse current{0, current_lo, i - 1};
      const std::string prompt =
          render(tpl, {{"current_segment", discourse_text(doc, current, joiner)},
                       {"candidate_sentence", doc.sentences[i].text}});
      keep = client.complete_binary(
          ChatRequest::make(AgentKind::Segmentation, prompt, model, temperature));
    }
    if (!keep) {
      boundaries.push_back(i);
      current_lo = i;
    }
  }
  return segmentation_from_boundaries(doc.size(), boundaries);
}

std::vector<Discourse> segment_random(const Document& doc, std::uint64_t seed) {
  validate_document(doc);
  const int n = doc.size();
  std::mt19937_64 rng(seed);

  const int max_boundaries = n / 3;
  const int k = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(max_boundaries) + 1));

  // Fisher-Yates over the candidate boundary positions 1..n-1, take the
  // first k.
  std::vector<int> candidates(n - 1);
  for (int i = 0; i < n - 1; ++i) candidates[i] = i + 1;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const std::size_t j =
        i + static_cast<std::size_t>(uniform_below(rng, candidates.size() - i));
    std::swap(candidates[i], candidates[j]);
  }
  std::vector<int> boundaries(candidates.begin(), candidates.begin() + k);
  std::sort(boundaries.begin(), boundaries.end());
  return segmentation_from_boundaries(n, boundaries);
}

TfidfSentenceEmbedder::TfidfSentenceEmbedder(const Document& doc) {
  std::vector<std::string> texts;
  texts.reserve(doc.sentences.size());
  for (const Sentence& s : doc.sentences) texts.push_back(s.text);
  vectorizer_ = std::make_unique<TfidfVectorizer>(texts);
}

std::vector<double> TfidfSentenceEmbedder::embed(const std::string& text) {
  return vectorizer_->transform(text);
}

std::vector<Discourse> segment_semantic(const Document& doc, Embedder& embedder,
                                        double threshold) {
  validate_document(doc);
  std::vector<int> boundaries;
  std::vector<double> prev = embedder.embed(doc.sentences[0].text);
  for (int i = 1; i < doc.size(); ++i) {
    std::vector<double> cur = embedder.embed(doc.sentences[i].text);
    if (TfidfVectorizer::cosine(prev, cur) < threshold) boundaries.push_back(i);
    prev = std::move(cur);
  }
  return segmentation_from_boundaries(doc.size(), boundaries);
}

std::vector<Discourse> segment_whole_document(const Document& doc) {
  validate_document(doc);
  return {Discourse{0, 0, doc.size() - 1}};
}

}  // namespace dagmt
