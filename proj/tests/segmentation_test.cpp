#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "dagmt/segmentation.hpp"
#include "support/helpers.hpp"

using namespace dagmt;
using testsupport::make_doc;
using testsupport::ScriptBuilder;

namespace {

const LangPair kLang{"en", "de"};
const PromptLibrary kPrompts;

std::vector<Discourse> run_llm(const Document& doc, const std::vector<bool>& decisions,
                               std::shared_ptr<MockBackend>* backend_out = nullptr,
                               int cap = 40) {
  auto backend = ScriptBuilder().segmentation(decisions).backend();
  if (backend_out) *backend_out = backend;
  LlmClient client(backend, nullptr);
  LlmSegmentationOptions options;
  options.max_sentences_per_discourse = cap;
  return segment_llm(doc, client, kPrompts, kLang, "mock-model", 0.1, options);
}

std::vector<std::pair<int, int>> spans(const std::vector<Discourse>& segments) {
  std::vector<std::pair<int, int>> out;
  for (const Discourse& d : segments) out.emplace_back(d.lo, d.hi);
  return out;
}

// Unit vectors whose consecutive cosines equal the requested values.
class AngleEmbedder : public Embedder {
 public:
  explicit AngleEmbedder(const std::vector<double>& consecutive_cosines) {
    double angle = 0.0;
    angles_.push_back(angle);
    for (std::size_t i = 0; i < consecutive_cosines.size(); ++i) {
      // alternate direction so angles stay in a sane range
      angle += (i % 2 == 0 ? 1.0 : -1.0) * std::acos(consecutive_cosines[i]);
      angles_.push_back(angle);
    }
  }
  std::vector<double> embed(const std::string&) override {
    const double a = angles_.at(next_++);
    return {std::cos(a), std::sin(a)};
  }

 private:
  std::vector<double> angles_;
  std::size_t next_ = 0;
};

class FailingEmbedder : public Embedder {
 public:
  std::vector<double> embed(const std::string&) override { throw Error("embedder down"); }
};

}  // namespace

TEST_CASE("llm segmentation closes a segment on false and reopens with that sentence") {
  const Document doc = make_doc({"S0.", "S1.", "S2.", "S3."});
  CHECK(spans(run_llm(doc, {true, false, true})) ==
        std::vector<std::pair<int, int>>{{0, 1}, {2, 3}});
}

TEST_CASE("llm segmentation: all true yields one segment, all false singletons") {
  const Document doc = make_doc({"S0.", "S1.", "S2.", "S3."});
  CHECK(spans(run_llm(doc, {true, true, true})) == std::vector<std::pair<int, int>>{{0, 3}});
  CHECK(spans(run_llm(doc, {false, false, false})) ==
        std::vector<std::pair<int, int>>{{0, 0}, {1, 1}, {2, 2}, {3, 3}});
}

TEST_CASE("llm segmentation issues exactly n-1 decision calls") {
  const Document doc = make_doc({"S0.", "S1.", "S2.", "S3.", "S4."});
  std::shared_ptr<MockBackend> backend;
  run_llm(doc, {true, false, true, false}, &backend);
  CHECK(backend->calls_for(AgentKind::Segmentation) == doc.size() - 1);
}

TEST_CASE("the per-discourse cap forces a boundary without a decision call") {
  const Document doc = make_doc({"S0.", "S1.", "S2.", "S3.", "S4."});
  std::shared_ptr<MockBackend> backend;
  // cap 2: segments close automatically at two sentences, so only the
  // decisions for s1 and s3 are ever consulted
  const auto segments = run_llm(doc, {true, true}, &backend, 2);
  CHECK(spans(segments) == std::vector<std::pair<int, int>>{{0, 1}, {2, 3}, {4, 4}});
  CHECK(backend->calls_for(AgentKind::Segmentation) == 2);
}

TEST_CASE("llm decision prompt contains the in-progress segment and the candidate") {
  const Document doc = make_doc({"Alpha.", "Beta.", "Gamma."});
  std::shared_ptr<MockBackend> backend;
  run_llm(doc, {true, true}, &backend);
  const auto log = backend->log();
  REQUIRE(log.size() == 2);
  CHECK(log[0].prompt.find("Current segment: Alpha.") != std::string::npos);
  CHECK(log[0].prompt.find("Next sentence: Beta.") != std::string::npos);
  // the second decision sees the grown segment, no lookahead
  CHECK(log[1].prompt.find("Current segment: Alpha. Beta.") != std::string::npos);
  CHECK(log[1].prompt.find("Next sentence: Gamma.") != std::string::npos);
}

TEST_CASE("random segmentation bounds the boundary count by floor(n/3)") {
  const Document doc9 = make_doc(std::vector<std::string>(9, "S."));
  std::set<int> seen;
  for (std::uint64_t seed = 0; seed < 3000; ++seed) {
    const auto segments = segment_random(doc9, seed);
    validate_segmentation(doc9, segments);
    const int boundaries = static_cast<int>(segments.size()) - 1;
    CHECK(boundaries <= 3);
    seen.insert(boundaries);
  }
  CHECK(seen == std::set<int>{0, 1, 2, 3});  // the draw spans the whole range
}

TEST_CASE("random segmentation on two sentences always returns one segment") {
  const Document doc = make_doc({"A.", "B."});
  for (std::uint64_t seed = 0; seed < 64; ++seed) {
    CHECK(spans(segment_random(doc, seed)) == std::vector<std::pair<int, int>>{{0, 1}});
  }
}

TEST_CASE("random segmentation is deterministic per seed") {
  std::mt19937_64 rng(11);
  const Document doc = testsupport::random_doc(rng, 6, 18);
  for (std::uint64_t seed : {0ull, 7ull, 123456789ull}) {
    CHECK(segment_random(doc, seed) == segment_random(doc, seed));
  }
}

TEST_CASE("semantic segmentation breaks exactly at sub-threshold gaps") {
  const Document doc = make_doc({"S0.", "S1.", "S2.", "S3."});
  AngleEmbedder embedder({0.9, 0.1, 0.9});
  CHECK(spans(segment_semantic(doc, embedder, 0.5)) ==
        std::vector<std::pair<int, int>>{{0, 1}, {2, 3}});

  AngleEmbedder all_high({0.9, 0.8, 0.9});
  CHECK(spans(segment_semantic(doc, all_high, 0.5)) ==
        std::vector<std::pair<int, int>>{{0, 3}});
}

TEST_CASE("identical sentences always form one segment") {
  const Document doc = make_doc({"Same text.", "Same text.", "Same text."});
  TfidfSentenceEmbedder embedder(doc);
  CHECK(spans(segment_semantic(doc, embedder, 0.9)) ==
        std::vector<std::pair<int, int>>{{0, 2}});
}

TEST_CASE("embedder failure propagates") {
  const Document doc = make_doc({"A.", "B."});
  FailingEmbedder failing;
  CHECK_THROWS_AS(segment_semantic(doc, failing, 0.5), Error);
}

TEST_CASE("whole-document segmentation is a single span") {
  const Document doc = make_doc({"A.", "B.", "C."});
  CHECK(spans(segment_whole_document(doc)) == std::vector<std::pair<int, int>>{{0, 2}});
}

TEST_CASE("every strategy produces a valid partition on random documents") {
  std::mt19937_64 rng(99);
  for (int round = 0; round < 120; ++round) {
    const Document doc = testsupport::random_doc(rng, 1, 14);

    validate_segmentation(doc, segment_random(doc, rng()));

    TfidfSentenceEmbedder embedder(doc);
    validate_segmentation(doc, segment_semantic(doc, embedder, 0.5));

    std::vector<bool> decisions;
    for (int i = 1; i < doc.size(); ++i) decisions.push_back(rng() % 2 == 0);
    validate_segmentation(doc, run_llm(doc, decisions));
  }
}
