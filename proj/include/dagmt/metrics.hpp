#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dagmt/core.hpp"
#include "dagmt/json.hpp"
#include "dagmt/pipeline.hpp"

namespace dagmt {

// --- document-level BLEU ------------------------------------------------

// Whitespace tokens for space-delimited languages, one token per codepoint
// (whitespace skipped) for zh/ja.
std::vector<std::string> bleu_tokenize(const std::string& text, const std::string& lang);

// Corpus-level BLEU with each added pair treated as one unit: n-grams 1..4,
// reference-clipped counts, brevity penalty against the closest reference
// length (ties resolved to the shorter). Zero n-gram counts are smoothed as
// 0.1 pseudo-counts; orders the hypothesis is too short to form are dropped
// from the geometric mean.
class BleuAccumulator {
 public:
  void add(const std::string& hypothesis, const std::vector<std::string>& references,
           const std::string& lang);
  double score() const;  // [0,100]; throws UndefinedMetricError when nothing was added

 private:
  long matched_[4] = {0, 0, 0, 0};
  long total_[4] = {0, 0, 0, 0};
  long hyp_len_ = 0;
  long ref_len_ = 0;
  bool any_ = false;
};

// Whole documents scored as single units.
double d_bleu(const std::string& hypothesis_doc, const std::vector<std::string>& reference_docs,
              const std::string& lang);

// --- terminology consistency (cTT) ---------------------------------------

struct TermLexicon {
  struct Entry {
    std::string term;
    std::vector<std::string> gold_variants;
  };
  std::vector<Entry> terms;

  static TermLexicon from_json(const Json& j);
  static TermLexicon from_file(const std::filesystem::path& path);
};

// Occurrence translations per term, ascending discourse order.
struct TermOccurrences {
  std::vector<std::pair<std::string, std::vector<std::string>>> per_term;
};

// Mean over terms with k >= 2 occurrences of (equal unordered pairs)/C(k,2).
// Throws UndefinedMetricError when no term is scorable.
double ctt_score(const TermOccurrences& occurrences);

// Recovers each term occurrence's translation from the run itself: the
// extracting node's entity/phrase memory binding when present, otherwise the
// first lexicon gold variant found in that node's translation.
TermOccurrences recover_term_occurrences(const RunRecord& run, const TermLexicon& lexicon);

double ctt(const RunRecord& run, const TermLexicon& lexicon);

// --- zero-pronoun accuracy (aZPT) -----------------------------------------

struct ZpAnnotation {
  struct Record {
    std::optional<int> discourse_index;  // exactly one locator must be set
    std::optional<int> sentence_index;
    std::vector<std::string> gold;
  };
  std::vector<Record> records;

  static ZpAnnotation from_json(const Json& j);
  static ZpAnnotation from_file(const std::filesystem::path& path);
};

// Per-document annotations keyed by doc_id. File format:
// {"documents": [{"doc_id": ..., "zero_pronouns": [...]}, ...]}
using ZpCorpus = std::map<std::string, ZpAnnotation>;
ZpCorpus zp_corpus_from_file(const std::filesystem::path& path);

using ZpJudge =
    std::function<bool(const std::string& translation, const std::vector<std::string>& gold)>;

// Accepts when any gold resolution occurs in the translation span
// (case-insensitive for space-delimited text).
bool default_zp_judge(const std::string& translation, const std::vector<std::string>& gold);

// Mean judge outcome over the annotated zero pronouns. Throws
// UndefinedMetricError when the annotation set is empty.
double azpt(const RunRecord& run, const ZpAnnotation& zp, const ZpJudge& judge = default_zp_judge);

// --- consistency over DAG paths --------------------------------------------

// CR = CL/k where CL counts the leading consistent nodes; k = path length.
// Requires k >= 2.
double consistency_ratio(const std::vector<bool>& node_consistency);

// Node v (after the first) is consistent iff every entity binding visible at
// v (aggregated from its predecessors' memories) whose source key occurs in
// v's source text has its target value occur in v's translation. The first
// node is its own anchor and always consistent.
std::vector<bool> derive_path_consistency(const RunRecord& run, const std::vector<int>& path);

struct PathLengthStats {
  std::map<int, long> histogram;  // node-count -> path count
  long total = 0;
};
PathLengthStats path_stats(const DiscourseGraph& g, int max_len);

struct ConsistencyReport {
  std::vector<double> ratios;             // one CR per path, enumeration order
  std::map<std::string, long> histogram;  // "0.0-0.1" .. "0.9-1.0"
  double mean = 0.0;
  long paths = 0;
};
ConsistencyReport consistency_report(const RunRecord& run, int max_len);

// --- run evaluation report ---------------------------------------------------

struct EvaluationOptions {
  int max_path_len = 8;
};

// Builds the evaluation report for a set of completed runs with document-level
// references (one or more per document). Undefined metrics appear as
// {"value": null, "reason": ...}.
Json evaluate_runs(const std::vector<RunRecord>& runs,
                   const std::vector<std::vector<std::string>>& references,
                   const std::string& target_lang, const std::optional<TermLexicon>& lexicon,
                   const std::optional<ZpCorpus>& zp, const EvaluationOptions& options = {});

std::string report_markdown(const Json& report);

}  // namespace dagmt
