#include "dagmt/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "dagmt/graph.hpp"
#include "dagmt/memory.hpp"
#include "dagmt/utf8.hpp"

namespace dagmt {

namespace {

bool is_char_level_lang(const std::string& lang) { return joiner_for_language(lang).empty(); }

std::string ascii_lower_copy(const std::string& s) {
  std::string out = s;
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool is_word_char(unsigned char c) { return std::isalnum(c) != 0 || c >= 0x80; }

// Case-insensitive occurrence test; word-boundary match for space-delimited
// languages, plain substring for character-level scripts.
bool occurs_in(const std::string& text, const std::string& needle, const std::string& lang) {
  if (needle.empty()) return false;
  if (is_char_level_lang(lang)) return text.find(needle) != std::string::npos;
  const std::string haystack = ascii_lower_copy(text);
  const std::string target = ascii_lower_copy(needle);
  std::size_t pos = 0;
  while ((pos = haystack.find(target, pos)) != std::string::npos) {
    const bool left_ok = pos == 0 || !is_word_char(static_cast<unsigned char>(haystack[pos - 1]));
    const std::size_t end = pos + target.size();
    const bool right_ok =
        end >= haystack.size() || !is_word_char(static_cast<unsigned char>(haystack[end]));
    if (left_ok && right_ok) return true;
    ++pos;
  }
  return false;
}

const std::string* find_case_insensitive(const OrderedMap& map, const std::string& key) {
  if (const std::string* direct = map.find(key)) return direct;
  const std::string lowered = ascii_lower_copy(key);
  for (const auto& [k, v] : map) {
    if (ascii_lower_copy(k) == lowered) return &v;
  }
  return nullptr;
}

Json metric_value(double value) { return Json{{"value", value}}; }
Json metric_na(const std::string& reason) {
  return Json{{"value", nullptr}, {"reason", reason}};
}

}  // namespace

// --- BLEU ---------------------------------------------------------------

std::vector<std::string> bleu_tokenize(const std::string& text, const std::string& lang) {
  std::vector<std::string> tokens;
  if (is_char_level_lang(lang)) {
    for (char32_t cp : utf8_decode(text)) {
      if (cp == U' ' || cp == U'\t' || cp == U'\n' || cp == U'\r' || cp == 0x3000) continue;
      tokens.push_back(utf8_encode(cp));
    }
    return tokens;
  }
  std::istringstream ss(text);
  std::string tok;
  while (ss >> tok) tokens.push_back(tok);
  return tokens;
}

namespace {

std::map<std::string, long> ngram_counts(const std::vector<std::string>& tokens, int n) {
  std::map<std::string, long> counts;
  if (static_cast<int>(tokens.size()) < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string key;
    for (int k = 0; k < n; ++k) {
      if (k > 0) key.push_back('\x1f');
      key += tokens[i + k];
    }
    ++counts[key];
  }
  return counts;
}

}  // namespace

void BleuAccumulator::add(const std::string& hypothesis,
                          const std::vector<std::string>& references, const std::string& lang) {
  if (hypothesis.empty()) throw Error("BLEU hypothesis is empty");
  if (references.empty()) throw Error("BLEU requires at least one reference");
  const std::vector<std::string> hyp = bleu_tokenize(hypothesis, lang);
  if (hyp.empty()) throw Error("BLEU hypothesis has no tokens");

  std::vector<std::vector<std::string>> refs;
  refs.reserve(references.size());
  for (const std::string& r : references) {
    if (r.empty()) throw Error("BLEU reference is empty");
    refs.push_back(bleu_tokenize(r, lang));
  }

  // closest reference length, ties to the shorter
  long best_len = static_cast<long>(refs[0].size());
  for (const auto& r : refs) {
    const long len = static_cast<long>(r.size());
    const long d = std::llabs(len - static_cast<long>(hyp.size()));
    const long best_d = std::llabs(best_len - static_cast<long>(hyp.size()));
    if (d < best_d || (d == best_d && len < best_len)) best_len = len;
  }
  hyp_len_ += static_cast<long>(hyp.size());
  ref_len_ += best_len;

  for (int n = 1; n <= 4; ++n) {
    const auto hyp_counts = ngram_counts(hyp, n);
    std::map<std::string, long> max_ref;
    for (const auto& r : refs) {
      for (const auto& [gram, count] : ngram_counts(r, n)) {
        max_ref[gram] = std::max(max_ref[gram], count);
      }
    }
    for (const auto& [gram, count] : hyp_counts) {
      total_[n - 1] += count;
      auto it = max_ref.find(gram);
      if (it != max_ref.end()) matched_[n - 1] += std::min(count, it->second);
    }
  }
  any_ = true;
}

double BleuAccumulator::score() const {
  if (!any_) throw UndefinedMetricError("BLEU: no documents were scored");
  double log_sum = 0.0;
  int orders = 0;
  for (int n = 0; n < 4; ++n) {
    if (total_[n] == 0) continue;  // hypothesis too short to form this order
    const double matched =
        matched_[n] > 0 ? static_cast<double>(matched_[n]) : 0.1;  // add-epsilon smoothing
    log_sum += std::log(matched / static_cast<double>(total_[n]));
    ++orders;
  }
  if (orders == 0) throw UndefinedMetricError("BLEU: hypothesis formed no n-grams");
  const double precision = std::exp(log_sum / orders);
  const double bp =
      hyp_len_ >= ref_len_
          ? 1.0
          : std::exp(1.0 - static_cast<double>(ref_len_) / static_cast<double>(hyp_len_));
  return 100.0 * bp * precision;
}

double d_bleu(const std::string& hypothesis_doc, const std::vector<std::string>& reference_docs,
              const std::string& lang) {
  BleuAccumulator acc;
  acc.add(hypothesis_doc, reference_docs, lang);
  return acc.score();
}

// --- cTT ------------------------------------------------------------------

TermLexicon TermLexicon::from_json(const Json& j) {
  TermLexicon lex;
  std::set<std::string> seen;
  for (const auto& entry : j.at("terms")) {
    Entry e;
    if (entry.is_string()) {
      e.term = entry.get<std::string>();
    } else {
      e.term = entry.at("term").get<std::string>();
      if (entry.contains("gold")) {
        e.gold_variants = entry.at("gold").get<std::vector<std::string>>();
      }
    }
    if (e.term.empty()) throw Error("lexicon contains an empty term");
    if (!seen.insert(e.term).second) throw Error("lexicon term '" + e.term + "' is duplicated");
    lex.terms.push_back(std::move(e));
  }
  return lex;
}

TermLexicon TermLexicon::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open lexicon " + path.string());
  return from_json(Json::parse(in));
}

double ctt_score(const TermOccurrences& occurrences) {
  double sum = 0.0;
  long scorable = 0;
  for (const auto& [term, translations] : occurrences.per_term) {
    const std::size_t k = translations.size();
    if (k < 2) continue;  // C(k,2) undefined at k=1
    long equal_pairs = 0;
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = a + 1; b < k; ++b) {
        if (translations[a] == translations[b]) ++equal_pairs;
      }
    }
    const double pairs = static_cast<double>(k) * (static_cast<double>(k) - 1.0) / 2.0;
    sum += static_cast<double>(equal_pairs) / pairs;
    ++scorable;
  }
  if (scorable == 0) {
    throw UndefinedMetricError("cTT: no term has two or more recoverable occurrences");
  }
  return sum / static_cast<double>(scorable);
}

TermOccurrences recover_term_occurrences(const RunRecord& run, const TermLexicon& lexicon) {
  TermOccurrences occ;
  const std::string& src_lang = run.source.language;
  for (const auto& entry : lexicon.terms) {
    std::vector<std::string> translations;
    for (std::size_t i = 0; i < run.segmentation.size(); ++i) {
      const std::string src_text = discourse_text(run.source, run.segmentation[i]);
      if (!occurs_in(src_text, entry.term, src_lang)) continue;

      // 1) the run's own memory binding for this node
      const std::string* bound = nullptr;
      if (i < run.memories.size() && run.memories[i]) {
        bound = find_case_insensitive(run.memories[i]->entities, entry.term);
        if (!bound) bound = find_case_insensitive(run.memories[i]->phrases, entry.term);
      }
      if (bound) {
        translations.push_back(*bound);
        continue;
      }
      // 2) gold variant spotted in the node's translation
      if (i < run.translations.size()) {
        for (const std::string& variant : entry.gold_variants) {
          if (run.translations[i].target_text.find(variant) != std::string::npos) {
            translations.push_back(variant);
            break;
          }
        }
      }
    }
    occ.per_term.emplace_back(entry.term, std::move(translations));
  }
  return occ;
}

double ctt(const RunRecord& run, const TermLexicon& lexicon) {
  return ctt_score(recover_term_occurrences(run, lexicon));
}

// --- aZPT -------------------------------------------------------------------

ZpAnnotation ZpAnnotation::from_json(const Json& j) {
  ZpAnnotation zp;
  const Json& records = j.is_array() ? j : j.at("zero_pronouns");
  for (const auto& r : records) {
    Record rec;
    if (r.contains("discourse_index")) rec.discourse_index = r.at("discourse_index").get<int>();
    if (r.contains("sentence_index")) rec.sentence_index = r.at("sentence_index").get<int>();
    if (!rec.discourse_index && !rec.sentence_index) {
      throw Error("zero-pronoun record needs a discourse_index or sentence_index locator");
    }
    rec.gold = r.at("gold").get<std::vector<std::string>>();
    zp.records.push_back(std::move(rec));
  }
  return zp;
}

ZpAnnotation ZpAnnotation::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open zero-pronoun annotations " + path.string());
  return from_json(Json::parse(in));
}

ZpCorpus zp_corpus_from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open zero-pronoun annotations " + path.string());
  const Json j = Json::parse(in);
  ZpCorpus corpus;
  for (const auto& doc : j.at("documents")) {
    corpus[doc.at("doc_id").get<std::string>()] = ZpAnnotation::from_json(doc);
  }
  return corpus;
}

bool default_zp_judge(const std::string& translation, const std::vector<std::string>& gold) {
  const std::string lowered = ascii_lower_copy(translation);
  for (const std::string& g : gold) {
    if (!g.empty() && lowered.find(ascii_lower_copy(g)) != std::string::npos) return true;
  }
  return false;
}

double azpt(const RunRecord& run, const ZpAnnotation& zp, const ZpJudge& judge) {
  if (zp.records.empty()) throw UndefinedMetricError("aZPT: the zero-pronoun set is empty");
  long accepted = 0;
  for (const auto& rec : zp.records) {
    int node = -1;
    if (rec.discourse_index) {
      node = *rec.discourse_index;
    } else {
      for (std::size_t i = 0; i < run.segmentation.size(); ++i) {
        if (run.segmentation[i].lo <= *rec.sentence_index &&
            *rec.sentence_index <= run.segmentation[i].hi) {
          node = static_cast<int>(i);
          break;
        }
      }
    }
    if (node < 0 || node >= static_cast<int>(run.translations.size())) {
      throw Error("zero-pronoun locator resolves outside the run's discourses");
    }
    if (judge(run.translations[node].target_text, rec.gold)) ++accepted;
  }
  return static_cast<double>(accepted) / static_cast<double>(zp.records.size());
}

// --- consistency ratio --------------------------------------------------------

double consistency_ratio(const std::vector<bool>& node_consistency) {
  const std::size_t k = node_consistency.size();
  if (k < 2) throw Error("consistency_ratio requires a path of length >= 2");
  std::size_t leading = 0;
  while (leading < k && node_consistency[leading]) ++leading;
  return static_cast<double>(leading) / static_cast<double>(k);
}

std::vector<bool> derive_path_consistency(const RunRecord& run, const std::vector<int>& path) {
  std::vector<bool> consistency(path.size(), true);
  for (std::size_t p = 1; p < path.size(); ++p) {
    const int v = path[p];
    std::vector<LocalMemory> pred_memories;
    for (int j : predecessors(run.graph, v)) {
      if (j < static_cast<int>(run.memories.size()) && run.memories[j]) {
        pred_memories.push_back(*run.memories[j]);
      }
    }
    const LocalMemory visible = aggregate_memories(pred_memories);
    const std::string src_text = discourse_text(run.source, run.segmentation[v]);
    const std::string& tgt_text = run.translations[v].target_text;

    bool ok = true;
    for (const auto& [src_entity, tgt_entity] : visible.entities) {
      if (occurs_in(src_text, src_entity, run.source.language) &&
          !occurs_in(tgt_text, tgt_entity, run.target_language)) {
        ok = false;
        break;
      }
    }
    consistency[p] = ok;
  }
  return consistency;
}

PathLengthStats path_stats(const DiscourseGraph& g, int max_len) {
  PathLengthStats stats;
  for (const auto& path : enumerate_paths(g, max_len)) {
    ++stats.histogram[static_cast<int>(path.size())];
    ++stats.total;
  }
  return stats;
}

ConsistencyReport consistency_report(const RunRecord& run, int max_len) {
  ConsistencyReport report;
  for (int b = 0; b < 10; ++b) {
    std::ostringstream key;
    key << "0." << b << "-" << (b == 9 ? "1.0" : "0." + std::to_string(b + 1));
    report.histogram[key.str()] = 0;
  }
  double sum = 0.0;
  for (const auto& path : enumerate_paths(run.graph, max_len)) {
    const double cr = consistency_ratio(derive_path_consistency(run, path));
    report.ratios.push_back(cr);
    sum += cr;
    int bucket = static_cast<int>(cr * 10.0);
    if (bucket > 9) bucket = 9;
    std::ostringstream key;
    key << "0." << bucket << "-" << (bucket == 9 ? "1.0" : "0." + std::to_string(bucket + 1));
    ++report.histogram[key.str()];
  }
  report.paths = static_cast<long>(report.ratios.size());
  report.mean = report.paths > 0 ? sum / static_cast<double>(report.paths) : 0.0;
  return report;
}

// --- evaluation report ----------------------------------------------------------

Json evaluate_runs(const std::vector<RunRecord>& runs,
                   const std::vector<std::vector<std::string>>& references,
                   const std::string& target_lang, const std::optional<TermLexicon>& lexicon,
                   const std::optional<ZpCorpus>& zp, const EvaluationOptions& options) {
  if (runs.size() != references.size()) {
    throw Error("got " + std::to_string(runs.size()) + " runs but " +
                std::to_string(references.size()) + " reference sets");
  }

  Json docs = Json::array();
  BleuAccumulator corpus_bleu;
  double ctt_sum = 0.0;
  long ctt_docs = 0;
  long zp_accepted = 0, zp_total = 0;
  std::map<int, long> corpus_lengths;

  for (std::size_t i = 0; i < runs.size(); ++i) {
    const RunRecord& run = runs[i];
    Json doc{{"doc_id", run.doc_id}};

    if (references[i].empty()) {
      doc["d_bleu"] = metric_na("no reference supplied");
    } else {
      corpus_bleu.add(run.document_text, references[i], target_lang);
      doc["d_bleu"] = metric_value(d_bleu(run.document_text, references[i], target_lang));
    }

    if (!lexicon) {
      doc["ctt"] = metric_na("no terminology lexicon supplied");
    } else {
      try {
        const double value = ctt(run, *lexicon);
        doc["ctt"] = metric_value(value);
        ctt_sum += value;
        ++ctt_docs;
      } catch (const UndefinedMetricError& e) {
        doc["ctt"] = metric_na(e.what());
      }
    }

    if (!zp || !zp->count(run.doc_id)) {
      doc["azpt"] = metric_na("no zero-pronoun annotations supplied");
    } else {
      const ZpAnnotation& ann = zp->at(run.doc_id);
      try {
        const double value = azpt(run, ann);
        doc["azpt"] = metric_value(value);
        zp_total += static_cast<long>(ann.records.size());
        zp_accepted += std::lround(value * static_cast<double>(ann.records.size()));
      } catch (const UndefinedMetricError& e) {
        doc["azpt"] = metric_na(e.what());
      }
    }

    const PathLengthStats lengths = path_stats(run.graph, options.max_path_len);
    Json length_hist = Json::object();
    for (const auto& [len, count] : lengths.histogram) {
      length_hist[std::to_string(len)] = count;
      corpus_lengths[len] += count;
    }
    doc["path_lengths"] = std::move(length_hist);

    const ConsistencyReport cr = consistency_report(run, options.max_path_len);
    doc["consistency"] =
        Json{{"paths", cr.paths}, {"mean_cr", cr.mean}, {"cr_histogram", cr.histogram}};

    docs.push_back(std::move(doc));
  }

  Json corpus = Json::object();
  try {
    corpus["d_bleu"] = metric_value(corpus_bleu.score());
  } catch (const UndefinedMetricError& e) {
    corpus["d_bleu"] = metric_na(e.what());
  }
  corpus["ctt"] = ctt_docs > 0 ? metric_value(ctt_sum / static_cast<double>(ctt_docs))
                               : metric_na("no document had a defined cTT");
  corpus["azpt"] = zp_total > 0
                       ? metric_value(static_cast<double>(zp_accepted) /
                                      static_cast<double>(zp_total))
                       : metric_na("no zero-pronoun annotations supplied");
  Json corpus_length_hist = Json::object();
  for (const auto& [len, count] : corpus_lengths) corpus_length_hist[std::to_string(len)] = count;
  corpus["path_lengths"] = std::move(corpus_length_hist);

  return Json{{"smoothing", "d-BLEU uses 0.1 pseudo-counts for zero n-gram matches"},
              {"documents", std::move(docs)},
              {"corpus", std::move(corpus)}};
}

namespace {

std::string metric_cell(const Json& metric) {
  if (metric.at("value").is_null()) return "n/a";
  std::ostringstream out;
  out.precision(4);
  out << std::fixed << metric.at("value").get<double>();
  return out.str();
}

}  // namespace

std::string report_markdown(const Json& report) {
  std::ostringstream md;
  md << "| document | d-BLEU | cTT | aZPT | paths | mean CR |\n";
  md << "|---|---|---|---|---|---|\n";
  for (const auto& doc : report.at("documents")) {
    md << "| " << doc.at("doc_id").get<std::string>() << " | " << metric_cell(doc.at("d_bleu"))
       << " | " << metric_cell(doc.at("ctt")) << " | " << metric_cell(doc.at("azpt")) << " | "
       << doc.at("consistency").at("paths").get<long>() << " | ";
    std::ostringstream cr;
    cr.precision(4);
    cr << std::fixed << doc.at("consistency").at("mean_cr").get<double>();
    md << cr.str() << " |\n";
  }
  const Json& corpus = report.at("corpus");
  md << "| corpus | " << metric_cell(corpus.at("d_bleu")) << " | " << metric_cell(corpus.at("ctt"))
     << " | " << metric_cell(corpus.at("azpt")) << " |  |  |\n";
  md << "\n" << report.at("smoothing").get<std::string>() << "\n";
  return md.str();
}

}  // namespace dagmt
