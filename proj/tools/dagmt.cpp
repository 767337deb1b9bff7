#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dagmt/config.hpp"
#include "dagmt/graph.hpp"
#include "dagmt/ingestion.hpp"
#include "dagmt/metrics.hpp"
#include "dagmt/pipeline.hpp"

namespace fs = std::filesystem;
using dagmt::Json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRunFailure = 1;
constexpr int kExitConfigFailure = 2;

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw dagmt::Error("cannot write " + path.string());
  out << content;
}

std::string format_cost(double cost) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", cost);
  return buf;
}

void print_accounting(const std::string& label, const dagmt::Accounting& acc) {
  std::cout << label << ": calls=" << acc.backend_calls << " cached=" << acc.cache_hits
            << " prompt_tokens=" << acc.prompt_tokens
            << " completion_tokens=" << acc.completion_tokens << " latency_ms=" << acc.latency_ms
            << " est_cost=" << format_cost(acc.estimated_cost) << "\n";
}

int cmd_translate(const std::string& config_path, const std::string& out,
                  const std::string& backend_url, const std::string& mock_script,
                  std::optional<std::uint64_t> seed, std::optional<int> workers) {
  dagmt::RunConfig cfg = dagmt::RunConfig::from_file(config_path);
  if (!backend_url.empty()) {
    cfg.backend.kind = "http";
    cfg.backend.url = backend_url;
  }
  if (!mock_script.empty()) {
    cfg.backend.kind = "mock";
    cfg.backend.mock_script = fs::absolute(mock_script).string();
  }
  if (seed) cfg.segmentation.seed = *seed;
  if (workers) cfg.workers = *workers;
  if (cfg.corpus.source.empty()) throw dagmt::ConfigError("corpus.source: must be set");

  std::vector<dagmt::CorpusEntry> entries;
  if (cfg.corpus.format == "lines") {
    std::vector<fs::path> refs(cfg.corpus.references.begin(), cfg.corpus.references.end());
    entries = dagmt::load_corpus_lines(cfg.corpus.source, refs, cfg.source_language,
                                       cfg.target_language);
  } else {
    entries = dagmt::load_corpus_jsonl(cfg.corpus.source);
  }

  const auto started = std::chrono::steady_clock::now();
  const dagmt::CorpusRunResult result = dagmt::run_corpus(entries, cfg, out);
  const auto wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - started)
                           .count();

  for (const dagmt::DocumentOutcome& doc : result.documents) {
    if (doc.ok) {
      print_accounting(doc.doc_id, doc.accounting);
    } else {
      std::cout << doc.doc_id << ": FAILED (" << doc.error << ")\n";
    }
  }
  print_accounting("corpus", result.total);
  std::cout << "documents=" << result.documents.size() << " failures=" << result.failures
            << " wall_ms=" << wall_ms << "\n";
  return result.failures == 0 ? kExitOk : kExitRunFailure;
}

std::vector<std::string> run_doc_order(const fs::path& run_dir) {
  std::ifstream in(run_dir / "summary.json");
  if (!in) throw dagmt::Error("missing artifact " + (run_dir / "summary.json").string());
  const Json summary = Json::parse(in);
  std::vector<std::string> ids;
  for (const auto& doc : summary.at("documents")) {
    if (doc.at("status").get<std::string>() != "ok") {
      throw dagmt::Error("document " + doc.at("doc_id").get<std::string>() +
                         " failed during translation; evaluate needs a completed run");
    }
    ids.push_back(doc.at("doc_id").get<std::string>());
  }
  return ids;
}

int cmd_evaluate(const std::string& run, const std::string& refs_path,
                 const std::string& refs_format, const std::string& lexicon_path,
                 const std::string& zp_path, int max_path_len) {
  const fs::path run_dir(run);
  std::vector<dagmt::RunRecord> runs;
  for (const std::string& doc_id : run_doc_order(run_dir)) {
    runs.push_back(dagmt::RunRecord::load(run_dir / dagmt::sanitize_doc_id(doc_id)));
  }
  if (runs.empty()) throw dagmt::Error("run directory contains no documents");
  const std::string target_lang = runs.front().target_language;

  std::vector<std::vector<std::string>> references(runs.size());
  if (!refs_path.empty()) {
    if (refs_format == "lines") {
      const auto ref_docs = dagmt::load_documents_lines(refs_path, target_lang);
      if (ref_docs.size() != runs.size()) {
        throw dagmt::Error("reference file has " + std::to_string(ref_docs.size()) +
                           " documents, run has " + std::to_string(runs.size()));
      }
      const std::string joiner = dagmt::joiner_for_language(target_lang);
      for (std::size_t i = 0; i < ref_docs.size(); ++i) {
        std::string text;
        for (std::size_t s = 0; s < ref_docs[i].sentences.size(); ++s) {
          if (s > 0) text += joiner;
          text += ref_docs[i].sentences[s].text;
        }
        references[i].push_back(std::move(text));
      }
    } else {
      const auto entries = dagmt::load_corpus_jsonl(refs_path);
      if (entries.size() != runs.size()) {
        throw dagmt::Error("reference corpus has " + std::to_string(entries.size()) +
                           " documents, run has " + std::to_string(runs.size()));
      }
      for (std::size_t i = 0; i < entries.size(); ++i) references[i] = entries[i].references;
    }
  }

  std::optional<dagmt::TermLexicon> lexicon;
  if (!lexicon_path.empty()) lexicon = dagmt::TermLexicon::from_file(lexicon_path);
  std::optional<dagmt::ZpCorpus> zp;
  if (!zp_path.empty()) zp = dagmt::zp_corpus_from_file(zp_path);

  dagmt::EvaluationOptions options;
  options.max_path_len = max_path_len;
  const Json report = dagmt::evaluate_runs(runs, references, target_lang, lexicon, zp, options);
  const std::string markdown = dagmt::report_markdown(report);

  write_text(run_dir / "report.json", report.dump(2) + "\n");
  write_text(run_dir / "report.md", markdown);
  std::cout << markdown;
  return kExitOk;
}

int cmd_graph_stats(const std::string& run, int max_path_len) {
  const fs::path run_dir(run);
  Json per_doc = Json::array();
  std::map<int, long> discourse_counts;
  std::map<int, long> sentences_per_discourse;
  std::map<int, long> extra_edges_per_doc;
  std::map<int, long> path_lengths;

  for (const std::string& doc_id : run_doc_order(run_dir)) {
    const dagmt::RunRecord rec = dagmt::RunRecord::load(run_dir / dagmt::sanitize_doc_id(doc_id));
    const int k = rec.graph.node_count();
    ++discourse_counts[k];

    Json spd = Json::array();
    for (const dagmt::Discourse& d : rec.segmentation) {
      ++sentences_per_discourse[d.sentence_count()];
      spd.push_back(d.sentence_count());
    }

    long extra = 0;
    for (const auto& [from, to] : rec.graph.edges) {
      if (to - from > 1) ++extra;
    }
    ++extra_edges_per_doc[static_cast<int>(extra)];

    const dagmt::PathLengthStats stats = dagmt::path_stats(rec.graph, max_path_len);
    Json lengths = Json::object();
    for (const auto& [len, count] : stats.histogram) {
      lengths[std::to_string(len)] = count;
      path_lengths[len] += count;
    }

    per_doc.push_back(Json{{"doc_id", doc_id},
                           {"discourses", k},
                           {"sentences_per_discourse", std::move(spd)},
                           {"edges", rec.graph.edges.size()},
                           {"non_consecutive_edges", extra},
                           {"path_lengths", std::move(lengths)}});
  }

  auto hist_json = [](const std::map<int, long>& hist) {
    Json j = Json::object();
    for (const auto& [key, count] : hist) j[std::to_string(key)] = count;
    return j;
  };
  const Json report{{"documents", std::move(per_doc)},
                    {"discourse_count_distribution", hist_json(discourse_counts)},
                    {"sentences_per_discourse_distribution", hist_json(sentences_per_discourse)},
                    {"non_consecutive_edges_distribution", hist_json(extra_edges_per_doc)},
                    {"path_length_distribution", hist_json(path_lengths)}};

  write_text(run_dir / "graph_stats.json", report.dump(2) + "\n");

  for (const auto& doc : report.at("documents")) {
    std::cout << doc.at("doc_id").get<std::string>() << ": discourses="
              << doc.at("discourses").get<int>() << " edges=" << doc.at("edges").get<long>()
              << " non_consecutive=" << doc.at("non_consecutive_edges").get<long>() << "\n";
  }
  std::cout << "discourse count distribution: "
            << report.at("discourse_count_distribution").dump() << "\n";
  std::cout << "sentences per discourse: "
            << report.at("sentences_per_discourse_distribution").dump() << "\n";
  std::cout << "non-consecutive edges per document: "
            << report.at("non_consecutive_edges_distribution").dump() << "\n";
  std::cout << "path lengths: " << report.at("path_length_distribution").dump() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DAG-guided document translation pipeline"};
  app.require_subcommand(1);

  // translate
  auto* translate = app.add_subcommand("translate", "run the translation pipeline over a corpus");
  std::string config_path, out_dir, backend_url, mock_script;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  translate->add_option("--config", config_path, "run configuration file")->required();
  translate->add_option("--out", out_dir, "output run directory")->required();
  translate->add_option("--backend-url", backend_url, "override: chat-completion endpoint URL");
  translate->add_option("--mock-script", mock_script, "override: scripted mock backend file");
  translate->add_option("--seed", seed, "override: random segmentation seed");
  translate->add_option("--workers", workers, "override: document worker count");

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "compute metrics for a completed run");
  std::string run_dir, refs_path, refs_format = "lines", lexicon_path, zp_path;
  int max_path_len = 8;
  evaluate->add_option("--run", run_dir, "run directory")->required();
  evaluate->add_option("--refs", refs_path, "reference corpus (document-level)");
  evaluate->add_option("--refs-format", refs_format, "lines | jsonl")
      ->check(CLI::IsMember({"lines", "jsonl"}));
  evaluate->add_option("--lexicon", lexicon_path, "terminology lexicon JSON");
  evaluate->add_option("--zp", zp_path, "zero-pronoun annotations JSON");
  evaluate->add_option("--max-path-len", max_path_len, "path enumeration cap");

  // graph-stats
  auto* stats = app.add_subcommand("graph-stats", "print graph distributions for a run");
  std::string stats_run;
  int stats_max_len = 8;
  stats->add_option("--run", stats_run, "run directory")->required();
  stats->add_option("--max-path-len", stats_max_len, "path enumeration cap");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigFailure;
  }

  try {
    if (translate->parsed()) {
      return cmd_translate(config_path, out_dir, backend_url, mock_script, seed, workers);
    }
    if (evaluate->parsed()) {
      return cmd_evaluate(run_dir, refs_path, refs_format, lexicon_path, zp_path, max_path_len);
    }
    if (stats->parsed()) {
      return cmd_graph_stats(stats_run, stats_max_len);
    }
  } catch (const dagmt::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRunFailure;
  }
  return kExitConfigFailure;
}
