#include "dagmt/pipeline.hpp"

#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

namespace dagmt {

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("missing artifact " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_json(const std::filesystem::path& path, const Json& j) {
  write_file(path, j.dump(2) + "\n");
}

Json read_json(const std::filesystem::path& path) {
  Json j = Json::parse(read_file(path), nullptr, false);
  if (j.is_discarded()) throw Error("artifact " + path.string() + " is not valid JSON");
  return j;
}

template <typename F>
auto run_stage(const std::string& name, int node, F&& f) {
  try {
    return f();
  } catch (const PipelineError&) {
    throw;
  } catch (const std::exception& e) {
    throw PipelineError(name, node, e.what());
  }
}

}  // namespace

std::string sanitize_doc_id(const std::string& doc_id) {
  std::string out;
  for (char c : doc_id) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_' || c == '-';
    out.push_back(ok ? c : '_');
  }
  return out.empty() ? "doc" : out;
}

void RunRecord::save(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  std::filesystem::create_directories(dir / "memories");
  std::filesystem::create_directories(dir / "translations");

  write_json(dir / "meta.json", Json{{"doc_id", doc_id}, {"target_language", target_language}});
  write_json(dir / "source.json", Json(source));
  if (!segmentation.empty()) write_json(dir / "segmentation.json", Json(segmentation));
  if (!graph.nodes.empty()) write_json(dir / "graph.json", Json(graph));
  for (std::size_t i = 0; i < memories.size(); ++i) {
    if (memories[i]) {
      write_json(dir / "memories" / (std::to_string(i) + ".json"), Json(*memories[i]));
    }
  }
  for (const Translation& t : translations) {
    write_json(dir / "translations" / (std::to_string(t.discourse_index) + ".json"), Json(t));
    write_file(dir / "translations" / (std::to_string(t.discourse_index) + ".txt"),
               t.target_text);
  }
  if (!document_text.empty()) write_file(dir / "document.txt", document_text);
  write_json(dir / "accounting.json", Json(accounting));
}

RunRecord RunRecord::load(const std::filesystem::path& dir) {
  RunRecord rec;
  const Json meta = read_json(dir / "meta.json");
  rec.target_language = meta.at("target_language").get<std::string>();
  rec.source = read_json(dir / "source.json").get<Document>();
  rec.doc_id = rec.source.doc_id;
  rec.segmentation = read_json(dir / "segmentation.json").get<std::vector<Discourse>>();
  rec.graph = read_json(dir / "graph.json").get<DiscourseGraph>();

  const std::size_t k = rec.segmentation.size();
  rec.memories.assign(k, std::nullopt);
  for (std::size_t i = 0; i < k; ++i) {
    const std::filesystem::path mem_path = dir / "memories" / (std::to_string(i) + ".json");
    if (std::filesystem::exists(mem_path)) {
      rec.memories[i] = read_json(mem_path).get<LocalMemory>();
    }
  }
  for (std::size_t i = 0; i < k; ++i) {
    rec.translations.push_back(
        read_json(dir / "translations" / (std::to_string(i) + ".json")).get<Translation>());
  }
  rec.document_text = read_file(dir / "document.txt");
  rec.accounting = read_json(dir / "accounting.json").get<Accounting>();
  return rec;
}

PipelineContext make_context(const RunConfig& cfg,
                             const std::optional<std::filesystem::path>& cache_dir) {
  PipelineContext ctx;
  if (cfg.backend.kind == "mock") {
    ctx.backend = MockBackend::from_file(cfg.backend.mock_script);
  } else {
    ctx.backend = std::make_shared<HttpBackend>(cfg.backend.url, cfg.backend.api_key_env);
  }
  if (cfg.cache_enabled) {
    ctx.cache = std::make_shared<ResponseCache>(cache_dir);
  }
  return ctx;
}

Translation translate_discourse(const Document& doc, const Discourse& d,
                                const LocalMemory& incident_memory, const LangPair& lang,
                                LlmClient& client, const PromptLibrary& prompts,
                                const std::string& model, double temperature) {
  const std::string d_text = discourse_text(doc, d);
  if (d_text.empty()) throw Error("discourse " + std::to_string(d.index) + " is empty");

  const std::string prompt =
      render(prompts.translation(lang), {{"memory_section", render_memory_section(incident_memory)},
                                         {"source_discourse", d_text}});
  const BackendResponse resp =
      client.complete(ChatRequest::make(AgentKind::Translation, prompt, model, temperature));
  if (resp.text.empty()) {
    throw Error("translation of discourse " + std::to_string(d.index) + " is empty");
  }
  return Translation{d.index, d.lo, d.hi, resp.text};
}

RunRecord run_pipeline(const Document& doc, const RunConfig& cfg, const PipelineContext& ctx,
                       const std::optional<std::filesystem::path>& persist_dir) {
  validate_document(doc);
  RunRecord rec;
  rec.doc_id = doc.doc_id;
  rec.target_language = cfg.target_language;
  rec.source = doc;

  LlmClient client(ctx.backend, ctx.cache, cfg.retry, cfg.pricing);
  const LangPair lang = cfg.lang_pair();
  const MemoryFlags mem_flags = cfg.effective_memory();

  auto persist = [&] {
    if (!persist_dir) return;
    rec.accounting = client.accounting();
    rec.save(*persist_dir);
    write_json(*persist_dir / "config.json", cfg.to_json());
  };

  try {
    rec.segmentation = run_stage("segmentation", -1, [&] {
      const std::string kind = cfg.effective_segmentation();
      if (kind == "whole") return segment_whole_document(doc);
      if (kind == "llm") {
        LlmSegmentationOptions options;
        options.max_sentences_per_discourse = cfg.segmentation.max_sentences_per_discourse;
        return segment_llm(doc, client, ctx.prompts, lang, cfg.model, cfg.temperature, options);
      }
      if (kind == "random") return segment_random(doc, cfg.segmentation.seed);
      if (kind == "semantic") {
        TfidfSentenceEmbedder embedder(doc);
        return segment_semantic(doc, embedder, cfg.segmentation.threshold);
      }
      throw Error("unknown segmentation strategy '" + kind + "'");
    });
    validate_segmentation(doc, rec.segmentation);

    rec.graph = run_stage("graph", -1, [&] {
      const std::string kind = cfg.effective_edges();
      if (kind == "chain") return build_chain(rec.segmentation);
      if (kind == "llm") {
        EdgeAgentOptions options;
        options.window = cfg.edges.window;
        options.workers = cfg.edges.workers;
        return build_llm(doc, rec.segmentation, client, ctx.prompts, lang, cfg.model,
                         cfg.temperature, options);
      }
      if (kind == "tfidf") return build_tfidf(doc, rec.segmentation, cfg.edges.tau);
      throw Error("unknown edge strategy '" + kind + "'");
    });
    validate_graph(rec.graph);

    const int node_count = rec.graph.node_count();
    rec.memories.assign(node_count, std::nullopt);
    const AggregateOptions agg_options{cfg.memory.summary_cap, " "};

    for (int i = 0; i < node_count; ++i) {
      const Discourse& d = rec.segmentation[i];

      std::vector<LocalMemory> pred_memories;
      for (int j : predecessors(rec.graph, i)) {
        if (rec.memories[j]) pred_memories.push_back(*rec.memories[j]);
      }
      const LocalMemory incident = aggregate_memories(pred_memories, agg_options);

      rec.translations.push_back(run_stage("translation", i, [&] {
        return translate_discourse(doc, d, incident, lang, client, ctx.prompts, cfg.model,
                                   cfg.temperature);
      }));

      if (mem_flags.any()) {
        rec.memories[i] = run_stage("memory", i, [&] {
          return extract_memory(discourse_text(doc, d), rec.translations.back().target_text,
                                lang, client, ctx.prompts, cfg.model, cfg.temperature, mem_flags);
        });
      }
    }

    rec.document_text = run_stage("assembly", -1, [&] {
      return assemble(rec.translations, joiner_for_language(cfg.target_language));
    });
  } catch (...) {
    persist();
    throw;
  }

  rec.accounting = client.accounting();
  persist();
  return rec;
}

CorpusRunResult run_corpus(const std::vector<CorpusEntry>& entries, const RunConfig& cfg,
                           const std::filesystem::path& out_dir) {
  if (entries.empty()) throw Error("corpus contains no documents");
  std::filesystem::create_directories(out_dir);

  const std::filesystem::path cache_dir =
      cfg.cache_dir.empty() ? out_dir / "cache" : std::filesystem::path(cfg.cache_dir);
  const PipelineContext ctx = make_context(cfg, cache_dir);

  write_json(out_dir / "config.json", cfg.to_json());

  CorpusRunResult result;
  result.documents.resize(entries.size());

  auto run_one = [&](std::size_t idx) {
    const Document& doc = entries[idx].source;
    DocumentOutcome& outcome = result.documents[idx];
    outcome.doc_id = doc.doc_id;

    const std::string dir_name = sanitize_doc_id(doc.doc_id);
    const std::filesystem::path tmp_dir = out_dir / (".tmp-" + dir_name);
    const std::filesystem::path final_dir = out_dir / dir_name;
    std::filesystem::remove_all(tmp_dir);

    try {
      const RunRecord rec = run_pipeline(doc, cfg, ctx, tmp_dir);
      outcome.ok = true;
      outcome.accounting = rec.accounting;
    } catch (const std::exception& e) {
      outcome.ok = false;
      outcome.error = e.what();
      if (std::filesystem::exists(tmp_dir / "accounting.json")) {
        try {
          outcome.accounting = read_json(tmp_dir / "accounting.json").get<Accounting>();
        } catch (...) {
        }
      }
    }
    // partial artifacts are kept on failure as well
    if (std::filesystem::exists(tmp_dir)) {
      std::filesystem::remove_all(final_dir);
      std::filesystem::rename(tmp_dir, final_dir);
    }
  };

  const int workers = std::max(1, cfg.workers);
  if (workers == 1 || entries.size() <= 1) {
    for (std::size_t i = 0; i < entries.size(); ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> threads;
    const std::size_t pool = std::min(static_cast<std::size_t>(workers), entries.size());
    for (std::size_t w = 0; w < pool; ++w) {
      threads.emplace_back([&] {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= entries.size()) return;
          run_one(i);
        }
      });
    }
    for (auto& t : threads) t.join();
  }

  Json docs = Json::array();
  for (const DocumentOutcome& outcome : result.documents) {
    result.total += outcome.accounting;
    if (!outcome.ok) ++result.failures;
    docs.push_back(Json{{"doc_id", outcome.doc_id},
                        {"status", outcome.ok ? "ok" : "failed"},
                        {"error", outcome.error},
                        {"accounting", outcome.accounting}});
  }
  write_json(out_dir / "summary.json",
             Json{{"documents", std::move(docs)},
                  {"corpus", Json{{"documents", entries.size()},
                                  {"failures", result.failures},
                                  {"accounting", result.total}}}});
  return result;
}

}  // namespace dagmt
