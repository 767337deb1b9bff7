#pragma once

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dagmt/config.hpp"
#include "dagmt/core.hpp"
#include "dagmt/gateway.hpp"
#include "dagmt/json.hpp"

namespace testsupport {

// Unique scratch directory, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& hint = "dagmt-test") {
    static std::atomic<unsigned> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            (hint + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline dagmt::Document make_doc(const std::vector<std::string>& sentences,
                                const std::string& lang = "en",
                                const std::string& doc_id = "doc") {
  dagmt::Document doc;
  doc.doc_id = doc_id;
  doc.language = lang;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    doc.sentences.push_back(dagmt::Sentence{static_cast<int>(i), sentences[i]});
  }
  return doc;
}

inline dagmt::Document random_doc(std::mt19937_64& rng, int min_sentences, int max_sentences,
                                  const std::string& lang = "en") {
  static const std::vector<std::string> vocab = {
      "river", "bridge", "committee", "budget", "storm",  "harbour", "letter",
      "engine", "reactor", "market",  "reads",  "crosses", "funds",  "watches",
      "opens",  "closes",  "quietly", "quickly", "today",  "tomorrow"};
  const int n =
      min_sentences + static_cast<int>(rng() % static_cast<unsigned>(max_sentences - min_sentences + 1));
  std::vector<std::string> sentences;
  for (int i = 0; i < n; ++i) {
    const int words = 3 + static_cast<int>(rng() % 5);
    std::string s;
    for (int w = 0; w < words; ++w) {
      if (w > 0) s += " ";
      s += vocab[rng() % vocab.size()];
    }
    s += ".";
    sentences.push_back(s);
  }
  return make_doc(sentences, lang, "rand");
}

// Builds a mock script whose per-agent ordinal responses mirror the
// pipeline's deterministic call order: all segmentation decisions, then all
// edge answers (ascending (i, j) pair order), then per node a translation
// followed by the five memory components.
class ScriptBuilder {
 public:
  ScriptBuilder& segmentation(const std::vector<bool>& decisions) {
    for (bool d : decisions) append("segmentation", d ? "yes" : "no");
    return *this;
  }
  ScriptBuilder& edges(const std::vector<bool>& answers) {
    for (bool a : answers) append("edge", a ? "yes" : "no");
    return *this;
  }
  // One node's worth of responses. Memory components default to small maps
  // derived from the label so values are distinct across nodes.
  ScriptBuilder& node(const std::string& translation) {
    append("translation", translation);
    append("memory.noun_pronoun", "{}");
    append("memory.entities", "{}");
    append("memory.phrases", "{}");
    append("memory.connectives", "{}");
    append("memory.summary", "summary of " + translation);
    return *this;
  }
  ScriptBuilder& node(const std::string& translation, const std::string& noun_pronoun,
                      const std::string& entities, const std::string& phrases,
                      const std::string& connectives, const std::string& summary) {
    append("translation", translation);
    append("memory.noun_pronoun", noun_pronoun);
    append("memory.entities", entities);
    append("memory.phrases", phrases);
    append("memory.connectives", connectives);
    append("memory.summary", summary);
    return *this;
  }
  ScriptBuilder& translation_only(const std::string& translation) {
    append("translation", translation);
    return *this;
  }
  ScriptBuilder& raw(const std::string& agent, const std::string& response) {
    append(agent, response);
    return *this;
  }

  dagmt::Json script() const { return script_; }

  std::shared_ptr<dagmt::MockBackend> backend() const {
    return std::make_shared<dagmt::MockBackend>(script_);
  }

  void save(const std::filesystem::path& path) const {
    write_file(path, script_.dump(2) + "\n");
  }

 private:
  void append(const std::string& agent, const std::string& response) {
    const long ordinal = counters_[agent]++;
    script_.push_back(dagmt::Json{
        {"match", dagmt::Json{{"agent", agent}, {"ordinal", ordinal}}},
        {"response", response}});
  }

  dagmt::Json script_ = dagmt::Json::array();
  mutable std::map<std::string, long> counters_;
};

// Config wired to a mock script, caching off by default so per-agent
// ordinals stay aligned across repeated in-process runs.
inline dagmt::RunConfig mock_config(const std::filesystem::path& script_path) {
  dagmt::RunConfig cfg;
  cfg.backend.kind = "mock";
  cfg.backend.mock_script = script_path.string();
  cfg.cache_enabled = false;
  return cfg;
}

}  // namespace testsupport
