#pragma once

#include <string>
#include <vector>

#include "dagmt/core.hpp"
#include "dagmt/gateway.hpp"
#include "dagmt/prompts.hpp"

namespace dagmt {

struct MemoryFlags {
  bool noun_pronoun = true;
  bool entities = true;
  bool phrases = true;
  bool connectives = true;
  bool summary = true;

  bool any() const { return noun_pronoun || entities || phrases || connectives || summary; }
  int enabled_count() const {
    return (noun_pronoun ? 1 : 0) + (entities ? 1 : 0) + (phrases ? 1 : 0) +
           (connectives ? 1 : 0) + (summary ? 1 : 0);
  }
  static MemoryFlags none() { return MemoryFlags{false, false, false, false, false}; }
  friend bool operator==(const MemoryFlags&, const MemoryFlags&) = default;
};

// Extracts the five-component local memory from a (source discourse,
// translated discourse) pair with one LLM call per enabled component.
// Disabled components stay empty and issue no call. A component whose output
// cannot be parsed (after the client's one re-ask) raises ComponentError
// tagged with that component's name. Multi-line summaries are flattened to
// one line.
LocalMemory extract_memory(const std::string& source_text, const std::string& translated_text,
                           const LangPair& lang, LlmClient& client, const PromptLibrary& prompts,
                           const std::string& model, double temperature,
                           const MemoryFlags& flags = {});

struct AggregateOptions {
  int summary_cap = 5;                  // predecessor summaries kept, earliest first
  std::string summary_delimiter = " ";  // single delimiter between summaries
};

// Merges predecessor memories (given in ascending predecessor-index order)
// per component: the earliest binding of a key wins and later conflicting
// bindings are discarded; summaries are concatenated in order up to the cap.
LocalMemory aggregate_memories(const std::vector<LocalMemory>& predecessors,
                               const AggregateOptions& options = {});

}  // namespace dagmt
