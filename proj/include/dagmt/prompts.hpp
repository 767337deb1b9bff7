#pragma once

#include <map>
#include <string>
#include <vector>

#include "dagmt/core.hpp"

namespace dagmt {

enum class AgentKind {
  Segmentation,
  Edge,
  MemoryNounPronoun,
  MemoryEntities,
  MemoryPhrases,
  MemoryConnectives,
  MemorySummary,
  Translation,
};

std::string agent_kind_name(AgentKind kind);
AgentKind agent_kind_from_name(const std::string& name);
bool is_binary_agent(AgentKind kind);
bool is_memory_agent(AgentKind kind);

// Binary agents are constrained to one output token; memory and translation
// agents may produce up to 4096.
int default_max_output_tokens(AgentKind kind);

struct LangPair {
  std::string source;  // IETF tags
  std::string target;
};

// Human-readable language name for prompt text; falls back to the tag itself.
std::string language_display_name(const std::string& tag);

struct PromptTemplate {
  std::string id;
  std::string text;                // placeholders written {slot_name}
  std::vector<std::string> slots;  // every slot must be bound at render time
  int few_shot_count = 3;
};

// Single-pass placeholder substitution. Throws RenderError on a placeholder
// without a binding or a binding without a placeholder. Slot values are
// inserted verbatim and never re-scanned, so rendering is byte-deterministic.
std::string render(const PromptTemplate& tpl, const std::map<std::string, std::string>& slots);

// Deterministic text block for the translation prompt: one section per
// non-empty memory component, entries in insertion order. Empty memory
// renders as the empty string.
std::string render_memory_section(const LocalMemory& mem);

// Few-shot templates for the four agents. Each carries a task description,
// three in-context examples and the slotted input.
class PromptLibrary {
 public:
  PromptTemplate segmentation_decision(const LangPair& lang) const;  // current_segment, candidate_sentence
  PromptTemplate edge_relevance(const LangPair& lang) const;         // earlier_discourse, later_discourse
  PromptTemplate memory_component(AgentKind component, const LangPair& lang) const;  // source_discourse, translated_discourse
  PromptTemplate translation(const LangPair& lang) const;  // memory_section, source_discourse
};

}  // namespace dagmt
