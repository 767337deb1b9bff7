#include "dagmt/memory.hpp"

#include <cctype>

namespace dagmt {

namespace {

std::string flatten_to_one_line(const std::string& text) {
  std::string out;
  bool pending_space = false;
  for (char c : text) {
    if (c == '\n' || c == '\r' || c == '\t') c = ' ';
    if (c == ' ') {
      if (!out.empty()) pending_space = true;
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(c);
  }
  return out;
}

OrderedMap extract_map_component(AgentKind component, const std::string& source_text,
                                 const std::string& translated_text, const LangPair& lang,
                                 LlmClient& client, const PromptLibrary& prompts,
                                 const std::string& model, double temperature) {
  const PromptTemplate tpl = prompts.memory_component(component, lang);
  const std::string prompt = render(tpl, {{"source_discourse", source_text},
                                          {"translated_discourse", translated_text}});
  try {
    const Json obj = client.complete_json_object(
        ChatRequest::make(component, prompt, model, temperature));
    OrderedMap map;
    for (const auto& [key, value] : obj.items()) map.insert(key, value.get<std::string>());
    return map;
  } catch (const ParseError& e) {
    throw ComponentError(agent_kind_name(component), e.what());
  }
}

}  // namespace

LocalMemory extract_memory(const std::string& source_text, const std::string& translated_text,
                           const LangPair& lang, LlmClient& client, const PromptLibrary& prompts,
                           const std::string& model, double temperature,
                           const MemoryFlags& flags) {
  if (source_text.empty() || translated_text.empty()) {
    throw Error("memory extraction requires non-empty source and translation");
  }

  LocalMemory mem;
  auto map_component = [&](AgentKind kind) {
    return extract_map_component(kind, source_text, translated_text, lang, client, prompts,
                                 model, temperature);
  };

  if (flags.noun_pronoun) mem.noun_pronoun = map_component(AgentKind::MemoryNounPronoun);
  if (flags.entities) mem.entities = map_component(AgentKind::MemoryEntities);
  if (flags.phrases) mem.phrases = map_component(AgentKind::MemoryPhrases);
  if (flags.connectives) mem.connectives = map_component(AgentKind::MemoryConnectives);
  if (flags.summary) {
    const PromptTemplate tpl = prompts.memory_component(AgentKind::MemorySummary, lang);
    const std::string prompt = render(tpl, {{"source_discourse", source_text},
                                            {"translated_discourse", translated_text}});
    const BackendResponse resp =
        client.complete(ChatRequest::make(AgentKind::MemorySummary, prompt, model, temperature));
    mem.summary = flatten_to_one_line(resp.text);
  }
  validate_local_memory(mem);
  return mem;
}

LocalMemory aggregate_memories(const std::vector<LocalMemory>& predecessors,
                               const AggregateOptions& options) {
  LocalMemory merged;
  int summaries_kept = 0;
  for (const LocalMemory& mem : predecessors) {
    // OrderedMap::insert keeps the first binding, which is the earliest
    // predecessor's because iteration is in ascending predecessor order.
    for (const auto& [k, v] : mem.noun_pronoun) merged.noun_pronoun.insert(k, v);
    for (const auto& [k, v] : mem.entities) merged.entities.insert(k, v);
    for (const auto& [k, v] : mem.phrases) merged.phrases.insert(k, v);
    for (const auto& [k, v] : mem.connectives) merged.connectives.insert(k, v);
    if (!mem.summary.empty() && summaries_kept < options.summary_cap) {
      if (summaries_kept > 0) merged.summary += options.summary_delimiter;
      merged.summary += mem.summary;
      ++summaries_kept;
    }
  }
  return merged;
}

}  // namespace dagmt
