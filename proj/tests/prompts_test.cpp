#include <doctest.h>

#include "dagmt/prompts.hpp"
#include "dagmt/errors.hpp"

using namespace dagmt;

static const LangPair kEnDe{"en", "de"};

TEST_CASE("render is deterministic and substitutes single-pass") {
  PromptTemplate tpl{"t", "before {a} mid {b} end", {"a", "b"}, 3};
  const std::string once = render(tpl, {{"a", "X"}, {"b", "Y"}});
  CHECK(once == "before X mid Y end");
  CHECK(render(tpl, {{"a", "X"}, {"b", "Y"}}) == once);
  // values containing placeholder syntax are inserted verbatim
  CHECK(render(tpl, {{"a", "{b}"}, {"b", "Y"}}) == "before {b} mid Y end");
}

TEST_CASE("render errors on unbound slots") {
  PromptTemplate tpl{"t", "has {a}", {"a"}, 3};
  CHECK_THROWS_AS(render(tpl, {}), RenderError);
  PromptTemplate undeclared{"t", "has {mystery}", {}, 3};
  CHECK_THROWS_AS(render(undeclared, {}), RenderError);
}

TEST_CASE("agent kinds map to names and token budgets") {
  CHECK(agent_kind_name(AgentKind::MemoryEntities) == "memory.entities");
  CHECK(agent_kind_from_name("segmentation") == AgentKind::Segmentation);
  CHECK_THROWS_AS(agent_kind_from_name("bogus"), Error);
  CHECK(default_max_output_tokens(AgentKind::Segmentation) == 1);
  CHECK(default_max_output_tokens(AgentKind::Edge) == 1);
  CHECK(default_max_output_tokens(AgentKind::MemorySummary) == 4096);
  CHECK(default_max_output_tokens(AgentKind::Translation) == 4096);
}

TEST_CASE("each template carries three in-context examples") {
  PromptLibrary lib;
  for (const PromptTemplate& tpl :
       {lib.segmentation_decision(kEnDe), lib.edge_relevance(kEnDe),
        lib.memory_component(AgentKind::MemoryNounPronoun, kEnDe),
        lib.memory_component(AgentKind::MemoryEntities, kEnDe),
        lib.memory_component(AgentKind::MemoryPhrases, kEnDe),
        lib.memory_component(AgentKind::MemoryConnectives, kEnDe),
        lib.memory_component(AgentKind::MemorySummary, kEnDe), lib.translation(kEnDe)}) {
    CHECK(tpl.few_shot_count == 3);
    CHECK(tpl.text.find("Example 1") != std::string::npos);
    CHECK(tpl.text.find("Example 2") != std::string::npos);
    CHECK(tpl.text.find("Example 3") != std::string::npos);
    CHECK(tpl.text.find("Example 4") == std::string::npos);
  }
}

TEST_CASE("memory section renders components in insertion order") {
  LocalMemory mem;
  mem.entities.insert("Bank", "Ufer");
  mem.entities.insert("Fluss", "Fluss");
  const std::string section = render_memory_section(mem);
  const auto bank = section.find("Bank => Ufer");
  const auto fluss = section.find("Fluss => Fluss");
  CHECK(bank != std::string::npos);
  CHECK(fluss != std::string::npos);
  CHECK(bank < fluss);
  CHECK(section.find("Noun-pronoun") == std::string::npos);  // empty components omitted
}

TEST_CASE("empty memory renders as the empty string") {
  CHECK(render_memory_section(LocalMemory{}) == "");
}

TEST_CASE("translation prompt embeds the memory section or omits it byte-for-byte") {
  PromptLibrary lib;
  const PromptTemplate tpl = lib.translation(kEnDe);
  const std::string without =
      render(tpl, {{"memory_section", ""}, {"source_discourse", "Hello."}});
  CHECK(without.find("Segment: Hello.") != std::string::npos);
  // the only memory-section marker is the one inside the few-shot example
  const auto first = without.find("Context memory");
  CHECK(first != std::string::npos);
  CHECK(without.find("Context memory", first + 1) == std::string::npos);

  LocalMemory mem;
  mem.entities.insert("Bank", "Ufer");
  const std::string with = render(
      tpl, {{"memory_section", render_memory_section(mem)}, {"source_discourse", "Hello."}});
  CHECK(with.find("- Bank => Ufer") != std::string::npos);
}

TEST_CASE("language display names") {
  CHECK(language_display_name("en") == "English");
  CHECK(language_display_name("zh-CN") == "Chinese");
  CHECK(language_display_name("xx") == "xx");
}
