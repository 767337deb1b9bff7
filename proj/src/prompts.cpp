#include "dagmt/prompts.hpp"

#include <array>

#include "dagmt/errors.hpp"

namespace dagmt {

std::string agent_kind_name(AgentKind kind) {
  switch (kind) {
    case AgentKind::Segmentation: return "segmentation";
    case AgentKind::Edge: return "edge";
    case AgentKind::MemoryNounPronoun: return "memory.noun_pronoun";
    case AgentKind::MemoryEntities: return "memory.entities";
    case AgentKind::MemoryPhrases: return "memory.phrases";
    case AgentKind::MemoryConnectives: return "memory.connectives";
    case AgentKind::MemorySummary: return "memory.summary";
    case AgentKind::Translation: return "translation";
  }
  throw Error("unknown agent kind");
}

AgentKind agent_kind_from_name(const std::string& name) {
  static const std::array<AgentKind, 8> kinds = {
      AgentKind::Segmentation,     AgentKind::Edge,           AgentKind::MemoryNounPronoun,
      AgentKind::MemoryEntities,   AgentKind::MemoryPhrases,  AgentKind::MemoryConnectives,
      AgentKind::MemorySummary,    AgentKind::Translation};
  for (AgentKind k : kinds) {
    if (agent_kind_name(k) == name) return k;
  }
  throw Error("unknown agent kind '" + name + "'");
}

bool is_binary_agent(AgentKind kind) {
  return kind == AgentKind::Segmentation || kind == AgentKind::Edge;
}

bool is_memory_agent(AgentKind kind) {
  switch (kind) {
    case AgentKind::MemoryNounPronoun:
    case AgentKind::MemoryEntities:
    case AgentKind::MemoryPhrases:
    case AgentKind::MemoryConnectives:
    case AgentKind::MemorySummary: return true;
    default: return false;
  }
}

int default_max_output_tokens(AgentKind kind) { return is_binary_agent(kind) ? 1 : 4096; }

std::string language_display_name(const std::string& tag) {
  std::string sub;
  for (char c : tag) {
    if (c == '-' || c == '_') break;
    sub.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (sub == "en") return "English";
  if (sub == "de") return "German";
  if (sub == "fr") return "French";
  if (sub == "ja") return "Japanese";
  if (sub == "zh") return "Chinese";
  if (sub == "es") return "Spanish";
  if (sub == "it") return "Italian";
  if (sub == "pt") return "Portuguese";
  if (sub == "ru") return "Russian";
  if (sub == "ko") return "Korean";
  return tag;
}

namespace {

// Placeholders are identifier-shaped; literal braces (e.g. JSON in few-shot
// examples) pass through untouched.
bool is_slot_name(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  }
  return true;
}

}  // namespace

std::string render(const PromptTemplate& tpl, const std::map<std::string, std::string>& slots) {
  for (const std::string& slot : tpl.slots) {
    if (!slots.count(slot)) {
      throw RenderError("template '" + tpl.id + "': slot '" + slot + "' is not bound");
    }
  }
  std::string out;
  out.reserve(tpl.text.size());
  std::size_t i = 0;
  while (i < tpl.text.size()) {
    const char c = tpl.text[i];
    if (c == '{') {
      const std::size_t close = tpl.text.find('}', i + 1);
      if (close != std::string::npos) {
        const std::string name = tpl.text.substr(i + 1, close - i - 1);
        if (is_slot_name(name)) {
          auto it = slots.find(name);
          if (it == slots.end()) {
            throw RenderError("template '" + tpl.id + "': slot '" + name + "' is not bound");
          }
          out += it->second;  // inserted verbatim, never re-scanned
          i = close + 1;
          continue;
        }
      }
    }
    out.push_back(c);
    ++i;
  }
  return out;
}

std::string render_memory_section(const LocalMemory& mem) {
  if (mem.empty()) return "";
  std::string out = "Context memory from related discourse segments (earliest bindings take precedence):\n";
  auto section = [&out](const char* title, const OrderedMap& m) {
    if (m.empty()) return;
    out += title;
    out += "\n";
    for (const auto& [src, tgt] : m) {
      out += "- " + src + " => " + tgt + "\n";
    }
  };
  section("Noun-pronoun mappings:", mem.noun_pronoun);
  section("Entity translations:", mem.entities);
  section("Phrase translations:", mem.phrases);
  section("Connective translations:", mem.connectives);
  if (!mem.summary.empty()) {
    out += "Summary of related segments: " + mem.summary + "\n";
  }
  out += "\n";
  return out;
}

namespace {

// All template text is assembled from fixed strings plus the language names,
// so rendering the same inputs always yields identical bytes.

const char* kSegmentationExamples =
    "Example 1:\n"
    "Current segment: The committee met on Monday to discuss the budget. The chair opened with a "
    "summary of last year's spending.\n"
    "Next sentence: She then invited questions from the members.\n"
    "Answer: yes\n"
    "\n"
    "Example 2:\n"
    "Current segment: The committee met on Monday to discuss the budget. The chair opened with a "
    "summary of last year's spending.\n"
    "Next sentence: Far away in the harbour, a storm was gathering.\n"
    "Answer: no\n"
    "\n"
    "Example 3:\n"
    "Current segment: Maria finally opened the letter.\n"
    "Next sentence: Her hands trembled as she unfolded the page.\n"
    "Answer: yes\n";

const char* kEdgeExamples =
    "Example 1:\n"
    "Earlier segment: Dr. Alvarez presented the fusion reactor prototype. The reactor uses a "
    "compact toroidal chamber.\n"
    "Later segment: Her team expects the chamber design to cut costs by half.\n"
    "Answer: yes\n"
    "\n"
    "Example 2:\n"
    "Earlier segment: The museum reopened after a decade of renovation.\n"
    "Later segment: Local farmers reported an unusually dry spring this year.\n"
    "Answer: no\n"
    "\n"
    "Example 3:\n"
    "Earlier segment: The startup launched Kite, a payments app for small vendors.\n"
    "Later segment: Kite's user base doubled within three months of launch.\n"
    "Answer: yes\n";

}  // namespace

PromptTemplate PromptLibrary::segmentation_decision(const LangPair& lang) const {
  PromptTemplate tpl;
  tpl.id = "segmentation_decision";
  tpl.slots = {"current_segment", "candidate_sentence"};
  tpl.text =
      "You are the segmentation step of a document translation pipeline for " +
      language_display_name(lang.source) +
      " documents.\n"
      "Given the discourse segment currently under construction and the next sentence of the "
      "document, decide whether the sentence belongs to the current segment. A discourse segment "
      "is a contiguous run of sentences forming one coherent, self-contained unit for "
      "translation; start a new segment when the topic, scene or rhetorical thread changes.\n"
      "Answer with exactly one word: yes or no.\n\n" +
      std::string(kSegmentationExamples) +
      "\n"
      "Current segment: {current_segment}\n"
      "Next sentence: {candidate_sentence}\n"
      "Answer:";
  return tpl;
}

PromptTemplate PromptLibrary::edge_relevance(const LangPair& lang) const {
  PromptTemplate tpl;
  tpl.id = "edge_relevance";
  tpl.slots = {"earlier_discourse", "later_discourse"};
  tpl.text =
      "You are the dependency detection step of a document translation pipeline for " +
      language_display_name(lang.source) +
      " documents.\n"
      "Given two non-adjacent discourse segments from the same document, decide whether "
      "translating the later segment needs context produced while translating the earlier one: "
      "shared entities or terminology, pronoun antecedents, or discourse relations that must stay "
      "consistent.\n"
      "Answer with exactly one word: yes or no.\n\n" +
      std::string(kEdgeExamples) +
      "\n"
      "Earlier segment: {earlier_discourse}\n"
      "Later segment: {later_discourse}\n"
      "Answer:";
  return tpl;
}

PromptTemplate PromptLibrary::memory_component(AgentKind component, const LangPair& lang) const {
  if (!is_memory_agent(component)) throw Error("memory_component called with a non-memory agent");
  const std::string src = language_display_name(lang.source);
  const std::string tgt = language_display_name(lang.target);
  const std::string header =
      "You are the memory extraction step of a " + src + " to " + tgt +
      " document translation pipeline.\n";
  const std::string footer =
      "\nSource segment: {source_discourse}\n"
      "Translated segment: {translated_discourse}\n"
      "Answer:";

  PromptTemplate tpl;
  tpl.id = agent_kind_name(component);
  tpl.slots = {"source_discourse", "translated_discourse"};

  switch (component) {
    case AgentKind::MemoryNounPronoun:
      tpl.text =
          header +
          "From the source discourse segment and its translation, extract the nouns that are "
          "referred to by pronouns, mapping each source noun to the " + tgt +
          " pronoun used for it in the translation.\n"
          "Respond with a single flat JSON object mapping source nouns to target pronouns. "
          "Respond with {} if there are none.\n\n"
          "Example 1 (English to German):\n"
          "Source segment: The engineer checked the bridge. It had survived the flood.\n"
          "Translated segment: Die Ingenieurin pruefte die Bruecke. Sie hatte die Flut "
          "ueberstanden.\n"
          "Answer: {\"bridge\": \"sie\"}\n\n"
          "Example 2 (English to German):\n"
          "Source segment: Numbers rarely lie.\n"
          "Translated segment: Zahlen luegen selten.\n"
          "Answer: {}\n\n"
          "Example 3 (English to German):\n"
          "Source segment: Tom sold his car because he never drove it.\n"
          "Translated segment: Tom verkaufte sein Auto, weil er es nie fuhr.\n"
          "Answer: {\"Tom\": \"er\", \"car\": \"es\"}\n" +
          footer;
      break;
    case AgentKind::MemoryEntities:
      tpl.text =
          header +
          "From the source discourse segment and its translation, extract named entities and "
          "recurring domain terms, mapping each source-language entity to the " + tgt +
          " translation used for it.\n"
          "Respond with a single flat JSON object mapping source entities to target entities. "
          "Respond with {} if there are none.\n\n"
          "Example 1 (English to German):\n"
          "Source segment: The Rhine flooded the old town of Basel.\n"
          "Translated segment: Der Rhein ueberflutete die Altstadt von Basel.\n"
          "Answer: {\"Rhine\": \"Rhein\", \"Basel\": \"Basel\"}\n\n"
          "Example 2 (English to German):\n"
          "Source segment: It rained all week.\n"
          "Translated segment: Es regnete die ganze Woche.\n"
          "Answer: {}\n\n"
          "Example 3 (English to German):\n"
          "Source segment: The central bank raised its policy rate again.\n"
          "Translated segment: Die Zentralbank erhoehte erneut ihren Leitzins.\n"
          "Answer: {\"central bank\": \"Zentralbank\", \"policy rate\": \"Leitzins\"}\n" +
          footer;
      break;
    case AgentKind::MemoryPhrases:
      tpl.text =
          header +
          "From the source discourse segment and its translation, extract multi-word phrases "
          "whose wording should stay consistent later in the document, mapping each source "
          "phrase to the " + tgt +
          " phrase used in the translation.\n"
          "Respond with a single flat JSON object mapping source phrases to target phrases. "
          "Respond with {} if there are none.\n\n"
          "Example 1 (English to German):\n"
          "Source segment: The committee approved the five-year plan in principle.\n"
          "Translated segment: Der Ausschuss billigte den Fuenfjahresplan grundsaetzlich.\n"
          "Answer: {\"five-year plan\": \"Fuenfjahresplan\", \"in principle\": "
          "\"grundsaetzlich\"}\n\n"
          "Example 2 (English to German):\n"
          "Source segment: Yes.\n"
          "Translated segment: Ja.\n"
          "Answer: {}\n\n"
          "Example 3 (English to German):\n"
          "Source segment: She signed the letter of intent on Friday.\n"
          "Translated segment: Sie unterzeichnete die Absichtserklaerung am Freitag.\n"
          "Answer: {\"letter of intent\": \"Absichtserklaerung\"}\n" +
          footer;
      break;
    case AgentKind::MemoryConnectives:
      tpl.text =
          header +
          "From the source discourse segment and its translation, extract the discourse "
          "connectives (for example: however, therefore, meanwhile), mapping each source "
          "connective to the " + tgt +
          " connective used in the translation.\n"
          "Respond with a single flat JSON object mapping source connectives to target "
          "connectives. Respond with {} if there are none.\n\n"
          "Example 1 (English to German):\n"
          "Source segment: However, the plan failed. Therefore, we start over.\n"
          "Translated segment: Der Plan scheiterte jedoch. Deshalb fangen wir von vorn an.\n"
          "Answer: {\"however\": \"jedoch\", \"therefore\": \"deshalb\"}\n\n"
          "Example 2 (English to German):\n"
          "Source segment: The door was open.\n"
          "Translated segment: Die Tuer war offen.\n"
          "Answer: {}\n\n"
          "Example 3 (English to German):\n"
          "Source segment: Meanwhile, the others waited outside.\n"
          "Translated segment: Inzwischen warteten die anderen draussen.\n"
          "Answer: {\"meanwhile\": \"inzwischen\"}\n" +
          footer;
      break;
    case AgentKind::MemorySummary:
      tpl.text =
          header +
          "Write a concise one-line summary of the discourse segment in " + tgt +
          ", so that later segments can be translated consistently with it.\n"
          "Respond with exactly one line of text and nothing else.\n\n"
          "Example 1 (English to German):\n"
          "Source segment: The committee met on Monday. It approved the budget after a short "
          "debate.\n"
          "Translated segment: Der Ausschuss tagte am Montag. Er billigte das Budget nach kurzer "
          "Debatte.\n"
          "Answer: Der Ausschuss billigte am Montag das Budget.\n\n"
          "Example 2 (English to German):\n"
          "Source segment: Maria opened the letter. Her hands trembled.\n"
          "Translated segment: Maria oeffnete den Brief. Ihre Haende zitterten.\n"
          "Answer: Maria oeffnete nervoes den Brief.\n\n"
          "Example 3 (English to German):\n"
          "Source segment: Prices rose sharply in March.\n"
          "Translated segment: Die Preise stiegen im Maerz stark.\n"
          "Answer: Die Preise stiegen im Maerz stark.\n" +
          footer;
      break;
    default: break;
  }
  return tpl;
}

PromptTemplate PromptLibrary::translation(const LangPair& lang) const {
  const std::string src = language_display_name(lang.source);
  const std::string tgt = language_display_name(lang.target);
  PromptTemplate tpl;
  tpl.id = "translation";
  tpl.slots = {"memory_section", "source_discourse"};
  tpl.text =
      "You are the translation step of a document translation pipeline. Translate the discourse "
      "segment below from " + src + " to " + tgt + ".\n"
      "Keep names, terminology, pronouns and connectives consistent with the context memory when "
      "one is provided, preferring its earliest bindings. Respond with only the translation.\n\n"
      "Example 1 (English to German, no memory):\n"
      "Segment: The harbour was quiet at dawn.\n"
      "Translation: Der Hafen war im Morgengrauen still.\n\n"
      "Example 2 (English to German, with memory):\n"
      "Context memory from related discourse segments (earliest bindings take precedence):\n"
      "Entity translations:\n"
      "- Kite => Kite\n"
      "Segment: Kite doubled its user base.\n"
      "Translation: Kite verdoppelte seine Nutzerbasis.\n\n"
      "Example 3 (English to German, no memory):\n"
      "Segment: She smiled. Then she left.\n"
      "Translation: Sie laechelte. Dann ging sie.\n\n"
      "{memory_section}Segment: {source_discourse}\n"
      "Translation:";
  return tpl;
}

}  // namespace dagmt
