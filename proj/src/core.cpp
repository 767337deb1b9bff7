#include "dagmt/core.hpp"

#include <algorithm>
#include <cctype>

namespace dagmt {

namespace {

bool has_outer_whitespace_or_newline(const std::string& s) {
  if (s.empty()) return false;
  if (std::isspace(static_cast<unsigned char>(s.front())) ||
      std::isspace(static_cast<unsigned char>(s.back()))) {
    return true;
  }
  return s.find('\n') != std::string::npos || s.find('\r') != std::string::npos;
}

std::string primary_subtag(const std::string& tag) {
  std::string out;
  for (char c : tag) {
    if (c == '-' || c == '_') break;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

}  // namespace

void validate_document(const Document& doc) {
  if (doc.sentences.empty()) throw Error("document '" + doc.doc_id + "' has no sentences");
  for (std::size_t i = 0; i < doc.sentences.size(); ++i) {
    const Sentence& s = doc.sentences[i];
    if (s.index != static_cast<int>(i)) {
      throw Error("document '" + doc.doc_id + "': sentence index " + std::to_string(s.index) +
                  " at position " + std::to_string(i) + " is not contiguous from 0");
    }
    if (s.text.empty()) throw Error("document '" + doc.doc_id + "': empty sentence " + std::to_string(i));
    if (has_outer_whitespace_or_newline(s.text)) {
      throw Error("document '" + doc.doc_id + "': sentence " + std::to_string(i) +
                  " has outer whitespace or an internal newline");
    }
  }
}

void validate_segmentation(const Document& doc, const std::vector<Discourse>& segments) {
  if (segments.empty()) throw Error("segmentation is empty");
  const int n = doc.size();
  int expected_lo = 0;
  for (std::size_t k = 0; k < segments.size(); ++k) {
    const Discourse& d = segments[k];
    if (d.index != static_cast<int>(k)) {
      throw Error("discourse at position " + std::to_string(k) + " has index " + std::to_string(d.index));
    }
    if (d.lo > d.hi) throw Error("discourse " + std::to_string(k) + " has lo > hi");
    if (d.lo != expected_lo) {
      throw Error("discourse " + std::to_string(k) + " starts at " + std::to_string(d.lo) +
                  ", expected " + std::to_string(expected_lo));
    }
    expected_lo = d.hi + 1;
  }
  if (expected_lo != n) {
    throw Error("segmentation covers sentences up to " + std::to_string(expected_lo - 1) +
                " but document has " + std::to_string(n));
  }
}

void validate_graph(const DiscourseGraph& g) {
  const int k = g.node_count();
  for (int i = 0; i < k; ++i) {
    if (g.nodes[i].index != i) throw Error("graph node " + std::to_string(i) + " has wrong index");
  }
  for (const auto& [from, to] : g.edges) {
    if (from >= to) {
      throw Error("edge (" + std::to_string(from) + "," + std::to_string(to) + ") is not forward");
    }
    if (from < 0 || to >= k) {
      throw Error("edge (" + std::to_string(from) + "," + std::to_string(to) + ") out of range");
    }
  }
  for (int i = 1; i < k; ++i) {
    if (!g.has_edge(i - 1, i)) {
      throw Error("missing chain edge (" + std::to_string(i - 1) + "," + std::to_string(i) + ")");
    }
  }
}

void validate_local_memory(const LocalMemory& mem) {
  auto check = [](const OrderedMap& m, const char* name) {
    for (const auto& [k, v] : m) {
      if (k.empty()) throw Error(std::string(name) + " contains an empty key");
    }
  };
  check(mem.noun_pronoun, "noun_pronoun");
  check(mem.entities, "entities");
  check(mem.phrases, "phrases");
  check(mem.connectives, "connectives");
  if (mem.summary.find('\n') != std::string::npos) throw Error("summary contains a newline");
}

std::string joiner_for_language(const std::string& language_tag) {
  const std::string sub = primary_subtag(language_tag);
  if (sub == "zh" || sub == "ja") return "";
  return " ";
}

std::string discourse_text(const Document& doc, const Discourse& d, const std::string& separator) {
  if (d.lo < 0 || d.hi >= doc.size() || d.lo > d.hi) {
    throw RangeError("discourse span [" + std::to_string(d.lo) + "," + std::to_string(d.hi) +
                     "] outside document of " + std::to_string(doc.size()) + " sentences");
  }
  std::string out;
  for (int i = d.lo; i <= d.hi; ++i) {
    if (i > d.lo) out += separator;
    out += doc.sentences[i].text;
  }
  return out;
}

std::string discourse_text(const Document& doc, const Discourse& d) {
  return discourse_text(doc, d, joiner_for_language(doc.language));
}

std::string assemble(const std::vector<Translation>& translations, const std::string& separator) {
  std::string out;
  for (std::size_t i = 0; i < translations.size(); ++i) {
    const Translation& t = translations[i];
    if (t.discourse_index != static_cast<int>(i)) {
      throw AssemblyError("expected discourse index " + std::to_string(i) + ", got " +
                          std::to_string(t.discourse_index) +
                          (t.discourse_index < static_cast<int>(i) ? " (duplicate or unsorted)"
                                                                   : " (missing)"));
    }
    if (i > 0) out += separator;
    out += t.target_text;
  }
  return out;
}

// --- JSON -------------------------------------------------------------------

void to_json(Json& j, const Sentence& s) { j = Json{{"index", s.index}, {"text", s.text}}; }

void from_json(const Json& j, Sentence& s) {
  s.index = j.at("index").get<int>();
  s.text = j.at("text").get<std::string>();
}

void to_json(Json& j, const Document& d) {
  j = Json{{"doc_id", d.doc_id}, {"language", d.language}, {"sentences", d.sentences}};
}

void from_json(const Json& j, Document& d) {
  d.doc_id = j.at("doc_id").get<std::string>();
  d.language = j.at("language").get<std::string>();
  d.sentences = j.at("sentences").get<std::vector<Sentence>>();
}

void to_json(Json& j, const Discourse& d) {
  j = Json{{"index", d.index}, {"span", Json::array({d.lo, d.hi})}};
}

void from_json(const Json& j, Discourse& d) {
  d.index = j.at("index").get<int>();
  const auto& span = j.at("span");
  d.lo = span.at(0).get<int>();
  d.hi = span.at(1).get<int>();
}

void to_json(Json& j, const DiscourseGraph& g) {
  Json edges = Json::array();
  for (const auto& [from, to] : g.edges) edges.push_back(Json::array({from, to}));
  j = Json{{"nodes", g.nodes}, {"edges", std::move(edges)}};
}

void from_json(const Json& j, DiscourseGraph& g) {
  g.nodes = j.at("nodes").get<std::vector<Discourse>>();
  g.edges.clear();
  for (const auto& e : j.at("edges")) {
    g.edges.emplace(e.at(0).get<int>(), e.at(1).get<int>());
  }
}

void to_json(Json& j, const OrderedMap& m) {
  j = Json::object();
  for (const auto& [k, v] : m) j[k] = v;
}

void from_json(const Json& j, OrderedMap& m) {
  m = OrderedMap{};
  for (const auto& [k, v] : j.items()) m.insert(k, v.get<std::string>());
}

void to_json(Json& j, const LocalMemory& m) {
  j = Json{{"noun_pronoun", m.noun_pronoun},
           {"entities", m.entities},
           {"phrases", m.phrases},
           {"connectives", m.connectives},
           {"summary", m.summary}};
}

void from_json(const Json& j, LocalMemory& m) {
  m.noun_pronoun = j.at("noun_pronoun").get<OrderedMap>();
  m.entities = j.at("entities").get<OrderedMap>();
  m.phrases = j.at("phrases").get<OrderedMap>();
  m.connectives = j.at("connectives").get<OrderedMap>();
  m.summary = j.at("summary").get<std::string>();
}

void to_json(Json& j, const Translation& t) {
  j = Json{{"discourse_index", t.discourse_index},
           {"span", Json::array({t.lo, t.hi})},
           {"target_text", t.target_text}};
}

void from_json(const Json& j, Translation& t) {
  t.discourse_index = j.at("discourse_index").get<int>();
  const auto& span = j.at("span");
  t.lo = span.at(0).get<int>();
  t.hi = span.at(1).get<int>();
  t.target_text = j.at("target_text").get<std::string>();
}

}  // namespace dagmt
