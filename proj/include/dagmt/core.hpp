#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dagmt/errors.hpp"
#include "dagmt/json.hpp"

namespace dagmt {

// A string->string map that preserves insertion order. Keys are unique;
// insert keeps the first binding of a key (later bindings are rejected),
// which is exactly the conflict rule memory aggregation needs.
class OrderedMap {
 public:
  using Item = std::pair<std::string, std::string>;
  using const_iterator = std::vector<Item>::const_iterator;

  bool insert(std::string key, std::string value) {
    if (find(key) != nullptr) return false;
    items_.emplace_back(std::move(key), std::move(value));
    return true;
  }

  const std::string* find(std::string_view key) const {
    for (const auto& [k, v] : items_) {
      if (k == key) return &v;
    }
    return nullptr;
  }

  bool contains(std::string_view key) const { return find(key) != nullptr; }
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  const_iterator begin() const { return items_.begin(); }
  const_iterator end() const { return items_.end(); }
  friend bool operator==(const OrderedMap& a, const OrderedMap& b) { return a.items_ == b.items_; }

 private:
  std::vector<Item> items_;
};

struct Sentence {
  int index = 0;
  std::string text;

  friend bool operator==(const Sentence&, const Sentence&) = default;
};

struct Document {
  std::string doc_id;
  std::vector<Sentence> sentences;
  std::string language;  // IETF tag, e.g. "en", "zh-CN"

  int size() const { return static_cast<int>(sentences.size()); }
  friend bool operator==(const Document&, const Document&) = default;
};

// Contiguous sentence span [lo, hi], a node of the discourse graph.
struct Discourse {
  int index = 0;
  int lo = 0;
  int hi = 0;

  int sentence_count() const { return hi - lo + 1; }
  friend bool operator==(const Discourse&, const Discourse&) = default;
};

struct DiscourseGraph {
  std::vector<Discourse> nodes;
  std::set<std::pair<int, int>> edges;  // (from, to), from < to

  int node_count() const { return static_cast<int>(nodes.size()); }
  bool has_edge(int from, int to) const { return edges.count({from, to}) > 0; }
  friend bool operator==(const DiscourseGraph&, const DiscourseGraph&) = default;
};

// The five-component structured memory extracted from one (source, translation)
// pair: noun->pronoun map, entity map, phrase map, connective translations and
// a one-line target-language summary.
struct LocalMemory {
  OrderedMap noun_pronoun;
  OrderedMap entities;
  OrderedMap phrases;
  OrderedMap connectives;
  std::string summary;

  bool empty() const {
    return noun_pronoun.empty() && entities.empty() && phrases.empty() && connectives.empty() &&
           summary.empty();
  }
  friend bool operator==(const LocalMemory&, const LocalMemory&) = default;
};

struct Translation {
  int discourse_index = 0;
  int lo = 0;  // source span echo for traceability
  int hi = 0;
  std::string target_text;

  friend bool operator==(const Translation&, const Translation&) = default;
};

// --- invariant checks -------------------------------------------------------

// Throws Error when a Sentence/Document invariant is violated.
void validate_document(const Document& doc);

// A valid segmentation is contiguous, non-overlapping and exhaustive over
// the document's sentence indices, with discourse indices 0..K-1.
void validate_segmentation(const Document& doc, const std::vector<Discourse>& segments);

// Edges must point forward, chain edges (i-1 -> i) must all be present,
// no self edges, endpoints in range.
void validate_graph(const DiscourseGraph& g);

void validate_local_memory(const LocalMemory& mem);

// --- operations -------------------------------------------------------------

// Joining separator for sentences / translated segments of a language:
// empty for scripts written without spaces (zh, ja), single space otherwise.
std::string joiner_for_language(const std::string& language_tag);

// Sentences d.lo..d.hi joined by `separator`. Throws RangeError when the span
// is outside the document.
std::string discourse_text(const Document& doc, const Discourse& d, const std::string& separator);
std::string discourse_text(const Document& doc, const Discourse& d);  // language-derived separator

// Concatenates target_text in discourse-index order. The input must contain
// exactly the indices 0..K-1 in ascending order; otherwise AssemblyError.
std::string assemble(const std::vector<Translation>& translations, const std::string& separator);

// --- JSON wire format -------------------------------------------------------

void to_json(Json& j, const Sentence& s);
void from_json(const Json& j, Sentence& s);
void to_json(Json& j, const Document& d);
void from_json(const Json& j, Document& d);
void to_json(Json& j, const Discourse& d);
void from_json(const Json& j, Discourse& d);
void to_json(Json& j, const DiscourseGraph& g);
void from_json(const Json& j, DiscourseGraph& g);
void to_json(Json& j, const OrderedMap& m);
void from_json(const Json& j, OrderedMap& m);
void to_json(Json& j, const LocalMemory& m);
void from_json(const Json& j, LocalMemory& m);
void to_json(Json& j, const Translation& t);
void from_json(const Json& j, Translation& t);

}  // namespace dagmt
