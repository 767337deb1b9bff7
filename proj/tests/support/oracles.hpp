#pragma once

// Independent oracles used to freeze expected values. These deliberately share
// no computation path with the library implementations they check.

#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "dagmt/core.hpp"
#include "dagmt/tfidf.hpp"

namespace testsupport {

// Exhaustive path oracle: every strictly increasing node sequence of length
// 2..max_len whose consecutive pairs are all edges. Valid because the graphs
// under test only have forward edges.
inline std::vector<std::vector<int>> oracle_paths(const dagmt::DiscourseGraph& g, int max_len) {
  std::vector<std::vector<int>> result;
  const int n = g.node_count();
  std::vector<int> seq;

  auto grow = [&](auto&& self, int last) -> void {
    if (static_cast<int>(seq.size()) >= 2) result.push_back(seq);
    if (static_cast<int>(seq.size()) >= max_len) return;
    for (int next = last + 1; next < n; ++next) {
      if (g.edges.count({last, next})) {
        seq.push_back(next);
        self(self, next);
        seq.pop_back();
      }
    }
  };
  for (int start = 0; start < n; ++start) {
    seq = {start};
    grow(grow, start);
  }
  std::sort(result.begin(), result.end());
  return result;
}

// Brute-force pair enumeration for terminology consistency: literally loops
// unordered pairs and counts equalities.
inline double oracle_ctt(const std::vector<std::vector<std::string>>& per_term_translations) {
  double sum = 0.0;
  int scorable = 0;
  for (const auto& translations : per_term_translations) {
    if (translations.size() < 2) continue;
    int equal = 0, pairs = 0;
    for (std::size_t a = 0; a < translations.size(); ++a) {
      for (std::size_t b = a + 1; b < translations.size(); ++b) {
        ++pairs;
        if (translations[a] == translations[b]) ++equal;
      }
    }
    sum += static_cast<double>(equal) / static_cast<double>(pairs);
    ++scorable;
  }
  return sum / static_cast<double>(scorable);  // caller guarantees scorable > 0
}

// First-principles document BLEU with the same pinned conventions the
// implementation documents: counts via plain maps, closest reference length,
// 0.1 pseudo-counts on zero matches, orders without n-grams dropped.
inline double oracle_bleu(const std::vector<std::string>& hyp,
                          const std::vector<std::vector<std::string>>& refs) {
  auto grams = [](const std::vector<std::string>& toks, int n) {
    std::map<std::vector<std::string>, int> m;
    for (int i = 0; i + n <= static_cast<int>(toks.size()); ++i) {
      m[std::vector<std::string>(toks.begin() + i, toks.begin() + i + n)]++;
    }
    return m;
  };

  double log_sum = 0.0;
  int used = 0;
  for (int n = 1; n <= 4; ++n) {
    const auto h = grams(hyp, n);
    int total = 0, match = 0;
    for (const auto& [gram, count] : h) total += count;
    if (total == 0) continue;
    for (const auto& [gram, count] : h) {
      int best = 0;
      for (const auto& r : refs) {
        const auto rg = grams(r, n);
        auto it = rg.find(gram);
        if (it != rg.end()) best = std::max(best, it->second);
      }
      match += std::min(count, best);
    }
    const double numer = match > 0 ? static_cast<double>(match) : 0.1;
    log_sum += std::log(numer / total);
    ++used;
  }
  const double precision = std::exp(log_sum / used);

  long ref_len = static_cast<long>(refs[0].size());
  for (const auto& r : refs) {
    const long len = static_cast<long>(r.size());
    const long cur = std::labs(len - static_cast<long>(hyp.size()));
    const long best = std::labs(ref_len - static_cast<long>(hyp.size()));
    if (cur < best || (cur == best && len < ref_len)) ref_len = len;
  }
  const double bp = static_cast<long>(hyp.size()) >= ref_len
                        ? 1.0
                        : std::exp(1.0 - static_cast<double>(ref_len) /
                                             static_cast<double>(hyp.size()));
  return 100.0 * bp * precision;
}

// Map-based TF-IDF cosine (smoothed idf, raw tf), independent of
// TfidfVectorizer's dense vectors.
inline double oracle_tfidf_cosine(const std::vector<std::string>& fit_texts,
                                  const std::string& a, const std::string& b) {
  std::map<std::string, int> df;
  for (const auto& text : fit_texts) {
    std::set<std::string> seen;
    for (const auto& tok : dagmt::tfidf_tokenize(text)) {
      if (seen.insert(tok).second) ++df[tok];
    }
  }
  const double n = static_cast<double>(fit_texts.size());
  auto vec = [&](const std::string& text) {
    std::map<std::string, double> v;
    for (const auto& tok : dagmt::tfidf_tokenize(text)) {
      if (df.count(tok)) v[tok] += 1.0;
    }
    for (auto& [tok, w] : v) w *= std::log((1.0 + n) / (1.0 + df.at(tok))) + 1.0;
    return v;
  };
  const auto va = vec(a), vb = vec(b);
  double dot = 0, na = 0, nb = 0;
  for (const auto& [tok, w] : va) {
    na += w * w;
    if (vb.count(tok)) dot += w * vb.at(tok);
  }
  for (const auto& [tok, w] : vb) nb += w * w;
  if (na == 0 || nb == 0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace testsupport
