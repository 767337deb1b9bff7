#pragma once

#include <string>
#include <unordered_map>
#include <vector>

namespace dagmt {

// Whitespace tokenization with a per-character fallback for space-free
// scripts: ASCII is lowercased, surrounding punctuation is stripped, and each
// Han/kana/Hangul character becomes its own token.
std::vector<std::string> tfidf_tokenize(const std::string& text);

// TF-IDF over a fixed set of fit texts. Smoothed inverse document frequency
// idf(t) = ln((1+N)/(1+df(t))) + 1, raw term counts, L2-normalized output.
class TfidfVectorizer {
 public:
  explicit TfidfVectorizer(const std::vector<std::string>& texts);

  // Dense vector over the fitted vocabulary; tokens unseen at fit time are
  // ignored. All-zero input yields the zero vector.
  std::vector<double> transform(const std::string& text) const;

  std::size_t vocabulary_size() const { return idf_.size(); }

  // Cosine similarity; zero vectors have similarity 0.
  static double cosine(const std::vector<double>& a, const std::vector<double>& b);

 private:
  std::unordered_map<std::string, std::size_t> vocab_;
  std::vector<double> idf_;
};

}  // namespace dagmt
