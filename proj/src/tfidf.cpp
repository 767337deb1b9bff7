#include "dagmt/tfidf.hpp"

#include <cctype>
#include <cmath>

#include "dagmt/utf8.hpp"

namespace dagmt {

namespace {

bool is_ascii_word_char(char32_t cp) {
  return (cp >= U'0' && cp <= U'9') || (cp >= U'a' && cp <= U'z') || (cp >= U'A' && cp <= U'Z') ||
         cp == U'\'' || cp == U'-';
}

char32_t ascii_lower(char32_t cp) {
  if (cp >= U'A' && cp <= U'Z') return cp + (U'a' - U'A');
  return cp;
}

}  // namespace

std::vector<std::string> tfidf_tokenize(const std::string& text) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    // trim leading/trailing apostrophes and hyphens left by stripping
    std::size_t b = current.find_first_not_of("'-");
    std::size_t e = current.find_last_not_of("'-");
    if (b != std::string::npos) tokens.push_back(current.substr(b, e - b + 1));
    current.clear();
  };
  for (char32_t cp : utf8_decode(text)) {
    if (is_space_free_script_char(cp)) {
      flush();
      tokens.push_back(utf8_encode(cp));
    } else if (is_ascii_word_char(cp)) {
      utf8_append(current, ascii_lower(cp));
    } else if (cp > 0x7F && !is_cjk_punctuation(cp)) {
      // non-ASCII letters (accented Latin, Cyrillic, ...) stay in the token
      utf8_append(current, cp);
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

TfidfVectorizer::TfidfVectorizer(const std::vector<std::string>& texts) {
  std::vector<std::size_t> df;
  for (const std::string& text : texts) {
    std::unordered_map<std::string, bool> seen;
    for (const std::string& tok : tfidf_tokenize(text)) {
      if (seen.emplace(tok, true).second) {
        auto [it, inserted] = vocab_.emplace(tok, df.size());
        if (inserted) df.push_back(0);
        ++df[it->second];
      }
    }
  }
  const double n = static_cast<double>(texts.size());
  idf_.resize(df.size());
  for (std::size_t i = 0; i < df.size(); ++i) {
    idf_[i] = std::log((1.0 + n) / (1.0 + static_cast<double>(df[i]))) + 1.0;
  }
}

std::vector<double> TfidfVectorizer::transform(const std::string& text) const {
  std::vector<double> v(idf_.size(), 0.0);
  for (const std::string& tok : tfidf_tokenize(text)) {
    auto it = vocab_.find(tok);
    if (it != vocab_.end()) v[it->second] += 1.0;
  }
  double norm_sq = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] *= idf_[i];
    norm_sq += v[i] * v[i];
  }
  if (norm_sq > 0.0) {
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (double& x : v) x *= inv;
  }
  return v;
}

double TfidfVectorizer::cosine(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t n = std::min(a.size(), b.size());
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < n; ++i) dot += a[i] * b[i];
  for (double x : a) na += x * x;
  for (double x : b) nb += x * x;
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace dagmt
