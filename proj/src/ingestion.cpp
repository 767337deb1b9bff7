#include "dagmt/ingestion.hpp"

#include <fstream>
#include <sstream>

#include <unicode/unorm2.h>
#include <unicode/ustring.h>

#include "dagmt/json.hpp"
#include "dagmt/utf8.hpp"

namespace dagmt {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::vector<std::string>> read_line_blocks(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<std::vector<std::string>> blocks;
  std::vector<std::string> current;
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty()) {
      if (!current.empty()) blocks.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(t);
    }
  }
  if (!current.empty()) blocks.push_back(std::move(current));
  return blocks;
}

Document document_from_sentences(std::string doc_id, const std::vector<std::string>& texts,
                                 const std::string& language) {
  Document doc;
  doc.doc_id = std::move(doc_id);
  doc.language = language;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    doc.sentences.push_back(Sentence{static_cast<int>(i), texts[i]});
  }
  validate_document(doc);
  return doc;
}

std::string format_doc_id(std::size_t i) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "doc%04zu", i + 1);
  return buf;
}

bool is_terminal(char32_t cp) {
  return cp == U'.' || cp == U'!' || cp == U'?' || cp == 0x3002 /*。*/ ||
         cp == 0xFF01 /*！*/ || cp == 0xFF1F /*？*/ || cp == 0x2026 /*…*/;
}

bool is_closing(char32_t cp) {
  switch (cp) {
    case U'"': case U'\'': case U')': case U']': case U'}':
    case 0x2019 /*’*/: case 0x201D /*”*/: case 0x00BB /*»*/:
    case 0x300D /*」*/: case 0x300F /*』*/: case 0x3011 /*】*/:
    case 0x3009 /*〉*/: case 0x300B /*》*/: case 0xFF09 /*）*/:
      return true;
    default:
      return false;
  }
}

bool is_space_cp(char32_t cp) {
  return cp == U' ' || cp == U'\t' || cp == U'\n' || cp == U'\r' || cp == 0x3000;
}

}  // namespace

std::string normalize_nfc(const std::string& utf8) {
  UErrorCode status = U_ZERO_ERROR;
  const UNormalizer2* nfc = unorm2_getNFCInstance(&status);
  if (U_FAILURE(status)) throw Error("ICU NFC instance unavailable");

  // UTF-8 -> UTF-16
  std::vector<UChar> u16(utf8.size() + 1);
  int32_t u16_len = 0;
  u_strFromUTF8(u16.data(), static_cast<int32_t>(u16.size()), &u16_len, utf8.data(),
                static_cast<int32_t>(utf8.size()), &status);
  if (U_FAILURE(status)) throw Error("input is not valid UTF-8");

  std::vector<UChar> out(u16_len * 2 + 16);
  const int32_t out_len = unorm2_normalize(nfc, u16.data(), u16_len, out.data(),
                                           static_cast<int32_t>(out.size()), &status);
  if (U_FAILURE(status)) throw Error("NFC normalization failed");

  std::string result(out_len * 4 + 4, '\0');
  int32_t result_len = 0;
  u_strToUTF8(result.data(), static_cast<int32_t>(result.size()), &result_len, out.data(),
              out_len, &status);
  if (U_FAILURE(status)) throw Error("NFC result conversion failed");
  result.resize(result_len);
  return result;
}

const std::vector<std::string>& default_abbreviations() {
  static const std::vector<std::string> abbrevs = {
      "Dr.", "Mr.", "Mrs.", "Ms.", "Prof.", "St.", "Jr.", "Sr.", "vs.",
      "etc.", "e.g.", "i.e.", "cf.", "Fig.", "No.", "Vol.", "approx.",
  };
  return abbrevs;
}

Document preprocess(const std::string& raw_text, const std::string& language,
                    const std::string& doc_id, const std::vector<std::string>& abbreviations) {
  if (trim(raw_text).empty()) throw Error("preprocess requires non-empty text");

  // normalize, then collapse all whitespace runs to single spaces
  const std::vector<char32_t> cps = utf8_decode(normalize_nfc(raw_text));
  std::vector<char32_t> text;
  text.reserve(cps.size());
  for (char32_t cp : cps) {
    if (is_space_cp(cp)) {
      if (!text.empty() && text.back() != U' ') text.push_back(U' ');
    } else {
      text.push_back(cp);
    }
  }
  while (!text.empty() && text.back() == U' ') text.pop_back();

  auto ends_with_abbreviation = [&](std::size_t period_pos) {
    // word = maximal run of non-space characters ending at the period,
    // with leading opening punctuation stripped
    std::size_t start = period_pos + 1;
    while (start > 0 && !is_space_cp(text[start - 1])) --start;
    while (start <= period_pos && (text[start] == U'(' || text[start] == U'"' ||
                                   text[start] == U'\'' || text[start] == 0x201C ||
                                   text[start] == 0x2018 || text[start] == U'[')) {
      ++start;
    }
    std::string word;
    for (std::size_t k = start; k <= period_pos; ++k) utf8_append(word, text[k]);
    for (const std::string& a : abbreviations) {
      if (word == a) return true;
    }
    return false;
  };

  std::vector<std::string> sentences;
  std::string current;
  std::size_t i = 0;
  while (i < text.size()) {
    const char32_t cp = text[i];
    utf8_append(current, cp);
    if (is_terminal(cp)) {
      // an abbreviation period does not end a sentence
      if (cp == U'.' && ends_with_abbreviation(i)) {
        ++i;
        continue;
      }
      // absorb the rest of a terminal run (e.g. "?!" or "...") and closers
      std::size_t j = i + 1;
      while (j < text.size() && (is_terminal(text[j]) || is_closing(text[j]))) {
        utf8_append(current, text[j]);
        ++j;
      }
      // boundary when followed by a space or end of text; CJK terminals
      // break even without a following space
      const bool cjk_terminal = cp == 0x3002 || cp == 0xFF01 || cp == 0xFF1F;
      if (j >= text.size() || is_space_cp(text[j]) || cjk_terminal) {
        const std::string s = trim(current);
        if (!s.empty()) sentences.push_back(s);
        current.clear();
        if (j < text.size() && is_space_cp(text[j])) ++j;
      }
      i = j;
    } else {
      ++i;
    }
  }
  const std::string tail = trim(current);
  if (!tail.empty()) sentences.push_back(tail);
  if (sentences.empty()) throw Error("preprocess produced no sentences");

  return document_from_sentences(doc_id, sentences, language);
}

std::vector<Document> load_documents_lines(const std::filesystem::path& path,
                                           const std::string& language) {
  const auto blocks = read_line_blocks(path);
  std::vector<Document> docs;
  docs.reserve(blocks.size());
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    docs.push_back(document_from_sentences(format_doc_id(i), blocks[i], language));
  }
  return docs;
}

std::vector<CorpusEntry> load_corpus_lines(const std::filesystem::path& source_path,
                                           const std::vector<std::filesystem::path>& reference_paths,
                                           const std::string& source_language,
                                           const std::string& target_language) {
  std::vector<Document> sources = load_documents_lines(source_path, source_language);
  std::vector<CorpusEntry> entries;
  entries.reserve(sources.size());
  for (Document& doc : sources) entries.push_back(CorpusEntry{std::move(doc), {}});

  const std::string joiner = joiner_for_language(target_language);
  for (const auto& ref_path : reference_paths) {
    const auto blocks = read_line_blocks(ref_path);
    if (blocks.size() != entries.size()) {
      throw Error("reference file " + ref_path.string() + " has " +
                  std::to_string(blocks.size()) + " documents, source has " +
                  std::to_string(entries.size()));
    }
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      std::string ref;
      for (std::size_t k = 0; k < blocks[i].size(); ++k) {
        if (k > 0) ref += joiner;
        ref += blocks[i][k];
      }
      entries[i].references.push_back(std::move(ref));
    }
  }
  return entries;
}

std::vector<CorpusEntry> load_corpus_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<CorpusEntry> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    Json record = Json::parse(line, nullptr, false);
    if (record.is_discarded()) {
      throw Error(path.string() + ":" + std::to_string(line_no) + ": invalid JSON record");
    }
    CorpusEntry entry;
    entry.source = document_from_sentences(
        record.at("doc_id").get<std::string>(),
        record.at("source").get<std::vector<std::string>>(),
        record.at("source_language").get<std::string>());
    if (record.contains("references")) {
      entry.references = record.at("references").get<std::vector<std::string>>();
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

void save_corpus_jsonl(const std::vector<CorpusEntry>& entries, const std::string& target_language,
                       const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  for (const CorpusEntry& entry : entries) {
    Json sentences = Json::array();
    for (const Sentence& s : entry.source.sentences) sentences.push_back(s.text);
    Json record{{"doc_id", entry.source.doc_id},
                {"source_language", entry.source.language},
                {"target_language", target_language},
                {"source", std::move(sentences)},
                {"references", entry.references}};
    out << record.dump() << "\n";
  }
}

}  // namespace dagmt
