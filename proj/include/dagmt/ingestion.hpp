#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "dagmt/core.hpp"

namespace dagmt {

struct CorpusEntry {
  Document source;
  std::vector<std::string> references;  // whole reference-document texts
};

// "lines" format: one sentence per line, a blank line separates documents.
// Parallel files are paired by document order; mismatched document counts are
// an error.
std::vector<Document> load_documents_lines(const std::filesystem::path& path,
                                           const std::string& language);
std::vector<CorpusEntry> load_corpus_lines(const std::filesystem::path& source_path,
                                           const std::vector<std::filesystem::path>& reference_paths,
                                           const std::string& source_language,
                                           const std::string& target_language);

// "jsonl" format: one document per record,
// {"doc_id", "source_language", "target_language", "source": [sentences],
//  "references": [reference document texts]}.
std::vector<CorpusEntry> load_corpus_jsonl(const std::filesystem::path& path);
void save_corpus_jsonl(const std::vector<CorpusEntry>& entries, const std::string& target_language,
                       const std::filesystem::path& path);

// Abbreviations whose trailing period never ends a sentence.
const std::vector<std::string>& default_abbreviations();

// NFC-normalizes, collapses whitespace and splits on sentence-final
// punctuation (Western .!? and CJK 。！？), keeping trailing closing quotes
// and brackets attached. Text without any boundary becomes a one-sentence
// document.
Document preprocess(const std::string& raw_text, const std::string& language,
                    const std::string& doc_id = "doc",
                    const std::vector<std::string>& abbreviations = default_abbreviations());

// NFC normalization (exposed for tests).
std::string normalize_nfc(const std::string& utf8);

}  // namespace dagmt
