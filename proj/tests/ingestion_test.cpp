#include <doctest.h>

#include <random>

#include "dagmt/ingestion.hpp"
#include "support/helpers.hpp"

using namespace dagmt;
using testsupport::TempDir;
using testsupport::write_file;

TEST_CASE("lines format: blank lines separate documents") {
  TempDir dir;
  write_file(dir.path() / "src.txt", "A one.\nA two.\n\nB one.\nB two.\nB three.\n");
  const auto docs = load_documents_lines(dir.path() / "src.txt", "en");
  REQUIRE(docs.size() == 2);
  CHECK(docs[0].doc_id == "doc0001");
  CHECK(docs[0].sentences.size() == 2);
  CHECK(docs[1].sentences.size() == 3);
  CHECK(docs[1].sentences[2].text == "B three.");
  // consecutive blank lines collapse into one separator
  write_file(dir.path() / "src2.txt", "A.\n\n\n\nB.\n");
  CHECK(load_documents_lines(dir.path() / "src2.txt", "en").size() == 2);
}

TEST_CASE("lines format pairs references by document order") {
  TempDir dir;
  write_file(dir.path() / "src.txt", "A one.\n\nB one.\n");
  write_file(dir.path() / "ref.txt", "Ref A eins.\nRef A zwei.\n\nRef B eins.\n");
  const auto entries =
      load_corpus_lines(dir.path() / "src.txt", {dir.path() / "ref.txt"}, "en", "de");
  REQUIRE(entries.size() == 2);
  CHECK(entries[0].references == std::vector<std::string>{"Ref A eins. Ref A zwei."});
  CHECK(entries[1].references == std::vector<std::string>{"Ref B eins."});
}

TEST_CASE("mismatched document counts are a pairing error") {
  TempDir dir;
  write_file(dir.path() / "src.txt", "A.\n\nB.\n\nC.\n");
  write_file(dir.path() / "ref.txt", "RA.\n\nRB.\n");
  CHECK_THROWS_AS(
      load_corpus_lines(dir.path() / "src.txt", {dir.path() / "ref.txt"}, "en", "de"), Error);
}

TEST_CASE("zh references join without spaces") {
  TempDir dir;
  write_file(dir.path() / "src.txt", "Hello there.\n");
  write_file(dir.path() / "ref.txt", "你好。\n再见。\n");
  const auto entries =
      load_corpus_lines(dir.path() / "src.txt", {dir.path() / "ref.txt"}, "en", "zh");
  CHECK(entries[0].references == std::vector<std::string>{"你好。再见。"});
}

TEST_CASE("jsonl round trips through save and load") {
  TempDir dir;
  std::vector<CorpusEntry> entries;
  entries.push_back(CorpusEntry{testsupport::make_doc({"A one.", "A two."}, "en", "alpha"),
                                {"Ref text A."}});
  entries.push_back(CorpusEntry{testsupport::make_doc({"B one."}, "en", "beta"),
                                {"Ref text B.", "Second ref B."}});
  save_corpus_jsonl(entries, "de", dir.path() / "corpus.jsonl");
  const auto loaded = load_corpus_jsonl(dir.path() / "corpus.jsonl");
  REQUIRE(loaded.size() == 2);
  CHECK(loaded[0].source == entries[0].source);
  CHECK(loaded[0].references == entries[0].references);
  CHECK(loaded[1].source == entries[1].source);
  CHECK(loaded[1].references == entries[1].references);

  // a second round trip is byte-identical
  save_corpus_jsonl(loaded, "de", dir.path() / "corpus2.jsonl");
  CHECK(testsupport::read_file(dir.path() / "corpus.jsonl") ==
        testsupport::read_file(dir.path() / "corpus2.jsonl"));
}

TEST_CASE("empty documents are rejected") {
  TempDir dir;
  write_file(dir.path() / "empty.jsonl",
             R"({"doc_id":"d","source_language":"en","source":[]})"
             "\n");
  CHECK_THROWS_AS(load_corpus_jsonl(dir.path() / "empty.jsonl"), Error);
}

TEST_CASE("preprocess splits on western sentence-final punctuation") {
  const Document doc = preprocess("A. B? C!", "en");
  REQUIRE(doc.sentences.size() == 3);
  CHECK(doc.sentences[0].text == "A.");
  CHECK(doc.sentences[1].text == "B?");
  CHECK(doc.sentences[2].text == "C!");
}

TEST_CASE("preprocess splits CJK terminals without requiring spaces") {
  const Document doc = preprocess("他说。她走！", "zh");
  REQUIRE(doc.sentences.size() == 2);
  CHECK(doc.sentences[0].text == "他说。");
  CHECK(doc.sentences[1].text == "她走！");
}

TEST_CASE("text without terminal punctuation becomes one sentence") {
  const Document doc = preprocess("no terminal punctuation here", "en");
  REQUIRE(doc.sentences.size() == 1);
  CHECK(doc.sentences[0].text == "no terminal punctuation here");
}

TEST_CASE("abbreviations do not end sentences") {
  const Document doc = preprocess("Dr. Smith arrived. He sat down.", "en");
  REQUIRE(doc.sentences.size() == 2);
  CHECK(doc.sentences[0].text == "Dr. Smith arrived.");
  const Document eg = preprocess("Fruit, e.g. apples, is cheap. Very cheap.", "en");
  REQUIRE(eg.sentences.size() == 2);

  // the abbreviation list is configurable
  const Document custom = preprocess("Dr. Smith arrived. He sat down.", "en", "doc", {});
  CHECK(custom.sentences.size() == 3);
}

TEST_CASE("closing quotes stay attached to the sentence") {
  const Document doc = preprocess("He said \"Go home.\" Then he left.", "en");
  REQUIRE(doc.sentences.size() == 2);
  CHECK(doc.sentences[0].text == "He said \"Go home.\"");
  CHECK(doc.sentences[1].text == "Then he left.");
}

TEST_CASE("decimal points never split") {
  const Document doc = preprocess("Pi is roughly 3.14 in value. Everyone knows.", "en");
  REQUIRE(doc.sentences.size() == 2);
  CHECK(doc.sentences[0].text == "Pi is roughly 3.14 in value.");
}

TEST_CASE("whitespace is collapsed and newlines removed") {
  const Document doc = preprocess("First\tsentence   here.\nSecond\r\none.", "en");
  REQUIRE(doc.sentences.size() == 2);
  CHECK(doc.sentences[0].text == "First sentence here.");
  CHECK(doc.sentences[1].text == "Second one.");
}

TEST_CASE("NFC normalization composes combining marks") {
  const std::string decomposed = "Café time.";  // e + combining acute
  const Document doc = preprocess(decomposed, "en");
  CHECK(doc.sentences[0].text == "Café time.");
  CHECK(normalize_nfc("é") == "é");
  CHECK(normalize_nfc("already fine") == "already fine");
}

TEST_CASE("preprocess rejects effectively empty text") {
  CHECK_THROWS_AS(preprocess("   \n  ", "en"), Error);
}

TEST_CASE("preprocess is idempotent on its own output") {
  const std::vector<std::string> fixtures = {
      "A. B? C!",
      "Dr. Smith arrived. He sat down.",
      "He said \"Go home.\" Then he left.",
      "no terminal punctuation",
      "Numbers like 3.14 stay. Mostly.",
  };
  for (const std::string& raw : fixtures) {
    const Document once = preprocess(raw, "en");
    // re-running on each produced sentence yields that sentence alone
    for (const Sentence& s : once.sentences) {
      const Document again = preprocess(s.text, "en");
      REQUIRE(again.sentences.size() == 1);
      CHECK(again.sentences[0].text == s.text);
    }
    // re-running on the joined output reproduces the same sentence list
    std::string joined;
    for (const Sentence& s : once.sentences) {
      if (!joined.empty()) joined += " ";
      joined += s.text;
    }
    const Document rejoined = preprocess(joined, "en");
    REQUIRE(rejoined.sentences.size() == once.sentences.size());
    for (std::size_t i = 0; i < once.sentences.size(); ++i) {
      CHECK(rejoined.sentences[i].text == once.sentences[i].text);
    }
  }
}

TEST_CASE("lines corpus load-save-load identity through jsonl") {
  TempDir dir;
  write_file(dir.path() / "src.txt", "A one.\nA two.\n\nB one.\n");
  write_file(dir.path() / "ref.txt", "RA.\n\nRB.\n");
  const auto entries =
      load_corpus_lines(dir.path() / "src.txt", {dir.path() / "ref.txt"}, "en", "de");
  save_corpus_jsonl(entries, "de", dir.path() / "c.jsonl");
  const auto again = load_corpus_jsonl(dir.path() / "c.jsonl");
  REQUIRE(again.size() == entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    CHECK(again[i].source == entries[i].source);
    CHECK(again[i].references == entries[i].references);
  }
}
