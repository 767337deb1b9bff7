#include <doctest.h>

#include "dagmt/config.hpp"
#include "support/helpers.hpp"

using namespace dagmt;

namespace {

Json minimal_config() {
  return Json{{"backend", Json{{"kind", "mock"}, {"mock_script", "/tmp/script.json"}}}};
}

std::string error_of(const Json& j) {
  try {
    RunConfig::from_json(j);
    return "";
  } catch (const ConfigError& e) {
    return e.what();
  }
}

}  // namespace

TEST_CASE("defaults are sensible: temperature 0.1, llm strategies, full profile") {
  const RunConfig cfg = RunConfig::from_json(minimal_config());
  CHECK(cfg.temperature == 0.1);
  CHECK(cfg.segmentation.kind == "llm");
  CHECK(cfg.edges.kind == "llm");
  CHECK(cfg.edges.tau == 0.3);
  CHECK(cfg.edges.window == 0);
  CHECK(cfg.ablation.profile == "full");
  CHECK(cfg.memory.summary_cap == 5);
  CHECK(cfg.segmentation.max_sentences_per_discourse == 40);
  CHECK(cfg.cache_enabled);
}

TEST_CASE("validation errors carry field paths") {
  Json bad_profile = minimal_config();
  bad_profile["ablation"] = Json{{"profile", "everything"}};
  CHECK(error_of(bad_profile).find("ablation.profile") != std::string::npos);

  Json bad_temp = minimal_config();
  bad_temp["temperature"] = 3.0;
  CHECK(error_of(bad_temp).find("temperature") != std::string::npos);

  Json unknown = minimal_config();
  unknown["segmentatoin"] = Json::object();
  CHECK(error_of(unknown).find("segmentatoin") != std::string::npos);

  Json bad_nested = minimal_config();
  bad_nested["edges"] = Json{{"tau", 1.5}};
  CHECK(error_of(bad_nested).find("edges.tau") != std::string::npos);

  Json wrong_type = minimal_config();
  wrong_type["workers"] = "three";
  CHECK(error_of(wrong_type).find("workers") != std::string::npos);
}

TEST_CASE("backend requirements depend on the kind") {
  Json http_missing_url{{"backend", Json{{"kind", "http"}}}};
  CHECK(error_of(http_missing_url).find("backend.url") != std::string::npos);
  Json mock_missing_script{{"backend", Json{{"kind", "mock"}}}};
  CHECK(error_of(mock_missing_script).find("backend.mock_script") != std::string::npos);
}

TEST_CASE("profiles resolve the effective strategies") {
  RunConfig cfg = RunConfig::from_json(minimal_config());

  cfg.ablation.profile = "full";
  CHECK(cfg.effective_segmentation() == "llm");
  CHECK(cfg.effective_edges() == "llm");
  CHECK(cfg.effective_memory() == MemoryFlags{});

  cfg.ablation.profile = "ta_only";
  CHECK(cfg.effective_segmentation() == "whole");
  CHECK(cfg.effective_edges() == "chain");
  CHECK(cfg.effective_memory() == MemoryFlags::none());

  cfg.ablation.profile = "ta_da";
  CHECK(cfg.effective_segmentation() == "llm");
  CHECK(cfg.effective_edges() == "chain");
  CHECK(cfg.effective_memory() == MemoryFlags::none());

  cfg.ablation.profile = "ta_da_ma";
  CHECK(cfg.effective_edges() == "chain");
  CHECK(cfg.effective_memory() == MemoryFlags{});

  cfg.ablation.profile = "custom";
  cfg.ablation.memory.phrases = false;
  cfg.edges.kind = "tfidf";
  CHECK(cfg.effective_edges() == "tfidf");
  CHECK_FALSE(cfg.effective_memory().phrases);
  CHECK(cfg.effective_memory().entities);
}

TEST_CASE("relative paths resolve against the config directory") {
  testsupport::TempDir dir;
  testsupport::write_file(dir.path() / "config.json", R"({
    "backend": {"kind": "mock", "mock_script": "script.json"},
    "corpus": {"format": "lines", "source": "corpus/src.txt"}
  })");
  const RunConfig cfg = RunConfig::from_file(dir.path() / "config.json");
  CHECK(cfg.backend.mock_script == (dir.path() / "script.json").string());
  CHECK(cfg.corpus.source == (dir.path() / "corpus/src.txt").string());
}

TEST_CASE("config round trips through its JSON form") {
  Json j = minimal_config();
  j["model"] = "m1";
  j["temperature"] = 0.3;
  j["segmentation"] = Json{{"kind", "random"}, {"seed", 42}};
  j["edges"] = Json{{"kind", "tfidf"}, {"tau", 0.25}};
  j["ablation"] = Json{{"profile", "custom"}, {"memory", Json{{"phrases", false}}}};
  j["pricing"] = Json{{"prompt_per_million", 0.5}, {"completion_per_million", 1.5}};
  const RunConfig cfg = RunConfig::from_json(j);
  const RunConfig again = RunConfig::from_json(cfg.to_json());
  CHECK(again.to_json() == cfg.to_json());
  CHECK(again.model == "m1");
  CHECK(again.segmentation.seed == 42);
  CHECK(again.edges.tau == 0.25);
  CHECK_FALSE(again.ablation.memory.phrases);
  CHECK(again.pricing.completion_per_million == 1.5);
}

TEST_CASE("config json parse failure names the file") {
  testsupport::TempDir dir;
  testsupport::write_file(dir.path() / "broken.json", "{not json");
  try {
    RunConfig::from_file(dir.path() / "broken.json");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("broken.json") != std::string::npos);
  }
}
