#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "apw/config.hpp"
#include "apw/io.hpp"

using namespace apw;

namespace {

std::string key_of(const std::string& text, const std::vector<std::string>& overrides = {}) {
  try {
    parse_config(text, overrides);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "";
}

}  // namespace

TEST_CASE("defaults parse from an empty document") {
  const auto cfg = parse_config("");
  CHECK(cfg == ExperimentConfig{});
  CHECK(cfg.model.size == 24);
  CHECK(cfg.spectral.min_gap == 0.5);
}

TEST_CASE("canonical TOML round trips") {
  ExperimentConfig cfg;
  cfg.seed = 99;
  cfg.output_dir = "runs/a \"quoted\" dir";
  cfg.model.flux = 0.25;
  cfg.model.size = 16;
  cfg.model.stripe = {1.5, -1.5};
  cfg.model.hopping = "exponential";
  cfg.spectral.interval = {-3.0, -1.25};
  cfg.frames.windows = {8, 16};
  cfg.frames.dump_vectors = true;
  cfg.chern.fractions = {0.25, 0.5};
  cfg.deform.path = "field";
  cfg.deform.flux_step = 1.0 / 256.0;
  cfg.deform.jitter_seed = 1234567890123ULL;
  const std::string text = to_toml(cfg);
  const auto back = parse_config(text);
  CHECK(back == cfg);
  CHECK(to_toml(back) == text);
  CHECK(parse_config(to_toml(ExperimentConfig{})) == ExperimentConfig{});
}

TEST_CASE("overrides use dotted paths and TOML values") {
  const auto cfg = parse_config("[model]\nsize = 12\n", {"model.flux=0.25", "model.hopping=exponential", "seed=7",
                                                         "chern.fractions=[0.4, 0.5]", "output_dir=x/y"});
  CHECK(cfg.model.size == 12);
  CHECK(cfg.model.flux == 0.25);
  CHECK(cfg.model.hopping == "exponential");
  CHECK(cfg.seed == 7);
  CHECK(cfg.chern.fractions == std::vector<double>{0.4, 0.5});
  CHECK(cfg.output_dir == "x/y");
}

TEST_CASE("errors name the offending key") {
  CHECK(key_of("[model]\nflux = 1/3\n") == "model.flux");
  CHECK(key_of("[model]\nsize = 12\nflux = \n") == "model.flux");
  CHECK(key_of("[model]\ncolour = 1\n") == "model.colour");
  CHECK(key_of("[model]\nsize = \"big\"\n") == "model.size");
  CHECK(key_of("[model]\nsize = 1.5\n") == "model.size");
  CHECK(key_of("[chern]\nfractions = [\"a\"]\n").rfind("chern.fractions", 0) == 0);
  CHECK(key_of("bogus = 1\n") == "bogus");
  CHECK(key_of("model = 3\n") == "model");
  CHECK(key_of("", {"model.flux=0.1"}) == "model.flux");
  CHECK(key_of("", {"model.size=0"}) == "model.size");
  CHECK(key_of("", {"model.stripe=[1.0, 2.0, 3.0, 4.0, 5.0]"}) == "model.stripe");
  CHECK(key_of("", {"spectral.interval=[1.0, 0.0]"}) == "spectral.interval");
  CHECK(key_of("", {"spectral.backend=contour"}) == "spectral.backend");
  CHECK(key_of("", {"chern.fractions=[0.0]"}) == "chern.fractions");
  CHECK(key_of("", {"deform.path=field", "deform.flux_step=0.001"}) == "deform.flux_step");
  CHECK(key_of("", {"model.kind=continuum", "model.pitch=0.2"}) == "model.pitch");
  CHECK(key_of("", {"noequals"}) == "noequals");
  try {
    parse_config("[model]\nflux = 1/3\n");
  } catch (const ConfigError& e) {
    CHECK(e.code() == Errc::config_error);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("converters") {
  const auto cfg = parse_config("", {"model.stripe=[1.0, -1.0, 0.0]", "model.boundary=open", "frames.stride=[2, 1]",
                                     "chern.tolerance=0.1", "deform.tolerance=0.02"});
  const auto lm = lattice_model(cfg);
  CHECK(lm.size == 24);
  CHECK(lm.boundary == Boundary::open);
  CHECK(lm.stripe.size() == 3);
  CHECK(chern_options(cfg).tolerance == 0.1);
  CHECK(dichotomy_options(cfg).stride == std::vector<int>{2, 1});
  CHECK(dichotomy_options(cfg).min_gap == cfg.spectral.min_gap);
  CHECK(deform_options(cfg).tolerance == 0.02);
  CHECK(continuum_model(cfg).pitch == cfg.model.pitch);
  CHECK(generator_params(cfg).spacing == 1.0);
}

TEST_CASE("config files load from disk") {
  const auto dir = std::filesystem::temp_directory_path() / "apw_config_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "c.toml";
  std::ofstream(path) << "seed = 5\n[model]\nsize = 12\n";
  const auto cfg = load_config(path.string(), {"model.flux=0.25"});
  CHECK(cfg.seed == 5);
  CHECK(cfg.model.flux == 0.25);
  CHECK_THROWS_AS(load_config((dir / "missing.toml").string()), Error);
  std::filesystem::remove_all(dir);
}

TEST_CASE("hashing and JSON helpers") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(hex64(0xabcULL) == "0000000000000abc");
  json j;
  j["x"] = INFINITY;
  j["y"] = 1.5;
  j["z"] = json::array({NAN, 2});
  CHECK(dump(j) == "{\n  \"x\": null,\n  \"y\": 1.5,\n  \"z\": [\n    null,\n    2\n  ]\n}\n");

  RVec v(2);
  v << -1.0, 0.1;
  CHECK(spectrum_csv(v) == "index,value\n0,-1\n1,0.10000000000000001\n");
  CMat m(1, 1);
  m << cplx(0.5, -0.25);
  CHECK(vectors_csv(m) == "vector,index,re,im\n0,0,0.5,-0.25\n");

  ChernResult r;
  r.value = 0.9999;
  r.nearest = 1;
  r.integral = true;
  const json cj = to_json(r);
  CHECK(cj["integrality"] == true);
  CHECK(cj["value"] == 0.9999);
}

TEST_CASE("manifest records the config hash and seed") {
  ExperimentConfig cfg;
  cfg.seed = 3;
  const json m = manifest(cfg, "chern", 1.25, json::array({"chern.json"}));
  CHECK(m["subcommand"] == "chern");
  CHECK(m["seed"] == 3);
  CHECK(m["config_hash"] == "fnv1a64:" + hex64(fnv1a64(to_toml(cfg))));
  CHECK(m["wall_time_s"] == 1.25);
  CHECK(m["versions"]["apw"] == kVersion);
  CHECK(m["outputs"][0] == "chern.json");
}
