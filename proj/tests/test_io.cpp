#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "kemeny/error.hpp"
#include "kemeny/io.hpp"
#include "oracles.hpp"

using namespace kemeny;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return text;
}

template <typename E, typename Fn>
std::string thrown_message(Fn&& fn) {
  try {
    fn();
  } catch (const E& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("instance files round-trip") {
  GeneratorSpec spec;
  spec.kind = GenKind::kJiggling;
  spec.n = 7;
  spec.m = 5;
  spec.seed = 404;
  const Profile original = generate(spec);

  const std::string path = temp_path("kemeny_instance_roundtrip.json");
  write_instance_file(original, "jiggling n=7 m=5 seed=404", path);
  const InstanceFile file = read_instance_file(path);

  CHECK(file.format_version == kInstanceFormatVersion);
  CHECK(file.provenance == "jiggling n=7 m=5 seed=404");
  CHECK(file.profile.n == original.n);
  CHECK(file.profile.rankings == original.rankings);
  CHECK(file.profile.item_labels == original.item_labels);

  const std::string again = temp_path("kemeny_instance_roundtrip2.json");
  write_instance_file(file.profile, file.provenance, again);
  CHECK(read_text(path) == read_text(again));
  std::remove(path.c_str());
  std::remove(again.c_str());
}

TEST_CASE("instance files keep item labels") {
  Profile p;
  p.n = 3;
  p.rankings = {Ranking({2, 0, 1})};
  p.item_labels = {"alpha", "beta", "gamma"};
  const std::string path = temp_path("kemeny_instance_labels.json");
  write_instance_file(p, "hand-made", path);
  const InstanceFile file = read_instance_file(path);
  CHECK(file.profile.item_labels == p.item_labels);
  std::remove(path.c_str());
}

TEST_CASE("instance file errors") {
  CHECK_THROWS_AS(read_instance_file(temp_path("kemeny_absent_instance.json")),
                  IoError);

  const std::string bad = temp_path("kemeny_bad_instance.json");
  write_text(bad, "not json at all");
  CHECK_THROWS_AS(read_instance_file(bad), IoError);

  write_text(bad, R"({"format_version": 9, "n": 2, "m": 1,
                      "rankings": [[0, 1]], "provenance": "x"})");
  CHECK_THROWS_AS(read_instance_file(bad), ConfigMismatchError);

  write_text(bad, R"({"format_version": 1, "n": 2, "m": 2,
                      "rankings": [[0, 1]], "provenance": "x"})");
  CHECK_THROWS_AS(read_instance_file(bad), InvalidInputError);

  write_text(bad, R"({"format_version": 1, "n": 2, "m": 1,
                      "rankings": [[0, 0]], "provenance": "x"})");
  CHECK_THROWS_AS(read_instance_file(bad), InvalidInputError);

  write_text(bad, R"({"format_version": 1, "n": 2,
                      "rankings": [[0, 1]], "provenance": "x"})");
  CHECK(thrown_message<InvalidInputError>([&] { read_instance_file(bad); })
            .find("'m'") != std::string::npos);
  std::remove(bad.c_str());
}

TEST_CASE("metric table csv parses labels, names, and columns") {
  const std::string path = temp_path("kemeny_metrics.csv");
  write_text(path,
             "country,gdp,happiness\n"
             "Aland,3.0,1.5\n"
             "Borduria,1.0,2.5\n"
             "Cordovia,2.0,0.5\n");
  const MetricTable table = read_metric_table_csv(path);
  CHECK(table.rows() == 3);
  CHECK(table.cols() == 2);
  CHECK(table.row_labels == std::vector<std::string>{"Aland", "Borduria", "Cordovia"});
  CHECK(table.column_names == std::vector<std::string>{"gdp", "happiness"});
  CHECK(table.columns[0] == std::vector<double>{3.0, 1.0, 2.0});
  CHECK(table.columns[1] == std::vector<double>{1.5, 2.5, 0.5});

  const Profile p = rankings_from_metric_table(
      table, {SortDirection::kDescending, SortDirection::kAscending});
  REQUIRE(p.m() == 2);
  CHECK(p.rankings[0].order == std::vector<Item>{0, 2, 1});
  CHECK(p.rankings[1].order == std::vector<Item>{2, 0, 1});
  CHECK(p.item_labels == table.row_labels);
  std::remove(path.c_str());
}

TEST_CASE("metric table csv errors name the location") {
  const std::string path = temp_path("kemeny_bad_metrics.csv");

  write_text(path, "country,gdp\nAland,not_a_number\n");
  const std::string non_numeric =
      thrown_message<IngestError>([&] { read_metric_table_csv(path); });
  CHECK(non_numeric.find("Aland") != std::string::npos);
  CHECK(non_numeric.find("gdp") != std::string::npos);

  write_text(path, "country,gdp,happiness\nAland,3.0\n");
  const std::string missing =
      thrown_message<IngestError>([&] { read_metric_table_csv(path); });
  CHECK(missing.find("missing value") != std::string::npos);
  CHECK(missing.find("Aland") != std::string::npos);
  CHECK(missing.find("happiness") != std::string::npos);

  write_text(path, "country,gdp\nAland,1.0,2.0\n");
  CHECK_THROWS_AS(read_metric_table_csv(path), IngestError);

  write_text(path, "");
  CHECK_THROWS_AS(read_metric_table_csv(path), IngestError);

  write_text(path, "country,gdp\n");
  CHECK_THROWS_AS(read_metric_table_csv(path), IngestError);

  write_text(path, "country\nAland\n");
  CHECK_THROWS_AS(read_metric_table_csv(path), IngestError);

  std::remove(path.c_str());
  CHECK_THROWS_AS(read_metric_table_csv(path), IoError);
}

TEST_CASE("preflib soc parsing expands counts") {
  const std::string path = temp_path("kemeny_ballots.soc");
  write_text(path,
             "# a comment line\n"
             "\n"
             "2: 1,3,2\n"
             "1: 3, 2, 1\n");
  const Profile p = read_preflib_soc(path);
  CHECK(p.n == 3);
  REQUIRE(p.m() == 3);
  CHECK(p.rankings[0].order == std::vector<Item>{0, 2, 1});
  CHECK(p.rankings[1].order == std::vector<Item>{0, 2, 1});
  CHECK(p.rankings[2].order == std::vector<Item>{2, 1, 0});
  std::remove(path.c_str());
}

TEST_CASE("preflib soc errors carry the line number") {
  const std::string path = temp_path("kemeny_bad_ballots.soc");

  write_text(path, "1: 1,2,3\n2: 1,2\n");
  const std::string incomplete =
      thrown_message<IngestError>([&] { read_preflib_soc(path); });
  CHECK(incomplete.find("line 2") != std::string::npos);

  write_text(path, "1: 1,2,3\n1: 1,2,2\n");
  CHECK_THROWS_AS(read_preflib_soc(path), IngestError);

  write_text(path, "1: 1,{2,3}\n");
  const std::string tied =
      thrown_message<IngestError>([&] { read_preflib_soc(path); });
  CHECK(tied.find("ties") != std::string::npos);

  write_text(path, "1: 1,2,4\n");
  CHECK_THROWS_AS(read_preflib_soc(path), IngestError);

  write_text(path, "zero: 1,2\n");
  const std::string malformed =
      thrown_message<IngestError>([&] { read_preflib_soc(path); });
  CHECK(malformed.find("line 1") != std::string::npos);

  write_text(path, "1,2,3\n");
  CHECK_THROWS_AS(read_preflib_soc(path), IngestError);

  write_text(path, "# only comments\n");
  CHECK_THROWS_AS(read_preflib_soc(path), IngestError);

  std::remove(path.c_str());
  CHECK_THROWS_AS(read_preflib_soc(path), IoError);
}

TEST_CASE("direction lists parse") {
  const std::vector<SortDirection> d = parse_directions("asc,desc, asc");
  REQUIRE(d.size() == 3);
  CHECK(d[0] == SortDirection::kAscending);
  CHECK(d[1] == SortDirection::kDescending);
  CHECK(d[2] == SortDirection::kAscending);
  CHECK(parse_directions("").empty());
  CHECK_THROWS_AS(parse_directions("asc,up"), InvalidInputError);
}

TEST_CASE("generator specs round-trip through json") {
  GeneratorSpec spec;
  spec.kind = GenKind::kRepeat;
  spec.n = 12;
  spec.m = 6;
  spec.seed = 99;
  spec.repeat_count = 4;
  spec.scale_m = 2.5;
  spec.swap_passes = 3;

  const GeneratorSpec back = generator_spec_from_json(generator_spec_to_json(spec));
  CHECK(back.kind == spec.kind);
  CHECK(back.n == spec.n);
  CHECK(back.m == spec.m);
  CHECK(back.seed == spec.seed);
  CHECK(back.repeat_count == spec.repeat_count);
  CHECK(back.scale_m == spec.scale_m);
  CHECK(back.swap_passes == spec.swap_passes);

  GeneratorSpec plain;
  plain.kind = GenKind::kRandom;
  plain.n = 5;
  plain.m = 3;
  const GeneratorSpec plain_back =
      generator_spec_from_json(generator_spec_to_json(plain));
  CHECK_FALSE(plain_back.repeat_count.has_value());

  const std::string missing = thrown_message<InvalidInputError>(
      [] { generator_spec_from_json(nlohmann::json{{"kind", "random"}, {"m", 3}}); });
  CHECK(missing.find("'n'") != std::string::npos);
}

TEST_CASE("model configs round-trip through json") {
  const ModelConfig cfg = paper_config();
  const ModelConfig back = model_config_from_json(model_config_to_json(cfg));
  CHECK(back == cfg);

  const ModelConfig defaulted = model_config_from_json(nlohmann::json::object());
  CHECK(defaulted == ModelConfig{});
}

TEST_CASE("parameter blocks round-trip through json") {
  ModelConfig cfg;
  cfg.d_model = 16;
  cfg.n_heads = 2;
  cfg.d_ff = 32;
  cfg.encoder_layers = 1;
  cfg.decoder_layers = 1;
  cfg.max_m = 4;
  const Parameters<float> params = Parameters<float>::init(cfg, 7);

  const nlohmann::json j = parameters_to_json(params);
  Parameters<float> out = Parameters<float>::init(cfg, 0);
  parameters_from_json(j, out);
  CHECK(out.data == params.data);

  nlohmann::json missing = j;
  missing.erase(params.names[0]);
  CHECK_THROWS_AS(parameters_from_json(missing, out), ConfigMismatchError);

  nlohmann::json renamed = j;
  renamed["no_such_tensor"] = renamed[params.names[0]];
  renamed.erase(params.names[0]);
  CHECK_THROWS_AS(parameters_from_json(renamed, out), ConfigMismatchError);

  nlohmann::json reshaped = j;
  reshaped[params.names[0]]["rows"] = 999;
  CHECK_THROWS_AS(parameters_from_json(reshaped, out), ConfigMismatchError);

  nlohmann::json truncated = j;
  truncated[params.names[0]]["data"] = std::vector<double>{1.0};
  CHECK_THROWS_AS(parameters_from_json(truncated, out), ConfigMismatchError);
}

TEST_CASE("train configs round-trip through json") {
  TrainConfig cfg;
  cfg.epochs = 3;
  cfg.steps_per_epoch = 7;
  cfg.batch_size = 5;
  cfg.alpha = 0.01;
  cfg.learning_rate = 2e-4;
  GeneratorSpec spec;
  spec.kind = GenKind::kJiggling;
  spec.n = 9;
  spec.m = 4;
  cfg.instance_mix = {spec};
  cfg.validation_size = 16;
  cfg.seed = 4321;
  cfg.model.max_m = 4;

  const TrainConfig back = train_config_from_json(train_config_to_json(cfg));
  CHECK(back.epochs == cfg.epochs);
  CHECK(back.steps_per_epoch == cfg.steps_per_epoch);
  CHECK(back.batch_size == cfg.batch_size);
  CHECK(back.alpha == cfg.alpha);
  CHECK(back.learning_rate == cfg.learning_rate);
  REQUIRE(back.instance_mix.size() == 1);
  CHECK(back.instance_mix[0].kind == GenKind::kJiggling);
  CHECK(back.instance_mix[0].n == 9);
  CHECK(back.validation_size == cfg.validation_size);
  CHECK(back.seed == cfg.seed);
  CHECK(back.model == cfg.model);
}

TEST_CASE("train config files report missing fields by name") {
  TrainConfig base;
  base.epochs = 1;
  base.steps_per_epoch = 1;
  base.batch_size = 1;
  GeneratorSpec mix_spec;
  mix_spec.n = 4;
  mix_spec.m = 3;
  base.instance_mix = {mix_spec};
  base.model.max_m = 4;
  nlohmann::json j = train_config_to_json(base);

  nlohmann::json no_mix = j;
  no_mix.erase("instance_mix");
  const std::string missing_mix = thrown_message<InvalidInputError>(
      [&] { train_config_from_json(no_mix); });
  CHECK(missing_mix.find("instance_mix") != std::string::npos);

  nlohmann::json bad_mix = j;
  bad_mix["instance_mix"] = 7;
  CHECK_THROWS_AS(train_config_from_json(bad_mix), InvalidInputError);

  nlohmann::json no_epochs = j;
  no_epochs.erase("epochs");
  const std::string missing_epochs = thrown_message<InvalidInputError>(
      [&] { train_config_from_json(no_epochs); });
  CHECK(missing_epochs.find("epochs") != std::string::npos);

  nlohmann::json wrong_type = j;
  wrong_type["batch_size"] = "many";
  const std::string bad_type = thrown_message<InvalidInputError>(
      [&] { train_config_from_json(wrong_type); });
  CHECK(bad_type.find("batch_size") != std::string::npos);

  nlohmann::json defaults = j;
  defaults.erase("alpha");
  defaults.erase("learning_rate");
  defaults.erase("validation_size");
  defaults.erase("seed");
  defaults.erase("model");
  const TrainConfig cfg = train_config_from_json(defaults);
  CHECK(cfg.alpha == 0.05);
  CHECK(cfg.learning_rate == 1e-4);
  CHECK(cfg.validation_size == 256);
  CHECK(cfg.seed == 1234);
  CHECK(cfg.model == ModelConfig{});

  const std::string path = temp_path("kemeny_train_config.json");
  write_text(path, j.dump());
  const TrainConfig from_file = read_train_config(path);
  CHECK(from_file.epochs == 1);
  std::remove(path.c_str());

  write_text(path, "{broken");
  CHECK_THROWS_AS(read_train_config(path), IoError);
  std::remove(path.c_str());
  CHECK_THROWS_AS(read_train_config(path), IoError);
}
