#include "kemeny/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include "kemeny/error.hpp"

namespace kemeny {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

bool parse_double_cell(const std::string& text, double* out) {
  const std::string t = trim(text);
  if (t.empty()) return false;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(first, last, *out);
  return ec == std::errc() && ptr == last;
}

bool parse_int_cell(const std::string& text, long long* out) {
  const std::string t = trim(text);
  if (t.empty()) return false;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(first, last, *out);
  return ec == std::errc() && ptr == last;
}

nlohmann::json parse_json_file(const std::string& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(std::string("cannot open ") + what + ": " + path);
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) {
    throw IoError(std::string("corrupt ") + what + " (not valid JSON): " + path);
  }
  return j;
}

void write_json_file(const nlohmann::json& j, const std::string& path,
                     const char* what) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(std::string("cannot open ") + what + " for writing: " + path);
  out << j.dump(1) << '\n';
  if (!out.good()) throw IoError(std::string("short write on ") + what + ": " + path);
}

const nlohmann::json& require_field(const nlohmann::json& j, const char* name,
                                    const char* context) {
  auto it = j.find(name);
  if (it == j.end()) {
    throw InvalidInputError(std::string(context) + ": missing field '" + name + "'");
  }
  return *it;
}

template <typename T>
T field_as(const nlohmann::json& j, const char* name, const char* context) {
  try {
    return require_field(j, name, context).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw InvalidInputError(std::string(context) + ": field '" + name +
                            "' has the wrong type");
  }
}

template <typename T>
T field_or(const nlohmann::json& j, const char* name, const char* context,
           T fallback) {
  if (!j.contains(name)) return fallback;
  return field_as<T>(j, name, context);
}

}  // namespace

void write_instance_file(const Profile& profile, const std::string& provenance,
                         const std::string& path) {
  profile.validate();
  nlohmann::json j;
  j["format_version"] = kInstanceFormatVersion;
  j["n"] = profile.n;
  j["m"] = profile.m();
  if (!profile.item_labels.empty()) j["item_labels"] = profile.item_labels;
  nlohmann::json rankings = nlohmann::json::array();
  for (const Ranking& r : profile.rankings) rankings.push_back(r.order);
  j["rankings"] = std::move(rankings);
  j["provenance"] = provenance;
  write_json_file(j, path, "instance file");
}

InstanceFile read_instance_file(const std::string& path) {
  const nlohmann::json j = parse_json_file(path, "instance file");
  try {
    InstanceFile file;
    file.format_version = field_as<int>(j, "format_version", "instance file");
    if (file.format_version != kInstanceFormatVersion) {
      throw ConfigMismatchError(
          "instance file format version " + std::to_string(file.format_version) +
          " is not supported (" + std::to_string(kInstanceFormatVersion) + ")");
    }
    file.profile.n = field_as<int>(j, "n", "instance file");
    if (j.contains("item_labels")) {
      file.profile.item_labels =
          field_as<std::vector<std::string>>(j, "item_labels", "instance file");
    }
    const auto orders = field_as<std::vector<std::vector<Item>>>(j, "rankings",
                                                                 "instance file");
    file.profile.rankings.reserve(orders.size());
    for (auto& o : orders) file.profile.rankings.emplace_back(o);
    const int m = field_as<int>(j, "m", "instance file");
    if (m != file.profile.m()) {
      throw InvalidInputError("instance file: m=" + std::to_string(m) +
                              " but " + std::to_string(file.profile.m()) +
                              " rankings are present");
    }
    file.provenance = field_as<std::string>(j, "provenance", "instance file");
    file.profile.validate();
    return file;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("corrupt instance file (" + std::string(e.what()) + "): " + path);
  }
}

MetricTable read_metric_table_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open metric table: " + path);

  MetricTable table;
  std::string line;
  int line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::vector<std::string> cells = split(line, ',');
    if (!have_header) {
      if (cells.size() < 2) {
        throw IngestError("metric table: header line has no metric columns");
      }
      for (std::size_t c = 1; c < cells.size(); ++c) {
        table.column_names.push_back(trim(cells[c]));
      }
      table.columns.assign(table.column_names.size(), {});
      have_header = true;
      continue;
    }
    const std::string label = trim(cells[0]);
    if (label.empty()) {
      throw IngestError("metric table: empty row label at line " +
                        std::to_string(line_no));
    }
    for (std::size_t c = 0; c < table.column_names.size(); ++c) {
      if (c + 1 >= cells.size() || trim(cells[c + 1]).empty()) {
        throw IngestError("metric table: missing value at row '" + label +
                          "', column '" + table.column_names[c] + "'");
      }
      double v = 0.0;
      if (!parse_double_cell(cells[c + 1], &v)) {
        throw IngestError("metric table: non-numeric cell at row '" + label +
                          "', column '" + table.column_names[c] + "': '" +
                          trim(cells[c + 1]) + "'");
      }
      table.columns[c].push_back(v);
    }
    if (cells.size() > table.column_names.size() + 1) {
      throw IngestError("metric table: row '" + label + "' has " +
                        std::to_string(cells.size() - 1) + " values, expected " +
                        std::to_string(table.column_names.size()));
    }
    table.row_labels.push_back(label);
  }
  if (!have_header) throw IngestError("metric table: empty file: " + path);
  if (table.row_labels.empty()) {
    throw IngestError("metric table: no data rows: " + path);
  }
  return table;
}

Profile read_preflib_soc(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open soc file: " + path);

  Profile profile;
  std::string line;
  int line_no = 0;
  int n = -1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = trim(line);
    if (body.empty() || body[0] == '#') continue;
    if (body.find('{') != std::string::npos) {
      throw IngestError("soc line " + std::to_string(line_no) +
                        ": ties are not supported (strict orders only)");
    }
    const std::size_t colon = body.find(':');
    if (colon == std::string::npos) {
      throw IngestError("soc line " + std::to_string(line_no) +
                        ": expected 'count: a,b,c'");
    }
    long long count = 0;
    if (!parse_int_cell(body.substr(0, colon), &count) || count < 1) {
      throw IngestError("soc line " + std::to_string(line_no) +
                        ": malformed voter count '" +
                        trim(body.substr(0, colon)) + "'");
    }
    const std::vector<std::string> cells = split(body.substr(colon + 1), ',');
    std::vector<Item> order;
    order.reserve(cells.size());
    for (const std::string& cell : cells) {
      long long a = 0;
      if (!parse_int_cell(cell, &a)) {
        throw IngestError("soc line " + std::to_string(line_no) +
                          ": malformed alternative '" + trim(cell) + "'");
      }
      order.push_back(static_cast<Item>(a - 1));
    }
    if (n < 0) {
      n = static_cast<int>(order.size());
      if (n < 1) {
        throw IngestError("soc line " + std::to_string(line_no) +
                          ": empty ballot");
      }
      profile.n = n;
    }
    if (!validate_ranking(order, n)) {
      throw IngestError("soc line " + std::to_string(line_no) +
                        ": ballot is not a complete strict order over 1.." +
                        std::to_string(n));
    }
    for (long long i = 0; i < count; ++i) {
      profile.rankings.emplace_back(order);
    }
  }
  if (n < 0) throw IngestError("soc file has no ballots: " + path);
  profile.validate();
  return profile;
}

std::vector<SortDirection> parse_directions(const std::string& text) {
  std::vector<SortDirection> out;
  if (trim(text).empty()) return out;
  for (const std::string& token : split(text, ',')) {
    const std::string t = trim(token);
    if (t == "asc") {
      out.push_back(SortDirection::kAscending);
    } else if (t == "desc") {
      out.push_back(SortDirection::kDescending);
    } else {
      throw InvalidInputError("direction '" + t + "' is not 'asc' or 'desc'");
    }
  }
  return out;
}

nlohmann::json generator_spec_to_json(const GeneratorSpec& spec) {
  nlohmann::json j;
  j["kind"] = to_string(spec.kind);
  j["n"] = spec.n;
  j["m"] = spec.m;
  j["seed"] = spec.seed;
  if (spec.repeat_count) j["repeat_count"] = *spec.repeat_count;
  j["scale_m"] = spec.scale_m;
  j["swap_passes"] = spec.swap_passes;
  return j;
}

GeneratorSpec generator_spec_from_json(const nlohmann::json& j) {
  constexpr const char* ctx = "generator spec";
  GeneratorSpec spec;
  spec.kind = gen_kind_from_string(field_as<std::string>(j, "kind", ctx));
  spec.n = field_as<int>(j, "n", ctx);
  spec.m = field_as<int>(j, "m", ctx);
  spec.seed = field_or<std::uint64_t>(j, "seed", ctx, 0);
  if (j.contains("repeat_count")) {
    spec.repeat_count = field_as<int>(j, "repeat_count", ctx);
  }
  spec.scale_m = field_or<double>(j, "scale_m", ctx, 1.0);
  spec.swap_passes = field_or<int>(j, "swap_passes", ctx, 1);
  return spec;
}

nlohmann::json model_config_to_json(const ModelConfig& config) {
  nlohmann::json j;
  j["d_model"] = config.d_model;
  j["n_heads"] = config.n_heads;
  j["d_ff"] = config.d_ff;
  j["encoder_layers"] = config.encoder_layers;
  j["decoder_layers"] = config.decoder_layers;
  j["max_m"] = config.max_m;
  j["pe_base"] = config.pe_base;
  return j;
}

ModelConfig model_config_from_json(const nlohmann::json& j) {
  constexpr const char* ctx = "model config";
  ModelConfig config;
  config.d_model = field_or<int>(j, "d_model", ctx, config.d_model);
  config.n_heads = field_or<int>(j, "n_heads", ctx, config.n_heads);
  config.d_ff = field_or<int>(j, "d_ff", ctx, config.d_ff);
  config.encoder_layers = field_or<int>(j, "encoder_layers", ctx, config.encoder_layers);
  config.decoder_layers = field_or<int>(j, "decoder_layers", ctx, config.decoder_layers);
  config.max_m = field_or<int>(j, "max_m", ctx, config.max_m);
  config.pe_base = field_or<double>(j, "pe_base", ctx, config.pe_base);
  return config;
}

nlohmann::json parameters_to_json(const Parameters<float>& params) {
  nlohmann::json j;
  for (int i = 0; i < params.count(); ++i) {
    nlohmann::json t;
    t["rows"] = params.rows[i];
    t["cols"] = params.cols[i];
    nlohmann::json data = nlohmann::json::array();
    for (float v : params.data[i]) data.push_back(static_cast<double>(v));
    t["data"] = std::move(data);
    j[params.names[i]] = std::move(t);
  }
  return j;
}

void parameters_from_json(const nlohmann::json& j, Parameters<float>& out) {
  if (!j.is_object()) {
    throw ConfigMismatchError("parameters block is not an object");
  }
  if (static_cast<int>(j.size()) != out.count()) {
    throw ConfigMismatchError("parameters block has " + std::to_string(j.size()) +
                              " tensors, expected " + std::to_string(out.count()));
  }
  for (int i = 0; i < out.count(); ++i) {
    const std::string& name = out.names[i];
    auto it = j.find(name);
    if (it == j.end()) {
      throw ConfigMismatchError("parameters block is missing tensor '" + name + "'");
    }
    const nlohmann::json& t = *it;
    const int rows = t.at("rows").get<int>();
    const int cols = t.at("cols").get<int>();
    if (rows != out.rows[i] || cols != out.cols[i]) {
      throw ConfigMismatchError("tensor '" + name + "' is " + std::to_string(rows) +
                                "x" + std::to_string(cols) + ", expected " +
                                std::to_string(out.rows[i]) + "x" +
                                std::to_string(out.cols[i]));
    }
    const auto& data = t.at("data");
    if (static_cast<int>(data.size()) != rows * cols) {
      throw ConfigMismatchError("tensor '" + name + "' has " +
                                std::to_string(data.size()) + " values, expected " +
                                std::to_string(rows * cols));
    }
    for (std::size_t k = 0; k < out.data[i].size(); ++k) {
      out.data[i][k] = static_cast<float>(data[k].get<double>());
    }
  }
}

nlohmann::json train_config_to_json(const TrainConfig& config) {
  nlohmann::json j;
  j["epochs"] = config.epochs;
  j["steps_per_epoch"] = config.steps_per_epoch;
  j["batch_size"] = config.batch_size;
  j["alpha"] = config.alpha;
  j["learning_rate"] = config.learning_rate;
  nlohmann::json mix = nlohmann::json::array();
  for (const GeneratorSpec& spec : config.instance_mix) {
    mix.push_back(generator_spec_to_json(spec));
  }
  j["instance_mix"] = std::move(mix);
  j["validation_size"] = config.validation_size;
  j["seed"] = config.seed;
  j["model"] = model_config_to_json(config.model);
  return j;
}

TrainConfig train_config_from_json(const nlohmann::json& j) {
  constexpr const char* ctx = "train config";
  TrainConfig config;
  config.epochs = field_as<int>(j, "epochs", ctx);
  config.steps_per_epoch = field_as<int>(j, "steps_per_epoch", ctx);
  config.batch_size = field_as<int>(j, "batch_size", ctx);
  config.alpha = field_or<double>(j, "alpha", ctx, config.alpha);
  config.learning_rate = field_or<double>(j, "learning_rate", ctx, config.learning_rate);
  const nlohmann::json& mix = require_field(j, "instance_mix", ctx);
  if (!mix.is_array()) {
    throw InvalidInputError("train config: field 'instance_mix' has the wrong type");
  }
  for (const auto& spec : mix) {
    config.instance_mix.push_back(generator_spec_from_json(spec));
  }
  config.validation_size =
      field_or<int>(j, "validation_size", ctx, config.validation_size);
  config.seed = field_or<std::uint64_t>(j, "seed", ctx, config.seed);
  if (j.contains("model")) {
    config.model = model_config_from_json(j.at("model"));
  }
  return config;
}

TrainConfig read_train_config(const std::string& path) {
  const nlohmann::json j = parse_json_file(path, "train config");
  TrainConfig config = train_config_from_json(j);
  config.validate();
  return config;
}

}  // namespace kemeny
