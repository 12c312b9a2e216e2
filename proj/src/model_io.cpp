#include "kmetamodes/model_io.hpp"

#include <fstream>

#include <json.hpp>

#include "kmetamodes/error.hpp"

namespace kmm {

using ordered_json = nlohmann::ordered_json;

namespace {

constexpr int kModelVersion = 1;

ordered_json counts_to_json(const std::vector<CountMap>& counts) {
  ordered_json attrs = ordered_json::array();
  for (const CountMap& cm : counts) {
    ordered_json pairs = ordered_json::array();
    for (const auto& [cat, count] : cm) pairs.push_back({cat, count});
    attrs.push_back(std::move(pairs));
  }
  return attrs;
}

std::vector<CountMap> counts_from_json(const ordered_json& attrs) {
  std::vector<CountMap> counts;
  counts.reserve(attrs.size());
  for (const auto& pairs : attrs) {
    CountMap cm;
    cm.reserve(pairs.size());
    for (const auto& pair : pairs) {
      cm.emplace_back(pair.at(0).get<CategoryId>(), pair.at(1).get<std::uint64_t>());
    }
    counts.push_back(std::move(cm));
  }
  return counts;
}

DistanceKind parse_distance(const std::string& name) {
  const auto kind = distance_from_string(name);
  if (!kind) raise(Errc::model, "unknown distance '" + name + "' in model file");
  return *kind;
}

}  // namespace

bool operator==(const EnsembleConfig& a, const EnsembleConfig& b) {
  return a.sample_size == b.sample_size && a.num_samples == b.num_samples &&
         a.cover_all == b.cover_all && a.k == b.k && a.k_meta == b.k_meta &&
         a.stage1_distance == b.stage1_distance && a.stage2_distance == b.stage2_distance &&
         a.seed == b.seed && a.max_iterations == b.max_iterations;
}

bool Model::operator==(const Model& other) const {
  return schema_hash == other.schema_hash && params == other.params && modes == other.modes &&
         metamodes == other.metamodes && mode_to_metamode == other.mode_to_metamode &&
         record_mode == other.record_mode;
}

Model make_model(MetaResult&& fit, const EnsembleConfig& params, const std::string& schema_hash) {
  Model model;
  model.schema_hash = schema_hash;
  model.params = params;
  model.modes = std::move(fit.modes);
  model.metamodes = std::move(fit.metamodes);
  model.mode_to_metamode = std::move(fit.mode_to_metamode);
  bool covered = !fit.record_mode.empty();
  for (std::uint32_t g : fit.record_mode) covered &= g != kNoIndex;
  if (covered) model.record_mode = std::move(fit.record_mode);
  return model;
}

std::string model_to_json(const Model& model) {
  ordered_json doc;
  doc["format"] = "kmetamodes-model";
  doc["version"] = kModelVersion;
  doc["schema_hash"] = model.schema_hash;
  doc["distance"] = std::string(to_string(model.params.stage2_distance));
  ordered_json params;
  params["sample_size"] = model.params.sample_size;
  params["num_samples"] = model.params.num_samples;
  params["cover_all"] = model.params.cover_all;
  params["k"] = model.params.k;
  params["k_meta"] = model.params.k_meta;
  params["stage1_distance"] = std::string(to_string(model.params.stage1_distance));
  params["stage2_distance"] = std::string(to_string(model.params.stage2_distance));
  params["seed"] = model.params.seed;
  params["max_iterations"] = model.params.max_iterations;
  doc["params"] = std::move(params);

  ordered_json modes = ordered_json::array();
  for (const Mode& mode : model.modes) {
    ordered_json entry;
    entry["id"] = mode.id;
    entry["n"] = mode.n_members;
    entry["counts"] = counts_to_json(mode.counts);
    modes.push_back(std::move(entry));
  }
  doc["modes"] = std::move(modes);

  ordered_json metamodes = ordered_json::array();
  for (const Metamode& meta : model.metamodes) {
    ordered_json entry;
    entry["id"] = meta.id;
    entry["n"] = meta.n_total;
    entry["counts"] = counts_to_json(meta.counts);
    metamodes.push_back(std::move(entry));
  }
  doc["metamodes"] = std::move(metamodes);

  doc["mode_to_metamode"] = model.mode_to_metamode;
  doc["record_modes"] = model.record_mode;
  return doc.dump() + "\n";
}

Model model_from_json(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const std::exception& ex) {
    raise(Errc::model, std::string("unparseable model JSON: ") + ex.what());
  }
  try {
    if (doc.at("format").get<std::string>() != "kmetamodes-model") {
      raise(Errc::model, "not a kmetamodes model file");
    }
    const int version = doc.at("version").get<int>();
    if (version != kModelVersion) {
      raise(Errc::model, "model version mismatch: file has " + std::to_string(version) +
                             ", reader has " + std::to_string(kModelVersion));
    }
    Model model;
    model.schema_hash = doc.at("schema_hash").get<std::string>();
    const auto& params = doc.at("params");
    model.params.sample_size = params.at("sample_size").get<std::uint32_t>();
    model.params.num_samples = params.at("num_samples").get<std::uint32_t>();
    model.params.cover_all = params.at("cover_all").get<bool>();
    model.params.k = params.at("k").get<std::uint32_t>();
    model.params.k_meta = params.at("k_meta").get<std::uint32_t>();
    model.params.stage1_distance =
        parse_distance(params.at("stage1_distance").get<std::string>());
    model.params.stage2_distance =
        parse_distance(params.at("stage2_distance").get<std::string>());
    model.params.seed = params.at("seed").get<std::uint64_t>();
    model.params.max_iterations = params.at("max_iterations").get<std::uint32_t>();

    for (const auto& entry : doc.at("modes")) {
      Mode mode;
      mode.id = entry.at("id").get<std::uint32_t>();
      mode.n_members = entry.at("n").get<std::uint64_t>();
      mode.counts = counts_from_json(entry.at("counts"));
      model.modes.push_back(std::move(mode));
    }
    for (const auto& entry : doc.at("metamodes")) {
      Metamode meta;
      meta.id = entry.at("id").get<std::uint32_t>();
      meta.n_total = entry.at("n").get<std::uint64_t>();
      meta.counts = counts_from_json(entry.at("counts"));
      model.metamodes.push_back(std::move(meta));
    }
    model.mode_to_metamode = doc.at("mode_to_metamode").get<std::vector<std::uint32_t>>();
    model.record_mode = doc.at("record_modes").get<std::vector<std::uint32_t>>();
    return model;
  } catch (const Error&) {
    throw;
  } catch (const std::exception& ex) {
    raise(Errc::model, std::string("malformed model JSON: ") + ex.what());
  }
}

void save_model(const Model& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(Errc::io, "cannot write " + path);
  out << model_to_json(model);
  if (!out) raise(Errc::io, "write failed for " + path);
}

Model load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Errc::io, "cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return model_from_json(text);
}

}  // namespace kmm
