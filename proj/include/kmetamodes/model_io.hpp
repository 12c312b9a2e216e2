#pragma once

#include <string>
#include <vector>

#include "kmetamodes/ensemble.hpp"

namespace kmm {

// The fit/score contract: everything a score run needs from a fit run.
struct Model {
  std::string schema_hash;
  EnsembleConfig params;
  std::vector<Mode> modes;                      // global ids
  std::vector<Metamode> metamodes;
  std::vector<std::uint32_t> mode_to_metamode;
  std::vector<std::uint32_t> record_mode;       // empty unless fitted cover-all

  bool operator==(const Model& other) const;
};

bool operator==(const EnsembleConfig& a, const EnsembleConfig& b);

Model make_model(MetaResult&& fit, const EnsembleConfig& params, const std::string& schema_hash);

std::string model_to_json(const Model& model);
Model model_from_json(const std::string& text);

void save_model(const Model& model, const std::string& path);
Model load_model(const std::string& path);

}  // namespace kmm
