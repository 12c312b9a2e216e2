#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kmetamodes/schema.hpp"

namespace kmm {

enum class RecipeKind { kdd99, unsw_nb15, generic };

std::string_view to_string(RecipeKind kind);
std::optional<RecipeKind> recipe_from_string(std::string_view name);

// Pinned column roles per dataset. kdd99 and unsw_nb15 files carry no header
// row; the recipe supplies the feature names and the label rule.
struct DatasetRecipe {
  RecipeKind kind = RecipeKind::generic;
  std::optional<std::uint64_t> row_limit;
  std::string label_column;                 // empty = unlabeled (generic only)
  std::vector<std::string> exclude_columns; // never clustered, e.g. attack_cat

  // KDD Cup 1999: 41 features + trailing label ("normal." vs attack types);
  // row_limit 400,000 keeps the low-attack-ratio head of the file.
  static DatasetRecipe kdd99();
  // UNSW-NB15: 47 features + attack_cat + binary label, no header; the
  // default row_limit 1,087,203 spans the first simulation period when the
  // published CSVs are passed in order (_1 then _2).
  static DatasetRecipe unsw_nb15();
  static DatasetRecipe generic(std::string label_column = "");

  // Column names for headerless formats; empty for generic.
  std::vector<std::string> fixed_header() const;
};

struct LoadedDataset {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;   // full raw rows, file order
  std::vector<std::uint8_t> labels;             // empty when unlabeled
  std::vector<std::string> attack_categories;   // empty strings when n/a
  std::uint64_t malformed_rows = 0;
};

// Streams the CSVs in order, applies the recipe's row limit and label rule.
// Malformed rows (wrong column count, unparseable label) are counted and
// skipped; more than 1% of them is an ingest-error.
LoadedDataset load_dataset(const std::vector<std::string>& paths, const DatasetRecipe& recipe);

// The recipe's view of the discretizer config (label/excluded columns).
DiscretizeConfig make_discretize_config(const DatasetRecipe& recipe, std::uint32_t bins,
                                        const std::string& missing_token);

}  // namespace kmm
