#pragma once

#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "kmetamodes/types.hpp"

namespace kmm {

struct DiscretizeConfig {
  std::uint32_t bins = 10;                  // target bin count for numeric columns
  std::string label_column;                 // empty = unlabeled data
  std::vector<std::string> exclude_columns; // kept in rows, never clustered (e.g. attack_cat)
  std::string missing_token;                // cell value treated as missing
  std::uint32_t infer_rows = 1000;          // numeric/categorical decision window
};

// One clustering attribute. Observed categories get dense ids in first-seen
// order; the missing and unseen sentinels are appended after them, so ids are
// dense in [0, domain_size()). Numeric attributes use bin indices as ids.
struct AttributeSpec {
  enum class Kind { categorical, numeric };

  std::string name;
  Kind kind = Kind::categorical;
  std::size_t source_column = 0;                     // index into the raw row
  std::vector<std::string> category_names;           // id -> string (categorical)
  std::unordered_map<std::string, CategoryId> category_ids;
  std::vector<double> bin_edges;                     // numeric, strictly ascending

  CategoryId missing_id() const {
    return kind == Kind::numeric ? static_cast<CategoryId>(bin_edges.size() + 1)
                                 : static_cast<CategoryId>(category_names.size());
  }
  CategoryId unseen_id() const {  // categorical only
    return static_cast<CategoryId>(category_names.size() + 1);
  }
  std::uint32_t domain_size() const {
    return kind == Kind::numeric ? static_cast<std::uint32_t>(bin_edges.size() + 2)
                                 : static_cast<std::uint32_t>(category_names.size() + 2);
  }

  bool operator==(const AttributeSpec& other) const {
    return name == other.name && kind == other.kind && source_column == other.source_column &&
           category_names == other.category_names && bin_edges == other.bin_edges;
  }
};

struct Schema {
  std::vector<AttributeSpec> attributes;       // the m clustering attributes
  std::vector<std::string> header;             // all raw columns, in file order
  std::optional<std::size_t> label_column;     // raw index, excluded from attributes
  std::vector<std::size_t> ignored_columns;    // raw indices, excluded from attributes
  std::string missing_token;                   // cell value mapped to missing_id

  std::size_t m() const { return attributes.size(); }
  std::size_t column_count() const { return header.size(); }
  std::vector<std::uint32_t> domain_sizes() const;

  // Deterministic serialization: identical schema => byte-identical JSON.
  std::string to_json() const;
  static Schema from_json(const std::string& text);
  std::string hash() const;  // FNV-1a 64 of to_json(), hex

  bool operator==(const Schema& other) const {
    return attributes == other.attributes && header == other.header &&
           label_column == other.label_column && ignored_columns == other.ignored_columns &&
           missing_token == other.missing_token;
  }
};

Schema infer_schema(const std::vector<std::string>& header,
                    const std::vector<std::vector<std::string>>& sample_rows,
                    const DiscretizeConfig& config);

// Edges at empirical quantiles i/bins (linear interpolation between closest
// ranks); duplicates collapsed, so fewer than bins-1 edges may come back.
std::vector<double> fit_bins(std::vector<double> values, std::uint32_t bins);

// Maps one raw row onto category ids. Returns false on column-count mismatch
// (the row-error case: caller skips and counts). `out` is resized to m.
bool discretize_row(std::span<const std::string> raw, const Schema& schema,
                    std::vector<CategoryId>& out);

// Full-string locale-independent float parse; rejects empty and trailing junk.
bool parse_double(std::string_view text, double& out);

void save_schema(const Schema& schema, const std::string& path);
Schema load_schema(const std::string& path);

}  // namespace kmm
