#include "kmetamodes/schema.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <unordered_set>

#include <json.hpp>

#include "kmetamodes/error.hpp"

namespace kmm {

using ordered_json = nlohmann::ordered_json;

bool parse_double(std::string_view text, double& out) {
  // Trim ASCII whitespace, accept an optional leading '+' (from_chars does not).
  std::size_t b = 0, e = text.size();
  while (b < e && (text[b] == ' ' || text[b] == '\t')) ++b;
  while (e > b && (text[e - 1] == ' ' || text[e - 1] == '\t' || text[e - 1] == '\r')) --e;
  if (b == e) return false;
  if (text[b] == '+') ++b;
  if (b == e) return false;
  const char* first = text.data() + b;
  const char* last = text.data() + e;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && std::isfinite(out);
}

std::vector<double> fit_bins(std::vector<double> values, std::uint32_t bins) {
  if (bins < 2) raise(Errc::config, "bins must be >= 2, got " + std::to_string(bins));
  if (values.empty()) raise(Errc::schema, "fit_bins on empty value list");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  std::vector<double> edges;
  edges.reserve(bins - 1);
  for (std::uint32_t i = 1; i < bins; ++i) {
    const double p = static_cast<double>(i) / static_cast<double>(bins);
    const double h = p * static_cast<double>(n - 1);
    const std::size_t lo = static_cast<std::size_t>(h);
    const double frac = h - static_cast<double>(lo);
    double q = values[lo];
    if (frac > 0.0 && lo + 1 < n) q += frac * (values[lo + 1] - values[lo]);
    if (edges.empty() || q > edges.back()) edges.push_back(q);
  }
  return edges;
}

namespace {

CategoryId bin_of(double value, const std::vector<double>& edges) {
  // First edge >= value is the bin; above every edge clips to the last bin.
  const auto it = std::lower_bound(edges.begin(), edges.end(), value);
  return static_cast<CategoryId>(it - edges.begin());
}

}  // namespace

Schema infer_schema(const std::vector<std::string>& header,
                    const std::vector<std::vector<std::string>>& sample_rows,
                    const DiscretizeConfig& config) {
  if (header.empty()) raise(Errc::schema, "empty header");
  if (sample_rows.empty()) raise(Errc::schema, "no rows to infer from");
  {
    std::unordered_set<std::string> seen;
    for (const auto& name : header) {
      if (!seen.insert(name).second) raise(Errc::schema, "duplicate column name '" + name + "'");
    }
  }

  Schema schema;
  schema.header = header;
  schema.missing_token = config.missing_token;

  std::vector<bool> excluded(header.size(), false);
  if (!config.label_column.empty()) {
    const auto it = std::find(header.begin(), header.end(), config.label_column);
    if (it == header.end()) {
      raise(Errc::schema, "label column '" + config.label_column + "' not in header");
    }
    schema.label_column = static_cast<std::size_t>(it - header.begin());
    excluded[*schema.label_column] = true;
  }
  for (const auto& name : config.exclude_columns) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) raise(Errc::schema, "excluded column '" + name + "' not in header");
    const auto idx = static_cast<std::size_t>(it - header.begin());
    if (!excluded[idx]) {
      schema.ignored_columns.push_back(idx);
      excluded[idx] = true;
    }
  }
  std::sort(schema.ignored_columns.begin(), schema.ignored_columns.end());

  const std::size_t window =
      std::min<std::size_t>(sample_rows.size(), std::max<std::uint32_t>(config.infer_rows, 1));

  for (std::size_t col = 0; col < header.size(); ++col) {
    if (excluded[col]) continue;

    // Numeric iff the decision window holds at least one non-missing value
    // and every non-missing value parses as a real number.
    bool any_value = false;
    bool all_numeric = true;
    double parsed = 0.0;
    for (std::size_t r = 0; r < window && all_numeric; ++r) {
      const auto& row = sample_rows[r];
      if (row.size() != header.size()) continue;
      const std::string& cell = row[col];
      if (cell == config.missing_token) continue;
      any_value = true;
      all_numeric = parse_double(cell, parsed);
    }
    const bool numeric = any_value && all_numeric;

    AttributeSpec attr;
    attr.name = header[col];
    attr.source_column = col;
    if (numeric) {
      attr.kind = AttributeSpec::Kind::numeric;
      std::vector<double> values;
      values.reserve(sample_rows.size());
      for (const auto& row : sample_rows) {
        if (row.size() != header.size()) continue;
        const std::string& cell = row[col];
        if (cell == config.missing_token) continue;
        if (parse_double(cell, parsed)) values.push_back(parsed);
      }
      attr.bin_edges = fit_bins(std::move(values), config.bins);
    } else {
      attr.kind = AttributeSpec::Kind::categorical;
      for (const auto& row : sample_rows) {
        if (row.size() != header.size()) continue;
        const std::string& cell = row[col];
        if (cell == config.missing_token) continue;
        if (attr.category_ids.emplace(cell, static_cast<CategoryId>(attr.category_names.size()))
                .second) {
          attr.category_names.push_back(cell);
        }
      }
    }
    schema.attributes.push_back(std::move(attr));
  }
  if (schema.attributes.empty()) raise(Errc::schema, "no clustering attributes left");
  return schema;
}

bool discretize_row(std::span<const std::string> raw, const Schema& schema,
                    std::vector<CategoryId>& out) {
  if (raw.size() != schema.column_count()) return false;
  out.resize(schema.m());
  for (std::size_t j = 0; j < schema.attributes.size(); ++j) {
    const AttributeSpec& attr = schema.attributes[j];
    const std::string& cell = raw[attr.source_column];
    if (cell == schema.missing_token) {
      out[j] = attr.missing_id();
    } else if (attr.kind == AttributeSpec::Kind::numeric) {
      double value = 0.0;
      out[j] = parse_double(cell, value) ? bin_of(value, attr.bin_edges) : attr.missing_id();
    } else {
      const auto it = attr.category_ids.find(cell);
      out[j] = it != attr.category_ids.end() ? it->second : attr.unseen_id();
    }
  }
  return true;
}

std::vector<std::uint32_t> Schema::domain_sizes() const {
  std::vector<std::uint32_t> sizes;
  sizes.reserve(attributes.size());
  for (const auto& attr : attributes) sizes.push_back(attr.domain_size());
  return sizes;
}

std::string Schema::to_json() const {
  ordered_json doc;
  doc["format"] = "kmetamodes-schema";
  doc["version"] = 1;
  doc["missing_token"] = missing_token;
  doc["header"] = header;
  if (label_column) {
    doc["label_column"] = header[*label_column];
  } else {
    doc["label_column"] = nullptr;
  }
  ordered_json ignored = ordered_json::array();
  for (std::size_t idx : ignored_columns) ignored.push_back(header[idx]);
  doc["ignored_columns"] = ignored;
  ordered_json attrs = ordered_json::array();
  for (const auto& attr : attributes) {
    ordered_json a;
    a["name"] = attr.name;
    a["column"] = attr.source_column;
    if (attr.kind == AttributeSpec::Kind::numeric) {
      a["kind"] = "numeric";
      a["bin_edges"] = attr.bin_edges;
    } else {
      a["kind"] = "categorical";
      a["categories"] = attr.category_names;
    }
    attrs.push_back(std::move(a));
  }
  doc["attributes"] = std::move(attrs);
  return doc.dump(2) + "\n";
}

Schema Schema::from_json(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const std::exception& ex) {
    raise(Errc::schema, std::string("unparseable schema JSON: ") + ex.what());
  }
  try {
    if (doc.at("format").get<std::string>() != "kmetamodes-schema") {
      raise(Errc::schema, "not a kmetamodes schema file");
    }
    const int version = doc.at("version").get<int>();
    if (version != 1) {
      raise(Errc::schema,
            "schema version mismatch: file has " + std::to_string(version) + ", reader has 1");
    }
    Schema schema;
    schema.missing_token = doc.at("missing_token").get<std::string>();
    schema.header = doc.at("header").get<std::vector<std::string>>();
    if (!doc.at("label_column").is_null()) {
      const auto name = doc.at("label_column").get<std::string>();
      const auto it = std::find(schema.header.begin(), schema.header.end(), name);
      if (it == schema.header.end()) raise(Errc::schema, "label column not in header");
      schema.label_column = static_cast<std::size_t>(it - schema.header.begin());
    }
    for (const auto& name : doc.at("ignored_columns").get<std::vector<std::string>>()) {
      const auto it = std::find(schema.header.begin(), schema.header.end(), name);
      if (it == schema.header.end()) raise(Errc::schema, "ignored column not in header");
      schema.ignored_columns.push_back(static_cast<std::size_t>(it - schema.header.begin()));
    }
    for (const auto& a : doc.at("attributes")) {
      AttributeSpec attr;
      attr.name = a.at("name").get<std::string>();
      attr.source_column = a.at("column").get<std::size_t>();
      if (a.at("kind").get<std::string>() == "numeric") {
        attr.kind = AttributeSpec::Kind::numeric;
        attr.bin_edges = a.at("bin_edges").get<std::vector<double>>();
      } else {
        attr.kind = AttributeSpec::Kind::categorical;
        attr.category_names = a.at("categories").get<std::vector<std::string>>();
        for (std::size_t i = 0; i < attr.category_names.size(); ++i) {
          attr.category_ids.emplace(attr.category_names[i], static_cast<CategoryId>(i));
        }
      }
      schema.attributes.push_back(std::move(attr));
    }
    return schema;
  } catch (const Error&) {
    throw;
  } catch (const std::exception& ex) {
    raise(Errc::schema, std::string("malformed schema JSON: ") + ex.what());
  }
}

std::string Schema::hash() const {
  const std::string text = to_json();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  static const char* hex = "0123456789abcdef";
  for (int i = 15; i >= 0; --i) {
    buf[i] = hex[h & 0xF];
    h >>= 4;
  }
  buf[16] = '\0';
  return std::string(buf);
}

void save_schema(const Schema& schema, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(Errc::io, "cannot write " + path);
  out << schema.to_json();
  if (!out) raise(Errc::io, "write failed for " + path);
}

Schema load_schema(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Errc::io, "cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return Schema::from_json(text);
}

}  // namespace kmm
