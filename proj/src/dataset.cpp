#include "kmetamodes/dataset.hpp"

#include <algorithm>

#include "kmetamodes/csv.hpp"
#include "kmetamodes/error.hpp"

namespace kmm {

std::string_view to_string(RecipeKind kind) {
  switch (kind) {
    case RecipeKind::kdd99: return "kdd99";
    case RecipeKind::unsw_nb15: return "unsw-nb15";
    case RecipeKind::generic: return "generic";
  }
  return "?";
}

std::optional<RecipeKind> recipe_from_string(std::string_view name) {
  if (name == "kdd99" || name == "kdd") return RecipeKind::kdd99;
  if (name == "unsw-nb15" || name == "unsw_nb15" || name == "unsw") return RecipeKind::unsw_nb15;
  if (name == "generic") return RecipeKind::generic;
  return std::nullopt;
}

DatasetRecipe DatasetRecipe::kdd99() {
  DatasetRecipe recipe;
  recipe.kind = RecipeKind::kdd99;
  recipe.row_limit = 400000;
  recipe.label_column = "label";
  return recipe;
}

DatasetRecipe DatasetRecipe::unsw_nb15() {
  DatasetRecipe recipe;
  recipe.kind = RecipeKind::unsw_nb15;
  recipe.row_limit = 1087203;
  recipe.label_column = "label";
  recipe.exclude_columns = {"attack_cat"};
  return recipe;
}

DatasetRecipe DatasetRecipe::generic(std::string label_column) {
  DatasetRecipe recipe;
  recipe.kind = RecipeKind::generic;
  recipe.label_column = std::move(label_column);
  return recipe;
}

std::vector<std::string> DatasetRecipe::fixed_header() const {
  switch (kind) {
    case RecipeKind::kdd99:
      return {"duration", "protocol_type", "service", "flag", "src_bytes", "dst_bytes",
              "land", "wrong_fragment", "urgent", "hot", "num_failed_logins", "logged_in",
              "num_compromised", "root_shell", "su_attempted", "num_root",
              "num_file_creations", "num_shells", "num_access_files", "num_outbound_cmds",
              "is_host_login", "is_guest_login", "count", "srv_count", "serror_rate",
              "srv_serror_rate", "rerror_rate", "srv_rerror_rate", "same_srv_rate",
              "diff_srv_rate", "srv_diff_host_rate", "dst_host_count", "dst_host_srv_count",
              "dst_host_same_srv_rate", "dst_host_diff_srv_rate",
              "dst_host_same_src_port_rate", "dst_host_srv_diff_host_rate",
              "dst_host_serror_rate", "dst_host_srv_serror_rate", "dst_host_rerror_rate",
              "dst_host_srv_rerror_rate", "label"};
    case RecipeKind::unsw_nb15:
      return {"srcip", "sport", "dstip", "dsport", "proto", "state", "dur", "sbytes",
              "dbytes", "sttl", "dttl", "sloss", "dloss", "service", "sload", "dload",
              "spkts", "dpkts", "swin", "dwin", "stcpb", "dtcpb", "smeansz", "dmeansz",
              "trans_depth", "res_bdy_len", "sjit", "djit", "stime", "ltime", "sintpkt",
              "dintpkt", "tcprtt", "synack", "ackdat", "is_sm_ips_ports", "ct_state_ttl",
              "ct_flw_http_mthd", "is_ftp_login", "ct_ftp_cmd", "ct_srv_src", "ct_srv_dst",
              "ct_dst_ltm", "ct_src_ltm", "ct_src_dport_ltm", "ct_dst_sport_ltm",
              "ct_dst_src_ltm", "attack_cat", "label"};
    case RecipeKind::generic:
      return {};
  }
  return {};
}

namespace {

std::string trimmed(const std::string& text) {
  std::size_t b = 0, e = text.size();
  while (b < e && (text[b] == ' ' || text[b] == '\t')) ++b;
  while (e > b && (text[e - 1] == ' ' || text[e - 1] == '\t')) --e;
  return text.substr(b, e - b);
}

// Label rule per recipe; false = malformed label (row skipped and counted).
bool binarize_label(const DatasetRecipe& recipe, const std::string& raw, std::uint8_t& out) {
  switch (recipe.kind) {
    case RecipeKind::kdd99:
      out = raw != "normal." ? 1 : 0;
      return true;
    case RecipeKind::unsw_nb15:
    case RecipeKind::generic: {
      const std::string value = trimmed(raw);
      double parsed = 0.0;
      if (!parse_double(value, parsed)) return false;
      out = parsed != 0.0 ? 1 : 0;
      return true;
    }
  }
  return false;
}

std::string attack_category(const DatasetRecipe& recipe, const std::vector<std::string>& row,
                            std::size_t attack_cat_column, std::size_t label_column) {
  switch (recipe.kind) {
    case RecipeKind::kdd99: {
      std::string name = row[label_column];
      if (!name.empty() && name.back() == '.') name.pop_back();
      return name;
    }
    case RecipeKind::unsw_nb15: {
      const std::string name = trimmed(row[attack_cat_column]);
      return name.empty() ? "normal" : name;
    }
    case RecipeKind::generic:
      return {};
  }
  return {};
}

}  // namespace

LoadedDataset load_dataset(const std::vector<std::string>& paths, const DatasetRecipe& recipe) {
  if (paths.empty()) raise(Errc::ingest, "no input files");

  LoadedDataset out;
  out.header = recipe.fixed_header();
  const bool header_in_file = out.header.empty();

  std::size_t label_column = kNoIndex;
  std::size_t attack_cat_column = kNoIndex;
  std::uint64_t parsed_rows = 0;

  const auto resolve_columns = [&]() {
    if (!recipe.label_column.empty()) {
      const auto it = std::find(out.header.begin(), out.header.end(), recipe.label_column);
      if (it == out.header.end()) {
        raise(Errc::ingest, "label column '" + recipe.label_column + "' not in header");
      }
      label_column = static_cast<std::size_t>(it - out.header.begin());
    }
    const auto it = std::find(out.header.begin(), out.header.end(), "attack_cat");
    if (it != out.header.end()) {
      attack_cat_column = static_cast<std::size_t>(it - out.header.begin());
    }
  };
  if (!header_in_file) resolve_columns();

  std::vector<std::string> row;
  bool done = false;
  for (const std::string& path : paths) {
    if (done) break;
    CsvReader reader(path);
    if (header_in_file && out.header.empty()) {
      if (!reader.next(out.header)) raise(Errc::ingest, path + " is empty");
      resolve_columns();
    } else if (header_in_file) {
      // Subsequent generic files repeat the header; require it to match.
      std::vector<std::string> repeated;
      if (!reader.next(repeated)) continue;
      if (repeated != out.header) {
        raise(Errc::ingest, path + " header does not match the first input file");
      }
    }
    while (reader.next(row)) {
      if (recipe.row_limit && parsed_rows >= *recipe.row_limit) {
        done = true;
        break;
      }
      if (row.size() != out.header.size()) {
        ++out.malformed_rows;
        continue;
      }
      std::uint8_t label = 0;
      if (label_column != kNoIndex && !binarize_label(recipe, row[label_column], label)) {
        ++out.malformed_rows;
        continue;
      }
      ++parsed_rows;
      if (label_column != kNoIndex) {
        out.labels.push_back(label);
        out.attack_categories.push_back(
            attack_category(recipe, row, attack_cat_column, label_column));
      }
      out.rows.push_back(row);
    }
  }

  if (out.rows.empty()) raise(Errc::ingest, "no usable rows in input");
  const double total = static_cast<double>(out.rows.size() + out.malformed_rows);
  if (static_cast<double>(out.malformed_rows) > 0.01 * total) {
    raise(Errc::ingest, std::to_string(out.malformed_rows) + " of " +
                            std::to_string(static_cast<std::uint64_t>(total)) +
                            " rows malformed (>1%)");
  }
  return out;
}

DiscretizeConfig make_discretize_config(const DatasetRecipe& recipe, std::uint32_t bins,
                                        const std::string& missing_token) {
  DiscretizeConfig config;
  config.bins = bins;
  config.label_column = recipe.label_column;
  config.exclude_columns = recipe.exclude_columns;
  config.missing_token = missing_token;
  return config;
}

}  // namespace kmm
