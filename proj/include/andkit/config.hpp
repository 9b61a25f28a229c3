#pragma once

// Pipeline configuration: a plain "key = value" file whose every entry can be
// overridden from the command line.

#include <array>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "andkit/error.hpp"
#include "andkit/util.hpp"

namespace andkit {

inline constexpr const char* kVersion = "1.0.0";

struct PipelineConfig {
  // inputs / outputs
  std::string registry;
  std::string corpus;
  std::string out_dir = "out";
  std::string transliteration_table;
  std::string particles_table;
  std::string suffixes_table;
  std::string plugin_scores;
  std::string external_ids;
  std::string lookup_tables;  // facet=path@field[,facet=path@field...]

  // linking
  double position_margin = 0.2;
  double single_author_floor = 0.5;

  // dataset building
  int pairs_per_block_cap = 10;
  std::array<int, 3> split_ratios{50, 25, 25};
  std::uint64_t seed = 20210201;

  // classifier
  std::string cf_kind = "tfidf";
  int n_trees = 100;
  int min_samples_split = 2;
  int max_features = 0;
  std::string train_blocks = "full";  // full | trimmed

  // clustering
  std::string linkage = "average";
  double grid_lo = 0.0;
  double grid_hi = 1.0;
  double grid_step = 0.05;
  std::string b3_averaging = "pooled";
  std::string tune_blocks = "trimmed";  // trimmed | full
  std::string threshold = "auto";       // "auto" = tuned value

  // profiling
  int position_bin_cap = 10;

  unsigned threads = 1;

  /// Applies one key/value; throws Error(config) on unknown keys or bad values.
  void set(const std::string& key, const std::string& raw);

  std::map<std::string, std::string> entries() const;
};

namespace detail {

inline double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw Error(ErrorCategory::config, key + ": not a number: " + v);
  }
}

inline long long parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    long long d = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw Error(ErrorCategory::config, key + ": not an integer: " + v);
  }
}

inline std::string fmt_double(double d) {
  std::ostringstream ss;
  ss.precision(17);
  ss << d;
  return ss.str();
}

}  // namespace detail

inline std::array<int, 3> parse_ratios(const std::string& v) {
  std::array<int, 3> r{};
  std::istringstream ss(v);
  std::string part;
  int i = 0;
  while (std::getline(ss, part, ':')) {
    if (i >= 3) throw Error(ErrorCategory::config, "split_ratios: expected a:b:c");
    r[i++] = static_cast<int>(detail::parse_int("split_ratios", trim(part)));
  }
  if (i != 3 || r[0] < 0 || r[1] < 0 || r[2] < 0 || r[0] + r[1] + r[2] != 100) {
    throw Error(ErrorCategory::config, "split_ratios must be a:b:c summing to 100");
  }
  return r;
}

inline void PipelineConfig::set(const std::string& key_in, const std::string& raw) {
  const std::string key = trim(key_in);
  const std::string v = trim(raw);
  auto in_range = [&](double x, double lo, double hi) {
    if (!(x >= lo && x <= hi)) {
      throw Error(ErrorCategory::config, key + " out of range: " + v);
    }
    return x;
  };
  if (key == "registry") registry = v;
  else if (key == "corpus") corpus = v;
  else if (key == "out_dir") out_dir = v;
  else if (key == "transliteration_table") transliteration_table = v;
  else if (key == "particles_table") particles_table = v;
  else if (key == "suffixes_table") suffixes_table = v;
  else if (key == "plugin_scores") plugin_scores = v;
  else if (key == "external_ids") external_ids = v;
  else if (key == "lookup_tables") lookup_tables = v;
  else if (key == "position_margin") position_margin = in_range(detail::parse_double(key, v), 0, 1);
  else if (key == "single_author_floor") single_author_floor = in_range(detail::parse_double(key, v), 0, 1);
  else if (key == "pairs_per_block_cap") pairs_per_block_cap = static_cast<int>(detail::parse_int(key, v));
  else if (key == "split_ratios") split_ratios = parse_ratios(v);
  else if (key == "seed") {
    try {
      std::size_t used = 0;
      seed = std::stoull(v, &used);
      if (used != v.size()) throw std::invalid_argument(v);
    } catch (const std::exception&) {
      throw Error(ErrorCategory::config, "seed: not an unsigned integer: " + v);
    }
  }
  else if (key == "cf_kind") {
    if (v != "none" && v != "jaccard" && v != "tfidf" && v != "plugin") {
      throw Error(ErrorCategory::config, "cf_kind: expected none|jaccard|tfidf|plugin");
    }
    cf_kind = v;
  }
  else if (key == "n_trees") n_trees = static_cast<int>(in_range(static_cast<double>(detail::parse_int(key, v)), 1, 1e6));
  else if (key == "min_samples_split") min_samples_split = static_cast<int>(in_range(static_cast<double>(detail::parse_int(key, v)), 2, 1e9));
  else if (key == "max_features") max_features = static_cast<int>(in_range(static_cast<double>(detail::parse_int(key, v)), 0, 1e6));
  else if (key == "train_blocks") {
    if (v != "trimmed" && v != "full") {
      throw Error(ErrorCategory::config, "train_blocks: expected trimmed|full");
    }
    train_blocks = v;
  }
  else if (key == "linkage") {
    if (v != "average" && v != "single" && v != "complete") {
      throw Error(ErrorCategory::config, "linkage: expected average|single|complete");
    }
    linkage = v;
  }
  else if (key == "grid_lo") grid_lo = in_range(detail::parse_double(key, v), 0, 1);
  else if (key == "grid_hi") grid_hi = in_range(detail::parse_double(key, v), 0, 1);
  else if (key == "grid_step") grid_step = in_range(detail::parse_double(key, v), 1e-6, 1);
  else if (key == "b3_averaging") {
    if (v != "pooled" && v != "per_block") {
      throw Error(ErrorCategory::config, "b3_averaging: expected pooled|per_block");
    }
    b3_averaging = v;
  }
  else if (key == "tune_blocks") {
    if (v != "trimmed" && v != "full") {
      throw Error(ErrorCategory::config, "tune_blocks: expected trimmed|full");
    }
    tune_blocks = v;
  }
  else if (key == "threshold") {
    if (v != "auto") in_range(detail::parse_double(key, v), 0, 1);
    threshold = v;
  }
  else if (key == "position_bin_cap") position_bin_cap = static_cast<int>(in_range(static_cast<double>(detail::parse_int(key, v)), 1, 1e6));
  else if (key == "threads") threads = static_cast<unsigned>(in_range(static_cast<double>(detail::parse_int(key, v)), 1, 1024));
  else throw Error(ErrorCategory::config, "unknown config key: " + key);
}

inline std::map<std::string, std::string> PipelineConfig::entries() const {
  using detail::fmt_double;
  return {
      {"registry", registry},
      {"corpus", corpus},
      {"out_dir", out_dir},
      {"transliteration_table", transliteration_table},
      {"particles_table", particles_table},
      {"suffixes_table", suffixes_table},
      {"plugin_scores", plugin_scores},
      {"external_ids", external_ids},
      {"lookup_tables", lookup_tables},
      {"position_margin", fmt_double(position_margin)},
      {"single_author_floor", fmt_double(single_author_floor)},
      {"pairs_per_block_cap", std::to_string(pairs_per_block_cap)},
      {"split_ratios", std::to_string(split_ratios[0]) + ":" + std::to_string(split_ratios[1]) +
                           ":" + std::to_string(split_ratios[2])},
      {"seed", std::to_string(seed)},
      {"cf_kind", cf_kind},
      {"n_trees", std::to_string(n_trees)},
      {"min_samples_split", std::to_string(min_samples_split)},
      {"max_features", std::to_string(max_features)},
      {"train_blocks", train_blocks},
      {"linkage", linkage},
      {"grid_lo", fmt_double(grid_lo)},
      {"grid_hi", fmt_double(grid_hi)},
      {"grid_step", fmt_double(grid_step)},
      {"b3_averaging", b3_averaging},
      {"tune_blocks", tune_blocks},
      {"threshold", threshold},
      {"position_bin_cap", std::to_string(position_bin_cap)},
  };
}

/// Parses "key = value" lines; '#' starts a comment line.
inline void apply_config_text(PipelineConfig& cfg, const std::string& text,
                              const std::string& origin = "config") {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = trim_view(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCategory::config,
                  origin + ":" + std::to_string(lineno) + ": expected key = value");
    }
    cfg.set(std::string(t.substr(0, eq)), std::string(t.substr(eq + 1)));
  }
}

inline PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCategory::io, "cannot open config " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  PipelineConfig cfg;
  apply_config_text(cfg, ss.str(), path);
  return cfg;
}

}  // namespace andkit
