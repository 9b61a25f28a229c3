#pragma once

// Pipeline stages over files in the configured output directory. Each stage
// reads and writes a fixed set of files and never modifies its inputs.
//
//   link            registry, corpus          -> claims.jsonl, link_report.json
//   build-block     claims.jsonl              -> blocks.jsonl
//   trim            blocks.jsonl              -> blocks_trimmed.jsonl
//   build-pairwise  blocks.jsonl              -> pairwise.jsonl
//   split           blocks.jsonl              -> split.jsonl
//   profile         blocks.jsonl              -> profile.tsv, variation.tsv
//   train           blocks, pairwise, split [, blocks_trimmed] -> model.json, importance.tsv
//   tune            model, blocks[_trimmed], split -> tune.tsv, tune.json
//   cluster         model, blocks[_trimmed], split, tune.json -> assignments.tsv
//   evaluate        model, blocks, pairwise, split, tune.json -> scorecard.tsv
//   audit-ids       blocks, pairwise, external ids -> audit.tsv
//   report          blocks.jsonl [, corpus]   -> report/<facet>.tsv

#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "andkit/builder.hpp"
#include "andkit/cluster.hpp"
#include "andkit/config.hpp"
#include "andkit/disambig.hpp"
#include "andkit/error.hpp"
#include "andkit/ingest.hpp"
#include "andkit/linker.hpp"
#include "andkit/metrics.hpp"
#include "andkit/namekit.hpp"
#include "andkit/profiler.hpp"

namespace andkit {

namespace files {
inline constexpr const char* claims = "claims.jsonl";
inline constexpr const char* link_report = "link_report.json";
inline constexpr const char* blocks = "blocks.jsonl";
inline constexpr const char* blocks_trimmed = "blocks_trimmed.jsonl";
inline constexpr const char* pairwise = "pairwise.jsonl";
inline constexpr const char* split = "split.jsonl";
inline constexpr const char* profile = "profile.tsv";
inline constexpr const char* variation = "variation.tsv";
inline constexpr const char* model = "model.json";
inline constexpr const char* importance = "importance.tsv";
inline constexpr const char* tune_tsv = "tune.tsv";
inline constexpr const char* tune_json = "tune.json";
inline constexpr const char* assignments = "assignments.tsv";
inline constexpr const char* scorecard = "scorecard.tsv";
inline constexpr const char* audit = "audit.tsv";
inline constexpr const char* report_dir = "report";
}  // namespace files

/// Seeds of the randomized stages, all derived from the one config seed.
namespace stage_seed {
inline std::uint64_t pairwise(std::uint64_t s) { return derive_seed(s, "pairwise"); }
inline std::uint64_t split(std::uint64_t s) { return derive_seed(s, "split"); }
inline std::uint64_t forest(std::uint64_t s) { return derive_seed(s, "forest"); }
}  // namespace stage_seed

class Pipeline {
 public:
  using Log = std::function<void(const std::string&)>;

  explicit Pipeline(PipelineConfig cfg, Log log = {})
      : cfg_(std::move(cfg)), log_(std::move(log)) {}

  const PipelineConfig& config() const { return cfg_; }

  std::string path(const std::string& name) const {
    return (std::filesystem::path(cfg_.out_dir) / name).string();
  }

  void link() const {
    require_input(cfg_.registry, "registry");
    require_input(cfg_.corpus, "corpus");
    ensure_out_dir();
    IngestReport reg_report, cor_report;
    const auto registry = load_author_registry(cfg_.registry, &reg_report);
    const auto index = CitationIndex::load(cfg_.corpus, &cor_report);
    LinkReport lr;
    const PositionPolicy policy{cfg_.position_margin, cfg_.single_author_floor};
    const auto claims = link_and_position(registry, index, policy, cfg_.threads, &lr);
    write_claims(claims, path(files::claims), provenance());
    nlohmann::ordered_json j;
    j["registry"] = to_json(reg_report);
    j["corpus"] = to_json(cor_report);
    j["link"] = to_json(lr);
    write_text(path(files::link_report), j.dump(2) + "\n");
    say("link: " + std::to_string(lr.positioned) + " positioned claims, " +
        std::to_string(lr.rejected) + " rejected, " + std::to_string(lr.unresolved) +
        " unresolved");
  }

  void build_block() const {
    Provenance prov;
    auto claims = read_claims(path(files::claims), &prov);
    auto ds = build_block_dataset(std::move(claims));
    ds.provenance = prov;
    ds.provenance["dataset"] = "block";
    write_dataset(ds, path(files::blocks));
    say("build-block: " + std::to_string(ds.blocks.size()) + " blocks, " +
        std::to_string(ds.citation_count()) + " citations");
  }

  void trim() const {
    auto ds = trim_single_author_blocks(read_dataset(path(files::blocks)));
    ds.provenance["dataset"] = "block-trimmed";
    write_dataset(ds, path(files::blocks_trimmed));
    say("trim: " + std::to_string(ds.blocks.size()) + " multi-author blocks kept");
  }

  void build_pairwise() const {
    const auto ds = read_dataset(path(files::blocks));
    const auto pairs =
        sample_pairwise(ds, cfg_.pairs_per_block_cap, stage_seed::pairwise(cfg_.seed));
    auto prov = ds.provenance;
    prov["dataset"] = "pairwise";
    prov["pairs_per_block_cap"] = std::to_string(cfg_.pairs_per_block_cap);
    write_pairwise(pairs, path(files::pairwise), prov);
    std::size_t pos = 0;
    for (const auto& p : pairs) pos += p.label;
    say("build-pairwise: " + std::to_string(pairs.size()) + " pairs, " +
        std::to_string(pos) + " positive");
  }

  void split() const {
    const auto ds = read_dataset(path(files::blocks));
    const auto s = andkit::split(ds, cfg_.split_ratios, stage_seed::split(cfg_.seed));
    write_split(s, path(files::split));
    const auto c = s.counts();
    say("split: " + std::to_string(c[0]) + "/" + std::to_string(c[1]) + "/" +
        std::to_string(c[2]) + " blocks");
  }

  void profile() const {
    const auto ds = read_dataset(path(files::blocks));
    const auto tables = name_tables();
    const auto reports = dataset_reports(ds, tables);
    write_report(reports, path(files::profile));
    const auto claims = dataset_claims(ds);
    if (!claims.empty()) write_variation(variation_report(claims, tables), path(files::variation));
    say("profile: " + std::to_string(reports.size()) + " facets");
  }

  void train() const {
    const auto ds = read_dataset(path(files::blocks));
    const auto s = read_split(path(files::split));
    const auto pairs = read_pairwise(path(files::pairwise), ClaimLookup(ds));
    auto train_pairs = select_fold(pairs, s, Fold::train);
    if (cfg_.train_blocks == "trimmed") {
      // Trimmed blocks are a subset of the full ones, so their pairs are too.
      std::set<std::string> keep;
      for (const auto& b : read_dataset(path(files::blocks_trimmed)).blocks) keep.insert(b.cfn_key);
      std::erase_if(train_pairs, [&](const PairwiseInstance& p) { return !keep.count(p.cfn_key); });
    }
    if (train_pairs.empty()) {
      throw Error(ErrorCategory::invalid_argument, "train: no training pairs");
    }
    const auto plugin = plugin_scores();
    ForestOptions fo;
    fo.n_trees = cfg_.n_trees;
    fo.min_samples_split = cfg_.min_samples_split;
    fo.max_features = cfg_.max_features;
    fo.seed = stage_seed::forest(cfg_.seed);
    fo.threads = cfg_.threads;
    const auto model = train_pair_model(train_pairs, parse_content_kind(cfg_.cf_kind), fo,
                                        plugin ? &*plugin : nullptr);
    save_model(model, path(files::model));
    std::ostringstream imp;
    imp << "feature\tmean\tstd\n";
    for (const auto& f : feature_importance(model.forest)) {
      imp << f.name << '\t' << num(f.mean) << '\t' << num(f.stddev) << '\n';
    }
    write_text(path(files::importance), imp.str());
    say("train: " + std::to_string(train_pairs.size()) + " training pairs" +
        (model.forest.warning.empty() ? "" : " (" + model.forest.warning + ")"));
  }

  void tune() const {
    const auto model = load_model(path(files::model));
    const auto s = read_split(path(files::split));
    const auto validation = select_fold(clustering_dataset(), s, Fold::validation);
    const auto plugin = plugin_scores();
    const auto r = tune_threshold(validation, model, tune_options(),
                                  plugin ? &*plugin : nullptr);
    std::ostringstream tsv;
    tsv << "threshold\tb3_precision\tb3_recall\tb3_f1\n";
    for (const auto& p : r.grid) {
      tsv << num(p.threshold) << '\t' << num(p.score.precision) << '\t'
          << num(p.score.recall) << '\t' << num(p.score.f1) << '\n';
    }
    write_text(path(files::tune_tsv), tsv.str());
    nlohmann::ordered_json j;
    j["best_threshold"] = r.best_threshold;
    j["b3"] = to_json(r.best);
    j["linkage"] = cfg_.linkage;
    j["b3_averaging"] = cfg_.b3_averaging;
    j["tune_blocks"] = cfg_.tune_blocks;
    j["validation_blocks"] = validation.blocks.size();
    write_text(path(files::tune_json), j.dump(2) + "\n");
    say("tune: best threshold " + num(r.best_threshold) + " (B3-F1 " + num(r.best.f1) + ")");
  }

  void cluster() const {
    const auto model = load_model(path(files::model));
    const auto s = read_split(path(files::split));
    const auto test = select_fold(clustering_dataset(), s, Fold::test);
    const auto plugin = plugin_scores();
    const double t = threshold();
    const auto a = cluster_blocks(test, model, t, parse_linkage(cfg_.linkage), cfg_.threads,
                                  plugin ? &*plugin : nullptr);
    write_assignments(a, path(files::assignments));
    say("cluster: " + std::to_string(a.size()) + " test blocks at threshold " + num(t));
  }

  void evaluate() const {
    const auto model = load_model(path(files::model));
    const auto s = read_split(path(files::split));
    const auto ds = read_dataset(path(files::blocks));
    const auto pairs = read_pairwise(path(files::pairwise), ClaimLookup(ds));
    const auto test_pairs = select_fold(pairs, s, Fold::test);
    const auto plugin = plugin_scores();
    const auto* plug = plugin ? &*plugin : nullptr;

    std::ostringstream out;
    out << "metric\tvalue\n";
    out << "test_pairs\t" << test_pairs.size() << '\n';
    if (!test_pairs.empty()) {
      const auto score = pairwise_score(model, test_pairs, plug);
      out << "precision\t" << num(score.precision) << '\n'
          << "recall\t" << num(score.recall) << '\n'
          << "f1\t" << num(score.f1) << '\n'
          << "macro_f1\t" << num(score.macro_f1) << '\n';
    }
    const auto test_blocks = select_fold(clustering_dataset(), s, Fold::test);
    const double t = threshold();
    const auto a = cluster_blocks(test_blocks, model, t, parse_linkage(cfg_.linkage),
                                  cfg_.threads, plug);
    const auto b3 = score_assignments(a, averaging());
    out << "threshold\t" << num(t) << '\n'
        << "test_blocks\t" << test_blocks.blocks.size() << '\n'
        << "b3_precision\t" << num(b3.precision) << '\n'
        << "b3_recall\t" << num(b3.recall) << '\n'
        << "b3_f1\t" << num(b3.f1) << '\n';
    write_text(path(files::scorecard), out.str());
    say("evaluate: scorecard written");
  }

  void audit_ids() const {
    require_input(cfg_.external_ids, "external_ids");
    const auto ds = read_dataset(path(files::blocks));
    const auto pairs = read_pairwise(path(files::pairwise), ClaimLookup(ds));
    const auto ids = read_external_ids(cfg_.external_ids);
    const auto r = audit_id_system(ds, ids, pairs, averaging());
    std::ostringstream out;
    out << "metric\tvalue\n"
        << "claims\t" << r.claims << '\n'
        << "missing_ids\t" << r.missing_ids << '\n'
        << "b3_precision\t" << num(r.b3.precision) << '\n'
        << "b3_recall\t" << num(r.b3.recall) << '\n'
        << "b3_f1\t" << num(r.b3.f1) << '\n'
        << "pairs\t" << r.pairs << '\n'
        << "precision\t" << num(r.pairwise.precision) << '\n'
        << "recall\t" << num(r.pairwise.recall) << '\n'
        << "f1\t" << num(r.pairwise.f1) << '\n'
        << "macro_f1\t" << num(r.pairwise.macro_f1) << '\n';
    write_text(path(files::audit), out.str());
    say("audit-ids: B3-F1 " + num(r.b3.f1));
  }

  /// One file per facet: the dataset's distribution and, when a corpus is
  /// configured, the corpus distribution and the per-bin gap.
  void report() const {
    const auto ds = read_dataset(path(files::blocks));
    const auto tables = name_tables();
    const auto mine = dataset_reports(ds, tables);
    std::vector<DistributionReport> reference;
    if (!cfg_.corpus.empty()) reference = corpus_reports(tables);
    const auto dir = std::filesystem::path(cfg_.out_dir) / files::report_dir;
    std::filesystem::create_directories(dir);
    for (const auto& r : mine) {
      const DistributionReport* ref = nullptr;
      for (const auto& x : reference) {
        if (x.facet == r.facet) ref = &x;
      }
      std::ostringstream out;
      if (ref) {
        const auto cmp = compare_reports(r, *ref);
        out << "key\tdataset\treference\tgap\n";
        for (const auto& g : cmp.gaps) {
          out << g.key << '\t' << num(g.a) << '\t' << num(g.b) << '\t' << num(g.gap) << '\n';
        }
      } else {
        out << "key\tproportion\tcount\n";
        for (const auto& b : r.bins) out << b.key << '\t' << num(b.proportion) << '\t' << b.count << '\n';
      }
      write_text((dir / (r.facet + ".tsv")).string(), out.str());
    }
    const auto claims = dataset_claims(ds);
    if (!claims.empty()) {
      write_variation(variation_report(claims, tables), (dir / "variation_degree.tsv").string());
    }
    say("report: " + std::to_string(mine.size() + (claims.empty() ? 0 : 1)) +
        " facet files in " + dir.string());
  }

  /// Facets computable from the dataset alone plus configured lookups.
  std::vector<DistributionReport> dataset_reports(const BlockDataset& ds,
                                                  const NameTables& tables) const {
    const auto claims = dataset_claims(ds);
    const auto names = claim_names(claims);
    std::vector<DistributionReport> out{
        year_distribution(unique_citations(claims)),
        position_distribution(claim_positions(claims), cfg_.position_bin_cap),
        name_popularity(names, PopularityKey::LN, tables),
        name_popularity(names, PopularityKey::LNFI, tables)};
    for (const auto& [table, field] : lookups()) {
      out.push_back(lookup_distribution(lookup_keys(claims, field, tables), table));
    }
    const auto bp = block_profile(ds, tables);
    out.push_back(bp.block_size);
    out.push_back(bp.variants_by_block_size);
    out.push_back(bp.authors_per_block);
    return out;
  }

  double threshold() const {
    if (cfg_.threshold != "auto") return std::stod(cfg_.threshold);
    std::ifstream in(path(files::tune_json));
    if (!in) {
      throw Error(ErrorCategory::io,
                  "threshold is auto but " + path(files::tune_json) + " is missing; run tune");
    }
    const auto j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.contains("best_threshold")) {
      throw Error(ErrorCategory::format, path(files::tune_json) + ": no best_threshold");
    }
    return j["best_threshold"].get<double>();
  }

  static ClassificationScore pairwise_score(const PairModel& model,
                                            const std::vector<PairwiseInstance>& pairs,
                                            const PluginScores* plugin = nullptr) {
    const auto fx = model.extractor(plugin);
    std::vector<bool> labels, preds;
    for (const auto& p : pairs) {
      labels.push_back(p.label);
      preds.push_back(predict_proba(model.forest, fx.extract(p).row()) >= 0.5);
    }
    return classification_metrics(labels, preds);
  }

  static std::string num(double v) { return nlohmann::json(v).dump(); }

 private:
  Provenance provenance() const {
    return {{"tool", "andkit"},
            {"tool_version", kVersion},
            {"format_version", std::to_string(kFormatVersion)},
            {"seed", std::to_string(cfg_.seed)},
            {"registry", std::filesystem::path(cfg_.registry).filename().string()},
            {"corpus", std::filesystem::path(cfg_.corpus).filename().string()},
            {"position_margin", num(cfg_.position_margin)},
            {"single_author_floor", num(cfg_.single_author_floor)}};
  }

  BlockDataset clustering_dataset() const {
    return read_dataset(path(cfg_.tune_blocks == "trimmed" ? files::blocks_trimmed : files::blocks));
  }

  TuneOptions tune_options() const {
    TuneOptions o;
    o.lo = cfg_.grid_lo;
    o.hi = cfg_.grid_hi;
    o.step = cfg_.grid_step;
    o.linkage = parse_linkage(cfg_.linkage);
    o.averaging = averaging();
    o.threads = cfg_.threads;
    return o;
  }

  BCubedAveraging averaging() const {
    return cfg_.b3_averaging == "per_block" ? BCubedAveraging::per_block
                                            : BCubedAveraging::pooled;
  }

  NameTables name_tables() const {
    if (cfg_.transliteration_table.empty() && cfg_.particles_table.empty() &&
        cfg_.suffixes_table.empty()) {
      return default_name_tables();
    }
    return load_name_tables(cfg_.transliteration_table, cfg_.particles_table,
                            cfg_.suffixes_table);
  }

  std::optional<PluginScores> plugin_scores() const {
    if (cfg_.plugin_scores.empty()) {
      if (cfg_.cf_kind == "plugin") {
        throw Error(ErrorCategory::config, "cf_kind = plugin needs plugin_scores");
      }
      return std::nullopt;
    }
    return PluginScores::load(cfg_.plugin_scores);
  }

  /// Parses "facet=path@field" entries of lookup_tables.
  std::vector<std::pair<LookupTable, LookupField>> lookups() const {
    std::vector<std::pair<LookupTable, LookupField>> out;
    std::istringstream ss(cfg_.lookup_tables);
    std::string entry;
    while (std::getline(ss, entry, ',')) {
      entry = andkit::trim(entry);
      if (entry.empty()) continue;
      const auto eq = entry.find('=');
      const auto at = entry.rfind('@');
      if (eq == std::string::npos || at == std::string::npos || at < eq) {
        throw Error(ErrorCategory::config, "lookup_tables entry must be facet=path@field: " + entry);
      }
      const auto facet = entry.substr(0, eq);
      out.emplace_back(LookupTable::load(entry.substr(eq + 1, at - eq - 1), "lookup_" + facet),
                       parse_lookup_field(entry.substr(at + 1)));
    }
    return out;
  }

  std::vector<DistributionReport> corpus_reports(const NameTables& tables) const {
    const auto index = CitationIndex::load(cfg_.corpus);
    const auto& cits = index.citations();
    const auto names = corpus_names(cits);
    return {year_distribution(cits),
            position_distribution(corpus_positions(cits), cfg_.position_bin_cap),
            name_popularity(names, PopularityKey::LN, tables),
            name_popularity(names, PopularityKey::LNFI, tables)};
  }

  static void require_input(const std::string& value, const char* key) {
    if (value.empty()) throw Error(ErrorCategory::config, std::string(key) + " is not set");
  }

  void ensure_out_dir() const { std::filesystem::create_directories(cfg_.out_dir); }

  static void write_text(const std::string& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error(ErrorCategory::io, "cannot write " + p);
    out << text;
    if (!out) throw Error(ErrorCategory::io, "write failed: " + p);
  }

  void say(const std::string& msg) const {
    if (log_) log_(msg);
  }

  PipelineConfig cfg_;
  Log log_;
};

/// Stage names in pipeline order.
inline const std::vector<std::string>& stage_names() {
  static const std::vector<std::string> v{
      "link",  "build-block", "trim",    "build-pairwise", "split",     "profile",
      "train", "tune",        "cluster", "evaluate",       "audit-ids", "report"};
  return v;
}

inline void run_stage(const Pipeline& p, const std::string& stage) {
  if (stage == "link") p.link();
  else if (stage == "build-block") p.build_block();
  else if (stage == "trim") p.trim();
  else if (stage == "build-pairwise") p.build_pairwise();
  else if (stage == "split") p.split();
  else if (stage == "profile") p.profile();
  else if (stage == "train") p.train();
  else if (stage == "tune") p.tune();
  else if (stage == "cluster") p.cluster();
  else if (stage == "evaluate") p.evaluate();
  else if (stage == "audit-ids") p.audit_ids();
  else if (stage == "report") p.report();
  else throw Error(ErrorCategory::config, "unknown stage: " + stage);
}

}  // namespace andkit
