// andkit: command-line front end for the dataset pipeline.

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "andkit/andkit.hpp"

namespace {

struct GlobalOptions {
  std::string config_path;
  std::vector<std::string> overrides;
  int threads = 0;
  std::string seed;
  std::string out_dir;
  bool quiet = false;
};

andkit::PipelineConfig resolve_config(const GlobalOptions& g) {
  andkit::PipelineConfig cfg;
  if (!g.config_path.empty()) cfg = andkit::load_config(g.config_path);
  for (const auto& kv : g.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw andkit::Error(andkit::ErrorCategory::config, "--set expects key=value: " + kv);
    }
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (g.threads > 0) cfg.set("threads", std::to_string(g.threads));
  if (!g.seed.empty()) cfg.set("seed", g.seed);
  if (!g.out_dir.empty()) cfg.set("out_dir", g.out_dir);
  return cfg;
}

int run_synth(const andkit::PipelineConfig& cfg, const andkit::SynthOptions& base, bool quiet) {
  auto opt = base;
  opt.seed = cfg.seed;
  std::filesystem::create_directories(cfg.out_dir);
  const auto dir = std::filesystem::path(cfg.out_dir);
  const auto corpus = andkit::synthesize_corpus(opt);
  andkit::write_synthetic(corpus, (dir / "registry.jsonl").string(),
                          (dir / "corpus.jsonl").string());
  andkit::write_external_ids(andkit::synthesize_external_ids(corpus.registry, cfg.seed),
                             (dir / "external_ids.tsv").string());
  if (!quiet) {
    std::cerr << "synth: " << corpus.registry.size() << " authors, " << corpus.corpus.size()
              << " citations in " << cfg.out_dir << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Author name disambiguation dataset toolkit"};
  app.set_version_flag("--version", std::string("andkit ") + andkit::kVersion +
                                        " (dataset format version " +
                                        std::to_string(andkit::kFormatVersion) + ")");
  app.require_subcommand(1);

  GlobalOptions g;
  app.add_option("--config", g.config_path, "key = value configuration file");
  app.add_option("--set", g.overrides, "Override a config entry (key=value)")->take_all();
  app.add_option("--threads", g.threads, "Worker threads (output does not depend on it)");
  app.add_option("--seed", g.seed, "Pipeline seed");
  app.add_option("--out", g.out_dir, "Output directory");
  app.add_flag("-q,--quiet", g.quiet, "No progress messages");

  std::vector<std::pair<std::string, CLI::App*>> stages;
  const std::vector<std::pair<std::string, std::string>> descriptions{
      {"link", "Join registry claims to the corpus by DOI and locate the author in each byline"},
      {"build-block", "Group positioned claims into citation groups and blocks"},
      {"trim", "Keep blocks with at least two authors"},
      {"build-pairwise", "Sample labelled citation pairs inside blocks"},
      {"split", "Assign blocks to train/validation/test folds"},
      {"profile", "Distribution profile and variation degrees of the block dataset"},
      {"train", "Train the pairwise random forest on the training fold"},
      {"tune", "Grid-search the clustering distance threshold on the validation fold"},
      {"cluster", "Cluster the test-fold blocks"},
      {"evaluate", "Pairwise and B-cubed scores on the test fold"},
      {"audit-ids", "Score an external author-id assignment against the dataset"},
      {"report", "One distribution file per facet, compared with the corpus when given"},
  };
  for (const auto& [name, desc] : descriptions) {
    auto* sub = app.add_subcommand(name, desc);
    sub->fallthrough();
    stages.emplace_back(name, sub);
  }
  auto* run_all = app.add_subcommand("run", "Run every stage in order");
  run_all->fallthrough();

  andkit::SynthOptions synth_opt;
  auto* synth = app.add_subcommand("synth", "Write a synthetic registry, corpus and external ids");
  synth->fallthrough();
  synth->add_option("--authors", synth_opt.authors, "Registered authors");
  synth->add_option("--citations", synth_opt.citations, "Corpus size");
  synth->add_option("--single-share", synth_opt.single_author_block_share,
                    "Share of blocks holding one author");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return andkit::exit_code(andkit::ErrorCategory::config);
  }

  try {
    const auto cfg = resolve_config(g);
    if (synth->parsed()) return run_synth(cfg, synth_opt, g.quiet);

    andkit::Pipeline::Log log;
    if (!g.quiet) log = [](const std::string& m) { std::cerr << m << '\n'; };
    const andkit::Pipeline pipeline(cfg, log);
    if (run_all->parsed()) {
      for (const auto& stage : andkit::stage_names()) {
        if (stage == "audit-ids" && cfg.external_ids.empty()) continue;
        andkit::run_stage(pipeline, stage);
      }
      return 0;
    }
    for (const auto& [name, sub] : stages) {
      if (sub->parsed()) andkit::run_stage(pipeline, name);
    }
    return 0;
  } catch (const andkit::Error& e) {
    std::cerr << "error [" << andkit::category_name(e.category()) << "]: " << e.what() << '\n';
    return andkit::exit_code(e.category());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
