// brandmatch: command-line front end for ingestion, indexing, graph
// construction, campaign targeting, experiment reports and fixture synthesis.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "brandmatch/campaign.hpp"
#include "brandmatch/digest.hpp"
#include "brandmatch/error.hpp"
#include "brandmatch/ingestion.hpp"
#include "brandmatch/network.hpp"
#include "brandmatch/synth.hpp"
#include "brandmatch/text_index.hpp"
#include "brandmatch/tokenizer.hpp"

namespace fs = std::filesystem;
using brandmatch::Errc;
using brandmatch::Error;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitInput = 2;

struct CommonOptions {
  std::string out;
  std::string config;
  std::optional<std::size_t> jobs;
  std::optional<std::string> tf_mode;
  std::string log_base = "e";
  std::string stopwords;
};

struct Paths {
  std::string dataset;
  std::string edges;
  std::string class_map;
  std::string spec;
};

struct Overrides {
  std::optional<std::string> scope;
  std::optional<std::string> brand;
  std::optional<double> fraction;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> users;
  std::size_t top = 100;
  bool plots = false;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

json read_json(const fs::path& path) {
  const std::string text = read_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(Errc::schema_error, path.string() + ": " + e.what());
  }
}

/// Collects inputs, outputs and the resolved configuration of one run and
/// writes them to manifest.json.
class Manifest {
 public:
  Manifest(std::string subcommand, fs::path out_dir)
      : subcommand_(std::move(subcommand)), out_dir_(std::move(out_dir)), start_(std::chrono::steady_clock::now()) {
    std::error_code ec;
    fs::create_directories(out_dir_, ec);
    if (ec) throw Error(Errc::io_error, "cannot create output directory " + out_dir_.string() + ": " + ec.message());
  }

  void input(const std::string& role, const fs::path& path) {
    inputs_.push_back({{"role", role}, {"path", path.string()}, {"sha256", brandmatch::sha256_file(path)}});
  }

  void write(const std::string& name, const std::string& content) {
    const fs::path path = out_dir_ / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::io_error, "cannot write " + path.string());
    out << content;
    out.close();
    if (!out) throw Error(Errc::io_error, "write failed for " + path.string());
    outputs_.push_back({{"path", name}, {"sha256", brandmatch::sha256_hex(content)}, {"bytes", content.size()}});
  }

  void write_json(const std::string& name, const json& j) { write(name, j.dump(2) + "\n"); }
  void write_json(const std::string& name, const nlohmann::ordered_json& j) { write(name, j.dump(2) + "\n"); }

  json& config() { return config_; }

  void finish() {
    const auto elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_);
    nlohmann::ordered_json m;
    m["subcommand"] = subcommand_;
    m["tool_version"] = BRANDMATCH_VERSION;
    m["config"] = config_;
    m["inputs"] = inputs_;
    m["outputs"] = outputs_;
    m["timing_ms"] = std::round(elapsed.count() * 1000.0) / 1000.0;
    const fs::path path = out_dir_ / "manifest.json";
    std::ofstream out(path, std::ios::binary);
    out << m.dump(2) << "\n";
    if (!out) throw Error(Errc::io_error, "write failed for " + path.string());
  }

 private:
  std::string subcommand_;
  fs::path out_dir_;
  std::chrono::steady_clock::time_point start_;
  json config_ = json::object();
  json inputs_ = json::array();
  json outputs_ = json::array();
};

// --- shared resolution -------------------------------------------------------

brandmatch::TokenizerConfig resolve_tokenizer(const CommonOptions& common, Manifest& manifest) {
  auto cfg = brandmatch::TokenizerConfig::defaults();
  if (!common.stopwords.empty()) {
    cfg.stopwords = brandmatch::load_stopwords(common.stopwords);
    manifest.input("stopwords", common.stopwords);
    manifest.config()["stopwords"] = common.stopwords;
  } else {
    manifest.config()["stopwords"] = "bundled:it+en";
  }
  return cfg;
}

brandmatch::RunOptions resolve_run(const CommonOptions& common, Manifest& manifest) {
  if (common.log_base != "e") {
    throw Error(Errc::invalid_config, "--log-base only accepts 'e'; the base rescales every IDF and cannot change a score");
  }
  brandmatch::RunOptions run;
  run.jobs = common.jobs.value_or(1);
  if (run.jobs == 0) throw Error(Errc::invalid_config, "--jobs must be at least 1");
  run.weighting.tf_mode = brandmatch::parse_tf_mode(common.tf_mode.value_or("standard"));
  manifest.config()["jobs"] = run.jobs;
  manifest.config()["tf_mode"] = to_string(run.weighting.tf_mode);
  manifest.config()["log_base"] = "e";
  return run;
}

brandmatch::LoadedDataset load_input_dataset(const std::string& path, const brandmatch::TokenizerConfig& tokenizer,
                                             Manifest& manifest) {
  if (path.empty()) throw Error(Errc::invalid_config, "--dataset is required");
  manifest.input("dataset", path);
  brandmatch::IngestOptions options;
  options.tokenizer = tokenizer;
  return brandmatch::load_dataset(path, options);
}

/// Campaign config with precedence flags > config file > defaults.
brandmatch::CampaignConfig resolve_campaign(const CommonOptions& common, const Overrides& ov, Manifest& manifest) {
  brandmatch::CampaignConfig cfg;
  if (!common.config.empty()) {
    manifest.input("config", common.config);
    cfg = brandmatch::CampaignConfig::from_json(read_json(common.config));
  }
  if (ov.brand) cfg.brand_id = *ov.brand;
  if (ov.fraction) cfg.target_fraction = *ov.fraction;
  if (ov.scope) cfg.scope = brandmatch::parse_corpus_scope(*ov.scope);
  brandmatch::selection_size(cfg.target_fraction, 1);
  return cfg;
}

brandmatch::ProfileBuilder make_builder(const brandmatch::TokenizerConfig& tokenizer) {
  return brandmatch::ProfileBuilder(brandmatch::ProfileSchema::defaults(), tokenizer);
}

// --- subcommands -------------------------------------------------------------

void cmd_ingest(const CommonOptions& common, const Paths& paths) {
  Manifest manifest("ingest", common.out);
  const auto tokenizer = resolve_tokenizer(common, manifest);
  auto loaded = load_input_dataset(paths.dataset, tokenizer, manifest);
  manifest.write("dataset.json", brandmatch::serialize_dataset(loaded.dataset));
  manifest.write_json("drops.json", loaded.report.to_json());
  manifest.finish();
  std::cout << "ingested " << loaded.dataset.size() << " of " << loaded.report.input_records << " records ("
            << loaded.dataset.users.size() << " users, " << loaded.dataset.pages.size() << " pages); "
            << loaded.report.drops.size() << " drops\n";
}

void cmd_index(const CommonOptions& common, const Paths& paths, const Overrides& ov) {
  Manifest manifest("index", common.out);
  const auto tokenizer = resolve_tokenizer(common, manifest);
  const auto run = resolve_run(common, manifest);
  const auto campaign = resolve_campaign(common, ov, manifest);
  manifest.config()["corpus_scope"] = to_string(campaign.scope);
  const auto loaded = load_input_dataset(paths.dataset, tokenizer, manifest);
  const brandmatch::ProfileCatalog catalog(loaded.dataset, make_builder(tokenizer), run.jobs);
  const auto corpus = brandmatch::build_corpus(catalog, campaign.scope);
  if (!corpus) {
    throw Error(Errc::empty_corpus,
                "no post documents in corpus scope '" + std::string(to_string(campaign.scope)) + "'");
  }
  json j = corpus->to_json();
  j["scope"] = to_string(campaign.scope);
  manifest.write_json("index.json", j);
  manifest.finish();
  std::cout << "indexed " << corpus->document_count() << " documents, " << corpus->vocabulary_size() << " terms\n";
}

void cmd_graph(const CommonOptions& common, const Paths& paths) {
  if (paths.edges.empty()) throw Error(Errc::invalid_config, "--edges is required");
  Manifest manifest("graph", common.out);
  const auto tokenizer = resolve_tokenizer(common, manifest);
  const auto loaded = load_input_dataset(paths.dataset, tokenizer, manifest);
  manifest.input("edges", paths.edges);
  const auto built = brandmatch::build_graph(loaded.dataset, paths.edges);
  manifest.write_json("graph.json", built.graph.to_json());
  json drops = json::array();
  for (const auto& d : built.drops) drops.push_back({{"line", d.line}, {"reason", d.reason}});
  manifest.write_json("graph_report.json", json{{"degree_stats", to_json(brandmatch::degree_stats(built.graph))},
                                            {"dropped_edges", std::move(drops)}});
  manifest.finish();
  std::cout << "graph: " << built.graph.node_count() << " nodes, " << built.graph.edge_count() << " edges, "
            << built.drops.size() << " dropped\n";
}

void cmd_target(const CommonOptions& common, const Paths& paths, const Overrides& ov) {
  Manifest manifest("target", common.out);
  const auto tokenizer = resolve_tokenizer(common, manifest);
  const auto run = resolve_run(common, manifest);
  const auto campaign = resolve_campaign(common, ov, manifest);
  manifest.config()["campaign"] = campaign.to_json();
  const auto loaded = load_input_dataset(paths.dataset, tokenizer, manifest);
  const auto report = brandmatch::rank_users(loaded.dataset, campaign, run, make_builder(tokenizer));
  manifest.write_json("target_report.json", report.to_json());
  manifest.write("target_report.txt", brandmatch::render_target_summary(report));
  manifest.finish();
  std::cout << "selected " << report.selected.size() << " of " << report.ranked.size() << " users for "
            << report.brand_id << "\n";
}

void cmd_report(const CommonOptions& common, const Paths& paths, const Overrides& ov) {
  if (paths.class_map.empty()) throw Error(Errc::invalid_config, "--class-map is required");
  if (ov.top == 0) throw Error(Errc::invalid_config, "--top must be at least 1");
  Manifest manifest("report", common.out);
  const auto tokenizer = resolve_tokenizer(common, manifest);
  const auto run = resolve_run(common, manifest);
  const auto campaign = resolve_campaign(common, ov, manifest);
  manifest.config()["corpus_scope"] = to_string(campaign.scope);
  manifest.config()["categories"] = campaign.categories.to_json();
  manifest.config()["top"] = ov.top;
  manifest.config()["plots"] = ov.plots;
  const auto loaded = load_input_dataset(paths.dataset, tokenizer, manifest);
  manifest.input("class_map", paths.class_map);
  const auto classes = brandmatch::parse_class_map(read_json(paths.class_map));

  const auto& ds = loaded.dataset;
  const auto table =
      brandmatch::group_match_table(ds, classes, campaign.categories, campaign.scope, run, make_builder(tokenizer));

  std::vector<const brandmatch::ProfileRecord*> all_users, female, male, pages;
  for (const auto& u : ds.users) {
    all_users.push_back(&u);
    if (u.gender == "f") female.push_back(&u);
    if (u.gender == "m") male.push_back(&u);
  }
  for (const auto& p : ds.pages) pages.push_back(&p);
  const std::vector<std::pair<std::string, const std::vector<const brandmatch::ProfileRecord*>*>> sets = {
      {"all_users", &all_users}, {"female_users", &female}, {"male_users", &male}, {"pages", &pages}};

  nlohmann::ordered_json clouds;
  std::string text = brandmatch::render_group_table(table) + "\n";
  for (const auto& [name, profiles] : sets) {
    const auto cloud = brandmatch::top_terms(std::span<const brandmatch::ProfileRecord* const>(*profiles), ov.top, tokenizer);
    clouds[name] = to_json(cloud);
    text += brandmatch::render_term_cloud(name, cloud) + "\n";
  }
  manifest.write_json("group_table.json", table.to_json());
  manifest.write_json("term_clouds.json", clouds);
  manifest.write("report.txt", text);
  if (ov.plots) manifest.write("group_table.svg", brandmatch::render_group_table_svg(table));
  manifest.finish();
  std::cout << text;
}

void cmd_synth(const CommonOptions& common, const Paths& paths, const Overrides& ov) {
  Manifest manifest("synth", common.out);
  brandmatch::SynthSpec spec;
  const std::string spec_path = !paths.spec.empty() ? paths.spec : common.config;
  if (!spec_path.empty()) {
    manifest.input("spec", spec_path);
    spec = brandmatch::SynthSpec::from_json(read_json(spec_path));
  }
  if (ov.users) {
    if (*ov.users == 0) throw Error(Errc::invalid_config, "--users must be at least 1");
    spec.users = *ov.users;
  }
  const std::uint64_t seed = ov.seed.value_or(1);
  manifest.config()["seed"] = seed;
  manifest.config()["spec"] = spec.to_json();

  const auto out = brandmatch::synthesize(spec, seed);
  manifest.write_json("dataset.json", out.dataset);
  manifest.write_json("class_map.json", out.class_map);
  manifest.write("edges.jsonl", out.edges);
  manifest.write_json("labels.json", out.labels);
  manifest.write_json("campaign_woman.json", out.woman_campaign);
  manifest.write_json("campaign_man.json", out.man_campaign);
  manifest.write_json("vocabularies.json", json(out.vocabularies));
  manifest.finish();
  std::cout << "synthesized " << spec.users << " users and " << out.class_map.size() << " pages (seed " << seed
            << ")\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"brandmatch: user/brand profile matching and campaign targeting"};
  app.set_version_flag("--version", BRANDMATCH_VERSION);
  app.require_subcommand(1);

  CommonOptions common;
  Paths paths;
  Overrides ov;

  auto add_common = [&](CLI::App* sub, bool scoring) {
    sub->add_option("--out", common.out, "Output directory")->required();
    sub->add_option("--stopwords", common.stopwords, "Stopword list replacing the bundled ones (one term per line)")
        ->check(CLI::ExistingFile);
    if (scoring) {
      sub->add_option("--config", common.config, "Campaign configuration JSON")->check(CLI::ExistingFile);
      sub->add_option("--jobs", common.jobs, "Worker threads (never changes output)");
      sub->add_option("--tf-mode", common.tf_mode, "Term frequency: standard (count/|D|) or literal (length/|D|)")
          ->check(CLI::IsMember({"standard", "literal"}));
      sub->add_option("--log-base", common.log_base, "IDF logarithm base (fixed: e)");
      sub->add_option("--scope", ov.scope, "IDF corpus scope")->check(CLI::IsMember({"users", "pages", "union"}));
    }
  };
  auto add_dataset = [&](CLI::App* sub) {
    sub->add_option("--dataset", paths.dataset, "Dataset JSON file")->required()->check(CLI::ExistingFile);
  };

  auto* ingest = app.add_subcommand("ingest", "Normalize and clean a dataset, reporting dropped items");
  add_common(ingest, false);
  add_dataset(ingest);

  auto* index = app.add_subcommand("index", "Build and persist the corpus index");
  add_common(index, true);
  add_dataset(index);

  auto* graph = app.add_subcommand("graph", "Build and persist the social graph");
  add_common(graph, false);
  add_dataset(graph);
  graph->add_option("--edges", paths.edges, "Edge list (JSON lines)")->required()->check(CLI::ExistingFile);

  auto* target = app.add_subcommand("target", "Rank users against a brand page and select the campaign target");
  add_common(target, true);
  add_dataset(target);
  target->add_option("--brand", ov.brand, "Brand page id (overrides the config)");
  target->add_option("--fraction", ov.fraction, "Target fraction p in (0, 1]");

  auto* report = app.add_subcommand("report", "Group match table and term clouds");
  add_common(report, true);
  add_dataset(report);
  report->add_option("--class-map", paths.class_map, "Page topic classes JSON")->required()->check(CLI::ExistingFile);
  report->add_option("--top", ov.top, "Terms per cloud")->capture_default_str();
  report->add_flag("--plots", ov.plots, "Also write group_table.svg");

  auto* synth = app.add_subcommand("synth", "Generate a synthetic two-cluster fixture");
  synth->add_option("--out", common.out, "Output directory")->required();
  synth->add_option("--spec,--config", paths.spec, "Synthetic fixture spec JSON")->check(CLI::ExistingFile);
  synth->add_option("--seed", ov.seed, "Random seed (default 1)");
  synth->add_option("--users", ov.users, "Number of users (overrides the spec)");

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
    return kExitInput;
  }

  try {
    if (*ingest) cmd_ingest(common, paths);
    if (*index) cmd_index(common, paths, ov);
    if (*graph) cmd_graph(common, paths);
    if (*target) cmd_target(common, paths, ov);
    if (*report) cmd_report(common, paths, ov);
    if (*synth) cmd_synth(common, paths, ov);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return brandmatch::is_input_error(e.code()) ? kExitInput : kExitInternal;
  } catch (const json::exception& e) {
    std::cerr << "error: malformed JSON input: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitOk;
}
