// clmkit command line: dataset scoring, ranking, synthetic generation, the
// sensitivity ablation, and the rank-stability simulation. JSON reports by
// default, CSV matrices on request. Exit codes follow sysexits where they
// apply: 64 usage, 65 bad data, 66 missing input, 73 unwritable output;
// 2 flags partial per-dataset failures.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "clmkit/bench.hpp"
#include "clmkit/csv.hpp"
#include "clmkit/dataset.hpp"
#include "clmkit/errors.hpp"
#include "clmkit/evm.hpp"
#include "clmkit/ivm_between.hpp"
#include "clmkit/ivm_within.hpp"
#include "clmkit/rng.hpp"
#include "clmkit/synth.hpp"
#include "clmkit/version.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace clmkit;

namespace {

constexpr int kExitPartial = 2;
constexpr int kExitUsage = 64;
constexpr int kExitData = 65;
constexpr int kExitNoInput = 66;
constexpr int kExitCantCreate = 73;

struct CommonOpts {
  std::uint64_t seed = 0;
  int mc_trials = 50;
  std::string label_col;
  std::string json_out;
  std::string csv_out;
  bool deterministic = false;
  unsigned jobs = 0;  // 0 = resolve from env / default 1
};

unsigned resolve_jobs(unsigned flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("CLMKIT_JOBS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return 1;
}

LabelColumn parse_label_col(const std::string& spec) {
  if (spec.empty()) return LabelColumn::last();
  if (!spec.empty() && spec.find_first_not_of("0123456789") == std::string::npos)
    return LabelColumn::by_index(std::stoul(spec));
  return LabelColumn::by_name(spec);
}

std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&t));
  return buf;
}

json report_skeleton(const std::string& command,
                     const std::vector<std::string>& argv,
                     const CommonOpts& opts) {
  json report;
  report["tool"] = "clmkit";
  report["version"] = kVersion;
  report["command"] = command;
  report["argv"] = argv;
  report["seed"] = opts.seed;
  report["mc_trials"] = opts.mc_trials;
  report["deterministic"] = opts.deterministic;
  if (!opts.deterministic) report["generated_at"] = iso_timestamp();
  report["entries"] = json::array();
  report["warnings"] = json::array();
  return report;
}

void emit_json(const json& report, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << report.dump(2) << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << report.dump(2) << '\n';
}

// entries as flat CSV, one row per dataset
void emit_entries_csv(const json& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << "name,measure,value,direction,seed,mc_trials,error\n";
  for (const auto& e : report.at("entries")) {
    out << csv_escape(e.at("name").get<std::string>()) << ','
        << e.at("measure").get<std::string>() << ',';
    if (e.contains("value")) out << format_double(e.at("value").get<double>());
    out << ',' << e.at("direction").get<std::string>() << ','
        << e.at("seed").get<std::uint64_t>() << ','
        << e.at("mc_trials").get<int>() << ',';
    if (e.contains("error")) out << csv_escape(e.at("error").get<std::string>());
    out << '\n';
  }
}

struct ScoredEntry {
  json entry;
  bool failed = false;
};

ScoredEntry score_one(const std::string& name, const Dataset& ds,
                      const bench::MeasureSelector& sel,
                      const CommonOpts& opts) {
  ScoredEntry out;
  json& e = out.entry;
  e["name"] = name;
  e["measure"] = sel.name();
  e["direction"] = sel.max_is_better() ? "max" : "min";
  e["seed"] = opts.seed;
  e["mc_trials"] = opts.mc_trials;
  const auto start = std::chrono::steady_clock::now();
  try {
    const Partition part = Partition::from_labels(ds);
    if (sel.kind == bench::MeasureSelector::Kind::within) {
      e["value"] = ivm::score_within(sel.within, ds, part, DistanceView{}).value;
    } else {
      btw::BetweenConfig cfg;
      cfg.seed = opts.seed;
      cfg.mc_trials = opts.mc_trials;
      const btw::BetweenScore score =
          btw::score_variant(sel.variant, ds, part, cfg);
      e["value"] = score.value;
      e["pair_count"] = score.pair_count;
      json pairs = json::array();
      for (const auto& p : score.pairs) {
        json pj;
        pj["class_a"] = ds.label_names()[p.class_a];
        pj["class_b"] = ds.label_names()[p.class_b];
        pj["base"] = p.base;
        if (p.logistic) pj["logistic"] = *p.logistic;
        if (p.null_mean) pj["null_mean"] = *p.null_mean;
        if (p.normalized_raw) pj["normalized_raw"] = *p.normalized_raw;
        pj["contribution"] = p.contribution;
        pairs.push_back(std::move(pj));
      }
      e["pairs"] = std::move(pairs);
    }
  } catch (const ClmError& err) {
    e["error"] = err.what();
    out.failed = true;
  }
  if (!opts.deterministic) {
    const auto stop = std::chrono::steady_clock::now();
    e["timing_ms"] =
        std::chrono::duration<double, std::milli>(stop - start).count();
  }
  return out;
}

// Datasets from explicit files or directories of *.csv (sorted by name).
std::vector<std::string> expand_inputs(const std::vector<std::string>& paths) {
  std::vector<std::string> files;
  for (const auto& p : paths) {
    if (fs::is_directory(p)) {
      std::vector<std::string> found;
      for (const auto& entry : fs::directory_iterator(p))
        if (entry.is_regular_file() && entry.path().extension() == ".csv")
          found.push_back(entry.path().string());
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.push_back(p);
    }
  }
  return files;
}

int cmd_score(const std::vector<std::string>& inputs, const std::string& measure,
              const std::string& variant, const CommonOpts& opts,
              const std::vector<std::string>& argv) {
  auto sel = bench::MeasureSelector::parse(variant.empty() ? measure : variant);
  if (!sel) {
    std::cerr << "clmkit: unknown measure '"
              << (variant.empty() ? measure : variant) << "'\n";
    return kExitUsage;
  }

  const auto files = expand_inputs(inputs);
  if (files.empty()) {
    std::cerr << "clmkit: no input datasets\n";
    return kExitUsage;
  }
  for (const auto& f : files)
    if (!fs::exists(f)) {
      std::cerr << "clmkit: cannot read '" << f << "'\n";
      return kExitNoInput;
    }

  json report = report_skeleton("score", argv, opts);
  bool any_failed = false;
  for (const auto& f : files) {
    ScoredEntry scored;
    try {
      const Dataset ds = load_csv(f, parse_label_col(opts.label_col));
      scored = score_one(fs::path(f).filename().string(), ds, *sel, opts);
    } catch (const ClmError& err) {
      scored.entry["name"] = fs::path(f).filename().string();
      scored.entry["measure"] = sel->name();
      scored.entry["direction"] = sel->max_is_better() ? "max" : "min";
      scored.entry["seed"] = opts.seed;
      scored.entry["mc_trials"] = opts.mc_trials;
      scored.entry["error"] = err.what();
      scored.failed = true;
    }
    any_failed = any_failed || scored.failed;
    report["entries"].push_back(std::move(scored.entry));
  }

  if (!opts.csv_out.empty()) emit_entries_csv(report, opts.csv_out);
  emit_json(report, opts.json_out);
  return any_failed ? kExitPartial : 0;
}

int cmd_rank(const std::vector<std::string>& inputs, const std::string& measure,
             int top, const CommonOpts& opts,
             const std::vector<std::string>& argv) {
  auto sel = bench::MeasureSelector::parse(measure);
  if (!sel) {
    std::cerr << "clmkit: unknown measure '" << measure << "'\n";
    return kExitUsage;
  }
  const auto files = expand_inputs(inputs);
  if (files.empty()) {
    std::cerr << "clmkit: no input datasets\n";
    return kExitUsage;
  }
  for (const auto& f : files)
    if (!fs::exists(f)) {
      std::cerr << "clmkit: cannot read '" << f << "'\n";
      return kExitNoInput;
    }

  std::vector<std::pair<std::string, Dataset>> sets;
  json report = report_skeleton("rank", argv, opts);
  bool any_failed = false;
  for (const auto& f : files) {
    try {
      sets.emplace_back(fs::path(f).filename().string(),
                        load_csv(f, parse_label_col(opts.label_col)));
    } catch (const ClmError& err) {
      json e;
      e["name"] = fs::path(f).filename().string();
      e["measure"] = sel->name();
      e["direction"] = sel->max_is_better() ? "max" : "min";
      e["seed"] = opts.seed;
      e["mc_trials"] = opts.mc_trials;
      e["error"] = err.what();
      report["entries"].push_back(std::move(e));
      any_failed = true;
    }
  }

  if (!sets.empty()) {
    btw::BetweenConfig cfg;
    cfg.seed = opts.seed;
    cfg.mc_trials = opts.mc_trials;
    const auto ranked =
        bench::rank_datasets(sets, *sel, cfg, resolve_jobs(opts.jobs));
    int rank = 1;
    for (const auto& r : ranked) {
      if (top > 0 && rank > top) break;
      json e;
      e["name"] = r.name;
      e["measure"] = sel->name();
      e["direction"] = sel->max_is_better() ? "max" : "min";
      e["seed"] = opts.seed;
      e["mc_trials"] = opts.mc_trials;
      if (r.ok) {
        e["rank"] = rank++;
        e["value"] = r.value;
      } else {
        e["error"] = r.error;
        any_failed = true;
      }
      report["entries"].push_back(std::move(e));
    }
  }

  if (!opts.csv_out.empty()) emit_entries_csv(report, opts.csv_out);
  emit_json(report, opts.json_out);
  return any_failed ? kExitPartial : 0;
}

json params_to_json(const synth::GaussianPairParams& p) {
  json j;
  j["cov_a"] = {p.cov_a.xx, p.cov_a.xy, p.cov_a.yy};
  j["cov_b"] = {p.cov_b.xx, p.cov_b.xy, p.cov_b.yy};
  j["proportion"] = p.proportion;
  j["separation"] = p.separation;
  j["seed"] = p.seed;
  return j;
}

synth::GaussianPairParams params_from_json(const json& j) {
  synth::GaussianPairParams p;
  p.cov_a = {j.at("cov_a")[0], j.at("cov_a")[1], j.at("cov_a")[2]};
  p.cov_b = {j.at("cov_b")[0], j.at("cov_b")[1], j.at("cov_b")[2]};
  p.proportion = j.at("proportion");
  p.separation = j.at("separation");
  p.seed = j.at("seed");
  return p;
}

int cmd_synth(std::size_t bases, std::size_t points, std::size_t dims,
              const std::string& sep_range, const std::string& out_dir,
              const std::string& from_manifest, const CommonOpts& opts,
              const std::vector<std::string>& argv) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  {
    std::ofstream probe(fs::path(out_dir) / ".clmkit_probe");
    if (!probe) {
      std::cerr << "clmkit: cannot write to '" << out_dir << "'\n";
      return kExitCantCreate;
    }
  }
  fs::remove(fs::path(out_dir) / ".clmkit_probe", ec);

  json manifest;
  if (!from_manifest.empty()) {
    if (!fs::exists(from_manifest)) {
      std::cerr << "clmkit: cannot read '" << from_manifest << "'\n";
      return kExitNoInput;
    }
    std::ifstream in(from_manifest);
    try {
      manifest = json::parse(in);
    } catch (const json::exception& e) {
      std::cerr << "clmkit: malformed manifest: " << e.what() << '\n';
      return kExitData;
    }
  } else {
    synth::ParamRanges ranges;
    if (!sep_range.empty()) {
      const auto colon = sep_range.find(':');
      if (colon == std::string::npos) {
        std::cerr << "clmkit: --separation-range expects lo:hi\n";
        return kExitUsage;
      }
      ranges.sep_lo = std::stod(sep_range.substr(0, colon));
      ranges.sep_hi = std::stod(sep_range.substr(colon + 1));
    }
    manifest["tool"] = "clmkit";
    manifest["version"] = kVersion;
    manifest["command"] = "synth";
    manifest["argv"] = argv;
    manifest["seed"] = opts.seed;
    manifest["points"] = points;
    manifest["dims"] = dims;
    manifest["bases"] = json::array();
    for (std::size_t i = 0; i < bases; ++i) {
      char name[32];
      std::snprintf(name, sizeof(name), "base_%04zu.csv", i);
      json b;
      b["index"] = i;
      b["file"] = name;
      b["params"] = params_to_json(
          synth::random_pair_params(rng::mix(opts.seed, 0x73796e, i), ranges));
      b["noise_seed"] = rng::mix(opts.seed, 0x6e6f69, i);
      manifest["bases"].push_back(std::move(b));
    }
  }

  try {
    const std::size_t n_points = manifest.at("points");
    const std::size_t n_dims = manifest.at("dims");
    for (const auto& b : manifest.at("bases")) {
      const auto params = params_from_json(b.at("params"));
      Dataset ds = synth::generate_base(params, n_points);
      if (n_dims > 2)
        ds = synth::augment_noise(ds, n_dims, b.at("noise_seed").get<std::uint64_t>());
      write_csv(ds, (fs::path(out_dir) / b.at("file").get<std::string>()).string());
    }
  } catch (const json::exception& e) {
    std::cerr << "clmkit: malformed manifest: " << e.what() << '\n';
    return kExitData;
  } catch (const ClmError& e) {
    std::cerr << "clmkit: " << e.what() << '\n';
    return 1;
  }

  std::ofstream mout(fs::path(out_dir) / "manifest.json");
  mout << manifest.dump(2) << '\n';
  return 0;
}

void write_matrix_csv(const std::string& path, const std::vector<double>& grid,
                      const std::vector<double>& matrix,
                      const std::string& corner) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << corner;
  for (double v : grid) out << ',' << format_double(v);
  out << '\n';
  const std::size_t n = grid.size();
  for (std::size_t a = 0; a < n; ++a) {
    out << format_double(grid[a]);
    for (std::size_t b = 0; b < n; ++b)
      out << ',' << format_double(matrix[a * n + b]);
    out << '\n';
  }
}

int cmd_ablate(const std::string& factor_name, std::size_t bases,
               const std::vector<std::string>& variant_names,
               const std::string& out_dir, const CommonOpts& opts,
               const std::vector<std::string>& argv) {
  const auto factor = bench::factor_from_name(factor_name);
  if (!factor) {
    std::cerr << "clmkit: unknown factor '" << factor_name << "'\n";
    return kExitUsage;
  }
  std::vector<btw::VariantId> variants;
  for (const auto& raw : variant_names) {
    const auto v = btw::variant_from_name(raw);
    if (!v) {
      std::cerr << "clmkit: unknown variant '" << raw << "'\n";
      return kExitUsage;
    }
    variants.push_back(*v);
  }

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  {
    std::ofstream probe(fs::path(out_dir) / ".clmkit_probe");
    if (!probe) {
      std::cerr << "clmkit: cannot write to '" << out_dir << "'\n";
      return kExitCantCreate;
    }
  }
  fs::remove(fs::path(out_dir) / ".clmkit_probe", ec);

  btw::BetweenConfig cfg;
  cfg.seed = opts.seed;
  cfg.mc_trials = opts.mc_trials;
  bench::AblationResult res;
  try {
    res = bench::ablation(*factor, bases, variants, cfg, resolve_jobs(opts.jobs));
  } catch (const ClmError& e) {
    std::cerr << "clmkit: " << e.what() << '\n';
    return 1;
  }

  json summary = report_skeleton("ablate", argv, opts);
  summary.erase("entries");
  summary["factor"] = factor_name;
  summary["grid"] = res.grid;
  summary["excluded_bases"] = res.excluded_bases;
  summary["averages"] = json::object();
  for (std::size_t v = 0; v < variants.size(); ++v) {
    const std::string vname{btw::variant_name(variants[v])};
    summary["averages"][vname] = res.averages[v];
    write_matrix_csv(
        (fs::path(out_dir) / ("smape_" + vname + ".csv")).string(), res.grid,
        res.smape[v],
        factor_name == "cardinality" ? "n_points" : "n_dims");
  }
  std::ofstream sout(fs::path(out_dir) / "summary.json");
  sout << summary.dump(2) << '\n';
  emit_json(summary, opts.json_out);
  return 0;
}

int cmd_stability(const std::string& scores_path, std::size_t subset_size,
                  std::size_t trials, const std::string& out_dir,
                  const CommonOpts& opts, const std::vector<std::string>& argv) {
  if (!fs::exists(scores_path)) {
    std::cerr << "clmkit: cannot read '" << scores_path << "'\n";
    return kExitNoInput;
  }

  std::vector<std::string> technique_names;
  std::vector<std::string> dataset_names;
  Matrix scores;
  try {
    const auto rows = read_csv_rows(scores_path);
    if (rows.size() < 2 || rows.front().size() < 2)
      throw ParseError("scores file needs a header and at least one row");
    technique_names.assign(rows.front().begin() + 1, rows.front().end());
    const std::size_t n_tech = technique_names.size();
    scores = Matrix(rows.size() - 1, n_tech);
    for (std::size_t r = 1; r < rows.size(); ++r) {
      if (rows[r].size() != n_tech + 1)
        throw ParseError("row has wrong field count", r, 0);
      dataset_names.push_back(rows[r][0]);
      for (std::size_t c = 0; c < n_tech; ++c) {
        try {
          scores(r - 1, c) = std::stod(rows[r][c + 1]);
        } catch (const std::exception&) {
          throw ParseError("cell is not a number", r, c + 1);
        }
      }
    }
  } catch (const ParseError& e) {
    std::cerr << "clmkit: malformed scores file: " << e.what() << '\n';
    return kExitData;
  }

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  {
    std::ofstream probe(fs::path(out_dir) / ".clmkit_probe");
    if (!probe) {
      std::cerr << "clmkit: cannot write to '" << out_dir << "'\n";
      return kExitCantCreate;
    }
  }
  fs::remove(fs::path(out_dir) / ".clmkit_probe", ec);

  bench::StabilityResult res;
  try {
    res = bench::rank_stability(scores, subset_size, trials, opts.seed);
  } catch (const ClmError& e) {
    std::cerr << "clmkit: " << e.what() << '\n';
    return kExitUsage;
  }

  {
    std::ofstream out(fs::path(out_dir) / "pb_matrix.csv");
    out << "technique";
    for (const auto& t : technique_names) out << ',' << csv_escape(t);
    out << '\n';
    for (std::size_t a = 0; a < technique_names.size(); ++a) {
      out << csv_escape(technique_names[a]);
      for (std::size_t b = 0; b < technique_names.size(); ++b)
        out << ',' << format_double(res.pairwise[a][b]);
      out << '\n';
    }
  }

  json report = report_skeleton("stability", argv, opts);
  report.erase("entries");
  report.erase("mc_trials");
  report["subset_size"] = subset_size;
  report["trials"] = trials;
  report["ranking"] = json::array();
  for (std::size_t i : res.ranking) {
    json e;
    e["technique"] = technique_names[i];
    e["mean_score"] = res.column_means[i];
    report["ranking"].push_back(std::move(e));
  }
  std::ofstream rout(fs::path(out_dir) / "ranking.json");
  rout << report.dump(2) << '\n';
  emit_json(report, opts.json_out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cluster-label matching toolkit"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::vector<std::string> argv_echo(argv + 1, argv + argc);

  CommonOpts opts;
  std::vector<std::string> inputs;
  std::string measure = "ch-btwn";
  std::string variant;
  int top = 0;

  auto add_common = [&](CLI::App* cmd, bool with_trials = true) {
    cmd->add_option("--seed", opts.seed, "random seed (echoed into output)");
    if (with_trials)
      cmd->add_option("--mc-trials", opts.mc_trials, "Monte Carlo trials (T)");
    cmd->add_option("--json", opts.json_out, "JSON report path ('-' = stdout)");
    cmd->add_flag("--deterministic", opts.deterministic,
                  "omit timestamps and timings");
    cmd->add_option("--jobs", opts.jobs,
                    "worker threads (default: CLMKIT_JOBS env or 1)");
  };

  auto* score = app.add_subcommand("score", "score labeled datasets");
  score->add_option("datasets", inputs, "CSV files or directories")->required();
  score->add_option("--measure", measure,
                    "ch|silhouette|davies-bouldin|dunn|xie-beni|i-index|"
                    "ch-btwn|ch-t2|ch-t4|ch-t2t4");
  score->add_option("--variant", variant, "ablation variant override");
  score->add_option("--label-col", opts.label_col, "label column name or index");
  score->add_option("--csv", opts.csv_out, "also write entries as CSV");
  add_common(score);

  auto* rank = app.add_subcommand("rank", "rank datasets by a measure");
  rank->add_option("datasets", inputs, "CSV files or directories")->required();
  rank->add_option("--measure", measure, "measure name");
  rank->add_option("--label-col", opts.label_col, "label column name or index");
  rank->add_option("--top", top, "keep only the top K entries");
  rank->add_option("--csv", opts.csv_out, "also write entries as CSV");
  add_common(rank);

  std::size_t bases = 3, points = 10000, dims = 100;
  std::string sep_range, out_dir, from_manifest;
  auto* synth_cmd = app.add_subcommand("synth", "generate base datasets");
  synth_cmd->add_option("--bases", bases, "number of base datasets");
  synth_cmd->add_option("--points", points, "points per base");
  synth_cmd->add_option("--dims", dims, "dimensions after noise augmentation");
  synth_cmd->add_option("--separation-range", sep_range, "lo:hi");
  synth_cmd->add_option("--out-dir", out_dir, "output directory")->required();
  synth_cmd->add_option("--from-manifest", from_manifest,
                        "regenerate from an existing manifest");
  add_common(synth_cmd, false);

  std::string factor = "cardinality";
  std::vector<std::string> variant_names = {"ch", "ch-t2", "ch-t4", "ch-t2t4"};
  auto* ablate = app.add_subcommand("ablate", "factor sensitivity study");
  ablate->add_option("--factor", factor, "cardinality|dimension");
  ablate->add_option("--bases", bases, "number of base datasets")
      ->default_val(50);
  ablate->add_option("--variants", variant_names, "variant list")
      ->delimiter(',');
  ablate->add_option("--out", out_dir, "output directory")->required();
  add_common(ablate);

  std::string scores_path;
  std::size_t subset_size = 10, trials = 100;
  auto* stability = app.add_subcommand("stability", "rank-stability simulation");
  stability->add_option("scores", scores_path, "scores CSV (dataset x technique)")
      ->required();
  stability->add_option("--subset-size", subset_size, "datasets per trial");
  stability->add_option("--trials", trials, "number of random subsets");
  stability->add_option("--out", out_dir, "output directory")->required();
  add_common(stability, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (score->parsed())
      return cmd_score(inputs, measure, variant, opts, argv_echo);
    if (rank->parsed()) return cmd_rank(inputs, measure, top, opts, argv_echo);
    if (synth_cmd->parsed())
      return cmd_synth(bases, points, dims, sep_range, out_dir, from_manifest,
                       opts, argv_echo);
    if (ablate->parsed())
      return cmd_ablate(factor, bases, variant_names, out_dir, opts, argv_echo);
    if (stability->parsed())
      return cmd_stability(scores_path, subset_size, trials, out_dir, opts,
                           argv_echo);
  } catch (const std::exception& e) {
    std::cerr << "clmkit: " << e.what() << '\n';
    return 1;
  }
  return kExitUsage;
}
