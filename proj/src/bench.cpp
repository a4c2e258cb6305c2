#include "clmkit/bench.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "clmkit/errors.hpp"
#include "clmkit/numeric.hpp"
#include "clmkit/rng.hpp"

namespace clmkit::bench {

namespace {

constexpr std::uint64_t kParamsTag = 1;
constexpr std::uint64_t kNoiseTag = 2;
constexpr std::uint64_t kNuisanceTag = 3;
constexpr std::uint64_t kInstanceTag = 4;
constexpr std::uint64_t kScoreTag = 5;
constexpr std::uint64_t kSubsetTag = 6;

constexpr std::size_t kBasePoints = 10000;
constexpr std::size_t kBaseDims = 100;

double squared_euclidean(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

}  // namespace

std::optional<Factor> factor_from_name(std::string_view name) {
  if (name == "cardinality") return Factor::cardinality;
  if (name == "dimension") return Factor::dimension;
  return std::nullopt;
}

std::string_view factor_name(Factor f) {
  return f == Factor::cardinality ? "cardinality" : "dimension";
}

std::size_t cardinality_grid_point(int t) {
  return static_cast<std::size_t>(5000 + 500 * t);
}

std::size_t dimension_grid_point(int t) {
  return t == 0 ? 2 : static_cast<std::size_t>(10 * t);
}

AblationResult ablation(Factor factor, std::size_t n_bases,
                        const std::vector<btw::VariantId>& variants,
                        const btw::BetweenConfig& cfg, unsigned jobs) {
  if (n_bases < 2) throw InvalidArgument("need at least 2 bases");
  if (variants.empty()) throw InvalidArgument("need at least one variant");

  const std::uint64_t master = cfg.seed;
  const std::size_t n_cells = kGridSize;

  // scores[v][b * n_cells + t]; ok[b] marks bases that scored everywhere
  std::vector<std::vector<double>> scores(
      variants.size(), std::vector<double>(n_bases * n_cells, 0.0));
  std::vector<char> ok(n_bases, 1);

  parallel_for(n_bases, jobs, [&](std::size_t b) {
    try {
      const auto params =
          synth::random_pair_params(rng::mix(master, kParamsTag, b));
      Dataset base =
          synth::augment_noise(synth::generate_base(params, kBasePoints),
                               kBaseDims, rng::mix(master, kNoiseTag, b));
      for (int t = 0; t < static_cast<int>(n_cells); ++t) {
        rng::Stream nuisance(rng::mix(master, kNuisanceTag, b,
                                      static_cast<std::uint64_t>(t)));
        synth::InstanceSpec spec;
        spec.base_index = b;
        if (factor == Factor::cardinality) {
          spec.n_points = cardinality_grid_point(t);
          spec.n_dims = static_cast<std::size_t>(nuisance.uniform_int(2, 100));
        } else {
          spec.n_dims = dimension_grid_point(t);
          spec.n_points =
              static_cast<std::size_t>(nuisance.uniform_int(500, 5000));
        }
        const Dataset inst = synth::make_instance(
            base, spec, rng::mix(master, kInstanceTag, b, static_cast<std::uint64_t>(t)));
        const Partition part = Partition::from_labels(inst);
        btw::BetweenConfig inst_cfg = cfg;
        inst_cfg.seed =
            rng::mix(master, kScoreTag, b, static_cast<std::uint64_t>(t));
        for (std::size_t v = 0; v < variants.size(); ++v)
          scores[v][b * n_cells + t] =
              btw::score_variant(variants[v], inst, part, inst_cfg).value;
      }
    } catch (const ClmError&) {
      ok[b] = 0;  // base excluded, counted below
    }
  });

  std::vector<std::size_t> kept;
  for (std::size_t b = 0; b < n_bases; ++b)
    if (ok[b]) kept.push_back(b);
  const std::size_t excluded = n_bases - kept.size();
  if (kept.size() < 2 || 10 * excluded > n_bases)
    throw ClmError("too many bases failed scoring (" +
                   std::to_string(excluded) + " of " + std::to_string(n_bases) +
                   ")");

  AblationResult out;
  out.factor = factor;
  out.variants = variants;
  out.excluded_bases = excluded;
  out.grid.resize(n_cells);
  for (int t = 0; t < static_cast<int>(n_cells); ++t)
    out.grid[static_cast<std::size_t>(t)] =
        static_cast<double>(factor == Factor::cardinality
                                ? cardinality_grid_point(t)
                                : dimension_grid_point(t));

  out.smape.assign(variants.size(), std::vector<double>(n_cells * n_cells, 0.0));
  out.averages.assign(variants.size(), 0.0);
  std::vector<double> fa(kept.size()), fb(kept.size());
  for (std::size_t v = 0; v < variants.size(); ++v) {
    ExactSum avg;
    for (std::size_t a = 0; a < n_cells; ++a)
      for (std::size_t b2 = a + 1; b2 < n_cells; ++b2) {
        for (std::size_t i = 0; i < kept.size(); ++i) {
          fa[i] = scores[v][kept[i] * n_cells + a];
          fb[i] = scores[v][kept[i] * n_cells + b2];
        }
        const double s = evm::smape(fa, fb);
        out.smape[v][a * n_cells + b2] = s;
        out.smape[v][b2 * n_cells + a] = s;
        avg.add(s);
      }
    out.averages[v] =
        avg.value() / static_cast<double>(n_cells * (n_cells - 1) / 2);
  }
  return out;
}

std::optional<MeasureSelector> MeasureSelector::parse(std::string_view name) {
  MeasureSelector sel;
  if (auto w = ivm::within_kind_from_name(name)) {
    sel.kind = Kind::within;
    sel.within = *w;
    return sel;
  }
  if (auto v = btw::variant_from_name(name)) {
    sel.kind = Kind::between;
    sel.variant = *v;
    return sel;
  }
  return std::nullopt;
}

std::string MeasureSelector::name() const {
  if (kind == Kind::within) return std::string(ivm::within_kind_name(within));
  if (variant == btw::VariantId::ch_t2t4) return "ch-btwn";
  return std::string(btw::variant_name(variant));
}

bool MeasureSelector::max_is_better() const {
  if (kind == Kind::between) return true;
  return ivm::within_direction(within) == ivm::Direction::max_is_better;
}

std::vector<RankedEntry> rank_datasets(
    const std::vector<std::pair<std::string, Dataset>>& datasets,
    const MeasureSelector& measure, const btw::BetweenConfig& cfg,
    unsigned jobs) {
  if (datasets.empty()) throw InvalidArgument("no datasets to rank");

  std::vector<RankedEntry> entries(datasets.size());
  parallel_for(datasets.size(), jobs, [&](std::size_t i) {
    RankedEntry& e = entries[i];
    e.name = datasets[i].first;
    try {
      const Dataset& ds = datasets[i].second;
      const Partition part = Partition::from_labels(ds);
      if (measure.kind == MeasureSelector::Kind::within) {
        e.value = ivm::score_within(measure.within, ds, part, DistanceView{}).value;
      } else {
        e.value = btw::score_variant(measure.variant, ds, part, cfg).value;
      }
    } catch (const ClmError& err) {
      e.ok = false;
      e.error = err.what();
    }
  });

  const bool desc = measure.max_is_better();
  std::sort(entries.begin(), entries.end(),
            [&](const RankedEntry& a, const RankedEntry& b) {
              if (a.ok != b.ok) return a.ok;  // failures last
              if (a.ok && a.value != b.value)
                return desc ? a.value > b.value : a.value < b.value;
              return a.name < b.name;
            });
  return entries;
}

Partition kmeans(const Dataset& ds, std::size_t k, std::uint64_t seed,
                 std::size_t max_iters) {
  const std::size_t n = ds.size();
  if (k < 1 || k > n) throw InvalidArgument("k must lie in [1, |X|]");
  if (k == 1) {
    std::vector<int> all(n, 0);
    return Partition::from_assignments(all, 1);
  }

  const Matrix& pts = ds.points();
  const std::size_t dim = ds.dims();
  rng::Stream stream(seed);

  // D^2-weighted seeding
  Matrix centers(k, dim);
  {
    const auto first = static_cast<std::size_t>(stream.below(n));
    for (std::size_t c = 0; c < dim; ++c) centers(0, c) = pts(first, c);
    std::vector<double> d2(n, std::numeric_limits<double>::infinity());
    for (std::size_t ci = 1; ci < k; ++ci) {
      double total = 0.0;
      for (std::size_t r = 0; r < n; ++r) {
        d2[r] = std::min(d2[r], squared_euclidean(pts.row(r), centers.row(ci - 1)));
        total += d2[r];
      }
      std::size_t chosen = 0;
      if (total > 0.0) {
        const double target = stream.uniform() * total;
        double run = 0.0;
        chosen = n - 1;
        for (std::size_t r = 0; r < n; ++r) {
          run += d2[r];
          if (run >= target) {
            chosen = r;
            break;
          }
        }
      } else {
        chosen = static_cast<std::size_t>(stream.below(n));
      }
      for (std::size_t c = 0; c < dim; ++c) centers(ci, c) = pts(chosen, c);
    }
  }

  std::vector<int> assign(n, -1);
  std::vector<std::size_t> counts(k, 0);
  for (std::size_t iter = 0; iter < max_iters; ++iter) {
    bool changed = false;
    for (std::size_t r = 0; r < n; ++r) {
      int best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t ci = 0; ci < k; ++ci) {
        const double d = squared_euclidean(pts.row(r), centers.row(ci));
        if (d < best_d) {
          best_d = d;
          best = static_cast<int>(ci);
        }
      }
      if (assign[r] != best) {
        assign[r] = best;
        changed = true;
      }
    }
    if (!changed) break;

    counts.assign(k, 0);
    Matrix sums(k, dim);
    for (std::size_t r = 0; r < n; ++r) {
      const auto g = static_cast<std::size_t>(assign[r]);
      ++counts[g];
      auto row = pts.row(r);
      for (std::size_t c = 0; c < dim; ++c) sums(g, c) += row[c];
    }
    for (std::size_t ci = 0; ci < k; ++ci) {
      if (counts[ci] > 0) {
        for (std::size_t c = 0; c < dim; ++c)
          centers(ci, c) = sums(ci, c) / static_cast<double>(counts[ci]);
      } else {
        // reseed an emptied cluster to the point farthest from its centroid
        std::size_t far = 0;
        double far_d = -1.0;
        for (std::size_t r = 0; r < n; ++r) {
          const double d = squared_euclidean(
              pts.row(r), centers.row(static_cast<std::size_t>(assign[r])));
          if (d > far_d) {
            far_d = d;
            far = r;
          }
        }
        for (std::size_t c = 0; c < dim; ++c) centers(ci, c) = pts(far, c);
      }
    }
  }

  // compact away groups that stayed empty
  counts.assign(k, 0);
  for (int a : assign) ++counts[static_cast<std::size_t>(a)];
  std::vector<int> remap(k, -1);
  int next = 0;
  for (std::size_t ci = 0; ci < k; ++ci)
    if (counts[ci] > 0) remap[ci] = next++;
  for (int& a : assign) a = remap[static_cast<std::size_t>(a)];
  return Partition::from_assignments(assign, next);
}

double approx_ground_truth_clm(const Dataset& ds, evm::EvmKind kind,
                               std::vector<std::size_t> k_grid,
                               const std::vector<std::uint64_t>& seeds,
                               std::size_t max_iters) {
  if (k_grid.empty()) {
    for (std::size_t k = 2; k <= 3 * ds.n_classes(); ++k)
      if (k <= ds.size()) k_grid.push_back(k);
  }
  if (k_grid.empty() || seeds.empty())
    throw InvalidArgument("empty candidate grid");

  const Partition labels = Partition::from_labels(ds);
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t k : k_grid)
    for (std::uint64_t s : seeds) {
      const Partition clustering = kmeans(ds, k, s, max_iters);
      best = std::max(best, evm::score_evm(kind, labels, clustering));
    }
  return best;
}

StabilityResult rank_stability(const Matrix& scores, std::size_t subset_size,
                               std::size_t trials, std::uint64_t seed) {
  const std::size_t n_rows = scores.rows();
  const std::size_t n_tech = scores.cols();
  if (n_rows == 0 || n_tech == 0) throw InvalidArgument("empty score matrix");
  if (subset_size < 1 || subset_size > n_rows)
    throw InvalidArgument("subset size must lie in [1, dataset count]");
  if (trials < 1) throw InvalidArgument("need at least one trial");

  std::vector<std::vector<double>> wins(n_tech, std::vector<double>(n_tech, 0.0));
  std::vector<double> means(n_tech);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    rng::Stream stream(rng::mix(seed, kSubsetTag, trial));
    const auto rows = stream.sample_without_replacement(n_rows, subset_size);
    for (std::size_t tcol = 0; tcol < n_tech; ++tcol) {
      double sum = 0.0;
      for (std::size_t r : rows) sum += scores(r, tcol);
      means[tcol] = sum / static_cast<double>(subset_size);
    }
    for (std::size_t a = 0; a < n_tech; ++a)
      for (std::size_t b = a + 1; b < n_tech; ++b) {
        if (means[a] > means[b]) wins[a][b] += 1.0;
        else if (means[a] == means[b]) wins[a][b] += 0.5;
      }
  }

  StabilityResult out;
  out.pairwise.assign(n_tech, std::vector<double>(n_tech, 0.5));
  for (std::size_t a = 0; a < n_tech; ++a)
    for (std::size_t b = a + 1; b < n_tech; ++b) {
      const double p = wins[a][b] / static_cast<double>(trials);
      const double stability = std::max(1.0 - p, p);
      out.pairwise[a][b] = stability;
      out.pairwise[b][a] = stability;
    }

  out.column_means.resize(n_tech);
  for (std::size_t tcol = 0; tcol < n_tech; ++tcol) {
    ExactSum s;
    for (std::size_t r = 0; r < n_rows; ++r) s.add(scores(r, tcol));
    out.column_means[tcol] = s.value() / static_cast<double>(n_rows);
  }
  out.ranking.resize(n_tech);
  for (std::size_t i = 0; i < n_tech; ++i) out.ranking[i] = i;
  std::sort(out.ranking.begin(), out.ranking.end(),
            [&](std::size_t a, std::size_t b) {
              if (out.column_means[a] != out.column_means[b])
                return out.column_means[a] > out.column_means[b];
              return a < b;
            });
  return out;
}

}  // namespace clmkit::bench
