#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "clmkit/dataset.hpp"
#include "clmkit/evm.hpp"
#include "clmkit/ivm_between.hpp"
#include "clmkit/ivm_within.hpp"
#include "clmkit/synth.hpp"

namespace clmkit::bench {

enum class Factor { cardinality, dimension };
std::optional<Factor> factor_from_name(std::string_view name);
std::string_view factor_name(Factor f);

/// Controlled grids: N_t = 500 t + 5000; Delta_0 = 2, Delta_t = 10 t.
/// Eleven values each (t = 0..10).
std::size_t cardinality_grid_point(int t);
std::size_t dimension_grid_point(int t);
inline constexpr int kGridSize = 11;

struct AblationResult {
  Factor factor = Factor::cardinality;
  std::vector<double> grid;                 // the 11 controlled values
  std::vector<btw::VariantId> variants;
  // smape[v][a * grid.size() + b]; symmetric, zero diagonal by convention
  std::vector<std::vector<double>> smape;
  std::vector<double> averages;             // mean over off-diagonal pairs
  std::size_t excluded_bases = 0;           // bases dropped after a failure

  double smape_at(std::size_t v, std::size_t a, std::size_t b) const {
    return smape[v][a * grid.size() + b];
  }
};

/// Sensitivity study: draws n_bases randomized two-Gaussian bases
/// (10000 x 100 after noise augmentation), builds 11 instances per base with
/// the controlled factor on its grid and the other factor randomized, scores
/// every variant on every instance, and reports the SMAPE between grid-value
/// pairs across bases. Bases whose scoring fails anywhere are excluded with
/// a count; more than 10% excluded aborts the run.
AblationResult ablation(Factor factor, std::size_t n_bases,
                        const std::vector<btw::VariantId>& variants,
                        const btw::BetweenConfig& cfg, unsigned jobs = 1);

/// Which measure scores a dataset (a classical within-dataset measure or a
/// between-dataset variant; "ch-btwn" is the ch-t2t4 variant).
struct MeasureSelector {
  enum class Kind { within, between } kind = Kind::within;
  ivm::WithinKind within = ivm::WithinKind::calinski_harabasz;
  btw::VariantId variant = btw::VariantId::ch_t2t4;

  static std::optional<MeasureSelector> parse(std::string_view name);
  std::string name() const;
  bool max_is_better() const;
};

struct RankedEntry {
  std::string name;
  double value = 0.0;
  bool ok = true;
  std::string error;  // set when ok is false; entry excluded from ordering
};

/// Scores every dataset with the selected measure and orders best-first
/// (descending for max-is-better). Failed datasets are flagged and placed
/// after all scored ones. Ties break by name.
std::vector<RankedEntry> rank_datasets(
    const std::vector<std::pair<std::string, Dataset>>& datasets,
    const MeasureSelector& measure, const btw::BetweenConfig& cfg,
    unsigned jobs = 1);

/// Lloyd iterations from greedy D^2-weighted seeding. Deterministic for a
/// fixed seed; an emptied cluster is reseeded to the point farthest from its
/// centroid. Groups that remain empty (k above the number of distinct
/// points) are dropped from the returned partition.
Partition kmeans(const Dataset& ds, std::size_t k, std::uint64_t seed,
                 std::size_t max_iters = 100);

/// Best EVM agreement between the class labels and k-means clusterings over
/// a (k, seed) grid; a cheap stand-in for a full clustering-suite ground
/// truth. Empty k_grid defaults to 2 .. 3 * n_classes (capped at |X| - 1).
double approx_ground_truth_clm(const Dataset& ds, evm::EvmKind kind,
                               std::vector<std::size_t> k_grid = {},
                               const std::vector<std::uint64_t>& seeds = {0, 1, 2},
                               std::size_t max_iters = 100);

struct StabilityResult {
  // pairwise[a][b] = max(1-p, p) with p the share of trials where technique
  // a's subset mean beats b's; ties count 0.5. Diagonal is 0.5.
  std::vector<std::vector<double>> pairwise;
  std::vector<std::size_t> ranking;  // technique indices, best first
  std::vector<double> column_means;  // mean score per technique over all rows
};

/// Rank-stability simulation: each trial draws subset_size dataset rows
/// without replacement, averages every technique's column over the subset,
/// and records which technique of each pair wins.
StabilityResult rank_stability(const Matrix& scores, std::size_t subset_size = 10,
                               std::size_t trials = 100, std::uint64_t seed = 0);

}  // namespace clmkit::bench
