#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "clmkit/dataset.hpp"

namespace clmkit::btw {

enum class Aggregation { mean, min, max };

/// Whether the per-pair score anchors its global centroid, sigma_d, and null
/// distribution on the two classes' points (default) or keeps the full
/// dataset's centroid and sigma_d while still summing over the pair's points.
/// The full-dataset reading exists for comparison only.
enum class PairScope { restriction, full_dataset };

struct BetweenConfig {
  std::uint64_t seed = 0;  // mandatory for reproducibility; echoed in reports
  int mc_trials = 50;      // T
  Aggregation aggregation = Aggregation::mean;
  bool clamp_negative = true;
  PairScope pair_scope = PairScope::restriction;
};

/// Ablation variants: shift trick (T2) and range trick (T4) on or off.
/// Class-pairwise aggregation (T3) is always on. ch_t2t4 is the full
/// between-dataset pipeline.
enum class VariantId { ch, ch_t2, ch_t4, ch_t2t4 };

std::optional<VariantId> variant_from_name(std::string_view name);
std::string_view variant_name(VariantId v);

struct PairScore {
  std::size_t class_a = 0;
  std::size_t class_b = 0;
  double base = 0.0;                     // CH or CH1 on the pair
  std::optional<double> logistic;        // squashed base (range trick)
  std::optional<double> null_mean;       // Monte Carlo minimum estimate
  std::optional<double> normalized_raw;  // min-max result before clamping
  double contribution = 0.0;             // value entering the aggregation
};

struct BetweenScore {
  double value = 0.0;
  std::vector<PairScore> pairs;  // ordered by (class_a, class_b)
  std::size_t pair_count = 0;    // |C| * (|C| - 1) / 2
};

/// Exponential-ratio Calinski-Harabasz: squared distances replaced by
/// exp(d / sigma_d), which cancels a constant distance shift while the
/// sigma_d normalization keeps scale invariance. Exponents are evaluated
/// relative to their joint maximum so tight sigma_d cannot overflow; the
/// ratio is unchanged. Strictly positive.
double ch1(const Dataset& ds, const Partition& part, const DistanceView& dv);

/// Logistic squash v / (1 + v), mapping (0, inf) onto (0, 1). Throws
/// InvalidArgument for non-positive input.
double ch2(double ch1_value);

/// Mean over cfg.mc_trials of ch2(ch1(...)) under random partitions that
/// keep every class size; estimates the worst achievable score. Trial t's
/// randomness derives from (cfg.seed, t) only, so the result is independent
/// of evaluation order and bit-identical for equal seeds. A trial hitting
/// degenerate geometry is resampled up to a retry cap, then
/// MonteCarloFailure is thrown.
double estimate_ch2_min(const Dataset& ds, const Partition& part,
                        const DistanceView& dv, const BetweenConfig& cfg);

/// Same estimate over explicit null partitions instead of seeded ones;
/// measurement hook for alignment experiments.
double ch2_min_over(const Dataset& ds, std::span<const Partition> nulls,
                    const DistanceView& dv);

/// Min-max normalized score (ch2 - ch2_min) / (1 - ch2_min); the maximum is
/// 1 by construction of ch2. Negative values (score below the null mean) are
/// clamped to 0 when cfg.clamp_negative.
double ch3(const Dataset& ds, const Partition& part, const DistanceView& dv,
           const BetweenConfig& cfg);

/// ch3 with an explicit null sample; test hook matching ch2_min_over.
double ch3_with_nulls(const Dataset& ds, const Partition& part,
                      const DistanceView& dv, std::span<const Partition> nulls,
                      bool clamp_negative);

/// The between-dataset score: for every unordered class pair the dataset is
/// restricted to the two classes (per cfg.pair_scope), ch3 recomputed on the
/// restriction, and the per-pair values aggregated (mean by default). Pair p
/// draws its Monte Carlo streams from (cfg.seed, p, trial); with a single
/// pair the seed is used as-is, so the result equals ch3 of that pair.
BetweenScore ch_btwn(const Dataset& ds, const Partition& part,
                     const BetweenConfig& cfg);
BetweenScore ch_btwn(const Dataset& ds, const Partition& part,
                     const DistanceView& dv, const BetweenConfig& cfg);

/// Ablation variants of ch_btwn: per-pair base is classic CH (T2 off) or ch1
/// (T2 on); with T4 off the base itself is aggregated, with T4 on the
/// logistic + Monte Carlo min-max normalization is applied, the null
/// estimate using the same base. ch_t2t4 equals ch_btwn bit-exactly.
BetweenScore score_variant(VariantId variant, const Dataset& ds,
                           const Partition& part, const BetweenConfig& cfg);
BetweenScore score_variant(VariantId variant, const Dataset& ds,
                           const Partition& part, const DistanceView& dv,
                           const BetweenConfig& cfg);

}  // namespace clmkit::btw
