#include "clmkit/ivm_between.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "clmkit/errors.hpp"
#include "clmkit/numeric.hpp"
#include "clmkit/rng.hpp"

namespace clmkit::btw {

namespace {

constexpr std::uint64_t kPairTag = 0x70616972;   // stream domain separators
constexpr std::uint64_t kTrialTag = 0x7472696c;
constexpr int kRetryCap = 8;

enum class BaseKind { classic, exponential };

// Everything the base measures need that does not depend on the partition:
// the points, the distance view, the global centroid, and (for the
// exponential base) sigma_d. Reused across all Monte Carlo trials.
struct EvalContext {
  const Matrix* pts = nullptr;
  DistanceView dv;
  std::vector<double> global_centroid;
  double sigma_d = 0.0;
  bool sigma_ready = false;
};

std::vector<double> centroid_of(const Matrix& pts) {
  std::vector<ExactSum> acc(pts.cols());
  for (std::size_t r = 0; r < pts.rows(); ++r) {
    auto row = pts.row(r);
    for (std::size_t c = 0; c < pts.cols(); ++c) acc[c].add(row[c]);
  }
  std::vector<double> out(pts.cols());
  for (std::size_t c = 0; c < pts.cols(); ++c)
    out[c] = acc[c].value() / static_cast<double>(pts.rows());
  return out;
}

double sigma_of(const Matrix& pts, const DistanceView& dv,
                const std::vector<double>& centroid) {
  std::vector<double> dist(pts.rows());
  for (std::size_t r = 0; r < pts.rows(); ++r)
    dist[r] = dv(pts.row(r), centroid);
  const MeanSd ms = population_mean_sd(dist);
  if (!(ms.mean > 0.0) || ms.sd < kEpsGeom * ms.mean)
    throw DegenerateGeometry(
        "distances to the global centroid have no usable spread");
  return ms.sd;
}

EvalContext make_context(const Matrix& pts, const DistanceView& dv) {
  EvalContext ctx;
  ctx.pts = &pts;
  ctx.dv = dv;
  ctx.global_centroid = centroid_of(pts);
  return ctx;
}

void ensure_sigma(EvalContext& ctx) {
  if (!ctx.sigma_ready) {
    ctx.sigma_d = sigma_of(*ctx.pts, ctx.dv, ctx.global_centroid);
    ctx.sigma_ready = true;
  }
}

// Scratch buffers reused across trials.
struct Workspace {
  std::vector<ExactSum> cent_acc;  // k * dim
  Matrix centroids;                // k x dim
  std::vector<int> assignment;
  std::vector<std::size_t> sizes;
  std::vector<double> num_exp;
  std::vector<double> den_exp;
};

void compute_class_centroids(const EvalContext& ctx, Workspace& ws,
                             std::size_t k) {
  const Matrix& pts = *ctx.pts;
  const std::size_t dim = pts.cols();
  ws.cent_acc.resize(k * dim);
  for (auto& a : ws.cent_acc) a.clear();
  ws.sizes.assign(k, 0);
  for (std::size_t r = 0; r < pts.rows(); ++r) {
    const auto g = static_cast<std::size_t>(ws.assignment[r]);
    ++ws.sizes[g];
    auto row = pts.row(r);
    ExactSum* acc = &ws.cent_acc[g * dim];
    for (std::size_t c = 0; c < dim; ++c) acc[c].add(row[c]);
  }
  if (ws.centroids.rows() != k || ws.centroids.cols() != dim)
    ws.centroids = Matrix(k, dim);
  for (std::size_t g = 0; g < k; ++g) {
    if (ws.sizes[g] == 0) throw DegenerateInput("empty class in assignment");
    for (std::size_t c = 0; c < dim; ++c)
      ws.centroids(g, c) =
          ws.cent_acc[g * dim + c].value() / static_cast<double>(ws.sizes[g]);
  }
}

// Classic CH over ws.assignment. n and k from the workspace.
double eval_classic(const EvalContext& ctx, Workspace& ws, std::size_t k) {
  const Matrix& pts = *ctx.pts;
  compute_class_centroids(ctx, ws, k);
  ExactSum between;
  for (std::size_t g = 0; g < k; ++g) {
    const double d = ctx.dv(ws.centroids.row(g), ctx.global_centroid);
    between.add(static_cast<double>(ws.sizes[g]) * d * d);
  }
  ExactSum within;
  for (std::size_t r = 0; r < pts.rows(); ++r) {
    const double d =
        ctx.dv(pts.row(r), ws.centroids.row(static_cast<std::size_t>(ws.assignment[r])));
    within.add(d * d);
  }
  const auto n = static_cast<double>(pts.rows());
  const double denom = within.value() / (n - static_cast<double>(k));
  if (denom == 0.0) throw DegenerateGeometry("zero within-cluster scatter");
  return (between.value() / (static_cast<double>(k) - 1.0)) / denom;
}

// CH1 over ws.assignment. All exponents are shifted by their joint maximum
// before exponentiation; the shift cancels in the ratio.
double eval_exponential(const EvalContext& ctx, Workspace& ws, std::size_t k) {
  const Matrix& pts = *ctx.pts;
  compute_class_centroids(ctx, ws, k);
  const double sigma = ctx.sigma_d;

  ws.num_exp.resize(k);
  for (std::size_t g = 0; g < k; ++g)
    ws.num_exp[g] = ctx.dv(ws.centroids.row(g), ctx.global_centroid) / sigma;

  ws.den_exp.resize(pts.rows());
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < pts.rows(); ++r) {
    ws.den_exp[r] =
        ctx.dv(pts.row(r), ws.centroids.row(static_cast<std::size_t>(ws.assignment[r]))) /
        sigma;
    peak = std::max(peak, ws.den_exp[r]);
  }
  for (std::size_t g = 0; g < k; ++g) peak = std::max(peak, ws.num_exp[g]);

  ExactSum num;
  for (std::size_t g = 0; g < k; ++g)
    num.add(static_cast<double>(ws.sizes[g]) * std::exp(ws.num_exp[g] - peak));
  ExactSum den;
  for (std::size_t r = 0; r < pts.rows(); ++r)
    den.add(std::exp(ws.den_exp[r] - peak));

  const auto n = static_cast<double>(pts.rows());
  const double numer = num.value() / (static_cast<double>(k) - 1.0);
  const double denom = den.value() / (n - static_cast<double>(k));
  if (denom == 0.0) return std::numeric_limits<double>::infinity();
  return numer / denom;
}

double eval_base(BaseKind kind, const EvalContext& ctx, Workspace& ws,
                 std::size_t k) {
  return kind == BaseKind::classic ? eval_classic(ctx, ws, k)
                                   : eval_exponential(ctx, ws, k);
}

// Total logistic squash: 0 and +inf map to 0 and 1.
double squash(double v) {
  if (std::isinf(v)) return 1.0;
  return v / (1.0 + v);
}

void require_preconditions(const Dataset& ds, const Partition& part) {
  if (part.size() != ds.size())
    throw InvalidPartition("partition does not match dataset size");
  if (part.n_groups() < 2)
    throw DegenerateInput("scoring needs at least 2 classes");
  if (ds.size() <= part.n_groups())
    throw DegenerateInput("|X| must exceed |C|");
}

void load_true_assignment(const Partition& part, Workspace& ws) {
  ws.assignment.assign(part.size(), 0);
  for (std::size_t g = 0; g < part.n_groups(); ++g)
    for (std::size_t idx : part.group(g))
      ws.assignment[idx] = static_cast<int>(g);
}

// Mean over T trials of squash(base) under size-preserving random
// relabelings. `seed` is the stream root: trial t uses (seed, t).
double null_mean_estimate(BaseKind kind, EvalContext& ctx, const Partition& part,
                          std::uint64_t seed, int trials) {
  if (trials < 1) throw InvalidArgument("mc_trials must be >= 1");
  const std::size_t k = part.n_groups();
  Workspace ws;
  load_true_assignment(part, ws);
  const std::vector<int> base_assignment = ws.assignment;

  ExactSum mean_acc;
  for (int t = 0; t < trials; ++t) {
    double value = 0.0;
    bool ok = false;
    for (int attempt = 0; attempt <= kRetryCap; ++attempt) {
      rng::Stream stream(attempt == 0
                             ? rng::mix(seed, kTrialTag, static_cast<std::uint64_t>(t))
                             : rng::mix(seed, kTrialTag, static_cast<std::uint64_t>(t),
                                        static_cast<std::uint64_t>(attempt)));
      ws.assignment = base_assignment;
      stream.shuffle(ws.assignment);
      try {
        value = squash(eval_base(kind, ctx, ws, k));
        ok = true;
        break;
      } catch (const DegenerateGeometry&) {
        continue;  // resample this trial
      }
    }
    if (!ok)
      throw MonteCarloFailure("Monte Carlo trial " + std::to_string(t) +
                              " kept hitting degenerate geometry");
    mean_acc.add(value);
  }
  return mean_acc.value() / static_cast<double>(trials);
}

struct Ch3Breakdown {
  double base = 0.0;
  double logistic = 0.0;
  double null_mean = 0.0;
  double raw = 0.0;
};

Ch3Breakdown ch3_core(BaseKind kind, EvalContext& ctx, const Partition& part,
                      std::uint64_t seed, int trials) {
  const std::size_t k = part.n_groups();
  Workspace ws;
  load_true_assignment(part, ws);
  Ch3Breakdown out;
  out.base = eval_base(kind, ctx, ws, k);
  out.logistic = squash(out.base);
  out.null_mean = null_mean_estimate(kind, ctx, part, seed, trials);
  const double headroom = 1.0 - out.null_mean;
  if (headroom < kEpsGeom)
    throw DegenerateNormalization("null mean leaves no normalization headroom");
  out.raw = (out.logistic - out.null_mean) / headroom;
  return out;
}

}  // namespace

std::optional<VariantId> variant_from_name(std::string_view name) {
  if (name == "ch") return VariantId::ch;
  if (name == "ch-t2") return VariantId::ch_t2;
  if (name == "ch-t4") return VariantId::ch_t4;
  if (name == "ch-t2t4" || name == "ch-btwn") return VariantId::ch_t2t4;
  return std::nullopt;
}

std::string_view variant_name(VariantId v) {
  switch (v) {
    case VariantId::ch: return "ch";
    case VariantId::ch_t2: return "ch-t2";
    case VariantId::ch_t4: return "ch-t4";
    case VariantId::ch_t2t4: return "ch-t2t4";
  }
  return "?";
}

double ch1(const Dataset& ds, const Partition& part, const DistanceView& dv) {
  require_preconditions(ds, part);
  EvalContext ctx = make_context(ds.points(), dv);
  ensure_sigma(ctx);
  Workspace ws;
  load_true_assignment(part, ws);
  return eval_exponential(ctx, ws, part.n_groups());
}

double ch2(double ch1_value) {
  if (!(ch1_value > 0.0))
    throw InvalidArgument("ch2 expects a strictly positive input");
  return squash(ch1_value);
}

double estimate_ch2_min(const Dataset& ds, const Partition& part,
                        const DistanceView& dv, const BetweenConfig& cfg) {
  require_preconditions(ds, part);
  EvalContext ctx = make_context(ds.points(), dv);
  ensure_sigma(ctx);
  return null_mean_estimate(BaseKind::exponential, ctx, part, cfg.seed,
                            cfg.mc_trials);
}

double ch2_min_over(const Dataset& ds, std::span<const Partition> nulls,
                    const DistanceView& dv) {
  if (nulls.empty()) throw InvalidArgument("need at least one null partition");
  EvalContext ctx = make_context(ds.points(), dv);
  ensure_sigma(ctx);
  Workspace ws;
  ExactSum mean_acc;
  for (const Partition& p : nulls) {
    require_preconditions(ds, p);
    load_true_assignment(p, ws);
    mean_acc.add(squash(eval_exponential(ctx, ws, p.n_groups())));
  }
  return mean_acc.value() / static_cast<double>(nulls.size());
}

double ch3(const Dataset& ds, const Partition& part, const DistanceView& dv,
           const BetweenConfig& cfg) {
  require_preconditions(ds, part);
  EvalContext ctx = make_context(ds.points(), dv);
  ensure_sigma(ctx);
  const Ch3Breakdown b =
      ch3_core(BaseKind::exponential, ctx, part, cfg.seed, cfg.mc_trials);
  return cfg.clamp_negative ? std::max(0.0, b.raw) : b.raw;
}

double ch3_with_nulls(const Dataset& ds, const Partition& part,
                      const DistanceView& dv, std::span<const Partition> nulls,
                      bool clamp_negative) {
  require_preconditions(ds, part);
  EvalContext ctx = make_context(ds.points(), dv);
  ensure_sigma(ctx);
  Workspace ws;
  load_true_assignment(part, ws);
  const double logistic = squash(eval_exponential(ctx, ws, part.n_groups()));
  const double null_mean = ch2_min_over(ds, nulls, dv);
  const double headroom = 1.0 - null_mean;
  if (headroom < kEpsGeom)
    throw DegenerateNormalization("null mean leaves no normalization headroom");
  const double raw = (logistic - null_mean) / headroom;
  return clamp_negative ? std::max(0.0, raw) : raw;
}

BetweenScore ch_btwn(const Dataset& ds, const Partition& part,
                     const BetweenConfig& cfg) {
  return score_variant(VariantId::ch_t2t4, ds, part, DistanceView{}, cfg);
}

BetweenScore ch_btwn(const Dataset& ds, const Partition& part,
                     const DistanceView& dv, const BetweenConfig& cfg) {
  return score_variant(VariantId::ch_t2t4, ds, part, dv, cfg);
}

BetweenScore score_variant(VariantId variant, const Dataset& ds,
                           const Partition& part, const BetweenConfig& cfg) {
  return score_variant(variant, ds, part, DistanceView{}, cfg);
}

BetweenScore score_variant(VariantId variant, const Dataset& ds,
                           const Partition& part, const DistanceView& dv,
                           const BetweenConfig& cfg) {
  if (part.size() != ds.size())
    throw InvalidPartition("partition does not match dataset size");
  if (part.n_groups() < 2)
    throw InvalidPartition("between-dataset scoring needs at least 2 classes");
  for (std::size_t g = 0; g < part.n_groups(); ++g)
    if (part.group(g).size() < 2)
      throw DegenerateInput("every class needs at least 2 points");
  if (cfg.mc_trials < 1) throw InvalidArgument("mc_trials must be >= 1");

  const BaseKind kind = (variant == VariantId::ch || variant == VariantId::ch_t4)
                            ? BaseKind::classic
                            : BaseKind::exponential;
  const bool minmax =
      variant == VariantId::ch_t4 || variant == VariantId::ch_t2t4;

  const std::size_t k = part.n_groups();
  BetweenScore out;
  out.pair_count = k * (k - 1) / 2;

  // Full-dataset scope shares one centroid/sigma anchor across pairs.
  std::vector<double> full_centroid;
  double full_sigma = 0.0;
  if (cfg.pair_scope == PairScope::full_dataset) {
    full_centroid = centroid_of(ds.points());
    if (kind == BaseKind::exponential)
      full_sigma = sigma_of(ds.points(), dv, full_centroid);
  }

  std::size_t pair_index = 0;
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b, ++pair_index) {
      const std::uint64_t pair_seed =
          out.pair_count == 1 ? cfg.seed
                              : rng::mix(cfg.seed, kPairTag, pair_index);
      try {
        auto [sub, sub_part] = pair_restriction(ds, part, a, b);
        EvalContext ctx = make_context(sub.points(), dv);
        if (cfg.pair_scope == PairScope::full_dataset) {
          ctx.global_centroid = full_centroid;
          ctx.sigma_d = full_sigma;
          ctx.sigma_ready = true;
        } else if (kind == BaseKind::exponential) {
          ensure_sigma(ctx);
        }

        PairScore ps;
        ps.class_a = a;
        ps.class_b = b;
        if (minmax) {
          const Ch3Breakdown bd =
              ch3_core(kind, ctx, sub_part, pair_seed, cfg.mc_trials);
          ps.base = bd.base;
          ps.logistic = bd.logistic;
          ps.null_mean = bd.null_mean;
          ps.normalized_raw = bd.raw;
          ps.contribution = cfg.clamp_negative ? std::max(0.0, bd.raw) : bd.raw;
        } else {
          Workspace ws;
          load_true_assignment(sub_part, ws);
          ps.base = eval_base(kind, ctx, ws, 2);
          ps.contribution = ps.base;
        }
        out.pairs.push_back(ps);
      } catch (const PairFailure&) {
        throw;
      } catch (const ClmError& e) {
        throw PairFailure("class pair (" + ds.label_names()[a] + ", " +
                              ds.label_names()[b] + "): " + e.what(),
                          a, b);
      }
    }
  }

  switch (cfg.aggregation) {
    case Aggregation::mean: {
      ExactSum acc;
      for (const PairScore& p : out.pairs) acc.add(p.contribution);
      out.value = acc.value() / static_cast<double>(out.pairs.size());
      break;
    }
    case Aggregation::min: {
      double v = out.pairs.front().contribution;
      for (const PairScore& p : out.pairs) v = std::min(v, p.contribution);
      out.value = v;
      break;
    }
    case Aggregation::max: {
      double v = out.pairs.front().contribution;
      for (const PairScore& p : out.pairs) v = std::max(v, p.contribution);
      out.value = v;
      break;
    }
  }
  return out;
}

}  // namespace clmkit::btw
