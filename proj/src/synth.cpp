#include "clmkit/synth.hpp"

#include <cmath>
#include <numbers>

#include "clmkit/errors.hpp"
#include "clmkit/rng.hpp"

namespace clmkit::synth {

namespace {

constexpr std::uint64_t kBaseTag = 0x62617365;
constexpr std::uint64_t kNoiseTag = 0x6e6f6973;
constexpr std::uint64_t kParamTag = 0x7061726d;

struct Chol2 {
  double l11, l21, l22;
};

Chol2 cholesky(const Sym2& s) {
  const double l11 = std::sqrt(s.xx);
  const double l21 = s.xy / l11;
  const double l22 = std::sqrt(s.yy - l21 * l21);
  return {l11, l21, l22};
}

Sym2 from_eigen(double lambda1, double lambda2, double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {c * c * lambda1 + s * s * lambda2, c * s * (lambda1 - lambda2),
          s * s * lambda1 + c * c * lambda2};
}

// Population covariance of the class's first two columns.
Sym2 sample_cov(const Dataset& ds, const std::vector<std::size_t>& members) {
  double mx = 0.0, my = 0.0;
  for (std::size_t idx : members) {
    mx += ds.points()(idx, 0);
    my += ds.points()(idx, 1);
  }
  const auto n = static_cast<double>(members.size());
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t idx : members) {
    const double dx = ds.points()(idx, 0) - mx;
    const double dy = ds.points()(idx, 1) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  return {sxx / n, sxy / n, syy / n};
}

}  // namespace

bool Sym2::positive_definite() const {
  return xx > 0.0 && xx * yy - xy * xy > 0.0;
}

double Sym2::min_eigenvalue() const {
  const double half_trace = 0.5 * (xx + yy);
  const double radius = std::sqrt(0.25 * (xx - yy) * (xx - yy) + xy * xy);
  return half_trace - radius;
}

double Sym2::min_diagonal() const { return std::min(xx, yy); }

Dataset generate_base(const GaussianPairParams& params, std::size_t n) {
  if (!params.cov_a.positive_definite() || !params.cov_b.positive_definite())
    throw InvalidArgument("covariance matrices must be positive-definite");
  if (!(params.proportion > 0.0) || !(params.proportion < 1.0))
    throw InvalidArgument("class proportion must lie in (0, 1)");
  if (!(params.separation >= 0.0))
    throw InvalidArgument("separation must be non-negative");
  if (n < 2) throw InvalidArgument("need at least 2 points");

  auto n_a = static_cast<std::size_t>(
      std::llround(params.proportion * static_cast<double>(n)));
  n_a = std::max<std::size_t>(1, std::min(n_a, n - 1));
  const std::size_t n_b = n - n_a;

  rng::Stream stream(rng::mix(params.seed, kBaseTag));
  const double angle = stream.uniform(0.0, 2.0 * std::numbers::pi);
  const double ux = std::cos(angle);
  const double uy = std::sin(angle);
  const double half = 0.5 * params.separation;

  const Chol2 la = cholesky(params.cov_a);
  const Chol2 lb = cholesky(params.cov_b);

  Matrix pts(n, 2);
  std::vector<int> ids(n, 0);
  for (std::size_t r = 0; r < n_a; ++r) {
    const double z1 = stream.gauss();
    const double z2 = stream.gauss();
    pts(r, 0) = -half * ux + la.l11 * z1;
    pts(r, 1) = -half * uy + la.l21 * z1 + la.l22 * z2;
  }
  for (std::size_t r = n_a; r < n; ++r) {
    const double z1 = stream.gauss();
    const double z2 = stream.gauss();
    pts(r, 0) = half * ux + lb.l11 * z1;
    pts(r, 1) = half * uy + lb.l21 * z1 + lb.l22 * z2;
    ids[r] = 1;
  }
  (void)n_b;
  return Dataset(std::move(pts), std::move(ids), {"A", "B"});
}

Dataset augment_noise(const Dataset& ds, std::size_t target_dims,
                      std::uint64_t seed, SpanRule rule) {
  if (target_dims < 2) throw InvalidArgument("target dimension must be >= 2");
  if (ds.dims() != 2)
    throw InvalidArgument("noise augmentation expects a 2-D dataset");
  if (target_dims == ds.dims()) return ds;

  const Partition part = Partition::from_labels(ds);
  std::vector<double> sd(part.n_groups());
  for (std::size_t g = 0; g < part.n_groups(); ++g) {
    const Sym2 cov = sample_cov(ds, part.group(g));
    const double span = rule == SpanRule::min_eigenvalue ? cov.min_eigenvalue()
                                                         : cov.min_diagonal();
    sd[g] = std::sqrt(std::max(0.0, span));
  }

  rng::Stream stream(rng::mix(seed, kNoiseTag));
  Matrix pts(ds.size(), target_dims);
  for (std::size_t r = 0; r < ds.size(); ++r) {
    pts(r, 0) = ds.points()(r, 0);
    pts(r, 1) = ds.points()(r, 1);
    const double s = sd[static_cast<std::size_t>(ds.labels()[r])];
    for (std::size_t c = 2; c < target_dims; ++c) pts(r, c) = s * stream.gauss();
  }
  return Dataset(std::move(pts), ds.labels(), ds.label_names());
}

Dataset make_instance(const Dataset& base, const InstanceSpec& spec,
                      std::uint64_t seed) {
  if (spec.n_dims < 2) throw InvalidArgument("instance dimension must be >= 2");
  if (spec.n_dims > base.dims())
    throw InvalidArgument("instance dimension exceeds base dimension");
  if (spec.n_points < 2 || spec.n_points > base.size())
    throw InvalidArgument("instance size must lie in [2, base size]");

  const double alpha = spec.n_points == base.size()
                           ? 1.0
                           : static_cast<double>(spec.n_points) /
                                 static_cast<double>(base.size());
  Dataset sampled = subsample(base, alpha, seed);
  if (spec.n_dims == base.dims()) return sampled;
  Matrix pts = take_columns(sampled.points(), spec.n_dims);
  return Dataset(std::move(pts), sampled.labels(), sampled.label_names());
}

GaussianPairParams random_pair_params(std::uint64_t seed,
                                      const ParamRanges& ranges) {
  rng::Stream stream(rng::mix(seed, kParamTag));
  GaussianPairParams p;
  p.cov_a = from_eigen(stream.uniform(ranges.eig_lo, ranges.eig_hi),
                       stream.uniform(ranges.eig_lo, ranges.eig_hi),
                       stream.uniform(0.0, std::numbers::pi));
  p.cov_b = from_eigen(stream.uniform(ranges.eig_lo, ranges.eig_hi),
                       stream.uniform(ranges.eig_lo, ranges.eig_hi),
                       stream.uniform(0.0, std::numbers::pi));
  p.proportion = stream.uniform(ranges.prop_lo, ranges.prop_hi);
  p.separation = stream.uniform(ranges.sep_lo, ranges.sep_hi);
  p.seed = seed;
  return p;
}

}  // namespace clmkit::synth
