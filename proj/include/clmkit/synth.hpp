#pragma once

#include <cstdint>

#include "clmkit/dataset.hpp"

namespace clmkit::synth {

/// Symmetric 2x2 matrix (covariance of one Gaussian class).
struct Sym2 {
  double xx = 1.0;
  double xy = 0.0;
  double yy = 1.0;

  bool positive_definite() const;
  double min_eigenvalue() const;
  double min_diagonal() const;
};

/// The eight independent parameters of a two-Gaussian base dataset: two
/// covariances (3 each), the class proportion, and the distance between the
/// Gaussian means. The separation direction is a random unit vector drawn
/// from the seed.
struct GaussianPairParams {
  Sym2 cov_a;
  Sym2 cov_b;
  double proportion = 0.5;  // fraction of points in class A, in (0, 1)
  double separation = 0.0;  // distance between the two means, >= 0
  std::uint64_t seed = 0;
};

/// How "minimum span of a covariance" is read when sizing noise dimensions.
enum class SpanRule { min_eigenvalue, min_diagonal };

/// Samples round(proportion * n) points from Gaussian A and the rest from B,
/// means placed +-separation/2 along a random direction. Rows are the A
/// block then the B block; labels "A" / "B". Bit-identical for equal params.
Dataset generate_base(const GaussianPairParams& params, std::size_t n = 10000);

/// Appends target_dims - 2 columns of Gaussian noise, zero mean, variance
/// equal to the span (per `rule`) of the point's class sample covariance in
/// the first two columns. The original two columns are untouched.
Dataset augment_noise(const Dataset& ds, std::size_t target_dims,
                      std::uint64_t seed,
                      SpanRule rule = SpanRule::min_eigenvalue);

/// One synthetic instance: which base, how many points, how many dimensions.
/// The first two dimensions are always the cluster plane.
struct InstanceSpec {
  std::size_t base_index = 0;
  std::size_t n_points = 0;  // N_t
  std::size_t n_dims = 2;    // Delta_t >= 2
};

/// Class-proportional subsample of spec.n_points rows projected to the first
/// spec.n_dims columns.
Dataset make_instance(const Dataset& base, const InstanceSpec& spec,
                      std::uint64_t seed);

/// Ranges for drawing randomized base parameters (covariance eigenvalues,
/// class proportion, mean separation).
struct ParamRanges {
  double eig_lo = 0.5;
  double eig_hi = 4.0;
  double prop_lo = 0.2;
  double prop_hi = 0.8;
  double sep_lo = 0.0;
  double sep_hi = 12.0;
};

/// Draws one parameter set: covariances from random eigenvalues and rotation,
/// proportion and separation uniform in their ranges. The returned params
/// carry `seed` so the base itself is reproducible.
GaussianPairParams random_pair_params(std::uint64_t seed,
                                      const ParamRanges& ranges = {});

}  // namespace clmkit::synth
