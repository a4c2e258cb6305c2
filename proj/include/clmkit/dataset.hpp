#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "clmkit/matrix.hpp"

namespace clmkit {

/// A labeled numeric dataset: |X| points of dimension Δ plus one class label
/// per point. Immutable after construction; at least 2 points, at least 1
/// feature, and every class id in [0, n_classes) occurs at least once.
class Dataset {
 public:
  /// `label_ids` must already be compact (0..k-1); `label_names[i]` names
  /// class i. Feature names default to f0..f{Δ-1}.
  Dataset(Matrix points, std::vector<int> label_ids,
          std::vector<std::string> label_names,
          std::vector<std::string> feature_names = {},
          std::string label_column_name = "label");

  /// Builds the class table from raw string labels, ids assigned in order of
  /// first appearance.
  static Dataset from_labels(Matrix points, const std::vector<std::string>& labels,
                             std::vector<std::string> feature_names = {},
                             std::string label_column_name = "label");

  const Matrix& points() const { return points_; }
  const std::vector<int>& labels() const { return label_ids_; }
  const std::vector<std::string>& label_names() const { return label_names_; }
  const std::vector<std::string>& feature_names() const { return feature_names_; }
  const std::string& label_column_name() const { return label_column_name_; }

  std::size_t size() const { return points_.rows(); }   // |X|
  std::size_t dims() const { return points_.cols(); }   // Δ_X
  std::size_t n_classes() const { return label_names_.size(); }

 private:
  Matrix points_;
  std::vector<int> label_ids_;
  std::vector<std::string> label_names_;
  std::vector<std::string> feature_names_;
  std::string label_column_name_;
};

/// Disjoint groups of point indices covering {0..n-1}; every group non-empty.
/// Group order and the order of indices inside a group are preserved as
/// given; no score depends on either.
class Partition {
 public:
  Partition(std::vector<std::vector<std::size_t>> groups, std::size_t n_points);

  /// One group per dataset class, members in row order.
  static Partition from_labels(const Dataset& ds);

  /// assignments[i] in [0, n_groups); every group must end up non-empty.
  static Partition from_assignments(std::span<const int> assignments,
                                    int n_groups);

  std::size_t n_groups() const { return groups_.size(); }  // |C|
  std::size_t size() const { return n_points_; }           // |X|
  const std::vector<std::size_t>& group(std::size_t i) const { return groups_[i]; }
  const std::vector<std::vector<std::size_t>>& groups() const { return groups_; }

 private:
  std::vector<std::vector<std::size_t>> groups_;
  std::size_t n_points_;
};

/// Euclidean distance evaluator with the two axiom-testing transforms:
/// evaluated distance is alpha * d_eucl + beta for distinct points and 0 for
/// coincident ones, so the result stays symmetric, non-negative, and zero on
/// the diagonal for any (alpha, beta).
class DistanceView {
 public:
  DistanceView() = default;
  DistanceView(double scale, double shift);  // scale > 0, shift >= 0

  double scale() const { return scale_; }
  double shift() const { return shift_; }

  double operator()(std::span<const double> a, std::span<const double> b) const;

 private:
  double scale_ = 1.0;
  double shift_ = 0.0;
};

double euclidean(std::span<const double> a, std::span<const double> b);

/// Per-class centroids, the global centroid, and sigma_d: the population
/// standard deviation of the evaluated distances from every point to the
/// global centroid. sigma_d is invariant under the shift transform and scales
/// linearly with the scale transform.
struct CentroidStats {
  Matrix class_centroids;              // |C| x Δ
  std::vector<double> global_centroid; // Δ
  double sigma_d = 0.0;
};

/// Relative floor under sigma_d and other normalizers.
inline constexpr double kEpsGeom = 1e-12;

CentroidStats centroid_stats(const Dataset& ds, const Partition& part,
                             const DistanceView& dv);

/// Draws ceil(alpha * |C_i|) points uniformly without replacement from each
/// class independently; surviving rows keep their original order.
/// Deterministic for a fixed seed.
Dataset subsample(const Dataset& ds, double alpha, std::uint64_t seed);

/// Restriction of (ds, part) to the points of groups `a` and `b`: rows of
/// group a first, then group b, each in stored group order.
std::pair<Dataset, Partition> pair_restriction(const Dataset& ds,
                                               const Partition& part,
                                               std::size_t a, std::size_t b);

/// Mean evaluated distance over all unordered point pairs (mu_d).
double mean_pairwise_distance(const Dataset& ds, const DistanceView& dv);

}  // namespace clmkit
