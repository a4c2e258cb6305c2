#include "clmkit/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "clmkit/errors.hpp"
#include "clmkit/numeric.hpp"
#include "clmkit/rng.hpp"

namespace clmkit {

namespace {

std::vector<std::string> default_feature_names(std::size_t n) {
  std::vector<std::string> names(n);
  for (std::size_t i = 0; i < n; ++i) names[i] = "f" + std::to_string(i);
  return names;
}

}  // namespace

Dataset::Dataset(Matrix points, std::vector<int> label_ids,
                 std::vector<std::string> label_names,
                 std::vector<std::string> feature_names,
                 std::string label_column_name)
    : points_(std::move(points)),
      label_ids_(std::move(label_ids)),
      label_names_(std::move(label_names)),
      feature_names_(std::move(feature_names)),
      label_column_name_(std::move(label_column_name)) {
  if (points_.rows() < 2) throw InvalidDataset("dataset needs at least 2 points");
  if (points_.cols() < 1) throw InvalidDataset("dataset needs at least 1 feature");
  if (label_ids_.size() != points_.rows())
    throw InvalidDataset("label count does not match point count");
  if (label_names_.empty()) throw InvalidDataset("dataset has no classes");
  std::vector<char> seen(label_names_.size(), 0);
  for (int id : label_ids_) {
    if (id < 0 || static_cast<std::size_t>(id) >= label_names_.size())
      throw InvalidDataset("label id out of range");
    seen[static_cast<std::size_t>(id)] = 1;
  }
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (!seen[i])
      throw InvalidDataset("class '" + label_names_[i] + "' has no points");
  for (double v : points_.data())
    if (!std::isfinite(v)) throw InvalidDataset("non-finite feature value");
  if (feature_names_.empty())
    feature_names_ = default_feature_names(points_.cols());
  if (feature_names_.size() != points_.cols())
    throw InvalidDataset("feature name count does not match dimension");
}

Dataset Dataset::from_labels(Matrix points, const std::vector<std::string>& labels,
                             std::vector<std::string> feature_names,
                             std::string label_column_name) {
  std::vector<int> ids(labels.size());
  std::vector<std::string> names;
  std::unordered_map<std::string, int> table;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto [it, inserted] = table.emplace(labels[i], static_cast<int>(names.size()));
    if (inserted) names.push_back(labels[i]);
    ids[i] = it->second;
  }
  return Dataset(std::move(points), std::move(ids), std::move(names),
                 std::move(feature_names), std::move(label_column_name));
}

Partition::Partition(std::vector<std::vector<std::size_t>> groups,
                     std::size_t n_points)
    : groups_(std::move(groups)), n_points_(n_points) {
  if (groups_.empty()) throw InvalidPartition("partition has no groups");
  std::vector<char> seen(n_points_, 0);
  std::size_t covered = 0;
  for (const auto& g : groups_) {
    if (g.empty()) throw InvalidPartition("partition has an empty group");
    for (std::size_t idx : g) {
      if (idx >= n_points_) throw InvalidPartition("point index out of range");
      if (seen[idx]) throw InvalidPartition("groups are not disjoint");
      seen[idx] = 1;
      ++covered;
    }
  }
  if (covered != n_points_)
    throw InvalidPartition("groups do not cover every point");
}

Partition Partition::from_labels(const Dataset& ds) {
  std::vector<std::vector<std::size_t>> groups(ds.n_classes());
  const auto& ids = ds.labels();
  for (std::size_t i = 0; i < ids.size(); ++i)
    groups[static_cast<std::size_t>(ids[i])].push_back(i);
  return Partition(std::move(groups), ds.size());
}

Partition Partition::from_assignments(std::span<const int> assignments,
                                      int n_groups) {
  if (n_groups < 1) throw InvalidPartition("need at least one group");
  std::vector<std::vector<std::size_t>> groups(static_cast<std::size_t>(n_groups));
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    const int g = assignments[i];
    if (g < 0 || g >= n_groups)
      throw InvalidPartition("assignment id out of range");
    groups[static_cast<std::size_t>(g)].push_back(i);
  }
  return Partition(std::move(groups), assignments.size());
}

DistanceView::DistanceView(double scale, double shift)
    : scale_(scale), shift_(shift) {
  if (!(scale > 0.0)) throw InvalidArgument("distance scale must be positive");
  if (!(shift >= 0.0)) throw InvalidArgument("distance shift must be non-negative");
}

double euclidean(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

double DistanceView::operator()(std::span<const double> a,
                                std::span<const double> b) const {
  const double e = euclidean(a, b);
  return e == 0.0 ? 0.0 : scale_ * e + shift_;
}

CentroidStats centroid_stats(const Dataset& ds, const Partition& part,
                             const DistanceView& dv) {
  if (part.size() != ds.size())
    throw InvalidPartition("partition does not match dataset size");
  const Matrix& pts = ds.points();
  const std::size_t dim = ds.dims();

  CentroidStats out;
  out.class_centroids = Matrix(part.n_groups(), dim);
  out.global_centroid.assign(dim, 0.0);

  std::vector<ExactSum> acc(dim);
  for (std::size_t g = 0; g < part.n_groups(); ++g) {
    for (auto& a : acc) a.clear();
    for (std::size_t idx : part.group(g)) {
      auto row = pts.row(idx);
      for (std::size_t c = 0; c < dim; ++c) acc[c].add(row[c]);
    }
    const auto n = static_cast<double>(part.group(g).size());
    for (std::size_t c = 0; c < dim; ++c)
      out.class_centroids(g, c) = acc[c].value() / n;
  }

  for (auto& a : acc) a.clear();
  for (std::size_t r = 0; r < pts.rows(); ++r) {
    auto row = pts.row(r);
    for (std::size_t c = 0; c < dim; ++c) acc[c].add(row[c]);
  }
  for (std::size_t c = 0; c < dim; ++c)
    out.global_centroid[c] = acc[c].value() / static_cast<double>(pts.rows());

  std::vector<double> dist(pts.rows());
  for (std::size_t r = 0; r < pts.rows(); ++r)
    dist[r] = dv(pts.row(r), out.global_centroid);
  const MeanSd ms = population_mean_sd(dist);
  out.sigma_d = ms.sd;
  if (!(ms.mean > 0.0) || ms.sd < kEpsGeom * ms.mean)
    throw DegenerateGeometry(
        "distances to the global centroid have no usable spread");
  return out;
}

Dataset subsample(const Dataset& ds, double alpha, std::uint64_t seed) {
  if (!(alpha > 0.0) || alpha > 1.0)
    throw InvalidArgument("subsample fraction must be in (0, 1]");
  const Partition part = Partition::from_labels(ds);

  std::vector<std::size_t> keep;
  for (std::size_t g = 0; g < part.n_groups(); ++g) {
    const auto& members = part.group(g);
    const auto want = static_cast<std::size_t>(
        std::ceil(alpha * static_cast<double>(members.size())));
    const std::size_t m = std::max<std::size_t>(1, std::min(want, members.size()));
    rng::Stream stream(rng::mix(seed, g));
    auto picked = stream.sample_without_replacement(members.size(), m);
    for (std::size_t p : picked) keep.push_back(members[p]);
  }
  std::sort(keep.begin(), keep.end());  // keep original row order

  Matrix pts = select_rows(ds.points(), keep);
  std::vector<int> ids(keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i) ids[i] = ds.labels()[keep[i]];
  return Dataset(std::move(pts), std::move(ids), ds.label_names(),
                 ds.feature_names(), ds.label_column_name());
}

std::pair<Dataset, Partition> pair_restriction(const Dataset& ds,
                                               const Partition& part,
                                               std::size_t a, std::size_t b) {
  if (a >= part.n_groups() || b >= part.n_groups() || a == b)
    throw InvalidArgument("invalid class pair");
  const auto& ga = part.group(a);
  const auto& gb = part.group(b);
  std::vector<std::size_t> rows;
  rows.reserve(ga.size() + gb.size());
  rows.insert(rows.end(), ga.begin(), ga.end());
  rows.insert(rows.end(), gb.begin(), gb.end());

  Matrix pts = select_rows(ds.points(), rows);
  std::vector<int> ids(rows.size(), 0);
  for (std::size_t i = ga.size(); i < rows.size(); ++i) ids[i] = 1;
  Dataset sub(std::move(pts), std::move(ids),
              {ds.label_names()[a], ds.label_names()[b]}, ds.feature_names(),
              ds.label_column_name());
  Partition sub_part = Partition::from_labels(sub);
  return {std::move(sub), std::move(sub_part)};
}

double mean_pairwise_distance(const Dataset& ds, const DistanceView& dv) {
  const Matrix& pts = ds.points();
  const std::size_t n = pts.rows();
  ExactSum total;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) total.add(dv(pts.row(i), pts.row(j)));
  const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  return total.value() / pairs;
}

}  // namespace clmkit
