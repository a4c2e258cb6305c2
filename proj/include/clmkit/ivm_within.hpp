#pragma once

#include <optional>
#include <string_view>

#include "clmkit/dataset.hpp"

namespace clmkit::ivm {

enum class Direction { max_is_better, min_is_better };

struct IvmScore {
  double value = 0.0;
  Direction direction = Direction::max_is_better;
};

enum class WithinKind {
  calinski_harabasz,
  silhouette,
  davies_bouldin,
  dunn,
  xie_beni,
  i_index,
};

std::optional<WithinKind> within_kind_from_name(std::string_view name);
std::string_view within_kind_name(WithinKind kind);
Direction within_direction(WithinKind kind);

/// Ratio of between-class to within-class squared scatter, both per degree of
/// freedom. Requires |X| > |C| >= 2; throws DegenerateGeometry when the
/// within-class scatter vanishes.
IvmScore calinski_harabasz(const Dataset& ds, const Partition& part,
                           const DistanceView& dv);

/// Mean over points of (b - a) / max(a, b) with a the mean intra-class
/// distance (self excluded) and b the smallest mean distance to another
/// class. Every class must have at least 2 members.
IvmScore silhouette(const Dataset& ds, const Partition& part,
                    const DistanceView& dv);

IvmScore davies_bouldin(const Dataset& ds, const Partition& part,
                        const DistanceView& dv);

IvmScore dunn(const Dataset& ds, const Partition& part, const DistanceView& dv);

IvmScore xie_beni(const Dataset& ds, const Partition& part,
                  const DistanceView& dv);

/// Note: not scale invariant; value(alpha * d) = alpha^p * value(d) because
/// the max centroid-distance factor carries the scale while the two sums
/// cancel it.
IvmScore i_index(const Dataset& ds, const Partition& part,
                 const DistanceView& dv, double p = 2.0);

IvmScore score_within(WithinKind kind, const Dataset& ds, const Partition& part,
                      const DistanceView& dv);

}  // namespace clmkit::ivm
