#include "clmkit/ivm_within.hpp"

#include <cmath>
#include <limits>

#include "clmkit/errors.hpp"
#include "clmkit/numeric.hpp"

namespace clmkit::ivm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Class centroids only; the global centroid and sigma_d of centroid_stats are
// not needed by every measure and sigma_d legitimately degenerates on data
// these measures must still score (e.g. all points equidistant from c).
Matrix class_centroids(const Dataset& ds, const Partition& part) {
  const std::size_t dim = ds.dims();
  Matrix cent(part.n_groups(), dim);
  std::vector<ExactSum> acc(dim);
  for (std::size_t g = 0; g < part.n_groups(); ++g) {
    for (auto& a : acc) a.clear();
    for (std::size_t idx : part.group(g)) {
      auto row = ds.points().row(idx);
      for (std::size_t c = 0; c < dim; ++c) acc[c].add(row[c]);
    }
    const auto n = static_cast<double>(part.group(g).size());
    for (std::size_t c = 0; c < dim; ++c) cent(g, c) = acc[c].value() / n;
  }
  return cent;
}

std::vector<double> global_centroid(const Dataset& ds) {
  const std::size_t dim = ds.dims();
  std::vector<ExactSum> acc(dim);
  for (std::size_t r = 0; r < ds.size(); ++r) {
    auto row = ds.points().row(r);
    for (std::size_t c = 0; c < dim; ++c) acc[c].add(row[c]);
  }
  std::vector<double> out(dim);
  for (std::size_t c = 0; c < dim; ++c)
    out[c] = acc[c].value() / static_cast<double>(ds.size());
  return out;
}

void require_scorable(const Partition& part) {
  if (part.n_groups() < 2)
    throw DegenerateInput("scoring needs at least 2 classes");
}

}  // namespace

std::optional<WithinKind> within_kind_from_name(std::string_view name) {
  if (name == "ch" || name == "calinski-harabasz") return WithinKind::calinski_harabasz;
  if (name == "silhouette") return WithinKind::silhouette;
  if (name == "db" || name == "davies-bouldin") return WithinKind::davies_bouldin;
  if (name == "dunn") return WithinKind::dunn;
  if (name == "xb" || name == "xie-beni") return WithinKind::xie_beni;
  if (name == "i-index") return WithinKind::i_index;
  return std::nullopt;
}

std::string_view within_kind_name(WithinKind kind) {
  switch (kind) {
    case WithinKind::calinski_harabasz: return "ch";
    case WithinKind::silhouette: return "silhouette";
    case WithinKind::davies_bouldin: return "davies-bouldin";
    case WithinKind::dunn: return "dunn";
    case WithinKind::xie_beni: return "xie-beni";
    case WithinKind::i_index: return "i-index";
  }
  return "?";
}

Direction within_direction(WithinKind kind) {
  switch (kind) {
    case WithinKind::davies_bouldin:
    case WithinKind::xie_beni:
      return Direction::min_is_better;
    default:
      return Direction::max_is_better;
  }
}

IvmScore calinski_harabasz(const Dataset& ds, const Partition& part,
                           const DistanceView& dv) {
  require_scorable(part);
  if (ds.size() <= part.n_groups())
    throw DegenerateInput("|X| must exceed |C|");

  const Matrix cent = class_centroids(ds, part);
  const std::vector<double> global = global_centroid(ds);

  ExactSum between;
  for (std::size_t g = 0; g < part.n_groups(); ++g) {
    const double d = dv(cent.row(g), global);
    between.add(static_cast<double>(part.group(g).size()) * d * d);
  }
  ExactSum within;
  for (std::size_t g = 0; g < part.n_groups(); ++g)
    for (std::size_t idx : part.group(g)) {
      const double d = dv(ds.points().row(idx), cent.row(g));
      within.add(d * d);
    }

  const auto k = static_cast<double>(part.n_groups());
  const auto n = static_cast<double>(ds.size());
  const double denom = within.value() / (n - k);
  if (denom == 0.0)
    throw DegenerateGeometry("zero within-cluster scatter");
  const double numer = between.value() / (k - 1.0);
  return {numer / denom, Direction::max_is_better};
}

IvmScore silhouette(const Dataset& ds, const Partition& part,
                    const DistanceView& dv) {
  require_scorable(part);
  for (std::size_t g = 0; g < part.n_groups(); ++g)
    if (part.group(g).size() < 2)
      throw DegenerateInput("silhouette needs every class size >= 2");

  // class id per point, for the intra/inter split below
  std::vector<std::size_t> cls(ds.size());
  for (std::size_t g = 0; g < part.n_groups(); ++g)
    for (std::size_t idx : part.group(g)) cls[idx] = g;

  ExactSum total;
  for (std::size_t g = 0; g < part.n_groups(); ++g) {
    for (std::size_t idx : part.group(g)) {
      auto x = ds.points().row(idx);
      ExactSum intra;
      std::vector<ExactSum> inter(part.n_groups());
      for (std::size_t r = 0; r < ds.size(); ++r) {
        if (r == idx) continue;
        const double d = dv(x, ds.points().row(r));
        if (cls[r] == g) intra.add(d);
        else inter[cls[r]].add(d);
      }
      const double a = intra.value() /
                       static_cast<double>(part.group(g).size() - 1);
      double b = kInf;
      for (std::size_t h = 0; h < part.n_groups(); ++h) {
        if (h == g) continue;
        b = std::min(b, inter[h].value() /
                            static_cast<double>(part.group(h).size()));
      }
      const double m = std::max(a, b);
      total.add(m == 0.0 ? 0.0 : (b - a) / m);
    }
  }
  return {total.value() / static_cast<double>(ds.size()),
          Direction::max_is_better};
}

IvmScore davies_bouldin(const Dataset& ds, const Partition& part,
                        const DistanceView& dv) {
  require_scorable(part);
  const Matrix cent = class_centroids(ds, part);
  const std::size_t k = part.n_groups();

  std::vector<double> spread(k);  // s_k: mean distance of members to centroid
  for (std::size_t g = 0; g < k; ++g) {
    ExactSum s;
    for (std::size_t idx : part.group(g)) s.add(dv(ds.points().row(idx), cent.row(g)));
    spread[g] = s.value() / static_cast<double>(part.group(g).size());
  }

  ExactSum total;
  for (std::size_t i = 0; i < k; ++i) {
    double worst = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j) continue;
      const double sep = dv(cent.row(i), cent.row(j));
      if (sep == 0.0) throw DegenerateGeometry("coincident centroids");
      worst = std::max(worst, (spread[i] + spread[j]) / sep);
    }
    total.add(worst);
  }
  return {total.value() / static_cast<double>(k), Direction::min_is_better};
}

IvmScore dunn(const Dataset& ds, const Partition& part, const DistanceView& dv) {
  require_scorable(part);
  std::vector<std::size_t> cls(ds.size());
  for (std::size_t g = 0; g < part.n_groups(); ++g)
    for (std::size_t idx : part.group(g)) cls[idx] = g;

  double min_inter = kInf;
  double max_diam = 0.0;
  for (std::size_t i = 0; i < ds.size(); ++i)
    for (std::size_t j = i + 1; j < ds.size(); ++j) {
      const double d = dv(ds.points().row(i), ds.points().row(j));
      if (cls[i] == cls[j]) max_diam = std::max(max_diam, d);
      else min_inter = std::min(min_inter, d);
    }
  if (max_diam == 0.0)
    throw DegenerateGeometry("every cluster has zero diameter");
  return {min_inter / max_diam, Direction::max_is_better};
}

IvmScore xie_beni(const Dataset& ds, const Partition& part,
                  const DistanceView& dv) {
  require_scorable(part);
  const Matrix cent = class_centroids(ds, part);

  ExactSum within;
  for (std::size_t g = 0; g < part.n_groups(); ++g)
    for (std::size_t idx : part.group(g)) {
      const double d = dv(ds.points().row(idx), cent.row(g));
      within.add(d * d);
    }
  double min_sep = kInf;
  for (std::size_t i = 0; i < part.n_groups(); ++i)
    for (std::size_t j = i + 1; j < part.n_groups(); ++j)
      min_sep = std::min(min_sep, dv(cent.row(i), cent.row(j)));
  if (min_sep == 0.0) throw DegenerateGeometry("coincident centroids");
  return {within.value() /
              (static_cast<double>(ds.size()) * min_sep * min_sep),
          Direction::min_is_better};
}

IvmScore i_index(const Dataset& ds, const Partition& part,
                 const DistanceView& dv, double p) {
  require_scorable(part);
  const Matrix cent = class_centroids(ds, part);
  const std::vector<double> global = global_centroid(ds);

  ExactSum to_global;
  for (std::size_t r = 0; r < ds.size(); ++r)
    to_global.add(dv(ds.points().row(r), global));
  ExactSum to_own;
  for (std::size_t g = 0; g < part.n_groups(); ++g)
    for (std::size_t idx : part.group(g))
      to_own.add(dv(ds.points().row(idx), cent.row(g)));
  if (to_own.value() == 0.0)
    throw DegenerateGeometry("zero within-cluster scatter");

  double max_sep = 0.0;
  for (std::size_t i = 0; i < part.n_groups(); ++i)
    for (std::size_t j = i + 1; j < part.n_groups(); ++j)
      max_sep = std::max(max_sep, dv(cent.row(i), cent.row(j)));

  const double base = (1.0 / static_cast<double>(part.n_groups())) *
                      (to_global.value() / to_own.value()) * max_sep;
  return {std::pow(base, p), Direction::max_is_better};
}

IvmScore score_within(WithinKind kind, const Dataset& ds, const Partition& part,
                      const DistanceView& dv) {
  switch (kind) {
    case WithinKind::calinski_harabasz: return calinski_harabasz(ds, part, dv);
    case WithinKind::silhouette: return silhouette(ds, part, dv);
    case WithinKind::davies_bouldin: return davies_bouldin(ds, part, dv);
    case WithinKind::dunn: return dunn(ds, part, dv);
    case WithinKind::xie_beni: return xie_beni(ds, part, dv);
    case WithinKind::i_index: return i_index(ds, part, dv);
  }
  throw InvalidArgument("unknown measure");
}

}  // namespace clmkit::ivm
