#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "clmkit/dataset.hpp"
#include "clmkit/errors.hpp"
#include "clmkit/ivm_within.hpp"
#include "clmkit/rng.hpp"

using namespace clmkit;
using namespace clmkit::ivm;

namespace {

Dataset make_d4(double b_offset = 10.0) {
  Matrix pts(4, 2);
  pts(0, 0) = 0;        pts(0, 1) = 0;
  pts(1, 0) = 0;        pts(1, 1) = 1;
  pts(2, 0) = b_offset; pts(2, 1) = 0;
  pts(3, 0) = b_offset; pts(3, 1) = 1;
  return Dataset(std::move(pts), {0, 0, 1, 1}, {"A", "B"});
}

Dataset random_blobs(std::size_t per_class, std::size_t classes,
                     std::size_t dims, double spread, std::uint64_t seed) {
  rng::Stream s(seed);
  Matrix pts(per_class * classes, dims);
  std::vector<int> ids(per_class * classes);
  std::vector<std::string> names;
  for (std::size_t k = 0; k < classes; ++k)
    names.push_back("c" + std::to_string(k));
  std::vector<double> center(dims);
  for (std::size_t k = 0; k < classes; ++k) {
    for (auto& c : center) c = s.uniform(-spread, spread);
    for (std::size_t i = 0; i < per_class; ++i) {
      const std::size_t r = k * per_class + i;
      for (std::size_t c = 0; c < dims; ++c) pts(r, c) = s.gauss(center[c], 1.0);
      ids[r] = static_cast<int>(k);
    }
  }
  return Dataset(std::move(pts), std::move(ids), std::move(names));
}

// Row permutation plus class relabeling; group order inside the permuted
// partition comes from scanning rows, so nothing lines up trivially.
Dataset permuted_copy(const Dataset& ds, std::uint64_t seed) {
  rng::Stream s(seed);
  std::vector<std::size_t> perm(ds.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  s.shuffle(perm);
  std::vector<int> relabel(ds.n_classes());
  for (std::size_t i = 0; i < relabel.size(); ++i) relabel[i] = static_cast<int>(i);
  s.shuffle(relabel);

  Matrix pts(ds.size(), ds.dims());
  std::vector<int> ids(ds.size());
  std::vector<std::string> names(ds.n_classes());
  for (std::size_t k = 0; k < ds.n_classes(); ++k)
    names[static_cast<std::size_t>(relabel[k])] = ds.label_names()[k];
  for (std::size_t r = 0; r < ds.size(); ++r) {
    for (std::size_t c = 0; c < ds.dims(); ++c) pts(perm[r], c) = ds.points()(r, c);
    ids[perm[r]] = relabel[static_cast<std::size_t>(ds.labels()[r])];
  }
  return Dataset(std::move(pts), std::move(ids), std::move(names));
}

double score_of(WithinKind kind, const Dataset& ds, const DistanceView& dv) {
  return score_within(kind, ds, Partition::from_labels(ds), dv).value;
}

constexpr WithinKind kAll[] = {
    WithinKind::calinski_harabasz, WithinKind::silhouette,
    WithinKind::davies_bouldin,    WithinKind::dunn,
    WithinKind::xie_beni,          WithinKind::i_index,
};

}  // namespace

TEST_CASE("D4 hand values") {
  const Dataset d4 = make_d4();
  const Partition part = Partition::from_labels(d4);
  const DistanceView dv;
  CHECK(calinski_harabasz(d4, part, dv).value == doctest::Approx(200.0).epsilon(1e-12));
  CHECK(dunn(d4, part, dv).value == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(xie_beni(d4, part, dv).value == doctest::Approx(0.0025).epsilon(1e-12));
  CHECK(davies_bouldin(d4, part, dv).value == doctest::Approx(0.1).epsilon(1e-12));
  // a = 1, b = (10 + sqrt(101)) / 2 for every point by symmetry
  const double b = (10.0 + std::sqrt(101.0)) / 2.0;
  CHECK(silhouette(d4, part, dv).value ==
        doctest::Approx((b - 1.0) / b).epsilon(1e-9));
  CHECK(silhouette(d4, part, dv).value == doctest::Approx(0.9002).epsilon(1e-4));
  // ((1/2) * (4 sqrt(25.25) / 2) * 10)^2 = 100 * 25.25
  CHECK(i_index(d4, part, dv).value == doctest::Approx(2525.0).epsilon(1e-3));
}

TEST_CASE("directions") {
  CHECK(within_direction(WithinKind::calinski_harabasz) == Direction::max_is_better);
  CHECK(within_direction(WithinKind::silhouette) == Direction::max_is_better);
  CHECK(within_direction(WithinKind::dunn) == Direction::max_is_better);
  CHECK(within_direction(WithinKind::i_index) == Direction::max_is_better);
  CHECK(within_direction(WithinKind::davies_bouldin) == Direction::min_is_better);
  CHECK(within_direction(WithinKind::xie_beni) == Direction::min_is_better);
}

TEST_CASE("scale invariance to 1e-9 relative (I-index excluded)") {
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    const Dataset ds = random_blobs(20, 3, 4, 8.0, seed);
    for (double alpha : {0.1, 1.0, 7.3}) {
      const DistanceView dv(alpha, 0.0);
      for (WithinKind kind : kAll) {
        if (kind == WithinKind::i_index) continue;
        const double plain = score_of(kind, ds, DistanceView{});
        const double scaled = score_of(kind, ds, dv);
        CHECK(std::fabs(scaled - plain) <= 1e-9 * std::fabs(plain));
      }
    }
  }
}

TEST_CASE("i-index scales as alpha^p") {
  const Dataset ds = random_blobs(15, 2, 3, 6.0, 9);
  const Partition part = Partition::from_labels(ds);
  const double plain = i_index(ds, part, DistanceView{}).value;
  const double scaled = i_index(ds, part, DistanceView(2.0, 0.0)).value;
  CHECK(scaled == doctest::Approx(4.0 * plain).epsilon(1e-9));
  const double p1 = i_index(ds, part, DistanceView{}, 1.0).value;
  CHECK(p1 == doctest::Approx(std::sqrt(plain)).epsilon(1e-9));
}

TEST_CASE("isomorphism invariance is exact") {
  for (std::uint64_t seed : {4ULL, 5ULL}) {
    const Dataset ds = random_blobs(18, 3, 3, 7.0, seed);
    const Dataset moved = permuted_copy(ds, seed + 100);
    for (WithinKind kind : kAll) {
      const double a = score_of(kind, ds, DistanceView{});
      const double b = score_of(kind, moved, DistanceView{});
      CHECK(a == b);
    }
  }
}

TEST_CASE("plain CH is not shift invariant") {
  const Dataset d4 = make_d4();
  const Partition part = Partition::from_labels(d4);
  const double mu = mean_pairwise_distance(d4, DistanceView{});
  const double plain = calinski_harabasz(d4, part, DistanceView{}).value;
  const double shifted = calinski_harabasz(d4, part, DistanceView(1.0, mu)).value;
  CHECK(std::fabs(shifted - plain) / plain > 0.01);
}

TEST_CASE("separating classes further improves every score") {
  const Dataset near = make_d4(10.0);
  const Dataset far = make_d4(20.0);
  const DistanceView dv;
  for (WithinKind kind : kAll) {
    const double a = score_of(kind, near, dv);
    const double b = score_of(kind, far, dv);
    if (within_direction(kind) == Direction::max_is_better) CHECK(b > a);
    else CHECK(b < a);
  }
}

TEST_CASE("davies-bouldin halves when separation doubles") {
  const double near = score_of(WithinKind::davies_bouldin, make_d4(10.0), DistanceView{});
  const double far = score_of(WithinKind::davies_bouldin, make_d4(20.0), DistanceView{});
  CHECK(near == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(far == doctest::Approx(0.05).epsilon(1e-12));
}

TEST_CASE("silhouette is consistent under dataset duplication") {
  const Dataset ds = random_blobs(12, 2, 2, 5.0, 6);
  Matrix pts(ds.size() * 2, ds.dims());
  std::vector<int> ids(ds.size() * 2);
  for (std::size_t r = 0; r < ds.size(); ++r) {
    for (std::size_t c = 0; c < ds.dims(); ++c) {
      pts(2 * r, c) = ds.points()(r, c);
      pts(2 * r + 1, c) = ds.points()(r, c);
    }
    ids[2 * r] = ds.labels()[r];
    ids[2 * r + 1] = ds.labels()[r];
  }
  const Dataset doubled(std::move(pts), std::move(ids), ds.label_names());

  // Brute-force oracle on the doubled data: with each point twice, a(x) picks
  // up a zero distance to its twin, so recompute both scores directly.
  const double original = score_of(WithinKind::silhouette, ds, DistanceView{});
  const double dup = score_of(WithinKind::silhouette, doubled, DistanceView{});
  // mean intra distance over 2m-1 neighbours: (2 sum_intra) / (2m - 1), and
  // b(x) is unchanged; for well-separated blobs the effect is tiny
  CHECK(dup == doctest::Approx(original).epsilon(0.05));
}

TEST_CASE("xie-beni prefers separated data") {
  const Dataset separated = make_d4();
  const Dataset overlapping = random_blobs(40, 2, 2, 0.3, 8);
  const double good = score_of(WithinKind::xie_beni, separated, DistanceView{});
  const double bad = score_of(WithinKind::xie_beni, overlapping, DistanceView{});
  CHECK(good < bad);  // min-is-better
}

TEST_CASE("error paths") {
  const Dataset d4 = make_d4();
  const Partition part = Partition::from_labels(d4);
  // |X| == |C|
  Matrix two(2, 1);
  two(0, 0) = 0.0;
  two(1, 0) = 1.0;
  const Dataset tiny(std::move(two), {0, 1}, {"A", "B"});
  CHECK_THROWS_AS(
      calinski_harabasz(tiny, Partition::from_labels(tiny), DistanceView{}),
      DegenerateInput);

  // singleton class for silhouette
  Matrix tri(3, 1);
  tri(0, 0) = 0.0;
  tri(1, 0) = 1.0;
  tri(2, 0) = 5.0;
  const Dataset singleton(std::move(tri), {0, 0, 1}, {"A", "B"});
  CHECK_THROWS_AS(
      silhouette(singleton, Partition::from_labels(singleton), DistanceView{}),
      DegenerateInput);

  // zero within-cluster scatter
  Matrix dup(4, 1);
  dup(0, 0) = 0.0;
  dup(1, 0) = 0.0;
  dup(2, 0) = 1.0;
  dup(3, 0) = 1.0;
  const Dataset collapsed(std::move(dup), {0, 0, 1, 1}, {"A", "B"});
  CHECK_THROWS_AS(
      calinski_harabasz(collapsed, Partition::from_labels(collapsed), DistanceView{}),
      DegenerateGeometry);
  CHECK_THROWS_AS(
      dunn(collapsed, Partition::from_labels(collapsed), DistanceView{}),
      DegenerateGeometry);

  // coincident centroids
  Matrix cross(4, 2);
  cross(0, 0) = -1; cross(0, 1) = 0;
  cross(1, 0) = 1;  cross(1, 1) = 0;
  cross(2, 0) = 0;  cross(2, 1) = -1;
  cross(3, 0) = 0;  cross(3, 1) = 1;
  const Dataset star(std::move(cross), {0, 0, 1, 1}, {"A", "B"});
  CHECK_THROWS_AS(
      davies_bouldin(star, Partition::from_labels(star), DistanceView{}),
      DegenerateGeometry);
  CHECK_THROWS_AS(
      xie_beni(star, Partition::from_labels(star), DistanceView{}),
      DegenerateGeometry);
}
