#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "clmkit/csv.hpp"
#include "clmkit/dataset.hpp"
#include "clmkit/errors.hpp"
#include "clmkit/numeric.hpp"
#include "clmkit/rng.hpp"

using namespace clmkit;

namespace {

Dataset make_d4() {
  Matrix pts(4, 2);
  pts(0, 0) = 0;  pts(0, 1) = 0;
  pts(1, 0) = 0;  pts(1, 1) = 1;
  pts(2, 0) = 10; pts(2, 1) = 0;
  pts(3, 0) = 10; pts(3, 1) = 1;
  return Dataset(std::move(pts), {0, 0, 1, 1}, {"A", "B"});
}

Dataset two_class_blob(std::size_t per_class, std::uint64_t seed) {
  rng::Stream s(seed);
  Matrix pts(2 * per_class, 3);
  std::vector<int> ids(2 * per_class);
  for (std::size_t r = 0; r < 2 * per_class; ++r) {
    const bool second = r >= per_class;
    for (std::size_t c = 0; c < 3; ++c)
      pts(r, c) = s.gauss(second ? 4.0 : 0.0, 1.0);
    ids[r] = second ? 1 : 0;
  }
  return Dataset(std::move(pts), std::move(ids), {"A", "B"});
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("exact sum is order independent") {
  rng::Stream s(99);
  std::vector<double> values(257);
  for (auto& v : values) v = s.uniform(-1.0, 1.0) * std::pow(10.0, s.uniform_int(-8, 8));
  const double forward = exact_sum(values);
  std::vector<double> shuffled = values;
  for (int round = 0; round < 20; ++round) {
    s.shuffle(shuffled);
    CHECK(exact_sum(shuffled) == forward);
  }
}

TEST_CASE("load_csv reads a small file") {
  const auto path = temp_file("clmkit_core_4row.csv");
  {
    std::ofstream out(path);
    out << "x,y,label\n0,0,A\n0,1,A\n10,0,B\n10,1,B\n";
  }
  const Dataset ds = load_csv(path.string());
  CHECK(ds.size() == 4);
  CHECK(ds.dims() == 2);
  CHECK(ds.n_classes() == 2);
  CHECK(ds.points()(2, 0) == 10.0);
  CHECK(ds.label_names()[ds.labels()[3]] == "B");
  std::filesystem::remove(path);
}

TEST_CASE("csv round trip preserves numeric content") {
  const auto p1 = temp_file("clmkit_core_rt1.csv");
  const auto p2 = temp_file("clmkit_core_rt2.csv");
  {
    std::ofstream out(p1);
    out << "a,b,label\n0.1,2.25e-3,u\n-7.5,0.333333333333333314829616256247,v\n"
        << "1e300,-2.5,u\n";
  }
  const Dataset ds = load_csv(p1.string());
  write_csv(ds, p2.string());
  const Dataset back = load_csv(p2.string());
  CHECK(back.points() == ds.points());
  CHECK(back.labels() == ds.labels());
  std::filesystem::remove(p1);
  std::filesystem::remove(p2);
}

TEST_CASE("labels with commas and quotes survive the round trip") {
  const auto p1 = temp_file("clmkit_core_q1.csv");
  const auto p2 = temp_file("clmkit_core_q2.csv");
  {
    std::ofstream out(p1);
    out << "x,label\n1,\"a,b\"\n2,\"say \"\"hi\"\"\"\n3,\"a,b\"\n";
  }
  const Dataset ds = load_csv(p1.string());
  CHECK(ds.n_classes() == 2);
  CHECK(ds.label_names()[0] == "a,b");
  CHECK(ds.label_names()[1] == "say \"hi\"");
  write_csv(ds, p2.string());
  const Dataset back = load_csv(p2.string());
  CHECK(back.label_names() == ds.label_names());
  CHECK(back.points() == ds.points());
  std::filesystem::remove(p1);
  std::filesystem::remove(p2);
}

TEST_CASE("load_csv rejects a single-class file") {
  const auto path = temp_file("clmkit_core_1class.csv");
  {
    std::ofstream out(path);
    out << "x,label\n1,A\n2,A\n3,A\n";
  }
  CHECK_THROWS_AS(load_csv(path.string()), InvalidDataset);
  std::filesystem::remove(path);
}

TEST_CASE("load_csv reports the bad cell") {
  const auto path = temp_file("clmkit_core_badcell.csv");
  {
    std::ofstream out(path);
    out << "x,y,label\n1,2,A\n1,oops,B\n";
  }
  try {
    load_csv(path.string());
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.row() == 2);
    CHECK(e.column() == 1);
  }
  std::filesystem::remove(path);
}

TEST_CASE("load_csv label column by name and index") {
  const auto path = temp_file("clmkit_core_labelcol.csv");
  {
    std::ofstream out(path);
    out << "label,x,y\nA,0,0\nA,0,1\nB,9,9\n";
  }
  const Dataset by_name = load_csv(path.string(), LabelColumn::by_name("label"));
  const Dataset by_index = load_csv(path.string(), LabelColumn::by_index(0));
  CHECK(by_name.dims() == 2);
  CHECK(by_name.points() == by_index.points());
  CHECK_THROWS_AS(load_csv(path.string(), LabelColumn::by_name("nope")), ParseError);
  std::filesystem::remove(path);
}

TEST_CASE("subsample identity at alpha = 1") {
  const Dataset ds = two_class_blob(30, 7);
  const Dataset out = subsample(ds, 1.0, 42);
  CHECK(out.points() == ds.points());
  CHECK(out.labels() == ds.labels());
}

TEST_CASE("subsample draws per-class ceilings") {
  Matrix pts(100, 1);
  std::vector<int> ids(100);
  for (std::size_t r = 0; r < 100; ++r) {
    pts(r, 0) = static_cast<double>(r);
    ids[r] = r < 60 ? 0 : 1;
  }
  const Dataset ds(std::move(pts), std::move(ids), {"A", "B"});
  const Dataset half = subsample(ds, 0.5, 3);
  std::size_t count_a = 0;
  for (int id : half.labels()) count_a += id == 0;
  CHECK(half.size() == 50);
  CHECK(count_a == 30);
}

TEST_CASE("subsample determinism and argument checks") {
  const Dataset ds = two_class_blob(25, 11);
  const Dataset s1 = subsample(ds, 0.4, 5);
  const Dataset s2 = subsample(ds, 0.4, 5);
  CHECK(s1.points() == s2.points());
  CHECK(s1.labels() == s2.labels());
  CHECK_THROWS_AS(subsample(ds, 0.0, 1), InvalidArgument);
  CHECK_THROWS_AS(subsample(ds, 1.5, 1), InvalidArgument);
}

TEST_CASE("subsample keeps class proportions within rounding") {
  const Dataset ds = two_class_blob(200, 13);
  for (double alpha : {0.13, 0.5, 0.77}) {
    const Dataset sub = subsample(ds, alpha, 21);
    for (int cls = 0; cls < 2; ++cls) {
      std::size_t in_sub = 0;
      for (int id : sub.labels()) in_sub += id == cls;
      const double got = static_cast<double>(in_sub) / static_cast<double>(sub.size());
      CHECK(std::fabs(got - 0.5) <= 1.0 / static_cast<double>(sub.size()));
    }
  }
}

TEST_CASE("centroid_stats hand example") {
  // like D4 but with one point nudged so the distances to the global
  // centroid have spread (the exact D4 layout is rejected; see below)
  Matrix pts(4, 2);
  pts(0, 0) = 0;  pts(0, 1) = 0;
  pts(1, 0) = 0;  pts(1, 1) = 1;
  pts(2, 0) = 10; pts(2, 1) = 0;
  pts(3, 0) = 12; pts(3, 1) = 1;
  const Dataset ds(std::move(pts), {0, 0, 1, 1}, {"A", "B"});
  const Partition part = Partition::from_labels(ds);
  const CentroidStats st = centroid_stats(ds, part, DistanceView{});
  CHECK(st.class_centroids(0, 0) == doctest::Approx(0.0));
  CHECK(st.class_centroids(0, 1) == doctest::Approx(0.5));
  CHECK(st.class_centroids(1, 0) == doctest::Approx(11.0));
  CHECK(st.class_centroids(1, 1) == doctest::Approx(0.5));
  CHECK(st.global_centroid[0] == doctest::Approx(5.5));
  CHECK(st.global_centroid[1] == doctest::Approx(0.5));
  // population sd of {sqrt(30.5), sqrt(30.5), sqrt(20.5), sqrt(42.5)}
  const double d0 = std::sqrt(30.5), d2 = std::sqrt(20.5), d3 = std::sqrt(42.5);
  const double mean = (2 * d0 + d2 + d3) / 4.0;
  const double var = (2 * (d0 - mean) * (d0 - mean) + (d2 - mean) * (d2 - mean) +
                      (d3 - mean) * (d3 - mean)) / 4.0;
  CHECK(st.sigma_d == doctest::Approx(std::sqrt(var)).epsilon(1e-12));
}

TEST_CASE("sigma_d scales with alpha and ignores beta") {
  const Dataset ds = two_class_blob(40, 17);
  const Partition part = Partition::from_labels(ds);
  const double base = centroid_stats(ds, part, DistanceView{}).sigma_d;
  const double scaled = centroid_stats(ds, part, DistanceView(2.0, 0.0)).sigma_d;
  const double shifted = centroid_stats(ds, part, DistanceView(1.0, 5.0)).sigma_d;
  CHECK(scaled == doctest::Approx(2.0 * base).epsilon(1e-12));
  CHECK(shifted == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("centroid_stats rejects perfectly symmetric geometry") {
  // D4's four points are equidistant from the global centroid
  const Dataset ds = make_d4();
  const Partition part = Partition::from_labels(ds);
  CHECK_THROWS_AS(centroid_stats(ds, part, DistanceView{}), DegenerateGeometry);
}

TEST_CASE("centroid_stats is exactly invariant under row permutation") {
  const Dataset ds = two_class_blob(35, 23);
  const Partition part = Partition::from_labels(ds);
  const CentroidStats a = centroid_stats(ds, part, DistanceView{});

  rng::Stream s(77);
  std::vector<std::size_t> perm(ds.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  s.shuffle(perm);

  Matrix pts(ds.size(), ds.dims());
  std::vector<int> ids(ds.size());
  for (std::size_t r = 0; r < ds.size(); ++r) {
    for (std::size_t c = 0; c < ds.dims(); ++c) pts(perm[r], c) = ds.points()(r, c);
    ids[perm[r]] = ds.labels()[r];
  }
  const Dataset moved(std::move(pts), std::move(ids), ds.label_names());
  const CentroidStats b = centroid_stats(moved, Partition::from_labels(moved),
                                         DistanceView{});
  CHECK(a.sigma_d == b.sigma_d);
  CHECK(a.class_centroids == b.class_centroids);
  CHECK(a.global_centroid == b.global_centroid);
}

TEST_CASE("distance view properties") {
  const Dataset ds = two_class_blob(10, 31);
  rng::Stream s(5);
  for (const auto& dv :
       {DistanceView{}, DistanceView(0.5, 0.0), DistanceView(2.0, 3.0)}) {
    for (int rep = 0; rep < 50; ++rep) {
      const auto i = static_cast<std::size_t>(s.below(ds.size()));
      const auto j = static_cast<std::size_t>(s.below(ds.size()));
      const double dij = dv(ds.points().row(i), ds.points().row(j));
      const double dji = dv(ds.points().row(j), ds.points().row(i));
      CHECK(dij == dji);
      CHECK(dij >= 0.0);
      if (i == j) CHECK(dij == 0.0);
    }
  }
  CHECK_THROWS_AS(DistanceView(0.0, 0.0), InvalidArgument);
  CHECK_THROWS_AS(DistanceView(1.0, -1.0), InvalidArgument);
}

TEST_CASE("partition validation") {
  CHECK_THROWS_AS(Partition({{0, 1}, {1, 2}}, 3), InvalidPartition);
  CHECK_THROWS_AS(Partition({{0, 1}}, 3), InvalidPartition);
  CHECK_THROWS_AS(Partition({{0, 1}, {}}, 2), InvalidPartition);
  const Partition ok({{0, 2}, {1}}, 3);
  CHECK(ok.n_groups() == 2);
}

TEST_CASE("dataset validation") {
  Matrix pts(2, 1);
  pts(0, 0) = 1.0;
  pts(1, 0) = 2.0;
  CHECK_THROWS_AS(Dataset(pts, {0, 0}, {"A", "B"}), InvalidDataset);
  CHECK_THROWS_AS(Dataset(pts, {0}, {"A"}), InvalidDataset);
  Matrix one_row(1, 1);
  CHECK_THROWS_AS(Dataset(one_row, {0}, {"A"}), InvalidDataset);
}
