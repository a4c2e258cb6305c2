#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "clmkit/bench.hpp"
#include "clmkit/errors.hpp"
#include "clmkit/evm.hpp"
#include "clmkit/numeric.hpp"
#include "clmkit/rng.hpp"
#include "clmkit/synth.hpp"

using namespace clmkit;
using namespace clmkit::bench;

namespace {

Dataset make_d4() {
  Matrix pts(4, 2);
  pts(0, 0) = 0;  pts(0, 1) = 0;
  pts(1, 0) = 0;  pts(1, 1) = 1;
  pts(2, 0) = 10; pts(2, 1) = 0;
  pts(3, 0) = 10; pts(3, 1) = 1;
  return Dataset(std::move(pts), {0, 0, 1, 1}, {"A", "B"});
}

Dataset pair_dataset(double separation, std::size_t n, std::uint64_t seed) {
  synth::GaussianPairParams p;
  p.separation = separation;
  p.seed = seed;
  p.cov_a = {0.25, 0.0, 0.25};
  p.cov_b = {0.25, 0.0, 0.25};
  return synth::generate_base(p, n);
}

double wcss(const Dataset& ds, const Partition& part) {
  double total = 0.0;
  for (std::size_t g = 0; g < part.n_groups(); ++g) {
    std::vector<double> mean(ds.dims(), 0.0);
    for (std::size_t idx : part.group(g))
      for (std::size_t c = 0; c < ds.dims(); ++c) mean[c] += ds.points()(idx, c);
    for (auto& m : mean) m /= static_cast<double>(part.group(g).size());
    for (std::size_t idx : part.group(g)) {
      const double d = euclidean(ds.points().row(idx), mean);
      total += d * d;
    }
  }
  return total;
}

}  // namespace

TEST_CASE("grid points") {
  CHECK(cardinality_grid_point(0) == 5000);
  CHECK(cardinality_grid_point(10) == 10000);
  CHECK(cardinality_grid_point(3) == 6500);
  CHECK(dimension_grid_point(0) == 2);
  CHECK(dimension_grid_point(3) == 30);
  CHECK(dimension_grid_point(10) == 100);
}

TEST_CASE("measure selector parses both families") {
  auto ch = MeasureSelector::parse("ch");
  REQUIRE(ch.has_value());
  CHECK(ch->kind == MeasureSelector::Kind::within);
  CHECK(ch->max_is_better());

  auto db = MeasureSelector::parse("davies-bouldin");
  REQUIRE(db.has_value());
  CHECK_FALSE(db->max_is_better());

  auto btwn = MeasureSelector::parse("ch-btwn");
  REQUIRE(btwn.has_value());
  CHECK(btwn->kind == MeasureSelector::Kind::between);
  CHECK(btwn->variant == btw::VariantId::ch_t2t4);
  CHECK(btwn->name() == "ch-btwn");

  CHECK_FALSE(MeasureSelector::parse("nosuch").has_value());
}

TEST_CASE("kmeans recovers D4 and matches the brute-force optimum") {
  const Dataset d4 = make_d4();
  const Partition got = kmeans(d4, 2, 0);

  // brute force: all 2-partitions of 4 points with both sides non-empty
  double best = 1e300;
  std::vector<int> best_assign;
  for (int mask = 1; mask < 15; ++mask) {
    std::vector<int> assign(4);
    for (int i = 0; i < 4; ++i) assign[static_cast<std::size_t>(i)] = (mask >> i) & 1;
    const Partition part = Partition::from_assignments(assign, 2);
    const double obj = wcss(d4, part);
    if (obj < best) {
      best = obj;
      best_assign = assign;
    }
  }
  CHECK(wcss(d4, got) == doctest::Approx(best).epsilon(1e-12));
  // left/right split up to label swap
  CHECK(best_assign[0] == best_assign[1]);
  CHECK(best_assign[2] == best_assign[3]);
  CHECK(got.n_groups() == 2);
  const double ari = evm::adjusted_rand(Partition::from_labels(d4), got);
  CHECK(ari == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("kmeans k=1 and argument checks") {
  const Dataset d4 = make_d4();
  const Partition one = kmeans(d4, 1, 0);
  CHECK(one.n_groups() == 1);
  CHECK(one.group(0).size() == 4);
  CHECK_THROWS_AS(kmeans(d4, 5, 0), InvalidArgument);
  CHECK_THROWS_AS(kmeans(d4, 0, 0), InvalidArgument);
}

TEST_CASE("kmeans objective is non-increasing over iterations") {
  const Dataset ds = pair_dataset(2.0, 240, 3);
  double prev = 1e300;
  for (std::size_t iters = 1; iters <= 8; ++iters) {
    const Partition part = kmeans(ds, 3, 11, iters);
    const double obj = wcss(ds, part);
    CHECK(obj <= prev + 1e-9);
    prev = obj;
  }
}

TEST_CASE("kmeans is deterministic per seed") {
  const Dataset ds = pair_dataset(1.0, 150, 5);
  const Partition a = kmeans(ds, 4, 9);
  const Partition b = kmeans(ds, 4, 9);
  CHECK(a.groups() == b.groups());
}

TEST_CASE("approx ground truth on recoverable and random data") {
  const Dataset good = pair_dataset(20.0, 200, 7);
  const double high = approx_ground_truth_clm(good, evm::EvmKind::ami);
  CHECK(high > 0.95);

  // one Gaussian, labels carry no cluster structure
  const Dataset bad = pair_dataset(0.0, 300, 11);
  const double low = approx_ground_truth_clm(bad, evm::EvmKind::ami);
  CHECK(low < 0.1);

  // identical recovered partition under arand
  const double ari = approx_ground_truth_clm(good, evm::EvmKind::arand);
  CHECK(ari == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("approx ground truth is monotone in the candidate grid") {
  const Dataset ds = pair_dataset(3.0, 180, 13);
  const double small = approx_ground_truth_clm(ds, evm::EvmKind::ami, {2}, {0});
  const double big =
      approx_ground_truth_clm(ds, evm::EvmKind::ami, {2, 3, 4}, {0, 1});
  CHECK(big >= small);
}

TEST_CASE("rank_datasets orders by separation under ch-btwn") {
  btw::BetweenConfig cfg;
  cfg.seed = 21;
  cfg.mc_trials = 20;
  const auto sel = *MeasureSelector::parse("ch-btwn");
  int wins = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    std::vector<std::pair<std::string, Dataset>> sets;
    sets.emplace_back("narrow", pair_dataset(0.5, 150, 100 + seed));
    sets.emplace_back("wide", pair_dataset(8.0, 150, 200 + seed));
    const auto ranked = rank_datasets(sets, sel, cfg);
    wins += ranked.front().name == "wide";
  }
  CHECK(wins > 5);
}

TEST_CASE("rank_datasets determinism, single entry, and failure flags") {
  btw::BetweenConfig cfg;
  cfg.seed = 23;
  cfg.mc_trials = 10;
  const auto sel = *MeasureSelector::parse("silhouette");

  std::vector<std::pair<std::string, Dataset>> sets;
  sets.emplace_back("only", pair_dataset(2.0, 80, 31));
  const auto single = rank_datasets(sets, sel, cfg);
  CHECK(single.size() == 1);
  CHECK(single[0].ok);

  // second dataset has a singleton class: silhouette fails, entry flagged
  Matrix pts(3, 1);
  pts(0, 0) = 0; pts(1, 0) = 1; pts(2, 0) = 9;
  sets.emplace_back("broken", Dataset(std::move(pts), {0, 0, 1}, {"A", "B"}));
  const auto ranked = rank_datasets(sets, sel, cfg);
  CHECK(ranked.size() == 2);
  CHECK(ranked[0].ok);
  CHECK_FALSE(ranked[1].ok);
  CHECK(ranked[1].name == "broken");
  CHECK_FALSE(ranked[1].error.empty());

  const auto again = rank_datasets(sets, sel, cfg, 2);
  CHECK(again[0].value == ranked[0].value);
  CHECK_THROWS_AS(rank_datasets({}, sel, cfg), InvalidArgument);
}

TEST_CASE("ch and ch-btwn rank mixed sets differently") {
  // datasets differ in size as well as separation; raw CH tracks size while
  // the normalized score tracks the actual cluster-label structure
  btw::BetweenConfig cfg;
  cfg.seed = 41;
  cfg.mc_trials = 25;
  std::vector<std::pair<std::string, Dataset>> sets;
  // many weakly separated points vs few well separated ones
  sets.emplace_back("bulky", pair_dataset(0.75, 1200, 701));
  sets.emplace_back("crisp", pair_dataset(1.5, 150, 701));

  const auto by_ch = rank_datasets(sets, *MeasureSelector::parse("ch"), cfg);
  const auto by_btwn = rank_datasets(sets, *MeasureSelector::parse("ch-btwn"), cfg);
  CHECK(by_ch.front().name == "bulky");    // raw CH grows with |X|
  CHECK(by_btwn.front().name == "crisp");  // the normalized score tracks CLM
}

TEST_CASE("rank vector against itself has spearman 1") {
  btw::BetweenConfig cfg;
  cfg.seed = 3;
  cfg.mc_trials = 10;
  std::vector<std::pair<std::string, Dataset>> sets;
  for (std::uint64_t i = 0; i < 5; ++i)
    sets.emplace_back("d" + std::to_string(i),
                      pair_dataset(1.0 + static_cast<double>(i), 100, 300 + i));
  const auto ranked = rank_datasets(sets, *MeasureSelector::parse("ch"), cfg);
  std::vector<double> values;
  for (const auto& e : ranked) values.push_back(e.value);
  CHECK(evm::spearman_rho(values, values) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("rank_stability fixtures") {
  // dominant technique: column 0 beats column 1 on every dataset
  Matrix dom(12, 2);
  for (std::size_t r = 0; r < 12; ++r) {
    dom(r, 0) = 1.0 + static_cast<double>(r);
    dom(r, 1) = 0.5;
  }
  const StabilityResult a = rank_stability(dom, 5, 100, 1);
  CHECK(a.pairwise[0][1] == 1.0);
  CHECK(a.pairwise[1][0] == 1.0);
  CHECK(a.ranking[0] == 0);

  // identical columns: every comparison ties, p = 0.5 forced
  Matrix same(10, 3);
  for (std::size_t r = 0; r < 10; ++r)
    for (std::size_t c = 0; c < 3; ++c) same(r, c) = static_cast<double>(r);
  const StabilityResult b = rank_stability(same, 4, 50, 2);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(b.pairwise[i][j] == 0.5);
}

TEST_CASE("rank_stability range and argument checks") {
  rng::Stream s(9);
  Matrix scores(15, 4);
  for (std::size_t r = 0; r < 15; ++r)
    for (std::size_t c = 0; c < 4; ++c) scores(r, c) = s.uniform();
  const StabilityResult res = rank_stability(scores, 6, 80, 3);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      CHECK(res.pairwise[i][j] >= 0.5);
      CHECK(res.pairwise[i][j] <= 1.0);
    }
  CHECK_THROWS_AS(rank_stability(scores, 16, 10, 0), InvalidArgument);
  CHECK_THROWS_AS(rank_stability(scores, 0, 10, 0), InvalidArgument);
}

TEST_CASE("rank_stability is invariant under positive affine transforms") {
  rng::Stream s(15);
  Matrix scores(20, 3);
  for (std::size_t r = 0; r < 20; ++r)
    for (std::size_t c = 0; c < 3; ++c) scores(r, c) = s.uniform(-2.0, 2.0);
  Matrix moved(20, 3);
  for (std::size_t r = 0; r < 20; ++r)
    for (std::size_t c = 0; c < 3; ++c) moved(r, c) = 4.0 * scores(r, c) + 3.0;
  const StabilityResult a = rank_stability(scores, 7, 60, 4);
  const StabilityResult b = rank_stability(moved, 7, 60, 4);
  CHECK(a.pairwise == b.pairwise);
  CHECK(a.ranking == b.ranking);
}

TEST_CASE("mini ablation run has the documented shape") {
  btw::BetweenConfig cfg;
  cfg.seed = 5;
  cfg.mc_trials = 2;
  const std::vector<btw::VariantId> variants = {btw::VariantId::ch,
                                                btw::VariantId::ch_t2t4};
  const AblationResult res = ablation(Factor::cardinality, 2, variants, cfg, 2);
  CHECK(res.grid.size() == 11);
  CHECK(res.grid.front() == 5000.0);
  CHECK(res.grid.back() == 10000.0);
  CHECK(res.smape.size() == 2);
  CHECK(res.excluded_bases == 0);

  for (std::size_t v = 0; v < variants.size(); ++v) {
    ExactSum offdiag;
    for (std::size_t a = 0; a < 11; ++a)
      for (std::size_t b = 0; b < 11; ++b) {
        const double s = res.smape_at(v, a, b);
        CHECK(s >= 0.0);
        CHECK(s <= 1.0);
        CHECK(s == res.smape_at(v, b, a));
        if (a == b) CHECK(s == 0.0);
        else if (a < b) offdiag.add(s);
      }
    CHECK(res.averages[v] ==
          doctest::Approx(offdiag.value() / 55.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(ablation(Factor::cardinality, 1, variants, cfg), InvalidArgument);
}

TEST_CASE("scoring the same instance twice gives SMAPE 0") {
  const Dataset inst = pair_dataset(3.0, 400, 17);
  const Partition part = Partition::from_labels(inst);
  btw::BetweenConfig cfg;
  cfg.seed = 7;
  cfg.mc_trials = 10;
  const double s1 = btw::score_variant(btw::VariantId::ch_t2t4, inst, part, cfg).value;
  const double s2 = btw::score_variant(btw::VariantId::ch_t2t4, inst, part, cfg).value;
  CHECK(evm::smape(std::vector<double>{s1}, std::vector<double>{s2}) == 0.0);
}
