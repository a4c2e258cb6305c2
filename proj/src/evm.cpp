#include "clmkit/evm.hpp"

#include <algorithm>
#include <cmath>

#include "clmkit/errors.hpp"
#include "clmkit/numeric.hpp"

namespace clmkit::evm {

namespace {

constexpr double kTiny = 1e-15;

std::vector<int> membership(const Partition& p) {
  std::vector<int> m(p.size());
  for (std::size_t g = 0; g < p.n_groups(); ++g)
    for (std::size_t idx : p.group(g)) m[idx] = static_cast<int>(g);
  return m;
}

inline std::int64_t choose2(std::int64_t n) { return n * (n - 1) / 2; }

double entropy_from_sums(const std::vector<std::int64_t>& sums, std::int64_t n) {
  ExactSum h;
  for (std::int64_t s : sums) {
    if (s == 0) continue;
    const double p = static_cast<double>(s) / static_cast<double>(n);
    h.add(-p * std::log(p));
  }
  return h.value();
}

double lchoose(double n, double k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace

ContingencyTable::ContingencyTable(const Partition& p1, const Partition& p2) {
  if (p1.size() != p2.size())
    throw InvalidArgument("partitions cover different index sets");
  const auto m2 = membership(p2);
  const std::size_t rows = p1.n_groups();
  const std::size_t cols = p2.n_groups();
  counts_.assign(rows * cols, 0);
  for (std::size_t g = 0; g < rows; ++g)
    for (std::size_t idx : p1.group(g))
      ++counts_[g * cols + static_cast<std::size_t>(m2[idx])];
  row_sums_.assign(rows, 0);
  col_sums_.assign(cols, 0);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      row_sums_[i] += counts_[i * cols + j];
      col_sums_[j] += counts_[i * cols + j];
    }
  total_ = static_cast<std::int64_t>(p1.size());
}

double adjusted_rand(const Partition& p1, const Partition& p2) {
  const ContingencyTable t(p1, p2);
  std::int64_t sum_cells = 0, sum_rows = 0, sum_cols = 0;
  for (std::size_t i = 0; i < t.rows(); ++i)
    for (std::size_t j = 0; j < t.cols(); ++j) sum_cells += choose2(t.count(i, j));
  for (std::size_t i = 0; i < t.rows(); ++i) sum_rows += choose2(t.row_sum(i));
  for (std::size_t j = 0; j < t.cols(); ++j) sum_cols += choose2(t.col_sum(j));

  const double pairs = static_cast<double>(choose2(t.total()));
  const double expected =
      static_cast<double>(sum_rows) * static_cast<double>(sum_cols) / pairs;
  const double maximum =
      0.5 * static_cast<double>(sum_rows + sum_cols) - expected;
  const double index = static_cast<double>(sum_cells) - expected;
  if (maximum == 0.0) return 1.0;  // both partitions trivial, hence identical
  return index / maximum;
}

double mutual_information(const ContingencyTable& t) {
  const auto n = static_cast<double>(t.total());
  ExactSum mi;
  for (std::size_t i = 0; i < t.rows(); ++i)
    for (std::size_t j = 0; j < t.cols(); ++j) {
      const std::int64_t nij = t.count(i, j);
      if (nij == 0) continue;
      const double pij = static_cast<double>(nij) / n;
      mi.add(pij * std::log(n * static_cast<double>(nij) /
                            (static_cast<double>(t.row_sum(i)) *
                             static_cast<double>(t.col_sum(j)))));
    }
  return mi.value();
}

double entropy(const Partition& p) {
  std::vector<std::int64_t> sums;
  sums.reserve(p.n_groups());
  for (std::size_t g = 0; g < p.n_groups(); ++g)
    sums.push_back(static_cast<std::int64_t>(p.group(g).size()));
  return entropy_from_sums(sums, static_cast<std::int64_t>(p.size()));
}

double expected_mutual_information(const ContingencyTable& t) {
  const std::int64_t n = t.total();
  const auto nd = static_cast<double>(n);
  ExactSum emi;
  for (std::size_t i = 0; i < t.rows(); ++i) {
    const std::int64_t a = t.row_sum(i);
    for (std::size_t j = 0; j < t.cols(); ++j) {
      const std::int64_t b = t.col_sum(j);
      const std::int64_t lo = std::max<std::int64_t>(1, a + b - n);
      const std::int64_t hi = std::min(a, b);
      for (std::int64_t nij = lo; nij <= hi; ++nij) {
        // hypergeometric pmf: C(a, nij) C(n-a, b-nij) / C(n, b)
        const double log_pmf =
            lchoose(static_cast<double>(a), static_cast<double>(nij)) +
            lchoose(static_cast<double>(n - a), static_cast<double>(b - nij)) -
            lchoose(nd, static_cast<double>(b));
        const double term = (static_cast<double>(nij) / nd) *
                            std::log(nd * static_cast<double>(nij) /
                                     (static_cast<double>(a) *
                                      static_cast<double>(b)));
        emi.add(term * std::exp(log_pmf));
      }
    }
  }
  return emi.value();
}

double adjusted_mutual_information(const Partition& p1, const Partition& p2,
                                   AmiNormalizer norm) {
  const ContingencyTable t(p1, p2);
  const double mi = mutual_information(t);
  const double emi = expected_mutual_information(t);
  const double h1 = entropy(p1);
  const double h2 = entropy(p2);
  double normalizer = 0.0;
  switch (norm) {
    case AmiNormalizer::arithmetic: normalizer = 0.5 * (h1 + h2); break;
    case AmiNormalizer::geometric: normalizer = std::sqrt(h1 * h2); break;
    case AmiNormalizer::min: normalizer = std::min(h1, h2); break;
    case AmiNormalizer::max: normalizer = std::max(h1, h2); break;
  }
  const double denom = normalizer - emi;
  const double numer = mi - emi;
  if (std::fabs(denom) < kTiny)
    return std::fabs(numer) < kTiny ? 1.0 : 0.0;  // both sides trivial
  return numer / denom;
}

double nmi_geometric(const Partition& p1, const Partition& p2) {
  const double h1 = entropy(p1);
  const double h2 = entropy(p2);
  if (h1 == 0.0 || h2 == 0.0) return 0.0;
  const ContingencyTable t(p1, p2);
  return mutual_information(t) / std::sqrt(h1 * h2);
}

double v_measure(const Partition& p1, const Partition& p2) {
  const ContingencyTable t(p1, p2);
  const auto n = static_cast<double>(t.total());
  const double h1 = entropy(p1);
  const double h2 = entropy(p2);

  ExactSum h1_given_2;  // H(p1 | p2)
  ExactSum h2_given_1;  // H(p2 | p1)
  for (std::size_t i = 0; i < t.rows(); ++i)
    for (std::size_t j = 0; j < t.cols(); ++j) {
      const std::int64_t nij = t.count(i, j);
      if (nij == 0) continue;
      const double pij = static_cast<double>(nij) / n;
      h1_given_2.add(-pij * std::log(static_cast<double>(nij) /
                                     static_cast<double>(t.col_sum(j))));
      h2_given_1.add(-pij * std::log(static_cast<double>(nij) /
                                     static_cast<double>(t.row_sum(i))));
    }

  const double homogeneity = h1 == 0.0 ? 1.0 : 1.0 - h1_given_2.value() / h1;
  const double completeness = h2 == 0.0 ? 1.0 : 1.0 - h2_given_1.value() / h2;
  const double s = homogeneity + completeness;
  if (s == 0.0) return 0.0;
  return 2.0 * homogeneity * completeness / s;
}

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
    const double shared = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman_rho(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidArgument("vectors differ in length");
  if (a.size() < 2) throw InvalidArgument("need at least 2 observations");
  const auto ra = average_ranks(a);
  const auto rb = average_ranks(b);
  const auto n = static_cast<double>(a.size());

  ExactSum sa, sb;
  for (double v : ra) sa.add(v);
  for (double v : rb) sb.add(v);
  const double ma = sa.value() / n;
  const double mb = sb.value() / n;

  ExactSum cov, va, vb;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = ra[i] - ma;
    const double db = rb[i] - mb;
    cov.add(da * db);
    va.add(da * da);
    vb.add(db * db);
  }
  const double denom = std::sqrt(va.value() * vb.value());
  if (denom == 0.0) return 0.0;
  return cov.value() / denom;
}

double smape(std::span<const double> f, std::span<const double> g) {
  if (f.size() != g.size()) throw InvalidArgument("vectors differ in length");
  if (f.empty()) throw InvalidArgument("need at least one observation");
  ExactSum acc;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double denom = std::fabs(f[i]) + std::fabs(g[i]);
    acc.add(denom == 0.0 ? 0.0 : std::fabs(f[i] - g[i]) / denom);
  }
  return acc.value() / static_cast<double>(f.size());
}

std::optional<EvmKind> evm_kind_from_name(std::string_view name) {
  if (name == "ami") return EvmKind::ami;
  if (name == "arand" || name == "ari") return EvmKind::arand;
  if (name == "vm" || name == "v-measure") return EvmKind::vm;
  if (name == "nmi") return EvmKind::nmi;
  return std::nullopt;
}

std::string_view evm_kind_name(EvmKind kind) {
  switch (kind) {
    case EvmKind::ami: return "ami";
    case EvmKind::arand: return "arand";
    case EvmKind::vm: return "vm";
    case EvmKind::nmi: return "nmi";
  }
  return "?";
}

double score_evm(EvmKind kind, const Partition& p1, const Partition& p2) {
  switch (kind) {
    case EvmKind::ami: return adjusted_mutual_information(p1, p2);
    case EvmKind::arand: return adjusted_rand(p1, p2);
    case EvmKind::vm: return v_measure(p1, p2);
    case EvmKind::nmi: return nmi_geometric(p1, p2);
  }
  throw InvalidArgument("unknown EVM");
}

}  // namespace clmkit::evm
