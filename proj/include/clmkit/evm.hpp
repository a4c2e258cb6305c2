#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "clmkit/dataset.hpp"

namespace clmkit::evm {

/// Co-occurrence counts between two partitions of the same index set.
class ContingencyTable {
 public:
  ContingencyTable(const Partition& p1, const Partition& p2);

  std::size_t rows() const { return row_sums_.size(); }
  std::size_t cols() const { return col_sums_.size(); }
  std::int64_t count(std::size_t i, std::size_t j) const {
    return counts_[i * cols() + j];
  }
  std::int64_t row_sum(std::size_t i) const { return row_sums_[i]; }
  std::int64_t col_sum(std::size_t j) const { return col_sums_[j]; }
  std::int64_t total() const { return total_; }

 private:
  std::vector<std::int64_t> counts_;
  std::vector<std::int64_t> row_sums_;
  std::vector<std::int64_t> col_sums_;
  std::int64_t total_ = 0;
};

/// Chance-corrected Rand index via pair counting; 1 for identical partitions
/// (up to relabeling), 0 in expectation for independent ones, and exactly 0
/// whenever one side is a single cluster and the other is not.
double adjusted_rand(const Partition& p1, const Partition& p2);

/// Normalizer choice for adjusted mutual information. The permutation-model
/// expectation E[MI] is the same for all of them.
enum class AmiNormalizer { arithmetic, geometric, min, max };

double adjusted_mutual_information(
    const Partition& p1, const Partition& p2,
    AmiNormalizer norm = AmiNormalizer::arithmetic);

/// Expected mutual information under the fixed-marginals permutation model;
/// exposed because it is the delicate term of AMI.
double expected_mutual_information(const ContingencyTable& table);

double mutual_information(const ContingencyTable& table);
double entropy(const Partition& p);

/// MI / sqrt(H1 * H2); 0 when either entropy is 0 (MI is then 0 too).
double nmi_geometric(const Partition& p1, const Partition& p2);

/// Harmonic mean of homogeneity and completeness. A zero-entropy side makes
/// the corresponding component 1 by convention; 0 when both components are 0.
double v_measure(const Partition& p1, const Partition& p2);

/// Pearson correlation of average-tie ranks. Vectors must have equal length
/// >= 2; a constant vector yields 0 (no measurable monotone association).
double spearman_rho(std::span<const double> a, std::span<const double> b);

/// Mean of |F_k - G_k| / (|F_k| + |G_k|); terms with a zero denominator
/// contribute 0. Range [0, 1], 0 best.
double smape(std::span<const double> f, std::span<const double> g);

enum class EvmKind { ami, arand, vm, nmi };
std::optional<EvmKind> evm_kind_from_name(std::string_view name);
std::string_view evm_kind_name(EvmKind kind);
double score_evm(EvmKind kind, const Partition& p1, const Partition& p2);

}  // namespace clmkit::evm
