#pragma once

#include <cstdint>
#include <istream>
#include <string>
#include <utility>
#include <vector>

namespace gbun {

/// CSR-stored samples with labels. Immutable after construction; safe to
/// share across concurrent workers.
struct SparseDataset {
  std::vector<std::int64_t> indptr;   // n+1 row-start offsets, indptr[0]=0
  std::vector<std::int64_t> indices;  // 0-based feature ids, strictly increasing per row
  std::vector<double> values;
  std::vector<double> labels;
  std::int64_t num_features = 0;

  std::int64_t num_samples() const { return static_cast<std::int64_t>(labels.size()); }
  std::int64_t nnz() const { return static_cast<std::int64_t>(indices.size()); }
  std::int64_t row_nnz(std::int64_t row) const { return indptr[row + 1] - indptr[row]; }
  double density() const;

  /// Checks the CSR invariants; throws DataError on violation.
  void validate() const;
};

/// Parse libsvm text (`<label> <idx>:<val> ...`, 1-based indices). When
/// num_features_override < 0, the feature count is max index seen + 1.
SparseDataset parse_libsvm(std::istream& in, std::int64_t num_features_override = -1);

/// File variant; gzip-compressed input is detected by magic bytes.
SparseDataset parse_libsvm_file(const std::string& path, std::int64_t num_features_override = -1);

/// Serialize back to libsvm text (1-based indices, round-trip lossless).
std::string to_libsvm(const SparseDataset& ds);

enum class PartitionStrategy { Contiguous, RoundRobin };

PartitionStrategy parse_partition_strategy(const std::string& name);

/// Split into `num_partitions` datasets sharing the feature space.
std::vector<SparseDataset> partition(const SparseDataset& ds, int num_partitions,
                                     PartitionStrategy strategy = PartitionStrategy::Contiguous);

/// Even-nnz batch plan over consecutive rows.
struct BatchPlan {
  std::vector<std::pair<std::int64_t, std::int64_t>> row_ranges;  // [start, end)
  std::int64_t nnz_budget = 0;
  std::int64_t max_rows_per_batch = 0;
};

/// Greedy packing of consecutive rows: a batch closes when adding the next
/// row would exceed the nnz budget or the row cap. The budget is
/// max(row_nnz_max, nnz/num_batches); the row cap comes from the 25th
/// percentile of per-row nnz.
BatchPlan plan_batches(const SparseDataset& ds, int num_batches);

}  // namespace gbun
