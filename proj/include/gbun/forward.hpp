#pragma once

#include <cstdint>

#include <Eigen/Core>

#include "gbun/dataset.hpp"
#include "gbun/hashwgen.hpp"

namespace gbun {

/// One boosting round's untrained network: m inputs, k softmax outputs,
/// weights synthesized per `mode` (never trained).
struct UntrainedNetSpec {
  std::uint32_t round_index = 0;
  int num_outputs = 0;            // K
  std::int64_t num_features = 0;  // m
  WeightMode mode;
};

/// Floor applied to per-neuron standard deviations so constant outputs
/// normalize to 0 instead of NaN.
inline constexpr double kStdFloor = 1e-12;

/// Raw forward outputs Z for rows [row_begin, row_end): Z = X * W with W
/// synthesized from the net spec. Hashed mode computes each distinct
/// feature's K weights once (by-column strategy); dense mode requires all
/// feature ids < m. Per-row accumulation runs in CSR index order, so
/// batched forwarding concatenates bit-exactly.
Eigen::MatrixXd forward_raw(const SparseDataset& ds, std::int64_t row_begin,
                            std::int64_t row_end, const UntrainedNetSpec& net);

Eigen::MatrixXd forward_raw(const SparseDataset& ds, const UntrainedNetSpec& net);

/// Per-neuron normalization statistics (sample mean and floored sample
/// standard deviation).
struct NormStats {
  Eigen::VectorXd mean;
  Eigen::VectorXd std;
  std::int64_t count = 0;
};

/// Partition-local sums for the NORM_STATS reduce: a_j = sum z_ij,
/// b_j = sum z_ij^2, n.
struct NormAccum {
  Eigen::VectorXd sum;
  Eigen::VectorXd sumsq;
  std::int64_t count = 0;
};

NormAccum norm_accumulate(const Eigen::Ref<const Eigen::MatrixXd>& z);

/// Finish statistics from (possibly merged) sums: mean = a/n,
/// std = sqrt(max(floor^2, (b - n*mean^2)/(n-1))). Requires n >= 2.
NormStats norm_finish(const Eigen::VectorXd& sum, const Eigen::VectorXd& sumsq,
                      std::int64_t count);

/// Single-pass fit: norm_finish(norm_accumulate(z)).
NormStats fit_norm(const Eigen::Ref<const Eigen::MatrixXd>& z);

void apply_norm_in_place(Eigen::MatrixXd& z, const NormStats& stats);
Eigen::MatrixXd apply_norm(const Eigen::Ref<const Eigen::MatrixXd>& z, const NormStats& stats);

/// Row-wise softmax with max-shift. Throws NumericError on non-finite input.
void softmax_rows_in_place(Eigen::MatrixXd& z);
Eigen::MatrixXd softmax_rows(const Eigen::Ref<const Eigen::MatrixXd>& z);

}  // namespace gbun
