#include "gbun/forward.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "gbun/errors.hpp"

namespace gbun {

namespace {

Eigen::MatrixXd hashed_weights_for(const std::vector<std::int64_t>& features,
                                   const UntrainedNetSpec& net) {
  Eigen::MatrixXd w(static_cast<Eigen::Index>(features.size()), net.num_outputs);
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    const auto f = static_cast<std::uint64_t>(features[static_cast<std::size_t>(i)]);
    for (int j = 0; j < net.num_outputs; ++j) {
      w(i, j) = feature_weight(f, net.round_index, static_cast<std::uint32_t>(j));
    }
  }
  return w;
}

}  // namespace

Eigen::MatrixXd forward_raw(const SparseDataset& ds, std::int64_t row_begin,
                            std::int64_t row_end, const UntrainedNetSpec& net) {
  if (row_begin < 0 || row_end > ds.num_samples() || row_begin > row_end) {
    throw DataError("forward_raw: row range out of bounds");
  }
  const Eigen::Index rows = static_cast<Eigen::Index>(row_end - row_begin);
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(rows, net.num_outputs);

  if (net.mode.kind == WeightMode::Kind::Dense) {
    const Eigen::MatrixXd w = gen_dense_weights(net.mode.dense_seed, net.num_features,
                                                net.num_outputs, net.mode.sparsify_fraction);
    for (std::int64_t r = row_begin; r < row_end; ++r) {
      auto out = z.row(static_cast<Eigen::Index>(r - row_begin));
      for (std::int64_t k = ds.indptr[r]; k < ds.indptr[r + 1]; ++k) {
        const std::int64_t f = ds.indices[k];
        if (f >= net.num_features) {
          throw DataError("forward_raw: feature id " + std::to_string(f) +
                          " >= num_features " + std::to_string(net.num_features) +
                          " in dense mode");
        }
        out += ds.values[k] * w.row(static_cast<Eigen::Index>(f));
      }
    }
    return z;
  }

  // Hashed mode: weights for each distinct feature are synthesized once,
  // so the hash runs (distinct features) * K times for this range.
  std::vector<std::int64_t> distinct(ds.indices.begin() + ds.indptr[row_begin],
                                     ds.indices.begin() + ds.indptr[row_end]);
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  const Eigen::MatrixXd w = hashed_weights_for(distinct, net);

  for (std::int64_t r = row_begin; r < row_end; ++r) {
    auto out = z.row(static_cast<Eigen::Index>(r - row_begin));
    for (std::int64_t k = ds.indptr[r]; k < ds.indptr[r + 1]; ++k) {
      const auto it = std::lower_bound(distinct.begin(), distinct.end(), ds.indices[k]);
      const auto pos = static_cast<Eigen::Index>(it - distinct.begin());
      out += ds.values[k] * w.row(pos);
    }
  }
  return z;
}

Eigen::MatrixXd forward_raw(const SparseDataset& ds, const UntrainedNetSpec& net) {
  return forward_raw(ds, 0, ds.num_samples(), net);
}

NormAccum norm_accumulate(const Eigen::Ref<const Eigen::MatrixXd>& z) {
  NormAccum acc;
  acc.sum = z.colwise().sum();
  acc.sumsq = z.array().square().colwise().sum();
  acc.count = z.rows();
  return acc;
}

NormStats norm_finish(const Eigen::VectorXd& sum, const Eigen::VectorXd& sumsq,
                      std::int64_t count) {
  if (count < 2) throw NumericError("norm_finish: need at least 2 samples");
  NormStats stats;
  stats.count = count;
  const double n = static_cast<double>(count);
  stats.mean = sum / n;
  stats.std = ((sumsq.array() - n * stats.mean.array().square()) / (n - 1.0))
                  .max(kStdFloor * kStdFloor)
                  .sqrt();
  return stats;
}

NormStats fit_norm(const Eigen::Ref<const Eigen::MatrixXd>& z) {
  const NormAccum acc = norm_accumulate(z);
  return norm_finish(acc.sum, acc.sumsq, acc.count);
}

void apply_norm_in_place(Eigen::MatrixXd& z, const NormStats& stats) {
  if (z.cols() != stats.mean.size()) throw NumericError("apply_norm: column count mismatch");
  z.rowwise() -= stats.mean.transpose();
  z.array().rowwise() /= stats.std.transpose().array();
}

Eigen::MatrixXd apply_norm(const Eigen::Ref<const Eigen::MatrixXd>& z, const NormStats& stats) {
  Eigen::MatrixXd out = z;
  apply_norm_in_place(out, stats);
  return out;
}

void softmax_rows_in_place(Eigen::MatrixXd& z) {
  if (!z.allFinite()) throw NumericError("softmax_rows: non-finite input");
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    auto row = z.row(i).array();
    row = (row - row.maxCoeff()).exp();
    row /= row.sum();
  }
}

Eigen::MatrixXd softmax_rows(const Eigen::Ref<const Eigen::MatrixXd>& z) {
  Eigen::MatrixXd out = z;
  softmax_rows_in_place(out);
  return out;
}

}  // namespace gbun
