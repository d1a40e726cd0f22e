#include "gbun/dataset.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <zlib.h>

#include "gbun/errors.hpp"

namespace gbun {

double SparseDataset::density() const {
  const double cells = static_cast<double>(num_samples()) * static_cast<double>(num_features);
  return cells > 0 ? static_cast<double>(nnz()) / cells : 0.0;
}

void SparseDataset::validate() const {
  const std::int64_t n = num_samples();
  if (static_cast<std::int64_t>(indptr.size()) != n + 1) {
    throw DataError("dataset: indptr length must be num_samples + 1");
  }
  if (indptr.front() != 0 || indptr.back() != nnz()) {
    throw DataError("dataset: indptr must start at 0 and end at nnz");
  }
  if (values.size() != indices.size()) {
    throw DataError("dataset: values and indices lengths differ");
  }
  for (std::int64_t r = 0; r < n; ++r) {
    if (indptr[r + 1] < indptr[r]) throw DataError("dataset: indptr not non-decreasing");
    for (std::int64_t k = indptr[r]; k < indptr[r + 1]; ++k) {
      if (indices[k] < 0 || indices[k] >= num_features) {
        throw DataError("dataset: feature index out of range");
      }
      if (k > indptr[r] && indices[k] <= indices[k - 1]) {
        throw DataError("dataset: indices not strictly increasing within a row");
      }
    }
  }
}

namespace {

double parse_double_token(std::string_view tok, std::int64_t line_no, const char* what) {
  double out = 0.0;
  const auto* begin = tok.data();
  const auto* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc() || ptr != end) {
    throw DataError("libsvm parse error at line " + std::to_string(line_no) + ": bad " +
                    what + " token '" + std::string(tok) + "'");
  }
  return out;
}

std::int64_t parse_index_token(std::string_view tok, std::int64_t line_no) {
  std::int64_t out = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || out < 1) {
    throw DataError("libsvm parse error at line " + std::to_string(line_no) +
                    ": bad feature index '" + std::string(tok) + "' (indices are 1-based)");
  }
  return out;
}

}  // namespace

SparseDataset parse_libsvm(std::istream& in, std::int64_t num_features_override) {
  SparseDataset ds;
  ds.indptr.push_back(0);
  std::int64_t max_index = -1;  // 0-based
  std::string line;
  std::int64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    // strip comments and trailing whitespace
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::string_view sv(line);
    while (!sv.empty() && (sv.back() == '\r' || sv.back() == ' ' || sv.back() == '\t')) {
      sv.remove_suffix(1);
    }
    while (!sv.empty() && (sv.front() == ' ' || sv.front() == '\t')) sv.remove_prefix(1);
    if (sv.empty()) continue;

    const auto next_token = [&sv]() {
      const auto pos = sv.find_first_of(" \t");
      std::string_view tok = sv.substr(0, pos);
      sv.remove_prefix(pos == std::string_view::npos ? sv.size() : pos);
      while (!sv.empty() && (sv.front() == ' ' || sv.front() == '\t')) sv.remove_prefix(1);
      return tok;
    };

    ds.labels.push_back(parse_double_token(next_token(), line_no, "label"));
    std::int64_t prev_index = -1;
    while (!sv.empty()) {
      const std::string_view tok = next_token();
      const auto colon = tok.find(':');
      if (colon == std::string_view::npos) {
        throw DataError("libsvm parse error at line " + std::to_string(line_no) +
                        ": expected idx:val, got '" + std::string(tok) + "'");
      }
      const std::int64_t idx = parse_index_token(tok.substr(0, colon), line_no) - 1;
      const double val = parse_double_token(tok.substr(colon + 1), line_no, "value");
      if (idx <= prev_index) {
        throw DataError("libsvm parse error at line " + std::to_string(line_no) +
                        ": feature indices must be strictly increasing");
      }
      prev_index = idx;
      ds.indices.push_back(idx);
      ds.values.push_back(val);
      max_index = std::max(max_index, idx);
    }
    ds.indptr.push_back(ds.nnz());
  }
  ds.num_features = num_features_override >= 0 ? num_features_override : max_index + 1;
  if (num_features_override >= 0 && max_index >= num_features_override) {
    throw DataError("libsvm: feature index " + std::to_string(max_index + 1) +
                    " exceeds the " + std::to_string(num_features_override) +
                    "-feature override");
  }
  return ds;
}

namespace {

bool is_gzip(const unsigned char* magic, std::size_t len) {
  return len >= 2 && magic[0] == 0x1F && magic[1] == 0x8B;
}

std::string gunzip(const std::string& path) {
  gzFile f = gzopen(path.c_str(), "rb");
  if (f == nullptr) throw DataError("cannot open '" + path + "'");
  std::string out;
  char buf[1 << 16];
  int got;
  while ((got = gzread(f, buf, sizeof(buf))) > 0) out.append(buf, static_cast<std::size_t>(got));
  if (got < 0) {
    int errnum = 0;
    const char* msg = gzerror(f, &errnum);
    std::string err = msg != nullptr ? msg : "gzip read error";
    gzclose(f);
    throw DataError("gzip error reading '" + path + "': " + err);
  }
  gzclose(f);
  return out;
}

}  // namespace

SparseDataset parse_libsvm_file(const std::string& path, std::int64_t num_features_override) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot open '" + path + "'");
  unsigned char magic[2] = {0, 0};
  f.read(reinterpret_cast<char*>(magic), 2);
  const auto got = static_cast<std::size_t>(f.gcount());
  if (is_gzip(magic, got)) {
    f.close();
    std::istringstream text(gunzip(path));
    return parse_libsvm(text, num_features_override);
  }
  f.clear();
  f.seekg(0);
  return parse_libsvm(f, num_features_override);
}

std::string to_libsvm(const SparseDataset& ds) {
  std::string out;
  char buf[64];
  const auto append_num = [&](double v) {
    const int len = std::snprintf(buf, sizeof(buf), "%.17g", v);
    out.append(buf, static_cast<std::size_t>(len));
  };
  for (std::int64_t r = 0; r < ds.num_samples(); ++r) {
    append_num(ds.labels[r]);
    for (std::int64_t k = ds.indptr[r]; k < ds.indptr[r + 1]; ++k) {
      out.push_back(' ');
      const int len = std::snprintf(buf, sizeof(buf), "%lld",
                                    static_cast<long long>(ds.indices[k] + 1));
      out.append(buf, static_cast<std::size_t>(len));
      out.push_back(':');
      append_num(ds.values[k]);
    }
    out.push_back('\n');
  }
  return out;
}

PartitionStrategy parse_partition_strategy(const std::string& name) {
  if (name == "contiguous") return PartitionStrategy::Contiguous;
  if (name == "round_robin") return PartitionStrategy::RoundRobin;
  throw UsageError("unknown partition strategy '" + name + "'");
}

namespace {

SparseDataset take_rows(const SparseDataset& ds, const std::vector<std::int64_t>& rows) {
  SparseDataset out;
  out.num_features = ds.num_features;
  out.indptr.reserve(rows.size() + 1);
  out.indptr.push_back(0);
  for (const std::int64_t r : rows) {
    for (std::int64_t k = ds.indptr[r]; k < ds.indptr[r + 1]; ++k) {
      out.indices.push_back(ds.indices[k]);
      out.values.push_back(ds.values[k]);
    }
    out.labels.push_back(ds.labels[r]);
    out.indptr.push_back(out.nnz());
  }
  return out;
}

}  // namespace

std::vector<SparseDataset> partition(const SparseDataset& ds, int num_partitions,
                                     PartitionStrategy strategy) {
  const std::int64_t n = ds.num_samples();
  if (num_partitions < 1) throw DataError("partition: need at least one partition");
  if (num_partitions > n) {
    throw DataError("partition: more partitions (" + std::to_string(num_partitions) +
                    ") than samples (" + std::to_string(n) + ")");
  }
  std::vector<SparseDataset> parts;
  parts.reserve(static_cast<std::size_t>(num_partitions));
  if (strategy == PartitionStrategy::Contiguous) {
    const std::int64_t base = n / num_partitions;
    const std::int64_t extra = n % num_partitions;
    std::int64_t start = 0;
    for (int s = 0; s < num_partitions; ++s) {
      const std::int64_t count = base + (s < extra ? 1 : 0);
      std::vector<std::int64_t> rows(static_cast<std::size_t>(count));
      for (std::int64_t i = 0; i < count; ++i) rows[static_cast<std::size_t>(i)] = start + i;
      parts.push_back(take_rows(ds, rows));
      start += count;
    }
  } else {
    for (int s = 0; s < num_partitions; ++s) {
      std::vector<std::int64_t> rows;
      for (std::int64_t r = s; r < n; r += num_partitions) rows.push_back(r);
      parts.push_back(take_rows(ds, rows));
    }
  }
  return parts;
}

BatchPlan plan_batches(const SparseDataset& ds, int num_batches) {
  if (num_batches < 1) throw DataError("plan_batches: num_batches must be >= 1");
  const std::int64_t n = ds.num_samples();
  BatchPlan plan;
  if (n == 0) return plan;

  std::vector<std::int64_t> row_nnz(static_cast<std::size_t>(n));
  std::int64_t row_nnz_max = 0;
  for (std::int64_t r = 0; r < n; ++r) {
    row_nnz[static_cast<std::size_t>(r)] = ds.row_nnz(r);
    row_nnz_max = std::max(row_nnz_max, ds.row_nnz(r));
  }
  plan.nnz_budget = std::max(row_nnz_max, ds.nnz() / num_batches);

  // Nearest-rank 25th percentile of per-row nnz, floored at 1 when empty
  // rows drag it to 0.
  std::vector<std::int64_t> sorted = row_nnz;
  std::sort(sorted.begin(), sorted.end());
  const auto rank = static_cast<std::size_t>(
      std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(0.25 * static_cast<double>(n)))));
  std::int64_t q25 = sorted[rank - 1];
  if (q25 < 1) q25 = 1;
  // The quantile cap alone can undershoot the average rows per batch; the
  // plan must still be able to cover all rows with num_batches batches.
  const std::int64_t avg_rows = (n + num_batches - 1) / num_batches;
  plan.max_rows_per_batch = std::max(n / q25, avg_rows);

  std::int64_t start = 0;
  std::int64_t batch_nnz = 0;
  for (std::int64_t r = 0; r < n; ++r) {
    const std::int64_t rows_in_batch = r - start;
    const bool would_overflow =
        rows_in_batch > 0 && (batch_nnz + row_nnz[static_cast<std::size_t>(r)] > plan.nnz_budget ||
                              rows_in_batch + 1 > plan.max_rows_per_batch);
    if (would_overflow) {
      plan.row_ranges.emplace_back(start, r);
      start = r;
      batch_nnz = 0;
    }
    batch_nnz += row_nnz[static_cast<std::size_t>(r)];
  }
  plan.row_ranges.emplace_back(start, n);
  return plan;
}

}  // namespace gbun
