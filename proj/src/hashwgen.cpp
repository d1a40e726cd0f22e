#include "gbun/hashwgen.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "gbun/errors.hpp"

namespace gbun {

namespace {

constexpr std::uint32_t kPrime1 = 2654435761u;
constexpr std::uint32_t kPrime2 = 2246822519u;
constexpr std::uint32_t kPrime3 = 3266489917u;
constexpr std::uint32_t kPrime4 = 668265263u;
constexpr std::uint32_t kPrime5 = 374761393u;

inline std::uint32_t read32le(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

}  // namespace

std::uint32_t xxhash32(const void* data, std::size_t len, std::uint32_t seed) {
  const auto* p = static_cast<const unsigned char*>(data);
  const unsigned char* end = p + len;
  std::uint32_t h;

  if (len >= 16) {
    std::uint32_t v1 = seed + kPrime1 + kPrime2;
    std::uint32_t v2 = seed + kPrime2;
    std::uint32_t v3 = seed;
    std::uint32_t v4 = seed - kPrime1;
    const unsigned char* limit = end - 16;
    do {
      v1 = std::rotl(v1 + read32le(p) * kPrime2, 13) * kPrime1;
      v2 = std::rotl(v2 + read32le(p + 4) * kPrime2, 13) * kPrime1;
      v3 = std::rotl(v3 + read32le(p + 8) * kPrime2, 13) * kPrime1;
      v4 = std::rotl(v4 + read32le(p + 12) * kPrime2, 13) * kPrime1;
      p += 16;
    } while (p <= limit);
    h = std::rotl(v1, 1) + std::rotl(v2, 7) + std::rotl(v3, 12) + std::rotl(v4, 18);
  } else {
    h = seed + kPrime5;
  }

  h += static_cast<std::uint32_t>(len);
  while (p + 4 <= end) {
    h = std::rotl(h + read32le(p) * kPrime3, 17) * kPrime4;
    p += 4;
  }
  while (p < end) {
    h = std::rotl(h + (*p) * kPrime5, 11) * kPrime1;
    ++p;
  }

  h ^= h >> 15;
  h *= kPrime2;
  h ^= h >> 13;
  h *= kPrime3;
  h ^= h >> 16;
  return h;
}

double bits_to_unit_float(std::uint32_t h) {
  const std::uint32_t bits = (h & kMask1) | kMask2;
  return static_cast<double>(std::bit_cast<float>(bits));
}

double unit_to_signed(double u) {
  if (!(u >= 1.0 && u < 2.0)) {
    throw NumericError("unit_to_signed: input " + std::to_string(u) + " outside [1,2)");
  }
  return 2.0 * u - 3.0;
}

double feature_weight(std::uint64_t feature_id, std::uint32_t round, std::uint32_t neuron) {
  unsigned char msg[12];
  for (int i = 0; i < 8; ++i) msg[i] = static_cast<unsigned char>(feature_id >> (8 * i));
  for (int i = 0; i < 4; ++i) msg[8 + i] = static_cast<unsigned char>(round >> (8 * i));
  return unit_to_signed(bits_to_unit_float(xxhash32(msg, sizeof(msg), neuron)));
}

namespace {

// Unbiased draw in [0, n) by rejection; pinned here so the seeded shuffle
// does not depend on standard-library distribution internals.
std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t r;
  do {
    r = rng();
  } while (r >= limit);
  return r % n;
}

}  // namespace

Eigen::MatrixXd gen_dense_weights(std::uint64_t seed, Eigen::Index m, Eigen::Index k,
                                  double sparsify_fraction) {
  if (m < 1 || k < 1) throw NumericError("gen_dense_weights: m and k must be >= 1");
  if (!(sparsify_fraction >= 0.0 && sparsify_fraction < 1.0)) {
    throw NumericError("gen_dense_weights: sparsify_fraction must be in [0,1)");
  }
  std::mt19937_64 rng(seed);
  Eigen::MatrixXd w(m, k);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0,1)
      w(i, j) = 2.0 * u - 1.0;
    }
  }
  const auto total = static_cast<std::uint64_t>(m) * static_cast<std::uint64_t>(k);
  const auto zeros = static_cast<std::uint64_t>(std::llround(sparsify_fraction * static_cast<double>(total)));
  if (zeros > 0) {
    std::vector<std::uint64_t> flat(total);
    for (std::uint64_t i = 0; i < total; ++i) flat[i] = i;
    // Partial Fisher-Yates: the first `zeros` entries after shuffling.
    for (std::uint64_t i = 0; i < zeros; ++i) {
      const std::uint64_t r = i + bounded_draw(rng, total - i);
      std::swap(flat[i], flat[r]);
      const auto pos = flat[i];
      w(static_cast<Eigen::Index>(pos / static_cast<std::uint64_t>(k)),
        static_cast<Eigen::Index>(pos % static_cast<std::uint64_t>(k))) = 0.0;
    }
  }
  return w;
}

}  // namespace gbun
