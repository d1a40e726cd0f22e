#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include <Eigen/Core>

namespace gbun {

/// 32-bit xxHash (XXH32). Pinned algorithm: hashed-mode models depend on it
/// being bit-stable across builds and platforms.
std::uint32_t xxhash32(const void* data, std::size_t len, std::uint32_t seed);

/// Mask constants forcing a 32-bit hash word into an IEEE 754 binary32
/// value in [1.0, 2.0): clear sign + exponent, then set exponent to 0.
inline constexpr std::uint32_t kMask1 = 0x3FFFFFFFu;
inline constexpr std::uint32_t kMask2 = 0x3F800000u;

/// reinterpret((h & Mask1) | Mask2) as binary32, widened to double.
/// The result is always in [1.0, 2.0).
double bits_to_unit_float(std::uint32_t h);

/// Affine map [1,2) -> [-1,1): u -> 2u - 3. Throws NumericError if u is
/// outside [1,2).
double unit_to_signed(double u);

/// On-the-fly hashed weight for (feature, round, output neuron). The hash
/// message is LE-u64(feature_id) || LE-u32(round); the neuron index is the
/// hash seed. Pure and deterministic; result in [-1, 1).
double feature_weight(std::uint64_t feature_id, std::uint32_t round, std::uint32_t neuron);

/// Name of the pinned dense-mode generator, recorded in model files.
/// mt19937_64 with the 53-bit mantissa mapping (x >> 11) * 2^-53.
inline constexpr const char* kDensePrngName = "mt19937_64-u53";

/// m x k weight matrix with entries iid uniform[-1,1) drawn in row-major
/// fill order, then exactly round(sparsify_fraction * m * k) entries zeroed
/// at positions chosen by a seeded shuffle. Reproducible from the seed.
Eigen::MatrixXd gen_dense_weights(std::uint64_t seed, Eigen::Index m, Eigen::Index k,
                                  double sparsify_fraction);

/// Per-round weight synthesis descriptor. Hashed mode stores no weights;
/// dense mode is reproducible from (dense_seed, m, k, sparsify_fraction).
struct WeightMode {
  enum class Kind { Dense, Hashed };
  Kind kind = Kind::Hashed;
  std::uint64_t dense_seed = 0;
  double sparsify_fraction = 0.0;
  std::string prng_name = kDensePrngName;
};

}  // namespace gbun
