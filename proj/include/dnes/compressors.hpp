#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "dnes/rng.hpp"
#include "dnes/types.hpp"

namespace dnes {

/// Constants of the bounded-relative-error compressor class:
///   E||C(x) - x||^2   <= C ||x||^2
///   E||C(x)/r - x||^2 <= (1 - delta) ||x||^2
struct CompressorConstants {
  double C = 0.0;
  double delta = 1.0;
  double r = 1.0;
};

/// Output of one compression: the vector a receiver reconstructs and the
/// number of bits it took on the wire.
struct CompressedPayload {
  Vector value;
  std::int64_t bit_count = 0;
};

class Compressor {
 public:
  virtual ~Compressor() = default;

  virtual std::string name() const = 0;
  /// Declared constants for vectors of dimension d.
  virtual CompressorConstants constants(int d) const = 0;
  /// Payload size for dimension d when one scalar costs `scalar_bits`.
  virtual std::int64_t payload_bits(int d, int scalar_bits) const = 0;
  /// Compresses x. Stochastic compressors draw from `rng`; deterministic ones ignore it.
  virtual CompressedPayload compress(const Vector& x, RngStream& rng, int scalar_bits) const = 0;
};

/// C = 0, delta = 1, r = 1; costs d*l bits.
class IdentityCompressor final : public Compressor {
 public:
  std::string name() const override { return "identity"; }
  CompressorConstants constants(int d) const override;
  std::int64_t payload_bits(int d, int scalar_bits) const override;
  CompressedPayload compress(const Vector& x, RngStream& rng, int scalar_bits) const override;
};

/// Unbiased stochastic quantizer with s = 2^b - 1 levels scaled by the infinity
/// norm. Each entry becomes ||x||_inf * sign(x_j) * k_j / s with
/// k_j = floor(s |x_j| / ||x||_inf + u_j), u_j ~ U[0, 1). Payload: one norm
/// scalar, one sign bit and b level bits per entry, i.e. (b + 1) d + l bits.
///
/// Declared variance bound C = min(d / (4 s^2), sqrt(d) / s); the r-scaling
/// constants follow from unbiasedness as r = 1 + C, delta = 1 / (1 + C).
class StochasticQuantizer final : public Compressor {
 public:
  explicit StochasticQuantizer(int bits);

  int bits() const { return bits_; }
  int levels() const { return levels_; }

  std::string name() const override { return "quantize"; }
  CompressorConstants constants(int d) const override;
  std::int64_t payload_bits(int d, int scalar_bits) const override;
  CompressedPayload compress(const Vector& x, RngStream& rng, int scalar_bits) const override;

 private:
  int bits_;
  int levels_;
};

/// Keeps the k largest-magnitude entries (ties go to the lower index).
/// C = 1 - k/d, delta = k/d, r = 1; costs k (l + ceil(log2 d)) bits.
/// k is clamped to d for shorter vectors.
class TopKCompressor final : public Compressor {
 public:
  explicit TopKCompressor(int k);

  int k() const { return k_; }

  std::string name() const override { return "topk"; }
  CompressorConstants constants(int d) const override;
  std::int64_t payload_bits(int d, int scalar_bits) const override;
  CompressedPayload compress(const Vector& x, RngStream& rng, int scalar_bits) const override;

 private:
  int k_;
};

/// Scaled sign: (||x||_1 / d) sign(x), sign(0) = 0.
/// C = 1 - 1/d, delta = 1/d, r = 1; costs d + l bits.
class NormSignCompressor final : public Compressor {
 public:
  std::string name() const override { return "normsign"; }
  CompressorConstants constants(int d) const override;
  std::int64_t payload_bits(int d, int scalar_bits) const override;
  CompressedPayload compress(const Vector& x, RngStream& rng, int scalar_bits) const override;
};

/// Monte Carlo estimates of the compressor constants over standard-normal inputs.
struct ConstantEstimate {
  int d = 0;
  int samples = 0;
  CompressorConstants declared;
  double C_mean = 0.0;        ///< mean of ||C(x) - x||^2 / ||x||^2
  double C_stderr = 0.0;
  double scaled_mean = 0.0;   ///< mean of ||C(x)/r - x||^2 / ||x||^2
  double scaled_stderr = 0.0;
  double C_max = 0.0;         ///< worst single-sample ratio
  double delta_estimate = 0.0;  ///< 1 - scaled_mean
  double bias_mean = 0.0;     ///< mean of all coordinates of C(x) - x
  double bias_stderr = 0.0;

  bool within_declared(double n_stderr = 3.0) const;
};

ConstantEstimate estimate_constants(const Compressor& c, int d, int n_samples, std::uint64_t seed);

/// Same as estimate_constants, but throws std::domain_error when either
/// empirical ratio exceeds its declared bound by more than three standard errors.
ConstantEstimate certify_constants(const Compressor& c, int d, int n_samples, std::uint64_t seed);

}  // namespace dnes
