#include "dnes/compressors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace dnes {

namespace {

double sign_of(double v) { return (v > 0.0) - (v < 0.0); }

int ceil_log2(int d) {
  int bits = 0;
  while ((1LL << bits) < d) ++bits;
  return bits;
}

}  // namespace

// ---------------------------------------------------------------- identity

CompressorConstants IdentityCompressor::constants(int) const { return {0.0, 1.0, 1.0}; }

std::int64_t IdentityCompressor::payload_bits(int d, int scalar_bits) const {
  return static_cast<std::int64_t>(d) * scalar_bits;
}

CompressedPayload IdentityCompressor::compress(const Vector& x, RngStream&, int scalar_bits) const {
  return {x, payload_bits(static_cast<int>(x.size()), scalar_bits)};
}

// --------------------------------------------------------------- quantizer

StochasticQuantizer::StochasticQuantizer(int bits) : bits_(bits) {
  if (bits < 1 || bits > 30) throw std::invalid_argument("StochasticQuantizer: bits must lie in [1, 30]");
  levels_ = (1 << bits) - 1;
}

CompressorConstants StochasticQuantizer::constants(int d) const {
  const double s = levels_;
  const double dd = d;
  const double C = std::min(dd / (4.0 * s * s), std::sqrt(dd) / s);
  return {C, 1.0 / (1.0 + C), 1.0 + C};
}

std::int64_t StochasticQuantizer::payload_bits(int d, int scalar_bits) const {
  return static_cast<std::int64_t>(bits_ + 1) * d + scalar_bits;
}

CompressedPayload StochasticQuantizer::compress(const Vector& x, RngStream& rng, int scalar_bits) const {
  const auto d = x.size();
  CompressedPayload out{Vector::Zero(d), payload_bits(static_cast<int>(d), scalar_bits)};
  const double scale = x.lpNorm<Eigen::Infinity>();
  if (scale == 0.0) return out;
  const double s = levels_;
  for (Eigen::Index j = 0; j < d; ++j) {
    // One uniform per entry, drawn even for zero entries, so the stream
    // position depends only on d.
    const double u = rng.uniform();
    const double level = std::floor(s * std::abs(x(j)) / scale + u);
    out.value(j) = scale * sign_of(x(j)) * std::min(level, s) / s;
  }
  return out;
}

// ------------------------------------------------------------------- top-k

TopKCompressor::TopKCompressor(int k) : k_(k) {
  if (k < 1) throw std::invalid_argument("TopKCompressor: k must be at least 1");
}

CompressorConstants TopKCompressor::constants(int d) const {
  const double frac = static_cast<double>(std::min(k_, d)) / d;
  return {1.0 - frac, frac, 1.0};
}

std::int64_t TopKCompressor::payload_bits(int d, int scalar_bits) const {
  return static_cast<std::int64_t>(std::min(k_, d)) * (scalar_bits + ceil_log2(d));
}

CompressedPayload TopKCompressor::compress(const Vector& x, RngStream&, int scalar_bits) const {
  const auto d = x.size();
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(d));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return std::abs(x(a)) > std::abs(x(b)); });
  CompressedPayload out{Vector::Zero(d), payload_bits(static_cast<int>(d), scalar_bits)};
  const auto keep = std::min<Eigen::Index>(k_, d);
  for (Eigen::Index t = 0; t < keep; ++t) out.value(idx[static_cast<std::size_t>(t)]) = x(idx[static_cast<std::size_t>(t)]);
  return out;
}

// --------------------------------------------------------------- norm-sign

CompressorConstants NormSignCompressor::constants(int d) const {
  const double inv = 1.0 / d;
  return {1.0 - inv, inv, 1.0};
}

std::int64_t NormSignCompressor::payload_bits(int d, int scalar_bits) const {
  return static_cast<std::int64_t>(d) + scalar_bits;
}

CompressedPayload NormSignCompressor::compress(const Vector& x, RngStream&, int scalar_bits) const {
  const auto d = x.size();
  CompressedPayload out{Vector::Zero(d), payload_bits(static_cast<int>(d), scalar_bits)};
  if (d == 0) return out;
  const double mag = x.lpNorm<1>() / static_cast<double>(d);
  for (Eigen::Index j = 0; j < d; ++j) out.value(j) = mag * sign_of(x(j));
  return out;
}

// ----------------------------------------------------------- certification

bool ConstantEstimate::within_declared(double n_stderr) const {
  return C_mean <= declared.C + n_stderr * C_stderr &&
         scaled_mean <= (1.0 - declared.delta) + n_stderr * scaled_stderr;
}

ConstantEstimate estimate_constants(const Compressor& c, int d, int n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw std::invalid_argument("estimate_constants: n_samples must be at least 1");
  if (d < 1) throw std::invalid_argument("estimate_constants: dimension must be at least 1");
  ConstantEstimate est;
  est.d = d;
  est.samples = n_samples;
  est.declared = c.constants(d);

  // Running sums for mean and variance of each statistic.
  double s1 = 0, s1sq = 0, s2 = 0, s2sq = 0, sb = 0, sbsq = 0;
  RngStream input_rng(seed, StreamPurpose::certification, 0, 0);
  for (int t = 0; t < n_samples; ++t) {
    Vector x(d);
    for (int j = 0; j < d; ++j) x(j) = input_rng.normal();
    const double xsq = x.squaredNorm();
    RngStream comp_rng(seed, StreamPurpose::compressor, 0, static_cast<std::uint64_t>(t));
    const Vector y = c.compress(x, comp_rng, 32).value;
    const double r1 = (y - x).squaredNorm() / xsq;
    const double r2 = (y / est.declared.r - x).squaredNorm() / xsq;
    s1 += r1;
    s1sq += r1 * r1;
    s2 += r2;
    s2sq += r2 * r2;
    est.C_max = std::max(est.C_max, r1);
    const Vector err = y - x;
    for (int j = 0; j < d; ++j) {
      sb += err(j);
      sbsq += err(j) * err(j);
    }
  }
  auto mean_se = [](double sum, double sumsq, double count, double& mean, double& se) {
    mean = sum / count;
    const double var = count > 1 ? std::max(0.0, (sumsq - count * mean * mean) / (count - 1)) : 0.0;
    se = std::sqrt(var / count);
  };
  const double ns = n_samples;
  mean_se(s1, s1sq, ns, est.C_mean, est.C_stderr);
  mean_se(s2, s2sq, ns, est.scaled_mean, est.scaled_stderr);
  mean_se(sb, sbsq, ns * d, est.bias_mean, est.bias_stderr);
  est.delta_estimate = 1.0 - est.scaled_mean;
  return est;
}

ConstantEstimate certify_constants(const Compressor& c, int d, int n_samples, std::uint64_t seed) {
  auto est = estimate_constants(c, d, n_samples, seed);
  if (!est.within_declared()) {
    std::ostringstream msg;
    msg << "compressor '" << c.name() << "' fails certification at d=" << d << ": empirical C "
        << est.C_mean << " (se " << est.C_stderr << ") vs declared " << est.declared.C
        << ", scaled ratio " << est.scaled_mean << " (se " << est.scaled_stderr << ") vs declared "
        << 1.0 - est.declared.delta;
    throw std::domain_error(msg.str());
  }
  return est;
}

}  // namespace dnes
