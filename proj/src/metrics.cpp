#include "dnes/metrics.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace dnes {

double residual(const Matrix& Xk, const Matrix& Xstar, const Matrix& X0) {
  const double denom = (X0 - Xstar).norm();
  if (denom == 0.0) throw std::invalid_argument("residual: X_0 equals X*, residual undefined");
  return (Xk - Xstar).norm() / denom;
}

RateFit linear_rate_fit(std::span<const double> residuals, std::size_t first, std::size_t last) {
  if (last > residuals.size() || first >= last || last - first < 2) {
    throw std::invalid_argument("linear_rate_fit: window needs at least two points inside the trace");
  }
  const double count = static_cast<double>(last - first);
  double sx = 0, sy = 0;
  for (std::size_t k = first; k < last; ++k) {
    if (!(residuals[k] > 0.0)) throw std::invalid_argument("linear_rate_fit: residuals must be positive");
    sx += static_cast<double>(k);
    sy += std::log(residuals[k]);
  }
  const double mx = sx / count, my = sy / count;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t k = first; k < last; ++k) {
    const double dx = static_cast<double>(k) - mx;
    const double dy = std::log(residuals[k]) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  // A flat series is fitted exactly by a zero slope.
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

RateFit linear_rate_fit(const RunTrace& trace, std::size_t first, std::size_t last) {
  std::vector<double> r;
  r.reserve(trace.records.size());
  for (const auto& rec : trace.records) r.push_back(rec.residual);
  return linear_rate_fit(r, first, last);
}

std::int64_t bits_accounting(std::span<const char> triggers, const Compressor& compressor, int d, int scalar_bits) {
  std::int64_t fired = 0;
  for (char t : triggers) fired += t ? 1 : 0;
  return fired * compressor.payload_bits(d, scalar_bits);
}

std::int64_t bits_accounting_uncompressed(std::span<const char> triggers, int d, int scalar_bits) {
  std::int64_t fired = 0;
  for (char t : triggers) fired += t ? 1 : 0;
  return fired * static_cast<std::int64_t>(d) * scalar_bits;
}

void write_trace_csv(std::ostream& out, const RunTrace& trace) {
  out << "k,residual,v1,v2,event_err_sq,bits_cum,rounds_cum,n_triggered\n";
  out << std::setprecision(17);
  for (const auto& r : trace.records) {
    out << r.k << ',' << r.residual << ',' << r.v1 << ',' << r.v2 << ',' << r.event_err_sq << ',' << r.bits_cum
        << ',' << r.rounds_cum << ',' << r.n_triggered << '\n';
  }
}

void write_trigger_log(std::ostream& out, const RunTrace& trace) {
  out << "agent,iteration\n";
  for (const auto& r : trace.records) {
    for (std::size_t i = 0; i < r.triggers.size(); ++i) {
      if (r.triggers[i]) out << i + 1 << ',' << r.k << '\n';
    }
  }
}

void write_summary(std::ostream& out, const TraceSummary& s) {
  out << std::setprecision(17);
  out << "iterations = " << s.iterations << '\n'
      << "final_residual = " << s.final_residual << '\n'
      << "total_bits = " << s.total_bits << '\n'
      << "total_rounds = " << s.total_rounds << '\n'
      << "communication_rate = " << s.communication_rate << '\n'
      << "reached_target = " << (s.reached_target ? "true" : "false") << '\n';
}

}  // namespace dnes
