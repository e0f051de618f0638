#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "dnes/compressors.hpp"
#include "dnes/types.hpp"

namespace dnes {

/// State metrics of X_k together with the communication spent at iteration k.
struct IterationRecord {
  long k = 0;
  double residual = 0.0;      ///< ||X_k - X*||_F / ||X_0 - X*||_F
  double v1 = 0.0;            ///< ||X_k - X*||_F^2
  double v2 = 0.0;            ///< ||X_k - H_k||_F^2
  double event_err_sq = 0.0;  ///< ||E_k||_F^2
  std::int64_t bits_cum = 0;
  std::int64_t rounds_cum = 0;
  int n_triggered = 0;
  std::vector<char> triggers;  ///< per-agent indicator at iteration k
};

struct TraceSummary {
  long iterations = 0;  ///< steps executed
  double final_residual = 0.0;
  std::int64_t total_bits = 0;
  std::int64_t total_rounds = 0;
  /// Trigger events / (agents * iterations); 0 for an empty run.
  double communication_rate = 0.0;
  bool reached_target = false;
};

struct RunTrace {
  int agents = 0;
  std::vector<IterationRecord> records;
  TraceSummary summary;
};

/// ||X_k - X*||_F / ||X_0 - X*||_F. Throws std::invalid_argument if X_0 == X*.
double residual(const Matrix& Xk, const Matrix& Xstar, const Matrix& X0);

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Least-squares fit of ln R_k against k on the window [first, last).
/// Throws std::invalid_argument for windows shorter than two points or
/// nonpositive residuals.
RateFit linear_rate_fit(std::span<const double> residuals, std::size_t first, std::size_t last);
RateFit linear_rate_fit(const RunTrace& trace, std::size_t first, std::size_t last);

/// Bits spent by one iteration: payload bits summed over triggered agents.
std::int64_t bits_accounting(std::span<const char> triggers, const Compressor& compressor, int d, int scalar_bits);
/// Uncompressed cost model: d * l per triggered agent.
std::int64_t bits_accounting_uncompressed(std::span<const char> triggers, int d, int scalar_bits);

/// Column order: k, residual, v1, v2, event_err_sq, bits_cum, rounds_cum, n_triggered.
void write_trace_csv(std::ostream& out, const RunTrace& trace);
/// One `agent,iteration` line per trigger event (agent 1-based).
void write_trigger_log(std::ostream& out, const RunTrace& trace);
void write_summary(std::ostream& out, const TraceSummary& summary);

}  // namespace dnes
