#pragma once

#include <string>
#include <utility>
#include <vector>

namespace hvqe {

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // sum of squared residuals
  int points = 0;
};

/// Ordinary least squares on (x, y); throws on fewer than two points or
/// degenerate x.
FitResult linear_fit(const std::vector<std::pair<double, double>>& points);

/// One summary row as consumed by the fitting routines.
struct RunSummaryRow {
  std::string kind;
  int nqubits = 0;
  double e_f = 0.0;
  bool has_e0 = false;
  double e0 = 0.0;
};

struct ExtrapolationResult {
  FitResult fit;
  double per_spin_estimate = 0.0;  // slope of total E vs N
  double reference = 0.0;          // Bethe constant
  double difference = 0.0;
};

/// Slope of total final energy vs N over ring results; at least three rows of
/// one lattice kind.
ExtrapolationResult thermodynamic_extrapolation(const std::vector<RunSummaryRow>& rows);

enum class Abscissa { N, LogN, InvN };
Abscissa abscissa_from_string(const std::string& s);

struct ErrorScalingResult {
  FitResult fit;
  Abscissa abscissa = Abscissa::N;
};

/// Fits per-spin error |E_f - E_0| / N against the transformed lattice size.
ErrorScalingResult error_scaling_fit(const std::vector<RunSummaryRow>& rows, Abscissa abscissa);

double error_scaling_prediction(const ErrorScalingResult& r, double n);

}  // namespace hvqe
