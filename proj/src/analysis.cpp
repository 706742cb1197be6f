#include "hvqe/analysis.hpp"

#include <cmath>
#include <stdexcept>

#include "hvqe/exact.hpp"

namespace hvqe {

FitResult linear_fit(const std::vector<std::pair<double, double>>& points) {
  const int n = static_cast<int>(points.size());
  if (n < 2) throw std::invalid_argument("linear fit needs at least two points");
  double sx = 0, sy = 0;
  for (auto& [x, y] : points) {
    sx += x;
    sy += y;
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (auto& [x, y] : points) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (sxx <= 0) throw std::invalid_argument("degenerate x values");
  FitResult r;
  r.slope = sxy / sxx;
  r.intercept = my - r.slope * mx;
  r.points = n;
  for (auto& [x, y] : points) {
    double d = y - (r.slope * x + r.intercept);
    r.residual += d * d;
  }
  return r;
}

ExtrapolationResult thermodynamic_extrapolation(const std::vector<RunSummaryRow>& rows) {
  if (rows.size() < 3) throw std::invalid_argument("need at least three ring results");
  for (const auto& r : rows)
    if (r.kind != rows.front().kind)
      throw std::invalid_argument("mixed lattice kinds in extrapolation input");
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : rows) pts.emplace_back(r.nqubits, r.e_f);
  ExtrapolationResult out;
  out.fit = linear_fit(pts);
  out.per_spin_estimate = out.fit.slope;
  out.reference = bethe_reference();
  out.difference = out.per_spin_estimate - out.reference;
  return out;
}

Abscissa abscissa_from_string(const std::string& s) {
  if (s == "n") return Abscissa::N;
  if (s == "logn") return Abscissa::LogN;
  if (s == "invn") return Abscissa::InvN;
  throw std::invalid_argument("unknown abscissa: " + s);
}

namespace {

double transform(Abscissa a, double n) {
  switch (a) {
    case Abscissa::N: return n;
    case Abscissa::LogN: return std::log(n);
    case Abscissa::InvN: return 1.0 / n;
  }
  return n;
}

}  // namespace

ErrorScalingResult error_scaling_fit(const std::vector<RunSummaryRow>& rows, Abscissa abscissa) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : rows) {
    if (!r.has_e0) throw std::invalid_argument("error scaling fit requires exact baselines");
    pts.emplace_back(transform(abscissa, r.nqubits), std::abs(r.e_f - r.e0) / r.nqubits);
  }
  ErrorScalingResult out;
  out.fit = linear_fit(pts);
  out.abscissa = abscissa;
  return out;
}

double error_scaling_prediction(const ErrorScalingResult& r, double n) {
  return r.fit.slope * transform(r.abscissa, n) + r.fit.intercept;
}

}  // namespace hvqe
