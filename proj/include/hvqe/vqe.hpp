#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hvqe/ansatz.hpp"
#include "hvqe/lattice.hpp"

namespace hvqe {

enum class OptimizerKind { QuasiNewton, GradientFree };
enum class Estimator { Exact, Sampled };
enum class EnginePath { Fused, Circuit };

struct VqeConfig {
  LatticeKind lattice_kind = LatticeKind::Ring;
  std::vector<int> dims;
  Boundary boundary = Boundary::Periodic;
  CouplingModel coupling;

  AnsatzFamily ansatz = AnsatzFamily::XY;
  int layers = 1;  // HVA only

  std::optional<std::string> custom_bitstring;  // default: Néel rule
  ParamInit init = ParamInit::Zeros;
  std::optional<std::uint64_t> init_seed;

  OptimizerKind optimizer = OptimizerKind::QuasiNewton;
  double fd_step = 1.49e-8;  // scaled by max(1, |x_i|) per component
  double simplex_step = 0.1;
  double grad_tol = 1e-6;
  double rel_tol = 1e-10;
  long max_evals = 0;  // required, no silent default
  double wall_seconds = std::numeric_limits<double>::infinity();

  Estimator estimator = Estimator::Exact;
  long shots = 10000;
  std::uint64_t shot_seed = 1;

  EnginePath engine_path = EnginePath::Fused;

  std::string checkpoint_path;  // empty: no checkpoint files
  bool timestamps = false;      // real wall clock in trace/summary (breaks byte reproducibility)

  void validate() const;
  /// Digest over the physics-defining fields (budgets and paths excluded so a
  /// resumed run matches its parent).
  std::string digest() const;
};

struct TraceRecord {
  long eval = 0;  // 1-based, dense
  double energy = 0.0;
  double best = 0.0;
  double seconds = 0.0;
};

struct EnergyTrace {
  std::vector<TraceRecord> records;
  void append(double energy, double seconds);
  long evals() const { return static_cast<long>(records.size()) + offset; }
  long offset = 0;  // evaluations consumed before this trace (resume)
  double best_so_far = std::numeric_limits<double>::infinity();
};

struct BudgetExhausted : std::runtime_error {
  BudgetExhausted() : std::runtime_error("evaluation budget exhausted") {}
};
struct OptimizerAbort : std::runtime_error {
  explicit OptimizerAbort(const std::string& m) : std::runtime_error(m) {}
};

enum class StopReason { GradTol, Flat, Budget, Wall, Stalled, MaxIter };
std::string to_string(StopReason r);

using Objective = std::function<double(const std::vector<double>&)>;

/// Forward differences: one base evaluation plus P shifted ones, P+1 total.
/// Step per component: h * max(1, |x_i|).
std::vector<double> finite_difference_gradient(const Objective& f, const std::vector<double>& x,
                                               double h, double* f0_out = nullptr);

struct MinimizeResult {
  std::vector<double> x;
  double f = 0.0;
  StopReason stop = StopReason::MaxIter;
};

struct MinimizeOptions {
  double grad_tol = 1e-6;
  double rel_tol = 1e-10;
  double fd_step = 1.49e-8;
  double simplex_step = 0.1;
  long max_iter = 100000;
  // Invoked at every accepted iterate (checkpoint hook).
  std::function<void(const std::vector<double>&, double)> on_iterate;
};

/// BFGS with forward-difference gradients and Armijo backtracking. The
/// objective may throw BudgetExhausted; the best point seen is returned.
MinimizeResult minimize_quasi_newton(const Objective& f, const std::vector<double>& x0,
                                     const MinimizeOptions& opts);

/// Nelder-Mead with dimension-adaptive coefficients; same contract.
MinimizeResult minimize_gradient_free(const Objective& f, const std::vector<double>& x0,
                                      const MinimizeOptions& opts);

struct Checkpoint {
  std::vector<double> params;
  long evals = 0;
  double best_energy = 0.0;
  std::vector<double> best_params;
  std::uint64_t rng = 0;
  std::string config_sha256;
};

std::string checkpoint_to_json(const Checkpoint& c);
Checkpoint checkpoint_from_json(const std::string& text);
void save_checkpoint(const Checkpoint& c, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

struct VqeRun {
  VqeConfig config;
  std::string config_sha256;
  int nqubits = 0;
  EnergyTrace trace;
  double best_energy = 0.0;
  std::vector<double> best_params;
  long total_evals = 0;
  StopReason stop = StopReason::Budget;
  double wall_seconds = 0.0;
  Checkpoint final_checkpoint;
  // Filled when an exact baseline is requested by the caller.
  std::optional<double> e0;
  std::optional<double> overlap_with_ground;
};

VqeRun run_vqe(const VqeConfig& config);
VqeRun resume_vqe(const VqeConfig& config, const Checkpoint& checkpoint, long extra_budget);

/// `eval,energy,best,seconds` with LF endings, energies at 17 significant digits.
std::string trace_to_csv(const EnergyTrace& t);
std::string summary_to_json(const VqeRun& run);

/// Attaches Lanczos baseline energy and ground-state overlap to a finished run.
void attach_exact_baseline(VqeRun& run);

}  // namespace hvqe
