#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "hvqe/exact.hpp"
#include "hvqe/vqe.hpp"

using namespace hvqe;

namespace {

VqeConfig ring_config(int n, long budget) {
  VqeConfig cfg;
  cfg.lattice_kind = LatticeKind::Ring;
  cfg.dims = {n};
  cfg.boundary = Boundary::Periodic;
  cfg.max_evals = budget;
  return cfg;
}

}  // namespace

TEST_CASE("forward-difference gradient") {
  long evals = 0;
  Objective constant = [&](const std::vector<double>&) {
    ++evals;
    return 7.0;
  };
  auto g = finite_difference_gradient(constant, {1.0, 2.0, 3.0}, 1e-6);
  CHECK(evals == 4);  // P+1 exactly
  for (double v : g) CHECK(v == 0.0);

  // f = sum x_i^2 at the origin: forward-difference bias gives g_i = h.
  Objective quad = [](const std::vector<double>& x) {
    double s = 0;
    for (double v : x) s += v * v;
    return s;
  };
  auto g2 = finite_difference_gradient(quad, {0.0, 0.0}, 1e-6);
  for (double v : g2) CHECK(std::abs(v - 1e-6) <= 1e-9);

  CHECK_THROWS(finite_difference_gradient(quad, {0.0}, 0.0));
}

TEST_CASE("quasi-newton minimizes a quadratic") {
  long evals = 0;
  Objective f = [&](const std::vector<double>& x) {
    ++evals;
    return (x[0] - 1.0) * (x[0] - 1.0) + 4.0 * (x[1] + 2.0) * (x[1] + 2.0);
  };
  MinimizeOptions opts;
  opts.grad_tol = 1e-8;
  auto res = minimize_quasi_newton(f, {0.0, 0.0}, opts);
  CHECK(evals <= 200);
  CHECK(std::abs(res.x[0] - 1.0) <= 1e-6);
  CHECK(std::abs(res.x[1] + 2.0) <= 1e-6);
  CHECK(res.f <= 1e-10);
}

TEST_CASE("nelder-mead minimizes a quadratic") {
  long evals = 0;
  Objective f = [&](const std::vector<double>& x) {
    ++evals;
    return (x[0] - 1.0) * (x[0] - 1.0) + 4.0 * (x[1] + 2.0) * (x[1] + 2.0);
  };
  MinimizeOptions opts;
  opts.rel_tol = 1e-12;
  opts.simplex_step = 0.5;
  auto res = minimize_gradient_free(f, {0.0, 0.0}, opts);
  CHECK(evals <= 500);
  CHECK(std::abs(res.x[0] - 1.0) <= 1e-4);
  CHECK(std::abs(res.x[1] + 2.0) <= 1e-4);
}

TEST_CASE("nelder-mead terminates on a constant objective") {
  Objective f = [](const std::vector<double>&) { return 1.0; };
  MinimizeOptions opts;
  auto res = minimize_gradient_free(f, {0.0, 0.0, 0.0}, opts);
  CHECK(res.stop == StopReason::Flat);
}

TEST_CASE("optimizer aborts on non-finite objective") {
  Objective f = [](const std::vector<double>&) { return std::nan(""); };
  MinimizeOptions opts;
  CHECK_THROWS_AS(minimize_quasi_newton(f, {0.0}, opts), OptimizerAbort);
  CHECK_THROWS_AS(minimize_gradient_free(f, {0.0}, opts), OptimizerAbort);
}

TEST_CASE("four-site ring converges to -8 and counts evaluations") {
  auto cfg = ring_config(4, 20000);
  cfg.grad_tol = 1e-8;
  auto run = run_vqe(cfg);
  CHECK(std::abs(run.best_energy + 8.0) <= 1e-6);
  // First evaluation: identity circuit on the Néel state.
  CHECK(run.trace.records.front().energy == doctest::Approx(-4.0));
  // Gradient accounting: the first 13 evaluations are the initial gradient
  // (P+1 = 13) and the staircase between iterates is at least P+1 long.
  CHECK(run.total_evals >= 13);
  CHECK(run.total_evals <= 20000);
}

TEST_CASE("trace invariants") {
  auto cfg = ring_config(6, 400);
  auto run = run_vqe(cfg);
  long expect_eval = 1;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& r : run.trace.records) {
    CHECK(r.eval == expect_eval++);
    best = std::min(best, r.energy);
    CHECK(r.best == best);
  }
  CHECK(run.total_evals <= 400);
}

TEST_CASE("variational bound holds along the whole trace") {
  auto cfg = ring_config(6, 300);
  auto run = run_vqe(cfg);
  auto h = build_hamiltonian(build_lattice(LatticeKind::Ring, {6}, Boundary::Periodic),
                             {CouplingMode::Isotropic, std::nullopt});
  double e0 = dense_ground_energy(h);
  for (const auto& r : run.trace.records) CHECK(r.energy >= e0 - 1e-9);
}

TEST_CASE("determinism: identical config gives identical traces") {
  auto cfg = ring_config(6, 250);
  auto a = run_vqe(cfg);
  auto b = run_vqe(cfg);
  CHECK(trace_to_csv(a.trace) == trace_to_csv(b.trace));
  CHECK(summary_to_json(a) == summary_to_json(b));
}

TEST_CASE("budget is a graceful stop") {
  auto cfg = ring_config(6, 100);
  auto run = run_vqe(cfg);
  CHECK(run.total_evals == 100);
  CHECK(run.stop == StopReason::Budget);
}

TEST_CASE("budget below P+1 is rejected for quasi-newton") {
  auto cfg = ring_config(4, 5);
  CHECK_THROWS(run_vqe(cfg));
}

TEST_CASE("checkpoint round-trip and resume seam") {
  auto cfg = ring_config(8, 200);
  auto first = run_vqe(cfg);
  CHECK(first.final_checkpoint.evals == 200);

  auto resumed = resume_vqe(cfg, first.final_checkpoint, 200);
  CHECK(resumed.trace.records.front().eval == 201);
  CHECK(resumed.total_evals == 400);
  // Nonincreasing best across the seam.
  CHECK(resumed.trace.records.front().best <= first.trace.records.back().best);
  // Resumed leg never ends worse than the first leg.
  CHECK(resumed.best_energy <= first.best_energy + 1e-12);

  auto text = checkpoint_to_json(first.final_checkpoint);
  auto back = checkpoint_from_json(text);
  CHECK(back.params == first.final_checkpoint.params);
  CHECK(back.evals == first.final_checkpoint.evals);
  CHECK(back.config_sha256 == first.final_checkpoint.config_sha256);
}

TEST_CASE("resume rejects a mismatched config") {
  auto cfg = ring_config(8, 200);
  auto run = run_vqe(cfg);
  auto other = ring_config(6, 200);
  CHECK_THROWS(resume_vqe(other, run.final_checkpoint, 100));
}

TEST_CASE("hva with zeros is trapped at the first iterate") {
  auto cfg = ring_config(6, 500);
  cfg.ansatz = AnsatzFamily::HamiltonianVariational;
  cfg.layers = 1;
  cfg.grad_tol = 1e-6;
  auto run = run_vqe(cfg);
  // All generators annihilate the Néel state's gradient signal: the very
  // first gradient is zero and the optimizer stops where it started.
  CHECK(run.stop == StopReason::GradTol);
  CHECK(run.best_energy == doctest::Approx(-6.0));
}

TEST_CASE("hva rejects non-ring lattices") {
  VqeConfig cfg;
  cfg.lattice_kind = LatticeKind::Square;
  cfg.dims = {3, 3};
  cfg.boundary = Boundary::Open;
  cfg.ansatz = AnsatzFamily::HamiltonianVariational;
  cfg.max_evals = 100;
  CHECK_THROWS(run_vqe(cfg));
}

TEST_CASE("sampled estimator runs deterministically through the loop") {
  auto cfg = ring_config(4, 60);
  cfg.estimator = Estimator::Sampled;
  cfg.shots = 500;
  cfg.shot_seed = 5;
  cfg.optimizer = OptimizerKind::GradientFree;
  auto a = run_vqe(cfg);
  auto b = run_vqe(cfg);
  CHECK(trace_to_csv(a.trace) == trace_to_csv(b.trace));
}

TEST_CASE("summary json carries the baseline when attached") {
  auto cfg = ring_config(4, 2000);
  auto run = run_vqe(cfg);
  attach_exact_baseline(run);
  REQUIRE(run.e0.has_value());
  CHECK(*run.e0 == doctest::Approx(-8.0));
  REQUIRE(run.overlap_with_ground.has_value());
  auto j = summary_to_json(run);
  CHECK(j.find("\"e0\":") != std::string::npos);
  CHECK(j.find("\"overlap\":") != std::string::npos);
  CHECK(j.find("\"gap_per_spin\":") != std::string::npos);
}

TEST_CASE("trace csv schema") {
  EnergyTrace t;
  t.append(-1.5, 0.0);
  t.append(-2.0, 0.0);
  auto csv = trace_to_csv(t);
  CHECK(csv == "eval,energy,best,seconds\n1,-1.5,-1.5,0\n2,-2,-2,0\n");
}
