#include "hvqe/vqe.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hvqe/engine.hpp"
#include "hvqe/exact.hpp"
#include "hvqe/io.hpp"
#include "hvqe/sha256.hpp"

namespace hvqe {

std::string to_string(StopReason r) {
  switch (r) {
    case StopReason::GradTol: return "grad_tol";
    case StopReason::Flat: return "flat";
    case StopReason::Budget: return "budget";
    case StopReason::Wall: return "wall";
    case StopReason::Stalled: return "stalled";
    case StopReason::MaxIter: return "max_iter";
  }
  return "?";
}

void EnergyTrace::append(double energy, double seconds) {
  best_so_far = std::min(best_so_far, energy);
  records.push_back({offset + static_cast<long>(records.size()) + 1, energy, best_so_far, seconds});
}

std::vector<double> finite_difference_gradient(const Objective& f, const std::vector<double>& x,
                                               double h, double* f0_out) {
  if (h <= 0) throw std::invalid_argument("fd step must be positive");
  const double f0 = f(x);  // base evaluation, counted like any other
  std::vector<double> g(x.size());
  std::vector<double> xs = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double step = h * std::max(1.0, std::abs(x[i]));
    xs[i] = x[i] + step;
    g[i] = (f(xs) - f0) / step;
    xs[i] = x[i];
  }
  if (f0_out) *f0_out = f0;
  return g;
}

namespace {

double norm2(const std::vector<double>& v) {
  return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
}

// Tracks the best point across every evaluation the optimizer requests.
struct BestTracker {
  std::vector<double> x;
  double f = std::numeric_limits<double>::infinity();
  void offer(const std::vector<double>& xi, double fi) {
    if (fi < f) {
      f = fi;
      x = xi;
    }
  }
};

}  // namespace

MinimizeResult minimize_quasi_newton(const Objective& f, const std::vector<double>& x0,
                                     const MinimizeOptions& opts) {
  const int n = static_cast<int>(x0.size());
  BestTracker best;
  auto eval = [&](const std::vector<double>& x) {
    double v = f(x);
    if (!std::isfinite(v)) throw OptimizerAbort("objective returned a non-finite value");
    best.offer(x, v);
    return v;
  };

  StopReason stop = StopReason::MaxIter;
  try {
    std::vector<double> x = x0;
    double fx;
    std::vector<double> g = finite_difference_gradient(eval, x, opts.fd_step, &fx);
    // Inverse Hessian estimate, dense row-major.
    std::vector<double> hinv(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) hinv[static_cast<std::size_t>(i) * n + i] = 1.0;
    bool first_update = true;

    for (long iter = 0; iter < opts.max_iter; ++iter) {
      if (norm2(g) <= opts.grad_tol) {
        stop = StopReason::GradTol;
        break;
      }
      std::vector<double> d(n);
      for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += hinv[static_cast<std::size_t>(i) * n + j] * g[j];
        d[i] = -s;
      }
      double slope = std::inner_product(d.begin(), d.end(), g.begin(), 0.0);
      if (slope >= 0.0) {  // not a descent direction: reset curvature
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            hinv[static_cast<std::size_t>(i) * n + j] = (i == j) ? 1.0 : 0.0;
        for (int i = 0; i < n; ++i) d[i] = -g[i];
        slope = -std::inner_product(g.begin(), g.end(), g.begin(), 0.0);
      }

      // Armijo backtracking.
      constexpr double c1 = 1e-4;
      double t = 1.0;
      std::vector<double> xt(n);
      double ft = 0.0;
      bool accepted = false;
      for (int backtrack = 0; backtrack < 60; ++backtrack) {
        for (int i = 0; i < n; ++i) xt[i] = x[i] + t * d[i];
        ft = eval(xt);
        if (ft <= fx + c1 * t * slope) {
          accepted = true;
          break;
        }
        t *= 0.5;
      }
      if (!accepted) {
        stop = StopReason::Stalled;
        break;
      }
      if (opts.on_iterate) opts.on_iterate(xt, ft);
      const bool flat = std::abs(fx - ft) <= opts.rel_tol * (1.0 + std::abs(fx));

      std::vector<double> gnew = finite_difference_gradient(eval, xt, opts.fd_step, &ft);
      std::vector<double> s(n), y(n);
      for (int i = 0; i < n; ++i) {
        s[i] = xt[i] - x[i];
        y[i] = gnew[i] - g[i];
      }
      double sy = std::inner_product(s.begin(), s.end(), y.begin(), 0.0);
      if (sy > 1e-12 * norm2(s) * norm2(y)) {
        if (first_update) {
          // Scale the initial inverse Hessian to the observed curvature
          // before the first update (Nocedal & Wright, eq. 6.20).
          double yy = std::inner_product(y.begin(), y.end(), y.begin(), 0.0);
          double scale = sy / yy;
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
              hinv[static_cast<std::size_t>(i) * n + j] = (i == j) ? scale : 0.0;
          first_update = false;
        }
        // Standard BFGS inverse update.
        std::vector<double> hy(n, 0.0);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) hy[i] += hinv[static_cast<std::size_t>(i) * n + j] * y[j];
        double yhy = std::inner_product(y.begin(), y.end(), hy.begin(), 0.0);
        double rho = 1.0 / sy;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            hinv[static_cast<std::size_t>(i) * n + j] +=
                (1.0 + yhy * rho) * rho * s[i] * s[j] - rho * (hy[i] * s[j] + s[i] * hy[j]);
      }
      x = xt;
      fx = ft;
      g = std::move(gnew);
      if (flat) {
        stop = StopReason::Flat;
        break;
      }
    }
  } catch (const BudgetExhausted&) {
    stop = StopReason::Budget;
  }
  if (best.x.empty()) best.x = x0;
  return {best.x, best.f, stop};
}

MinimizeResult minimize_gradient_free(const Objective& f, const std::vector<double>& x0,
                                      const MinimizeOptions& opts) {
  const int n = static_cast<int>(x0.size());
  BestTracker best;
  auto eval = [&](const std::vector<double>& x) {
    double v = f(x);
    if (!std::isfinite(v)) throw OptimizerAbort("objective returned a non-finite value");
    best.offer(x, v);
    return v;
  };

  // Dimension-adaptive Nelder-Mead coefficients.
  const double alpha = 1.0;
  const double beta = (n > 1) ? 1.0 + 2.0 / n : 2.0;
  const double gamma = (n > 1) ? 0.75 - 0.5 / n : 0.5;
  const double delta = (n > 1) ? 1.0 - 1.0 / n : 0.5;

  StopReason stop = StopReason::MaxIter;
  try {
    std::vector<std::vector<double>> simplex(n + 1, x0);
    std::vector<double> fv(n + 1);
    for (int i = 1; i <= n; ++i) simplex[i][i - 1] += opts.simplex_step;
    for (int i = 0; i <= n; ++i) fv[i] = eval(simplex[i]);

    std::vector<int> order(n + 1);
    for (long iter = 0; iter < opts.max_iter; ++iter) {
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](int a, int b) { return fv[a] < fv[b]; });
      const int lo = order[0], hi = order[n], second_hi = order[n - 1];

      if (std::abs(fv[hi] - fv[lo]) <= opts.rel_tol * (1.0 + std::abs(fv[lo]))) {
        stop = StopReason::Flat;
        break;
      }

      std::vector<double> centroid(n, 0.0);
      for (int i = 0; i <= n; ++i) {
        if (i == hi) continue;
        for (int j = 0; j < n; ++j) centroid[j] += simplex[i][j];
      }
      for (int j = 0; j < n; ++j) centroid[j] /= n;

      auto point = [&](double coeff) {
        std::vector<double> p(n);
        for (int j = 0; j < n; ++j) p[j] = centroid[j] + coeff * (centroid[j] - simplex[hi][j]);
        return p;
      };

      std::vector<double> xr = point(alpha);
      double fr = eval(xr);
      if (fr < fv[lo]) {
        std::vector<double> xe = point(alpha * beta);
        double fe = eval(xe);
        if (fe < fr) {
          simplex[hi] = std::move(xe);
          fv[hi] = fe;
        } else {
          simplex[hi] = std::move(xr);
          fv[hi] = fr;
        }
      } else if (fr < fv[second_hi]) {
        simplex[hi] = std::move(xr);
        fv[hi] = fr;
      } else {
        const bool outside = fr < fv[hi];
        std::vector<double> xc = point(outside ? alpha * gamma : -gamma);
        double fc = eval(xc);
        if (fc < std::min(fr, fv[hi])) {
          simplex[hi] = std::move(xc);
          fv[hi] = fc;
        } else {
          // Shrink toward the best vertex.
          for (int i = 0; i <= n; ++i) {
            if (i == lo) continue;
            for (int j = 0; j < n; ++j)
              simplex[i][j] = simplex[lo][j] + delta * (simplex[i][j] - simplex[lo][j]);
            fv[i] = eval(simplex[i]);
          }
        }
      }
      if (opts.on_iterate) opts.on_iterate(simplex[lo], fv[lo]);
    }
  } catch (const BudgetExhausted&) {
    stop = StopReason::Budget;
  }
  if (best.x.empty()) best.x = x0;
  return {best.x, best.f, stop};
}

void VqeConfig::validate() const {
  if (max_evals < 1) throw std::invalid_argument("an evaluation budget is required");
  if (fd_step <= 0) throw std::invalid_argument("fd step must be positive");
  if (estimator == Estimator::Sampled && shots < 1)
    throw std::invalid_argument("sampled estimator needs shots >= 1");
  if (init == ParamInit::Random && !init_seed)
    throw std::invalid_argument("random parameter init requires a seed");
}

std::string VqeConfig::digest() const {
  std::ostringstream os;
  os << to_string(lattice_kind) << "|";
  for (int d : dims) os << d << ",";
  os << "|" << to_string(boundary) << "|"
     << (coupling.mode == CouplingMode::Isotropic ? "isotropic" : "random") << "|"
     << (coupling.seed ? std::to_string(*coupling.seed) : "-") << "|" << to_string(ansatz)
     << "|" << layers << "|" << (custom_bitstring ? *custom_bitstring : "neel") << "|"
     << (init == ParamInit::Zeros ? "zeros" : "random") << "|"
     << (init_seed ? std::to_string(*init_seed) : "-") << "|"
     << (optimizer == OptimizerKind::QuasiNewton ? "qn" : "gf") << "|" << fmt17(fd_step)
     << "|" << fmt17(simplex_step) << "|" << fmt17(grad_tol) << "|" << fmt17(rel_tol) << "|"
     << (estimator == Estimator::Exact ? "exact" : "sampled") << "|" << shots << "|"
     << shot_seed << "|" << (engine_path == EnginePath::Fused ? "fused" : "circuit");
  return sha256_hex(os.str());
}

std::string checkpoint_to_json(const Checkpoint& c) {
  std::ostringstream os;
  os << "{\"params\": [";
  for (std::size_t i = 0; i < c.params.size(); ++i) os << (i ? ", " : "") << fmt17(c.params[i]);
  os << "], \"evals\": " << c.evals << ", \"best_energy\": " << fmt17(c.best_energy)
     << ", \"best_params\": [";
  for (std::size_t i = 0; i < c.best_params.size(); ++i)
    os << (i ? ", " : "") << fmt17(c.best_params[i]);
  os << "], \"rng\": " << c.rng << ", \"config_sha256\": \"" << c.config_sha256 << "\"}";
  return os.str();
}

Checkpoint checkpoint_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  Checkpoint c;
  c.params = j.at("params").get<std::vector<double>>();
  c.evals = j.at("evals").get<long>();
  c.best_energy = j.at("best_energy").get<double>();
  c.best_params = j.at("best_params").get<std::vector<double>>();
  c.rng = j.at("rng").get<std::uint64_t>();
  c.config_sha256 = j.at("config_sha256").get<std::string>();
  return c;
}

void save_checkpoint(const Checkpoint& c, const std::string& path) {
  write_file(path, checkpoint_to_json(c) + "\n");
}

Checkpoint load_checkpoint(const std::string& path) {
  try {
    return checkpoint_from_json(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("corrupt checkpoint " + path + ": " + e.what());
  }
}

namespace {

struct RunContext {
  const VqeConfig* config = nullptr;
  Hamiltonian hamiltonian;
  AnsatzSpec spec;
  Circuit circuit;  // compiled+optimized; bound only on the circuit path
  std::string bitstring;
  EnergyTrace trace;
  long local_evals = 0;
  long budget = 0;
  bool wall_hit = false;
  std::chrono::steady_clock::time_point t0;
  BestTracker best;
  std::string digest;

  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }

  double evaluate(const std::vector<double>& params) {
    if (local_evals >= budget) throw BudgetExhausted{};
    if (elapsed() > config->wall_seconds) {
      wall_hit = true;
      throw BudgetExhausted{};
    }
    StateVector sv = prepare_basis_state(spec.nqubits, bitstring);
    if (config->engine_path == EnginePath::Fused)
      apply_ansatz(sv, spec, params);
    else
      apply_circuit(sv, circuit, params);
    double e;
    if (config->estimator == Estimator::Exact) {
      e = expectation(sv, hamiltonian);
    } else {
      // Per-evaluation sub-seed keeps the shot stream deterministic and
      // independent of evaluation order.
      std::uint64_t sub = config->shot_seed + 0x9e3779b97f4a7c15ULL *
                          static_cast<std::uint64_t>(trace.offset + local_evals + 1);
      e = estimate_energy_sampled(sv, hamiltonian, config->shots, sub).estimate;
    }
    ++local_evals;
    trace.append(e, config->timestamps ? elapsed() : 0.0);
    best.offer(params, e);
    return e;
  }

  Checkpoint make_checkpoint(const std::vector<double>& params) const {
    Checkpoint c;
    c.params = params;
    c.evals = trace.offset + local_evals;
    c.best_energy = best.f;
    c.best_params = best.x;
    c.rng = config->shot_seed;
    c.config_sha256 = digest;
    return c;
  }
};

VqeRun run_impl(const VqeConfig& config, const std::vector<double>& x0, long budget,
                long eval_offset, double prior_best,
                const std::vector<double>& prior_best_params) {
  RunContext ctx;
  ctx.config = &config;
  ctx.digest = config.digest();

  Lattice lat = build_lattice(config.lattice_kind, config.dims, config.boundary);
  ctx.hamiltonian = build_hamiltonian(lat, config.coupling);

  switch (config.ansatz) {
    case AnsatzFamily::XY: ctx.spec = xy_ansatz(lat.sites); break;
    case AnsatzFamily::TwoBody: ctx.spec = two_body_ansatz(lat.sites); break;
    case AnsatzFamily::HamiltonianVariational:
      if (config.lattice_kind != LatticeKind::Ring)
        throw std::invalid_argument(
            "hamiltonian-variational ansatz is defined for rings only");
      ctx.spec = hamiltonian_variational_ansatz(lat.sites, config.layers);
      break;
  }
  const int pcount = ctx.spec.parameter_count();
  if (config.optimizer == OptimizerKind::QuasiNewton && budget < pcount + 1)
    throw std::invalid_argument("budget below P+1: one gradient cannot complete");
  if (static_cast<int>(x0.size()) != pcount)
    throw std::invalid_argument("initial parameter vector length mismatch");

  ctx.bitstring = config.custom_bitstring ? *config.custom_bitstring : neel_bitstring(lat);
  if (static_cast<int>(ctx.bitstring.size()) != lat.sites)
    throw std::invalid_argument("custom bitstring length mismatch");

  if (config.engine_path == EnginePath::Circuit)
    ctx.circuit = optimize_circuit(compile_ansatz(ctx.spec));

  ctx.budget = budget;
  ctx.trace.offset = eval_offset;
  if (std::isfinite(prior_best)) {
    ctx.trace.best_so_far = prior_best;
    ctx.best.f = prior_best;
    ctx.best.x = prior_best_params;
  }
  ctx.t0 = std::chrono::steady_clock::now();

  Objective obj = [&ctx](const std::vector<double>& p) { return ctx.evaluate(p); };
  MinimizeOptions mopts;
  mopts.grad_tol = config.grad_tol;
  mopts.rel_tol = config.rel_tol;
  mopts.fd_step = config.fd_step;
  mopts.simplex_step = config.simplex_step;
  if (!config.checkpoint_path.empty())
    mopts.on_iterate = [&ctx, &config](const std::vector<double>& p, double) {
      save_checkpoint(ctx.make_checkpoint(p), config.checkpoint_path);
    };

  MinimizeResult res = (config.optimizer == OptimizerKind::QuasiNewton)
                           ? minimize_quasi_newton(obj, x0, mopts)
                           : minimize_gradient_free(obj, x0, mopts);

  VqeRun run;
  run.config = config;
  run.config_sha256 = ctx.digest;
  run.nqubits = lat.sites;
  run.trace = std::move(ctx.trace);
  run.best_energy = ctx.best.f;
  run.best_params = ctx.best.x;
  run.total_evals = run.trace.offset + ctx.local_evals;
  run.stop = ctx.wall_hit ? StopReason::Wall : res.stop;
  run.wall_seconds = ctx.elapsed();
  run.final_checkpoint = ctx.make_checkpoint(res.x);
  if (!config.checkpoint_path.empty())
    save_checkpoint(run.final_checkpoint, config.checkpoint_path);
  return run;
}

}  // namespace

VqeRun run_vqe(const VqeConfig& config) {
  config.validate();
  Lattice lat = build_lattice(config.lattice_kind, config.dims, config.boundary);
  int pcount;
  switch (config.ansatz) {
    case AnsatzFamily::XY: pcount = lat.sites * (lat.sites - 1); break;
    case AnsatzFamily::TwoBody: pcount = 9 * lat.sites * (lat.sites - 1) / 2; break;
    default: pcount = 3 * config.layers * lat.sites; break;
  }
  std::vector<double> x0 = init_parameters(pcount, config.init, config.init_seed);
  return run_impl(config, x0, config.max_evals, 0,
                  std::numeric_limits<double>::infinity(), {});
}

VqeRun resume_vqe(const VqeConfig& config, const Checkpoint& checkpoint, long extra_budget) {
  config.validate();
  if (checkpoint.config_sha256 != config.digest())
    throw std::invalid_argument("checkpoint config digest mismatch");
  if (extra_budget < 1) throw std::invalid_argument("extra budget must be >= 1");
  return run_impl(config, checkpoint.params, extra_budget, checkpoint.evals,
                  checkpoint.best_energy, checkpoint.best_params);
}

std::string trace_to_csv(const EnergyTrace& t) {
  std::ostringstream os;
  os << "eval,energy,best,seconds\n";
  for (const auto& r : t.records)
    os << r.eval << "," << fmt17(r.energy) << "," << fmt17(r.best) << "," << fmt17(r.seconds)
       << "\n";
  return os.str();
}

std::string summary_to_json(const VqeRun& run) {
  std::ostringstream os;
  const int n = run.nqubits;
  os << "{\"kind\": \"" << to_string(run.config.lattice_kind) << "\", \"dims\": [";
  for (std::size_t i = 0; i < run.config.dims.size(); ++i)
    os << (i ? ", " : "") << run.config.dims[i];
  os << "], \"boundary\": \"" << to_string(run.config.boundary) << "\", \"nqubits\": " << n
     << ", \"ansatz\": \"" << to_string(run.config.ansatz) << "\", \"optimizer\": \""
     << (run.config.optimizer == OptimizerKind::QuasiNewton ? "quasi_newton" : "gradient_free")
     << "\", \"e_f\": " << fmt17(run.best_energy)
     << ", \"e_f_per_spin\": " << fmt17(run.best_energy / n)
     << ", \"evaluations\": " << run.total_evals << ", \"wall_seconds\": "
     << fmt17(run.config.timestamps ? run.wall_seconds : 0.0) << ", \"stopped\": \""
     << to_string(run.stop) << "\"";
  if (run.e0) {
    os << ", \"e0\": " << fmt17(*run.e0) << ", \"e0_per_spin\": " << fmt17(*run.e0 / n)
       << ", \"gap_per_spin\": " << fmt17(std::abs(run.best_energy - *run.e0) / n);
    if (run.overlap_with_ground)
      os << ", \"overlap\": " << fmt17(*run.overlap_with_ground);
  }
  os << ", \"config_sha256\": \"" << run.config_sha256 << "\"}";
  return os.str();
}

void attach_exact_baseline(VqeRun& run) {
  Lattice lat = build_lattice(run.config.lattice_kind, run.config.dims, run.config.boundary);
  Hamiltonian h = build_hamiltonian(lat, run.config.coupling);
  GroundStateResult gs = ground_state_lanczos(h, 1e-10, 300, true);
  run.e0 = gs.energy;
  if (gs.eigenvector) {
    AnsatzSpec spec;
    switch (run.config.ansatz) {
      case AnsatzFamily::XY: spec = xy_ansatz(lat.sites); break;
      case AnsatzFamily::TwoBody: spec = two_body_ansatz(lat.sites); break;
      case AnsatzFamily::HamiltonianVariational:
        spec = hamiltonian_variational_ansatz(lat.sites, run.config.layers);
        break;
    }
    std::string bits =
        run.config.custom_bitstring ? *run.config.custom_bitstring : neel_bitstring(lat);
    StateVector sv = prepare_basis_state(lat.sites, bits);
    apply_ansatz(sv, spec, run.best_params);
    StateVector ground;
    ground.nqubits = lat.sites;
    ground.amps = *gs.eigenvector;
    run.overlap_with_ground = overlap_sq(sv, ground);
  }
}

}  // namespace hvqe
