// hvqe: command-line driver for the Heisenberg VQE toolkit.
//
// Subcommands: lattice, compile, vqe, resume, exact, extrapolate, plot.
// Options may come from a key/value config file (--config, TOML-style) with
// command-line flags winning. Exit codes: 0 success or budget stop, 2 input
// error, 3 unsupported combination, 4 optimizer abort, 5 insufficient data.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hvqe/analysis.hpp"
#include "hvqe/ansatz.hpp"
#include "hvqe/exact.hpp"
#include "hvqe/io.hpp"
#include "hvqe/lattice.hpp"
#include "hvqe/sha256.hpp"
#include "hvqe/vqe.hpp"

namespace {

constexpr const char* kArtifactVersion = "hvqe 1.0.0";

constexpr int kExitInput = 2;
constexpr int kExitUnsupported = 3;
constexpr int kExitAbort = 4;
constexpr int kExitInsufficient = 5;

struct UnsupportedCombination : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InsufficientData : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Relative output paths land in $HVQE_OUTPUT_DIR when it is set.
std::string out_path(const std::string& p) {
  if (p.empty() || p.front() == '/') return p;
  const char* dir = std::getenv("HVQE_OUTPUT_DIR");
  if (!dir || !*dir) return p;
  std::string d(dir);
  if (d.back() != '/') d += '/';
  return d + p;
}

// Writes to the path when given, stdout otherwise.
void emit(const std::string& text, const std::string& path) {
  if (path.empty())
    std::cout << text;
  else
    hvqe::write_file(out_path(path), text);
}

// The decision-flag ledger: conventions that are part of the artifact's
// identity and are not recoverable from a config file alone.
std::string decision_ledger() {
  std::ostringstream os;
  os << "{\n"
     << "  \"artifact_version\": \"" << kArtifactVersion << "\",\n"
     << "  \"decisions\": {\n"
     << "    \"xy_block_order\": \"U_kl block then U_lk block; l descending N-1..1, k descending N..l+1\",\n"
     << "    \"sigma_n_z_rider\": \"appended to every pair generator unless k or l equals N\",\n"
     << "    \"two_body_axis_order\": \"xx xy xz yx yy yz zx zy zz per pair\",\n"
     << "    \"hva_scope\": \"rings only; layer-major, bond-major, axes x y z\",\n"
     << "    \"basis_change\": \"x: RY- before / RY+ after; y: RX+ before / RX- after (unitary-equality oracle)\",\n"
     << "    \"cnot_ladder\": \"ascending controls into the highest acted site\",\n"
     << "    \"bit_order\": \"little-endian; bit 1 means spin down\",\n"
     << "    \"random_couplings\": \"uniform on (0, 1], one draw per bond and axis in x y z order\",\n"
     << "    \"optimizers\": \"quasi-Newton is BFGS with forward differences; gradient-free is adaptive Nelder-Mead\",\n"
     << "    \"gradient_cost\": \"P+1 evaluations per gradient, base point included\",\n"
     << "    \"engine_default\": \"fused Pauli-rotation kernel; circuit path selectable and tested equal\",\n"
     << "    \"lanczos\": \"full reorthogonalization, explicit restart, residual-certified\",\n"
     << "    \"triangular_diagonal\": \"(r,c)-(r+1,c+1)\",\n"
     << "    \"timestamps\": \"trace/summary seconds are 0 unless --timestamps; wall clock lives in the manifest\"\n"
     << "  }\n"
     << "}\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Shared lattice options

struct LatticeArgs {
  std::string kind = "ring";
  int n = 0;
  int rows = 0;
  int cols = 0;
  std::string boundary;  // empty: kind default
  std::string coupling = "isotropic";
  std::optional<std::uint64_t> seed;

  void add(CLI::App* cmd) {
    cmd->add_option("--kind", kind, "lattice kind: chain|ring|ladder|square|triangular");
    cmd->add_option("--n", n, "site count (chain/ring)");
    cmd->add_option("--rows", rows, "row count (2D lattices)");
    cmd->add_option("--cols", cols, "column count (2D lattices)");
    cmd->add_option("--boundary", boundary, "open|periodic (default: periodic for rings, open otherwise)");
    cmd->add_option("--coupling", coupling, "isotropic|random");
    cmd->add_option("--seed", [this](const std::vector<std::string>& v) {
      seed = std::stoull(v.back());
      return true;
    }, "coupling seed (random mode)")->expected(1);
  }

  hvqe::LatticeKind kind_enum() const { return hvqe::lattice_kind_from_string(kind); }

  std::vector<int> dims() const {
    auto k = kind_enum();
    if (k == hvqe::LatticeKind::Chain || k == hvqe::LatticeKind::Ring) {
      if (n <= 0) throw std::invalid_argument("--n is required for " + kind);
      return {n};
    }
    if (rows <= 0 || cols <= 0)
      throw std::invalid_argument("--rows and --cols are required for " + kind);
    return {rows, cols};
  }

  hvqe::Boundary boundary_enum() const {
    if (!boundary.empty()) return hvqe::boundary_from_string(boundary);
    return kind_enum() == hvqe::LatticeKind::Ring ? hvqe::Boundary::Periodic
                                                  : hvqe::Boundary::Open;
  }

  hvqe::CouplingModel coupling_model() const {
    hvqe::CouplingModel m;
    if (coupling == "isotropic")
      m.mode = hvqe::CouplingMode::Isotropic;
    else if (coupling == "random")
      m.mode = hvqe::CouplingMode::Random;
    else
      throw std::invalid_argument("unknown coupling mode: " + coupling);
    m.seed = seed;
    if (m.mode == hvqe::CouplingMode::Random && !m.seed)
      throw std::invalid_argument("--seed is required with --coupling random");
    return m;
  }
};

// ---------------------------------------------------------------------------
// lattice

int cmd_lattice(const LatticeArgs& lat, bool neel, const std::string& output) {
  auto lattice = hvqe::build_lattice(lat.kind_enum(), lat.dims(), lat.boundary_enum());
  auto h = hvqe::build_hamiltonian(lattice, lat.coupling_model());
  std::string json = hvqe::hamiltonian_to_json(h);
  if (neel) {
    std::string bits = hvqe::neel_bitstring(lattice);
    json.pop_back();  // splice into the fixed-order document
    json += ", \"neel_bitstring\": \"" + bits +
            "\", \"neel_energy\": " + hvqe::fmt17(hvqe::product_state_energy(h, bits)) + "}";
  }
  emit(json + "\n", output);
  return 0;
}

// ---------------------------------------------------------------------------
// compile

hvqe::AnsatzSpec build_spec(const std::string& ansatz, const LatticeArgs& lat, int layers) {
  auto fam = hvqe::ansatz_family_from_string(ansatz);
  auto dims = lat.dims();
  int nq = dims.size() == 1 ? dims[0] : dims[0] * dims[1];
  if (fam == hvqe::AnsatzFamily::HamiltonianVariational) {
    if (lat.kind_enum() != hvqe::LatticeKind::Ring)
      throw UnsupportedCombination("hamiltonian-variational ansatz is defined for rings only");
    return hvqe::hamiltonian_variational_ansatz(nq, layers);
  }
  if (fam == hvqe::AnsatzFamily::XY) return hvqe::xy_ansatz(nq);
  return hvqe::two_body_ansatz(nq);
}

int cmd_compile(const std::string& ansatz, const LatticeArgs& lat, int layers, bool no_opt,
                const std::string& output, const std::string& stats_out) {
  auto spec = build_spec(ansatz, lat, layers);
  auto raw = hvqe::compile_ansatz(spec);
  auto final_circuit = no_opt ? raw : hvqe::optimize_circuit(raw);

  std::ostringstream stats;
  stats << "{\"ansatz\": \"" << hvqe::to_string(spec.family) << "\", \"nqubits\": " << spec.nqubits
        << ", \"parameters\": " << spec.parameter_count()
        << ", \"gates_pre\": " << raw.gates.size() << ", \"cnots_pre\": " << hvqe::cnot_count(raw)
        << ", \"depth_pre\": " << hvqe::circuit_depth(raw)
        << ", \"gates_post\": " << final_circuit.gates.size()
        << ", \"cnots_post\": " << hvqe::cnot_count(final_circuit)
        << ", \"depth_post\": " << hvqe::circuit_depth(final_circuit)
        << ", \"optimized\": " << (no_opt ? "false" : "true") << "}\n";

  if (output.empty() && stats_out.empty()) {
    std::cout << hvqe::circuit_to_text(final_circuit) << stats.str();
  } else {
    emit(hvqe::circuit_to_text(final_circuit), output);
    emit(stats.str(), stats_out);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// vqe / resume

struct VqeArgs {
  LatticeArgs lat;
  std::string ansatz = "xy";
  int layers = 1;
  std::string init = "zeros";
  std::optional<std::uint64_t> init_seed;
  std::string bitstring;
  std::string optimizer = "quasi-newton";
  long max_evals = 0;
  double wall_seconds = 0.0;  // 0: unlimited
  double grad_tol = 1e-6;
  double rel_tol = 1e-10;
  double fd_step = 1.49e-8;
  double simplex_step = 0.1;
  std::string estimator = "exact";
  long shots = 10000;
  std::uint64_t shot_seed = 1;
  std::string engine = "fused";
  bool timestamps = false;
  bool exact_baseline = false;
  std::string trace_out;
  std::string summary_out;
  std::string checkpoint_out;
  std::string manifest_out;

  void add(CLI::App* cmd) {
    lat.add(cmd);
    cmd->add_option("--ansatz", ansatz, "xy|two-body|hva");
    cmd->add_option("--layers", layers, "HVA layer count");
    cmd->add_option("--init", init, "zeros|random");
    cmd->add_option("--init-seed", [this](const std::vector<std::string>& v) {
      init_seed = std::stoull(v.back());
      return true;
    }, "random-init seed")->expected(1);
    cmd->add_option("--bitstring", bitstring, "initial product state (default: Néel rule)");
    cmd->add_option("--optimizer", optimizer, "quasi-newton|gradient-free");
    cmd->add_option("--max-evals", max_evals, "energy-evaluation budget (required)");
    cmd->add_option("--wall-seconds", wall_seconds, "wall-clock budget, 0 = unlimited");
    cmd->add_option("--grad-tol", grad_tol, "gradient-norm stop threshold");
    cmd->add_option("--rel-tol", rel_tol, "relative-improvement stop threshold");
    cmd->add_option("--fd-step", fd_step, "forward-difference step");
    cmd->add_option("--simplex-step", simplex_step, "initial simplex displacement");
    cmd->add_option("--estimator", estimator, "exact|sampled");
    cmd->add_option("--shots", shots, "shots per evaluation (sampled)");
    cmd->add_option("--shot-seed", shot_seed, "sampling seed");
    cmd->add_option("--engine", engine, "fused|circuit");
    cmd->add_flag("--timestamps", timestamps, "record real wall seconds (breaks byte reproducibility)");
    cmd->add_flag("--exact-baseline", exact_baseline, "attach Lanczos E0 and ground-state overlap");
    cmd->add_option("--trace", trace_out, "trace CSV path");
    cmd->add_option("--summary", summary_out, "summary JSON path");
    cmd->add_option("--checkpoint", checkpoint_out, "checkpoint JSON path (written at every iterate)");
    cmd->add_option("--manifest-out", manifest_out, "run-manifest JSON path");
  }

  hvqe::VqeConfig config() const {
    hvqe::VqeConfig c;
    c.lattice_kind = lat.kind_enum();
    c.dims = lat.dims();
    c.boundary = lat.boundary_enum();
    c.coupling = lat.coupling_model();
    c.ansatz = hvqe::ansatz_family_from_string(ansatz);
    c.layers = layers;
    if (c.ansatz == hvqe::AnsatzFamily::HamiltonianVariational &&
        c.lattice_kind != hvqe::LatticeKind::Ring)
      throw UnsupportedCombination("hamiltonian-variational ansatz is defined for rings only");
    if (!bitstring.empty()) c.custom_bitstring = bitstring;
    if (init == "zeros")
      c.init = hvqe::ParamInit::Zeros;
    else if (init == "random")
      c.init = hvqe::ParamInit::Random;
    else
      throw std::invalid_argument("unknown init mode: " + init);
    c.init_seed = init_seed;
    if (optimizer == "quasi-newton")
      c.optimizer = hvqe::OptimizerKind::QuasiNewton;
    else if (optimizer == "gradient-free")
      c.optimizer = hvqe::OptimizerKind::GradientFree;
    else
      throw std::invalid_argument("unknown optimizer: " + optimizer);
    c.max_evals = max_evals;
    if (wall_seconds > 0) c.wall_seconds = wall_seconds;
    c.grad_tol = grad_tol;
    c.rel_tol = rel_tol;
    c.fd_step = fd_step;
    c.simplex_step = simplex_step;
    if (estimator == "exact")
      c.estimator = hvqe::Estimator::Exact;
    else if (estimator == "sampled")
      c.estimator = hvqe::Estimator::Sampled;
    else
      throw std::invalid_argument("unknown estimator: " + estimator);
    c.shots = shots;
    c.shot_seed = shot_seed;
    if (engine == "fused")
      c.engine_path = hvqe::EnginePath::Fused;
    else if (engine == "circuit")
      c.engine_path = hvqe::EnginePath::Circuit;
    else
      throw std::invalid_argument("unknown engine path: " + engine);
    if (!checkpoint_out.empty()) c.checkpoint_path = out_path(checkpoint_out);
    c.timestamps = timestamps;
    c.validate();
    return c;
  }
};

std::string run_manifest(const hvqe::VqeRun& run) {
  std::ostringstream os;
  os << "{\"artifact_version\": \"" << kArtifactVersion << "\", \"config_sha256\": \""
     << run.config_sha256 << "\", \"seeds\": {\"coupling\": "
     << (run.config.coupling.seed ? std::to_string(*run.config.coupling.seed) : "null")
     << ", \"init\": "
     << (run.config.init_seed ? std::to_string(*run.config.init_seed) : "null")
     << ", \"shots\": " << run.config.shot_seed << "}, \"wall_seconds\": "
     << hvqe::fmt17(run.wall_seconds) << ", \"ledger\": " << decision_ledger();
  std::string s = os.str();
  // decision_ledger ends with "}\n"; close the outer object after it.
  s.pop_back();
  return s + "}\n";
}

int finish_vqe_run(hvqe::VqeRun& run, const VqeArgs& a) {
  if (a.exact_baseline) hvqe::attach_exact_baseline(run);
  emit(hvqe::trace_to_csv(run.trace), a.trace_out);
  emit(hvqe::summary_to_json(run) + "\n", a.summary_out);
  if (!a.checkpoint_out.empty()) hvqe::save_checkpoint(run.final_checkpoint, out_path(a.checkpoint_out));
  if (!a.manifest_out.empty()) emit(run_manifest(run), a.manifest_out);
  return 0;
}

int cmd_vqe(const VqeArgs& a) {
  auto run = hvqe::run_vqe(a.config());
  return finish_vqe_run(run, a);
}

int cmd_resume(const VqeArgs& a, const std::string& from, long extra) {
  auto checkpoint = hvqe::load_checkpoint(out_path(from));
  auto run = hvqe::resume_vqe(a.config(), checkpoint, extra);
  return finish_vqe_run(run, a);
}

// ---------------------------------------------------------------------------
// exact

int cmd_exact(const LatticeArgs& lat, const std::string& output) {
  auto lattice = hvqe::build_lattice(lat.kind_enum(), lat.dims(), lat.boundary_enum());
  auto h = hvqe::build_hamiltonian(lattice, lat.coupling_model());
  auto gs = hvqe::ground_state_lanczos(h);
  std::ostringstream os;
  os << "{\"e0\": " << hvqe::fmt17(gs.energy)
     << ", \"e0_per_spin\": " << hvqe::fmt17(gs.energy / h.nqubits)
     << ", \"residual\": " << hvqe::fmt17(gs.residual) << ", \"iterations\": " << gs.iterations
     << ", \"converged\": " << (gs.converged ? "true" : "false") << "}\n";
  emit(os.str(), output);
  return 0;
}

// ---------------------------------------------------------------------------
// extrapolate

hvqe::RunSummaryRow read_summary_row(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(hvqe::read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
  hvqe::RunSummaryRow r;
  r.kind = j.at("kind").get<std::string>();
  r.nqubits = j.at("nqubits").get<int>();
  r.e_f = j.at("e_f").get<double>();
  if (j.contains("e0")) {
    r.has_e0 = true;
    r.e0 = j.at("e0").get<double>();
  }
  return r;
}

int cmd_extrapolate(const std::vector<std::string>& files, const std::string& mode,
                    const std::string& parity, const std::string& abscissa, double predict,
                    const std::string& output) {
  std::vector<hvqe::RunSummaryRow> rows;
  for (const auto& f : files) {
    auto r = read_summary_row(f);
    if (parity == "even" && r.nqubits % 2 != 0) continue;
    if (parity == "odd" && r.nqubits % 2 == 0) continue;
    rows.push_back(r);
  }
  std::ostringstream os;
  try {
    if (mode == "thermo") {
      auto r = hvqe::thermodynamic_extrapolation(rows);
      os << "{\"mode\": \"thermo\", \"points\": " << r.fit.points
         << ", \"slope\": " << hvqe::fmt17(r.fit.slope)
         << ", \"intercept\": " << hvqe::fmt17(r.fit.intercept)
         << ", \"residual\": " << hvqe::fmt17(r.fit.residual)
         << ", \"per_spin_estimate\": " << hvqe::fmt17(r.per_spin_estimate)
         << ", \"reference\": " << hvqe::fmt17(r.reference)
         << ", \"difference\": " << hvqe::fmt17(r.difference) << "}\n";
    } else if (mode == "error") {
      auto r = hvqe::error_scaling_fit(rows, hvqe::abscissa_from_string(abscissa));
      os << "{\"mode\": \"error\", \"abscissa\": \"" << abscissa
         << "\", \"points\": " << r.fit.points << ", \"slope\": " << hvqe::fmt17(r.fit.slope)
         << ", \"intercept\": " << hvqe::fmt17(r.fit.intercept)
         << ", \"residual\": " << hvqe::fmt17(r.fit.residual);
      if (predict > 0)
        os << ", \"prediction_n\": " << hvqe::fmt17(predict)
           << ", \"prediction\": " << hvqe::fmt17(hvqe::error_scaling_prediction(r, predict));
      os << "}\n";
    } else {
      throw std::invalid_argument("unknown mode: " + mode);
    }
  } catch (const std::invalid_argument& e) {
    // Too few points, missing baselines, mixed kinds: the data cannot support
    // the requested fit.
    throw InsufficientData(e.what());
  }
  emit(os.str(), output);
  return 0;
}

// ---------------------------------------------------------------------------
// plot

std::vector<std::vector<double>> read_csv_columns(const std::string& path, std::size_t min_cols,
                                                   bool skip_header) {
  std::istringstream in(hvqe::read_file(path));
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (skip_header && lineno == 1) continue;
    std::vector<double> row;
    std::stringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ',')) {
      std::size_t pos = 0;
      double v;
      try {
        v = std::stod(field, &pos);
      } catch (const std::exception&) {
        throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": not a number: " + field);
      }
      if (pos != field.size())
        throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": trailing junk: " + field);
      row.push_back(v);
    }
    if (row.size() < min_cols)
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": too few columns");
    rows.push_back(row);
  }
  if (rows.empty()) throw std::invalid_argument(path + ": no data rows");
  return rows;
}

struct Frame {
  static constexpr double w = 640, h = 440, ml = 70, mr = 20, mt = 20, mb = 50;
  double xmin, xmax, ymin, ymax;
  double sx(double x) const {
    double span = xmax > xmin ? xmax - xmin : 1.0;
    return ml + (x - xmin) / span * (w - ml - mr);
  }
  // y grows downward with the data: smaller values plot higher up, so a
  // descending series yields a polyline with nonincreasing y coordinates.
  double sy(double y) const {
    double span = ymax > ymin ? ymax - ymin : 1.0;
    return mt + (y - ymin) / span * (h - mt - mb);
  }
};

void svg_open(std::ostringstream& os, const std::string& xlabel, const std::string& ylabel,
              const Frame& f) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << Frame::w << "\" height=\""
     << Frame::h << "\" viewBox=\"0 0 " << Frame::w << " " << Frame::h << "\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << Frame::w << "\" height=\"" << Frame::h
     << "\" fill=\"white\"/>\n";
  os << "<line x1=\"" << Frame::ml << "\" y1=\"" << Frame::h - Frame::mb << "\" x2=\""
     << Frame::w - Frame::mr << "\" y2=\"" << Frame::h - Frame::mb
     << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << Frame::ml << "\" y1=\"" << Frame::mt << "\" x2=\"" << Frame::ml
     << "\" y2=\"" << Frame::h - Frame::mb << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << (Frame::ml + Frame::w - Frame::mr) / 2 << "\" y=\"" << Frame::h - 12
     << "\" text-anchor=\"middle\" font-size=\"13\">" << xlabel << "</text>\n";
  os << "<text x=\"16\" y=\"" << (Frame::mt + Frame::h - Frame::mb) / 2
     << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
     << (Frame::mt + Frame::h - Frame::mb) / 2 << ")\">" << ylabel << "</text>\n";
  os << "<text x=\"" << Frame::ml << "\" y=\"" << Frame::h - 32 << "\" font-size=\"11\">"
     << hvqe::fmt17(f.xmin) << "</text>\n";
  os << "<text x=\"" << Frame::w - Frame::mr << "\" y=\"" << Frame::h - 32
     << "\" text-anchor=\"end\" font-size=\"11\">" << hvqe::fmt17(f.xmax) << "</text>\n";
  os << "<text x=\"" << Frame::ml - 4 << "\" y=\"" << Frame::mt + 10
     << "\" text-anchor=\"end\" font-size=\"11\">" << hvqe::fmt17(f.ymin) << "</text>\n";
  os << "<text x=\"" << Frame::ml - 4 << "\" y=\"" << Frame::h - Frame::mb
     << "\" text-anchor=\"end\" font-size=\"11\">" << hvqe::fmt17(f.ymax) << "</text>\n";
}

int cmd_plot_trace(const std::string& input, std::optional<double> e0,
                   const std::string& output) {
  auto rows = read_csv_columns(input, 3, true);  // eval,energy,best[,seconds]
  Frame f;
  f.xmin = rows.front()[0];
  f.xmax = rows.back()[0];
  f.ymin = 1e300;
  f.ymax = -1e300;
  for (const auto& r : rows) {
    f.ymin = std::min(f.ymin, r[2]);
    f.ymax = std::max(f.ymax, r[2]);
  }
  if (e0) f.ymin = std::min(f.ymin, *e0);

  std::ostringstream os;
  svg_open(os, "energy evaluations", "best energy", f);
  if (e0) {
    double y = f.sy(*e0);
    os << "<line x1=\"" << Frame::ml << "\" y1=\"" << y << "\" x2=\"" << Frame::w - Frame::mr
       << "\" y2=\"" << y << "\" stroke=\"black\" stroke-dasharray=\"6 3\"/>\n";
    os << "<text x=\"" << Frame::w - Frame::mr << "\" y=\"" << y - 4
       << "\" text-anchor=\"end\" font-size=\"11\">E0 = " << hvqe::fmt17(*e0) << "</text>\n";
  }
  os << "<polyline fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < rows.size(); ++i)
    os << (i ? " " : "") << hvqe::fmt17(f.sx(rows[i][0])) << "," << hvqe::fmt17(f.sy(rows[i][2]));
  os << "\"/>\n";
  os << "<!-- data eval,best\n";
  for (const auto& r : rows) os << hvqe::fmt17(r[0]) << "," << hvqe::fmt17(r[2]) << "\n";
  os << "-->\n</svg>\n";
  emit(os.str(), output);
  return 0;
}

int cmd_plot_scatter(const std::string& input, const std::string& output) {
  auto rows = read_csv_columns(input, 2, true);  // x,y header
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : rows) pts.emplace_back(r[0], r[1]);
  auto fit = hvqe::linear_fit(pts);

  Frame f;
  f.xmin = 1e300;
  f.xmax = -1e300;
  f.ymin = 1e300;
  f.ymax = -1e300;
  for (const auto& [x, y] : pts) {
    f.xmin = std::min(f.xmin, x);
    f.xmax = std::max(f.xmax, x);
    f.ymin = std::min(f.ymin, y);
    f.ymax = std::max(f.ymax, y);
  }

  std::ostringstream os;
  svg_open(os, "x", "y", f);
  os << "<line x1=\"" << hvqe::fmt17(f.sx(f.xmin)) << "\" y1=\""
     << hvqe::fmt17(f.sy(fit.slope * f.xmin + fit.intercept)) << "\" x2=\""
     << hvqe::fmt17(f.sx(f.xmax)) << "\" y2=\""
     << hvqe::fmt17(f.sy(fit.slope * f.xmax + fit.intercept))
     << "\" stroke=\"#b03030\" stroke-width=\"1.5\"/>\n";
  for (const auto& [x, y] : pts)
    os << "<circle cx=\"" << hvqe::fmt17(f.sx(x)) << "\" cy=\"" << hvqe::fmt17(f.sy(y))
       << "\" r=\"3.5\" fill=\"#1f4e9c\"/>\n";
  double residual = fit.residual < 1e-12 ? 0.0 : fit.residual;
  os << "<text x=\"" << Frame::ml + 8 << "\" y=\"" << Frame::mt + 14
     << "\" font-size=\"12\">slope " << hvqe::fmt17(fit.slope) << ", intercept "
     << hvqe::fmt17(fit.intercept) << ", residual " << hvqe::fmt17(residual) << "</text>\n";
  os << "<!-- data x,y\n";
  for (const auto& [x, y] : pts) os << hvqe::fmt17(x) << "," << hvqe::fmt17(y) << "\n";
  os << "-->\n</svg>\n";
  emit(os.str(), output);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heisenberg-model VQE toolkit"};
  app.require_subcommand(0, 1);
  // One key/value config file per run; keys live in a [subcommand] section and
  // command-line flags win. Fallthrough lets --config appear after the
  // subcommand name.
  app.set_config("--config", "", "key/value config file ([subcommand] sections); flags win");
  auto with_config = [](CLI::App* cmd) {
    cmd->fallthrough();
    return cmd;
  };

  bool show_manifest = false;
  app.add_flag("--manifest", show_manifest, "print the decision-flag ledger and exit");

  // lattice
  auto* lattice_cmd = with_config(app.add_subcommand("lattice", "emit lattice/Hamiltonian JSON"));
  LatticeArgs lattice_lat;
  lattice_lat.add(lattice_cmd);
  bool lattice_neel = false;
  std::string lattice_out;
  lattice_cmd->add_flag("--neel", lattice_neel, "append the initial bitstring and its energy");
  lattice_cmd->add_option("-o,--output", lattice_out, "output path (default stdout)");

  // compile
  auto* compile_cmd = with_config(app.add_subcommand("compile", "compile an ansatz to a gate circuit"));
  LatticeArgs compile_lat;
  compile_lat.add(compile_cmd);
  std::string compile_ansatz = "xy", compile_out, compile_stats;
  int compile_layers = 1;
  bool compile_noopt = false;
  compile_cmd->add_option("--ansatz", compile_ansatz, "xy|two-body|hva");
  compile_cmd->add_option("--layers", compile_layers, "HVA layer count");
  compile_cmd->add_flag("--no-opt", compile_noopt, "skip the optimization pass");
  compile_cmd->add_option("-o,--output", compile_out, "circuit text path (default stdout)");
  compile_cmd->add_option("--stats", compile_stats, "stats JSON path (default stdout)");

  // vqe
  auto* vqe_cmd = with_config(app.add_subcommand("vqe", "run an energy minimization"));
  VqeArgs vqe_args;
  vqe_args.add(vqe_cmd);

  // resume
  auto* resume_cmd = with_config(app.add_subcommand("resume", "continue a checkpointed run"));
  VqeArgs resume_args;
  resume_args.add(resume_cmd);
  std::string resume_from;
  long resume_extra = 0;
  resume_cmd->add_option("--from", resume_from, "checkpoint file")->required();
  resume_cmd->add_option("--extra-evals", resume_extra, "additional evaluation budget")->required();

  // exact
  auto* exact_cmd = with_config(app.add_subcommand("exact", "Lanczos ground-state baseline"));
  LatticeArgs exact_lat;
  exact_lat.add(exact_cmd);
  std::string exact_out;
  exact_cmd->add_option("-o,--output", exact_out, "output path (default stdout)");

  // extrapolate
  auto* extr_cmd = with_config(app.add_subcommand("extrapolate", "fit run summaries"));
  std::vector<std::string> extr_files;
  std::string extr_mode = "thermo", extr_parity = "all", extr_abscissa = "n", extr_out;
  double extr_predict = 0.0;
  extr_cmd->add_option("summaries", extr_files, "summary JSON files")->required();
  extr_cmd->add_option("--mode", extr_mode, "thermo|error");
  extr_cmd->add_option("--parity", extr_parity, "all|even|odd");
  extr_cmd->add_option("--abscissa", extr_abscissa, "n|logn|invn (error mode)");
  extr_cmd->add_option("--predict", extr_predict, "predict the per-spin error at this N");
  extr_cmd->add_option("-o,--output", extr_out, "output path (default stdout)");

  // plot
  auto* plot_cmd = with_config(app.add_subcommand("plot", "emit a self-contained SVG"));
  std::string plot_kind = "trace", plot_in, plot_out;
  double plot_e0 = std::nan("");
  plot_cmd->add_option("--plot-kind", plot_kind, "trace|scatter-fit");
  plot_cmd->add_option("input", plot_in, "trace CSV or x,y CSV")->required();
  plot_cmd->add_option("--e0", plot_e0, "horizontal reference line (trace)");
  plot_cmd->add_option("-o,--output", plot_out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (show_manifest) {
      std::cout << decision_ledger();
      return 0;
    }
    if (lattice_cmd->parsed()) return cmd_lattice(lattice_lat, lattice_neel, lattice_out);
    if (compile_cmd->parsed())
      return cmd_compile(compile_ansatz, compile_lat, compile_layers, compile_noopt, compile_out,
                         compile_stats);
    if (vqe_cmd->parsed()) return cmd_vqe(vqe_args);
    if (resume_cmd->parsed()) return cmd_resume(resume_args, resume_from, resume_extra);
    if (exact_cmd->parsed()) return cmd_exact(exact_lat, exact_out);
    if (extr_cmd->parsed())
      return cmd_extrapolate(extr_files, extr_mode, extr_parity, extr_abscissa, extr_predict,
                             extr_out);
    if (plot_cmd->parsed()) {
      if (plot_kind == "trace")
        return cmd_plot_trace(plot_in, std::isnan(plot_e0) ? std::nullopt
                                                           : std::optional<double>(plot_e0),
                              plot_out);
      if (plot_kind == "scatter-fit") return cmd_plot_scatter(plot_in, plot_out);
      throw std::invalid_argument("unknown plot kind: " + plot_kind);
    }
    std::cerr << app.help();
    return kExitInput;
  } catch (const UnsupportedCombination& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUnsupported;
  } catch (const InsufficientData& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInsufficient;
  } catch (const hvqe::OptimizerAbort& e) {
    std::cerr << "error: optimizer abort: " << e.what() << "\n";
    return kExitAbort;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
}
