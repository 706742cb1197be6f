// End-to-end tests driving the installed binary through a shell.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "hvqe/io.hpp"

namespace {

struct CmdResult {
  int exit_code = -1;
  std::string out;
};

CmdResult run(const std::string& args) {
  std::string cmd = std::string(HVQE_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CmdResult r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string tmp_path(const std::string& name) { return "/tmp/hvqe_cli_" + name; }

nlohmann::json parse(const std::string& text) { return nlohmann::json::parse(text); }

}  // namespace

TEST_CASE("lattice json: ring and square bond counts") {
  auto ring = run("lattice --kind ring --n 4 --neel");
  REQUIRE(ring.exit_code == 0);
  auto j = parse(ring.out);
  CHECK(j["bonds"].size() == 4);
  CHECK(j["terms"].size() == 12);
  CHECK(j["neel_bitstring"] == "1010");
  CHECK(j["neel_energy"] == -4.0);

  auto sq = run("lattice --kind square --rows 4 --cols 4 --boundary open");
  REQUIRE(sq.exit_code == 0);
  CHECK(parse(sq.out)["bonds"].size() == 24);
}

TEST_CASE("lattice determinism with random couplings") {
  auto a = run("lattice --kind ring --n 10 --coupling random --seed 7");
  auto b = run("lattice --kind ring --n 10 --coupling random --seed 7");
  REQUIRE(a.exit_code == 0);
  CHECK(a.out == b.out);
  auto c = run("lattice --kind ring --n 10 --coupling random --seed 8");
  CHECK(a.out != c.out);
}

TEST_CASE("lattice input errors exit 2") {
  CHECK(run("lattice --kind ring").exit_code == 2);
  CHECK(run("lattice --kind nosuch --n 4").exit_code == 2);
  CHECK(run("lattice --kind ring --n 10 --coupling random").exit_code == 2);
  CHECK(run("lattice --kind ring --n 4 --not-a-flag").exit_code == 2);
}

TEST_CASE("compile stats: twelve xy parameters at four sites") {
  auto circ = tmp_path("c4.txt");
  auto r = run("compile --ansatz xy --kind ring --n 4 -o " + circ + " --stats /dev/stdout");
  REQUIRE(r.exit_code == 0);
  auto j = parse(r.out);
  CHECK(j["parameters"] == 12);
  CHECK(j["optimized"] == true);
  CHECK(j["depth_post"].get<int>() <= j["depth_pre"].get<int>());
  // The circuit file declares all 12 slots.
  auto text = hvqe::read_file(circ);
  CHECK(text.rfind("QUBITS 4", 0) == 0);
  std::istringstream is(text);
  std::string line;
  std::getline(is, line);
  std::getline(is, line);
  std::istringstream slots(line);
  std::string tok;
  int count = -1;  // skip the SLOTS keyword
  while (slots >> tok) ++count;
  CHECK(count == 12);
}

TEST_CASE("compile depth ratio on the 4x4 grid") {
  auto opt = run("compile --ansatz xy --kind square --rows 4 --cols 4 -o /dev/null --stats /dev/stdout");
  REQUIRE(opt.exit_code == 0);
  auto j = parse(opt.out);
  double pre = j["depth_pre"].get<double>();
  double post = j["depth_post"].get<double>();
  CHECK(post / pre <= 0.65);

  auto noopt = run("compile --ansatz xy --kind square --rows 4 --cols 4 --no-opt -o /dev/null --stats /dev/stdout");
  auto jn = parse(noopt.out);
  CHECK(jn["optimized"] == false);
  CHECK(jn["depth_post"] == jn["depth_pre"]);
}

TEST_CASE("hva on a 2d lattice exits 3") {
  CHECK(run("compile --ansatz hva --kind square --rows 3 --cols 3").exit_code == 3);
  CHECK(run("vqe --ansatz hva --kind square --rows 3 --cols 3 --max-evals 10").exit_code == 3);
}

TEST_CASE("vqe reaches the four-site ground state with a baseline") {
  auto r = run("vqe --kind ring --n 4 --max-evals 2000 --exact-baseline"
               " --summary /dev/stdout --trace /dev/null");
  REQUIRE(r.exit_code == 0);
  auto j = parse(r.out);
  CHECK(std::abs(j["e_f"].get<double>() + 8.0) <= 1e-6);
  CHECK(j["gap_per_spin"].get<double>() <= 1e-6);
  CHECK(j["overlap"].get<double>() >= 0.999);
}

TEST_CASE("budget exhaustion is exit 0 with stopped budget") {
  auto r = run("vqe --kind ring --n 6 --max-evals 50 --summary /dev/stdout --trace /dev/null");
  REQUIRE(r.exit_code == 0);
  CHECK(parse(r.out)["stopped"] == "budget");
}

TEST_CASE("ladder run satisfies the variational bound") {
  auto r = run("vqe --kind ladder --rows 4 --cols 2 --max-evals 300 --exact-baseline"
               " --summary /dev/stdout --trace /dev/null");
  REQUIRE(r.exit_code == 0);
  auto j = parse(r.out);
  CHECK(j["e_f_per_spin"].get<double>() >= j["e0_per_spin"].get<double>() - 1e-9);
}

TEST_CASE("vqe reruns are byte-identical") {
  auto t1 = tmp_path("t1.csv"), t2 = tmp_path("t2.csv");
  auto s1 = tmp_path("s1.json"), s2 = tmp_path("s2.json");
  auto base = std::string("vqe --kind ring --n 6 --coupling random --seed 11 --init random"
                          " --init-seed 3 --max-evals 150 ");
  REQUIRE(run(base + "--trace " + t1 + " --summary " + s1).exit_code == 0);
  REQUIRE(run(base + "--trace " + t2 + " --summary " + s2).exit_code == 0);
  CHECK(hvqe::read_file(t1) == hvqe::read_file(t2));
  CHECK(hvqe::read_file(s1) == hvqe::read_file(s2));
}

TEST_CASE("resume continues the evaluation numbering without gaps") {
  auto cp = tmp_path("cp.json");
  auto ta = tmp_path("ta.csv"), tb = tmp_path("tb.csv");
  auto base = std::string("--kind ring --n 6 --max-evals 150 ");
  REQUIRE(run("vqe " + base + "--checkpoint " + cp + " --trace " + ta +
              " --summary /dev/null").exit_code == 0);
  REQUIRE(run("resume " + base + "--from " + cp + " --extra-evals 100 --trace " + tb +
              " --summary /dev/null").exit_code == 0);
  auto a = hvqe::read_file(ta);
  auto b = hvqe::read_file(tb);
  auto last_eval = [](const std::string& csv) {
    auto pos = csv.rfind('\n', csv.size() - 2);
    return std::stol(csv.substr(pos + 1));
  };
  CHECK(last_eval(a) == 150);
  CHECK(b.find("\n151,") != std::string::npos);
  CHECK(last_eval(b) == 250);
}

TEST_CASE("config file with flag overrides") {
  auto cfg = tmp_path("run.toml");
  hvqe::write_file(cfg, "[vqe]\nkind = ring\nn = 6\nmax-evals = 120\n");
  auto r = run("vqe --config " + cfg + " --summary /dev/stdout --trace /dev/null");
  REQUIRE(r.exit_code == 0);
  CHECK(parse(r.out)["evaluations"] == 120);
  auto o = run("vqe --config " + cfg + " --max-evals 60 --summary /dev/stdout --trace /dev/null");
  CHECK(parse(o.out)["evaluations"] == 60);  // flags win

  hvqe::write_file(cfg, "[vqe]\nkind === ring\n");
  CHECK(run("vqe --config " + cfg).exit_code == 2);
}

TEST_CASE("exact subcommand reports the lanczos baseline") {
  auto r = run("exact --kind ring --n 4");
  REQUIRE(r.exit_code == 0);
  auto j = parse(r.out);
  CHECK(std::abs(j["e0"].get<double>() + 8.0) <= 1e-8);
  CHECK(j["converged"] == true);
  CHECK(j["residual"].get<double>() <= 1e-8);
}

TEST_CASE("extrapolate: collinear synthetic summaries give the exact slope") {
  std::string files;
  for (int i = 0; i < 5; ++i) {
    int n = 8 + 2 * i;
    auto p = tmp_path("syn" + std::to_string(n) + ".json");
    std::ostringstream os;
    os << "{\"kind\": \"ring\", \"nqubits\": " << n << ", \"e_f\": " << (-1.75 * n + 0.3) << "}";
    hvqe::write_file(p, os.str());
    files += p + " ";
  }
  auto r = run("extrapolate " + files + "--mode thermo");
  REQUIRE(r.exit_code == 0);
  auto j = parse(r.out);
  CHECK(std::abs(j["slope"].get<double>() + 1.75) <= 1e-10);
  CHECK(j["points"] == 5);

  // Parity filter drops everything odd; here all are even, so odd filtering
  // leaves too little data.
  CHECK(run("extrapolate " + files + "--mode thermo --parity odd").exit_code == 5);
  // No baselines recorded: error-mode fits are impossible.
  CHECK(run("extrapolate " + files + "--mode error --abscissa invn").exit_code == 5);
}

TEST_CASE("extrapolate needs at least three points") {
  auto p = tmp_path("one.json");
  hvqe::write_file(p, "{\"kind\": \"ring\", \"nqubits\": 8, \"e_f\": -14.0}");
  CHECK(run("extrapolate " + p + " --mode thermo").exit_code == 5);
}

TEST_CASE("trace plot: one nonincreasing polyline and the reference line") {
  auto csv = tmp_path("mono.csv");
  hvqe::write_file(csv, "eval,energy,best,seconds\n1,-1,-1,0\n2,-3,-3,0\n3,-2,-3,0\n4,-7.5,-7.5,0\n");
  auto svg = tmp_path("mono.svg");
  REQUIRE(run("plot " + csv + " --e0 -8 -o " + svg).exit_code == 0);
  auto text = hvqe::read_file(svg);

  std::size_t first = text.find("<polyline");
  REQUIRE(first != std::string::npos);
  CHECK(text.find("<polyline", first + 1) == std::string::npos);
  CHECK(text.find("E0 = -8") != std::string::npos);

  std::size_t p0 = text.find("points=\"", first) + 8;
  std::size_t p1 = text.find('"', p0);
  std::istringstream pts(text.substr(p0, p1 - p0));
  std::string pair;
  double prev_y = 1e300;
  while (pts >> pair) {
    double y = std::stod(pair.substr(pair.find(',') + 1));
    CHECK(y <= prev_y + 1e-9);
    prev_y = y;
  }
}

TEST_CASE("scatter plot of collinear points annotates residual 0") {
  auto csv = tmp_path("line.csv");
  hvqe::write_file(csv, "x,y\n1,2\n2,4\n3,6\n4,8\n");
  auto r = run("plot " + csv + " --plot-kind scatter-fit");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("residual 0<") != std::string::npos);
  CHECK(r.out.find("<circle") != std::string::npos);
}

TEST_CASE("malformed csv exits 2") {
  auto csv = tmp_path("badplot.csv");
  hvqe::write_file(csv, "eval,energy,best,seconds\n1,spam,-1,0\n");
  CHECK(run("plot " + csv).exit_code == 2);
  hvqe::write_file(csv, "eval,energy,best,seconds\n");
  CHECK(run("plot " + csv).exit_code == 2);
}

TEST_CASE("manifest flag prints the decision ledger") {
  auto r = run("--manifest");
  REQUIRE(r.exit_code == 0);
  auto j = parse(r.out);
  CHECK(j.contains("artifact_version"));
  CHECK(j["decisions"].contains("basis_change"));
  CHECK(j["decisions"].contains("optimizers"));
}

TEST_CASE("vqe manifest file references the config digest") {
  auto m = tmp_path("m.json"), s = tmp_path("ms.json");
  REQUIRE(run("vqe --kind ring --n 4 --max-evals 20 --optimizer gradient-free --manifest-out " +
              m + " --summary " + s + " --trace /dev/null").exit_code == 0);
  auto manifest = parse(hvqe::read_file(m));
  auto summary = parse(hvqe::read_file(s));
  CHECK(manifest["config_sha256"] == summary["config_sha256"]);
  CHECK(manifest["ledger"]["decisions"].contains("gradient_cost"));
}

TEST_CASE("output directory environment variable") {
  auto r = run("lattice --kind ring --n 4 -o envtest.json");
  // No env set in this harness invocation: relative path lands in the cwd.
  REQUIRE(r.exit_code == 0);
  std::remove("envtest.json");

  std::string cmd = std::string("HVQE_OUTPUT_DIR=/tmp ") + HVQE_CLI_PATH +
                    " lattice --kind ring --n 4 -o hvqe_envdir.json 2>/dev/null";
  REQUIRE(std::system(cmd.c_str()) == 0);
  CHECK(!hvqe::read_file("/tmp/hvqe_envdir.json").empty());
  std::remove("/tmp/hvqe_envdir.json");
}
