#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

const std::string kCli = MAXENT_CLI_PATH;

struct RunResult {
  int exit_code;
  std::string out;
};

fs::path scratch_dir() {
  static const fs::path dir = [] {
    fs::path p = fs::temp_directory_path() / "maxent_cli_tests";
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

RunResult run(const std::string& args) {
  const fs::path out_path = scratch_dir() / "stdout.txt";
  const std::string cmd = kCli + " " + args + " > " + out_path.string() + " 2> " +
                          (scratch_dir() / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return {code, slurp(out_path)};
}

}  // namespace

TEST_CASE("gen is deterministic and round-trips through the instance format") {
  const fs::path a = scratch_dir() / "gen_a.json";
  const fs::path b = scratch_dir() / "gen_b.json";
  const std::string flags = "gen --ensemble er --p 0.6 --weights gauss --n 9 --seed 77 ";
  CHECK(run(flags + "--out " + a.string()).exit_code == 0);
  CHECK(run(flags + "--out " + b.string()).exit_code == 0);
  const std::string text = slurp(a);
  CHECK(text == slurp(b));
  CHECK(text.find("\"n\":9") != std::string::npos);
  // a different seed changes the bytes
  CHECK(run("gen --ensemble er --p 0.6 --weights gauss --n 9 --seed 78 --out " +
            b.string())
            .exit_code == 0);
  CHECK(text != slurp(b));
}

TEST_CASE("exact prints the enumerated log partition") {
  const fs::path inst = scratch_dir() / "pair.json";
  write(inst, R"({"n":2,"kind":"pair","couplings":[[0,1,1.0]]})");
  const RunResult r = run("exact --in " + inst.string());
  CHECK(r.exit_code == 0);
  CHECK(r.out == "1.820075\n");  // log(2e + 2/e)
}

TEST_CASE("relax emits a reusable solution and round reports the ratio") {
  const fs::path inst = scratch_dir() / "ferro.json";
  const fs::path sol = scratch_dir() / "ferro_sol.json";
  write(inst, R"({"n":2,"kind":"pair","couplings":[[0,1,1.0]]})");
  CHECK(run("relax --in " + inst.string() + " --ferro --out " + sol.string()).exit_code ==
        0);
  const std::string solution = slurp(sol);
  CHECK(solution.find("\"converged\":true") != std::string::npos);

  const RunResult gw = run("round --in " + inst.string() + " --solution " + sol.string() +
                           " --rounding gw --seed 5");
  CHECK(gw.exit_code == 0);
  CHECK(gw.out.find("\"rounding\":\"gw\"") != std::string::npos);
  CHECK(gw.out.find("\"energy_exact\":true") != std::string::npos);

  const RunResult uniform = run("round --in " + inst.string() + " --solution " +
                                sol.string() + " --rounding uniform --seed 5");
  CHECK(uniform.exit_code == 0);

  const RunResult charikar = run("round --in " + inst.string() + " --solution " +
                                 sol.string() +
                                 " --rounding charikar --seed 5 --samples 2000");
  CHECK(charikar.exit_code == 0);
  CHECK(charikar.out.find("\"energy_exact\":false") != std::string::npos);
}

TEST_CASE("maxent-sample emits one +-1 row per draw, deterministically") {
  const fs::path cov = scratch_dir() / "cov.json";
  write(cov, R"({"n":2,"cov":[1.0,0.5,0.5,1.0]})");
  const std::string flags = "maxent-sample --cov " + cov.string() + " --count 6 --seed 3";
  const RunResult a = run(flags);
  CHECK(a.exit_code == 0);
  CHECK(a.out == run(flags).out);
  int lines = 0;
  std::istringstream stream(a.out);
  std::string line;
  while (std::getline(stream, line)) {
    ++lines;
    int v1 = 0, v2 = 0;
    REQUIRE(std::sscanf(line.c_str(), "%d %d", &v1, &v2) == 2);
    CHECK((v1 == 1 || v1 == -1));
    CHECK((v2 == 1 || v2 == -1));
  }
  CHECK(lines == 6);
}

TEST_CASE("bench output is byte-identical across runs") {
  const fs::path a = scratch_dir() / "bench_a.json";
  const fs::path b = scratch_dir() / "bench_b.json";
  const std::string flags =
      "bench --ensemble spinglass --n 5 --count 2 --seed 11 --samples 500 --format json ";
  CHECK(run(flags + "--out " + a.string()).exit_code == 0);
  CHECK(run(flags + "--out " + b.string()).exit_code == 0);
  const std::string text = slurp(a);
  CHECK(text == slurp(b));
  CHECK(text.find("\"summary\"") != std::string::npos);
  CHECK(text.find("spinglass-n5-0") != std::string::npos);
  CHECK(text.find("spinglass-n5-1") != std::string::npos);
}

TEST_CASE("usage errors exit with code 1") {
  CHECK(run("frobnicate").exit_code == 1);
  CHECK(run("gen --ensemble ferro --n 4").exit_code == 1);  // seed is mandatory
  CHECK(run("gen --ensemble nosuch --n 4 --seed 1").exit_code == 1);
  CHECK(run("exact --in /nonexistent/path.json").exit_code == 1);
  const fs::path bad = scratch_dir() / "bad.json";
  write(bad, R"({"n":2,"kind":"pair","couplings":[[0,0,1.0]]})");
  CHECK(run("exact --in " + bad.string()).exit_code == 1);
}

TEST_CASE("numerical failures exit with code 2") {
  const fs::path inst = scratch_dir() / "pair2.json";
  const fs::path sol = scratch_dir() / "bad_sol.json";
  write(inst, R"({"n":2,"kind":"pair","couplings":[[0,1,1.0]]})");
  // hand-crafted infeasible pseudo-moments: eigenvalues 2.5 and -0.5
  write(sol, R"({"n":2,"objective":3.0,"converged":true,)"
             R"("residuals":{"min_eigenvalue":-0.5,"max_diag_error":0.0,)"
             R"("min_entry":1.5,"ferro":false},"M":[1.0,1.5,1.5,1.0]})");
  CHECK(run("round --in " + inst.string() + " --solution " + sol.string() +
            " --rounding gw --seed 1")
            .exit_code == 2);
  CHECK(run("round --in " + inst.string() + " --solution " + sol.string() +
            " --rounding charikar --seed 1")
            .exit_code == 2);
}

TEST_CASE("help is available at exit code 0") {
  CHECK(run("--help").exit_code == 0);
  CHECK(run("bench --help").exit_code == 0);
}
