#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

std::string g_cli; // path to the binary under test

struct RunResult {
    int exit_code;
    std::string out;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunResult run_cli(const std::string& cli_args) {
    const std::string out_path = "cli_stdout.tmp";
    const std::string cmd = "'" + g_cli + "' " + cli_args + " > " + out_path + " 2> cli_stderr.tmp";
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WEXITSTATUS(status);
    r.out = slurp(out_path);
    std::remove(out_path.c_str());
    std::remove("cli_stderr.tmp");
    return r;
}

} // namespace

TEST_CASE("help and version") {
    CHECK(run_cli("--help").exit_code == 0);
    auto v = run_cli("--version");
    CHECK(v.exit_code == 0);
    CHECK(v.out.find("0.1.0") != std::string::npos);
}

TEST_CASE("exact prints the fraction and its decimal") {
    auto r = run_cli("exact --R 3 --M 1");
    CHECK(r.exit_code == 0);
    CHECK(r.out == "2/3 0.666666666666667\n");
    auto r2 = run_cli("exact --R 5 --M 1");
    CHECK(r2.out == "8/15 0.533333333333333\n");
    auto r3 = run_cli("exact --R 10 --M 5");
    CHECK(r3.out == "1 1\n");
}

TEST_CASE("usage errors exit with 1") {
    CHECK(run_cli("no-such-command").exit_code == 1);
    CHECK(run_cli("exact --R 3 --M 7").exit_code == 1);
    CHECK(run_cli("exact --R 3").exit_code == 1); // missing --M
    CHECK(run_cli("simulate --R 10 --M 20 --trials 10").exit_code == 1);
    CHECK(run_cli("sweep --R 100 --eta-grid 9000").exit_code == 1);
}

TEST_CASE("simulate emits a well-formed estimate") {
    auto r = run_cli("simulate --R 100 --M 5 --trials 2000 --seed 7");
    CHECK(r.exit_code == 0);
    for (const char* field :
         {"\"trials\"", "\"wins\"", "\"phat\"", "\"stderr\"", "\"ci_low\"", "\"ci_high\"",
          "\"master_seed\""})
        CHECK(r.out.find(field) != std::string::npos);
}

TEST_CASE("identical invocations produce byte-identical files") {
    namespace fs = std::filesystem;
    fs::create_directories("cli_tmp");
    const std::string base =
        "simulate --R 100 --M 5 --trials 4000 --seed 11 --output cli_tmp/a.json";
    CHECK(run_cli(base).exit_code == 0);
    const std::string first = slurp("cli_tmp/a.json");
    CHECK(run_cli(base).exit_code == 0);
    CHECK(slurp("cli_tmp/a.json") == first);
    // a different worker count cannot change the bytes
    CHECK(run_cli("simulate --R 100 --M 5 --trials 4000 --seed 11 --workers 3 "
                  "--output cli_tmp/b.json")
              .exit_code == 0);
    CHECK(slurp("cli_tmp/b.json") == first);
    fs::remove_all("cli_tmp");
}

TEST_CASE("sweep csv carries the stamp and schema") {
    auto r = run_cli("sweep --R 10000 --eta-grid 0,0.5,1 --trials 500 --seed 3 --format csv");
    CHECK(r.exit_code == 0);
    CHECK(r.out.rfind("# master_seed=3 version=", 0) == 0);
    CHECK(r.out.find("eta,R,M,trials,wins,phat,ci_low,ci_high\n") != std::string::npos);
}

TEST_CASE("threshold with a fit over three sizes") {
    auto r = run_cli("threshold --R 100 --R 400 --R 1600 --method exact --format csv");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("R,M_half,method\n") != std::string::npos);
    CHECK(r.out.find("400,8,exact_dp") != std::string::npos);
    CHECK(r.out.find("# fit M = c*R^e:") != std::string::npos);
}

TEST_CASE("trajectory writes the full series and both tails") {
    namespace fs = std::filesystem;
    fs::create_directories("cli_tmp2");
    auto r = run_cli("trajectory --R 2000 --M 40 --runs 2 --seed 5 --format csv "
                     "--output cli_tmp2/traj.csv");
    CHECK(r.exit_code == 0);
    CHECK(fs::exists("cli_tmp2/traj.csv"));
    CHECK(fs::exists("cli_tmp2/traj.csv.tail10000.csv"));
    CHECK(fs::exists("cli_tmp2/traj.csv.tail100.csv"));
    const std::string full = slurp("cli_tmp2/traj.csv");
    CHECK(full.find("run,t,R_t,M_t,X_t\n") != std::string::npos);
    fs::remove_all("cli_tmp2");
}

TEST_CASE("scenario reports the three rates") {
    auto r = run_cli("scenario --profile staged-detective --R 60 --M 2 --D 1 --trials 500 --seed 2");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"citizen_rate\"") != std::string::npos);
    CHECK(r.out.find("\"mafia_rate\"") != std::string::npos);
    CHECK(r.out.find("\"forfeit_rate\"") != std::string::npos);
}

TEST_CASE("verify suites pass with zero violations") {
    auto r = run_cli("verify --suite martingales --rmax 80");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"violations\": []") != std::string::npos);
    auto r2 = run_cli("verify --suite supermartingale --umax 20");
    CHECK(r2.exit_code == 0);
}

TEST_CASE("crossvalidate exits cleanly when the routes agree") {
    auto r = run_cli("crossvalidate --R 31 --M 4 --trials 4000 --seed 13");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"consistent\": true") != std::string::npos);
}

TEST_CASE("a json config file stands in for the command line") {
    {
        std::ofstream cfg("cli_cfg.json");
        cfg << R"({"command": "exact", "R": 3, "M": 1})";
    }
    auto r = run_cli("--config cli_cfg.json");
    CHECK(r.exit_code == 0);
    CHECK(r.out == "2/3 0.666666666666667\n");
    std::remove("cli_cfg.json");
    CHECK(run_cli("--config missing.json").exit_code == 1);
}

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: test_cli <path-to-cli>\n");
        return 1;
    }
    g_cli = argv[1];
    doctest::Context context;
    context.applyCommandLine(argc - 1, argv + 1);
    return context.run();
}
