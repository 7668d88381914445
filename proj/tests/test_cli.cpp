// End-to-end checks of the CLI binary: exit codes, schemas, determinism.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;
};

RunResult run_cli(const std::string& args) {
    std::string cmd = std::string(ASYMFREE_CLI_PATH) + " " + args + " 2>&1";
    std::array<char, 4096> buf{};
    RunResult res;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (std::fgets(buf.data(), static_cast<int>(buf.size()), pipe))
        res.output += buf.data();
    int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("bound subcommand echoes the worked example") {
    auto r = run_cli("bound --m 2 --M 1 --w 2 --k 100 --eps 0.1");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("1.2799999999999998") != std::string::npos);
    CHECK(r.output.find("\"tail_valid\": false") != std::string::npos);
}

TEST_CASE("exact subcommand prints the golden rational") {
    auto r = run_cli("exact --expr \"h1 x1 h1 x2 h1^-1 x3 h1^-1 x4\" --k 2 --pattern alternating");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("\"exact\": \"1/3\"") != std::string::npos);

    auto zero = run_cli("exact --expr \"h1 x1 h1^-1 x2\" --k 4 --pattern alternating");
    CHECK(zero.exit_code == 0);
    CHECK(zero.output.find("\"exact\": \"0\"") != std::string::npos);

    auto entry = run_cli("exact --plain 1,1,1 --conj 1,1,1 --k 5");
    CHECK(entry.exit_code == 0);
    CHECK(entry.output.find("\"exact\": \"1/5\"") != std::string::npos);
}

TEST_CASE("invalid configuration exits 1") {
    CHECK(run_cli("exact --expr \"h1 h1^-1 x1\" --k 4").exit_code == 1);
    CHECK(run_cli("mc --expr \"h1 x1\" --k 4 --format yaml --samples 10").exit_code == 1);
    CHECK(run_cli("tail --expr \"h1 x1\" --k 4 --eps 0 --samples 10").exit_code == 1);
    CHECK(run_cli("nonsense").exit_code == 1);
}

TEST_CASE("runtime caps exit 3") {
    auto r = run_cli("exact --expr \"h1 x1 h1 x2 h1 x3 h1 x4 h1 x5 h1 x6\" --k 6 "
                     "--pattern alternating");
    CHECK(r.exit_code == 3);
}

TEST_CASE("mc runs are byte-identical across reruns and thread counts") {
    const char* out1 = "/tmp/asymfree_cli_run1.json";
    const char* out2 = "/tmp/asymfree_cli_run2.json";
    const char* out3 = "/tmp/asymfree_cli_run3.json";
    std::string base = "mc --expr \"h1 x1 h1^-1 x2\" --k 4 --samples 100 --seed 7 --out ";
    CHECK(run_cli(base + out1 + " --threads 1").exit_code == 0);
    CHECK(run_cli(base + out2 + " --threads 1").exit_code == 0);
    CHECK(run_cli(base + out3 + " --threads 8").exit_code == 0);
    std::string a = slurp(out1), b = slurp(out2), c = slurp(out3);
    CHECK(!a.empty());
    CHECK(a == b);
    CHECK(a == c);
    std::remove(out1);
    std::remove(out2);
    std::remove(out3);
}

TEST_CASE("csv output carries the flat schema header") {
    auto r = run_cli("mc --expr \"h1 x1\" --k 4 --samples 50 --seed 3 --format csv");
    CHECK(r.exit_code == 0);
    CHECK(r.output.rfind("run_id,command,expr,k,n,m,w,M,samples,seed,mean_re,mean_im,"
                         "second_abs,stderr_mean,stderr_second,eps,tail_frac,mean_bound,"
                         "second_bound,tail_bound,tail_valid",
                         0) == 0);
}

TEST_CASE("decay sweep emits one row per k") {
    auto r = run_cli("mc --expr \"h1 x1 h1^-1 x2\" --ks 4 --ks 8 --samples 60 --seed 5 "
                     "--format csv --eps 0.1");
    CHECK(r.exit_code == 0);
    int rows = 0;
    std::istringstream is(r.output);
    std::string line;
    while (std::getline(is, line))
        if (line.find(",mc,") != std::string::npos) ++rows;
    CHECK(rows == 2);
}

TEST_CASE("tail and freeness subcommands run") {
    auto t = run_cli("tail --expr \"h1 x1 h1^-1 x2\" --k 8 --eps 0.5 --samples 200 --seed 11");
    CHECK(t.exit_code == 0);
    CHECK(t.output.find("tail_frac") != std::string::npos);

    auto f = run_cli("freeness --mode microstate --k 8 --s 1 --n 1 --m 2 --eps 0.5 "
                     "--samples 20 --seed 2");
    CHECK(f.exit_code == 0);
    CHECK(f.output.find("\"fraction\"") != std::string::npos);

    auto c = run_cli("freeness --mode conjugation --k 8 --s 2 --m 2 --eps 0.5 "
                     "--samples 20 --seed 2");
    CHECK(c.exit_code == 0);
}

TEST_CASE("sample subcommand dumps a valid matrix document") {
    auto r = run_cli("sample --k 3 --seed 4");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("\"entries\"") != std::string::npos);
    CHECK(r.output.find("\"k\": 3") != std::string::npos);
}

TEST_CASE("verify lemmas suite passes at reduced caps") {
    auto r = run_cli("verify --suite lemmas --max-m 2 --max-k 4 --seed 5");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("verification passed") != std::string::npos);
    CHECK(r.output.find("FAIL") == std::string::npos);
}

TEST_CASE("verify corollaries suite passes at reduced sampling") {
    auto r = run_cli("verify --suite corollaries --samples 100 --seed 5");
    CHECK(r.exit_code == 0);
}
