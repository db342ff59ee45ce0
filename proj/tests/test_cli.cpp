// End-to-end checks of the command-line harness: the binary path comes in
// through BREGMAN_CLI (set by the test runner).

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

namespace fs = std::filesystem;

std::string cli_path() {
    const char* p = std::getenv("BREGMAN_CLI");
    REQUIRE_MESSAGE(bool(p && *p), "BREGMAN_CLI must point at the CLI binary");
    return p;
}

int run_cli(const std::string& args, const fs::path& dir,
            const fs::path& stderr_file = {}) {
    std::string cmd = "cd " + dir.string() + " && " + cli_path() + " " + args;
    if (!stderr_file.empty()) cmd += " 2> " + stderr_file.string();
    else cmd += " 2> /dev/null";
    cmd += " > /dev/null";
    const int rc = std::system(cmd.c_str());
    return rc == -1 ? -1 : WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// Strip the trailing seconds column from every CSV line.
std::string without_seconds(const std::string& csv) {
    std::istringstream in(csv);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line)) {
        const auto pos = line.rfind(',');
        out << line.substr(0, pos) << '\n';
    }
    return out.str();
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("bregman_cli_" + std::to_string(std::rand()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

} // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("gen, run, compare, certify pipeline") {
    TempDir tmp;
    CHECK(run_cli("gen --family dopt --m 8 --n 20 --seed 3 --out inst.json",
                  tmp.path) == 0);
    CHECK(fs::exists(tmp.path / "inst.json"));

    CHECK(run_cli("run --instance inst.json --algo abpg --gamma 2 --iters 80 "
                  "--out run.csv",
                  tmp.path) == 0);
    const std::string run_csv = slurp(tmp.path / "run.csv");
    CHECK(run_csv.rfind("k,F,gap,theta,gamma,G,Ghat,inner,grad_calls,seconds",
                        0) == 0);

    CHECK(run_cli("compare --instance inst.json --algos bpg,bpg-ls,abpg,abpg-g "
                  "--gamma 2 --iters 120 --out cmp.csv",
                  tmp.path) == 0);
    for (const char* f : {"cmp.csv", "cmp-bpg.csv", "cmp-bpg-ls.csv",
                          "cmp-abpg.csv", "cmp-abpg-g.csv", "cmp-summary.json"})
        CHECK(fs::exists(tmp.path / f));

    CHECK(run_cli("certify --instance inst.json --trace cmp-abpg-g.csv "
                  "--gamma 2 --summary cmp-summary.json --out cert.csv",
                  tmp.path) == 0);
    const std::string cert = slurp(tmp.path / "cert.csv");
    CHECK(cert.rfind("k,gap,Gbar,bound,slope", 0) == 0);
}

TEST_CASE("abpg-e run records the exponent column") {
    TempDir tmp;
    CHECK(run_cli("gen --family poisson --m 30 --n 20 --seed 5 --reg none "
                  "--out p.json",
                  tmp.path) == 0);
    CHECK(run_cli("run --instance p.json --algo abpg-e --gamma0 3 --delta 0.2 "
                  "--iters 60 --out e.csv",
                  tmp.path) == 0);
    std::ifstream in(tmp.path / "e.csv");
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    // gamma is the 5th field
    std::stringstream ss(row);
    std::string field;
    for (int i = 0; i < 5; ++i) std::getline(ss, field, ',');
    CHECK(std::stod(field) == 3.0);
}

TEST_CASE("repeated compare invocations are byte-identical modulo seconds") {
    TempDir a, b;
    const std::string gen =
        "gen --family relent --m 20 --n 30 --seed 11 --out i.json";
    const std::string cmp =
        "compare --instance i.json --algos bpg,abpg-g --gamma 2 --iters 60 "
        "--ref-mult 3 --out c.csv";
    CHECK(run_cli(gen, a.path) == 0);
    CHECK(run_cli(cmp, a.path) == 0);
    CHECK(run_cli(gen, b.path) == 0);
    CHECK(run_cli(cmp, b.path) == 0);
    CHECK(slurp(a.path / "i.json") == slurp(b.path / "i.json"));
    for (const char* f : {"c.csv", "c-bpg.csv", "c-abpg-g.csv"})
        CHECK(without_seconds(slurp(a.path / f)) ==
              without_seconds(slurp(b.path / f)));
    CHECK(slurp(a.path / "c-summary.json") == slurp(b.path / "c-summary.json"));
}

TEST_CASE("failures exit nonzero with a diagnostic") {
    TempDir tmp;
    auto errfile = tmp.path / "err.txt";
    CHECK(run_cli("run --instance missing.json --algo bpg --out t.csv", tmp.path,
                  errfile) != 0);
    CHECK(slurp(errfile).find("error:") != std::string::npos);
    CHECK(run_cli("gen --family dopt --m 10 --n 5 --seed 1 --out bad.json",
                  tmp.path, errfile) != 0);
    CHECK(run_cli("run --no-such-flag", tmp.path, errfile) != 0);
    CHECK(run_cli("gen --family nope --m 2 --n 4 --seed 1 --out x.json",
                  tmp.path, errfile) != 0);
}

TEST_CASE("BREGMAN_OUT_DIR redirects relative outputs") {
    TempDir tmp;
    fs::create_directories(tmp.path / "outs");
    std::string cmd = "cd " + tmp.path.string() + " && BREGMAN_OUT_DIR=" +
                      (tmp.path / "outs").string() + " " + cli_path() +
                      " gen --family dopt --m 4 --n 8 --seed 1 --out inst.json "
                      "> /dev/null 2>&1";
    CHECK(WEXITSTATUS(std::system(cmd.c_str())) == 0);
    CHECK(fs::exists(tmp.path / "outs" / "inst.json"));
    CHECK(!fs::exists(tmp.path / "inst.json"));
}

TEST_SUITE_END();
