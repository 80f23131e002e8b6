#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace {

struct run_result {
    int code;
    std::string out;
    std::string err;
};

std::string slurp(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

run_result run_cli(const std::string& args) {
    const std::string out_path = "cli_stdout.tmp";
    const std::string err_path = "cli_stderr.tmp";
    const std::string cmd = std::string(LOGANHARM_CLI_PATH) + " " + args +
                            " >" + out_path + " 2>" + err_path;
    const int rc = std::system(cmd.c_str());
    run_result r;
    r.code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    std::remove(out_path.c_str());
    std::remove(err_path.c_str());
    return r;
}

// value in the first CSV data row "0,<value>"
double first_csv_value(const std::string& text) {
    const auto pos = text.find("\n0,");
    REQUIRE(pos != std::string::npos);
    return std::strtod(text.c_str() + pos + 3, nullptr);
}

} // namespace

TEST_CASE("help exits zero") {
    const auto r = run_cli("--help");
    CHECK(r.code == 0);
    CHECK(r.out.find("spectrum") != std::string::npos);
    CHECK(r.out.find("reproduce") != std::string::npos);
}

TEST_CASE("no subcommand is a usage error") {
    const auto r = run_cli("");
    CHECK(r.code == 1);
}

TEST_CASE("spectrum: harmonic ground state") {
    const auto r = run_cli("spectrum --family quad --omega 1 --levels 1 --format csv");
    CHECK(r.code == 0);
    CHECK(r.out.rfind("# loganharm-lab v1\n", 0) == 0);
    CHECK(std::abs(first_csv_value(r.out) - 1.0) < 1e-8);
}

TEST_CASE("spectrum: invalid omega is a config error") {
    const auto r = run_cli("spectrum --family log --omega 0 --g 1");
    CHECK(r.code == 1);
    CHECK(r.err.find("omega must be positive") != std::string::npos);
}

TEST_CASE("spectrum: four levels of the reference deep well") {
    const auto r =
        run_cli("spectrum --family log --omega 0.001 --g 1 --levels 4");
    CHECK(r.code == 0);
    CHECK(r.out.find("\"command\": \"spectrum\"") != std::string::npos);
    CHECK(r.out.find("\"energies\"") != std::string::npos);
    // four ascending energies near the well bottom -12.8155
    CHECK(r.out.find("-12.81") != std::string::npos);
}

TEST_CASE("spectrum: non-convergence exits 2") {
    const auto r = run_cli(
        "spectrum --family log --omega 1 --g 1 --levels 2 --tol 1e-10 "
        "--initial-n 64 --refinements 2");
    CHECK(r.code == 2);
    CHECK(r.err.find("error:") != std::string::npos);
    // the failure still reports the best estimate it reached
    CHECK(r.err.find("best estimate") != std::string::npos);
    CHECK(r.err.find("2.21") != std::string::npos);
}

TEST_CASE("largen: centrifugal estimate against exact") {
    const auto r = run_cli("largen --family centrifugal --N 10 --format csv");
    CHECK(r.code == 0);
    CHECK(r.out.find("n,shift,energy,exact") != std::string::npos);
    CHECK(r.out.find(",23\n") != std::string::npos);
}

TEST_CASE("largen: shallow well is classified invisible") {
    const auto r = run_cli("largen --family log --omega 1 --g 0.1");
    CHECK(r.code == 0);
    CHECK(r.out.find("\"regime\": \"invisible\"") != std::string::npos);
}

TEST_CASE("largen: deep-well ladder") {
    const auto r = run_cli("largen --family log --omega 0.001 --g 1 --levels 4");
    CHECK(r.code == 0);
    CHECK(r.out.find("0.001414213") != std::string::npos);
}

TEST_CASE("reproduce: unknown target") {
    const auto r = run_cli("reproduce fig9");
    CHECK(r.code == 1);
    CHECK(r.err.find("unknown target") != std::string::npos);
}

TEST_CASE("reproduce: fig2 to a file") {
    const std::string path = "cli_fig2.tmp";
    const auto r = run_cli("reproduce fig2 --format csv --out " + path);
    CHECK(r.code == 0);
    const std::string text = slurp(path);
    std::remove(path.c_str());
    CHECK(text.rfind("# table=curves", 0) == 0);
    CHECK(text.find("# loganharm-lab v1") != std::string::npos);
    CHECK(text.find("x,V,approx_left,approx_right") != std::string::npos);
}

TEST_CASE("config file: sections feed subcommands, unknown keys rejected") {
    {
        std::ofstream cfg("cli_cfg.tmp");
        cfg << "[spectrum]\nfamily=quad\nomega=1\nlevels=2\nformat=csv\n";
    }
    auto r = run_cli("--config cli_cfg.tmp spectrum");
    CHECK(r.code == 0);
    CHECK(std::abs(first_csv_value(r.out) - 1.0) < 1e-8);
    CHECK(r.out.find("\n1,") != std::string::npos);   // second level present

    // flags take precedence over the file
    r = run_cli("--config cli_cfg.tmp spectrum --levels 1");
    CHECK(r.code == 0);
    CHECK(r.out.find("\n1,") == std::string::npos);

    {
        std::ofstream cfg("cli_cfg.tmp", std::ios::app);
        cfg << "bogus=1\n";
    }
    r = run_cli("--config cli_cfg.tmp spectrum");
    CHECK(r.code == 1);
    std::remove("cli_cfg.tmp");
}

TEST_CASE("identical invocations produce identical bytes") {
    const std::string args =
        "spectrum --family log --omega 1 --g 1 --levels 2 --tol 1e-6";
    const auto a = run_cli(args);
    const auto b = run_cli(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK_FALSE(a.out.empty());
}
