// End-to-end tests of the command-line tool: each subcommand runs on a
// sub-second parameterization; exit codes and output shape are asserted,
// and identical invocations must produce byte-identical output.

#include <gtest/gtest.h>

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

RunResult run_cli_env(const std::string& env, const std::string& args) {
    std::string cmd = env + (env.empty() ? "" : " ") + std::string(TOTVAR_CLI_PATH) +
                      " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    EXPECT_NE(pipe, nullptr);
    RunResult res;
    std::array<char, 4096> buf;
    std::size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0)
        res.output.append(buf.data(), got);
    int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

RunResult run_cli(const std::string& args) { return run_cli_env("", args); }

int count_lines(const std::string& s) {
    int n = 0;
    for (char c : s)
        if (c == '\n') ++n;
    return n;
}

TEST(Cli, IntVarianceEmitsCheckpoints) {
    auto r = run_cli("int-variance --X 2000 --interval hx");
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_NE(r.output.find("X_checkpoint,variance_estimate"), std::string::npos);
    EXPECT_NE(r.output.find("\n2000,"), std::string::npos); // final checkpoint
}

TEST(Cli, IntVarianceDeltaKinds) {
    auto r = run_cli("int-variance --X 3000 --interval 2xdelta --delta 1/2");
    EXPECT_EQ(r.exit_code, 0);
    auto bad = run_cli("int-variance --X 100 --interval xdelta --delta 3/2");
    EXPECT_EQ(bad.exit_code, 2);
    auto unknown = run_cli("int-variance --X 100 --interval quux");
    EXPECT_EQ(unknown.exit_code, 2);
}

TEST(Cli, IntLemmasSuitesPass) {
    EXPECT_EQ(run_cli("int-lemmas --check sumymn --cutoff 8").exit_code, 0);
    EXPECT_EQ(run_cli("int-lemmas --check sumneo --cutoff 500").exit_code, 0);
    EXPECT_EQ(run_cli("int-lemmas --check gcdsum --cutoff 60").exit_code, 0);
    EXPECT_EQ(run_cli("int-lemmas --check series --cutoff 40").exit_code, 0);
    EXPECT_EQ(run_cli("int-lemmas --check nonsense --cutoff 10").exit_code, 2);
}

TEST(Cli, AssumptionTestMatrix) {
    auto r = run_cli("assumption-test --m 2 --n 3 --delta 1/2 --X 2000");
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_EQ(count_lines(r.output), 3); // header + 2 rows
    auto bad = run_cli("assumption-test --m 5 --n 4 --delta 1/2 --X 100");
    EXPECT_EQ(bad.exit_code, 2); // X below 100*m*n
}

TEST(Cli, FfVarianceFormulaCheck) {
    auto r = run_cli("ff-variance --q 3 --n 5 --h 0 --formula-check");
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_EQ(count_lines(r.output), 2);
    EXPECT_NE(r.output.find("3,5,0,6008,531441,"), std::string::npos);
    auto badh = run_cli("ff-variance --q 3 --n 4 --h 3");
    EXPECT_EQ(badh.exit_code, 2);
}

TEST(Cli, FfVarianceSweep) {
    auto r = run_cli("ff-variance --q 3 --n 5 --h 0 --sweep 3,5");
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_EQ(count_lines(r.output), 3);
}

TEST(Cli, DeterministicOutput) {
    std::string args = "ff-variance --q 3 --n 5 --h 0 --formula-check";
    auto a = run_cli(args);
    auto b = run_cli(args);
    EXPECT_EQ(a.exit_code, 0);
    EXPECT_EQ(a.output, b.output);
    std::string args2 = "int-variance --X 5000 --interval 2xdelta1 --delta 1/2";
    EXPECT_EQ(run_cli(args2).output, run_cli(args2).output);
}

TEST(Cli, WorkerCountDoesNotChangeOutput) {
    std::string args = "ff-variance --q 5 --n 5 --h 0 --formula-check";
    auto serial = run_cli_env("TOTVAR_WORKERS=1", args);
    auto threaded = run_cli_env("TOTVAR_WORKERS=3", args);
    EXPECT_EQ(serial.exit_code, 0);
    EXPECT_EQ(threaded.exit_code, 0);
    EXPECT_EQ(serial.output, threaded.output);
}

TEST(Cli, CharsumAndRhChecks) {
    EXPECT_EQ(run_cli("ff-charsum-check --q 3 --m 3 --n 4").exit_code, 0);
    EXPECT_EQ(run_cli("ff-rh-check --q 3 --m 3").exit_code, 0);
    // table bound: (q-1) q^(m-1) > 1e7
    EXPECT_EQ(run_cli("ff-rh-check --q 101 --m 5").exit_code, 4);
}

TEST(Cli, PolyDumpFormat) {
    auto r = run_cli("ff-poly-dump --q 3 --n 2");
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_EQ(count_lines(r.output), 10); // header + 9 monic quadratics
    EXPECT_NE(r.output.find("3,2,T^2,6,2,3"), std::string::npos);
    EXPECT_NE(r.output.find("3,2,1+T^2,"), std::string::npos);
}

TEST(Cli, JsonEmission) {
    auto r = run_cli("--emit json ff-variance --q 3 --n 5 --h 0");
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_EQ(r.output.front(), '[');
    EXPECT_NE(r.output.find("\"var_formula\""), std::string::npos);
}

TEST(Cli, KatzHypothesisFlagged) {
    // n - h < 5: still computes, but warns and flags the row
    auto r = run_cli("ff-variance --q 3 --n 4 --h 0");
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_NE(r.output.find("katz-hypothesis-violated"), std::string::npos);
}

TEST(Cli, OutFileWriting) {
    std::string path = ::testing::TempDir() + "totvar_out.csv";
    auto r = run_cli("--out " + path + " ff-poly-dump --q 3 --n 1");
    EXPECT_EQ(r.exit_code, 0);
    std::ifstream f(path);
    ASSERT_TRUE(f.good());
    std::stringstream ss;
    ss << f.rdbuf();
    EXPECT_NE(ss.str().find("q,n,poly,phi,beta_num,beta_den"), std::string::npos);
    std::remove(path.c_str());
}

TEST(Cli, GoldenUpdateAndCheck) {
    std::string path = ::testing::TempDir() + "totvar_goldens.json";
    std::remove(path.c_str());
    auto first = run_cli("golden-update --out " + path);
    EXPECT_EQ(first.exit_code, 0);
    std::ifstream f(path, std::ios::binary);
    ASSERT_TRUE(f.good());
    std::stringstream ss;
    ss << f.rdbuf();
    std::string original = ss.str();
    EXPECT_NE(original.find("\"goldens\""), std::string::npos);

    // re-recording is byte-identical
    auto again = run_cli("golden-update --out " + path);
    EXPECT_EQ(again.exit_code, 0);
    std::ifstream f2(path, std::ios::binary);
    std::stringstream ss2;
    ss2 << f2.rdbuf();
    EXPECT_EQ(ss2.str(), original);

    // check mode passes on the fresh file
    EXPECT_EQ(run_cli("golden-update --out " + path + " --check").exit_code, 0);

    // ...and fails once the stored values are tampered with
    std::string tampered = original;
    auto pos = tampered.find("6008");
    ASSERT_NE(pos, std::string::npos);
    tampered.replace(pos, 4, "6009");
    std::ofstream out(path, std::ios::binary);
    out << tampered;
    out.close();
    EXPECT_EQ(run_cli("golden-update --out " + path + " --check").exit_code, 3);
    std::remove(path.c_str());
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run_cli("").exit_code, 2);
    EXPECT_EQ(run_cli("no-such-command").exit_code, 2);
    EXPECT_EQ(run_cli("ff-variance --q 4 --n 4 --h 0").exit_code, 2); // q not prime
}

} // namespace
