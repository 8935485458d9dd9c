#include <g2sew/cli.hpp>

#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sys/wait.h>

using namespace g2sew;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST(Cli, BetaTable) {
    const auto r4 = run({"beta", "--max", "4"});
    EXPECT_EQ(r4.code, 0);
    EXPECT_EQ(r4.out, "k   beta_k\n2   -1/12\n4   -1/480\n");
    const auto r14 = run({"beta", "--max", "14"});
    EXPECT_NE(r14.out.find("14  1/464486400\n"), std::string::npos);
    EXPECT_EQ(run({"beta", "--max", "2"}).out, "k   beta_k\n2   -1/12\n");
    EXPECT_EQ(run({"beta", "--max", "5"}).code, 2);
}

TEST(Cli, Lambda) {
    const auto r = run({"lambda", "--max-weight", "6"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("lambda^(0) = 1 * vacuum\n"), std::string::npos);
    EXPECT_NE(r.out.find("lambda^(2) = -1/12 * L[-2]\n"), std::string::npos);
    EXPECT_NE(r.out.find("lambda^(6) = -1/10368 * L[-2]L[-2]L[-2] + 1/5760 * L[-4]L[-2] + 1/12096 * L[-6]\n"),
              std::string::npos);
    EXPECT_NE(r.out.find("agree: yes"), std::string::npos);
    EXPECT_EQ(run({"lambda", "--max-weight", "3"}).code, 2);
}

TEST(Cli, ComputeObjects) {
    EXPECT_EQ(run({"compute", "eisenstein", "--k", "3", "--q-order", "5"}).out, "0\n");
    EXPECT_EQ(run({"compute", "onepoint", "--partition", "2,2"}).out, "d^2 + 2*E2*d + 1/2*E4*C\n");
    EXPECT_EQ(run({"compute", "tau-degen", "--eps-order", "5"}).out, "(-1/12)*eps^2 + (1/144*E2)*eps^4 + O(eps^6)\n");
    EXPECT_EQ(run({"compute", "eta", "--q-order", "2"}).out, "q^(1/24)*(1 - q - q^2 + O(q^3))\n");
    EXPECT_EQ(run({"compute", "z2-heisenberg", "--eps-order", "2", "--q-order", "1"}).code, 0);
    EXPECT_EQ(run({"compute", "period", "--eps-order", "2", "--q-order", "1"}).code, 0);
    EXPECT_EQ(run({"compute", "z2-module", "--eps-order", "2", "--q-order", "1", "--alpha-sq", "1/2"}).code, 0);
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run({"compute", "onepoint", "--partition", "1,2"}).code, 2);
    EXPECT_EQ(run({"compute", "onepoint", "--partition", "2,x"}).code, 2);
    EXPECT_EQ(run({"compute", "nothing"}).code, 2);
    EXPECT_EQ(run({"verify", "bogus"}).code, 2);
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"compute", "tau-degen", "--eps-order", "8", "--matrix-size", "5"}).code, 2);
    EXPECT_EQ(run({"compute", "z2-module", "--alpha-sq", "1/0"}).code, 2);
    EXPECT_EQ(run({"--format", "xml", "beta"}).code, 2);
    EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, VerifySuites) {
    const auto m = run({"verify", "modular-identities", "--q-order", "20"});
    EXPECT_EQ(m.code, 0);
    EXPECT_NE(m.out.find("[PASS] qd E2 = 5 E4 - E2^2"), std::string::npos);
    EXPECT_EQ(run({"verify", "detHi", "--eps-order", "4", "--q-order", "3"}).code, 0);
    EXPECT_EQ(run({"verify", "theta-degen", "--alpha-sq", "1", "--rank", "1", "--eps-order", "4", "--q-order", "3"}).code, 0);
    EXPECT_EQ(run({"verify", "theta-degen", "--eps-order", "6", "--max-weight", "4"}).code, 2);
}

TEST(Cli, JsonOutputParsesAndRoundTrips) {
    const auto r = run({"compute", "tau-degen", "--eps-order", "4", "--q-order", "3", "--format", "json"});
    ASSERT_EQ(r.code, 0);
    const auto s = from_json<EpsSeries<QSeries>>(json::parse(r.out));
    EXPECT_EQ(s, degenerate_tau(3, 4, 4));
    const auto v = run({"verify", "heisenberg-degen", "--eps-order", "4", "--q-order", "3", "--format", "json"});
    const json j = json::parse(v.out);
    EXPECT_EQ(j["pass"], true);
    EXPECT_FALSE(j["reports"][0]["checks"].empty());
    const auto b = json::parse(run({"beta", "--max", "4", "--format", "json"}).out);
    EXPECT_EQ(b[1]["beta"], "-1/480");
}

TEST(Cli, Deterministic) {
    const std::vector<std::string> args{"verify", "all", "--eps-order", "4", "--q-order", "3", "--max-weight", "4"};
    const auto a = run(args), b = run(args);
    EXPECT_EQ(a.code, 0) << a.out << a.err;
    EXPECT_EQ(a.out, b.out);
}

TEST(Cli, ConfigFile) {
    const std::string path = ::testing::TempDir() + "g2sew_cfg.ini";
    {
        std::ofstream f(path);
        f << "eps-order=5\nq-order=8\n";
    }
    EXPECT_EQ(run({"--config", path, "compute", "tau-degen"}).out, "(-1/12)*eps^2 + (1/144*E2)*eps^4 + O(eps^6)\n");
    std::remove(path.c_str());
}

TEST(Cli, BinaryExitCodes) {
    const std::string bin = G2SEW_CLI_PATH;
    auto status = [&](const std::string& args) {
        const int raw = std::system((bin + " " + args + " > /dev/null 2>&1").c_str());
        return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    };
    EXPECT_EQ(status("beta --max 4"), 0);
    EXPECT_EQ(status("beta --max 3"), 2);
    EXPECT_EQ(status("verify modular-identities"), 0);
}
