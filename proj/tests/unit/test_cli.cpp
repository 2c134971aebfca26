#include <gtest/gtest.h>

#include <json.hpp>

#include <array>
#include <cstdio>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace {

struct CliRun {
    int code = -1;
    std::string out;
    std::vector<nlohmann::json> records() const {
        std::vector<nlohmann::json> rs;
        std::istringstream ss(out);
        std::string line;
        while (std::getline(ss, line))
            if (!line.empty() && line[0] == '{') rs.push_back(nlohmann::json::parse(line));
        return rs;
    }
};

CliRun run(const std::string& args, const std::string& env = "") {
    std::string cmd = env + (env.empty() ? "" : " ") + std::string(MARKOFF_CLI) + " " + args + " 2>/dev/null";
    CliRun r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::vector<std::string> dominants(const CliRun& r) {
    std::vector<std::string> out;
    for (const auto& j : r.records())
        if (j["type"] == "triple") out.push_back(j["z"].get<std::string>());
    return out;
}

} // namespace

TEST(Cli, EnumerateExamples) {
    CliRun r = run("enumerate --bound 100");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(dominants(r), (std::vector<std::string>{"3", "6", "15", "39", "87"}));
    auto recs = r.records();
    EXPECT_EQ(recs.front()["type"], "header");
    EXPECT_EQ(recs.front()["seed"], 1);
    EXPECT_EQ(recs.back()["count"], 5);
    EXPECT_EQ(dominants(run("enumerate --bound 3")).size(), 1u);
    EXPECT_EQ(dominants(run("enumerate --bound 100 --classical")), (std::vector<std::string>{"1", "2", "5", "13", "29"}));
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run("enumerate --bound 2").code, 2);
    EXPECT_EQ(run("enumerate --bound abc").code, 2);
    EXPECT_EQ(run("").code, 2);
    EXPECT_EQ(run("verify --suites bogus --bound 10").code, 2);
    EXPECT_EQ(run("isomorph --from 3,3,4 --to 3,3,6").code, 2);
    EXPECT_EQ(run("isomorph --from 3,3 --to 3,3,6").code, 2);
    EXPECT_EQ(run("tree-path --path RL").code, 2);
    EXPECT_EQ(run("enumerate --bound 10 --format xml").code, 2);
    EXPECT_EQ(run("enumerate --bound 10 --workers 0").code, 2);
}

TEST(Cli, VerifySmall) {
    CliRun r = run("verify --bound 1000 --suites all --seed 5");
    EXPECT_EQ(r.code, 0);
    auto recs = r.records();
    EXPECT_EQ(recs.back()["status"], "pass");
    int suites = 0;
    for (const auto& j : recs)
        if (j["type"] == "suite") {
            ++suites;
            EXPECT_EQ(j["status"], "pass") << j.dump();
        }
    EXPECT_EQ(suites, 6);
    EXPECT_EQ(run("verify --suites nilpotent --bound 3").code, 0);
}

TEST(Cli, UniquenessAtTrillion) {
    CliRun r = run("verify --suites uniqueness --bound 1000000000000");
    ASSERT_EQ(r.code, 0);
    auto recs = r.records();
    EXPECT_EQ(recs[1]["notes"]["verdict"], "unique");
    EXPECT_EQ(recs[1]["notes"]["triples"], "141");
}

TEST(Cli, Isomorph) {
    CliRun r = run("isomorph --from 3,3,3 --to 3,3,6");
    ASSERT_EQ(r.code, 0);
    auto rec = r.records()[1];
    EXPECT_EQ(rec["N"].dump(), R"([["0","-1","0"],["1","3","0"],["0","0","1"]])");
    EXPECT_EQ(rec["params"]["s"], "-1/30");
    CliRun s = run("isomorph --from 3,3,3 --to 3,3,3 --s 2/3");
    ASSERT_EQ(s.code, 0);
    EXPECT_EQ(s.records()[1]["N"].dump(), R"([["6","8","3"],["-3","-3","-1"],["1","0","0"]])");
    CliRun z = run("isomorph --from 3,3,3 --to 3,3,3 --s 0");
    EXPECT_EQ(z.records()[1]["N"].dump(), R"([["1","0","0"],["0","1","0"],["0","0","1"]])");
    CliRun bad = run("isomorph --from 3,3,3 --to 3,3,3 --matrix '[[1,1,0],[0,1,0],[0,0,1]]'");
    EXPECT_EQ(bad.code, 1);
    EXPECT_EQ(bad.records().back()["error"], "not-an-isomorph");
    EXPECT_EQ(run("isomorph --from 3,3,6 --to 3,6,15 --s 1/2").code, 2);
}

TEST(Cli, AutomorphAndTreePath) {
    CliRun a = run("automorph --arr 3,3,3 --range 1");
    ASSERT_EQ(a.code, 0);
    auto recs = a.records();
    ASSERT_EQ(recs.size(), 4u);
    for (std::size_t i = 1; i < recs.size(); ++i) {
        EXPECT_TRUE(recs[i]["integral"].get<bool>());
        EXPECT_TRUE(recs[i]["automorph"].get<bool>());
    }
    CliRun t = run("tree-path --triple 6,15,87");
    ASSERT_EQ(t.code, 0);
    EXPECT_EQ(t.records()[1]["path"], "LLR");
    CliRun u = run("tree-path --path LLR --classical");
    EXPECT_EQ(u.records()[1]["triple"]["z"], "29");
}

TEST(Cli, PairReport) {
    CliRun r = run("pair-report --bound 1000");
    ASSERT_EQ(r.code, 0);
    int pairs = 0;
    for (const auto& j : r.records())
        if (j["type"] == "pair") {
            ++pairs;
            EXPECT_EQ(j["checks"]["cross_identity"], "pass");
            EXPECT_EQ(j["lemmas"]["size_bound"], "hypothesis-not-met");
            EXPECT_FALSE(j["frak"]["contradiction"].get<bool>());
        }
    EXPECT_EQ(pairs, 8);
}

TEST(Cli, DeterministicAcrossWorkersAndFormats) {
    for (const std::string args : {"enumerate --bound 10^20", "verify --bound 2000 --suites tree,mt,isomorph --seed 9",
                                   "pair-report --bound 3000"}) {
        CliRun a = run(args + " --workers 1"), b = run(args + " --workers 4");
        EXPECT_EQ(a.code, b.code);
        // headers differ only in the workers field
        auto ra = a.records(), rb = b.records();
        ASSERT_EQ(ra.size(), rb.size()) << args;
        for (std::size_t i = 1; i < ra.size(); ++i) EXPECT_EQ(ra[i], rb[i]) << args;
        EXPECT_EQ(run(args + " --workers 2").out, run(args + " --workers 2").out);
    }
    CliRun env = run("enumerate --bound 100", "MARKOFF_WORKERS=3");
    EXPECT_EQ(env.records()[0]["config"]["workers"], 3);
    CliRun csv = run("enumerate --bound 100 --format csv");
    EXPECT_NE(csv.out.find("type,x,y,z,classical,path"), std::string::npos);
    EXPECT_EQ(run("enumerate --bound 100 --format pretty").code, 0);
}
