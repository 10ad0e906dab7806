#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>

#include "hodgelab/report/report.hpp"

using namespace hodgelab;

namespace {

struct Run {
    int code;
    std::string out;
};

Run run(const std::string& args) {
    std::string cmd = std::string(HODGELAB_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* f = popen(cmd.c_str(), "r");
    Run r{-1, {}};
    if (!f) return r;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), f)) > 0) r.out.append(buf.data(), n);
    int st = pclose(f);
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::string write_tmp(const std::string& name, const std::string& body) {
    std::string path = ::testing::TempDir() + name;
    std::ofstream(path) << body;
    return path;
}

}  // namespace

TEST(Cli, IntegralTablePasses) {
    auto r = run("bga --ring Z --nmax 3 --wmax 54");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("summary: pass="), std::string::npos);
    EXPECT_NE(r.out.find("fail=0"), std::string::npos);
}

TEST(Cli, CartierStrands) {
    auto r = run("cartier --p 3 --vars 2 --wmax 12 --format json");
    ASSERT_EQ(r.code, 0);
    auto j = json::parse(r.out);
    EXPECT_EQ(j["command"], "cartier");
    EXPECT_EQ(j["params"]["p"], 3);
    EXPECT_EQ(j["summary"]["fail"], 0);
    EXPECT_GT(j["summary"]["pass"].get<int>(), 10);
    EXPECT_FALSE(j.contains("elapsed_ms"));
}

TEST(Cli, ExpectedNonDegeneration) {
    auto r = run("hdr --stack BGa --nmax 3 --format json");
    EXPECT_EQ(r.code, 0);
    auto j = json::parse(r.out);
    bool seen = false;
    for (auto& e : j["entries"])
        if (e["id"] == "verdict") {
            seen = true;
            EXPECT_EQ(e["result"]["verdict"], "non-degenerate");
            EXPECT_EQ(e["verdict"], "pass");
        }
    EXPECT_TRUE(seen);
    EXPECT_EQ(run("hdr --stack BGa --nmax 3 --expect degenerate").code, 2);
    EXPECT_EQ(run("hdr --stack BGm --nmax 4").code, 0);
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run("").code, 1);
    EXPECT_EQ(run("nosuch").code, 1);
    EXPECT_EQ(run("cartier --p 4").code, 1);
    EXPECT_EQ(run("bga --nmax x").code, 1);
    EXPECT_EQ(run("hdr --stack BG").code, 1);
    EXPECT_EQ(run("hdr --stack A:1,-1").code, 1);
    EXPECT_EQ(run("census --p 2 --wmax 32").code, 0);
}

TEST(Cli, ConfigFile) {
    auto good = write_tmp("good.cfg", "# defaults\np = 2\nwmax = 8\nformat = json\n");
    auto r = run("cartier --vars 1 --config " + good);
    ASSERT_EQ(r.code, 0);
    auto j = json::parse(r.out);
    EXPECT_EQ(j["params"]["p"], 2);
    EXPECT_EQ(j["params"]["wmax"], 8);
    // command line wins over the file
    j = json::parse(run("cartier --vars 1 --p 3 --config " + good).out);
    EXPECT_EQ(j["params"]["p"], 3);

    auto bad = write_tmp("bad.cfg", "p = 2\nbogus_key = 1\n");
    std::string cmd = std::string(HODGELAB_CLI_PATH) + " cartier --config " + bad + " 2>&1";
    FILE* f = popen(cmd.c_str(), "r");
    ASSERT_NE(f, nullptr);
    std::string msg;
    std::array<char, 512> buf;
    while (fgets(buf.data(), buf.size(), f)) msg += buf.data();
    int st = pclose(f);
    EXPECT_EQ(WEXITSTATUS(st), 1);
    EXPECT_NE(msg.find("bogus_key"), std::string::npos);
}

TEST(Cli, JsonIsDeterministic) {
    for (auto args : {"bga --ring Z --nmax 3 --wmax 30", "kappa --p 3 --rmax 2 --wmax 18", "hdr --stack P1:0,1 --nmax 4"}) {
        auto a = run(std::string(args) + " --format json --threads 1");
        auto b = run(std::string(args) + " --format json --threads 4");
        EXPECT_EQ(a.out, b.out) << args;
        EXPECT_FALSE(a.out.empty());
    }
}

TEST(Cli, JsonRoundTrips) {
    for (auto args : {"bga --ring Z --nmax 3 --wmax 30", "di-split --p 3", "unfold --p 2", "hodge --stack BGa --nmax 3"}) {
        auto j = json::parse(run(std::string(args) + " --format json --timing").out);
        EXPECT_TRUE(j.contains("elapsed_ms"));
        auto rep = Report::from_json(j);
        EXPECT_EQ(rep.to_json(true), j) << args;
        EXPECT_EQ(Report::from_json(rep.to_json()), rep);
    }
}

TEST(Cli, EntriesAreOrdered) {
    auto j = json::parse(run("hdr --stack BGa --nmax 3 --format json").out);
    const json* prev = nullptr;
    for (auto& e : j["entries"]) {
        if (prev) {
            auto a = std::make_tuple((*prev)["module"].get<std::string>(), (*prev)["n"].get<int>(), (*prev)["w"].get<long>());
            auto b = std::make_tuple(e["module"].get<std::string>(), e["n"].get<int>(), e["w"].get<long>());
            EXPECT_LE(a, b);
        }
        prev = &e;
    }
}

TEST(Cli, TamperedSummaryRejected) {
    auto j = json::parse(run("census --p 3 --wmax 18 --format json").out);
    j["summary"]["pass"] = 99;
    EXPECT_THROW(Report::from_json(j), ConfigError);
}
