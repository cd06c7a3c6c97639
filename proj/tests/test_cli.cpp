// Copyright 2026 The Coherence Verification Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const fs::path kRoot = fs::temp_directory_path() / "coherence_test_cli";

int run(const std::string &args, const std::string &env = "") {
    const std::string cmd = env + " " + COHERENCE_CLI + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string out(const std::string &name) { return (kRoot / name).string(); }

}  // namespace

TEST(cli, paradox_simulated_is_deterministic) {
    fs::remove_all(kRoot);
    const std::string flags = "paradox --theta pi/4 --mode simulated --seed 7 --counts-per-setting 50000 ";
    ASSERT_EQ(run(flags + "--out " + out("a")), 0);
    ASSERT_EQ(run(flags + "--out " + out("b")), 0);
    int compared = 0;
    for (const auto &entry : fs::directory_iterator(kRoot / "a")) {
        if (entry.path().extension() != ".csv") continue;
        EXPECT_EQ(slurp(entry.path()), slurp(kRoot / "b" / entry.path().filename())) << entry.path();
        ++compared;
    }
    EXPECT_GE(compared, 6);
}

TEST(cli, exit_codes) {
    EXPECT_EQ(run("--version"), 0);
    EXPECT_EQ(run(""), 2);
    EXPECT_EQ(run("bogus"), 2);
    EXPECT_EQ(run("paradox --no-such-flag 1 --out " + out("e1")), 2);
    EXPECT_EQ(run("paradox --theta nonsense --out " + out("e2")), 2);
    EXPECT_EQ(run("game --theta-grid '' --out " + out("e3")), 2);
    EXPECT_EQ(run("paradox --config /nonexistent.cfg --out " + out("e4")), 1);
    EXPECT_EQ(run("replay /nonexistent/manifest.json --out " + out("e5")), 1);
}

TEST(cli, config_from_environment) {
    fs::create_directories(kRoot);
    const fs::path cfg = kRoot / "env.cfg";
    std::ofstream(cfg) << "visibility = 0.9\ncounts_per_setting = 100000\n";
    ASSERT_EQ(run("visibility --mode exact --out " + out("env"), "COHERENCE_CONFIG=" + cfg.string()), 0);
    const std::string doc = slurp(kRoot / "env" / "manifest.json");
    EXPECT_NE(doc.find("\"visibility\": 0.9\n"), std::string::npos) << doc;
}

TEST(cli, report_and_replay) {
    ASSERT_EQ(run("report --seed 2 --counts-per-setting 20000 --bootstrap-replicates 50 --out " + out("r")), 0);
    ASSERT_EQ(run("replay " + out("r") + "/manifest.json --out " + out("r2")), 0);
    int files = 0;
    for (const auto &entry : fs::directory_iterator(kRoot / "r")) {
        if (entry.path().filename() == "manifest.json") continue;
        EXPECT_EQ(slurp(entry.path()), slurp(kRoot / "r2" / entry.path().filename())) << entry.path();
        ++files;
    }
    EXPECT_GE(files, 10);
}
