#include "doctest.h"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

namespace {

struct Run {
    int code;
    std::string out;
};

// Runs the CLI with stderr discarded.
Run cli(const std::string& args, const std::string& env = "")
{
    const std::string cmd = env + " " + GALOIS_EMBED_CLI + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    std::array<char, 4096> buf{};
    while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe))
        out.append(buf.data(), n);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

const std::filesystem::path kDir = std::filesystem::temp_directory_path() / "galois_embed_cli_test";

} // namespace

TEST_CASE("construct")
{
    const auto b = cli("construct --construction B --d 2 --tau 0.3+1.1i --q0 1/2,0");
    CHECK(b.code == 0);
    CHECK(b.out.find("group order          24") != std::string::npos);
    const auto a = cli("construct --construction A --d 1 --q0 1/2,0");
    CHECK(a.code == 0);
    CHECK(a.out.find("theoretical degree   4") != std::string::npos);
    CHECK(a.out.find("very ample (precond) yes") != std::string::npos);
    CHECK(cli("construct --tau 0.3-1.1i").code == 2);
    CHECK(cli("construct --tau 0.3").code == 2);
    CHECK(cli("construct --d 0").code == 2);
    CHECK(cli("construct --q0 1/2").code == 2);
    CHECK(cli("frobnicate").code == 2);
}

TEST_CASE("intersection")
{
    CHECK(cli("intersection --self \"4 0;0 4\"").out == "32\n");
    CHECK(cli("intersection --mixed \"1 0;0 1\":1 \"1 1;1 1\":1").out == "2\n");
    CHECK(cli("intersection --chi \"2 1;1 2\"").out == "3\n");
    CHECK(cli("intersection --mixed \"1 0;0 1\":1").code == 2);
    CHECK(cli("intersection --self \"1 2;3 4\"").code == 2);
    CHECK(cli("intersection").code == 2);
}

TEST_CASE("verify exit codes, determinism and report")
{
    std::filesystem::create_directories(kDir);
    const auto first = (kDir / "a1.json").string(), second = (kDir / "a2.json").string();
    CHECK(cli("verify --samples 5 --output " + first).code == 0);
    CHECK(cli("verify --samples 5 --jobs 3 --output " + second).code == 0);
    CHECK(slurp(first) == slurp(second));
    CHECK(cli("report " + first).code == 0);

    const auto b1 = (kDir / "b1.json").string();
    CHECK(cli("verify --construction B --d 1 --q0 1/2,0 --samples 5 --output " + b1).code == 1);
    const auto rep = cli("report " + b1);
    CHECK(rep.code == 1);
    CHECK(rep.out.find("very ample (precond) no") != std::string::npos);
    CHECK(cli("report " + (kDir / "missing.json").string()).code == 2);

    // Seed precedence: config < environment < flag.
    const auto cfg = (kDir / "cfg.json").string();
    std::ofstream(cfg) << "{\n  \"samples\": 2,\n  \"seed\": 5\n}\n";
    const auto from_cfg = cli("verify --config " + cfg);
    const auto from_env = cli("verify --config " + cfg, "GALOIS_EMBED_SEED=9");
    const auto from_flag = cli("verify --config " + cfg + " --seed 11", "GALOIS_EMBED_SEED=9");
    CHECK(from_cfg.out.find("\"seed\": 5,") != std::string::npos);
    CHECK(from_env.out.find("\"seed\": 9,") != std::string::npos);
    CHECK(from_flag.out.find("\"seed\": 11,") != std::string::npos);

    std::ofstream(cfg) << "{\n  \"samples\": 2,\n  \"d\": \"two\"\n}\n";
    CHECK(cli("verify --config " + cfg).code == 2);
    std::filesystem::remove_all(kDir);
}
