#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "galois_embed/error.hpp"
#include "galois_embed/report.hpp"

using namespace galois_embed;

namespace {

ErrorKind kind_of(auto&& f)
{
    try {
        f();
    }
    catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error thrown");
    return ErrorKind::InvalidPoint;
}

std::string error_text(auto&& f)
{
    try {
        f();
    }
    catch (const Error& e) {
        return e.what();
    }
    return {};
}

} // namespace

TEST_CASE("parse_tau")
{
    CHECK(parse_tau("0.3+1.1i") == Complex(0.3, 1.1));
    CHECK(parse_tau(" -0.5 + 0.8i ") == Complex(-0.5, 0.8));
    CHECK(parse_tau("1.1i") == Complex(0, 1.1));
    CHECK(parse_tau("i") == Complex(0, 1));
    CHECK(parse_tau("0.5+i") == Complex(0.5, 1));
    CHECK(parse_tau("1e-1+2e+0i") == Complex(0.1, 2));
    CHECK(kind_of([] { parse_tau("0.3-1.1i"); }) == ErrorKind::ConfigError);
    CHECK(kind_of([] { parse_tau("0.3"); }) == ErrorKind::ConfigError);
    CHECK(kind_of([] { parse_tau("x+yi"); }) == ErrorKind::ConfigError);
}

TEST_CASE("parse_q0 and parse_matrix")
{
    CHECK(parse_q0({"1/2,0"}).order() == 2);
    CHECK(parse_q0({"1/3, 1/3"}).order() == 3);
    CHECK(parse_q0({"1/2,0", "0,1/2"}).order() == 4);
    CHECK(parse_q0({"1/2,0;0,1/2"}).order() == 4);
    CHECK(parse_q0({}).order() == 1);
    CHECK(parse_q0({"0"}).order() == 1);
    CHECK(kind_of([] { parse_q0({"1/0,0"}); }) == ErrorKind::ConfigError);
    CHECK(kind_of([] { parse_q0({"1/2"}); }) == ErrorKind::ConfigError);

    CHECK(parse_matrix("2 1;1 2") == IntMatrix{{2, 1}, {1, 2}});
    CHECK(parse_matrix(" 4 ") == IntMatrix{{4}});
    CHECK(kind_of([] { parse_matrix("1 2;3"); }) == ErrorKind::ConfigError);
    CHECK(kind_of([] { parse_matrix("1 x;3 4"); }) == ErrorKind::ConfigError);
}

TEST_CASE("config files report the offending line")
{
    RunConfig cfg;
    merge_config_text(cfg, "{\n  \"construction\": \"B\",\n  \"d\": 3,\n  \"q0\": [\"1/3,0\"],\n  \"seed\": 7\n}", "c.json");
    CHECK(cfg.construction == Construction::B);
    CHECK(cfg.d == 3);
    CHECK(cfg.q0 == std::vector<std::string>{"1/3,0"});
    CHECK(cfg.seed == 7);
    CHECK(cfg.samples == 20);

    const std::string bad_tau = "{\n  \"d\": 2,\n  \"tau\": \"0.3-1i\"\n}";
    CHECK(error_text([&] { merge_config_text(cfg, bad_tau, "c.json"); }).find("c.json:3:") != std::string::npos);
    const std::string unknown = "{\n  \"d\": 2,\n\n  \"colour\": 1\n}";
    CHECK(error_text([&] { merge_config_text(cfg, unknown, "c.json"); }).find("c.json:4:") != std::string::npos);
    const std::string wrong_type = "{\n  \"samples\": -3\n}";
    CHECK(error_text([&] { merge_config_text(cfg, wrong_type, "c.json"); }).find("c.json:2:") != std::string::npos);
    const std::string broken = "{\n  \"d\": 2,\n  \"tau\" \"x\"\n}";
    CHECK(error_text([&] { merge_config_text(cfg, broken, "c.json"); }).find("c.json:3:") != std::string::npos);
}

TEST_CASE("build_cover validation")
{
    RunConfig cfg;
    cfg.d = 0;
    CHECK(kind_of([&] { build_cover(cfg); }) == ErrorKind::ConfigError);
    cfg.d = 2;
    cfg.tol.proj = 0;
    CHECK(kind_of([&] { build_cover(cfg); }) == ErrorKind::ConfigError);
    cfg.tol.proj = 1e-7;
    CHECK(build_cover(cfg).group.order() == 32);
}

TEST_CASE("JSON output")
{
    nlohmann::ordered_json j;
    j["x"] = 0.1;
    j["n"] = 3;
    j["v"] = {1.5, 2.0};
    CHECK(dump_json(j) == "{\n  \"x\": 0.10000000000000001,\n  \"n\": 3,\n  \"v\": [1.5, 2]\n}\n");

    RunConfig cfg;
    cfg.samples = 4;
    const auto spec = build_cover(cfg);
    const auto crit = criterion_check(spec, cfg.seed);
    const std::string one = dump_json(verify_json(cfg, galois_verify(spec, cfg.samples, cfg.seed, 1), crit));
    const std::string two = dump_json(verify_json(cfg, galois_verify(spec, cfg.samples, cfg.seed, 3), crit));
    CHECK(one == two);
    const auto parsed = nlohmann::json::parse(one);
    CHECK(parsed.at("group_order") == 32);
    CHECK(parsed.at("samples").size() == 4);
    CHECK(parsed.at("pass") == true);
    for (const char* key : {"index", "point", "generic", "orbit_size", "image_spread", "fiber_match"})
        CHECK(parsed.at("samples")[0].contains(key));

    const auto c = construct_json(cfg, spec);
    CHECK(c.at("theoretical_degree") == 32);
    CHECK(c.at("very_ample_precondition") == true);
}

TEST_CASE("write_atomic")
{
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "galois_embed_report_test";
    fs::create_directories(dir);
    const std::string path = (dir / "out.json").string();
    write_atomic(path, "first\n");
    write_atomic(path, "second\n");
    std::ifstream in(path);
    std::stringstream text;
    text << in.rdbuf();
    CHECK(text.str() == "second\n");
    std::size_t files = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir))
        ++files;
    CHECK(files == 1);
    CHECK(kind_of([&] { write_atomic((dir / "missing" / "x.json").string(), "x"); }) == ErrorKind::ConfigError);
    fs::remove_all(dir);
}
