// galois-embed: construct | verify | intersection | report
//
// Exit codes: 0 success, 1 verification failed, 2 bad input.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "galois_embed/error.hpp"
#include "galois_embed/report.hpp"

using namespace galois_embed;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitInput = 2;

// Raw flag values; only the ones given on the command line override the config.
struct RunFlags {
    std::string config;
    std::string construction;
    int d = 0;
    std::string tau;
    std::vector<std::string> q0;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    double eps_pt = 0, eps_proj = 0, eps_num = 0;
    std::size_t order_cap = 0;
    unsigned jobs = 1;
    std::string output;

    CLI::Option* o_construction = nullptr;
    CLI::Option* o_d = nullptr;
    CLI::Option* o_tau = nullptr;
    CLI::Option* o_q0 = nullptr;
    CLI::Option* o_samples = nullptr;
    CLI::Option* o_seed = nullptr;
    CLI::Option* o_eps_pt = nullptr;
    CLI::Option* o_eps_proj = nullptr;
    CLI::Option* o_eps_num = nullptr;
    CLI::Option* o_order_cap = nullptr;
    CLI::Option* o_jobs = nullptr;
    CLI::Option* o_output = nullptr;
};

void add_run_flags(CLI::App* cmd, RunFlags& f)
{
    cmd->add_option("--config", f.config, "JSON config file; flags given here take precedence");
    f.o_construction = cmd->add_option("--construction", f.construction, "A or B (default A)");
    f.o_d = cmd->add_option("--d", f.d, "dimension of E^d (default 2)");
    f.o_tau = cmd->add_option("--tau", f.tau, "period ratio a+bi (default 0.3+1.1i)");
    f.o_q0 = cmd->add_option("--q0", f.q0, "generator p/q,r/s of Q0; repeat for two (default 1/2,0)");
    f.o_samples = cmd->add_option("--samples", f.samples, "verification samples (default 20)");
    f.o_seed = cmd->add_option("--seed", f.seed, "seed (default 42, or GALOIS_EMBED_SEED)");
    f.o_eps_pt = cmd->add_option("--eps-pt", f.eps_pt, "point tolerance (default 1e-9)");
    f.o_eps_proj = cmd->add_option("--eps-proj", f.eps_proj, "projective tolerance (default 1e-7)");
    f.o_eps_num = cmd->add_option("--eps-num", f.eps_num, "function-evaluation tolerance (default 1e-10)");
    f.o_order_cap = cmd->add_option("--order-cap", f.order_cap, "largest group enumerated (default 100000)");
    f.o_jobs = cmd->add_option("--jobs", f.jobs, "worker threads for verification (default 1)");
    f.o_output = cmd->add_option("--output", f.output, "write the JSON report here");
}

RunConfig resolve(const RunFlags& f)
{
    RunConfig cfg;
    if (!f.config.empty())
        merge_config_file(cfg, f.config);
    if (const char* env = std::getenv("GALOIS_EMBED_SEED")) {
        try {
            std::size_t used = 0;
            cfg.seed = std::stoull(env, &used);
            if (used != std::string(env).size())
                throw std::invalid_argument(env);
        }
        catch (const std::exception&) {
            throw Error(ErrorKind::ConfigError, std::string("GALOIS_EMBED_SEED is not an integer: ") + env);
        }
    }
    if (f.o_construction->count())
        cfg.construction = parse_construction(f.construction);
    if (f.o_d->count())
        cfg.d = f.d;
    if (f.o_tau->count())
        cfg.tau = f.tau;
    if (f.o_q0->count())
        cfg.q0 = f.q0;
    if (f.o_samples->count())
        cfg.samples = f.samples;
    if (f.o_seed->count())
        cfg.seed = f.seed;
    if (f.o_eps_pt->count())
        cfg.tol.point = f.eps_pt;
    if (f.o_eps_proj->count())
        cfg.tol.proj = f.eps_proj;
    if (f.o_eps_num->count())
        cfg.tol.num = f.eps_num;
    if (f.o_order_cap->count())
        cfg.order_cap = f.order_cap;
    if (f.o_jobs->count())
        cfg.jobs = f.jobs;
    if (f.o_output->count())
        cfg.output = f.output;
    return cfg;
}

void emit(const RunConfig& cfg, const std::string& json)
{
    if (cfg.output.empty())
        std::cout << json;
    else
        write_atomic(cfg.output, json);
}

int cmd_construct(const RunFlags& f)
{
    const RunConfig cfg = resolve(f);
    const CoverSpec spec = build_cover(cfg);
    std::cout << "construction " << to_char(spec.construction) << ", d = " << spec.d << ", |Q0| = " << spec.q0.order()
              << "\n"
              << "group order          " << spec.group.order() << "\n"
              << "polarization         " << spec.polarization.matrix().to_string() << "\n"
              << "chi                  " << chi(spec.polarization) << "\n"
              << "isogeny factor       " << spec.isogeny_factor << "\n"
              << "theoretical degree   " << spec.theoretical_degree << "\n"
              << "very ample (precond) " << (spec.very_ample_precondition() ? "yes" : "no") << "\n";
    if (!cfg.output.empty())
        write_atomic(cfg.output, dump_json(construct_json(cfg, spec)));
    return 0;
}

int cmd_verify(const RunFlags& f)
{
    const RunConfig cfg = resolve(f);
    const CoverSpec spec = build_cover(cfg);
    const VerificationReport report = galois_verify(spec, cfg.samples, cfg.seed, cfg.jobs);
    const CriterionRecord criterion = criterion_check(spec, cfg.seed);
    emit(cfg, dump_json(verify_json(cfg, report, criterion)));
    const bool pass = verify_pass(report, criterion);
    std::cerr << "verify " << to_char(spec.construction) << " d=" << spec.d << " |G|=" << spec.group.order() << ": "
              << report.generic_samples << "/" << report.samples.size() << " generic samples, "
              << (pass ? "PASS" : "FAIL") << " (" << report.seconds << " s)\n";
    for (const auto& r : report.samples)
        if (!r.note.empty())
            std::cerr << "  sample " << r.index << ": " << r.note << "\n";
    return pass ? 0 : kExitFail;
}

int cmd_intersection(const std::string& self, const std::string& chi_of, const std::vector<std::string>& mixed)
{
    const int modes = int(!self.empty()) + int(!chi_of.empty()) + int(!mixed.empty());
    if (modes != 1)
        throw Error(ErrorKind::ConfigError, "give exactly one of --self, --chi, --mixed");
    if (!self.empty()) {
        std::cout << self_intersection(PolarizationMatrix(parse_matrix(self))) << "\n";
        return 0;
    }
    if (!chi_of.empty()) {
        std::cout << chi(PolarizationMatrix(parse_matrix(chi_of))) << "\n";
        return 0;
    }
    std::vector<std::pair<PolarizationMatrix, int>> terms;
    for (const auto& m : mixed) {
        const auto colon = m.rfind(':');
        if (colon == std::string::npos)
            throw Error(ErrorKind::ConfigError, "a mixed term is written \"MATRIX\":EXPONENT, got '" + m + "'");
        int exponent = 0;
        try {
            std::size_t used = 0;
            exponent = std::stoi(m.substr(colon + 1), &used);
            if (used != m.size() - colon - 1)
                throw std::invalid_argument(m);
        }
        catch (const std::exception&) {
            throw Error(ErrorKind::ConfigError, "bad exponent in '" + m + "'");
        }
        terms.emplace_back(PolarizationMatrix(parse_matrix(m.substr(0, colon))), exponent);
    }
    std::cout << mixed_intersection(terms) << "\n";
    return 0;
}

int cmd_report(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorKind::ConfigError, "cannot open " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
        std::size_t generic = 0, fibers = 0;
        double spread = 0;
        for (const auto& s : j.at("samples")) {
            if (s.at("generic").get<bool>())
                ++generic;
            if (s.at("fiber_match").get<bool>())
                ++fibers;
            if (s.at("image_spread").is_number())
                spread = std::max(spread, s.at("image_spread").get<double>());
        }
        const auto& c = j.at("criterion");
        const auto yes = [](bool b) { return b ? "yes" : "no"; };
        std::cout << "construction " << j.at("construction").get<std::string>() << ", group order "
                  << j.at("group_order").get<std::size_t>() << "\n"
                  << "samples              " << j.at("samples").size() << " (" << generic << " generic)\n"
                  << "fiber matches        " << fibers << "\n"
                  << "max image spread     " << spread << "\n"
                  << "order check          " << yes(c.at("order_ok").get<bool>()) << "\n"
                  << "invariance check     " << yes(c.at("invariance_ok").get<bool>()) << "\n"
                  << "base-point probe     " << yes(c.at("basepoint_ok").get<bool>()) << "\n";
        if (c.contains("very_ample_precondition"))
            std::cout << "very ample (precond) " << yes(c.at("very_ample_precondition").get<bool>()) << "\n";
        const bool pass = j.at("pass").get<bool>();
        std::cout << "result               " << (pass ? "PASS" : "FAIL") << "\n";
        return pass ? 0 : kExitFail;
    }
    catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::ConfigError, path + " is not a verify report: " + e.what());
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Galois covers of E^d over P^d: construction, numerical verification, intersection numbers"};
    app.require_subcommand(1);

    RunFlags construct_flags, verify_flags;
    auto* construct = app.add_subcommand("construct", "build a cover and print its group and degree data");
    add_run_flags(construct, construct_flags);
    auto* verify = app.add_subcommand("verify", "run the Galois verification and write a JSON report");
    add_run_flags(verify, verify_flags);

    std::string self, chi_of;
    std::vector<std::string> mixed;
    auto* intersection = app.add_subcommand("intersection", "intersection numbers of symmetric integer matrices");
    intersection->add_option("--self", self, "d! det M, matrix as \"a b;c d\"");
    intersection->add_option("--chi", chi_of, "det M");
    intersection->add_option("--mixed", mixed, "terms \"M\":k with exponents summing to d");

    std::string report_path;
    auto* report = app.add_subcommand("report", "summarise a verify JSON report");
    report->add_option("path", report_path, "report file")->required();

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    }
    catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        if (construct->parsed())
            return cmd_construct(construct_flags);
        if (verify->parsed())
            return cmd_verify(verify_flags);
        if (intersection->parsed())
            return cmd_intersection(self, chi_of, mixed);
        return cmd_report(report_path);
    }
    catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
}
