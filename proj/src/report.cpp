#include "galois_embed/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <unistd.h>

#include "galois_embed/error.hpp"

namespace galois_embed {

namespace {

using nlohmann::ordered_json;

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorKind::ConfigError, what); }

// what() without the leading "Kind: ".
std::string message(const Error& e)
{
    const std::string prefix = std::string(to_string(e.kind())) + ": ";
    const std::string w = e.what();
    return w.rfind(prefix, 0) == 0 ? w.substr(prefix.size()) : w;
}

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

double parse_double(std::string_view s, std::string_view what)
{
    s = trim(s);
    if (!s.empty() && s.front() == '+')
        s.remove_prefix(1);
    double v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
        config_error("cannot read a number from '" + std::string(s) + "' in " + std::string(what));
    return v;
}

std::int64_t parse_int(std::string_view s, std::string_view what)
{
    s = trim(s);
    if (!s.empty() && s.front() == '+')
        s.remove_prefix(1);
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
        config_error("cannot read an integer from '" + std::string(s) + "' in " + std::string(what));
    return v;
}

std::vector<std::string_view> split(std::string_view s, char sep)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t k = 0; k <= s.size(); ++k)
        if (k == s.size() || s[k] == sep) {
            out.push_back(s.substr(start, k - start));
            start = k + 1;
        }
    return out;
}

ordered_json json_integer(const Integer& v)
{
    if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max())
        return v.convert_to<std::int64_t>();
    return v.str();
}

ordered_json matrix_json(const IntMatrix& m)
{
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        ordered_json row = ordered_json::array();
        for (std::size_t j = 0; j < m.cols(); ++j)
            row.push_back(json_integer(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

ordered_json complex_json(Complex z) { return ordered_json::array({z.real(), z.imag()}); }

std::size_t line_of(const std::string& text, std::size_t offset)
{
    offset = std::min(offset, text.size());
    return 1 + std::size_t(std::count(text.begin(), text.begin() + std::ptrdiff_t(offset), '\n'));
}

// Line of the first occurrence of "key" used as an object key.
std::size_t key_line(const std::string& text, const std::string& key)
{
    const auto pos = text.find("\"" + key + "\"");
    return pos == std::string::npos ? 0 : line_of(text, pos);
}

void dump(const ordered_json& j, std::string& out, int depth)
{
    const std::string pad(std::size_t(2 * (depth + 1)), ' ');
    const std::string close(std::size_t(2 * depth), ' ');
    switch (j.type()) {
    case ordered_json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        bool first = true;
        for (const auto& [k, v] : j.items()) {
            if (!first)
                out += ",\n";
            first = false;
            out += pad + ordered_json(k).dump() + ": ";
            dump(v, out, depth + 1);
        }
        out += "\n" + close + "}";
        return;
    }
    case ordered_json::value_t::array: {
        if (j.empty()) {
            out += "[]";
            return;
        }
        // Arrays of scalars stay on one line.
        const bool flat = std::none_of(j.begin(), j.end(), [](const auto& v) { return v.is_structured(); });
        out += flat ? "[" : "[\n";
        bool first = true;
        for (const auto& v : j) {
            if (!first)
                out += flat ? ", " : ",\n";
            first = false;
            if (!flat)
                out += pad;
            dump(v, out, depth + 1);
        }
        out += flat ? "]" : "\n" + close + "]";
        return;
    }
    case ordered_json::value_t::number_float: {
        const double v = j.get<double>();
        if (!std::isfinite(v)) {
            out += "null";
            return;
        }
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out += buf;
        return;
    }
    default:
        out += j.dump();
    }
}

} // namespace

Construction parse_construction(std::string_view s)
{
    s = trim(s);
    if (s == "A" || s == "a")
        return Construction::A;
    if (s == "B" || s == "b")
        return Construction::B;
    config_error("construction must be A or B, got '" + std::string(s) + "'");
}

Complex parse_tau(std::string_view text)
{
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c)))
            s += c;
    if (s.empty() || s.back() != 'i')
        config_error("tau must look like a+bi, got '" + std::string(text) + "'");
    s.pop_back();
    // The split is the last sign that is not the sign of an exponent.
    std::size_t split_at = std::string::npos;
    for (std::size_t k = s.size(); k-- > 1;)
        if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
            split_at = k;
            break;
        }
    double re = 0.0;
    std::string im_text = s;
    if (split_at != std::string::npos) {
        re = parse_double(std::string_view(s).substr(0, split_at), "tau");
        im_text = s.substr(split_at);
    }
    double im = 0.0;
    if (im_text.empty() || im_text == "+")
        im = 1.0;
    else if (im_text == "-")
        im = -1.0;
    else
        im = parse_double(im_text, "tau");
    if (!(im > 0.0))
        config_error("tau must have positive imaginary part, got '" + std::string(text) + "'");
    return {re, im};
}

Rational parse_rational(std::string_view s)
{
    const auto parts = split(trim(s), '/');
    if (parts.size() > 2)
        config_error("bad rational '" + std::string(s) + "'");
    const std::int64_t num = parse_int(parts[0], "a rational");
    const std::int64_t den = parts.size() == 2 ? parse_int(parts[1], "a rational") : 1;
    if (den == 0)
        config_error("zero denominator in '" + std::string(s) + "'");
    return Rational(num, den);
}

TorsionCoords parse_generator(std::string_view s)
{
    const auto parts = split(s, ',');
    if (parts.size() != 2)
        config_error("a Q0 generator is written p/q,r/s, got '" + std::string(s) + "'");
    return {parse_rational(parts[0]), parse_rational(parts[1])};
}

FiniteSubgroupSpec parse_q0(const std::vector<std::string>& generators)
{
    std::vector<TorsionCoords> gens;
    for (const auto& entry : generators)
        for (const auto piece : split(entry, ';')) {
            const auto t = trim(piece);
            if (t.empty() || t == "0")
                continue;
            gens.push_back(parse_generator(t));
        }
    try {
        return FiniteSubgroupSpec::generated_by(std::move(gens));
    }
    catch (const Error& e) {
        config_error("q0: " + message(e));
    }
}

IntMatrix parse_matrix(std::string_view s)
{
    std::vector<std::vector<Integer>> rows;
    for (const auto row : split(s, ';')) {
        std::vector<Integer> r;
        std::istringstream in{std::string(row)};
        std::string tok;
        while (in >> tok)
            r.emplace_back(parse_int(tok, "a matrix"));
        rows.push_back(std::move(r));
    }
    if (rows.empty() || rows.front().empty())
        config_error("empty matrix '" + std::string(s) + "'");
    try {
        return IntMatrix::from_rows(rows);
    }
    catch (const Error& e) {
        config_error("matrix '" + std::string(s) + "': " + message(e));
    }
}

void merge_config_text(RunConfig& cfg, const std::string& text, const std::string& source)
{
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    }
    catch (const nlohmann::json::parse_error& e) {
        config_error(source + ":" + std::to_string(line_of(text, e.byte == 0 ? 0 : e.byte - 1)) + ": malformed JSON");
    }
    if (!j.is_object())
        config_error(source + ":1: the config must be a JSON object");

    for (const auto& [key, value] : j.items()) {
        const std::string where = source + ":" + std::to_string(key_line(text, key)) + ": ";
        const auto count = [&]() -> std::uint64_t {
            if (!value.is_number_unsigned())
                config_error("'" + key + "' must be a non-negative integer");
            return value.get<std::uint64_t>();
        };
        try {
            if (key == "construction")
                cfg.construction = parse_construction(value.get<std::string>());
            else if (key == "d")
                cfg.d = value.get<int>();
            else if (key == "tau") {
                parse_tau(value.get<std::string>());
                cfg.tau = value.get<std::string>();
            }
            else if (key == "q0") {
                std::vector<std::string> gens;
                if (value.is_string())
                    gens.push_back(value.get<std::string>());
                else
                    gens = value.get<std::vector<std::string>>();
                parse_q0(gens);
                cfg.q0 = std::move(gens);
            }
            else if (key == "samples")
                cfg.samples = std::size_t(count());
            else if (key == "seed")
                cfg.seed = count();
            else if (key == "eps_pt")
                cfg.tol.point = value.get<double>();
            else if (key == "eps_proj")
                cfg.tol.proj = value.get<double>();
            else if (key == "eps_num")
                cfg.tol.num = value.get<double>();
            else if (key == "order_cap")
                cfg.order_cap = std::size_t(count());
            else if (key == "jobs")
                cfg.jobs = unsigned(count());
            else if (key == "output")
                cfg.output = value.get<std::string>();
            else
                config_error("unknown key '" + key + "'");
        }
        catch (const nlohmann::json::exception&) {
            config_error(where + "wrong type for '" + key + "'");
        }
        catch (const Error& e) {
            config_error(where + message(e));
        }
    }
}

void merge_config_file(RunConfig& cfg, const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        config_error("cannot open config file " + path);
    std::ostringstream text;
    text << in.rdbuf();
    merge_config_text(cfg, text.str(), path);
}

CoverSpec build_cover(const RunConfig& cfg)
{
    if (cfg.d < 1)
        config_error("d must be at least 1");
    if (cfg.samples == 0)
        config_error("samples must be positive");
    for (double t : {cfg.tol.point, cfg.tol.proj, cfg.tol.num})
        if (!(t > 0.0 && t < 1.0))
            config_error("tolerances must lie in (0, 1)");
    const Complex tau = parse_tau(cfg.tau);
    const FiniteSubgroupSpec q0 = parse_q0(cfg.q0);
    return make_cover(cfg.construction, cfg.d, LatticeTau::from_tau(tau), q0, cfg.tol, cfg.order_cap);
}

ordered_json config_json(const RunConfig& cfg)
{
    ordered_json j;
    j["construction"] = std::string(1, to_char(cfg.construction));
    j["d"] = cfg.d;
    j["tau"] = cfg.tau;
    j["q0"] = cfg.q0;
    j["samples"] = cfg.samples;
    j["seed"] = cfg.seed;
    j["eps_pt"] = cfg.tol.point;
    j["eps_proj"] = cfg.tol.proj;
    j["eps_num"] = cfg.tol.num;
    j["order_cap"] = cfg.order_cap;
    return j;
}

ordered_json construct_json(const RunConfig& cfg, const CoverSpec& spec)
{
    ordered_json j;
    j["config"] = config_json(cfg);
    j["construction"] = std::string(1, to_char(spec.construction));
    j["d"] = spec.d;
    j["tau"] = complex_json(spec.curve.tau());
    j["q0_order"] = spec.q0.order();
    j["quotient_tau"] = complex_json(spec.quotient.target.tau());
    j["group_order"] = spec.group.order();
    j["polarization"] = matrix_json(spec.polarization.matrix());
    j["chi"] = json_integer(chi(spec.polarization));
    j["isogeny_factor"] = json_integer(spec.isogeny_factor);
    j["theoretical_degree"] = json_integer(spec.theoretical_degree);
    j["degree_matches_order"] = spec.theoretical_degree == Integer(spec.group.order());
    j["very_ample_precondition"] = spec.very_ample_precondition();
    return j;
}

bool verify_pass(const VerificationReport& report, const CriterionRecord& criterion)
{
    return report.pass && criterion.all();
}

ordered_json verify_json(const RunConfig& cfg, const VerificationReport& report, const CriterionRecord& criterion)
{
    ordered_json j;
    j["config"] = config_json(cfg);
    j["construction"] = std::string(1, to_char(report.construction));
    j["group_order"] = report.group_order;
    ordered_json samples = ordered_json::array();
    for (const auto& r : report.samples) {
        ordered_json s;
        s["index"] = r.index;
        ordered_json point = ordered_json::array();
        for (const auto& x : r.point)
            point.push_back(ordered_json::array({x.a, x.b}));
        s["point"] = std::move(point);
        s["generic"] = r.generic;
        s["orbit_size"] = r.orbit_size;
        s["image_spread"] = r.image_spread;
        s["fiber_match"] = r.fiber_match;
        samples.push_back(std::move(s));
    }
    j["samples"] = std::move(samples);
    j["criterion"] = {
        {"order_ok", criterion.order_ok},
        {"invariance_ok", criterion.invariance_ok},
        {"basepoint_ok", criterion.basepoint_ok},
        {"very_ample_precondition", criterion.very_ample_precondition},
    };
    j["pass"] = verify_pass(report, criterion);
    return j;
}

std::string dump_json(const ordered_json& j)
{
    std::string out;
    dump(j, out, 0);
    out += "\n";
    return out;
}

void write_atomic(const std::string& path, const std::string& content)
{
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            config_error("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            config_error("write failed for " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        config_error("cannot rename onto " + path);
    }
}

} // namespace galois_embed
