#include "galois_embed/covers.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <numeric>
#include <thread>

#include "galois_embed/error.hpp"

namespace galois_embed {

namespace {

// Chordal distance below which two roots, or a root and a branch value, count as equal.
constexpr double kGenericTol = 1e-6;
// Matching tolerance for points recovered through section_zeros.
constexpr double kCensusTol = 1e-7;
constexpr std::size_t kInvariancePoints = 10;

double uniform(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }

Integer factorial(int n)
{
    Integer f = 1;
    for (int k = 2; k <= n; ++k)
        f *= k;
    return f;
}

// Every tuple (c_0[i_0], ..., c_{m-1}[i_{m-1}]).
template <class F>
void for_each_product(const std::vector<std::vector<TorusPoint>>& choices, F&& f)
{
    std::vector<std::size_t> idx(choices.size(), 0);
    EdPoint tuple(choices.size());
    for (;;) {
        for (std::size_t i = 0; i < choices.size(); ++i)
            tuple[i] = choices[i][idx[i]];
        f(tuple);
        std::size_t k = 0;
        while (k < idx.size() && ++idx[k] == choices[k].size())
            idx[k++] = 0;
        if (k == idx.size())
            return;
    }
}

std::vector<TorusPoint> image_divisor(const CoverSpec& spec, const EdPoint& p)
{
    std::vector<TorusPoint> ys;
    TorusPoint sum{};
    for (const auto& x : p) {
        ys.push_back(spec.quotient.image(x));
        sum = add(sum, ys.back(), spec.quotient.target);
    }
    ys.push_back(negate(sum, spec.quotient.target));
    return ys;
}

bool same_ed_sets(std::span<const EdPoint> a, std::span<const EdPoint> b, double eps)
{
    return multiset_equal<EdPoint>(a, b, ed_distance, eps);
}

// Section zeros of f(p) against the image divisor, then every permutation
// of the zeros times every choice of Q0-lift must land in the orbit and
// together exhaust it.
bool census_B(const CoverSpec& spec, const EdPoint& p, const ProjectivePoint& image, const std::vector<EdPoint>& orb,
              std::string& note)
{
    const auto ys = image_divisor(spec, p);
    const auto zeros = section_zeros(image.coords(), *spec.basis, spec.tol.num);
    const auto dist = [](const TorusPoint& x, const TorusPoint& y) { return torus_distance(x, y); };
    if (!multiset_equal<TorusPoint>(zeros, ys, dist, kCensusTol)) {
        note = "section_zeros does not reproduce the image divisor";
        return false;
    }

    std::vector<std::size_t> perm(zeros.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<bool> hit(orb.size(), false);
    std::size_t tuples = 0;
    bool all_found = true;
    do {
        std::vector<std::vector<TorusPoint>> choices;
        for (int i = 0; i < spec.d; ++i)
            choices.push_back(spec.quotient.lifts(zeros[perm[std::size_t(i)]]));
        for_each_product(choices, [&](const EdPoint& t) {
            ++tuples;
            bool found = false;
            for (std::size_t k = 0; k < orb.size(); ++k)
                if (ed_distance(t, orb[k]) < kCensusTol) {
                    hit[k] = true;
                    found = true;
                }
            all_found = all_found && found;
        });
    } while (std::next_permutation(perm.begin(), perm.end()));

    const bool exhausted = std::all_of(hit.begin(), hit.end(), [](bool h) { return h; });
    if (!all_found || !exhausted || tuples != spec.group.order()) {
        note = "preimage census does not match the orbit";
        return false;
    }
    return true;
}

std::vector<ProjectivePoint> branch_values(const CoverSpec& spec)
{
    const auto& lat = spec.quotient.target;
    std::vector<ProjectivePoint> out{ProjectivePoint::p1(1, 0)};
    for (const auto& [a, b] : {std::pair{0.5, 0.0}, std::pair{0.0, 0.5}, std::pair{0.5, 0.5}}) {
        const Homogeneous h = wp(reduce_coords(a, b, lat), lat);
        out.push_back(ProjectivePoint::p1(h.num, h.den));
    }
    return out;
}

bool valid_projective(const ProjectivePoint& q)
{
    double m = 0.0;
    for (const auto& c : q.coords()) {
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
            return false;
        m = std::max(m, std::abs(c));
    }
    return std::abs(m - 1.0) < 1e-12;
}

} // namespace

char to_char(Construction c) noexcept { return c == Construction::A ? 'A' : 'B'; }

CoverSpec make_cover(Construction construction, int d, const LatticeTau& curve, const FiniteSubgroupSpec& q0,
                     const Tolerances& tol, std::size_t order_cap)
{
    if (d < 1)
        throw Error(ErrorKind::InvalidOrder, "dimension d must be at least 1");
    const auto n = std::size_t(d);
    const bool is_a = construction == Construction::A;
    auto group = is_a ? build_group_A(d, q0, order_cap) : build_group_B(d, q0, order_cap);
    auto pol = is_a ? PolarizationMatrix(Integer(2 * q0.order()) * IntMatrix::identity(n))
                    : PolarizationMatrix(IntMatrix::identity(n) + IntMatrix::all_ones(n));
    const Integer factor = is_a ? Integer(1) : isogeny_degree_factor(q0, d);
    const Integer degree = factorial(d) * chi(pol) * factor;
    auto quotient = quotient_lattice(curve, q0);
    std::optional<SectionBasis> basis;
    if (!is_a)
        basis.emplace(d + 1, quotient.target);
    return CoverSpec{construction, d, curve, q0, std::move(quotient), std::move(group), std::move(pol),
                     factor, degree, std::move(basis), tol};
}

ProjectivePoint map_A(const CoverSpec& spec, const EdPoint& p)
{
    if (p.size() != std::size_t(spec.d))
        throw Error(ErrorKind::InvalidPoint, "point dimension does not match the cover");
    std::vector<ProjectivePoint> xs;
    for (const auto& x : p) {
        const Homogeneous h = wp(spec.quotient.image(x), spec.quotient.target);
        xs.push_back(ProjectivePoint::p1(h.num, h.den));
    }
    return sym_product(xs);
}

ProjectivePoint map_B(const CoverSpec& spec, const EdPoint& p)
{
    if (p.size() != std::size_t(spec.d))
        throw Error(ErrorKind::InvalidPoint, "point dimension does not match the cover");
    return divisor_to_coords(image_divisor(spec, p), *spec.basis, spec.tol.point).point;
}

ProjectivePoint cover_map(const CoverSpec& spec, const EdPoint& p)
{
    return spec.construction == Construction::A ? map_A(spec, p) : map_B(spec, p);
}

std::vector<EdPoint> fiber_A(const CoverSpec& spec, const ProjectivePoint& q)
{
    if (q.dim() != std::size_t(spec.d))
        throw Error(ErrorKind::InvalidPoint, "target dimension does not match the cover");
    const auto roots = sym_fiber(q);
    const auto branch = branch_values(spec);
    for (std::size_t i = 0; i < roots.size(); ++i) {
        for (const auto& e : branch)
            if (chordal_distance(roots[i], e) < kGenericTol)
                throw Error(ErrorKind::NonGenericTarget, "a root of the target is a branch value of wp");
        for (std::size_t j = i + 1; j < roots.size(); ++j)
            if (chordal_distance(roots[i], roots[j]) < kGenericTol)
                throw Error(ErrorKind::NonGenericTarget, "two roots of the target coincide");
    }

    std::vector<std::vector<TorusPoint>> lifts;
    for (const auto& r : roots) {
        std::vector<TorusPoint> pts;
        for (const auto& w : wp_inverse(r[0] / r[1], spec.quotient.target, spec.tol.num))
            for (const auto& x : spec.quotient.lifts(w))
                pts.push_back(x);
        lifts.push_back(std::move(pts));
    }

    std::vector<EdPoint> fiber;
    std::vector<std::size_t> perm(roots.size());
    std::iota(perm.begin(), perm.end(), 0);
    do {
        std::vector<std::vector<TorusPoint>> choices;
        for (std::size_t i : perm)
            choices.push_back(lifts[i]);
        for_each_product(choices, [&](const EdPoint& t) { fiber.push_back(t); });
    } while (std::next_permutation(perm.begin(), perm.end()));
    return fiber;
}

EdPoint random_point(std::mt19937_64& rng, const CoverSpec& spec)
{
    EdPoint p;
    for (int i = 0; i < spec.d; ++i) {
        const double a = uniform(rng);
        const double b = uniform(rng);
        p.push_back(reduce_coords(a, b, spec.curve));
    }
    return p;
}

SampleRecord verify_sample(const CoverSpec& spec, std::size_t index, const EdPoint& p)
{
    SampleRecord rec;
    rec.index = index;
    rec.point = p;
    const FreeCheck fc = is_free_at(spec.group, p, spec.curve, spec.tol.point);
    rec.generic = fc.free;
    rec.stabilizer_size = fc.stabilizer.size();
    const auto orb = orbit(spec.group, p, spec.curve, spec.tol.point);
    rec.orbit_size = orb.size();
    try {
        const ProjectivePoint image = cover_map(spec, p);
        for (const auto& q : orb)
            rec.image_spread = std::max(rec.image_spread, chordal_distance(cover_map(spec, q), image));
        if (spec.construction == Construction::A) {
            const auto fiber = fiber_A(spec, image);
            rec.fiber_match = same_ed_sets(fiber, orb, spec.tol.point);
            if (!rec.fiber_match)
                rec.note = "fiber and orbit differ";
        }
        else {
            rec.fiber_match = census_B(spec, p, image, orb, rec.note);
        }
    }
    catch (const Error& e) {
        rec.note = e.what();
    }
    rec.pass = rec.generic && rec.orbit_size == spec.group.order() && rec.image_spread < spec.tol.proj && rec.fiber_match;
    return rec;
}

VerificationReport galois_verify(const CoverSpec& spec, std::size_t samples, std::uint64_t seed, unsigned jobs)
{
    const auto start = std::chrono::steady_clock::now();
    VerificationReport report;
    report.construction = spec.construction;
    report.d = spec.d;
    report.seed = seed;
    report.tol = spec.tol;
    report.group_order = spec.group.order();

    std::mt19937_64 rng(seed);
    std::vector<EdPoint> points;
    for (std::size_t i = 0; i < samples; ++i)
        points.push_back(random_point(rng, spec));

    report.samples.resize(samples);
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i = next++; i < samples; i = next++)
            report.samples[i] = verify_sample(spec, i, points[i]);
    };
    const unsigned threads = std::max(1u, std::min<unsigned>(jobs, unsigned(samples)));
    if (threads == 1) {
        worker();
    }
    else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back(worker);
    }

    report.pass = true;
    for (const auto& r : report.samples) {
        if (!r.generic)
            continue;
        ++report.generic_samples;
        report.pass = report.pass && r.pass;
    }
    report.pass = report.pass && report.generic_samples > 0;
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

CriterionRecord criterion_check(const CoverSpec& spec, std::uint64_t seed)
{
    CriterionRecord rec;
    rec.very_ample_precondition = spec.very_ample_precondition();
    const Integer order(spec.group.order());
    const Integer factor = spec.construction == Construction::A ? Integer(1) : isogeny_degree_factor(spec.q0, spec.d);
    rec.order_ok = order == spec.theoretical_degree && order == factorial(spec.d) * chi(spec.polarization) * factor;

    std::mt19937_64 rng(seed);
    rec.invariance_ok = true;
    for (std::size_t k = 0; k < kInvariancePoints && rec.invariance_ok; ++k) {
        const EdPoint p = random_point(rng, spec);
        try {
            const auto f = cover_map(spec, p);
            for (const auto& g : spec.group.generators())
                if (!(chordal_distance(cover_map(spec, g.apply(p, spec.curve)), f) < spec.tol.proj))
                    rec.invariance_ok = false;
        }
        catch (const Error&) {
            rec.invariance_ok = false;
        }
    }

    // Every (4|Q0|)-torsion point in each coordinate against a generic
    // background, each torsion point on the diagonal, and Q0 (poles of wp on
    // E/Q0) in every nonempty subset of coordinates.
    const auto n = std::size_t(spec.d);
    const EdPoint base = random_point(rng, spec);
    std::vector<EdPoint> configs;
    for (const auto& t : torsion_points(spec.curve, int(4 * spec.q0.order()))) {
        for (std::size_t i = 0; i < n; ++i) {
            EdPoint c = base;
            c[i] = t;
            configs.push_back(std::move(c));
        }
        if (n > 1)
            configs.push_back(EdPoint(n, t));
    }
    const auto& q0 = spec.q0.elements();
    for (std::size_t mask = 1; mask < (std::size_t(1) << n); ++mask) {
        EdPoint c = base;
        for (std::size_t i = 0; i < n; ++i)
            if (mask >> i & 1) {
                const auto& e = q0[i % q0.size()];
                c[i] = reduce_coords(boost::rational_cast<double>(e.a), boost::rational_cast<double>(e.b), spec.curve);
            }
        configs.push_back(std::move(c));
    }

    rec.basepoint_ok = true;
    for (const auto& c : configs) {
        try {
            if (!valid_projective(cover_map(spec, c)))
                rec.basepoint_ok = false;
            ++rec.basepoint_configurations;
        }
        catch (const Error& e) {
            if (e.kind() == ErrorKind::HighMultiplicity)
                ++rec.basepoint_excluded;
            else
                rec.basepoint_ok = false;
        }
    }
    return rec;
}

} // namespace galois_embed
