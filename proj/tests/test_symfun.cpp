#include "doctest.h"

#include <algorithm>
#include <random>

#include "galois_embed/error.hpp"
#include "galois_embed/symfun.hpp"

using namespace galois_embed;

namespace {

const Complex kTau{0.3, 1.1};

double uniform(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }

ProjectivePoint random_p1(std::mt19937_64& rng)
{
    return ProjectivePoint::p1(Complex(4 * uniform(rng) - 2, 4 * uniform(rng) - 2), Complex(1, 0));
}

bool same_torus_multiset(std::span<const TorusPoint> a, std::span<const TorusPoint> b, double eps)
{
    return multiset_equal<TorusPoint>(a, b, [](const TorusPoint& x, const TorusPoint& y) { return torus_distance(x, y); }, eps);
}

bool same_p1_multiset(std::span<const ProjectivePoint> a, std::span<const ProjectivePoint> b, double eps)
{
    return multiset_equal<ProjectivePoint>(a, b, [](const auto& x, const auto& y) { return chordal_distance(x, y); }, eps);
}

// Random divisor y_1 + ... + y_n with y_n = -(y_1 + ... + y_{n-1}).
std::vector<TorusPoint> random_divisor(std::mt19937_64& rng, const LatticeTau& lat, int n)
{
    std::vector<TorusPoint> pts;
    TorusPoint sum{};
    for (int i = 0; i + 1 < n; ++i) {
        pts.push_back(reduce_coords(uniform(rng), uniform(rng), lat));
        sum = add(sum, pts.back(), lat);
    }
    pts.push_back(negate(sum, lat));
    return pts;
}

} // namespace

TEST_CASE("ProjectivePoint normalisation and chordal distance")
{
    const ProjectivePoint p({Complex(2, 0), Complex(0, 4)});
    CHECK(p[1] == Complex(1, 0));
    CHECK(chordal_distance(p, ProjectivePoint({Complex(0, 1), Complex(-2, 0)})) < 1e-15);
    CHECK(chordal_distance(ProjectivePoint::p1(1, 0), ProjectivePoint::p1(0, 1)) == doctest::Approx(1.0));
    CHECK_THROWS_AS(ProjectivePoint({Complex(0, 0), Complex(0, 0)}), Error);
}

TEST_CASE("sym_product examples")
{
    const std::vector<ProjectivePoint> zeros{ProjectivePoint::p1(0, 1), ProjectivePoint::p1(0, 1)};
    const ProjectivePoint x2 = sym_product(zeros);
    CHECK(chordal_distance(x2, ProjectivePoint({0, 0, 1})) < 1e-15);

    const std::vector<ProjectivePoint> pm{ProjectivePoint::p1(1, 1), ProjectivePoint::p1(-1, 1)};
    CHECK(chordal_distance(sym_product(pm), ProjectivePoint({-1, 0, 1})) < 1e-15);

    std::mt19937_64 rng(3);
    std::vector<ProjectivePoint> three{random_p1(rng), random_p1(rng), ProjectivePoint::p1(1, 0)};
    const ProjectivePoint ref = sym_product(three);
    std::vector<int> perm{0, 1, 2};
    while (std::next_permutation(perm.begin(), perm.end())) {
        const std::vector<ProjectivePoint> shuffled{three[perm[0]], three[perm[1]], three[perm[2]]};
        const ProjectivePoint other = sym_product(shuffled);
        for (std::size_t k = 0; k < 4; ++k)
            CHECK(other[k] == ref[k]);
    }
}

TEST_CASE("sym_fiber inverts sym_product")
{
    const auto double_zero = sym_fiber(ProjectivePoint({0, 0, 1}));
    REQUIRE(double_zero.size() == 2);
    for (const auto& r : double_zero)
        CHECK(chordal_distance(r, ProjectivePoint::p1(0, 1)) < 1e-12);

    const auto with_inf = sym_fiber(ProjectivePoint({0, 1, 0}));
    REQUIRE(with_inf.size() == 2);
    CHECK(std::any_of(with_inf.begin(), with_inf.end(), [](const auto& r) { return chordal_distance(r, ProjectivePoint::p1(1, 0)) < 1e-12; }));
    const auto all_inf = sym_fiber(ProjectivePoint({1, 0, 0, 0}));
    CHECK(all_inf.size() == 3);

    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t d = 1 + trial % 4;
        std::vector<ProjectivePoint> pts;
        for (std::size_t i = 0; i < d; ++i)
            pts.push_back(trial % 7 == 0 && i == 0 ? ProjectivePoint::p1(1, 0) : random_p1(rng));
        const auto back = sym_fiber(sym_product(pts));
        CHECK(same_p1_multiset(back, pts, 1e-7));
    }
}

TEST_CASE("SectionBasis layout")
{
    const LatticeTau lat = LatticeTau::from_tau(kTau);
    const SectionBasis b4(4, lat);
    REQUIRE(b4.elements().size() == 4);
    std::vector<int> orders;
    for (const auto& e : b4.elements())
        orders.push_back(e.pole_order);
    CHECK(orders == std::vector<int>{0, 2, 3, 4});
    CHECK(b4.describe(0) == "1");
    CHECK(b4.describe(1) == "wp");
    CHECK(b4.describe(2) == "wp'");
    CHECK(b4.describe(3) == "wp^2");
    CHECK(SectionBasis(5, lat).describe(4) == "wp*wp'");
    CHECK_THROWS_AS(SectionBasis(1, lat), Error);
}

TEST_CASE("divisor_to_coords examples")
{
    const LatticeTau lat = LatticeTau::from_tau(kTau);
    std::mt19937_64 rng(7);

    // d = 1: {y, -y} gives wp(w) - wp(y).
    const SectionBasis b2(2, lat);
    const TorusPoint y = reduce_coords(0.31, 0.17, lat);
    const std::vector<TorusPoint> pair{y, negate(y, lat)};
    const auto sc = divisor_to_coords(pair, b2);
    CHECK(chordal_distance(sc.point, ProjectivePoint({-wp(y, lat).value(), 1})) < 1e-12);

    // d = 2 generic: residual self-check.
    const SectionBasis b3(3, lat);
    for (int trial = 0; trial < 20; ++trial) {
        const auto div = random_divisor(rng, lat, 3);
        const auto coords = divisor_to_coords(div, b3);
        for (const auto& p : div) {
            const auto [s, mag] = b3.section_value(coords.point.coords(), p.z);
            CHECK(std::abs(s) < 1e-8 * std::max(1.0, mag));
        }
    }

    // Origin once: the wp' coefficient is suppressed.
    const std::vector<TorusPoint> with_zero{y, negate(y, lat), TorusPoint{}};
    const auto z = divisor_to_coords(with_zero, b3);
    CHECK(std::abs(z.point[2]) < 1e-12);
    CHECK(chordal_distance(z.point, ProjectivePoint({-wp(y, lat).value(), 1, 0})) < 1e-12);

    // Doubled point uses the derivative row.
    const TorusPoint t = reduce_coords(0.23, 0.41, lat);
    const std::vector<TorusPoint> doubled{t, t, negate(add(t, t, lat), lat)};
    const auto dc = divisor_to_coords(doubled, b3);
    const auto db = b3.derivative(t.z);
    Complex ds{0, 0};
    double mag = 0;
    for (std::size_t k = 0; k < 3; ++k) {
        ds += dc.point[k] * db[k];
        mag += std::abs(dc.point[k] * db[k]);
    }
    CHECK(std::abs(ds) < 1e-8 * mag);

    // Origin twice with n = 2: the constant section.
    const std::vector<TorusPoint> origin2{TorusPoint{}, TorusPoint{}};
    CHECK(chordal_distance(divisor_to_coords(origin2, b2).point, ProjectivePoint({1, 0})) < 1e-15);
}

TEST_CASE("divisor_to_coords errors")
{
    const LatticeTau lat = LatticeTau::from_tau(kTau);
    const SectionBasis b3(3, lat);
    const TorusPoint y = reduce_coords(0.31, 0.17, lat);
    const std::vector<TorusPoint> bad_sum{y, y, y};
    try {
        divisor_to_coords(bad_sum, b3);
        FAIL("expected SumNotZero");
    }
    catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::SumNotZero);
    }
    const TorusPoint third = reduce_coords(1.0 / 3, 0, lat);
    const std::vector<TorusPoint> triple{third, third, third};
    try {
        divisor_to_coords(triple, b3);
        FAIL("expected HighMultiplicity");
    }
    catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::HighMultiplicity);
    }
    const std::vector<TorusPoint> origin3{TorusPoint{}, TorusPoint{}, TorusPoint{}};
    CHECK_THROWS_AS(divisor_to_coords(origin3, b3), Error);
}

TEST_CASE("divisor_to_coords is permutation invariant")
{
    const LatticeTau lat = LatticeTau::from_tau(kTau);
    std::mt19937_64 rng(9);
    for (int n = 2; n <= 4; ++n) {
        const SectionBasis basis(n, lat);
        for (int trial = 0; trial < 10; ++trial) {
            auto div = random_divisor(rng, lat, n);
            const auto ref = divisor_to_coords(div, basis).point;
            std::shuffle(div.begin(), div.end(), rng);
            CHECK(chordal_distance(divisor_to_coords(div, basis).point, ref) < 1e-7);
        }
    }
}

TEST_CASE("section_zeros")
{
    const LatticeTau lat = LatticeTau::from_tau(kTau);
    const SectionBasis b2(2, lat);
    const TorusPoint y = reduce_coords(0.31, 0.17, lat);
    const std::vector<Complex> c{-wp(y, lat).value(), 1};
    const auto zs = section_zeros(c, b2);
    const std::vector<TorusPoint> expected{y, negate(y, lat)};
    CHECK(same_torus_multiset(zs, expected, 1e-9));

    std::mt19937_64 rng(11);
    for (int n = 2; n <= 4; ++n) {
        const SectionBasis basis(n, lat);
        for (int trial = 0; trial < 20; ++trial) {
            const auto div = random_divisor(rng, lat, n);
            const auto coords = divisor_to_coords(div, basis);
            const auto back = section_zeros(coords.point.coords(), basis);
            CHECK(same_torus_multiset(back, div, 1e-9));
            TorusPoint sum{};
            for (const auto& p : back)
                sum = add(sum, p, lat);
            CHECK(is_zero(sum, 1e-7));
        }
    }

    // Divisor through the origin and a pair {t, -t}.
    const SectionBasis b3(3, lat);
    const TorusPoint t = reduce_coords(0.61, 0.27, lat);
    const std::vector<TorusPoint> special{t, negate(t, lat), TorusPoint{}};
    CHECK(same_torus_multiset(section_zeros(divisor_to_coords(special, b3).point.coords(), b3), special, 1e-9));

    const std::vector<Complex> zero{0, 0, 0};
    CHECK_THROWS_AS(section_zeros(zero, b3), Error);
}
