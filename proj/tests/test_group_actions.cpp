#include "doctest.h"

#include <random>

#include "galois_embed/error.hpp"
#include "galois_embed/group_actions.hpp"

using namespace galois_embed;

namespace {

const LatticeTau kLattice = LatticeTau::from_tau(Complex(0.3, 1.1));

double uniform(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }

EdPoint random_point(std::mt19937_64& rng, std::size_t d)
{
    EdPoint p;
    for (std::size_t i = 0; i < d; ++i)
        p.push_back(reduce_coords(uniform(rng), uniform(rng), kLattice));
    return p;
}

FiniteSubgroupSpec cyclic(int n) { return FiniteSubgroupSpec::generated_by({{Rational(1, n), Rational(0)}}); }

std::size_t factorial(std::size_t n) { return n <= 1 ? 1 : n * factorial(n - 1); }

std::size_t power(std::size_t b, std::size_t e)
{
    std::size_t r = 1;
    while (e-- > 0)
        r *= b;
    return r;
}

} // namespace

TEST_CASE("automorphism arithmetic")
{
    const AffineAutomorphism s(2, {0, 1, 1, 0}, {{Rational(1, 2), 0}, {0, 0}});
    CHECK(s.compose(s.inverse()).is_identity());
    CHECK(s.inverse().compose(s).is_identity());
    CHECK_THROWS_AS(AffineAutomorphism::linear(2, {2, 0, 0, 1}), Error);
    CHECK_THROWS_AS(AffineAutomorphism(2, {1, 0, 0, 1}, {}), Error);

    std::mt19937_64 rng(1);
    const EdPoint p = random_point(rng, 2);
    const EdPoint q = s.apply(p, kLattice);
    CHECK(same_point(q[0], translate(p[1], {Rational(1, 2), 0}, kLattice), 1e-12));
    CHECK(same_point(q[1], p[0], 1e-12));
    CHECK(ed_distance(s.inverse().apply(q, kLattice), p) < 1e-12);
}

TEST_CASE("group orders")
{
    CHECK(build_group_A(1, cyclic(2)).order() == 4);
    CHECK(build_group_A(2, cyclic(2)).order() == 32);
    const auto trivial = build_group_A(2, FiniteSubgroupSpec::trivial());
    CHECK(trivial.order() == 8);
    CHECK_FALSE(trivial.very_ample());

    CHECK(build_group_B(2, cyclic(2)).order() == 24);
    CHECK(build_group_B(1, cyclic(3)).order() == 6);
    CHECK(build_group_B(3, cyclic(2)).order() == 192);
    CHECK_FALSE(build_group_B(1, cyclic(2)).very_ample());
    CHECK(build_group_B(1, cyclic(3)).very_ample());

    for (std::size_t d = 1; d <= 3; ++d)
        for (int q = 2; q <= 4; ++q) {
            const auto a = build_group_A(int(d), cyclic(q));
            CHECK(a.order() == power(2, d) * factorial(d) * power(std::size_t(q), d));
            const auto b = build_group_B(int(d), cyclic(q));
            CHECK(b.order() == factorial(d + 1) * power(std::size_t(q), d));
            CHECK(b.matrix_part_order() == factorial(d + 1));
        }

    // Non-cyclic Q0 = E[2].
    const auto klein = FiniteSubgroupSpec::generated_by({{Rational(1, 2), 0}, {0, Rational(1, 2)}});
    CHECK(build_group_A(2, klein).order() == 4 * 2 * 16);
    CHECK(build_group_B(2, klein).order() == 6 * 16);

    CHECK_THROWS_AS(build_group_A(3, cyclic(4), 100), Error);
    CHECK_THROWS_AS(build_group_B(0, cyclic(2)), Error);
}

TEST_CASE("group axioms and normal translation subgroup")
{
    std::mt19937_64 rng(4);
    for (const auto& g : {build_group_A(2, cyclic(3)), build_group_B(3, cyclic(2))}) {
        CHECK(g.elements()[0].is_identity());
        for (const auto& x : g.elements())
            CHECK(g.index_of(x.inverse()).has_value());
        for (int trial = 0; trial < 50; ++trial) {
            const auto& x = g.elements()[rng() % g.order()];
            const auto& y = g.elements()[rng() % g.order()];
            const auto& z = g.elements()[rng() % g.order()];
            CHECK(x.compose(y).compose(z) == x.compose(y.compose(z)));
            CHECK(g.index_of(x.compose(y)).has_value());
        }
        for (const auto& t : g.elements()) {
            if (!t.is_translation())
                continue;
            for (const auto& x : g.elements()) {
                const auto c = x.compose(t).compose(x.inverse());
                CHECK(c.is_translation());
                CHECK(g.index_of(c).has_value());
            }
        }
    }
}

TEST_CASE("orbits")
{
    const auto a1 = build_group_A(1, cyclic(2));
    const auto zero_orbit = orbit(a1, EdPoint{TorusPoint{}}, kLattice);
    REQUIRE(zero_orbit.size() == 2);
    CHECK(is_zero(zero_orbit[0][0], 1e-12));
    CHECK(same_point(zero_orbit[1][0], reduce_coords(0.5, 0, kLattice), 1e-12));

    std::mt19937_64 rng(8);
    const auto a2 = build_group_A(2, cyclic(2));
    const auto b2 = build_group_B(2, cyclic(2));
    for (int trial = 0; trial < 5; ++trial) {
        const EdPoint p = random_point(rng, 2);
        CHECK(is_free_at(a2, p, kLattice).free);
        CHECK(orbit(a2, p, kLattice).size() == 32);
        CHECK(is_free_at(b2, p, kLattice).free);
        CHECK(orbit(b2, p, kLattice).size() == 24);
    }
}

TEST_CASE("stabilizers")
{
    const auto a2 = build_group_A(2, cyclic(2));
    const TorusPoint half = reduce_coords(0, 0.5, kLattice);
    const auto diag = is_free_at(a2, EdPoint{half, half}, kLattice);
    CHECK_FALSE(diag.free);
    CHECK(diag.stabilizer.size() > 1);

    const TorusPoint x = reduce_coords(0.2, 0.7, kLattice);
    const auto equal = is_free_at(a2, EdPoint{x, x}, kLattice);
    CHECK_FALSE(equal.free);
    bool has_swap = false;
    for (std::size_t k : equal.stabilizer)
        has_swap |= a2.elements()[k].matrix() == std::vector<std::int64_t>{0, 1, 1, 0};
    CHECK(has_swap);

    const auto generic = is_free_at(a2, EdPoint{x, reduce_coords(0.61, 0.13, kLattice)}, kLattice);
    CHECK(generic.free);
    CHECK(generic.stabilizer.size() == 1);
}
