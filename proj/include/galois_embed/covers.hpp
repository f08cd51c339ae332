#pragma once

// The two Galois covers E^d -> P^d.
//   A: each coordinate goes to E/Q0 and then to P^1 through wp; the d values
//      are combined into a point of Sym^d(P^1) = P^d.
//   B: the images y_1..y_d in E/Q0 together with y_{d+1} = -(y_1+...+y_d)
//      form a divisor in |(d+1)[0]| = P^d.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "galois_embed/elliptic_core.hpp"
#include "galois_embed/group_actions.hpp"
#include "galois_embed/polarization.hpp"
#include "galois_embed/symfun.hpp"
#include "galois_embed/tolerances.hpp"

namespace galois_embed {

enum class Construction { A, B };

char to_char(Construction c) noexcept;

struct CoverSpec {
    Construction construction;
    int d;
    LatticeTau curve;
    FiniteSubgroupSpec q0;
    IsogenyQuotient quotient;
    FiniteActionGroup group;
    PolarizationMatrix polarization;
    /// 1 for A, |Q0|^d for B.
    Integer isogeny_factor;
    /// d! * det(polarization) * isogeny_factor.
    Integer theoretical_degree;
    /// Basis of L((d+1)[0]) on E/Q0; construction B only.
    std::optional<SectionBasis> basis;
    Tolerances tol;

    bool very_ample_precondition() const noexcept { return group.very_ample(); }
};

/// Polarization 2|Q0| I for A, I + J for B. Throws InvalidOrder for d < 1.
CoverSpec make_cover(Construction construction, int d, const LatticeTau& curve, const FiniteSubgroupSpec& q0,
                     const Tolerances& tol = {}, std::size_t order_cap = kDefaultOrderCap);

ProjectivePoint map_A(const CoverSpec& spec, const EdPoint& p);
/// Propagates HighMultiplicity and IllConditioned from divisor_to_coords.
ProjectivePoint map_B(const CoverSpec& spec, const EdPoint& p);
ProjectivePoint cover_map(const CoverSpec& spec, const EdPoint& p);

/// The full preimage of q under map_A, computed independently of the group:
/// every ordered choice of lifts of the d roots of q. Throws NonGenericTarget
/// when two roots collide or a root is a branch value of wp.
std::vector<EdPoint> fiber_A(const CoverSpec& spec, const ProjectivePoint& q);

struct SampleRecord {
    std::size_t index = 0;
    EdPoint point;
    bool generic = false;
    std::size_t stabilizer_size = 0;
    std::size_t orbit_size = 0;
    double image_spread = 0.0;
    bool fiber_match = false;
    bool pass = false;
    /// Empty unless something threw or did not match.
    std::string note;
};

struct VerificationReport {
    Construction construction = Construction::A;
    int d = 0;
    std::uint64_t seed = 0;
    Tolerances tol;
    std::size_t group_order = 0;
    std::vector<SampleRecord> samples;
    std::size_t generic_samples = 0;
    /// Every generic sample passed and there was at least one.
    bool pass = false;
    double seconds = 0.0;
};

/// Uniform point of E^d from 53-bit doubles drawn off the generator.
EdPoint random_point(std::mt19937_64& rng, const CoverSpec& spec);

/// One sample of the verification protocol at a given point.
SampleRecord verify_sample(const CoverSpec& spec, std::size_t index, const EdPoint& p);

/// Records are ordered by sample index whatever the number of jobs.
VerificationReport galois_verify(const CoverSpec& spec, std::size_t samples, std::uint64_t seed, unsigned jobs = 1);

struct CriterionRecord {
    bool order_ok = false;
    bool invariance_ok = false;
    bool basepoint_ok = false;
    bool very_ample_precondition = false;
    std::size_t basepoint_configurations = 0;
    /// Configurations skipped because the divisor had a point of multiplicity > 2.
    std::size_t basepoint_excluded = 0;

    bool all() const noexcept { return order_ok && invariance_ok && basepoint_ok && very_ample_precondition; }
};

CriterionRecord criterion_check(const CoverSpec& spec, std::uint64_t seed = 42);

} // namespace galois_embed
