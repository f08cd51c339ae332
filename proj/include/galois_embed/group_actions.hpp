#pragma once

// Finite groups of affine automorphisms p -> M p + t of E^d, with M an
// integer unimodular matrix and t a torsion translation. Group arithmetic is
// exact; floating point only enters when acting on points.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "galois_embed/elliptic_core.hpp"

namespace galois_embed {

/// A point of E^d.
using EdPoint = std::vector<TorusPoint>;

class AffineAutomorphism {
public:
    /// matrix is d*d row-major. Throws InvalidAutomorphism if the sizes
    /// disagree or |det| != 1.
    AffineAutomorphism(std::size_t d, std::vector<std::int64_t> matrix, std::vector<TorsionCoords> translation);

    static AffineAutomorphism identity(std::size_t d);
    static AffineAutomorphism translation_by(std::vector<TorsionCoords> t);
    static AffineAutomorphism linear(std::size_t d, std::vector<std::int64_t> matrix);

    std::size_t dim() const noexcept { return d_; }
    std::int64_t matrix(std::size_t i, std::size_t j) const { return m_[i * d_ + j]; }
    const std::vector<std::int64_t>& matrix() const noexcept { return m_; }
    const std::vector<TorsionCoords>& translation() const noexcept { return t_; }
    bool is_translation() const;
    bool is_identity() const;

    /// (*this) o other: p -> this(other(p)).
    AffineAutomorphism compose(const AffineAutomorphism& other) const;
    AffineAutomorphism inverse() const;
    EdPoint apply(const EdPoint& p, const LatticeTau& lattice) const;

    friend bool operator==(const AffineAutomorphism&, const AffineAutomorphism&) = default;
    friend bool operator<(const AffineAutomorphism& x, const AffineAutomorphism& y);

private:
    std::size_t d_;
    std::vector<std::int64_t> m_;
    std::vector<TorsionCoords> t_;
};

constexpr std::size_t kDefaultOrderCap = 100000;

class FiniteActionGroup {
public:
    /// Closure of the generators under composition. Throws OrderCapExceeded
    /// once more than order_cap elements appear.
    static FiniteActionGroup generate(std::size_t d, std::vector<AffineAutomorphism> generators,
                                      std::size_t order_cap = kDefaultOrderCap);

    std::size_t dim() const noexcept { return d_; }
    const std::vector<AffineAutomorphism>& generators() const noexcept { return generators_; }
    /// Breadth-first order from the generators; elements()[0] is the identity.
    const std::vector<AffineAutomorphism>& elements() const noexcept { return elements_; }
    std::size_t order() const noexcept { return elements_.size(); }
    std::optional<std::size_t> index_of(const AffineAutomorphism& g) const;
    /// Number of distinct matrix parts.
    std::size_t matrix_part_order() const;

    /// Whether the line bundle behind the construction is known to be very ample.
    bool very_ample() const noexcept { return very_ample_; }
    void set_very_ample(bool v) noexcept { very_ample_ = v; }

private:
    std::size_t d_ = 0;
    std::vector<AffineAutomorphism> generators_;
    std::vector<AffineAutomorphism> elements_;
    std::vector<std::size_t> sorted_;
    bool very_ample_ = true;
};

/// (Q0 x| Z/2)^d x| S_d: Q0 translations and negation in each coordinate,
/// plus adjacent transpositions. Order 2^d d! |Q0|^d.
FiniteActionGroup build_group_A(int d, const FiniteSubgroupSpec& q0, std::size_t order_cap = kDefaultOrderCap);

/// Q0^d x| S_{d+1}: Q0 translations, sigma1 = swap of x1 and x2 and
/// sigma2 = (x1..xd) -> (-(x1+...+xd), x1, ..., x_{d-1}). Order (d+1)! |Q0|^d.
FiniteActionGroup build_group_B(int d, const FiniteSubgroupSpec& q0, std::size_t order_cap = kDefaultOrderCap);

/// Max over coordinates of torus_distance.
double ed_distance(const EdPoint& p, const EdPoint& q);

/// Distinct images g.p (within eps_pt), sorted lexicographically by coordinates.
std::vector<EdPoint> orbit(const FiniteActionGroup& group, const EdPoint& p, const LatticeTau& lattice,
                           double eps_pt = 1e-9);

struct FreeCheck {
    bool free;
    /// Indices into group.elements() of the elements fixing p, identity included.
    std::vector<std::size_t> stabilizer;
};

FreeCheck is_free_at(const FiniteActionGroup& group, const EdPoint& p, const LatticeTau& lattice,
                     double eps_pt = 1e-9);

} // namespace galois_embed
