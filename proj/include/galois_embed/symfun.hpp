#pragma once

// Linear systems on P^1 and on E/Q0: Sym^d(P^1) = P^d through binary forms,
// and |n[0]| = P^{n-1} through the basis {1, wp, wp', wp^2, wp wp', ...}.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "galois_embed/elliptic_core.hpp"

namespace galois_embed {

/// A point of P^d. Coordinates are scaled so that the last coordinate of
/// maximal modulus equals 1.
class ProjectivePoint {
public:
    /// Throws InvalidPoint if all coordinates vanish or any is non-finite.
    explicit ProjectivePoint(std::vector<Complex> coords);
    static ProjectivePoint p1(Complex a, Complex b) { return ProjectivePoint({a, b}); }

    std::size_t dim() const noexcept { return coords_.size() - 1; }
    const std::vector<Complex>& coords() const noexcept { return coords_; }
    Complex operator[](std::size_t i) const { return coords_[i]; }

private:
    std::vector<Complex> coords_;
};

/// sin of the Fubini-Study angle: |p ^ q| / (|p| |q|).
double chordal_distance(const ProjectivePoint& p, const ProjectivePoint& q);

/// Coefficients (c_0 : ... : c_d) of prod_i (b_i X - a_i Y) = sum_k c_k X^k Y^{d-k}.
/// The product is formed in a canonical order, so any permutation of the
/// input gives bit-identical output.
ProjectivePoint sym_product(std::span<const ProjectivePoint> points);

/// Roots (with multiplicity) of the binary form with coefficients q.
std::vector<ProjectivePoint> sym_fiber(const ProjectivePoint& q);

/// Greedy matching of two multisets under a distance.
template <class T, class Distance>
bool multiset_equal(std::span<const T> a, std::span<const T> b, Distance distance, double eps)
{
    if (a.size() != b.size())
        return false;
    std::vector<bool> used(b.size(), false);
    for (const auto& x : a) {
        std::size_t best = b.size();
        double best_d = eps;
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (used[j])
                continue;
            const double dj = distance(x, b[j]);
            if (dj < best_d) {
                best_d = dj;
                best = j;
            }
        }
        if (best == b.size())
            return false;
        used[best] = true;
    }
    return true;
}

struct BasisElement {
    int pole_order;
    int wp_power;
    bool with_wp_prime;
};

/// Basis of L(n[0]) ordered by increasing pole order 0, 2, 3, ..., n.
class SectionBasis {
public:
    /// Throws InvalidOrder for n < 2.
    SectionBasis(int n, LatticeTau lattice);

    int n() const noexcept { return n_; }
    const LatticeTau& lattice() const noexcept { return lattice_; }
    const std::vector<BasisElement>& elements() const noexcept { return elements_; }
    std::string describe(std::size_t k) const;

    /// Values of the basis at a point away from the lattice.
    std::vector<Complex> evaluate(Complex z) const;
    std::vector<Complex> derivative(Complex z) const;
    /// sum c_k b_k(z) and the magnitude sum |c_k b_k(z)| used to judge it.
    std::pair<Complex, double> section_value(std::span<const Complex> c, Complex z) const;

private:
    int n_;
    LatticeTau lattice_;
    std::vector<BasisElement> elements_;
};

struct SectionCoords {
    ProjectivePoint point;
    /// sigma_{n-2} / sigma_0 of the evaluation matrix: the gap to a second kernel vector.
    double conditioning;
    /// sigma_{n-1} / sigma_0: how nearly the divisor lies in the linear system.
    double residual;
};

/// Coordinates in |n[0]| of the effective divisor y_1 + ... + y_n (sum zero).
/// Errors: SumNotZero, HighMultiplicity (a point repeated more than twice),
/// IllConditioned (conditioning below 1e-10).
SectionCoords divisor_to_coords(std::span<const TorusPoint> points, const SectionBasis& basis, double eps_pt = 1e-9);

/// The n zeros (with multiplicity, 0 included) of the section sum c_k b_k.
/// Errors: DegenerateSection, AbelCheckFailed.
std::vector<TorusPoint> section_zeros(std::span<const Complex> c, const SectionBasis& basis, double eps_num = 1e-10);

} // namespace galois_embed
