#pragma once

// Complex-torus arithmetic for E = C / (Z omega1 + Z omega2): lattice
// normalisation, point reduction, torsion, quotients by finite subgroups and
// the Weierstrass functions evaluated through Jacobi theta series.

#include <array>
#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

#include "galois_embed/tolerances.hpp"

namespace galois_embed {

using Complex = std::complex<double>;
using Rational = boost::rational<std::int64_t>;

class LatticeTau {
public:
    /// Periods are swapped when Im(omega2/omega1) < 0 so that Im(tau) > 0.
    LatticeTau(Complex omega1, Complex omega2);

    static LatticeTau from_tau(Complex tau) { return LatticeTau(Complex(1.0, 0.0), tau); }

    Complex omega1() const noexcept { return omega1_; }
    Complex omega2() const noexcept { return omega2_; }
    Complex tau() const noexcept { return omega2_ / omega1_; }

    // SL2(Z)-reduced basis: |Re tau_red| <= 1/2, |tau_red| >= 1.
    Complex reduced_omega1() const noexcept { return red_omega1_; }
    Complex reduced_omega2() const noexcept { return red_omega2_; }
    Complex reduced_tau() const noexcept { return red_tau_; }
    /// {a, b, c, d} with reduced_omega2 = a*omega2 + b*omega1 and
    /// reduced_omega1 = c*omega2 + d*omega1, ad - bc = 1.
    const std::array<std::int64_t, 4>& reduction() const noexcept { return reduction_; }

    Complex g2() const noexcept { return g2_; }
    Complex g3() const noexcept { return g3_; }

    Complex at(double a, double b) const noexcept { return a * omega1_ + b * omega2_; }
    /// Real coordinates (a, b) with z = a*omega1 + b*omega2.
    std::pair<double, double> coordinates(Complex z) const noexcept;

    // Theta constants theta2(0), theta3(0) for the reduced nome exp(i pi tau_red).
    Complex theta2_zero() const noexcept { return theta2_0_; }
    Complex theta3_zero() const noexcept { return theta3_0_; }

private:
    Complex omega1_, omega2_;
    Complex red_omega1_, red_omega2_, red_tau_;
    std::array<std::int64_t, 4> reduction_{1, 0, 0, 1};
    Complex theta2_0_, theta3_0_;
    Complex g2_, g3_;
};

/// Reduced representative of a point of C / Lambda; (a, b) in [0,1)^2 and
/// z = a*omega1 + b*omega2 for the lattice it was reduced against.
struct TorusPoint {
    double a = 0.0;
    double b = 0.0;
    Complex z{0.0, 0.0};
};

/// Rational coordinates of a torsion point, kept reduced into [0,1).
struct TorsionCoords {
    Rational a{0};
    Rational b{0};

    friend bool operator==(const TorsionCoords&, const TorsionCoords&) = default;
};

TorsionCoords normalized(TorsionCoords t);
TorsionCoords operator+(const TorsionCoords& x, const TorsionCoords& y);
TorsionCoords operator-(const TorsionCoords& x);
TorsionCoords operator*(std::int64_t k, const TorsionCoords& x);
bool operator<(const TorsionCoords& x, const TorsionCoords& y);

TorusPoint reduce_point(Complex z, const LatticeTau& lattice);
TorusPoint reduce_coords(double a, double b, const LatticeTau& lattice);
TorusPoint translate(const TorusPoint& p, const TorsionCoords& t, const LatticeTau& lattice);
TorusPoint add(const TorusPoint& p, const TorusPoint& q, const LatticeTau& lattice);
TorusPoint negate(const TorusPoint& p, const LatticeTau& lattice);

/// Toroidal coordinate distance: Euclidean norm of the wrapped coordinate
/// difference, each component in [-1/2, 1/2].
double torus_distance(const TorusPoint& p, const TorusPoint& q) noexcept;
inline bool same_point(const TorusPoint& p, const TorusPoint& q, double eps) noexcept
{
    return torus_distance(p, q) < eps;
}
inline bool is_zero(const TorusPoint& p, double eps) noexcept { return same_point(p, TorusPoint{}, eps); }

/// The n^2 points of E[n], ordered by (i, j) for (i/n, j/n).
std::vector<TorusPoint> torsion_points(const LatticeTau& lattice, int n);

/// A finite subgroup Q0 of E given by at most two torsion generators.
class FiniteSubgroupSpec {
public:
    static FiniteSubgroupSpec generated_by(std::vector<TorsionCoords> generators);
    static FiniteSubgroupSpec trivial() { return generated_by({}); }

    const std::vector<TorsionCoords>& generators() const noexcept { return generators_; }
    std::int64_t order() const noexcept { return order_; }
    /// All elements, sorted; the first is always zero.
    const std::vector<TorsionCoords>& elements() const noexcept { return elements_; }

private:
    std::vector<TorsionCoords> generators_;
    std::vector<TorsionCoords> elements_;
    std::int64_t order_ = 1;
};

/// E -> E/Q0 realised as C/Lambda -> C/Lambda' with Lambda' = Lambda + lifts of Q0.
struct IsogenyQuotient {
    LatticeTau source;
    LatticeTau target;
    std::int64_t index = 1;
    /// target.omega1 = basis[0]*omega1 + basis[1]*omega2,
    /// target.omega2 = basis[2]*omega1 + basis[3]*omega2.
    std::array<Rational, 4> basis;
    std::vector<TorsionCoords> kernel;

    TorusPoint image(const TorusPoint& p) const { return reduce_point(p.z, target); }
    /// The |Q0| points of E over a point of E/Q0.
    std::vector<TorusPoint> lifts(const TorusPoint& w) const;
};

IsogenyQuotient quotient_lattice(const LatticeTau& lattice, const FiniteSubgroupSpec& q0);

/// Homogeneous value num/den of a meromorphic function; normalised so that the
/// larger component is exactly 1. A pole is (1, 0).
struct Homogeneous {
    Complex num{1.0, 0.0};
    Complex den{1.0, 0.0};

    bool is_pole() const noexcept { return den == Complex(0.0, 0.0); }
    Complex value() const noexcept { return num / den; }
};

std::pair<Complex, Complex> eisenstein_g2_g3(const LatticeTau& lattice);

Homogeneous wp(const TorusPoint& p, const LatticeTau& lattice);
Homogeneous wp_prime(const TorusPoint& p, const LatticeTau& lattice);

/// Finite values of wp and wp' at z. Only meaningful away from lattice points.
struct WpValues {
    Complex wp;
    Complex wp_prime;
};
WpValues wp_values(Complex z, const LatticeTau& lattice);

/// The two solutions {z, -z} of wp(z) = x. For a branch value both entries coincide.
std::array<TorusPoint, 2> wp_inverse(Complex x, const LatticeTau& lattice, double eps_num = 1e-10);

} // namespace galois_embed
