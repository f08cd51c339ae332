#include "galois_embed/symfun.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <tuple>

#include <Eigen/Dense>

#include "galois_embed/error.hpp"

namespace galois_embed {

namespace {

// A top coefficient this small relative to the largest is a root at infinity.
constexpr double kInfinityTol = 1e-13;
// Section coefficients below this (relative) are treated as exact zeros.
constexpr double kCoefficientTol = 1e-12;
constexpr double kConditioningFloor = 1e-10;
constexpr double kAbelTol = 1e-7;
// Roots of the norm polynomial closer than this (chordal) are one cluster.
constexpr double kClusterTol = 1e-6;

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

double max_abs(std::span<const Complex> v)
{
    double m = 0.0;
    for (const auto& x : v)
        m = std::max(m, std::abs(x));
    return m;
}

// Sort key: the affine chart in which the point has modulus <= 1.
std::tuple<int, double, double> chart_key(const ProjectivePoint& p)
{
    if (std::abs(p[0]) <= std::abs(p[1])) {
        const Complex x = p[0] / p[1];
        return {0, x.real(), x.imag()};
    }
    const Complex w = p[1] / p[0];
    return {1, w.real(), w.imag()};
}

// Evaluation in extended precision: near-coincident roots are limited by the
// rounding of the residual, not by the coefficients.
using WideComplex = std::complex<long double>;

WideComplex horner(std::span<const Complex> coeffs, WideComplex x, WideComplex* derivative)
{
    WideComplex p{0, 0}, dp{0, 0};
    for (std::size_t k = coeffs.size(); k-- > 0;) {
        dp = dp * x + p;
        p = p * x + WideComplex(coeffs[k]);
    }
    if (derivative)
        *derivative = dp;
    return p;
}

// A few Newton steps on a polynomial, kept only while the residual shrinks.
Complex polish_root(std::span<const Complex> coeffs, Complex start)
{
    WideComplex x(start), dp;
    long double res = std::abs(horner(coeffs, x, &dp));
    for (int iter = 0; iter < 8 && res > 0; ++iter) {
        if (dp == WideComplex(0, 0))
            break;
        const WideComplex next = x - horner(coeffs, x, nullptr) / dp;
        WideComplex ndp;
        const long double nres = std::abs(horner(coeffs, next, &ndp));
        if (!(nres < res))
            break;
        x = next;
        res = nres;
        dp = ndp;
    }
    return Complex(double(x.real()), double(x.imag()));
}

std::vector<Complex> polynomial_roots(std::span<const Complex> coeffs)
{
    const std::size_t degree = coeffs.size() - 1;
    if (degree == 0)
        return {};
    const Complex lead = coeffs[degree];
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(Eigen::Index(degree), Eigen::Index(degree));
    for (std::size_t i = 1; i < degree; ++i)
        companion(Eigen::Index(i), Eigen::Index(i - 1)) = 1.0;
    for (std::size_t i = 0; i < degree; ++i)
        companion(Eigen::Index(i), Eigen::Index(degree - 1)) = -coeffs[i] / lead;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
    std::vector<Complex> roots;
    const std::vector<Complex> reversed(coeffs.rbegin(), coeffs.rend());
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
        const Complex r = solver.eigenvalues()(i);
        if (std::abs(r) <= 1.0)
            roots.push_back(polish_root(coeffs, r));
        else
            roots.push_back(1.0 / polish_root(reversed, 1.0 / r));
    }
    return roots;
}

} // namespace

ProjectivePoint::ProjectivePoint(std::vector<Complex> coords) : coords_(std::move(coords))
{
    if (coords_.size() < 2)
        throw Error(ErrorKind::InvalidPoint, "a projective point needs at least two coordinates");
    double m = 0.0;
    for (const auto& c : coords_) {
        if (!finite(c))
            throw Error(ErrorKind::InvalidPoint, "non-finite projective coordinate");
        m = std::max(m, std::abs(c));
    }
    if (m == 0.0)
        throw Error(ErrorKind::InvalidPoint, "all projective coordinates vanish");
    std::size_t pivot = coords_.size();
    while (pivot-- > 0)
        if (std::abs(coords_[pivot]) >= m * (1.0 - 1e-12))
            break;
    const Complex scale = coords_[pivot];
    for (auto& c : coords_)
        c /= scale;
    coords_[pivot] = Complex(1.0, 0.0);
}

double chordal_distance(const ProjectivePoint& p, const ProjectivePoint& q)
{
    if (p.dim() != q.dim())
        throw Error(ErrorKind::InvalidPoint, "projective points of different dimension");
    // |p ^ q| / (|p| |q|), which keeps its accuracy for nearby points.
    double wedge = 0, np = 0, nq = 0;
    for (std::size_t i = 0; i <= p.dim(); ++i) {
        np += std::norm(p[i]);
        nq += std::norm(q[i]);
        for (std::size_t j = i + 1; j <= p.dim(); ++j)
            wedge += std::norm(p[i] * q[j] - p[j] * q[i]);
    }
    return std::min(1.0, std::sqrt(wedge / (np * nq)));
}

ProjectivePoint sym_product(std::span<const ProjectivePoint> points)
{
    if (points.empty())
        throw Error(ErrorKind::InvalidPoint, "sym_product needs at least one point");
    std::vector<const ProjectivePoint*> order;
    for (const auto& p : points) {
        if (p.dim() != 1)
            throw Error(ErrorKind::InvalidPoint, "sym_product takes points of P^1");
        order.push_back(&p);
    }
    std::sort(order.begin(), order.end(), [](const auto* l, const auto* r) { return chart_key(*l) < chart_key(*r); });

    std::vector<Complex> c{Complex(1, 0)};
    for (const auto* p : order) {
        const Complex a = (*p)[0], b = (*p)[1];
        std::vector<Complex> next(c.size() + 1, Complex(0, 0));
        for (std::size_t k = 0; k < c.size(); ++k) {
            next[k + 1] += b * c[k];
            next[k] -= a * c[k];
        }
        c = std::move(next);
    }
    return ProjectivePoint(std::move(c));
}

std::vector<ProjectivePoint> sym_fiber(const ProjectivePoint& q)
{
    const auto& c = q.coords();
    const std::size_t d = q.dim();
    const double m = max_abs(c);
    std::size_t top = d;
    std::size_t at_infinity = 0;
    while (top > 0 && std::abs(c[top]) <= kInfinityTol * m) {
        --top;
        ++at_infinity;
    }
    std::vector<ProjectivePoint> roots;
    for (const Complex x : polynomial_roots(std::span<const Complex>(c.data(), top + 1))) {
        if (std::isfinite(std::abs(x)))
            roots.push_back(ProjectivePoint::p1(x, Complex(1, 0)));
        else
            roots.push_back(ProjectivePoint::p1(Complex(1, 0), Complex(0, 0)));
    }
    for (std::size_t k = 0; k < at_infinity; ++k)
        roots.push_back(ProjectivePoint::p1(Complex(1, 0), Complex(0, 0)));
    return roots;
}

SectionBasis::SectionBasis(int n, LatticeTau lattice) : n_(n), lattice_(std::move(lattice))
{
    if (n < 2)
        throw Error(ErrorKind::InvalidOrder, "L(n[0]) basis needs n >= 2");
    elements_.push_back({0, 0, false});
    for (int k = 2; k <= n; ++k) {
        if (k % 2 == 0)
            elements_.push_back({k, k / 2, false});
        else
            elements_.push_back({k, (k - 3) / 2, true});
    }
}

std::string SectionBasis::describe(std::size_t k) const
{
    const auto& e = elements_.at(k);
    std::ostringstream os;
    if (e.wp_power == 0 && !e.with_wp_prime)
        return "1";
    if (e.wp_power == 1)
        os << "wp";
    else if (e.wp_power > 1)
        os << "wp^" << e.wp_power;
    if (e.with_wp_prime)
        os << (e.wp_power > 0 ? "*" : "") << "wp'";
    return os.str();
}

std::vector<Complex> SectionBasis::evaluate(Complex z) const
{
    const WpValues w = wp_values(z, lattice_);
    std::vector<Complex> out;
    out.reserve(elements_.size());
    for (const auto& e : elements_) {
        Complex v = std::pow(w.wp, e.wp_power);
        if (e.with_wp_prime)
            v *= w.wp_prime;
        out.push_back(v);
    }
    return out;
}

std::vector<Complex> SectionBasis::derivative(Complex z) const
{
    const WpValues w = wp_values(z, lattice_);
    const Complex wpp = 6.0 * w.wp * w.wp - lattice_.g2() / 2.0;
    std::vector<Complex> out;
    out.reserve(elements_.size());
    for (const auto& e : elements_) {
        const int a = e.wp_power;
        const Complex pa = std::pow(w.wp, a);
        const Complex dpa = a == 0 ? Complex(0, 0) : double(a) * std::pow(w.wp, a - 1) * w.wp_prime;
        out.push_back(e.with_wp_prime ? dpa * w.wp_prime + pa * wpp : dpa);
    }
    return out;
}

std::pair<Complex, double> SectionBasis::section_value(std::span<const Complex> c, Complex z) const
{
    const auto b = evaluate(z);
    Complex s{0, 0};
    double magnitude = 0.0;
    for (std::size_t k = 0; k < b.size(); ++k) {
        s += c[k] * b[k];
        magnitude += std::abs(c[k] * b[k]);
    }
    return {s, magnitude};
}

SectionCoords divisor_to_coords(std::span<const TorusPoint> points, const SectionBasis& basis, double eps_pt)
{
    const std::size_t n = std::size_t(basis.n());
    const LatticeTau& lattice = basis.lattice();
    if (points.size() != n)
        throw Error(ErrorKind::InvalidPoint, "divisor degree must equal n");

    TorusPoint sum{};
    for (const auto& p : points)
        sum = add(sum, p, lattice);
    if (!is_zero(sum, eps_pt))
        throw Error(ErrorKind::SumNotZero, "divisor points do not sum to zero on E/Q0");

    // Cluster equal points.
    struct Cluster {
        TorusPoint point;
        int multiplicity;
    };
    std::vector<Cluster> clusters;
    for (const auto& p : points) {
        auto it = std::find_if(clusters.begin(), clusters.end(), [&](const Cluster& c) { return same_point(c.point, p, eps_pt); });
        if (it == clusters.end())
            clusters.push_back({p, 1});
        else
            ++it->multiplicity;
    }

    std::vector<std::vector<Complex>> rows;
    auto push_scaled = [&](std::vector<Complex> row) {
        const double m = max_abs(row);
        if (m > 0)
            for (auto& v : row)
                v /= m;
        rows.push_back(std::move(row));
    };
    for (const auto& c : clusters) {
        if (c.multiplicity > 2)
            throw Error(ErrorKind::HighMultiplicity, "point of multiplicity " + std::to_string(c.multiplicity));
        if (is_zero(c.point, eps_pt)) {
            // Zeros at the origin lower the allowed pole order.
            const int max_pole = int(n) - c.multiplicity;
            for (std::size_t k = 0; k < n; ++k) {
                if (basis.elements()[k].pole_order > max_pole) {
                    std::vector<Complex> row(n, Complex(0, 0));
                    row[k] = 1.0;
                    rows.push_back(std::move(row));
                }
            }
            continue;
        }
        push_scaled(basis.evaluate(c.point.z));
        if (c.multiplicity == 2)
            push_scaled(basis.derivative(c.point.z));
    }
    while (rows.size() < n)
        rows.emplace_back(n, Complex(0, 0));

    Eigen::MatrixXcd m(Eigen::Index(rows.size()), Eigen::Index(n));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t k = 0; k < n; ++k)
            m(Eigen::Index(i), Eigen::Index(k)) = rows[i][k];
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double top = sv(0);
    const double conditioning = top > 0 ? sv(Eigen::Index(n) - 2) / top : 0.0;
    const double residual = top > 0 ? sv(Eigen::Index(n) - 1) / top : 1.0;
    if (!(conditioning >= kConditioningFloor))
        throw Error(ErrorKind::IllConditioned, "evaluation matrix kernel is not one-dimensional");

    std::vector<Complex> kernel(n);
    for (std::size_t k = 0; k < n; ++k)
        kernel[k] = svd.matrixV()(Eigen::Index(k), Eigen::Index(n) - 1);
    return {ProjectivePoint(std::move(kernel)), conditioning, residual};
}

std::vector<TorusPoint> section_zeros(std::span<const Complex> c_in, const SectionBasis& basis, double eps_num)
{
    const std::size_t n = std::size_t(basis.n());
    const LatticeTau& lattice = basis.lattice();
    if (c_in.size() != n)
        throw Error(ErrorKind::InvalidPoint, "coefficient vector length must equal n");
    const double cmax = max_abs(c_in);
    if (!(cmax > 0) || !std::isfinite(cmax))
        throw Error(ErrorKind::DegenerateSection, "zero or non-finite section");

    std::vector<Complex> c(c_in.begin(), c_in.end());
    for (auto& v : c) {
        v /= cmax;
        if (std::abs(v) <= kCoefficientTol)
            v = 0;
    }

    // Section = P(wp) + wp' Q(wp); N(x) = P^2 - (4x^3 - g2 x - g3) Q^2.
    std::vector<Complex> p(n / 2 + 1, Complex(0, 0)), q(n / 2 + 1, Complex(0, 0));
    for (std::size_t k = 0; k < n; ++k) {
        const auto& e = basis.elements()[k];
        (e.with_wp_prime ? q : p)[std::size_t(e.wp_power)] += c[k];
    }
    std::vector<Complex> norm(n + 1, Complex(0, 0));
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < p.size(); ++j)
            if (i + j <= n)
                norm[i + j] += p[i] * p[j];
    const std::array<Complex, 4> cubic{-lattice.g3(), -lattice.g2(), Complex(0, 0), Complex(4, 0)};
    for (std::size_t i = 0; i < q.size(); ++i)
        for (std::size_t j = 0; j < q.size(); ++j)
            for (std::size_t k = 0; k < 4; ++k)
                if (i + j + k <= n)
                    norm[i + j + k] -= cubic[k] * q[i] * q[j];
    if (max_abs(norm) <= 1e-24)
        throw Error(ErrorKind::DegenerateSection, "norm polynomial vanishes identically");

    const auto roots = sym_fiber(ProjectivePoint(norm));

    // Group coincident roots; a double root of N is either a double zero or a pair {z, -z}.
    std::vector<std::pair<ProjectivePoint, int>> clusters;
    for (const auto& r : roots) {
        auto it = std::find_if(clusters.begin(), clusters.end(), [&](const auto& cl) { return chordal_distance(cl.first, r) < kClusterTol; });
        if (it == clusters.end())
            clusters.emplace_back(r, 1);
        else
            ++it->second;
    }

    auto relative_value = [&](Complex z) {
        const auto [s, mag] = basis.section_value(c, z);
        return mag > 0 ? std::abs(s) / mag : std::abs(s);
    };
    auto polish = [&](Complex z) {
        for (int iter = 0; iter < 20; ++iter) {
            const auto b = basis.evaluate(z);
            const auto db = basis.derivative(z);
            Complex s{0, 0}, ds{0, 0};
            for (std::size_t k = 0; k < n; ++k) {
                s += c[k] * b[k];
                ds += c[k] * db[k];
            }
            if (ds == Complex(0, 0))
                break;
            const Complex next = z - s / ds;
            if (!finite(next) || !(relative_value(next) < relative_value(z)))
                break;
            z = next;
        }
        return z;
    };

    std::vector<TorusPoint> zeros;
    for (const auto& [root, multiplicity] : clusters) {
        if (std::abs(root[1]) <= kInfinityTol * std::abs(root[0])) {
            for (int k = 0; k < multiplicity; ++k)
                zeros.push_back(TorusPoint{});
            continue;
        }
        const Complex x = root[0] / root[1];
        const auto pm = wp_inverse(x, lattice, eps_num);
        const double rp = relative_value(pm[0].z), rm = relative_value(pm[1].z);
        const TorusPoint& best = rp <= rm ? pm[0] : pm[1];
        if (multiplicity == 1) {
            zeros.push_back(reduce_point(polish(best.z), lattice));
        }
        else if (multiplicity == 2 && std::max(rp, rm) < kClusterTol) {
            zeros.push_back(reduce_point(polish(pm[0].z), lattice));
            zeros.push_back(reduce_point(polish(pm[1].z), lattice));
        }
        else {
            const TorusPoint refined = reduce_point(polish(best.z), lattice);
            for (int k = 0; k < multiplicity; ++k)
                zeros.push_back(refined);
        }
    }

    TorusPoint sum{};
    for (const auto& z : zeros)
        sum = add(sum, z, lattice);
    if (!is_zero(sum, kAbelTol))
        throw Error(ErrorKind::AbelCheckFailed, "zeros of the section do not sum to zero");
    return zeros;
}

} // namespace galois_embed
