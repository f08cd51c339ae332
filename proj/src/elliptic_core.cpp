#include "galois_embed/elliptic_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <set>

#include <boost/multiprecision/cpp_int.hpp>

#include "galois_embed/error.hpp"

namespace galois_embed {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr Complex kI{0.0, 1.0};
// Relative tail bound at which the theta and Lambert series are truncated.
constexpr double kSeriesTail = 1e-17;
constexpr int kMaxSeriesTerms = 64;
// Coordinates this close to an integer are taken to be that integer.
constexpr double kCoordSnap = 1e-14;
constexpr std::int64_t kMaxTorsionDenominator = 1000;
constexpr std::size_t kMaxSubgroupOrder = 1000000;

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

double wrap_unit(double x)
{
    x -= std::floor(x);
    if (x >= 1.0 - kCoordSnap || x < kCoordSnap)
        return 0.0;
    return x;
}

double to_double(const Rational& r)
{
    return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

Rational frac(Rational r)
{
    std::int64_t fl = r.numerator() / r.denominator();
    if (r.numerator() < 0 && fl * r.denominator() != r.numerator())
        --fl;
    return r - fl;
}

// q^e for q = exp(i pi tau), evaluated as a single exponential.
Complex nome_power(Complex tau, double e) { return std::exp(kI * kPi * tau * e); }

struct EisensteinSeries {
    Complex e4, e6;
};

EisensteinSeries eisenstein_series(Complex tau)
{
    const Complex q = std::exp(2.0 * kPi * kI * tau);
    Complex s3{0.0, 0.0}, s5{0.0, 0.0};
    Complex qn = q;
    for (int n = 1; n <= kMaxSeriesTerms; ++n) {
        const Complex lambert = qn / (1.0 - qn);
        const double n3 = double(n) * n * n;
        const Complex t3 = n3 * lambert;
        const Complex t5 = n3 * n * n * lambert;
        s3 += t3;
        s5 += t5;
        if (std::abs(t5) < kSeriesTail * std::max(1.0, std::abs(s5)) && std::abs(t3) < kSeriesTail * std::max(1.0, std::abs(s3)))
            break;
        qn *= q;
    }
    return {1.0 + 240.0 * s3, 1.0 - 504.0 * s5};
}

std::pair<Complex, Complex> g2_g3_from_reduced(Complex red_omega1, Complex red_tau)
{
    const auto [e4, e6] = eisenstein_series(red_tau);
    const double pi4 = std::pow(kPi, 4), pi6 = std::pow(kPi, 6);
    const Complex w2 = red_omega1 * red_omega1;
    const Complex w4 = w2 * w2;
    const Complex w6 = w4 * w2;
    return {4.0 * pi4 / 3.0 * e4 / w4, 8.0 * pi6 / 27.0 * e6 / w6};
}

struct ThetaAt {
    Complex t1{0.0, 0.0}, t1p{0.0, 0.0}, t4{1.0, 0.0}, t4p{0.0, 0.0};
};

// theta1, theta4 and their v-derivatives for |Im v| <= pi Im(tau) / 2.
ThetaAt theta_at(Complex v, Complex tau)
{
    ThetaAt out;
    const double im_tau = tau.imag();
    const double im_v = std::abs(v.imag());
    for (int n = 0; n <= kMaxSeriesTerms; ++n) {
        const double sign = (n % 2 == 0) ? 1.0 : -1.0;
        const double odd = 2.0 * n + 1.0;
        const Complex qa = nome_power(tau, (n + 0.5) * (n + 0.5));
        out.t1 += 2.0 * sign * qa * std::sin(odd * v);
        out.t1p += 2.0 * sign * qa * odd * std::cos(odd * v);
        if (n >= 1) {
            const double even = 2.0 * n;
            const Complex qb = nome_power(tau, double(n) * n);
            out.t4 += 2.0 * sign * qb * std::cos(even * v);
            out.t4p -= 2.0 * sign * qb * even * std::sin(even * v);
        }
        // Term m relative to the leading one is bounded by exp(-pi Im(tau) m^2 + 2m|Im v|)
        // times the derivative weight.
        if (n >= 2) {
            const double m = n + 1.0;
            const double tail1 = std::exp(-kPi * im_tau * m * m + 2.0 * m * im_v) * (2.0 * m + 1.0) * (2.0 * m + 1.0);
            const double tail4 = std::exp(-kPi * im_tau * m * m + 2.0 * m * im_v) * 4.0 * m * m;
            if (tail1 < kSeriesTail && tail4 < kSeriesTail)
                break;
        }
    }
    return out;
}

Homogeneous normalize(Complex num, Complex den)
{
    if (std::abs(num) >= std::abs(den)) {
        if (num == Complex(0.0, 0.0))
            return {Complex(0.0, 0.0), Complex(1.0, 0.0)};
        return {Complex(1.0, 0.0), den / num};
    }
    return {num / den, Complex(1.0, 0.0)};
}

struct WpPairs {
    Complex wp_num, wp_den, wpp_num, wpp_den;
};

WpPairs wp_pairs(Complex z, const LatticeTau& lattice)
{
    const Complex w1 = lattice.reduced_omega1();
    const Complex tau = lattice.reduced_tau();
    Complex u = z / w1;
    const double beta = u.imag() / tau.imag();
    const double alpha = u.real() - beta * tau.real();
    u -= std::round(alpha) + std::round(beta) * tau;

    const ThetaAt th = theta_at(kPi * u, tau);
    const Complex t2 = lattice.theta2_zero(), t3 = lattice.theta3_zero();
    const Complex c = kPi * kPi * t2 * t2 * t3 * t3;
    const Complex k = kPi * kPi / 3.0 * (t2 * t2 * t2 * t2 + t3 * t3 * t3 * t3);
    const Complex w1sq = w1 * w1;

    WpPairs out;
    out.wp_num = c * th.t4 * th.t4 - k * th.t1 * th.t1;
    out.wp_den = th.t1 * th.t1 * w1sq;
    out.wpp_num = 2.0 * kPi * c * th.t4 * (th.t4p * th.t1 - th.t4 * th.t1p);
    out.wpp_den = th.t1 * th.t1 * th.t1 * w1sq * w1;
    return out;
}

// Upper-triangular basis {(g, x), (0, h)} of the integer lattice spanned by rows.
struct Hnf2 {
    boost::multiprecision::cpp_int g, x, h;
};

Hnf2 hnf2(const std::vector<std::array<boost::multiprecision::cpp_int, 2>>& rows)
{
    using boost::multiprecision::cpp_int;
    std::array<cpp_int, 2> r1{0, 0};
    for (const auto& v : rows) {
        if (v[0] == 0)
            continue;
        if (r1[0] == 0) {
            r1 = v;
            continue;
        }
        // Extended gcd on first components.
        cpp_int a = r1[0], b = v[0], s0 = 1, s1 = 0, t0 = 0, t1 = 1;
        while (b != 0) {
            cpp_int q = a / b;
            cpp_int tmp = a - q * b;
            a = b;
            b = tmp;
            tmp = s0 - q * s1;
            s0 = s1;
            s1 = tmp;
            tmp = t0 - q * t1;
            t0 = t1;
            t1 = tmp;
        }
        r1 = {s0 * r1[0] + t0 * v[0], s0 * r1[1] + t0 * v[1]};
    }
    if (r1[0] < 0)
        r1 = {-r1[0], -r1[1]};
    cpp_int h = 0;
    for (const auto& v : rows) {
        cpp_int second = v[1];
        if (r1[0] != 0)
            second -= (v[0] / r1[0]) * r1[1];
        h = boost::multiprecision::gcd(h, second);
    }
    if (h < 0)
        h = -h;
    Hnf2 out{r1[0], r1[1], h};
    if (out.h != 0) {
        out.x %= out.h;
        if (out.x < 0)
            out.x += out.h;
    }
    return out;
}

} // namespace

LatticeTau::LatticeTau(Complex omega1, Complex omega2) : omega1_(omega1), omega2_(omega2)
{
    if (!finite(omega1) || !finite(omega2) || std::abs(omega1) == 0.0)
        throw Error(ErrorKind::InvalidLattice, "periods must be finite and non-zero");
    const double im = (omega2_ / omega1_).imag();
    if (!(std::abs(im) > 1e-12))
        throw Error(ErrorKind::InvalidLattice, "periods are linearly dependent over R");
    if (im < 0)
        std::swap(omega1_, omega2_);

    // reduced_omega2 = a*omega2 + b*omega1, reduced_omega1 = c*omega2 + d*omega1.
    std::int64_t a = 1, b = 0, c = 0, d = 1;
    auto w2 = [&] { return double(a) * omega2_ + double(b) * omega1_; };
    auto w1 = [&] { return double(c) * omega2_ + double(d) * omega1_; };
    for (int iter = 0; iter < 200; ++iter) {
        const std::int64_t n = std::llround((w2() / w1()).real());
        a -= n * c;
        b -= n * d;
        const Complex t = w2() / w1();
        if (std::norm(t) < 1.0 - 1e-14) {
            std::int64_t na = -c, nb = -d;
            c = a;
            d = b;
            a = na;
            b = nb;
            continue;
        }
        break;
    }
    reduction_ = {a, b, c, d};
    red_omega1_ = w1();
    red_omega2_ = w2();
    red_tau_ = red_omega2_ / red_omega1_;

    theta2_0_ = Complex(0.0, 0.0);
    theta3_0_ = Complex(1.0, 0.0);
    for (int n = 0; n <= kMaxSeriesTerms; ++n) {
        const Complex qa = nome_power(red_tau_, (n + 0.5) * (n + 0.5));
        theta2_0_ += 2.0 * qa;
        if (n >= 1)
            theta3_0_ += 2.0 * nome_power(red_tau_, double(n) * n);
        if (std::abs(qa) < kSeriesTail)
            break;
    }
    std::tie(g2_, g3_) = g2_g3_from_reduced(red_omega1_, red_tau_);
}

std::pair<double, double> LatticeTau::coordinates(Complex z) const noexcept
{
    const double det = omega1_.real() * omega2_.imag() - omega2_.real() * omega1_.imag();
    const double a = (z.real() * omega2_.imag() - z.imag() * omega2_.real()) / det;
    const double b = (omega1_.real() * z.imag() - omega1_.imag() * z.real()) / det;
    return {a, b};
}

TorsionCoords normalized(TorsionCoords t) { return {frac(t.a), frac(t.b)}; }

TorsionCoords operator+(const TorsionCoords& x, const TorsionCoords& y) { return normalized({x.a + y.a, x.b + y.b}); }

TorsionCoords operator-(const TorsionCoords& x) { return normalized({-x.a, -x.b}); }

TorsionCoords operator*(std::int64_t k, const TorsionCoords& x) { return normalized({x.a * k, x.b * k}); }

bool operator<(const TorsionCoords& x, const TorsionCoords& y)
{
    if (x.a != y.a)
        return x.a < y.a;
    return x.b < y.b;
}

TorusPoint reduce_coords(double a, double b, const LatticeTau& lattice)
{
    if (!std::isfinite(a) || !std::isfinite(b))
        throw Error(ErrorKind::InvalidPoint, "non-finite coordinates");
    TorusPoint p;
    p.a = wrap_unit(a);
    p.b = wrap_unit(b);
    p.z = lattice.at(p.a, p.b);
    return p;
}

TorusPoint reduce_point(Complex z, const LatticeTau& lattice)
{
    if (!finite(z))
        throw Error(ErrorKind::InvalidPoint, "non-finite point");
    const auto [a, b] = lattice.coordinates(z);
    return reduce_coords(a, b, lattice);
}

TorusPoint translate(const TorusPoint& p, const TorsionCoords& t, const LatticeTau& lattice)
{
    return reduce_coords(p.a + to_double(t.a), p.b + to_double(t.b), lattice);
}

TorusPoint add(const TorusPoint& p, const TorusPoint& q, const LatticeTau& lattice)
{
    return reduce_coords(p.a + q.a, p.b + q.b, lattice);
}

TorusPoint negate(const TorusPoint& p, const LatticeTau& lattice) { return reduce_coords(-p.a, -p.b, lattice); }

double torus_distance(const TorusPoint& p, const TorusPoint& q) noexcept
{
    double da = p.a - q.a;
    double db = p.b - q.b;
    da -= std::round(da);
    db -= std::round(db);
    return std::hypot(da, db);
}

std::vector<TorusPoint> torsion_points(const LatticeTau& lattice, int n)
{
    if (n <= 0)
        throw Error(ErrorKind::InvalidOrder, "torsion order must be positive");
    std::vector<TorusPoint> out;
    out.reserve(std::size_t(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            out.push_back(reduce_coords(double(i) / n, double(j) / n, lattice));
    return out;
}

FiniteSubgroupSpec FiniteSubgroupSpec::generated_by(std::vector<TorsionCoords> generators)
{
    if (generators.size() > 2)
        throw Error(ErrorKind::InvalidSubgroup, "a finite subgroup of E needs at most two generators");
    for (auto& g : generators) {
        if (g.a.denominator() > kMaxTorsionDenominator || g.b.denominator() > kMaxTorsionDenominator)
            throw Error(ErrorKind::InvalidSubgroup, "generator denominators exceed the torsion bound");
        g = normalized(g);
    }

    FiniteSubgroupSpec out;
    out.generators_ = generators;
    std::set<TorsionCoords> seen{TorsionCoords{}};
    std::vector<TorsionCoords> frontier{TorsionCoords{}};
    while (!frontier.empty()) {
        std::vector<TorsionCoords> next;
        for (const auto& e : frontier) {
            for (const auto& g : generators) {
                TorsionCoords s = e + g;
                if (seen.insert(s).second)
                    next.push_back(s);
            }
        }
        if (seen.size() > kMaxSubgroupOrder)
            throw Error(ErrorKind::InvalidSubgroup, "subgroup too large");
        frontier = std::move(next);
    }
    out.elements_.assign(seen.begin(), seen.end());
    out.order_ = std::int64_t(out.elements_.size());
    return out;
}

std::vector<TorusPoint> IsogenyQuotient::lifts(const TorusPoint& w) const
{
    const TorusPoint base = reduce_point(w.z, source);
    std::vector<TorusPoint> out;
    out.reserve(kernel.size());
    for (const auto& q : kernel)
        out.push_back(translate(base, q, source));
    return out;
}

IsogenyQuotient quotient_lattice(const LatticeTau& lattice, const FiniteSubgroupSpec& q0)
{
    using boost::multiprecision::cpp_int;
    std::int64_t n = 1;
    for (const auto& g : q0.generators()) {
        n = std::lcm(n, g.a.denominator());
        n = std::lcm(n, g.b.denominator());
    }
    std::vector<std::array<cpp_int, 2>> rows{{cpp_int(n), cpp_int(0)}, {cpp_int(0), cpp_int(n)}};
    for (const auto& g : q0.generators())
        rows.push_back({cpp_int(g.a.numerator() * (n / g.a.denominator())), cpp_int(g.b.numerator() * (n / g.b.denominator()))});
    const Hnf2 hnf = hnf2(rows);
    if (hnf.g == 0 || hnf.h == 0)
        throw Error(ErrorKind::InvalidSubgroup, "degenerate quotient lattice");
    const cpp_int covolume = hnf.g * hnf.h;
    const cpp_int nn = cpp_int(n) * n;
    if (nn % covolume != 0)
        throw Error(ErrorKind::InvalidSubgroup, "quotient lattice does not contain the source lattice");
    const auto index = static_cast<std::int64_t>(nn / covolume);
    if (index != q0.order())
        throw Error(ErrorKind::InvalidSubgroup, "lattice index disagrees with the enumerated subgroup order");

    const auto g = static_cast<std::int64_t>(hnf.g);
    const auto x = static_cast<std::int64_t>(hnf.x);
    const auto h = static_cast<std::int64_t>(hnf.h);
    IsogenyQuotient out{
        lattice,
        LatticeTau(double(g) / double(n) * lattice.omega1() + double(x) / double(n) * lattice.omega2(),
                   double(h) / double(n) * lattice.omega2()),
        index,
        {Rational(g, n), Rational(x, n), Rational(0), Rational(h, n)},
        q0.elements(),
    };
    return out;
}

std::pair<Complex, Complex> eisenstein_g2_g3(const LatticeTau& lattice)
{
    return g2_g3_from_reduced(lattice.reduced_omega1(), lattice.reduced_tau());
}

Homogeneous wp(const TorusPoint& p, const LatticeTau& lattice)
{
    const WpPairs w = wp_pairs(p.z, lattice);
    return normalize(w.wp_num, w.wp_den);
}

Homogeneous wp_prime(const TorusPoint& p, const LatticeTau& lattice)
{
    const WpPairs w = wp_pairs(p.z, lattice);
    return normalize(w.wpp_num, w.wpp_den);
}

WpValues wp_values(Complex z, const LatticeTau& lattice)
{
    const WpPairs w = wp_pairs(z, lattice);
    return {w.wp_num / w.wp_den, w.wpp_num / w.wpp_den};
}

std::array<TorusPoint, 2> wp_inverse(Complex x, const LatticeTau& lattice, double eps_num)
{
    if (!finite(x))
        throw Error(ErrorKind::InvalidPoint, "wp_inverse needs a finite value");
    const double scale = std::abs(lattice.reduced_omega1());
    const double tol = eps_num * (1.0 + std::abs(x));
    // Near the pole solve 1/wp(z) = 1/x instead; the grid seeds are then poor
    // and z ~ x^{-1/2} is added.
    const bool near_pole = std::abs(x) * scale * scale > 4.0;

    auto residual = [&](Complex z) {
        const Complex v = wp_values(z, lattice).wp;
        return finite(v) ? std::abs(v - x) : std::numeric_limits<double>::infinity();
    };

    std::vector<std::pair<double, Complex>> seeds;
    constexpr int kGrid = 10;
    for (int i = 0; i < kGrid; ++i) {
        for (int j = 0; j < kGrid; ++j) {
            const Complex z = lattice.at((i + 0.5) / kGrid, (j + 0.5) / kGrid);
            seeds.emplace_back(residual(z), z);
        }
    }
    if (near_pole) {
        const Complex z0 = 1.0 / std::sqrt(x);
        seeds.emplace_back(residual(z0), z0);
    }
    std::sort(seeds.begin(), seeds.end(), [](const auto& l, const auto& r) { return l.first < r.first; });

    auto newton = [&](Complex z) {
        for (int iter = 0; iter < 200; ++iter) {
            const WpValues w = wp_values(z, lattice);
            if (!finite(w.wp) || !finite(w.wp_prime))
                break;
            Complex f, fp;
            if (near_pole) {
                f = 1.0 / w.wp - 1.0 / x;
                fp = -w.wp_prime / (w.wp * w.wp);
            }
            else {
                f = w.wp - x;
                fp = w.wp_prime;
            }
            if (fp == Complex(0.0, 0.0))
                break;
            Complex step = f / fp;
            if (std::abs(step) > 0.25 * scale)
                step *= 0.25 * scale / std::abs(step);
            z -= step;
            if (std::abs(step) < 1e-16 * scale)
                break;
        }
        return z;
    };

    constexpr std::size_t kMaxStarts = 12;
    for (std::size_t s = 0; s < std::min(kMaxStarts, seeds.size()); ++s) {
        Complex z = newton(seeds[s].second);
        double res = residual(z);
        if (!(res <= tol))
            continue;
        // Branch values: Newton only converges linearly onto a double root, so
        // prefer the exact half period when it is at least as good.
        const TorusPoint reduced = reduce_point(z, lattice);
        for (const auto& [ha, hb] : {std::pair{0.5, 0.0}, std::pair{0.0, 0.5}, std::pair{0.5, 0.5}}) {
            const TorusPoint h = reduce_coords(ha, hb, lattice);
            if (torus_distance(reduced, h) < 1e-4) {
                const double hres = residual(h.z);
                if (hres <= res) {
                    z = h.z;
                    res = hres;
                }
            }
        }
        return {reduce_point(z, lattice), reduce_point(-z, lattice)};
    }
    throw Error(ErrorKind::NoConvergence, "no Newton start converged for wp(z) = x");
}

} // namespace galois_embed
