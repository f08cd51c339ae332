#include "galois_embed/group_actions.hpp"

#include <algorithm>
#include <set>

#include "galois_embed/error.hpp"

namespace galois_embed {

namespace {

// Gauss-Jordan over Q. Returns the inverse, or nothing if singular.
std::optional<std::vector<Rational>> rational_inverse(std::size_t d, const std::vector<std::int64_t>& m,
                                                      Rational* det)
{
    std::vector<Rational> a(m.begin(), m.end());
    std::vector<Rational> inv(d * d, Rational(0));
    for (std::size_t i = 0; i < d; ++i)
        inv[i * d + i] = 1;
    Rational det_acc(1);
    for (std::size_t col = 0; col < d; ++col) {
        std::size_t pivot = col;
        while (pivot < d && a[pivot * d + col] == Rational(0))
            ++pivot;
        if (pivot == d) {
            if (det)
                *det = Rational(0);
            return std::nullopt;
        }
        if (pivot != col) {
            for (std::size_t j = 0; j < d; ++j) {
                std::swap(a[pivot * d + j], a[col * d + j]);
                std::swap(inv[pivot * d + j], inv[col * d + j]);
            }
            det_acc = -det_acc;
        }
        const Rational p = a[col * d + col];
        det_acc *= p;
        for (std::size_t j = 0; j < d; ++j) {
            a[col * d + j] /= p;
            inv[col * d + j] /= p;
        }
        for (std::size_t r = 0; r < d; ++r) {
            if (r == col || a[r * d + col] == Rational(0))
                continue;
            const Rational f = a[r * d + col];
            for (std::size_t j = 0; j < d; ++j) {
                a[r * d + j] -= f * a[col * d + j];
                inv[r * d + j] -= f * inv[col * d + j];
            }
        }
    }
    if (det)
        *det = det_acc;
    return inv;
}

std::vector<TorsionCoords> mat_vec(std::size_t d, const std::vector<std::int64_t>& m, const std::vector<TorsionCoords>& t)
{
    std::vector<TorsionCoords> out(d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            if (m[i * d + j] != 0)
                out[i] = out[i] + m[i * d + j] * t[j];
    return out;
}

bool point_less(const EdPoint& p, const EdPoint& q)
{
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i].a != q[i].a)
            return p[i].a < q[i].a;
        if (p[i].b != q[i].b)
            return p[i].b < q[i].b;
    }
    return false;
}

std::vector<std::int64_t> identity_matrix(std::size_t d)
{
    std::vector<std::int64_t> m(d * d, 0);
    for (std::size_t i = 0; i < d; ++i)
        m[i * d + i] = 1;
    return m;
}

void check_dimension(int d)
{
    if (d < 1)
        throw Error(ErrorKind::InvalidOrder, "dimension d must be at least 1");
}

// Translations by each generator of Q0 in each coordinate.
void add_translation_generators(std::size_t d, const FiniteSubgroupSpec& q0, std::vector<AffineAutomorphism>& gens)
{
    for (std::size_t i = 0; i < d; ++i)
        for (const auto& g : q0.generators()) {
            if (g == TorsionCoords{})
                continue;
            std::vector<TorsionCoords> t(d);
            t[i] = g;
            gens.push_back(AffineAutomorphism::translation_by(std::move(t)));
        }
}

} // namespace

AffineAutomorphism::AffineAutomorphism(std::size_t d, std::vector<std::int64_t> matrix, std::vector<TorsionCoords> translation)
    : d_(d), m_(std::move(matrix)), t_(std::move(translation))
{
    if (d_ == 0 || m_.size() != d_ * d_ || t_.size() != d_)
        throw Error(ErrorKind::InvalidAutomorphism, "matrix and translation sizes do not match d");
    Rational det;
    rational_inverse(d_, m_, &det);
    if (det != Rational(1) && det != Rational(-1))
        throw Error(ErrorKind::InvalidAutomorphism, "matrix part is not unimodular");
    for (auto& t : t_)
        t = normalized(t);
}

AffineAutomorphism AffineAutomorphism::identity(std::size_t d)
{
    return AffineAutomorphism(d, identity_matrix(d), std::vector<TorsionCoords>(d));
}

AffineAutomorphism AffineAutomorphism::translation_by(std::vector<TorsionCoords> t)
{
    const std::size_t d = t.size();
    return AffineAutomorphism(d, identity_matrix(d), std::move(t));
}

AffineAutomorphism AffineAutomorphism::linear(std::size_t d, std::vector<std::int64_t> matrix)
{
    return AffineAutomorphism(d, std::move(matrix), std::vector<TorsionCoords>(d));
}

bool AffineAutomorphism::is_translation() const { return m_ == identity_matrix(d_); }

bool AffineAutomorphism::is_identity() const
{
    return is_translation() && std::all_of(t_.begin(), t_.end(), [](const auto& t) { return t == TorsionCoords{}; });
}

AffineAutomorphism AffineAutomorphism::compose(const AffineAutomorphism& other) const
{
    if (other.d_ != d_)
        throw Error(ErrorKind::InvalidAutomorphism, "composing automorphisms of different dimension");
    std::vector<std::int64_t> m(d_ * d_, 0);
    for (std::size_t i = 0; i < d_; ++i)
        for (std::size_t k = 0; k < d_; ++k)
            for (std::size_t j = 0; j < d_; ++j)
                m[i * d_ + j] += m_[i * d_ + k] * other.m_[k * d_ + j];
    auto t = mat_vec(d_, m_, other.t_);
    for (std::size_t i = 0; i < d_; ++i)
        t[i] = t[i] + t_[i];
    return AffineAutomorphism(d_, std::move(m), std::move(t));
}

AffineAutomorphism AffineAutomorphism::inverse() const
{
    const auto inv = rational_inverse(d_, m_, nullptr);
    std::vector<std::int64_t> m(d_ * d_);
    for (std::size_t k = 0; k < m.size(); ++k)
        m[k] = boost::rational_cast<std::int64_t>((*inv)[k]);
    auto t = mat_vec(d_, m, t_);
    for (auto& x : t)
        x = -x;
    return AffineAutomorphism(d_, std::move(m), std::move(t));
}

EdPoint AffineAutomorphism::apply(const EdPoint& p, const LatticeTau& lattice) const
{
    if (p.size() != d_)
        throw Error(ErrorKind::InvalidPoint, "point dimension does not match the automorphism");
    EdPoint out(d_);
    for (std::size_t i = 0; i < d_; ++i) {
        double a = boost::rational_cast<double>(t_[i].a);
        double b = boost::rational_cast<double>(t_[i].b);
        for (std::size_t j = 0; j < d_; ++j) {
            const auto c = double(m_[i * d_ + j]);
            a += c * p[j].a;
            b += c * p[j].b;
        }
        out[i] = reduce_coords(a, b, lattice);
    }
    return out;
}

bool operator<(const AffineAutomorphism& x, const AffineAutomorphism& y)
{
    if (x.d_ != y.d_)
        return x.d_ < y.d_;
    if (x.m_ != y.m_)
        return x.m_ < y.m_;
    return std::lexicographical_compare(x.t_.begin(), x.t_.end(), y.t_.begin(), y.t_.end());
}

FiniteActionGroup FiniteActionGroup::generate(std::size_t d, std::vector<AffineAutomorphism> generators, std::size_t order_cap)
{
    FiniteActionGroup g;
    g.d_ = d;
    for (const auto& x : generators)
        if (x.dim() != d)
            throw Error(ErrorKind::InvalidAutomorphism, "generator of the wrong dimension");
    g.generators_ = std::move(generators);

    std::set<AffineAutomorphism> seen;
    const auto id = AffineAutomorphism::identity(d);
    seen.insert(id);
    g.elements_.push_back(id);
    for (std::size_t head = 0; head < g.elements_.size(); ++head) {
        for (const auto& gen : g.generators_) {
            auto next = gen.compose(g.elements_[head]);
            if (seen.insert(next).second) {
                g.elements_.push_back(std::move(next));
                if (g.elements_.size() > order_cap)
                    throw Error(ErrorKind::OrderCapExceeded, "group closure exceeded the order cap of " + std::to_string(order_cap));
            }
        }
    }

    g.sorted_.resize(g.elements_.size());
    for (std::size_t k = 0; k < g.sorted_.size(); ++k)
        g.sorted_[k] = k;
    std::sort(g.sorted_.begin(), g.sorted_.end(), [&](std::size_t l, std::size_t r) { return g.elements_[l] < g.elements_[r]; });
    return g;
}

std::optional<std::size_t> FiniteActionGroup::index_of(const AffineAutomorphism& x) const
{
    const auto it = std::lower_bound(sorted_.begin(), sorted_.end(), x,
                                     [&](std::size_t k, const AffineAutomorphism& v) { return elements_[k] < v; });
    if (it != sorted_.end() && elements_[*it] == x)
        return *it;
    return std::nullopt;
}

std::size_t FiniteActionGroup::matrix_part_order() const
{
    std::set<std::vector<std::int64_t>> parts;
    for (const auto& e : elements_)
        parts.insert(e.matrix());
    return parts.size();
}

FiniteActionGroup build_group_A(int d, const FiniteSubgroupSpec& q0, std::size_t order_cap)
{
    check_dimension(d);
    const auto n = std::size_t(d);
    std::vector<AffineAutomorphism> gens;
    add_translation_generators(n, q0, gens);
    for (std::size_t i = 0; i < n; ++i) {
        auto m = identity_matrix(n);
        m[i * n + i] = -1;
        gens.push_back(AffineAutomorphism::linear(n, std::move(m)));
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        auto m = identity_matrix(n);
        m[i * n + i] = m[(i + 1) * n + i + 1] = 0;
        m[i * n + i + 1] = m[(i + 1) * n + i] = 1;
        gens.push_back(AffineAutomorphism::linear(n, std::move(m)));
    }
    auto g = FiniteActionGroup::generate(n, std::move(gens), order_cap);
    g.set_very_ample(q0.order() >= 2);
    return g;
}

FiniteActionGroup build_group_B(int d, const FiniteSubgroupSpec& q0, std::size_t order_cap)
{
    check_dimension(d);
    const auto n = std::size_t(d);
    std::vector<AffineAutomorphism> gens;
    add_translation_generators(n, q0, gens);
    if (n >= 2) {
        auto m = identity_matrix(n);
        m[0] = m[n + 1] = 0;
        m[1] = m[n] = 1;
        gens.push_back(AffineAutomorphism::linear(n, std::move(m)));
    }
    std::vector<std::int64_t> s2(n * n, 0);
    for (std::size_t j = 0; j < n; ++j)
        s2[j] = -1;
    for (std::size_t i = 1; i < n; ++i)
        s2[i * n + i - 1] = 1;
    gens.push_back(AffineAutomorphism::linear(n, std::move(s2)));
    auto g = FiniteActionGroup::generate(n, std::move(gens), order_cap);
    g.set_very_ample((q0.order() >= 2 && d >= 2) || (q0.order() >= 3 && d == 1));
    return g;
}

double ed_distance(const EdPoint& p, const EdPoint& q)
{
    if (p.size() != q.size())
        throw Error(ErrorKind::InvalidPoint, "points of different dimension");
    double m = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
        m = std::max(m, torus_distance(p[i], q[i]));
    return m;
}

std::vector<EdPoint> orbit(const FiniteActionGroup& group, const EdPoint& p, const LatticeTau& lattice, double eps_pt)
{
    std::vector<EdPoint> out;
    for (const auto& g : group.elements()) {
        EdPoint q = g.apply(p, lattice);
        const bool known = std::any_of(out.begin(), out.end(), [&](const EdPoint& r) { return ed_distance(q, r) < eps_pt; });
        if (!known)
            out.push_back(std::move(q));
    }
    std::sort(out.begin(), out.end(), point_less);
    return out;
}

FreeCheck is_free_at(const FiniteActionGroup& group, const EdPoint& p, const LatticeTau& lattice, double eps_pt)
{
    FreeCheck out{true, {}};
    for (std::size_t k = 0; k < group.elements().size(); ++k) {
        if (ed_distance(group.elements()[k].apply(p, lattice), p) < eps_pt) {
            out.stabilizer.push_back(k);
            if (!group.elements()[k].is_identity())
                out.free = false;
        }
    }
    return out;
}

} // namespace galois_embed
