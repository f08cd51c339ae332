#include "galois_embed/polarization.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "galois_embed/elliptic_core.hpp"
#include "galois_embed/error.hpp"

namespace galois_embed {

namespace {

Integer abs_value(const Integer& x) { return x < 0 ? Integer(-x) : x; }

Integer factorial(int n)
{
    Integer f = 1;
    for (int k = 2; k <= n; ++k)
        f *= k;
    return f;
}

IntMatrix minor_without(const IntMatrix& m, std::size_t row, std::size_t col)
{
    IntMatrix out(m.rows() - 1, m.cols() - 1);
    for (std::size_t i = 0, oi = 0; i < m.rows(); ++i) {
        if (i == row)
            continue;
        for (std::size_t j = 0, oj = 0; j < m.cols(); ++j) {
            if (j == col)
                continue;
            out(oi, oj++) = m(i, j);
        }
        ++oi;
    }
    return out;
}

IntMatrix adjugate(const IntMatrix& m)
{
    const std::size_t n = m.rows();
    IntMatrix adj(n, n);
    if (n == 1) {
        adj(0, 0) = 1;
        return adj;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Integer c = determinant(minor_without(m, i, j));
            adj(j, i) = ((i + j) % 2 == 0) ? c : Integer(-c);
        }
    return adj;
}

} // namespace

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long long>> rows)
    : rows_(rows.size()), cols_(rows.size() == 0 ? 0 : rows.begin()->size())
{
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_)
            throw Error(ErrorKind::InvalidMatrix, "ragged matrix literal");
        for (long long v : r)
            data_.emplace_back(v);
    }
}

IntMatrix IntMatrix::identity(std::size_t n)
{
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::all_ones(std::size_t n)
{
    IntMatrix m(n, n);
    for (auto& v : m.data_)
        v = 1;
    return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<Integer>>& rows)
{
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    IntMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols)
            throw Error(ErrorKind::InvalidMatrix, "rows have different lengths");
        for (std::size_t j = 0; j < cols; ++j)
            m(i, j) = rows[i][j];
    }
    return m;
}

IntMatrix IntMatrix::transpose() const
{
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            t(j, i) = (*this)(i, j);
    return t;
}

bool IntMatrix::is_symmetric() const
{
    if (!is_square())
        return false;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = i + 1; j < cols_; ++j)
            if ((*this)(i, j) != (*this)(j, i))
                return false;
    return true;
}

std::string IntMatrix::to_string() const
{
    std::ostringstream os;
    for (std::size_t i = 0; i < rows_; ++i) {
        if (i)
            os << ';';
        for (std::size_t j = 0; j < cols_; ++j)
            os << (j ? " " : "") << (*this)(i, j);
    }
    return os.str();
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b)
{
    if (a.cols_ != b.rows_)
        throw Error(ErrorKind::InvalidMatrix, "shape mismatch in product");
    IntMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
        for (std::size_t k = 0; k < a.cols_; ++k) {
            const Integer& aik = a(i, k);
            if (aik == 0)
                continue;
            for (std::size_t j = 0; j < b.cols_; ++j)
                c(i, j) += aik * b(k, j);
        }
    return c;
}

IntMatrix operator+(const IntMatrix& a, const IntMatrix& b)
{
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
        throw Error(ErrorKind::InvalidMatrix, "shape mismatch in sum");
    IntMatrix c = a;
    for (std::size_t k = 0; k < c.data_.size(); ++k)
        c.data_[k] += b.data_[k];
    return c;
}

IntMatrix operator*(const Integer& k, const IntMatrix& a)
{
    IntMatrix c = a;
    for (auto& v : c.data_)
        v *= k;
    return c;
}

Integer determinant(const IntMatrix& m)
{
    if (!m.is_square())
        throw Error(ErrorKind::InvalidMatrix, "determinant of a non-square matrix");
    const std::size_t n = m.rows();
    if (n == 0)
        return 1;
    IntMatrix a = m;
    Integer prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k < n; ++k) {
        if (a(k, k) == 0) {
            std::size_t pivot = k + 1;
            while (pivot < n && a(pivot, k) == 0)
                ++pivot;
            if (pivot == n)
                return 0;
            for (std::size_t j = 0; j < n; ++j)
                std::swap(a(k, j), a(pivot, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j)
                a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
            a(i, k) = 0;
        }
        prev = a(k, k);
    }
    return sign * a(n - 1, n - 1);
}

std::vector<Integer> smith_invariants(const IntMatrix& m)
{
    IntMatrix a = m;
    const std::size_t rows = a.rows(), cols = a.cols();
    std::vector<Integer> diag;

    auto swap_rows = [&](std::size_t r1, std::size_t r2) {
        for (std::size_t j = 0; j < cols; ++j)
            std::swap(a(r1, j), a(r2, j));
    };
    auto swap_cols = [&](std::size_t c1, std::size_t c2) {
        for (std::size_t i = 0; i < rows; ++i)
            std::swap(a(i, c1), a(i, c2));
    };

    for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
        for (;;) {
            // Smallest non-zero entry of the trailing block becomes the pivot.
            std::size_t pi = rows, pj = cols;
            for (std::size_t i = t; i < rows; ++i)
                for (std::size_t j = t; j < cols; ++j)
                    if (a(i, j) != 0 && (pi == rows || abs_value(a(i, j)) < abs_value(a(pi, pj)))) {
                        pi = i;
                        pj = j;
                    }
            if (pi == rows)
                return diag;
            swap_rows(t, pi);
            swap_cols(t, pj);

            bool clean = true;
            for (std::size_t i = t + 1; i < rows; ++i) {
                const Integer q = a(i, t) / a(t, t);
                for (std::size_t j = t; j < cols; ++j)
                    a(i, j) -= q * a(t, j);
                clean = clean && a(i, t) == 0;
            }
            for (std::size_t j = t + 1; j < cols; ++j) {
                const Integer q = a(t, j) / a(t, t);
                for (std::size_t i = t; i < rows; ++i)
                    a(i, j) -= q * a(i, t);
                clean = clean && a(t, j) == 0;
            }
            if (!clean)
                continue;

            // Divisibility d_t | every remaining entry.
            std::size_t bad = rows;
            for (std::size_t i = t + 1; i < rows && bad == rows; ++i)
                for (std::size_t j = t + 1; j < cols; ++j)
                    if (a(i, j) % a(t, t) != 0) {
                        bad = i;
                        break;
                    }
            if (bad == rows)
                break;
            for (std::size_t j = t; j < cols; ++j)
                a(t, j) += a(bad, j);
        }
        diag.push_back(abs_value(a(t, t)));
    }
    return diag;
}

PolarizationMatrix::PolarizationMatrix(IntMatrix s) : s_(std::move(s))
{
    if (!s_.is_square() || s_.rows() == 0)
        throw Error(ErrorKind::InvalidMatrix, "polarization matrix must be square and non-empty");
    if (!s_.is_symmetric())
        throw Error(ErrorKind::InvalidMatrix, "polarization matrix must be symmetric");
}

bool PolarizationMatrix::is_positive_definite() const
{
    const std::size_t n = dim();
    for (std::size_t k = 1; k <= n; ++k) {
        IntMatrix lead(k, k);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j)
                lead(i, j) = s_(i, j);
        if (determinant(lead) <= 0)
            return false;
    }
    return true;
}

SublatticeInclusion::SublatticeInclusion(IntMatrix inclusion) : i_(std::move(inclusion))
{
    if (i_.cols() == 0 || i_.cols() > i_.rows())
        throw Error(ErrorKind::InvalidMatrix, "inclusion must be d x r with 1 <= r <= d");
    const auto inv = smith_invariants(i_);
    if (inv.size() != i_.cols())
        throw Error(ErrorKind::InvalidMatrix, "inclusion must have full column rank");
    for (const auto& f : inv)
        if (f != 1)
            throw Error(ErrorKind::NotSaturated, "sublattice is not saturated (invariant factor " + f.str() + ")");
}

Integer chi(const PolarizationMatrix& s) { return determinant(s.matrix()); }

Integer self_intersection(const PolarizationMatrix& s)
{
    return factorial(int(s.dim())) * chi(s);
}

Integer mixed_intersection(std::span<const std::pair<PolarizationMatrix, int>> terms)
{
    if (terms.empty())
        throw Error(ErrorKind::ExponentMismatch, "no terms");
    const std::size_t d = terms.front().first.dim();
    int total = 0;
    for (const auto& [s, a] : terms) {
        if (s.dim() != d)
            throw Error(ErrorKind::ExponentMismatch, "matrices of different dimensions");
        if (a < 0)
            throw Error(ErrorKind::ExponentMismatch, "negative exponent");
        total += a;
    }
    if (total != int(d))
        throw Error(ErrorKind::ExponentMismatch, "exponents must sum to the dimension");

    // det is multilinear in columns: the coefficient of prod t_i^{a_i} is the
    // sum over column assignments using S_i exactly a_i times.
    std::vector<int> remaining;
    for (const auto& term : terms)
        remaining.push_back(term.second);
    IntMatrix mixed(d, d);
    Integer coefficient = 0;
    std::function<void(std::size_t)> assign = [&](std::size_t col) {
        if (col == d) {
            coefficient += determinant(mixed);
            return;
        }
        for (std::size_t k = 0; k < terms.size(); ++k) {
            if (remaining[k] == 0)
                continue;
            --remaining[k];
            for (std::size_t i = 0; i < d; ++i)
                mixed(i, col) = terms[k].first.matrix()(i, col);
            assign(col + 1);
            ++remaining[k];
        }
    };
    assign(0);

    Integer weight = 1;
    for (const auto& term : terms)
        weight *= factorial(term.second);
    return weight * coefficient;
}

NormEndomorphism norm_endomorphism(const PolarizationMatrix& l, const SublatticeInclusion& z)
{
    if (l.dim() != z.ambient_dim())
        throw Error(ErrorKind::InvalidMatrix, "polarization and inclusion dimensions differ");
    if (!l.is_positive_definite())
        throw Error(ErrorKind::InvalidMatrix, "norm endomorphism needs a positive definite polarization");

    const IntMatrix& incl = z.matrix();
    const IntMatrix it_l = incl.transpose() * l.matrix();
    const IntMatrix restricted = it_l * incl;
    const auto invariants = smith_invariants(restricted);
    const Integer exponent = invariants.back();
    const Integer det = determinant(restricted);

    // e * I * adj(phi) * I^T L / det(phi), exactly.
    IntMatrix numerator = exponent * (incl * adjugate(restricted) * it_l);
    for (std::size_t i = 0; i < numerator.rows(); ++i)
        for (std::size_t j = 0; j < numerator.cols(); ++j) {
            if (numerator(i, j) % det != 0)
                throw Error(ErrorKind::NonIntegralNorm, "norm endomorphism is not integral");
            numerator(i, j) /= det;
        }
    return {numerator, exponent};
}

PolarizationMatrix pullback(const IntMatrix& alpha, const PolarizationMatrix& s)
{
    if (!alpha.is_square() || alpha.rows() != s.dim())
        throw Error(ErrorKind::InvalidMatrix, "pullback endomorphism has the wrong shape");
    return PolarizationMatrix(alpha.transpose() * s.matrix() * alpha);
}

Integer isogeny_degree_factor(const FiniteSubgroupSpec& q0, int d)
{
    Integer f = 1;
    for (int k = 0; k < d; ++k)
        f *= q0.order();
    return f;
}

} // namespace galois_embed
