#pragma once

// Exact integer-matrix model of line bundles on E^d when End(E) = Z: a bundle
// is a symmetric integer matrix S, chi = det S and (D^d) = d! det S.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace galois_embed {

class FiniteSubgroupSpec;

using Integer = boost::multiprecision::cpp_int;

class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    IntMatrix(std::initializer_list<std::initializer_list<long long>> rows);

    static IntMatrix identity(std::size_t n);
    static IntMatrix all_ones(std::size_t n);
    /// Throws InvalidMatrix on ragged input.
    static IntMatrix from_rows(const std::vector<std::vector<Integer>>& rows);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    Integer& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Integer& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    IntMatrix transpose() const;
    bool is_square() const noexcept { return rows_ == cols_; }
    bool is_symmetric() const;
    std::string to_string() const;

    friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
    friend IntMatrix operator+(const IntMatrix& a, const IntMatrix& b);
    friend IntMatrix operator*(const Integer& k, const IntMatrix& a);
    friend bool operator==(const IntMatrix& a, const IntMatrix& b) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Integer> data_;
};

/// Fraction-free (Bareiss) determinant.
Integer determinant(const IntMatrix& m);

/// Diagonal of the Smith normal form: the non-zero invariant factors
/// d_1 | d_2 | ..., all positive. Their count is the rank.
std::vector<Integer> smith_invariants(const IntMatrix& m);

class PolarizationMatrix {
public:
    /// Throws InvalidMatrix unless square and exactly symmetric.
    explicit PolarizationMatrix(IntMatrix s);

    const IntMatrix& matrix() const noexcept { return s_; }
    std::size_t dim() const noexcept { return s_.rows(); }
    /// All leading principal minors positive.
    bool is_positive_definite() const;

private:
    IntMatrix s_;
};

/// Inclusion of a saturated rank-r sublattice (an abelian subvariety) as a d x r matrix.
class SublatticeInclusion {
public:
    /// Throws InvalidMatrix on rank deficiency and NotSaturated when the
    /// invariant factors are not all 1.
    explicit SublatticeInclusion(IntMatrix inclusion);

    const IntMatrix& matrix() const noexcept { return i_; }
    std::size_t ambient_dim() const noexcept { return i_.rows(); }
    std::size_t rank() const noexcept { return i_.cols(); }

private:
    IntMatrix i_;
};

Integer chi(const PolarizationMatrix& s);
Integer self_intersection(const PolarizationMatrix& s);

/// (S_1^{a_1} ... S_k^{a_k}) = (prod a_i!) * [t^a] det(sum t_i S_i).
/// Throws ExponentMismatch unless the exponents are non-negative and sum to d.
Integer mixed_intersection(std::span<const std::pair<PolarizationMatrix, int>> terms);

struct NormEndomorphism {
    IntMatrix matrix;
    Integer exponent;
};

/// N_Z = e_Z * I (I^T L I)^{-1} I^T L with e_Z the exponent of coker(I^T L I).
NormEndomorphism norm_endomorphism(const PolarizationMatrix& l, const SublatticeInclusion& z);

/// alpha^T S alpha: the pullback of S along the endomorphism alpha.
PolarizationMatrix pullback(const IntMatrix& alpha, const PolarizationMatrix& s);

/// Degree |Q0|^d of the isogeny E^d -> (E/Q0)^d.
Integer isogeny_degree_factor(const FiniteSubgroupSpec& q0, int d);

} // namespace galois_embed
