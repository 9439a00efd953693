#pragma once

#include "rscorr/dyadic.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

namespace rscorr {

/// Dense matrix over exact rationals, row-major.
class RationalMatrix {
public:
    RationalMatrix() = default;
    RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    void append_row(const std::vector<Rational>& row) {
        if (row.size() != cols_) throw std::invalid_argument("row width mismatch");
        data_.insert(data_.end(), row.begin(), row.end());
        ++rows_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> data_;
};

struct EchelonForm {
    RationalMatrix reduced;
    std::vector<std::size_t> pivot_columns;
    std::size_t rank() const noexcept { return pivot_columns.size(); }
};

/// Gauss-Jordan elimination to reduced row echelon form, exact.
inline EchelonForm reduced_row_echelon(RationalMatrix m) {
    EchelonForm out;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t pivot = row;
        while (pivot < m.rows() && m(pivot, col).is_zero()) ++pivot;
        if (pivot == m.rows()) continue;
        if (pivot != row)
            for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m(pivot, c), m(row, c));
        const Rational inv = Rational(1) / m(row, col);
        for (std::size_t c = col; c < m.cols(); ++c) m(row, c) *= inv;
        for (std::size_t r = 0; r < m.rows(); ++r) {
            if (r == row || m(r, col).is_zero()) continue;
            const Rational f = m(r, col);
            for (std::size_t c = col; c < m.cols(); ++c) m(r, c) -= f * m(row, c);
        }
        out.pivot_columns.push_back(col);
        ++row;
    }
    out.reduced = std::move(m);
    return out;
}

/// Dimension of the solution space of A x = 0.
inline std::size_t nullity(const RationalMatrix& a) {
    return a.cols() - reduced_row_echelon(a).rank();
}

/// Solves A x = b. Returns nullopt when inconsistent; throws when the
/// solution is not unique.
inline std::optional<std::vector<Rational>> solve_unique(const RationalMatrix& a, const std::vector<Rational>& b) {
    if (b.size() != a.rows()) throw std::invalid_argument("rhs size mismatch");
    RationalMatrix aug(a.rows(), a.cols() + 1);
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < a.cols(); ++c) aug(r, c) = a(r, c);
        aug(r, a.cols()) = b[r];
    }
    const EchelonForm ef = reduced_row_echelon(std::move(aug));
    if (!ef.pivot_columns.empty() && ef.pivot_columns.back() == a.cols()) return std::nullopt;
    if (ef.rank() != a.cols()) throw std::runtime_error("linear system is underdetermined");
    std::vector<Rational> x(a.cols());
    for (std::size_t i = 0; i < ef.rank(); ++i) x[ef.pivot_columns[i]] = ef.reduced(i, a.cols());
    return x;
}

}  // namespace rscorr
