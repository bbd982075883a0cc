#pragma once

#include <string>
#include <vector>

#include "chainmail/base.hpp"

namespace chainmail {

struct Presentation;

// Dense exact integer matrix.  Entries are arbitrary precision: SNF
// intermediates overflow fixed-width integers even for small inputs.
class IntMatrix {
public:
    IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

    static IntMatrix identity(std::size_t n);
    static IntMatrix from_rows(const std::vector<std::vector<long long>>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Int& at(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
    const Int& at(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

    IntMatrix multiply(const IntMatrix& other) const;
    Int determinant() const; // square only, fraction-free elimination

    bool operator==(const IntMatrix& o) const
    {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }

private:
    std::size_t rows_, cols_;
    std::vector<Int> a_;
};

struct SmithResult {
    IntMatrix u, s, v; // u * a * v == s
    std::vector<Int> diagonal() const;
    std::size_t rank() const;
};

// U*A*V = S with U, V unimodular and S diagonal with d1 | d2 | ... >= 0.
// Pivot: minimal nonzero absolute value, ties by lowest row then column.
SmithResult smith_normal_form(const IntMatrix& a);

struct H1Invariants {
    std::size_t betti;
    std::vector<Int> torsion; // diagonal factors > 1
    bool finite;
    Int order; // meaningful when finite

    std::string str() const;
};

H1Invariants h1_invariants(const Presentation& p);

} // namespace chainmail
