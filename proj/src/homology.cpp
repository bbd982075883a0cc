#include "chainmail/homology.hpp"

#include <sstream>

#include "chainmail/presentation.hpp"

namespace chainmail {

IntMatrix IntMatrix::identity(std::size_t n)
{
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m.at(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<long long>>& rows)
{
    std::size_t nc = rows.empty() ? 0 : rows[0].size();
    IntMatrix m(rows.size(), nc);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != nc)
            throw Error("ragged matrix rows");
        for (std::size_t c = 0; c < nc; ++c)
            m.at(r, c) = rows[r][c];
    }
    return m;
}

IntMatrix IntMatrix::multiply(const IntMatrix& other) const
{
    if (cols_ != other.rows_)
        throw Error("matrix dimension mismatch");
    IntMatrix out(rows_, other.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const Int& x = at(i, k);
            if (x == 0)
                continue;
            for (std::size_t j = 0; j < other.cols_; ++j)
                out.at(i, j) += x * other.at(k, j);
        }
    return out;
}

Int IntMatrix::determinant() const
{
    if (rows_ != cols_)
        throw Error("determinant of non-square matrix");
    std::size_t n = rows_;
    if (n == 0)
        return 1;
    // Bareiss fraction-free elimination
    IntMatrix m = *this;
    Int prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m.at(k, k) == 0) {
            std::size_t swap_row = k + 1;
            while (swap_row < n && m.at(swap_row, k) == 0)
                ++swap_row;
            if (swap_row == n)
                return 0;
            for (std::size_t j = 0; j < n; ++j)
                std::swap(m.at(k, j), m.at(swap_row, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                m.at(i, j) = (m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j)) / prev;
        prev = m.at(k, k);
    }
    return sign > 0 ? m.at(n - 1, n - 1) : -m.at(n - 1, n - 1);
}

std::vector<Int> SmithResult::diagonal() const
{
    std::vector<Int> d;
    for (std::size_t i = 0; i < std::min(s.rows(), s.cols()); ++i)
        d.push_back(s.at(i, i));
    return d;
}

std::size_t SmithResult::rank() const
{
    std::size_t r = 0;
    for (const Int& d : diagonal())
        if (d != 0)
            ++r;
    return r;
}

namespace {

struct Worker {
    IntMatrix a, u, v;

    explicit Worker(const IntMatrix& m)
        : a(m), u(IntMatrix::identity(m.rows())), v(IntMatrix::identity(m.cols()))
    {
    }

    void row_swap(std::size_t i, std::size_t j)
    {
        for (std::size_t c = 0; c < a.cols(); ++c)
            std::swap(a.at(i, c), a.at(j, c));
        for (std::size_t c = 0; c < u.cols(); ++c)
            std::swap(u.at(i, c), u.at(j, c));
    }
    void col_swap(std::size_t i, std::size_t j)
    {
        for (std::size_t r = 0; r < a.rows(); ++r)
            std::swap(a.at(r, i), a.at(r, j));
        for (std::size_t r = 0; r < v.rows(); ++r)
            std::swap(v.at(r, i), v.at(r, j));
    }
    void row_add(std::size_t dst, std::size_t src, const Int& f) // row dst += f * row src
    {
        for (std::size_t c = 0; c < a.cols(); ++c)
            a.at(dst, c) += f * a.at(src, c);
        for (std::size_t c = 0; c < u.cols(); ++c)
            u.at(dst, c) += f * u.at(src, c);
    }
    void col_add(std::size_t dst, std::size_t src, const Int& f)
    {
        for (std::size_t r = 0; r < a.rows(); ++r)
            a.at(r, dst) += f * a.at(r, src);
        for (std::size_t r = 0; r < v.rows(); ++r)
            v.at(r, dst) += f * v.at(r, src);
    }
    void row_negate(std::size_t i)
    {
        for (std::size_t c = 0; c < a.cols(); ++c)
            a.at(i, c) = -a.at(i, c);
        for (std::size_t c = 0; c < u.cols(); ++c)
            u.at(i, c) = -u.at(i, c);
    }

    // diagonalize the block with row, column >= from; each finished pivot
    // divides everything below and to its right, so the diagonal comes out
    // in divisibility order
    void diagonalize(std::size_t from)
    {
        std::size_t n = std::min(a.rows(), a.cols());
        for (std::size_t t = from; t < n; ++t) {
            for (;;) {
                // pivot: minimal nonzero |entry| in the remaining block,
                // lowest row then column on ties.  Re-picking it every pass
                // keeps quotients (and thus entry growth) small.
                std::size_t pr = t, pc = t;
                Int best = 0;
                for (std::size_t i = t; i < a.rows(); ++i)
                    for (std::size_t j = t; j < a.cols(); ++j) {
                        Int e = abs(a.at(i, j));
                        if (e != 0 && (best == 0 || e < best)) {
                            best = e;
                            pr = i;
                            pc = j;
                        }
                    }
                if (best == 0)
                    return; // remaining block is zero
                if (pr != t)
                    row_swap(t, pr);
                if (pc != t)
                    col_swap(t, pc);
                if (a.at(t, t) < 0)
                    row_negate(t);

                bool clean = true;
                for (std::size_t i = t + 1; i < a.rows(); ++i) {
                    if (a.at(i, t) == 0)
                        continue;
                    Int q = a.at(i, t) / a.at(t, t);
                    if (q != 0)
                        row_add(i, t, -q);
                    if (a.at(i, t) != 0)
                        clean = false; // remainder becomes the next pivot
                }
                for (std::size_t j = t + 1; j < a.cols(); ++j) {
                    if (a.at(t, j) == 0)
                        continue;
                    Int q = a.at(t, j) / a.at(t, t);
                    if (q != 0)
                        col_add(j, t, -q);
                    if (a.at(t, j) != 0)
                        clean = false;
                }
                if (!clean)
                    continue;

                // row and column t are clear; fold any block entry the pivot
                // does not divide into row t, which drives the pivot to the
                // gcd of the whole block
                bool fixed = false;
                for (std::size_t i = t + 1; i < a.rows() && !fixed; ++i)
                    for (std::size_t j = t + 1; j < a.cols() && !fixed; ++j)
                        if (a.at(i, j) % a.at(t, t) != 0) {
                            row_add(t, i, 1);
                            fixed = true;
                        }
                if (!fixed)
                    break;
            }
        }
    }
};

} // namespace

SmithResult smith_normal_form(const IntMatrix& m)
{
    Worker w(m);
    w.diagonalize(0);

    // enforce the divisibility chain d_i | d_{i+1}: fold the violator into
    // column i and rediagonalize from i, which replaces d_i by gcd(d_i, d_j)
    std::size_t n = std::min(m.rows(), m.cols());
    for (;;) {
        std::size_t bad = n;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const Int &d1 = w.a.at(i, i), &d2 = w.a.at(i + 1, i + 1);
            if (d1 != 0 && d2 % d1 != 0) {
                bad = i;
                break;
            }
        }
        if (bad == n)
            break;
        w.col_add(bad, bad + 1, 1);
        w.diagonalize(bad);
    }
    return SmithResult{std::move(w.u), std::move(w.a), std::move(w.v)};
}

std::string H1Invariants::str() const
{
    std::ostringstream os;
    os << "betti " << betti << "; torsion";
    if (torsion.empty())
        os << " none";
    for (const Int& t : torsion)
        os << " " << t;
    os << "; order ";
    if (finite)
        os << order;
    else
        os << "infinite";
    return os.str();
}

H1Invariants h1_invariants(const Presentation& p)
{
    IntMatrix a = IntMatrix::from_rows(abelianization_rows(p));
    if (a.cols() == 0 && !p.generator_names.empty())
        a = IntMatrix(a.rows(), p.generator_names.size());
    SmithResult snf = smith_normal_form(a);
    H1Invariants out;
    out.betti = p.generator_names.size() - snf.rank();
    for (const Int& d : snf.diagonal())
        if (d > 1)
            out.torsion.push_back(d);
    out.finite = out.betti == 0;
    out.order = 1;
    for (const Int& t : out.torsion)
        out.order *= t;
    return out;
}

} // namespace chainmail
