#pragma once

#include "modlie/rational.hpp"

#include <map>
#include <utility>
#include <vector>

namespace modlie {

/// Sparse exact vector. Only nonzero entries are stored.
class QVector {
public:
    QVector() = default;
    explicit QVector(int length) : length_(length) {}

    int length() const { return length_; }

    Rational get(int i) const {
        auto it = entries_.find(i);
        return it == entries_.end() ? Rational() : it->second;
    }

    void set(int i, const Rational& v) {
        check_index(i);
        if (v.is_zero())
            entries_.erase(i);
        else
            entries_[i] = v;
    }

    void add(int i, const Rational& v) { set(i, get(i) + v); }

    bool is_zero() const { return entries_.empty(); }
    const std::map<int, Rational>& entries() const { return entries_; }

    friend bool operator==(const QVector& a, const QVector& b) {
        return a.length_ == b.length_ && a.entries_ == b.entries_;
    }

private:
    void check_index(int i) const {
        if (i < 0 || i >= length_)
            throw std::out_of_range("QVector: index out of range");
    }

    int length_ = 0;
    std::map<int, Rational> entries_;
};

/// Sparse exact matrix over the rationals, row-major storage.
class QMatrix {
public:
    QMatrix() = default;
    QMatrix(int rows, int cols) : rows_(rows), cols_(cols) {}

    static QMatrix identity(int n) {
        QMatrix m(n, n);
        for (int i = 0; i < n; ++i)
            m.set(i, i, 1);
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Rational get(int r, int c) const {
        auto rit = rows_data_.find(r);
        if (rit == rows_data_.end())
            return Rational();
        auto cit = rit->second.find(c);
        return cit == rit->second.end() ? Rational() : cit->second;
    }

    void set(int r, int c, const Rational& v) {
        check_index(r, c);
        if (v.is_zero()) {
            auto rit = rows_data_.find(r);
            if (rit != rows_data_.end()) {
                rit->second.erase(c);
                if (rit->second.empty())
                    rows_data_.erase(rit);
            }
        } else {
            rows_data_[r][c] = v;
        }
    }

    QVector apply(const QVector& v) const {
        if (v.length() != cols_)
            throw std::invalid_argument("QMatrix::apply: length mismatch");
        QVector out(rows_);
        for (const auto& [r, row] : rows_data_) {
            Rational acc;
            for (const auto& [c, val] : row)
                acc += val * v.get(c);
            out.set(r, acc);
        }
        return out;
    }

    const std::map<int, std::map<int, Rational>>& row_data() const { return rows_data_; }

    friend bool operator==(const QMatrix& a, const QMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.rows_data_ == b.rows_data_;
    }

private:
    void check_index(int r, int c) const {
        if (r < 0 || r >= rows_ || c < 0 || c >= cols_)
            throw std::out_of_range("QMatrix: index out of range");
    }

    int rows_ = 0;
    int cols_ = 0;
    std::map<int, std::map<int, Rational>> rows_data_;
};

struct RrefResult {
    QMatrix matrix;
    std::vector<int> pivots; // strictly increasing pivot column indices
};

/// Reduced row echelon form by exact Gaussian elimination. Pivot choice
/// is the first row (in row order) with a nonzero entry in the current
/// column, so the output is deterministic.
inline RrefResult rref(const QMatrix& m) {
    int rows = m.rows(), cols = m.cols();
    // densify rows only while they participate in elimination
    std::vector<std::map<int, Rational>> work(rows);
    for (const auto& [r, row] : m.row_data())
        work[r] = row;

    RrefResult out;
    out.matrix = QMatrix(rows, cols);
    int pivot_row = 0;
    for (int c = 0; c < cols && pivot_row < rows; ++c) {
        int found = -1;
        for (int r = pivot_row; r < rows; ++r) {
            auto it = work[r].find(c);
            if (it != work[r].end() && !it->second.is_zero()) {
                found = r;
                break;
            }
        }
        if (found < 0)
            continue;
        std::swap(work[pivot_row], work[found]);

        Rational inv = Rational(1) / work[pivot_row][c];
        for (auto& [cc, v] : work[pivot_row])
            v *= inv;

        for (int r = 0; r < rows; ++r) {
            if (r == pivot_row)
                continue;
            auto it = work[r].find(c);
            if (it == work[r].end() || it->second.is_zero())
                continue;
            Rational f = it->second;
            for (const auto& [cc, v] : work[pivot_row]) {
                auto jt = work[r].find(cc);
                Rational nv = (jt == work[r].end() ? Rational() : jt->second) - f * v;
                if (nv.is_zero())
                    work[r].erase(cc);
                else
                    work[r][cc] = nv;
            }
        }
        out.pivots.push_back(c);
        ++pivot_row;
    }
    for (int r = 0; r < rows; ++r)
        for (const auto& [c, v] : work[r])
            out.matrix.set(r, c, v);
    return out;
}

/// Canonical nullspace basis read off the RREF: one vector per free
/// column, with that free coordinate set to 1.
inline std::vector<QVector> kernel_basis(const QMatrix& m) {
    RrefResult rr = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (int p : rr.pivots)
        is_pivot[p] = true;

    std::vector<QVector> basis;
    for (int f = 0; f < m.cols(); ++f) {
        if (is_pivot[f])
            continue;
        QVector v(m.cols());
        v.set(f, 1);
        for (size_t i = 0; i < rr.pivots.size(); ++i) {
            Rational entry = rr.matrix.get(static_cast<int>(i), f);
            if (!entry.is_zero())
                v.set(rr.pivots[i], -entry);
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

inline int rank(const QMatrix& m) { return static_cast<int>(rref(m).pivots.size()); }

} // namespace modlie
