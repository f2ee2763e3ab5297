#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace isk {

/// Dense row-major matrix for small symbolic and numeric work.
template <class S>
class Mat {
  public:
    Mat() : rows_(0), cols_(0) {}
    Mat(int rows, int cols, const S& fill = S(0))
        : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, fill) {}

    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = S(1);
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    S& operator()(int r, int c) { return data_[static_cast<size_t>(r) * cols_ + c]; }
    const S& operator()(int r, int c) const { return data_[static_cast<size_t>(r) * cols_ + c]; }

    friend Mat operator*(const Mat& a, const Mat& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("Mat: size mismatch in product");
        Mat r(a.rows_, b.cols_);
        for (int i = 0; i < a.rows_; ++i)
            for (int k = 0; k < a.cols_; ++k) {
                const S& aik = a(i, k);
                for (int j = 0; j < b.cols_; ++j) r(i, j) += aik * b(k, j);
            }
        return r;
    }

    std::vector<S> apply(const std::vector<S>& v) const {
        if (static_cast<int>(v.size()) != cols_) throw std::invalid_argument("Mat: vector size mismatch");
        std::vector<S> r(rows_, S(0));
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r[i] += (*this)(i, j) * v[j];
        return r;
    }

    Mat transposed() const {
        Mat r(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }

    friend bool operator==(const Mat& a, const Mat& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

  private:
    int rows_, cols_;
    std::vector<S> data_;
};

// Ring constants derived from an exemplar element, so symbolic scalar types
// (which carry a variable list) can participate in generic algorithms.
template <class S>
S ring_zero(const S&) {
    return S(0);
}
template <class S>
S ring_one(const S&) {
    return S(1);
}

inline constexpr int kSymDetSizeBound = 12;

/**
 * Exact determinant over an arbitrary commutative ring, by expansion along
 * rows with memoisation on column subsets (no division needed). Work is
 * n * 2^(n-1) ring multiplications, fine for the sizes used here.
 */
template <class S>
S sym_det(const Mat<S>& m, int size_bound = kSymDetSizeBound) {
    if (m.rows() != m.cols()) throw std::invalid_argument("sym_det: matrix not square");
    const int n = m.rows();
    if (n > size_bound) throw std::length_error("sym_det: size " + std::to_string(n) +
                                                " exceeds bound " + std::to_string(size_bound));
    if (n == 0) throw std::invalid_argument("sym_det: empty matrix");
    const S zero = ring_zero(m(0, 0));

    // memo[mask] = determinant of the submatrix with rows (n-popcount)..(n-1)
    // and columns in mask. Filled in increasing popcount order.
    const std::uint32_t full = (1u << n) - 1u;
    std::vector<S> memo(full + 1u, zero);
    memo[0] = ring_one(m(0, 0));

    for (std::uint32_t mask = 1; mask <= full; ++mask) {
        int k = __builtin_popcount(mask);
        int row = n - k;
        S acc = zero;
        int sign = 1;
        for (int j = 0; j < n; ++j) {
            if (!(mask & (1u << j))) continue;
            const S& a = m(row, j);
            if (!scalar_is_zero(a)) {
                S sub = memo[mask & ~(1u << j)];
                if (sign > 0)
                    acc += a * sub;
                else
                    acc -= a * sub;
            }
            sign = -sign;
        }
        memo[mask] = acc;
    }
    return memo[full];
}

/// Gaussian-elimination inverse for field scalars (Rational, complex, double).
template <class S>
Mat<S> gauss_inverse(const Mat<S>& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("gauss_inverse: not square");
    const int n = m.rows();
    Mat<S> a = m, inv = Mat<S>::identity(n);
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        for (int r = col; r < n; ++r)
            if (!scalar_is_zero(a(r, col))) {
                pivot = r;
                break;
            }
        if (pivot < 0) throw std::domain_error("gauss_inverse: singular matrix");
        if (pivot != col)
            for (int j = 0; j < n; ++j) {
                std::swap(a(pivot, j), a(col, j));
                std::swap(inv(pivot, j), inv(col, j));
            }
        S d = a(col, col);
        for (int j = 0; j < n; ++j) {
            a(col, j) = a(col, j) / d;
            inv(col, j) = inv(col, j) / d;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col || scalar_is_zero(a(r, col))) continue;
            S f = a(r, col);
            for (int j = 0; j < n; ++j) {
                a(r, j) -= f * a(col, j);
                inv(r, j) -= f * inv(col, j);
            }
        }
    }
    return inv;
}

/// Adjugate over a ring: adj(m)(i,j) = (-1)^{i+j} det(minor_{j,i}).
template <class S>
Mat<S> adjugate(const Mat<S>& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("adjugate: not square");
    const int n = m.rows();
    Mat<S> adj(n, n, ring_zero(m(0, 0)));
    if (n == 1) {
        adj(0, 0) = ring_one(m(0, 0));
        return adj;
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Mat<S> minor(n - 1, n - 1);
            for (int r = 0, rr = 0; r < n; ++r) {
                if (r == j) continue;
                for (int c = 0, cc = 0; c < n; ++c) {
                    if (c == i) continue;
                    minor(rr, cc) = m(r, c);
                    ++cc;
                }
                ++rr;
            }
            S d = sym_det(minor);
            adj(i, j) = ((i + j) % 2 == 0) ? d : ring_zero(d) - d;
        }
    return adj;
}

}  // namespace isk
