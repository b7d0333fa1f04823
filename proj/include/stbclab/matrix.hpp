#pragma once

#include <cassert>
#include <complex>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace stbclab {

using cplx = std::complex<double>;

// Dense row-major complex matrix. Everything in this library is tiny
// (codewords are at most 4x4, channels N x N_r), so no effort is spent
// on blocking or vectorization.
class CMat {
  public:
    CMat() : rows_(0), cols_(0) {}
    CMat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {}
    CMat(int rows, int cols, std::initializer_list<cplx> entries)
        : rows_(rows), cols_(cols), a_(entries) {
        assert(a_.size() == static_cast<size_t>(rows) * cols);
    }

    static CMat zero(int rows, int cols) { return CMat(rows, cols); }

    static CMat identity(int n) {
        CMat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    cplx& operator()(int r, int c) { return a_[static_cast<size_t>(r) * cols_ + c]; }
    const cplx& operator()(int r, int c) const { return a_[static_cast<size_t>(r) * cols_ + c]; }

    const std::vector<cplx>& data() const { return a_; }

    CMat herm() const {
        CMat m(cols_, rows_);
        for (int r = 0; r < rows_; ++r)
            for (int c = 0; c < cols_; ++c) m(c, r) = std::conj((*this)(r, c));
        return m;
    }

    // Hermitian Gram product A^H A.
    CMat gram() const {
        CMat g(cols_, cols_);
        for (int i = 0; i < cols_; ++i) {
            for (int j = 0; j < cols_; ++j) {
                cplx s = 0.0;
                for (int r = 0; r < rows_; ++r) s += std::conj((*this)(r, i)) * (*this)(r, j);
                g(i, j) = s;
            }
        }
        return g;
    }

    double fro_norm2() const {
        double s = 0.0;
        for (const cplx& z : a_) s += std::norm(z);
        return s;
    }

    CMat& operator+=(const CMat& o) {
        assert(rows_ == o.rows_ && cols_ == o.cols_);
        for (size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
        return *this;
    }

    CMat& operator-=(const CMat& o) {
        assert(rows_ == o.rows_ && cols_ == o.cols_);
        for (size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
        return *this;
    }

    CMat& operator*=(cplx s) {
        for (cplx& z : a_) z *= s;
        return *this;
    }

    friend CMat operator+(CMat a, const CMat& b) { return a += b; }
    friend CMat operator-(CMat a, const CMat& b) { return a -= b; }
    friend CMat operator*(CMat a, cplx s) { return a *= s; }
    friend CMat operator*(cplx s, CMat a) { return a *= s; }

    friend CMat operator*(const CMat& a, const CMat& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product shape mismatch");
        CMat m(a.rows_, b.cols_);
        for (int r = 0; r < a.rows_; ++r) {
            for (int k = 0; k < a.cols_; ++k) {
                const cplx v = a(r, k);
                if (v == 0.0) continue;
                for (int c = 0; c < b.cols_; ++c) m(r, c) += v * b(k, c);
            }
        }
        return m;
    }

  private:
    int rows_, cols_;
    std::vector<cplx> a_;
};

// Determinant by Gaussian elimination with partial pivoting; fine for the
// 3x3 / 4x4 Gram matrices used in the diversity analysis.
inline cplx determinant(CMat m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("determinant needs a square matrix");
    const int n = m.rows();
    cplx det = 1.0;
    for (int k = 0; k < n; ++k) {
        int pivot = k;
        for (int r = k + 1; r < n; ++r)
            if (std::abs(m(r, k)) > std::abs(m(pivot, k))) pivot = r;
        if (m(pivot, k) == 0.0) return 0.0;
        if (pivot != k) {
            for (int c = k; c < n; ++c) std::swap(m(k, c), m(pivot, c));
            det = -det;
        }
        det *= m(k, k);
        for (int r = k + 1; r < n; ++r) {
            const cplx f = m(r, k) / m(k, k);
            for (int c = k; c < n; ++c) m(r, c) -= f * m(k, c);
        }
    }
    return det;
}

inline double max_abs_offdiag(const CMat& m) {
    double v = 0.0;
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c)
            if (r != c) v = std::max(v, std::abs(m(r, c)));
    return v;
}

}  // namespace stbclab
