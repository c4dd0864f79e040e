#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace qaffine {

using Complex = std::complex<double>;

/// Tolerances used throughout: `atol` for entrywise/Frobenius comparisons,
/// `rank_rtol` for the relative eigenvalue cutoff that defines numerical rank.
struct ToleranceConfig {
    double atol = 1e-9;
    double rank_rtol = 1e-10;
};

inline const ToleranceConfig& default_tol() {
    static const ToleranceConfig tol{};
    return tol;
}

/// Dense row-major complex matrix. Immutable by convention once built;
/// all operations return fresh values.
class ComplexMatrix {
public:
    ComplexMatrix() : rows_(0), cols_(0) {}
    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, Complex{0.0, 0.0}) {}
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (data_.size() != rows_ * cols_)
            throw std::invalid_argument("ComplexMatrix: data length mismatch");
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<Complex>& data() const { return data_; }

    bool all_finite() const {
        for (const auto& z : data_)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
        return true;
    }

    static ComplexMatrix identity(std::size_t n) {
        ComplexMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static ComplexMatrix zero(std::size_t rows, std::size_t cols) {
        return ComplexMatrix(rows, cols);
    }

    ComplexMatrix operator+(const ComplexMatrix& o) const {
        require_same_shape(o, "+");
        ComplexMatrix r(rows_, cols_);
        for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] = data_[k] + o.data_[k];
        return r;
    }

    ComplexMatrix operator-(const ComplexMatrix& o) const {
        require_same_shape(o, "-");
        ComplexMatrix r(rows_, cols_);
        for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] = data_[k] - o.data_[k];
        return r;
    }

    ComplexMatrix operator*(const Complex& s) const {
        ComplexMatrix r(rows_, cols_);
        for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] = data_[k] * s;
        return r;
    }

    ComplexMatrix operator*(const ComplexMatrix& o) const {
        if (cols_ != o.rows_)
            throw std::invalid_argument("matmul: inner dimension mismatch (" +
                                        std::to_string(cols_) + " vs " + std::to_string(o.rows_) + ")");
        ComplexMatrix r(rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const Complex a = (*this)(i, k);
                if (a == Complex{0.0, 0.0}) continue;
                for (std::size_t j = 0; j < o.cols_; ++j) r(i, j) += a * o(k, j);
            }
        return r;
    }

private:
    void require_same_shape(const ComplexMatrix& o, const char* op) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw std::invalid_argument(std::string("ComplexMatrix: shape mismatch in ") + op);
    }

    std::size_t rows_, cols_;
    std::vector<Complex> data_;
};

/// Conjugate transpose.
inline ComplexMatrix dagger(const ComplexMatrix& a) {
    ComplexMatrix r(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) r(j, i) = std::conj(a(i, j));
    return r;
}

/// Kronecker product, left factor most significant:
/// result(i*B.rows+k, j*B.cols+l) = A(i,j) * B(k,l).
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix r(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const Complex aij = a(i, j);
            if (aij == Complex{0.0, 0.0}) continue;
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    r(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
        }
    return r;
}

enum class TraceFactor { First, Second };

/// Partial trace of a square matrix on a bipartite space of dims n (first,
/// most significant factor) and a (second factor).
inline ComplexMatrix partial_trace(const ComplexMatrix& x, std::size_t n, std::size_t a,
                                   TraceFactor factor) {
    if (x.rows() != x.cols() || x.rows() != n * a)
        throw std::invalid_argument("partial_trace: matrix is not square of size n*a");
    if (factor == TraceFactor::Second) {
        ComplexMatrix r(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < a; ++k) r(i, j) += x(i * a + k, j * a + k);
        return r;
    }
    ComplexMatrix r(a, a);
    for (std::size_t i = 0; i < a; ++i)
        for (std::size_t j = 0; j < a; ++j)
            for (std::size_t k = 0; k < n; ++k) r(i, j) += x(k * a + i, k * a + j);
    return r;
}

inline Complex trace(const ComplexMatrix& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("trace: matrix not square");
    Complex t{0.0, 0.0};
    for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
    return t;
}

inline double frobenius_norm(const ComplexMatrix& a) {
    double s = 0.0;
    for (const auto& z : a.data()) s += std::norm(z);
    return std::sqrt(s);
}

inline double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
    return frobenius_norm(a - b);
}

/// Basis matrix e(i,j) of size m: zero except a 1 at (i,j). Zero-based.
inline ComplexMatrix basis_matrix(std::size_t i, std::size_t j, std::size_t m) {
    if (i >= m || j >= m) throw std::invalid_argument("basis_matrix: index out of range");
    ComplexMatrix e(m, m);
    e(i, j) = 1.0;
    return e;
}

/// True iff V*V = I within tol.atol (Frobenius). Wide matrices are never isometries.
inline bool is_isometry(const ComplexMatrix& v, const ToleranceConfig& tol = default_tol()) {
    if (v.rows() < v.cols()) return false;
    ComplexMatrix g = dagger(v) * v;
    return frobenius_distance(g, ComplexMatrix::identity(v.cols())) <= tol.atol;
}

}  // namespace qaffine
