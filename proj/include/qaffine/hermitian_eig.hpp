#pragma once

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "qaffine/complex_matrix.hpp"

namespace qaffine {

struct EigResult {
    std::vector<double> eigenvalues;  // descending
    ComplexMatrix eigenvectors;       // orthonormal columns, matching order
};

inline bool is_hermitian(const ComplexMatrix& a, const ToleranceConfig& tol = default_tol()) {
    if (a.rows() != a.cols()) return false;
    return frobenius_distance(a, dagger(a)) <= tol.atol;
}

/// Hermitian eigendecomposition by cyclic Jacobi rotations. Intended for the
/// small dense matrices this library works with (dimension <= ~64).
inline EigResult hermitian_eig(const ComplexMatrix& a_in,
                               const ToleranceConfig& tol = default_tol()) {
    if (!is_hermitian(a_in, tol))
        throw std::invalid_argument("hermitian_eig: input is not Hermitian within atol");
    const std::size_t n = a_in.rows();
    ComplexMatrix a = a_in;
    ComplexMatrix v = ComplexMatrix::identity(n);

    auto offdiag2 = [&]() {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) s += std::norm(a(i, j));
        return s;
    };

    const double scale = std::max(1.0, frobenius_norm(a));
    const double stop = 1e-28 * scale * scale;

    for (int sweep = 0; sweep < 100 && offdiag2() > stop; ++sweep) {
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const Complex apq = a(p, q);
                const double mag = std::abs(apq);
                if (mag <= 1e-300) continue;
                const Complex phase = apq / mag;
                const double alpha = a(p, p).real();
                const double gamma = a(q, q).real();
                const double tau = (gamma - alpha) / (2.0 * mag);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(tau * tau + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const Complex s = (t * c) * phase;
                const Complex sbar = std::conj(s);

                // A <- G* A G, touching only rows/cols p,q
                for (std::size_t i = 0; i < n; ++i) {
                    const Complex aip = a(i, p), aiq = a(i, q);
                    a(i, p) = c * aip - sbar * aiq;
                    a(i, q) = s * aip + c * aiq;
                }
                for (std::size_t j = 0; j < n; ++j) {
                    const Complex apj = a(p, j), aqj = a(q, j);
                    a(p, j) = c * apj - s * aqj;
                    a(q, j) = sbar * apj + c * aqj;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const Complex vip = v(i, p), viq = v(i, q);
                    v(i, p) = c * vip - sbar * viq;
                    v(i, q) = s * vip + c * viq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return a(i, i).real() > a(j, j).real(); });

    EigResult res;
    res.eigenvalues.resize(n);
    res.eigenvectors = ComplexMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        res.eigenvalues[k] = a(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i) res.eigenvectors(i, k) = v(i, order[k]);
    }
    return res;
}

inline bool is_psd(const ComplexMatrix& a, const ToleranceConfig& tol = default_tol()) {
    if (!is_hermitian(a, tol)) return false;
    if (a.rows() == 0) return true;
    const auto eig = hermitian_eig(a, tol);
    return eig.eigenvalues.back() >= -tol.atol;
}

/// Orthonormal complement of the range of an isometry V (a x r): returns an
/// a x (a-r) block C such that [V | C] is unitary.
inline ComplexMatrix extend_to_orthonormal(const ComplexMatrix& v,
                                           const ToleranceConfig& tol = default_tol()) {
    if (!is_isometry(v, tol))
        throw std::invalid_argument("extend_to_orthonormal: input is not an isometry");
    const std::size_t a = v.rows(), r = v.cols();
    ComplexMatrix c(a, a - r);
    std::vector<std::vector<Complex>> accepted;
    accepted.reserve(a - r);
    auto project_out = [&](std::vector<Complex>& w) {
        // two Gram-Schmidt passes for stability
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t j = 0; j < r; ++j) {
                Complex ip{0.0, 0.0};
                for (std::size_t i = 0; i < a; ++i) ip += std::conj(v(i, j)) * w[i];
                for (std::size_t i = 0; i < a; ++i) w[i] -= ip * v(i, j);
            }
            for (const auto& u : accepted) {
                Complex ip{0.0, 0.0};
                for (std::size_t i = 0; i < a; ++i) ip += std::conj(u[i]) * w[i];
                for (std::size_t i = 0; i < a; ++i) w[i] -= ip * u[i];
            }
        }
    };
    while (accepted.size() < a - r) {
        // pick the standard basis vector with the largest residual
        std::vector<Complex> best;
        double best_nrm2 = -1.0;
        for (std::size_t cand = 0; cand < a; ++cand) {
            std::vector<Complex> w(a, Complex{0.0, 0.0});
            w[cand] = 1.0;
            project_out(w);
            double nrm2 = 0.0;
            for (const auto& z : w) nrm2 += std::norm(z);
            if (nrm2 > best_nrm2) {
                best_nrm2 = nrm2;
                best = std::move(w);
            }
        }
        if (best_nrm2 < 1e-12)
            throw std::runtime_error("extend_to_orthonormal: failed to complete basis");
        const double nrm = std::sqrt(best_nrm2);
        for (auto& z : best) z /= nrm;
        accepted.push_back(std::move(best));
    }
    for (std::size_t k = 0; k < accepted.size(); ++k)
        for (std::size_t i = 0; i < a; ++i) c(i, k) = accepted[k][i];
    return c;
}

}  // namespace qaffine
