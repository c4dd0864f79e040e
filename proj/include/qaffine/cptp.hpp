#pragma once

#include <functional>
#include <stdexcept>

#include "qaffine/complex_matrix.hpp"
#include "qaffine/hermitian_eig.hpp"
#include "qaffine/isometry.hpp"

namespace qaffine {

struct CptpReport {
    bool cp = false;
    bool tp = false;
    double min_eigenvalue = 0.0;  // of the Choi matrix
    double tp_violation = 0.0;    // ||tr_out(choi) - I_m||_F
    bool ok() const { return cp && tp; }
};

/// CP/TP check on a raw Choi matrix for a map m -> n. The Choi convention is
/// sum_{i,j} e_ij(m) (x) f(e_ij(m)), input factor most significant, so blocks
/// are n x n and tracing the *output* (second) factor must give I_m.
inline CptpReport is_cptp(const ComplexMatrix& choi, std::size_t m, std::size_t n,
                          const ToleranceConfig& tol = default_tol()) {
    if (choi.rows() != m * n || choi.cols() != m * n)
        throw std::invalid_argument("is_cptp: choi has wrong shape for given dims");
    CptpReport rep;
    if (!is_hermitian(choi, tol)) {
        rep.min_eigenvalue = -1.0;
        return rep;
    }
    const auto eig = hermitian_eig(choi, tol);
    rep.min_eigenvalue = eig.eigenvalues.empty() ? 0.0 : eig.eigenvalues.back();
    rep.cp = rep.min_eigenvalue >= -tol.atol;
    const ComplexMatrix marg = partial_trace(choi, m, n, TraceFactor::Second);
    rep.tp_violation = frobenius_distance(marg, ComplexMatrix::identity(m));
    rep.tp = rep.tp_violation <= tol.atol;
    return rep;
}

/// Quantum channel m -> n stored as its Choi matrix.
struct CptpMor {
    std::size_t dom = 1;
    std::size_t cod = 1;
    ComplexMatrix choi;  // (m*n) x (m*n)

    CptpMor() : choi(ComplexMatrix::identity(1)) {}
    CptpMor(std::size_t dom_, std::size_t cod_, ComplexMatrix choi_,
            const ToleranceConfig& tol = default_tol())
        : dom(dom_), cod(cod_), choi(std::move(choi_)) {
        const auto rep = is_cptp(choi, dom, cod, tol);
        if (!rep.ok())
            throw std::invalid_argument("CptpMor: Choi matrix fails CP/TP validation");
    }

    /// The block f(e_ij), n x n.
    ComplexMatrix block(std::size_t i, std::size_t j) const {
        ComplexMatrix b(cod, cod);
        for (std::size_t r = 0; r < cod; ++r)
            for (std::size_t c = 0; c < cod; ++c) b(r, c) = choi(i * cod + r, j * cod + c);
        return b;
    }
};

/// Build a channel from its action on basis matrices; validates CP/TP.
inline CptpMor cptp_from_action(std::size_t m, std::size_t n,
                                const std::function<ComplexMatrix(const ComplexMatrix&)>& action,
                                const ToleranceConfig& tol = default_tol()) {
    ComplexMatrix choi(m * n, m * n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            const ComplexMatrix b = action(basis_matrix(i, j, m));
            if (b.rows() != n || b.cols() != n)
                throw std::invalid_argument("cptp_from_action: action has wrong output shape");
            for (std::size_t r = 0; r < n; ++r)
                for (std::size_t c = 0; c < n; ++c) choi(i * n + r, j * n + c) = b(r, c);
        }
    return CptpMor(m, n, std::move(choi), tol);
}

inline ComplexMatrix apply(const CptpMor& f, const ComplexMatrix& rho) {
    if (rho.rows() != f.dom || rho.cols() != f.dom)
        throw std::invalid_argument("apply: density matrix dimension mismatch");
    ComplexMatrix out(f.cod, f.cod);
    for (std::size_t i = 0; i < f.dom; ++i)
        for (std::size_t j = 0; j < f.dom; ++j) {
            const Complex w = rho(i, j);
            if (w == Complex{0.0, 0.0}) continue;
            for (std::size_t r = 0; r < f.cod; ++r)
                for (std::size_t c = 0; c < f.cod; ++c)
                    out(r, c) += w * f.choi(i * f.cod + r, j * f.cod + c);
        }
    return out;
}

/// The functor E: isometries to channels, rho -> V rho V*.
inline CptpMor from_isometry(const IsometryMor& v, const ToleranceConfig& tol = default_tol()) {
    const std::size_t m = v.dom, n = v.cod;
    ComplexMatrix choi(m * n, m * n);
    // Choi of E(V) is the rank-1 projector onto sum_i e_i (x) Vcol_i
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t r = 0; r < n; ++r)
                for (std::size_t c = 0; c < n; ++c)
                    choi(i * n + r, j * n + c) = v.matrix(r, i) * std::conj(v.matrix(c, j));
    return CptpMor(m, n, std::move(choi), tol);
}

inline CptpMor cptp_identity(std::size_t n) {
    return from_isometry(iso_identity(n));
}

inline CptpMor cptp_compose(const CptpMor& g, const CptpMor& f,
                            const ToleranceConfig& tol = default_tol()) {
    if (f.cod != g.dom) throw std::invalid_argument("cptp_compose: dimension mismatch");
    ComplexMatrix choi(f.dom * g.cod, f.dom * g.cod);
    for (std::size_t i = 0; i < f.dom; ++i)
        for (std::size_t j = 0; j < f.dom; ++j) {
            const ComplexMatrix b = apply(g, f.block(i, j));
            for (std::size_t r = 0; r < g.cod; ++r)
                for (std::size_t c = 0; c < g.cod; ++c)
                    choi(i * g.cod + r, j * g.cod + c) = b(r, c);
        }
    return CptpMor(f.dom, g.cod, std::move(choi), tol);
}

/// Choi-level tensor: the factors of choi_f (x) choi_g sit in order
/// (in1 out1 in2 out2); conjugating by id (x) sigma (x) id reorders them to
/// (in1 in2 out1 out2).
inline CptpMor cptp_tensor(const CptpMor& f, const CptpMor& g,
                           const ToleranceConfig& tol = default_tol()) {
    const ComplexMatrix raw = kron(f.choi, g.choi);
    const ComplexMatrix p = kron(ComplexMatrix::identity(f.dom),
                                 kron(symmetry(f.cod, g.dom).matrix,
                                      ComplexMatrix::identity(g.cod)));
    ComplexMatrix choi = p * raw * dagger(p);
    return CptpMor(f.dom * g.dom, f.cod * g.cod, std::move(choi), tol);
}

/// The unique channel n -> 1, rho -> [[tr(rho)]].
inline CptpMor trace_channel(std::size_t n) {
    return cptp_from_action(n, 1, [](const ComplexMatrix& rho) {
        ComplexMatrix out(1, 1);
        out(0, 0) = trace(rho);
        return out;
    });
}

/// Discard of the second factor: m*n -> m.
inline CptpMor partial_trace_channel(std::size_t m, std::size_t n) {
    return cptp_from_action(m * n, m, [m, n](const ComplexMatrix& rho) {
        return partial_trace(rho, m, n, TraceFactor::Second);
    });
}

inline bool cptp_equal(const CptpMor& f, const CptpMor& g,
                       const ToleranceConfig& tol = default_tol()) {
    if (f.dom != g.dom || f.cod != g.cod)
        throw std::invalid_argument("cptp_equal: shape mismatch");
    return frobenius_distance(f.choi, g.choi) <= tol.atol;
}

inline double cptp_distance(const CptpMor& f, const CptpMor& g) {
    return frobenius_distance(f.choi, g.choi);
}

/// Symmetry channel E(sigma_{m,n}).
inline CptpMor cptp_symmetry(std::size_t m, std::size_t n) {
    return from_isometry(symmetry(m, n));
}

/// Random channel from random Stinespring data: an isometry m -> n*a followed
/// by discarding the ancilla.
inline CptpMor random_cptp(std::size_t m, std::size_t n, std::size_t a, Rng& rng) {
    const IsometryMor v = random_isometry(m, n * a, rng);
    return cptp_from_action(m, n, [&](const ComplexMatrix& rho) {
        return partial_trace(v.matrix * rho * dagger(v.matrix), n, a, TraceFactor::Second);
    });
}

}  // namespace qaffine
