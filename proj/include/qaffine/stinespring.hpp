#pragma once

#include <stdexcept>
#include <vector>

#include "qaffine/complex_matrix.hpp"
#include "qaffine/cptp.hpp"
#include "qaffine/hermitian_eig.hpp"
#include "qaffine/isometry.hpp"

namespace qaffine {

/// Kraus representation of a channel: f(rho) = sum_k K_k rho K_k*.
struct KrausFamily {
    std::size_t dom = 1;
    std::size_t cod = 1;
    std::vector<ComplexMatrix> operators;  // each cod x dom
};

inline ComplexMatrix kraus_apply(const KrausFamily& k, const ComplexMatrix& rho) {
    ComplexMatrix out(k.cod, k.cod);
    for (const auto& op : k.operators) out = out + op * rho * dagger(op);
    return out;
}

/// Stinespring dilation of a channel m -> n: an isometry V: m -> n*a with
/// f(rho) = tr_a(V rho V*). `minimal` when a equals the Choi rank.
struct StinespringDilation {
    std::size_t dom = 1;
    std::size_t cod = 1;
    std::size_t ancilla = 1;
    IsometryMor isometry;  // m -> cod*ancilla
    bool minimal = false;
};

/// Kraus operators from the eigendecomposition of the Choi matrix; the ancilla
/// count is the numerical rank (eigenvalues above rank_rtol * lambda_max).
/// Each eigenvector is phased so its largest-magnitude entry is real positive.
inline KrausFamily kraus_from_choi(const CptpMor& f, const ToleranceConfig& tol = default_tol()) {
    const std::size_t m = f.dom, n = f.cod;
    const auto eig = hermitian_eig(f.choi, tol);
    if (!eig.eigenvalues.empty() && eig.eigenvalues.back() < -tol.atol)
        throw std::invalid_argument("kraus_from_choi: Choi matrix is not PSD");
    const double lmax = eig.eigenvalues.empty() ? 0.0 : eig.eigenvalues.front();
    KrausFamily fam;
    fam.dom = m;
    fam.cod = n;
    for (std::size_t k = 0; k < eig.eigenvalues.size(); ++k) {
        const double lam = eig.eigenvalues[k];
        if (lam <= tol.rank_rtol * lmax) break;
        // fix the phase via the largest-magnitude entry
        Complex pivot{0.0, 0.0};
        double best = -1.0;
        for (std::size_t r = 0; r < m * n; ++r) {
            const Complex z = eig.eigenvectors(r, k);
            if (std::norm(z) > best) {
                best = std::norm(z);
                pivot = z;
            }
        }
        const Complex phase = pivot / std::abs(pivot);
        const double scale = std::sqrt(lam);
        ComplexMatrix op(n, m);
        // vec convention: choi eigenvector index i*n + r holds K(r, i)
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t r = 0; r < n; ++r)
                op(r, i) = scale * eig.eigenvectors(i * n + r, k) / phase;
        fam.operators.push_back(std::move(op));
    }
    return fam;
}

/// Eigenvalues matching kraus_from_choi's operators (same order, same cutoff).
inline std::vector<double> choi_spectrum_above_rank_cut(const CptpMor& f,
                                                        const ToleranceConfig& tol = default_tol()) {
    const auto eig = hermitian_eig(f.choi, tol);
    const double lmax = eig.eigenvalues.empty() ? 0.0 : eig.eigenvalues.front();
    std::vector<double> out;
    for (double lam : eig.eigenvalues) {
        if (lam <= tol.rank_rtol * lmax) break;
        out.push_back(lam);
    }
    return out;
}

/// Stack a Kraus family into the isometry V x = sum_k (K_k x) (x) e_k,
/// codomain n*a with n most significant.
inline IsometryMor isometry_from_kraus(const KrausFamily& fam,
                                       const ToleranceConfig& tol = default_tol()) {
    const std::size_t m = fam.dom, n = fam.cod, a = fam.operators.size();
    ComplexMatrix v(n * a, m);
    for (std::size_t k = 0; k < a; ++k)
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t i = 0; i < m; ++i) v(r * a + k, i) = fam.operators[k](r, i);
    return IsometryMor(m, n * a, std::move(v), tol);
}

/// Minimal Stinespring dilation: ancilla = Choi rank.
inline StinespringDilation dilate(const CptpMor& f, const ToleranceConfig& tol = default_tol()) {
    const KrausFamily fam = kraus_from_choi(f, tol);
    StinespringDilation d;
    d.dom = f.dom;
    d.cod = f.cod;
    d.ancilla = fam.operators.size();
    d.isometry = isometry_from_kraus(fam, tol);
    d.minimal = true;
    return d;
}

/// The channel rho -> tr_a(V rho V*) induced by a dilation.
inline CptpMor channel_of_dilation(const StinespringDilation& d,
                                   const ToleranceConfig& tol = default_tol()) {
    return cptp_from_action(d.dom, d.cod, [&](const ComplexMatrix& rho) {
        return partial_trace(d.isometry.matrix * rho * dagger(d.isometry.matrix), d.cod, d.ancilla,
                             TraceFactor::Second);
    }, tol);
}

/// Kraus operators read off an arbitrary dilation: M_k(r,i) = V(r*a+k, i).
inline KrausFamily kraus_of_dilation(const StinespringDilation& d) {
    KrausFamily fam;
    fam.dom = d.dom;
    fam.cod = d.cod;
    for (std::size_t k = 0; k < d.ancilla; ++k) {
        ComplexMatrix op(d.cod, d.dom);
        for (std::size_t r = 0; r < d.cod; ++r)
            for (std::size_t i = 0; i < d.dom; ++i) op(r, i) = d.isometry.matrix(r * d.ancilla + k, i);
        fam.operators.push_back(std::move(op));
    }
    return fam;
}

inline Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
    // <A, B> = tr(A* B)
    Complex s{0.0, 0.0};
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) s += std::conj(a(i, j)) * b(i, j);
    return s;
}

/// Connecting isometry T: r -> a with (id_n (x) T) V_min = V, for a given
/// minimal Kraus family of the channel d dilates.
inline IsometryMor factor_through_family(const KrausFamily& minimal,
                                         const std::vector<double>& lambda,
                                         const StinespringDilation& d,
                                         const ToleranceConfig& tol = default_tol()) {
    const KrausFamily given = kraus_of_dilation(d);
    const std::size_t r = minimal.operators.size(), a = d.ancilla;
    ComplexMatrix t(a, r);
    for (std::size_t k = 0; k < a; ++k)
        for (std::size_t i = 0; i < r; ++i)
            t(k, i) = hs_inner(minimal.operators[i], given.operators[k]) / lambda[i];
    IsometryMor tm(r, a, std::move(t), tol);
    // residual check: the factorization must actually reproduce V
    const IsometryMor vmin = isometry_from_kraus(minimal, tol);
    const ComplexMatrix lifted = kron(ComplexMatrix::identity(d.cod), tm.matrix) * vmin.matrix;
    if (frobenius_distance(lifted, d.isometry.matrix) > 1e3 * tol.atol)
        throw std::invalid_argument("factor_through_family: input does not dilate the channel");
    return tm;
}

/// The connecting isometry T: r -> a with (id_n (x) T) V_min = V, where
/// (V_min, r) is the minimal dilation of the channel d dilates.
inline IsometryMor factor_through_minimal(const StinespringDilation& d,
                                          const ToleranceConfig& tol = default_tol()) {
    const CptpMor f = channel_of_dilation(d, tol);
    return factor_through_family(kraus_from_choi(f, tol), choi_spectrum_above_rank_cut(f, tol), d,
                                 tol);
}

struct DilationConnection {
    std::size_t c = 0;
    IsometryMor into_c_from_a;  // V': a -> c
    IsometryMor into_c_from_b;  // W': b -> c
};

/// Connection of two dilations of the same channel: isometries
/// V': a -> c and W': b -> c with (id (x) V') V = (id (x) W') W, where
/// c = a + b - r and r is the minimal ancilla. Both connecting isometries act
/// as the embedding of the minimal ancilla on the factored part and send the
/// orthogonal complements to disjoint tail coordinates.
inline DilationConnection connect_dilations(const StinespringDilation& d1,
                                            const StinespringDilation& d2,
                                            const ToleranceConfig& tol = default_tol()) {
    const CptpMor f1 = channel_of_dilation(d1, tol);
    const CptpMor f2 = channel_of_dilation(d2, tol);
    if (f1.dom != f2.dom || f1.cod != f2.cod || cptp_distance(f1, f2) > 1e3 * tol.atol)
        throw std::invalid_argument("connect_dilations: inputs dilate different channels");

    // one shared minimal family; factoring both through it keeps the bases
    // aligned even when the Choi spectrum is degenerate
    const KrausFamily minimal = kraus_from_choi(f1, tol);
    const std::vector<double> lambda = choi_spectrum_above_rank_cut(f1, tol);
    const IsometryMor ta = factor_through_family(minimal, lambda, d1, tol);  // r -> a
    const IsometryMor tb = factor_through_family(minimal, lambda, d2, tol);  // r -> b
    const std::size_t r = ta.dom, a = d1.ancilla, b = d2.ancilla;
    const std::size_t c = a + b - r;

    const ComplexMatrix ca = extend_to_orthonormal(ta.matrix, tol);  // a x (a-r)
    const ComplexMatrix cb = extend_to_orthonormal(tb.matrix, tol);  // b x (b-r)

    // V' = E_r Ta* + E_mid Ca*, W' = E_r Tb* + E_tail Cb*
    ComplexMatrix vp(c, a), wp(c, b);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t k = 0; k < a; ++k) vp(i, k) = std::conj(ta.matrix(k, i));
    for (std::size_t i = 0; i < a - r; ++i)
        for (std::size_t k = 0; k < a; ++k) vp(r + i, k) = std::conj(ca(k, i));
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t k = 0; k < b; ++k) wp(i, k) = std::conj(tb.matrix(k, i));
    for (std::size_t i = 0; i < b - r; ++i)
        for (std::size_t k = 0; k < b; ++k) wp(r + (a - r) + i, k) = std::conj(cb(k, i));

    DilationConnection conn;
    conn.c = c;
    conn.into_c_from_a = IsometryMor(a, c, std::move(vp), tol);
    conn.into_c_from_b = IsometryMor(b, c, std::move(wp), tol);
    return conn;
}

inline std::size_t next_power_of_two(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p *= 2;
    return p;
}

/// Pad the ancilla to the next power of two via id_n (x) Inj_{a,2^k}; the
/// induced channel is unchanged.
inline StinespringDilation pad_to_power_of_two(const StinespringDilation& d,
                                               const ToleranceConfig& tol = default_tol()) {
    const std::size_t p = next_power_of_two(d.ancilla);
    if (p == d.ancilla) return d;
    const IsometryMor pad = iso_tensor(iso_identity(d.cod), canonical_injection(d.ancilla, p));
    StinespringDilation out;
    out.dom = d.dom;
    out.cod = d.cod;
    out.ancilla = p;
    out.isometry = iso_compose(pad, d.isometry);
    out.minimal = false;
    return out;
}

}  // namespace qaffine
