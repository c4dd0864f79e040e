#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "qaffine/complex_matrix.hpp"
#include "qaffine/hermitian_eig.hpp"

namespace qaffine {

/// Morphism of the category of isometries: a matrix V (cod x dom) with V*V = I.
struct IsometryMor {
    std::size_t dom = 1;
    std::size_t cod = 1;
    ComplexMatrix matrix;

    IsometryMor() : matrix(ComplexMatrix::identity(1)) {}
    IsometryMor(std::size_t dom_, std::size_t cod_, ComplexMatrix m,
                const ToleranceConfig& tol = default_tol())
        : dom(dom_), cod(cod_), matrix(std::move(m)) {
        if (matrix.rows() != cod || matrix.cols() != dom)
            throw std::invalid_argument("IsometryMor: matrix shape does not match dom/cod");
        if (!is_isometry(matrix, tol))
            throw std::invalid_argument("IsometryMor: V*V != I within atol");
    }
};

inline IsometryMor iso_identity(std::size_t m) {
    return IsometryMor(m, m, ComplexMatrix::identity(m));
}

inline IsometryMor iso_compose(const IsometryMor& g, const IsometryMor& f) {
    if (f.cod != g.dom)
        throw std::invalid_argument("iso_compose: codomain/domain mismatch");
    return IsometryMor(f.dom, g.cod, g.matrix * f.matrix);
}

inline IsometryMor iso_tensor(const IsometryMor& f, const IsometryMor& g) {
    return IsometryMor(f.dom * g.dom, f.cod * g.cod, kron(f.matrix, g.matrix));
}

/// Inverse of a square isometry (= unitary): its conjugate transpose.
inline IsometryMor dagger_isometry(const IsometryMor& v) {
    if (v.dom != v.cod)
        throw std::invalid_argument("dagger_isometry: only square isometries are invertible");
    return IsometryMor(v.cod, v.dom, dagger(v.matrix));
}

/// Symmetry sigma_{m,n}: m*n -> n*m, e_i (x) e_j -> e_j (x) e_i.
inline IsometryMor symmetry(std::size_t m, std::size_t n) {
    ComplexMatrix s(m * n, m * n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) s(j * m + i, i * n + j) = 1.0;
    return IsometryMor(m * n, m * n, std::move(s));
}

/// Injection m -> n stored as 0-based index sequence; matrix view on demand.
struct InjectionMor {
    std::size_t dom = 0;
    std::size_t cod = 0;
    std::vector<std::size_t> map;  // length dom, pairwise distinct values < cod

    InjectionMor() = default;
    InjectionMor(std::size_t dom_, std::size_t cod_, std::vector<std::size_t> map_)
        : dom(dom_), cod(cod_), map(std::move(map_)) {
        if (map.size() != dom) throw std::invalid_argument("InjectionMor: map length != dom");
        std::vector<bool> seen(cod, false);
        for (auto v : map) {
            if (v >= cod) throw std::invalid_argument("InjectionMor: value out of range");
            if (seen[v]) throw std::invalid_argument("InjectionMor: map is not injective");
            seen[v] = true;
        }
    }

    static InjectionMor identity(std::size_t m) {
        std::vector<std::size_t> id(m);
        for (std::size_t i = 0; i < m; ++i) id[i] = i;
        return InjectionMor(m, m, std::move(id));
    }
};

/// Function m -> n, no injectivity requirement.
struct FunctionMor {
    std::size_t dom = 0;
    std::size_t cod = 0;
    std::vector<std::size_t> map;

    FunctionMor() = default;
    FunctionMor(std::size_t dom_, std::size_t cod_, std::vector<std::size_t> map_)
        : dom(dom_), cod(cod_), map(std::move(map_)) {
        if (map.size() != dom) throw std::invalid_argument("FunctionMor: map length != dom");
        for (auto v : map)
            if (v >= cod) throw std::invalid_argument("FunctionMor: value out of range");
    }
};

inline InjectionMor inj_compose(const InjectionMor& g, const InjectionMor& f) {
    if (f.cod != g.dom) throw std::invalid_argument("inj_compose: dimension mismatch");
    std::vector<std::size_t> m(f.dom);
    for (std::size_t i = 0; i < f.dom; ++i) m[i] = g.map[f.map[i]];
    return InjectionMor(f.dom, g.cod, std::move(m));
}

/// Tensor by pairing: (i,j) -> (f(i), g(j)) under lexicographic flattening.
inline InjectionMor inj_tensor(const InjectionMor& f, const InjectionMor& g) {
    std::vector<std::size_t> m(f.dom * g.dom);
    for (std::size_t i = 0; i < f.dom; ++i)
        for (std::size_t j = 0; j < g.dom; ++j)
            m[i * g.dom + j] = f.map[i] * g.cod + g.map[j];
    return InjectionMor(f.dom * g.dom, f.cod * g.cod, std::move(m));
}

/// Symmetry in Injection: the pairing swap (i,j) -> (j,i).
inline InjectionMor inj_symmetry(std::size_t m, std::size_t n) {
    std::vector<std::size_t> s(m * n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) s[i * n + j] = j * m + i;
    return InjectionMor(m * n, n * m, std::move(s));
}

inline FunctionMor fun_compose(const FunctionMor& g, const FunctionMor& f) {
    if (f.cod != g.dom) throw std::invalid_argument("fun_compose: dimension mismatch");
    std::vector<std::size_t> m(f.dom);
    for (std::size_t i = 0; i < f.dom; ++i) m[i] = g.map[f.map[i]];
    return FunctionMor(f.dom, g.cod, std::move(m));
}

inline FunctionMor fun_tensor(const FunctionMor& f, const FunctionMor& g) {
    std::vector<std::size_t> m(f.dom * g.dom);
    for (std::size_t i = 0; i < f.dom; ++i)
        for (std::size_t j = 0; j < g.dom; ++j)
            m[i * g.dom + j] = f.map[i] * g.cod + g.map[j];
    return FunctionMor(f.dom * g.dom, f.cod * g.cod, std::move(m));
}

inline bool is_injective(const FunctionMor& f) {
    std::vector<bool> seen(f.cod, false);
    for (auto v : f.map) {
        if (seen[v]) return false;
        seen[v] = true;
    }
    return true;
}

/// V_f: the 0/1 isometry with (V_f a)_{f(i)} = a_i.
inline IsometryMor injection_to_isometry(const InjectionMor& f) {
    ComplexMatrix v(f.cod, f.dom);
    for (std::size_t i = 0; i < f.dom; ++i) v(f.map[i], i) = 1.0;
    return IsometryMor(f.dom, f.cod, std::move(v));
}

/// Inj_{a,b}: ones on the first a diagonal entries of a b x a matrix.
inline IsometryMor canonical_injection(std::size_t a, std::size_t b) {
    if (b < a) throw std::invalid_argument("canonical_injection: requires b >= a");
    ComplexMatrix v(b, a);
    for (std::size_t i = 0; i < a; ++i) v(i, i) = 1.0;
    return IsometryMor(a, b, std::move(v));
}

/// Deterministic seeded generator. Gaussian samples come from an explicit
/// Box-Muller transform so that fixed seeds give bit-identical streams.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform() {
        // 53-bit mantissa uniform in [0,1)
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    Complex complex_gaussian() {
        const double re = gaussian();
        const double im = gaussian();
        return Complex{re, im};
    }

    std::size_t below(std::size_t n) { return static_cast<std::size_t>(uniform() * n) % n; }

private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Random isometry m -> n via Gram-Schmidt (with re-orthogonalization) of a
/// complex Gaussian n x m matrix.
inline IsometryMor random_isometry(std::size_t m, std::size_t n, Rng& rng) {
    if (n < m) throw std::invalid_argument("random_isometry: requires n >= m");
    ComplexMatrix v(n, m);
    for (std::size_t j = 0; j < m; ++j) {
        std::vector<Complex> w(n);
        for (std::size_t i = 0; i < n; ++i) w[i] = rng.complex_gaussian();
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t k = 0; k < j; ++k) {
                Complex ip{0.0, 0.0};
                for (std::size_t i = 0; i < n; ++i) ip += std::conj(v(i, k)) * w[i];
                for (std::size_t i = 0; i < n; ++i) w[i] -= ip * v(i, k);
            }
        }
        double nrm2 = 0.0;
        for (const auto& z : w) nrm2 += std::norm(z);
        const double nrm = std::sqrt(nrm2);
        for (std::size_t i = 0; i < n; ++i) v(i, j) = w[i] / nrm;
    }
    return IsometryMor(m, n, std::move(v));
}

inline InjectionMor random_injection(std::size_t m, std::size_t n, Rng& rng) {
    if (n < m) throw std::invalid_argument("random_injection: requires n >= m");
    std::vector<std::size_t> pool(n);
    for (std::size_t i = 0; i < n; ++i) pool[i] = i;
    // Fisher-Yates prefix
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t j = i + rng.below(n - i);
        std::swap(pool[i], pool[j]);
    }
    pool.resize(m);
    return InjectionMor(m, n, std::move(pool));
}

/// Qubit-count object of the power-of-two subcategory: n qubits = dimension 2^n.
struct QubitObject {
    std::size_t qubits = 0;
};

inline std::size_t qubit_view(QubitObject q) {
    std::size_t d = 1;
    for (std::size_t i = 0; i < q.qubits; ++i) d *= 2;
    return d;
}

inline QubitObject qubit_view_inverse(std::size_t dim) {
    std::size_t n = 0, d = 1;
    while (d < dim) {
        d *= 2;
        ++n;
    }
    if (d != dim) throw std::invalid_argument("qubit_view_inverse: dimension is not a power of two");
    return QubitObject{n};
}

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace qaffine
