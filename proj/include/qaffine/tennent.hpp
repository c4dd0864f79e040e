#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "qaffine/category.hpp"
#include "qaffine/cptp.hpp"
#include "qaffine/isometry.hpp"

namespace qaffine {

/// Equivalence relation on {0..m-1} stored as a class-index array with
/// first-occurrence canonical labeling, so structural equality of relations
/// is array equality.
struct EquivRelation {
    std::size_t size = 0;
    std::vector<std::size_t> classes;  // classes[i] = canonical class index of i

    EquivRelation() = default;
    explicit EquivRelation(std::vector<std::size_t> raw) { assign(std::move(raw)); }

    void assign(std::vector<std::size_t> raw) {
        size = raw.size();
        classes.assign(size, 0);
        std::vector<std::size_t> label_of;  // raw label -> canonical label, by first occurrence
        std::vector<std::size_t> seen_raw;
        for (std::size_t i = 0; i < size; ++i) {
            std::size_t canon = seen_raw.size();
            for (std::size_t k = 0; k < seen_raw.size(); ++k)
                if (seen_raw[k] == raw[i]) {
                    canon = k;
                    break;
                }
            if (canon == seen_raw.size()) seen_raw.push_back(raw[i]);
            classes[i] = canon;
        }
    }

    bool related(std::size_t i, std::size_t j) const { return classes[i] == classes[j]; }

    std::size_t num_classes() const {
        std::size_t n = 0;
        for (auto c : classes) n = std::max(n, c + 1);
        return size == 0 ? 0 : n;
    }

    static EquivRelation total(std::size_t m) {
        return EquivRelation(std::vector<std::size_t>(m, 0));
    }

    static EquivRelation discrete(std::size_t m) {
        std::vector<std::size_t> raw(m);
        for (std::size_t i = 0; i < m; ++i) raw[i] = i;
        return EquivRelation(std::move(raw));
    }

    bool operator==(const EquivRelation& o) const {
        return size == o.size && classes == o.classes;
    }
};

/// Morphism m -> n of the Tennent category: an equivalence relation Q on m
/// and a function f: m -> n injective on each Q-class.
struct TennentMor {
    std::size_t dom = 0;
    std::size_t cod = 0;
    EquivRelation relation;
    std::vector<std::size_t> map;

    TennentMor() = default;
    TennentMor(std::size_t dom_, std::size_t cod_, EquivRelation q, std::vector<std::size_t> f)
        : dom(dom_), cod(cod_), relation(std::move(q)), map(std::move(f)) {
        if (relation.size != dom || map.size() != dom)
            throw std::invalid_argument("TennentMor: size mismatch");
        for (auto v : map)
            if (v >= cod) throw std::invalid_argument("TennentMor: map value out of range");
        for (std::size_t i = 0; i < dom; ++i)
            for (std::size_t j = i + 1; j < dom; ++j)
                if (map[i] == map[j] && relation.related(i, j))
                    throw std::invalid_argument("TennentMor: map not injective on classes");
    }

    static TennentMor identity(std::size_t m) {
        std::vector<std::size_t> id(m);
        for (std::size_t i = 0; i < m; ++i) id[i] = i;
        return TennentMor(m, m, EquivRelation::total(m), std::move(id));
    }

    bool operator==(const TennentMor& o) const {
        return dom == o.dom && cod == o.cod && relation == o.relation && map == o.map;
    }
};

/// (R,g) after (Q,f): (S, g.f) with S(i,i') iff Q(i,i') and R(f(i),f(i')).
inline TennentMor tennent_compose(const TennentMor& rg, const TennentMor& qf) {
    if (qf.cod != rg.dom) throw std::invalid_argument("tennent_compose: dimension mismatch");
    const std::size_t m = qf.dom;
    // build S by union-of-constraints: give (i, i') the same raw label iff
    // both conditions hold; labels via pair (classQ(i), classR(f(i)))
    std::vector<std::size_t> raw(m);
    for (std::size_t i = 0; i < m; ++i)
        raw[i] = qf.relation.classes[i] * rg.dom + rg.relation.classes[qf.map[i]];
    std::vector<std::size_t> gf(m);
    for (std::size_t i = 0; i < m; ++i) gf[i] = rg.map[qf.map[i]];
    return TennentMor(m, rg.cod, EquivRelation(std::move(raw)), std::move(gf));
}

/// Tensor: product relation and pairing under lexicographic flattening.
inline TennentMor tennent_tensor(const TennentMor& f, const TennentMor& g) {
    const std::size_t m = f.dom * g.dom;
    std::vector<std::size_t> raw(m), map(m);
    for (std::size_t i = 0; i < f.dom; ++i)
        for (std::size_t j = 0; j < g.dom; ++j) {
            raw[i * g.dom + j] = f.relation.classes[i] * g.dom + g.relation.classes[j];
            map[i * g.dom + j] = f.map[i] * g.cod + g.map[j];
        }
    return TennentMor(m, f.cod * g.cod, EquivRelation(std::move(raw)), std::move(map));
}

inline TennentMor tennent_symmetry(std::size_t m, std::size_t n) {
    const InjectionMor s = inj_symmetry(m, n);
    return TennentMor(m * n, n * m, EquivRelation::total(m * n), s.map);
}

/// The reflection unit Injection -> Tennent: f -> (total relation, f).
inline TennentMor from_injection(const InjectionMor& f) {
    return TennentMor(f.dom, f.cod, EquivRelation::total(f.dom), f.map);
}

/// Quotient map q: m -> m/Q, classes ordered by first occurrence.
inline FunctionMor quotient_map(const EquivRelation& q) {
    return FunctionMor(q.size, q.num_classes(), q.classes);
}

/// Injective pairing (f, q): m -> n * (m/Q) under lexicographic flattening.
inline InjectionMor tennent_pairing(const TennentMor& t) {
    const std::size_t nq = t.relation.num_classes();
    std::vector<std::size_t> pair(t.dom);
    for (std::size_t i = 0; i < t.dom; ++i)
        pair[i] = t.map[i] * nq + t.relation.classes[i];
    return InjectionMor(t.dom, t.cod * nq, std::move(pair));
}

/// The faithful functor into CPTP: tr_{m/Q} after conjugation by V_{(f,q)}.
inline CptpMor tennent_to_cptp(const TennentMor& t, const ToleranceConfig& tol = default_tol()) {
    const InjectionMor pairing = tennent_pairing(t);
    const IsometryMor v = injection_to_isometry(pairing);
    const std::size_t nq = t.relation.num_classes() == 0 ? 1 : t.relation.num_classes();
    return cptp_from_action(t.dom, t.cod, [&](const ComplexMatrix& rho) {
        return partial_trace(v.matrix * rho * dagger(v.matrix), t.cod, nq, TraceFactor::Second);
    }, tol);
}

/// Normal form of an injective dilation (a, h: m -> n*a): map = first
/// component of h, relation identifies indices with equal second component.
inline TennentMor normalize_dilation(const Dilation<InjectionCat>& d) {
    d.validate();
    std::vector<std::size_t> map(d.dom), raw(d.dom);
    for (std::size_t i = 0; i < d.dom; ++i) {
        map[i] = d.morphism.map[i] / d.ancilla;
        raw[i] = d.morphism.map[i] % d.ancilla;
    }
    return TennentMor(d.dom, d.cod, EquivRelation(std::move(raw)), std::move(map));
}

/// Canonical dilation of a Tennent morphism: (m/Q, (f,q)).
inline Dilation<InjectionCat> denormalize(const TennentMor& t) {
    Dilation<InjectionCat> d;
    d.dom = t.dom;
    d.cod = t.cod;
    d.ancilla = t.dom == 0 ? 1 : std::max<std::size_t>(t.relation.num_classes(), 1);
    if (t.dom == 0) {
        d.morphism = InjectionMor(0, t.cod, {});
    } else {
        d.morphism = tennent_pairing(t);
    }
    return d;
}

/// Injective-dilation oracle: compare Tennent normal forms. Complete because
/// every injective dilation rewrites to its normal form and rewrites preserve
/// it.
class TennentOracle : public DilationOracle<InjectionCat> {
public:
    bool equivalent(const Dilation<InjectionCat>& d1,
                    const Dilation<InjectionCat>& d2) const override {
        if (d1.dom != d2.dom || d1.cod != d2.cod) return false;
        return normalize_dilation(d1) == normalize_dilation(d2);
    }
    bool has_normal_form() const override { return true; }
};

struct CounterexampleReport {
    bool basis_cases_match = true;   // tr_2(V_f e_ij V_f*) equals the predicted matrix
    bool random_cases_match = true;  // same on random M
    bool differs_when_m13_nonzero = true;
    double max_deviation = 0.0;
    bool ok() const { return basis_cases_match && random_cases_match && differs_when_m13_nonzero; }
};

/// The no-functor-through-Function counterexample: for the injection
/// f = (0->0, 1->1, 2->5) into 6 = 2*3, tracing the 2-dim first factor of
/// V_f M V_f* keeps the upper-left 2x2 block and the (3,3) entry and kills
/// everything else, so the composite differs from the identity on M_3.
inline CounterexampleReport function_counterexample_check(std::uint64_t seed = 11,
                                                          std::size_t random_trials = 20) {
    CounterexampleReport rep;
    const InjectionMor f(3, 6, {0, 1, 5});
    const IsometryMor vf = injection_to_isometry(f);

    auto image = [&](const ComplexMatrix& m) {
        // 6 = 2*3 with the first (2-dim) factor most significant
        return partial_trace(vf.matrix * m * dagger(vf.matrix), 2, 3, TraceFactor::First);
    };
    auto predicted = [](const ComplexMatrix& m) {
        ComplexMatrix p(3, 3);
        p(0, 0) = m(0, 0);
        p(0, 1) = m(0, 1);
        p(1, 0) = m(1, 0);
        p(1, 1) = m(1, 1);
        p(2, 2) = m(2, 2);
        return p;
    };

    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            const ComplexMatrix e = basis_matrix(i, j, 3);
            const double dev = frobenius_distance(image(e), predicted(e));
            rep.max_deviation = std::max(rep.max_deviation, dev);
            if (dev != 0.0) rep.basis_cases_match = false;
        }

    Rng rng(seed);
    for (std::size_t t = 0; t < random_trials; ++t) {
        ComplexMatrix m(3, 3);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) m(i, j) = rng.complex_gaussian();
        const ComplexMatrix out = image(m);
        const double dev = frobenius_distance(out, predicted(m));
        rep.max_deviation = std::max(rep.max_deviation, dev);
        if (dev > default_tol().atol) rep.random_cases_match = false;
        if (std::abs(m(0, 2)) > 1e-12 && frobenius_distance(out, m) == 0.0)
            rep.differs_when_m13_nonzero = false;
    }
    return rep;
}

/// All partitions of {0..m-1} as canonical class-index arrays.
inline std::vector<EquivRelation> enumerate_partitions(std::size_t m) {
    std::vector<EquivRelation> out;
    std::vector<std::size_t> raw(m, 0);
    // restricted growth strings
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t maxc) {
        if (i == m) {
            out.emplace_back(raw);
            return;
        }
        for (std::size_t c = 0; c <= maxc; ++c) {
            raw[i] = c;
            rec(i + 1, c == maxc ? maxc + 1 : maxc);
        }
    };
    if (m == 0)
        out.emplace_back(std::vector<std::size_t>{});
    else
        rec(0, 0);
    return out;
}

/// Every Tennent morphism m -> n, each exactly once. Guarded to small sizes.
inline std::vector<TennentMor> enumerate_tennent(std::size_t m, std::size_t n) {
    if (m > 4 || n > 4)
        throw std::invalid_argument("enumerate_tennent: sizes above 4 are not supported");
    std::vector<TennentMor> out;
    const auto partitions = enumerate_partitions(m);
    std::vector<std::size_t> map(m, 0);
    for (const auto& q : partitions) {
        // enumerate all functions m -> n, keep those injective on classes
        std::function<void(std::size_t)> rec = [&](std::size_t i) {
            if (i == m) {
                for (std::size_t x = 0; x < m; ++x)
                    for (std::size_t y = x + 1; y < m; ++y)
                        if (map[x] == map[y] && q.related(x, y)) return;
                out.emplace_back(m, n, q, map);
                return;
            }
            for (std::size_t v = 0; v < n; ++v) {
                map[i] = v;
                rec(i + 1);
            }
        };
        if (m == 0)
            out.emplace_back(0, n, q, std::vector<std::size_t>{});
        else
            rec(0);
    }
    return out;
}

struct TennentCat {
    using Mor = TennentMor;
    static constexpr const char* name = "Tennent";
    static std::size_t dom(const Mor& f) { return f.dom; }
    static std::size_t cod(const Mor& f) { return f.cod; }
    static Mor compose(const Mor& g, const Mor& f) { return tennent_compose(g, f); }
    static Mor tensor(const Mor& f, const Mor& g) { return tennent_tensor(f, g); }
    static Mor identity(std::size_t m) { return TennentMor::identity(m); }
    static Mor sym(std::size_t m, std::size_t n) { return tennent_symmetry(m, n); }
    static double distance(const Mor& f, const Mor& g) { return f == g ? 0.0 : 1.0; }
    static Mor random(Rng& rng, std::size_t max_dim) {
        const std::size_t m = 1 + rng.below(max_dim);
        const std::size_t n = 1 + rng.below(max_dim);
        for (;;) {
            std::vector<std::size_t> raw(m), map(m);
            for (auto& c : raw) c = rng.below(m);
            for (auto& v : map) v = rng.below(n);
            EquivRelation q(raw);
            bool ok = true;
            for (std::size_t i = 0; i < m && ok; ++i)
                for (std::size_t j = i + 1; j < m && ok; ++j)
                    if (map[i] == map[j] && q.related(i, j)) ok = false;
            if (ok) return TennentMor(m, n, std::move(q), std::move(map));
        }
    }
};

}  // namespace qaffine
