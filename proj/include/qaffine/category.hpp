#pragma once

#include <limits>
#include <memory>
#include <stdexcept>
#include <string>

#include "qaffine/cptp.hpp"
#include "qaffine/isometry.hpp"
#include "qaffine/stinespring.hpp"

namespace qaffine {

// Each concrete category is a traits struct over its morphism type. Objects
// are natural numbers with multiplication as the monoidal product and 1 as
// the unit; `distance` is the category's notion of approximate equality
// (exact 0/1 for the combinatorial categories).

struct IsometryCat {
    using Mor = IsometryMor;
    static constexpr const char* name = "Isometry";
    static std::size_t dom(const Mor& f) { return f.dom; }
    static std::size_t cod(const Mor& f) { return f.cod; }
    static Mor compose(const Mor& g, const Mor& f) { return iso_compose(g, f); }
    static Mor tensor(const Mor& f, const Mor& g) { return iso_tensor(f, g); }
    static Mor identity(std::size_t m) { return iso_identity(m); }
    static Mor sym(std::size_t m, std::size_t n) { return symmetry(m, n); }
    static double distance(const Mor& f, const Mor& g) {
        if (f.dom != g.dom || f.cod != g.cod) return std::numeric_limits<double>::infinity();
        return frobenius_distance(f.matrix, g.matrix);
    }
    static Mor random(Rng& rng, std::size_t max_dim) {
        const std::size_t m = 1 + rng.below(max_dim);
        const std::size_t n = m + rng.below(max_dim - m + 1);
        return random_isometry(m, n, rng);
    }
};

struct CptpCat {
    using Mor = CptpMor;
    static constexpr const char* name = "CPTP";
    static std::size_t dom(const Mor& f) { return f.dom; }
    static std::size_t cod(const Mor& f) { return f.cod; }
    static Mor compose(const Mor& g, const Mor& f) { return cptp_compose(g, f); }
    static Mor tensor(const Mor& f, const Mor& g) { return cptp_tensor(f, g); }
    static Mor identity(std::size_t m) { return cptp_identity(m); }
    static Mor sym(std::size_t m, std::size_t n) { return cptp_symmetry(m, n); }
    static double distance(const Mor& f, const Mor& g) {
        if (f.dom != g.dom || f.cod != g.cod) return std::numeric_limits<double>::infinity();
        return cptp_distance(f, g);
    }
    static Mor random(Rng& rng, std::size_t max_dim) {
        const std::size_t m = 1 + rng.below(max_dim);
        const std::size_t n = 1 + rng.below(max_dim);
        const std::size_t a_min = (m + n - 1) / n;  // ensure m <= n*a
        const std::size_t a = a_min + rng.below(2);
        return random_cptp(m, n, a, rng);
    }
};

struct InjectionCat {
    using Mor = InjectionMor;
    static constexpr const char* name = "Injection";
    static std::size_t dom(const Mor& f) { return f.dom; }
    static std::size_t cod(const Mor& f) { return f.cod; }
    static Mor compose(const Mor& g, const Mor& f) { return inj_compose(g, f); }
    static Mor tensor(const Mor& f, const Mor& g) { return inj_tensor(f, g); }
    static Mor identity(std::size_t m) { return InjectionMor::identity(m); }
    static Mor sym(std::size_t m, std::size_t n) { return inj_symmetry(m, n); }
    static double distance(const Mor& f, const Mor& g) {
        if (f.dom != g.dom || f.cod != g.cod || f.map != g.map) return 1.0;
        return 0.0;
    }
    static Mor random(Rng& rng, std::size_t max_dim) {
        const std::size_t m = 1 + rng.below(max_dim);
        const std::size_t n = m + rng.below(max_dim - m + 1);
        return random_injection(m, n, rng);
    }
};

struct FunctionCat {
    using Mor = FunctionMor;
    static constexpr const char* name = "Function";
    static std::size_t dom(const Mor& f) { return f.dom; }
    static std::size_t cod(const Mor& f) { return f.cod; }
    static Mor compose(const Mor& g, const Mor& f) { return fun_compose(g, f); }
    static Mor tensor(const Mor& f, const Mor& g) { return fun_tensor(f, g); }
    static Mor identity(std::size_t m) {
        std::vector<std::size_t> id(m);
        for (std::size_t i = 0; i < m; ++i) id[i] = i;
        return FunctionMor(m, m, std::move(id));
    }
    static Mor sym(std::size_t m, std::size_t n) {
        const InjectionMor s = inj_symmetry(m, n);
        return FunctionMor(s.dom, s.cod, s.map);
    }
    static double distance(const Mor& f, const Mor& g) {
        if (f.dom != g.dom || f.cod != g.cod || f.map != g.map) return 1.0;
        return 0.0;
    }
    static Mor random(Rng& rng, std::size_t max_dim) {
        const std::size_t m = 1 + rng.below(max_dim);
        const std::size_t n = 1 + rng.below(max_dim);
        std::vector<std::size_t> map(m);
        for (auto& v : map) v = rng.below(n);
        return FunctionMor(m, n, std::move(map));
    }
};

struct AxiomReport {
    std::string category;
    std::size_t samples = 0;
    double max_deviation = 0.0;
    bool pass(double atol) const { return max_deviation <= atol; }
};

/// Sample-based check of the symmetric monoidal axioms: tensor associativity
/// and unit laws on morphisms, the symmetry involution, the degenerate
/// triangle, and naturality of the symmetry.
template <class Cat>
AxiomReport check_smc_axioms(std::uint64_t seed, std::size_t count, std::size_t max_dim = 3) {
    Rng rng(seed);
    AxiomReport rep;
    rep.category = Cat::name;
    rep.samples = count;
    auto note = [&](double d) { rep.max_deviation = std::max(rep.max_deviation, d); };
    for (std::size_t trial = 0; trial < count; ++trial) {
        const auto f = Cat::random(rng, max_dim);
        const auto g = Cat::random(rng, max_dim);
        const auto h = Cat::random(rng, max_dim);

        note(Cat::distance(Cat::tensor(Cat::tensor(f, g), h), Cat::tensor(f, Cat::tensor(g, h))));
        note(Cat::distance(Cat::tensor(f, Cat::identity(1)), f));
        note(Cat::distance(Cat::tensor(Cat::identity(1), f), f));

        const std::size_t am = 1 + rng.below(max_dim);
        const std::size_t bn = 1 + rng.below(max_dim);
        const std::size_t cp = 1 + rng.below(max_dim);
        note(Cat::distance(Cat::compose(Cat::sym(bn, am), Cat::sym(am, bn)),
                           Cat::identity(am * bn)));
        // triangle: sigma_{A,B(x)C} = (B (x) sigma_{A,C})(sigma_{A,B} (x) C)
        note(Cat::distance(Cat::sym(am, bn * cp),
                           Cat::compose(Cat::tensor(Cat::identity(bn), Cat::sym(am, cp)),
                                        Cat::tensor(Cat::sym(am, bn), Cat::identity(cp)))));
        // naturality: sigma (f (x) g) = (g (x) f) sigma
        note(Cat::distance(
            Cat::compose(Cat::sym(Cat::cod(f), Cat::cod(g)), Cat::tensor(f, g)),
            Cat::compose(Cat::tensor(g, f), Cat::sym(Cat::dom(f), Cat::dom(g)))));
    }
    return rep;
}

/// A dilation pair (a, f: m -> n (x) a) in a base category.
template <class Cat>
struct Dilation {
    std::size_t dom = 1;
    std::size_t cod = 1;
    std::size_t ancilla = 1;
    typename Cat::Mor morphism;  // dom -> cod * ancilla

    void validate() const {
        if (Cat::dom(morphism) != dom || Cat::cod(morphism) != cod * ancilla)
            throw std::invalid_argument("Dilation: morphism shape does not match dom/cod/ancilla");
    }
};

/// Decides equivalence of dilations under the relation generated by
/// (a, f) ~ (b, (n (x) g) f).
template <class Cat>
class DilationOracle {
public:
    virtual ~DilationOracle() = default;
    virtual bool equivalent(const Dilation<Cat>& d1, const Dilation<Cat>& d2) const = 0;
    virtual bool has_normal_form() const { return false; }
};

/// Morphism of the affine reflection L(C): an equivalence class of dilations,
/// compared through the per-category oracle.
template <class Cat>
struct ReflectionMor {
    Dilation<Cat> representative;
    std::shared_ptr<const DilationOracle<Cat>> oracle;

    bool equals(const ReflectionMor& other) const {
        return oracle->equivalent(representative, other.representative);
    }
};

template <class Cat>
Dilation<Cat> reflect_embed_dilation(const typename Cat::Mor& f) {
    Dilation<Cat> d;
    d.dom = Cat::dom(f);
    d.cod = Cat::cod(f);
    d.ancilla = 1;
    d.morphism = f;  // n (x) 1 = n strictly
    return d;
}

template <class Cat>
ReflectionMor<Cat> reflect_embed(const typename Cat::Mor& f,
                                 std::shared_ptr<const DilationOracle<Cat>> oracle) {
    return ReflectionMor<Cat>{reflect_embed_dilation<Cat>(f), std::move(oracle)};
}

/// (W, b) after (V, a): morphism (W (x) id_a) V, ancilla b*a.
template <class Cat>
Dilation<Cat> reflect_compose(const Dilation<Cat>& g_dil, const Dilation<Cat>& f_dil) {
    if (f_dil.cod != g_dil.dom)
        throw std::invalid_argument("reflect_compose: codomain/domain mismatch");
    Dilation<Cat> out;
    out.dom = f_dil.dom;
    out.cod = g_dil.cod;
    out.ancilla = g_dil.ancilla * f_dil.ancilla;
    out.morphism = Cat::compose(Cat::tensor(g_dil.morphism, Cat::identity(f_dil.ancilla)),
                                f_dil.morphism);
    return out;
}

/// (V, a) (x) (W, b): morphism (id_n (x) sigma_{a,q} (x) id_b)(V (x) W), ancilla a*b.
template <class Cat>
Dilation<Cat> reflect_tensor(const Dilation<Cat>& f_dil, const Dilation<Cat>& g_dil) {
    Dilation<Cat> out;
    out.dom = f_dil.dom * g_dil.dom;
    out.cod = f_dil.cod * g_dil.cod;
    out.ancilla = f_dil.ancilla * g_dil.ancilla;
    const auto route = Cat::tensor(
        Cat::identity(f_dil.cod),
        Cat::tensor(Cat::sym(f_dil.ancilla, g_dil.cod), Cat::identity(g_dil.ancilla)));
    out.morphism = Cat::compose(route, Cat::tensor(f_dil.morphism, g_dil.morphism));
    return out;
}

/// Discard n -> 1: the dilation (n, id_n) with id_n read as n -> 1 (x) n.
template <class Cat>
Dilation<Cat> reflect_discard_dilation(std::size_t n) {
    Dilation<Cat> d;
    d.dom = n;
    d.cod = 1;
    d.ancilla = n;
    d.morphism = Cat::identity(n);
    return d;
}

template <class Cat>
ReflectionMor<Cat> reflect_discard(std::size_t n,
                                   std::shared_ptr<const DilationOracle<Cat>> oracle) {
    return ReflectionMor<Cat>{reflect_discard_dilation<Cat>(n), std::move(oracle)};
}

/// One generating step of the equivalence: (a, f) -> (b, (n (x) g) f).
template <class Cat>
Dilation<Cat> rewrite_step(const Dilation<Cat>& d, const typename Cat::Mor& g) {
    if (Cat::dom(g) != d.ancilla)
        throw std::invalid_argument("rewrite_step: g must start at the ancilla");
    Dilation<Cat> out;
    out.dom = d.dom;
    out.cod = d.cod;
    out.ancilla = Cat::cod(g);
    out.morphism = Cat::compose(Cat::tensor(Cat::identity(d.cod), g), d.morphism);
    return out;
}

/// L(Isometry) oracle: two dilations are equivalent iff they induce the same
/// channel (complete for isometries by the dilation uniqueness lemma).
class ChoiOracle : public DilationOracle<IsometryCat> {
public:
    explicit ChoiOracle(ToleranceConfig tol = default_tol()) : tol_(tol) {}

    bool equivalent(const Dilation<IsometryCat>& d1,
                    const Dilation<IsometryCat>& d2) const override {
        if (d1.dom != d2.dom || d1.cod != d2.cod) return false;
        return cptp_distance(induced_channel(d1), induced_channel(d2)) <= tol_.atol;
    }

    bool has_normal_form() const override { return true; }

    /// Normal form: the minimal Stinespring dilation of the induced channel.
    Dilation<IsometryCat> normalize(const Dilation<IsometryCat>& d) const {
        const StinespringDilation min = dilate(induced_channel(d), tol_);
        Dilation<IsometryCat> out;
        out.dom = min.dom;
        out.cod = min.cod;
        out.ancilla = min.ancilla;
        out.morphism = min.isometry;
        return out;
    }

    CptpMor induced_channel(const Dilation<IsometryCat>& d) const {
        StinespringDilation sd;
        sd.dom = d.dom;
        sd.cod = d.cod;
        sd.ancilla = d.ancilla;
        sd.isometry = d.morphism;
        return channel_of_dilation(sd, tol_);
    }

private:
    ToleranceConfig tol_;
};

/// Functor data for the universal extension: a strict symmetric monoidal
/// F: Isometry -> D together with D's discard at each image object.
template <class D>
struct IsometryFunctor {
    std::function<typename D::Mor(const IsometryMor&)> on_morphism;
    std::function<typename D::Mor(std::size_t)> discard;  // F(a) -> unit in D
};

/// The unique extension along E: F_hat(f) = (F(n) (x) !) F(V) for a minimal
/// dilation (V, a) of f. Monoidality of F is spot-checked on a few samples.
template <class D>
typename D::Mor universal_extend(const IsometryFunctor<D>& functor, const CptpMor& f,
                                 const ToleranceConfig& tol = default_tol(),
                                 std::uint64_t check_seed = 7, std::size_t check_samples = 3) {
    Rng rng(check_seed);
    for (std::size_t s = 0; s < check_samples; ++s) {
        const IsometryMor u = random_isometry(2, 2, rng);
        const IsometryMor v = random_isometry(2, 2, rng);
        const double dc = D::distance(functor.on_morphism(iso_compose(u, v)),
                                      D::compose(functor.on_morphism(u), functor.on_morphism(v)));
        const double dt = D::distance(functor.on_morphism(iso_tensor(u, v)),
                                      D::tensor(functor.on_morphism(u), functor.on_morphism(v)));
        if (dc > tol.atol || dt > tol.atol)
            throw std::invalid_argument("universal_extend: functor fails monoidality spot-check");
    }
    const StinespringDilation d = dilate(f, tol);
    const auto fv = functor.on_morphism(d.isometry);
    const auto keep = functor.on_morphism(iso_identity(d.cod));
    return D::compose(D::tensor(keep, functor.discard(d.ancilla)), fv);
}

}  // namespace qaffine
