#include <doctest.h>

#include "qaffine/category.hpp"

using namespace qaffine;

TEST_CASE("smc axioms hold in every base category") {
    CHECK(check_smc_axioms<IsometryCat>(1, 60).max_deviation < 1e-9);
    CHECK(check_smc_axioms<CptpCat>(2, 25).max_deviation < 1e-9);
    CHECK(check_smc_axioms<InjectionCat>(3, 200).max_deviation == 0.0);
    CHECK(check_smc_axioms<FunctionCat>(4, 200).max_deviation == 0.0);
}

namespace {

// deliberately broken variant: tensor drops the symmetry in its naturality,
// detected by a nonzero deviation
struct TwistedIsometryCat : IsometryCat {
    static Mor sym(std::size_t m, std::size_t n) { return iso_identity(m * n); }
};

}  // namespace

TEST_CASE("the axiom checker detects a broken symmetry") {
    const auto rep = check_smc_axioms<TwistedIsometryCat>(5, 40);
    CHECK(rep.max_deviation > 1e-3);
}

TEST_CASE("reflect_embed is functorial up to the oracle") {
    auto oracle = std::make_shared<ChoiOracle>();
    Rng rng(61);
    const IsometryMor v = random_isometry(2, 3, rng);
    const IsometryMor w = random_isometry(3, 4, rng);

    const auto ev = reflect_embed<IsometryCat>(v, oracle);
    const auto ew = reflect_embed<IsometryCat>(w, oracle);
    const ReflectionMor<IsometryCat> composite{
        reflect_compose(ew.representative, ev.representative), oracle};
    const auto direct = reflect_embed<IsometryCat>(iso_compose(w, v), oracle);
    CHECK(composite.equals(direct));

    const ReflectionMor<IsometryCat> tensored{
        reflect_tensor(ev.representative, ew.representative), oracle};
    const auto direct_t = reflect_embed<IsometryCat>(iso_tensor(v, w), oracle);
    CHECK(tensored.equals(direct_t));
}

TEST_CASE("embedding is faithful on isometries up to phase only") {
    auto oracle = std::make_shared<ChoiOracle>();
    Rng rng(62);
    const IsometryMor v = random_isometry(2, 4, rng);
    const IsometryMor w = random_isometry(2, 4, rng);
    CHECK_FALSE(reflect_embed<IsometryCat>(v, oracle).equals(
        reflect_embed<IsometryCat>(w, oracle)));
    const IsometryMor vp(2, 4, v.matrix * std::polar(1.0, 0.7));
    CHECK(reflect_embed<IsometryCat>(v, oracle).equals(
        reflect_embed<IsometryCat>(vp, oracle)));
}

TEST_CASE("rewrite steps do not change the equivalence class") {
    auto oracle = std::make_shared<ChoiOracle>();
    Rng rng(63);
    for (int t = 0; t < 10; ++t) {
        Dilation<IsometryCat> d;
        d.dom = 2;
        d.cod = 2;
        d.ancilla = 2;
        d.morphism = random_isometry(2, 4, rng);
        d.validate();
        const IsometryMor g = random_isometry(2, 2 + rng.below(3), rng);
        const Dilation<IsometryCat> rewritten = rewrite_step(d, g);
        CHECK(rewritten.ancilla == g.cod);
        CHECK(oracle->equivalent(d, rewritten));
    }
}

TEST_CASE("distinct channels give inequivalent dilations") {
    auto oracle = std::make_shared<ChoiOracle>();
    Rng rng(64);
    Dilation<IsometryCat> d1, d2;
    d1.dom = d2.dom = 2;
    d1.cod = d2.cod = 2;
    d1.ancilla = d2.ancilla = 2;
    d1.morphism = random_isometry(2, 4, rng);
    d2.morphism = random_isometry(2, 4, rng);
    CHECK_FALSE(oracle->equivalent(d1, d2));
}

TEST_CASE("reflection composition laws hold through the oracle") {
    auto oracle = std::make_shared<ChoiOracle>();
    Rng rng(65);
    Dilation<IsometryCat> f, g, h;
    f.dom = 2; f.cod = 2; f.ancilla = 2; f.morphism = random_isometry(2, 4, rng);
    g.dom = 2; g.cod = 3; g.ancilla = 2; g.morphism = random_isometry(2, 6, rng);
    h.dom = 3; h.cod = 2; h.ancilla = 2; h.morphism = random_isometry(3, 4, rng);

    const auto id2 = reflect_embed_dilation<IsometryCat>(iso_identity(2));
    CHECK(oracle->equivalent(reflect_compose(id2, f), f));
    CHECK(oracle->equivalent(reflect_compose(f, id2), f));
    CHECK(oracle->equivalent(reflect_compose(h, reflect_compose(g, f)),
                             reflect_compose(reflect_compose(h, g), f)));
}

TEST_CASE("discard is terminal in the reflection") {
    auto oracle = std::make_shared<ChoiOracle>();
    Rng rng(66);
    // any dilation with codomain 1 equals the canonical discard precomposed
    // with nothing: f ; ! = ! for every f
    Dilation<IsometryCat> f;
    f.dom = 2; f.cod = 3; f.ancilla = 2; f.morphism = random_isometry(2, 6, rng);
    const auto bang3 = reflect_discard_dilation<IsometryCat>(3);
    const auto bang2 = reflect_discard_dilation<IsometryCat>(2);
    CHECK(oracle->equivalent(reflect_compose(bang3, f), bang2));

    // and the discard's induced channel is the trace
    CHECK(cptp_distance(oracle->induced_channel(bang3), trace_channel(3)) < 1e-9);
}

TEST_CASE("normal form is a minimal equivalent dilation") {
    auto oracle = std::make_shared<ChoiOracle>();
    CHECK(oracle->has_normal_form());
    Rng rng(67);
    Dilation<IsometryCat> d;
    d.dom = 2; d.cod = 2; d.ancilla = 3; d.morphism = random_isometry(2, 6, rng);
    const auto nf = oracle->normalize(d);
    CHECK(oracle->equivalent(nf, d));
    CHECK(nf.ancilla <= d.ancilla);
    CHECK(nf.ancilla == choi_spectrum_above_rank_cut(oracle->induced_channel(d)).size());
}

TEST_CASE("universal extension into CPTP recovers the identity functor") {
    IsometryFunctor<CptpCat> e;
    e.on_morphism = [](const IsometryMor& v) { return from_isometry(v); };
    e.discard = [](std::size_t a) { return trace_channel(a); };

    Rng rng(68);
    for (int t = 0; t < 5; ++t) {
        const CptpMor f = random_cptp(2, 2, 2, rng);
        CHECK(cptp_distance(universal_extend(e, f), f) < 1e-8);
    }
    // on embedded isometries the extension agrees with the functor itself
    const IsometryMor v = random_isometry(2, 3, rng);
    CHECK(cptp_distance(universal_extend(e, from_isometry(v)), e.on_morphism(v)) < 1e-8);
    // and it sends the trace channel to the discard
    CHECK(cptp_distance(universal_extend(e, trace_channel(3)), trace_channel(3)) < 1e-8);
}

TEST_CASE("universal extension rejects a non-functorial assignment") {
    IsometryFunctor<CptpCat> broken;
    broken.discard = [](std::size_t a) { return trace_channel(a); };
    // conjugating unitaries reverses composition, so this is not a functor
    broken.on_morphism = [](const IsometryMor& v) {
        if (v.dom == v.cod) return from_isometry(IsometryMor(v.dom, v.cod, dagger(v.matrix)));
        return from_isometry(v);
    };
    Rng rng(69);
    const CptpMor f = random_cptp(2, 2, 2, rng);
    CHECK_THROWS_AS(universal_extend(broken, f), std::invalid_argument);
}
