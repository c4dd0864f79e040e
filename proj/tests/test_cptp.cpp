#include <doctest.h>

#include "qaffine/cptp.hpp"
#include "qaffine/json_io.hpp"

using namespace qaffine;

namespace {

ComplexMatrix random_density(std::size_t n, Rng& rng) {
    ComplexMatrix g(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) g(i, j) = rng.complex_gaussian();
    ComplexMatrix rho = g * dagger(g);
    return rho * Complex{1.0 / trace(rho).real(), 0.0};
}

ComplexMatrix kraus_action(const std::vector<ComplexMatrix>& ks, const ComplexMatrix& rho) {
    ComplexMatrix out(ks[0].rows(), ks[0].rows());
    for (const auto& k : ks) out = out + k * rho * dagger(k);
    return out;
}

}  // namespace

TEST_CASE("channel from explicit Kraus family matches apply") {
    // amplitude damping with gamma = 0.36
    const double g = 0.36;
    ComplexMatrix k0(2, 2), k1(2, 2);
    k0(0, 0) = 1.0;
    k0(1, 1) = std::sqrt(1.0 - g);
    k1(0, 1) = std::sqrt(g);
    const std::vector<ComplexMatrix> ks{k0, k1};
    const CptpMor f = cptp_from_action(2, 2, [&](const ComplexMatrix& rho) {
        return kraus_action(ks, rho);
    });

    Rng rng(31);
    for (int t = 0; t < 20; ++t) {
        const ComplexMatrix rho = random_density(2, rng);
        CHECK(frobenius_distance(apply(f, rho), kraus_action(ks, rho)) < 1e-12);
    }
    CHECK(is_cptp(f.choi, 2, 2).ok());
}

TEST_CASE("E is functorial") {
    Rng rng(32);
    const IsometryMor v = random_isometry(2, 3, rng);
    const IsometryMor w = random_isometry(3, 5, rng);
    CHECK(cptp_distance(from_isometry(iso_compose(w, v)),
                        cptp_compose(from_isometry(w), from_isometry(v))) < 1e-9);
    CHECK(cptp_distance(from_isometry(iso_identity(3)), cptp_identity(3)) == 0.0);
}

TEST_CASE("E collapses global phase") {
    Rng rng(33);
    const IsometryMor v = random_isometry(2, 4, rng);
    const Complex phase = std::polar(1.0, 1.234);
    const IsometryMor vp(2, 4, v.matrix * phase);
    CHECK(cptp_distance(from_isometry(v), from_isometry(vp)) < 1e-12);
}

TEST_CASE("compose agrees with the action-level oracle") {
    Rng rng(34);
    for (int t = 0; t < 10; ++t) {
        const CptpMor f = random_cptp(2, 3, 2, rng);
        const CptpMor g = random_cptp(3, 2, 3, rng);
        const CptpMor gf = cptp_compose(g, f);
        for (int s = 0; s < 5; ++s) {
            const ComplexMatrix rho = random_density(2, rng);
            CHECK(frobenius_distance(apply(gf, rho), apply(g, apply(f, rho))) < 1e-10);
        }
    }
}

TEST_CASE("tensor agrees with the action-level oracle on product states") {
    Rng rng(35);
    for (int t = 0; t < 10; ++t) {
        const CptpMor f = random_cptp(2, 3, 2, rng);
        const CptpMor g = random_cptp(2, 2, 2, rng);
        const CptpMor fg = cptp_tensor(f, g);
        CHECK(fg.dom == 4);
        CHECK(fg.cod == 6);
        for (int s = 0; s < 5; ++s) {
            const ComplexMatrix rho = random_density(2, rng);
            const ComplexMatrix sig = random_density(2, rng);
            CHECK(frobenius_distance(apply(fg, kron(rho, sig)),
                                     kron(apply(f, rho), apply(g, sig))) < 1e-10);
        }
    }
}

TEST_CASE("tensor interchanges with compose") {
    Rng rng(36);
    const CptpMor f = random_cptp(2, 2, 2, rng);
    const CptpMor g = random_cptp(2, 3, 2, rng);
    const CptpMor h = random_cptp(2, 2, 2, rng);
    const CptpMor k = random_cptp(3, 2, 2, rng);
    CHECK(cptp_distance(cptp_tensor(cptp_compose(h, f), cptp_compose(k, g)),
                        cptp_compose(cptp_tensor(h, k), cptp_tensor(f, g))) < 1e-9);
}

TEST_CASE("trace and partial trace channels") {
    Rng rng(37);
    const ComplexMatrix rho = random_density(3, rng);
    const ComplexMatrix t = apply(trace_channel(3), rho);
    CHECK(std::abs(t(0, 0) - Complex{1.0, 0.0}) < 1e-12);

    // discarding half a Bell pair leaves the maximally mixed state
    ComplexMatrix bell(4, 1);
    bell(0, 0) = 1.0 / std::sqrt(2.0);
    bell(3, 0) = 1.0 / std::sqrt(2.0);
    const ComplexMatrix marg =
        apply(partial_trace_channel(2, 2), bell * dagger(bell));
    CHECK(frobenius_distance(marg, ComplexMatrix::identity(2) * Complex{0.5, 0.0}) < 1e-12);

    // partial_trace_channel equals id (x) trace_channel
    CHECK(cptp_distance(partial_trace_channel(2, 3),
                        cptp_tensor(cptp_identity(2), trace_channel(3))) < 1e-12);
}

TEST_CASE("transpose is positive but not completely positive") {
    ComplexMatrix choi(4, 4);
    // Choi of the transpose map is the SWAP matrix
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) choi(i * 2 + j, j * 2 + i) = 1.0;
    const auto rep = is_cptp(choi, 2, 2);
    CHECK_FALSE(rep.cp);
    CHECK(rep.tp);
    CHECK(rep.min_eigenvalue == doctest::Approx(-1.0));
    CHECK_THROWS_AS(CptpMor(2, 2, choi), std::invalid_argument);
}

TEST_CASE("non trace preserving map is rejected") {
    ComplexMatrix choi(4, 4);
    choi(0, 0) = 1.0;  // e_00 -> e_00, e_11 -> 0
    const auto rep = is_cptp(choi, 2, 2);
    CHECK(rep.cp);
    CHECK_FALSE(rep.tp);
}

TEST_CASE("apply is linear") {
    Rng rng(38);
    const CptpMor f = random_cptp(3, 2, 2, rng);
    const ComplexMatrix a = random_density(3, rng);
    const ComplexMatrix b = random_density(3, rng);
    const Complex w{0.3, 0.4};
    CHECK(frobenius_distance(apply(f, a * w + b), apply(f, a) * w + apply(f, b)) < 1e-10);
}

TEST_CASE("symmetry channel swaps factors") {
    Rng rng(39);
    const ComplexMatrix rho = random_density(2, rng);
    const ComplexMatrix sig = random_density(3, rng);
    CHECK(frobenius_distance(apply(cptp_symmetry(2, 3), kron(rho, sig)),
                             kron(sig, rho)) < 1e-12);
}

TEST_CASE("channel JSON round trip") {
    Rng rng(40);
    const CptpMor f = random_cptp(2, 3, 2, rng);
    const CptpMor g = cptp_from_json(nlohmann::json::parse(cptp_to_json(f).dump()));
    CHECK(g.dom == 2);
    CHECK(g.cod == 3);
    CHECK(cptp_distance(f, g) == 0.0);
}
