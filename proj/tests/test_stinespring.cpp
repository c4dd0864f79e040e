#include <doctest.h>

#include "qaffine/stinespring.hpp"

using namespace qaffine;

namespace {

ComplexMatrix random_density(std::size_t n, Rng& rng) {
    ComplexMatrix g(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) g(i, j) = rng.complex_gaussian();
    ComplexMatrix rho = g * dagger(g);
    return rho * Complex{1.0 / trace(rho).real(), 0.0};
}

}  // namespace

TEST_CASE("kraus_from_choi of the identity channel") {
    const KrausFamily fam = kraus_from_choi(cptp_identity(3));
    REQUIRE(fam.operators.size() == 1);
    CHECK(frobenius_distance(fam.operators[0], ComplexMatrix::identity(3)) < 1e-9);
}

TEST_CASE("kraus_from_choi of E(V) recovers V up to phase") {
    Rng rng(41);
    const IsometryMor v = random_isometry(2, 5, rng);
    const KrausFamily fam = kraus_from_choi(from_isometry(v));
    REQUIRE(fam.operators.size() == 1);
    // the phase convention pins a global phase, so compare projectors
    const ComplexMatrix k = fam.operators[0];
    CHECK(frobenius_distance(k * dagger(k), v.matrix * dagger(v.matrix)) < 1e-9);
    CHECK(frobenius_distance(dagger(k) * k, ComplexMatrix::identity(2)) < 1e-9);
}

TEST_CASE("kraus family reproduces the channel action") {
    Rng rng(42);
    for (int t = 0; t < 10; ++t) {
        const CptpMor f = random_cptp(3, 2, 2, rng);
        const KrausFamily fam = kraus_from_choi(f);
        // completeness: sum K* K = I
        ComplexMatrix s(3, 3);
        for (const auto& op : fam.operators) s = s + dagger(op) * op;
        CHECK(frobenius_distance(s, ComplexMatrix::identity(3)) < 1e-9);
        for (int u = 0; u < 5; ++u) {
            const ComplexMatrix rho = random_density(3, rng);
            CHECK(frobenius_distance(kraus_apply(fam, rho), apply(f, rho)) < 1e-9);
        }
    }
}

TEST_CASE("dilate produces a minimal dilation of the channel") {
    Rng rng(43);
    for (int t = 0; t < 10; ++t) {
        const CptpMor f = random_cptp(2, 3, 2, rng);
        const StinespringDilation d = dilate(f);
        CHECK(d.dom == 2);
        CHECK(d.cod == 3);
        CHECK(d.minimal);
        CHECK(is_isometry(d.isometry.matrix));
        CHECK(cptp_distance(channel_of_dilation(d), f) < 1e-9);
        CHECK(d.ancilla == choi_spectrum_above_rank_cut(f).size());
    }
}

TEST_CASE("dilation of the trace channel") {
    const StinespringDilation d = dilate(trace_channel(3));
    CHECK(d.cod == 1);
    CHECK(d.ancilla == 3);
    // the isometry is then a 3 -> 3 unitary
    CHECK(frobenius_distance(dagger(d.isometry.matrix) * d.isometry.matrix,
                             ComplexMatrix::identity(3)) < 1e-9);
}

TEST_CASE("kraus and isometry views are mutually inverse") {
    Rng rng(44);
    const CptpMor f = random_cptp(2, 2, 3, rng);
    const KrausFamily fam = kraus_from_choi(f);
    const IsometryMor v = isometry_from_kraus(fam);
    StinespringDilation d;
    d.dom = 2;
    d.cod = 2;
    d.ancilla = fam.operators.size();
    d.isometry = v;
    const KrausFamily back = kraus_of_dilation(d);
    REQUIRE(back.operators.size() == fam.operators.size());
    for (std::size_t k = 0; k < fam.operators.size(); ++k)
        CHECK(frobenius_distance(back.operators[k], fam.operators[k]) == 0.0);
}

TEST_CASE("factor_through_minimal on the minimal dilation is the identity") {
    Rng rng(45);
    const CptpMor f = random_cptp(2, 2, 2, rng);
    const StinespringDilation d = dilate(f);
    const IsometryMor t = factor_through_minimal(d);
    CHECK(frobenius_distance(t.matrix, ComplexMatrix::identity(d.ancilla)) < 1e-8);
}

TEST_CASE("factor_through_minimal recovers an injected padding") {
    Rng rng(46);
    const CptpMor f = random_cptp(2, 2, 2, rng);
    StinespringDilation padded = pad_to_power_of_two(dilate(f));
    const std::size_t r = dilate(f).ancilla;
    const IsometryMor t = factor_through_minimal(padded);
    CHECK(t.dom == r);
    CHECK(t.cod == padded.ancilla);
    const ComplexMatrix lifted =
        kron(ComplexMatrix::identity(2), t.matrix) * dilate(f).isometry.matrix;
    CHECK(frobenius_distance(lifted, padded.isometry.matrix) < 1e-8);
}

TEST_CASE("factor_through_minimal handles an arbitrary ancilla rotation") {
    Rng rng(47);
    const CptpMor f = random_cptp(2, 2, 2, rng);
    const StinespringDilation min = dilate(f);
    const IsometryMor u = random_isometry(min.ancilla, min.ancilla + 2, rng);
    StinespringDilation big;
    big.dom = min.dom;
    big.cod = min.cod;
    big.ancilla = min.ancilla + 2;
    big.isometry = iso_compose(iso_tensor(iso_identity(2), u), min.isometry);
    const IsometryMor t = factor_through_minimal(big);
    CHECK(frobenius_distance(t.matrix, u.matrix) < 1e-8);
}

TEST_CASE("connect_dilations joins two rewrites of the same channel") {
    Rng rng(49);
    for (int t = 0; t < 5; ++t) {
        const CptpMor f = random_cptp(2, 2, 2, rng);
        const StinespringDilation min = dilate(f);
        const IsometryMor u1 = random_isometry(min.ancilla, min.ancilla + 1, rng);
        const IsometryMor u2 = random_isometry(min.ancilla, min.ancilla + 2, rng);
        StinespringDilation d1 = min, d2 = min;
        d1.ancilla = min.ancilla + 1;
        d1.isometry = iso_compose(iso_tensor(iso_identity(2), u1), min.isometry);
        d1.minimal = false;
        d2.ancilla = min.ancilla + 2;
        d2.isometry = iso_compose(iso_tensor(iso_identity(2), u2), min.isometry);
        d2.minimal = false;

        const DilationConnection conn = connect_dilations(d1, d2);
        CHECK(conn.c == d1.ancilla + d2.ancilla - min.ancilla);
        CHECK(is_isometry(conn.into_c_from_a.matrix));
        CHECK(is_isometry(conn.into_c_from_b.matrix));
        const ComplexMatrix lhs =
            kron(ComplexMatrix::identity(2), conn.into_c_from_a.matrix) * d1.isometry.matrix;
        const ComplexMatrix rhs =
            kron(ComplexMatrix::identity(2), conn.into_c_from_b.matrix) * d2.isometry.matrix;
        CHECK(frobenius_distance(lhs, rhs) < 1e-8);
    }
}

TEST_CASE("connect_dilations of a dilation with itself") {
    Rng rng(50);
    const StinespringDilation d = dilate(random_cptp(2, 3, 2, rng));
    const DilationConnection conn = connect_dilations(d, d);
    CHECK(conn.c == d.ancilla);
    CHECK(frobenius_distance(conn.into_c_from_a.matrix, conn.into_c_from_b.matrix) < 1e-8);
}

TEST_CASE("connect_dilations rejects different channels") {
    Rng rng(51);
    const StinespringDilation d1 = dilate(random_cptp(2, 2, 2, rng));
    const StinespringDilation d2 = dilate(random_cptp(2, 2, 2, rng));
    CHECK_THROWS_AS(connect_dilations(d1, d2), std::invalid_argument);
}

TEST_CASE("next_power_of_two") {
    CHECK(next_power_of_two(1) == 1);
    CHECK(next_power_of_two(2) == 2);
    CHECK(next_power_of_two(3) == 4);
    CHECK(next_power_of_two(5) == 8);
    CHECK(next_power_of_two(8) == 8);
}

TEST_CASE("pad_to_power_of_two preserves the channel") {
    Rng rng(52);
    const CptpMor f = random_cptp(2, 2, 3, rng);
    const StinespringDilation d = dilate(f);
    const StinespringDilation p = pad_to_power_of_two(d);
    CHECK(p.ancilla == next_power_of_two(d.ancilla));
    CHECK(is_isometry(p.isometry.matrix));
    CHECK(cptp_distance(channel_of_dilation(p), f) < 1e-9);
    if (p.ancilla != d.ancilla) CHECK_FALSE(p.minimal);
}

TEST_CASE("minimal ancilla cannot be shrunk") {
    Rng rng(53);
    const CptpMor f = random_cptp(2, 2, 2, rng);
    const KrausFamily fam = kraus_from_choi(f);
    REQUIRE(fam.operators.size() >= 2);
    // dropping the smallest Kraus operator breaks trace preservation
    KrausFamily truncated = fam;
    truncated.operators.pop_back();
    ComplexMatrix s(2, 2);
    for (const auto& op : truncated.operators) s = s + dagger(op) * op;
    CHECK(frobenius_distance(s, ComplexMatrix::identity(2)) > 1e-6);
}
