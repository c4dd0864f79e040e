#pragma once

#include <chrono>
#include <cmath>
#include <string>
#include <vector>

#include "qaffine/category.hpp"
#include "qaffine/circuit.hpp"
#include "qaffine/cptp.hpp"
#include "qaffine/stinespring.hpp"
#include "qaffine/tennent.hpp"

namespace qaffine {

struct CriterionResult {
    int index = 0;
    std::string name;
    bool passed = false;
    double max_deviation = 0.0;
    double seconds = 0.0;
    std::string detail;
};

namespace verify_detail {

inline Dilation<IsometryCat> as_reflection_dilation(const StinespringDilation& d) {
    Dilation<IsometryCat> out;
    out.dom = d.dom;
    out.cod = d.cod;
    out.ancilla = d.ancilla;
    out.morphism = d.isometry;
    return out;
}

inline StinespringDilation as_stinespring(const Dilation<IsometryCat>& d) {
    StinespringDilation out;
    out.dom = d.dom;
    out.cod = d.cod;
    out.ancilla = d.ancilla;
    out.isometry = d.morphism;
    return out;
}

inline std::size_t choi_rank(const CptpMor& f, const ToleranceConfig& tol) {
    return choi_spectrum_above_rank_cut(f, tol).size();
}

/// A dilation of f obtained from the minimal one by a random rewrite step.
inline StinespringDilation random_rewrite_of_minimal(const CptpMor& f, Rng& rng,
                                                     const ToleranceConfig& tol) {
    const StinespringDilation min = dilate(f, tol);
    const std::size_t b = min.ancilla + rng.below(3);
    const IsometryMor g = random_isometry(min.ancilla, b, rng);
    const auto rewritten = rewrite_step(as_reflection_dilation(min), g);
    return as_stinespring(rewritten);
}

}  // namespace verify_detail

/// 1. Dilation round trip: reconstruction from the minimal dilation, and
/// minimal ancilla = numerical Choi rank.
inline CriterionResult criterion_stinespring_round_trip(std::uint64_t seed,
                                                        const ToleranceConfig& tol) {
    CriterionResult res{1, "stinespring round trip"};
    Rng rng(seed);
    bool rank_ok = true;
    for (int t = 0; t < 100; ++t) {
        const std::size_t m = 1 + rng.below(4);
        const std::size_t n = 1 + rng.below(4);
        const std::size_t a = (m + n - 1) / n + rng.below(2);
        const CptpMor f = random_cptp(m, n, a, rng);
        const StinespringDilation d = dilate(f, tol);
        res.max_deviation =
            std::max(res.max_deviation, cptp_distance(channel_of_dilation(d, tol), f));
        if (d.ancilla != verify_detail::choi_rank(f, tol)) rank_ok = false;
    }
    res.passed = rank_ok && res.max_deviation <= 1e-9;
    if (!rank_ok) res.detail = "minimal ancilla != Choi rank";
    return res;
}

/// 2. Dilation uniqueness: connecting isometries exist with small residual.
inline CriterionResult criterion_dilation_uniqueness(std::uint64_t seed,
                                                     const ToleranceConfig& tol) {
    CriterionResult res{2, "dilation uniqueness (connecting isometries)"};
    Rng rng(seed);
    bool isometric = true;
    for (int t = 0; t < 100; ++t) {
        const std::size_t m = 1 + rng.below(3);
        const std::size_t n = 1 + rng.below(3);
        const std::size_t a = (m + n - 1) / n + rng.below(2);
        const CptpMor f = random_cptp(m, n, a, rng);
        const StinespringDilation d1 = verify_detail::random_rewrite_of_minimal(f, rng, tol);
        const StinespringDilation d2 = verify_detail::random_rewrite_of_minimal(f, rng, tol);
        const DilationConnection conn = connect_dilations(d1, d2, tol);
        const ComplexMatrix lhs =
            kron(ComplexMatrix::identity(n), conn.into_c_from_a.matrix) * d1.isometry.matrix;
        const ComplexMatrix rhs =
            kron(ComplexMatrix::identity(n), conn.into_c_from_b.matrix) * d2.isometry.matrix;
        res.max_deviation = std::max(res.max_deviation, frobenius_distance(lhs, rhs));
        const ToleranceConfig strict{1e-9, tol.rank_rtol};
        if (!is_isometry(conn.into_c_from_a.matrix, strict) ||
            !is_isometry(conn.into_c_from_b.matrix, strict))
            isometric = false;
    }
    res.passed = isometric && res.max_deviation <= 1e-9;
    if (!isometric) res.detail = "connecting morphism fails the isometry check";
    return res;
}

/// 3. Composition and tensor dilation formulas match direct channel
/// composition/tensor.
inline CriterionResult criterion_dilation_formulas(std::uint64_t seed,
                                                   const ToleranceConfig& tol) {
    CriterionResult res{3, "composition/tensor dilation formulas"};
    Rng rng(seed);
    for (int t = 0; t < 100; ++t) {
        {
            const std::size_t m = 1 + rng.below(3), n = 1 + rng.below(3), p = 1 + rng.below(3);
            const CptpMor f = random_cptp(m, n, (m + n - 1) / n + rng.below(2), rng);
            const CptpMor g = random_cptp(n, p, (n + p - 1) / p + rng.below(2), rng);
            const auto df = verify_detail::as_reflection_dilation(dilate(f, tol));
            const auto dg = verify_detail::as_reflection_dilation(dilate(g, tol));
            const CptpMor via_dilation = channel_of_dilation(
                verify_detail::as_stinespring(reflect_compose(dg, df)), tol);
            res.max_deviation =
                std::max(res.max_deviation, cptp_distance(via_dilation, cptp_compose(g, f, tol)));
        }
        {
            const std::size_t m = 1 + rng.below(2), n = 1 + rng.below(2);
            const std::size_t p = 1 + rng.below(2), q = 1 + rng.below(2);
            const CptpMor f = random_cptp(m, n, (m + n - 1) / n + rng.below(2), rng);
            const CptpMor g = random_cptp(p, q, (p + q - 1) / q + rng.below(2), rng);
            const auto df = verify_detail::as_reflection_dilation(dilate(f, tol));
            const auto dg = verify_detail::as_reflection_dilation(dilate(g, tol));
            const CptpMor via_dilation = channel_of_dilation(
                verify_detail::as_stinespring(reflect_tensor(df, dg)), tol);
            res.max_deviation =
                std::max(res.max_deviation, cptp_distance(via_dilation, cptp_tensor(f, g, tol)));
        }
    }
    res.passed = res.max_deviation <= 1e-9;
    return res;
}

/// 4. Terminality of the unit: every channel to 1 is the trace, and any two
/// dilations to 1 are oracle-equivalent.
inline CriterionResult criterion_terminality(std::uint64_t seed, const ToleranceConfig& tol) {
    CriterionResult res{4, "terminality of the unit"};
    Rng rng(seed);
    bool oracle_ok = true;
    const auto oracle = std::make_shared<ChoiOracle>(tol);
    for (int t = 0; t < 50; ++t) {
        const std::size_t n = 1 + rng.below(4);
        const CptpMor f = random_cptp(n, 1, n + rng.below(2), rng);
        res.max_deviation = std::max(res.max_deviation, cptp_distance(f, trace_channel(n)));

        const std::size_t m = 1 + rng.below(4);
        Dilation<IsometryCat> d1;
        d1.dom = m;
        d1.cod = 1;
        d1.ancilla = m + rng.below(2);
        d1.morphism = random_isometry(m, d1.ancilla, rng);
        Dilation<IsometryCat> d2;
        d2.dom = m;
        d2.cod = 1;
        d2.ancilla = m + rng.below(2);
        d2.morphism = random_isometry(m, d2.ancilla, rng);
        if (!oracle->equivalent(d1, d2)) oracle_ok = false;
    }
    res.passed = oracle_ok && res.max_deviation <= 1e-9;
    if (!oracle_ok) res.detail = "two dilations to the unit were judged inequivalent";
    return res;
}

/// 5. Universal extension along E with F = E reproduces the input channel.
inline CriterionResult criterion_universal_extension(std::uint64_t seed,
                                                     const ToleranceConfig& tol) {
    CriterionResult res{5, "universal extension fixed point"};
    Rng rng(seed);
    IsometryFunctor<CptpCat> functor;
    functor.on_morphism = [&](const IsometryMor& v) { return from_isometry(v, tol); };
    functor.discard = [](std::size_t a) { return trace_channel(a); };
    for (int t = 0; t < 50; ++t) {
        const std::size_t m = 1 + rng.below(3);
        const std::size_t n = 1 + rng.below(3);
        const CptpMor f = random_cptp(m, n, (m + n - 1) / n + rng.below(2), rng);
        const CptpMor ext = universal_extend<CptpCat>(functor, f, tol);
        res.max_deviation = std::max(res.max_deviation, cptp_distance(ext, f));
    }
    res.passed = res.max_deviation <= 1e-9;
    return res;
}

/// 6. The Function-category counterexample, with exact 0/1 arithmetic on the
/// basis matrices.
inline CriterionResult criterion_counterexample(std::uint64_t seed, const ToleranceConfig&) {
    CriterionResult res{6, "no functor through Function (counterexample)"};
    const CounterexampleReport rep = function_counterexample_check(seed);
    res.max_deviation = rep.basis_cases_match ? 0.0 : rep.max_deviation;
    res.passed = rep.ok();
    if (!rep.basis_cases_match) res.detail = "basis-matrix image differs from the predicted matrix";
    if (!rep.differs_when_m13_nonzero) res.detail = "image failed to differ from M with m13 != 0";
    return res;
}

/// 7. Faithfulness of Tennent -> CPTP on the full enumeration up to 3, with f
/// and Q recovered from the channel's action on basis matrices.
inline CriterionResult criterion_faithfulness(std::uint64_t, const ToleranceConfig& tol) {
    CriterionResult res{7, "faithfulness of Tennent -> CPTP"};
    bool ok = true;
    for (std::size_t m = 1; m <= 3 && ok; ++m) {
        for (std::size_t n = 1; n <= 3 && ok; ++n) {
            const auto all = enumerate_tennent(m, n);
            std::vector<CptpMor> images;
            images.reserve(all.size());
            for (const auto& t : all) images.push_back(tennent_to_cptp(t, tol));
            // injectivity
            for (std::size_t i = 0; i < all.size() && ok; ++i)
                for (std::size_t j = i + 1; j < all.size() && ok; ++j)
                    if (cptp_distance(images[i], images[j]) <= 1e-9 && !(all[i] == all[j]))
                        ok = false;
            // recovery of f from the diagonal of F(e_ii), and Q from F(e_ii')
            for (std::size_t idx = 0; idx < all.size() && ok; ++idx) {
                const auto& t = all[idx];
                for (std::size_t i = 0; i < m && ok; ++i) {
                    const ComplexMatrix out = apply(images[idx], basis_matrix(i, i, m));
                    for (std::size_t j = 0; j < n; ++j) {
                        const double expect = (j == t.map[i]) ? 1.0 : 0.0;
                        const double got = out(j, j).real();
                        res.max_deviation = std::max(res.max_deviation, std::abs(got - expect));
                        if (std::llround(got) != static_cast<long long>(expect)) ok = false;
                    }
                    for (std::size_t ip = 0; ip < m && ok; ++ip) {
                        const ComplexMatrix o2 = apply(images[idx], basis_matrix(i, ip, m));
                        const double expect = t.relation.related(i, ip) ? 1.0 : 0.0;
                        const double got = o2(t.map[i], t.map[ip]).real();
                        res.max_deviation = std::max(res.max_deviation, std::abs(got - expect));
                        if (std::llround(got) != static_cast<long long>(expect)) ok = false;
                    }
                }
            }
        }
    }
    res.passed = ok && res.max_deviation <= 1e-9;
    return res;
}

/// 8. Oracle agreement: Tennent normal-form equality iff Choi equality, over
/// all injective dilations with m, n <= 3, a <= 3.
inline CriterionResult criterion_oracle_agreement(std::uint64_t, const ToleranceConfig& tol) {
    CriterionResult res{8, "normal-form / Choi oracle agreement"};
    bool ok = true;
    for (std::size_t m = 1; m <= 3 && ok; ++m) {
        for (std::size_t n = 1; n <= 3 && ok; ++n) {
            std::vector<Dilation<InjectionCat>> dils;
            for (std::size_t a = 1; a <= 3; ++a) {
                if (n * a < m) continue;
                // enumerate injections m -> n*a
                std::vector<std::size_t> map(m, 0);
                std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i,
                                                                       std::size_t used) {
                    if (i == m) {
                        Dilation<InjectionCat> d;
                        d.dom = m;
                        d.cod = n;
                        d.ancilla = a;
                        d.morphism = InjectionMor(m, n * a, map);
                        dils.push_back(std::move(d));
                        return;
                    }
                    for (std::size_t v = 0; v < n * a; ++v) {
                        if ((used >> v) & 1u) continue;
                        map[i] = v;
                        rec(i + 1, used | (std::size_t{1} << v));
                    }
                };
                rec(0, 0);
            }
            std::vector<TennentMor> forms;
            std::vector<CptpMor> chois;
            for (const auto& d : dils) {
                forms.push_back(normalize_dilation(d));
                const IsometryMor v = injection_to_isometry(d.morphism);
                const std::size_t a = d.ancilla;
                chois.push_back(cptp_from_action(m, n, [&](const ComplexMatrix& rho) {
                    return partial_trace(v.matrix * rho * dagger(v.matrix), n, a,
                                         TraceFactor::Second);
                }, tol));
            }
            for (std::size_t i = 0; i < dils.size() && ok; ++i)
                for (std::size_t j = i + 1; j < dils.size() && ok; ++j) {
                    const bool nf_eq = forms[i] == forms[j];
                    const bool choi_eq = cptp_distance(chois[i], chois[j]) <= 1e-9;
                    if (nf_eq != choi_eq) ok = false;
                }
        }
    }
    res.passed = ok;
    if (!ok) res.detail = "normal-form and Choi equality disagree on some pair";
    return res;
}

/// 9. Power-of-two padding preserves channels; the padded connection diagram
/// commutes.
inline CriterionResult criterion_qubit_padding(std::uint64_t seed, const ToleranceConfig& tol) {
    CriterionResult res{9, "power-of-two ancilla padding"};
    Rng rng(seed);
    bool struct_ok = true;
    for (int t = 0; t < 50; ++t) {
        const std::size_t m = rng.below(2) ? 2 : 4;
        const std::size_t n = rng.below(2) ? 2 : 4;
        const CptpMor f = random_cptp(m, n, (m + n - 1) / n + rng.below(2), rng);
        const StinespringDilation d1 = pad_to_power_of_two(
            verify_detail::random_rewrite_of_minimal(f, rng, tol), tol);
        res.max_deviation =
            std::max(res.max_deviation, cptp_distance(channel_of_dilation(d1, tol), f));
        if (!is_power_of_two(d1.ancilla)) struct_ok = false;

        // second padded dilation; connect and pad the connection object
        const StinespringDilation d2 = pad_to_power_of_two(
            verify_detail::random_rewrite_of_minimal(f, rng, tol), tol);
        const DilationConnection conn = connect_dilations(d1, d2, tol);
        const std::size_t c2 = next_power_of_two(conn.c);
        const IsometryMor va =
            iso_compose(canonical_injection(conn.c, c2), conn.into_c_from_a);
        const IsometryMor wb =
            iso_compose(canonical_injection(conn.c, c2), conn.into_c_from_b);
        const ComplexMatrix lhs = kron(ComplexMatrix::identity(n), va.matrix) * d1.isometry.matrix;
        const ComplexMatrix rhs = kron(ComplexMatrix::identity(n), wb.matrix) * d2.isometry.matrix;
        res.max_deviation = std::max(res.max_deviation, frobenius_distance(lhs, rhs));
        if (!is_power_of_two(c2)) struct_ok = false;
    }
    res.passed = struct_ok && res.max_deviation <= 1e-9;
    if (!struct_ok) res.detail = "padded ancilla is not a power of two";
    return res;
}

/// 10. The bundled circuit interprets to a valid 4 -> 4 channel equal to
/// E(left isometry) followed by the partial trace.
inline CriterionResult criterion_circuit_example(const std::string& circuit_text,
                                                 const ToleranceConfig& tol) {
    CriterionResult res{10, "example circuit interpretation"};
    const CircuitAST ast = parse_circuit(circuit_text);
    const CptpMor whole = interpret(ast, tol);
    if (whole.dom != 4 || whole.cod != 4) {
        res.detail = "interpreted channel is not 4 -> 4";
        return res;
    }
    CircuitAST left = ast;
    left.instructions.clear();
    for (const auto& ins : ast.instructions)
        if (!std::holds_alternative<DiscardInstr>(ins)) left.instructions.push_back(ins);
    const IsometryMor pure = interpret_pure(left);
    if (pure.dom != 4 || pure.cod != 8) {
        res.detail = "left part is not an isometry 4 -> 8";
        return res;
    }
    const CptpMor expected =
        cptp_compose(partial_trace_channel(4, 2), from_isometry(pure, tol), tol);
    res.max_deviation = cptp_distance(whole, expected);
    res.passed = res.max_deviation <= 1e-9;
    return res;
}

/// 11. Symmetric monoidal axioms in every implemented category; the
/// combinatorial categories must come out exact.
inline CriterionResult criterion_smc_axioms(std::uint64_t seed, const ToleranceConfig&,
                                            std::size_t max_dim = 3) {
    CriterionResult res{11, "symmetric monoidal axiom suite"};
    bool exact_ok = true;
    const auto iso = check_smc_axioms<IsometryCat>(seed, 200, max_dim);
    // dim-3 triple tensors already give 729x729 Choi matrices, so cap the
    // channel sampling at dim 2
    const auto chan = check_smc_axioms<CptpCat>(seed + 1, 60, std::min<std::size_t>(max_dim, 2));
    const auto inj = check_smc_axioms<InjectionCat>(seed + 2, 200, max_dim);
    const auto fun = check_smc_axioms<FunctionCat>(seed + 3, 200, max_dim);
    const auto ten = check_smc_axioms<TennentCat>(seed + 4, 200, max_dim);
    res.max_deviation = std::max(iso.max_deviation, chan.max_deviation);
    if (inj.max_deviation != 0.0 || fun.max_deviation != 0.0 || ten.max_deviation != 0.0)
        exact_ok = false;
    res.passed = exact_ok && res.max_deviation <= 1e-9;
    if (!exact_ok) res.detail = "a combinatorial category deviated from exact equality";
    return res;
}

inline std::vector<CriterionResult> run_acceptance(std::uint64_t seed,
                                                   const std::string& circuit_text,
                                                   const ToleranceConfig& tol = default_tol(),
                                                   std::size_t axiom_max_dim = 3) {
    std::vector<CriterionResult> results;
    auto timed = [&](CriterionResult (*fn)(std::uint64_t, const ToleranceConfig&),
                     std::uint64_t s) {
        const auto t0 = std::chrono::steady_clock::now();
        CriterionResult r = fn(s, tol);
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        results.push_back(std::move(r));
    };
    timed(&criterion_stinespring_round_trip, seed);
    timed(&criterion_dilation_uniqueness, seed + 1);
    timed(&criterion_dilation_formulas, seed + 2);
    timed(&criterion_terminality, seed + 3);
    timed(&criterion_universal_extension, seed + 4);
    timed(&criterion_counterexample, seed + 5);
    timed(&criterion_faithfulness, seed + 6);
    timed(&criterion_oracle_agreement, seed + 7);
    timed(&criterion_qubit_padding, seed + 8);
    {
        const auto t0 = std::chrono::steady_clock::now();
        CriterionResult r = criterion_circuit_example(circuit_text, tol);
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        results.push_back(std::move(r));
    }
    {
        const auto t0 = std::chrono::steady_clock::now();
        CriterionResult r = criterion_smc_axioms(seed + 9, tol, axiom_max_dim);
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        results.push_back(std::move(r));
    }
    return results;
}

}  // namespace qaffine
