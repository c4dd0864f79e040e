#include <doctest.h>

#include <fstream>
#include <sstream>

#include "qaffine/circuit.hpp"

using namespace qaffine;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kFig1 = R"(# prepared ancilla, two controlled gates, discard
wire q1 2
wire q2 2
ancilla a 2 0
gate CNOT q1 a
gate CNOT q2 a
gate inline:{"rows":2,"cols":2,"data":[[1,0],[0,0],[0,0],[1,0]]} a
gate CNOT q2 a
discard a
)";

}  // namespace

TEST_CASE("parsing the empty circuit") {
    const CircuitAST ast = parse_circuit("");
    CHECK(ast.wires.empty());
    CHECK(ast.instructions.empty());
}

TEST_CASE("parsing the reference circuit") {
    const CircuitAST ast = parse_circuit(kFig1);
    REQUIRE(ast.wires.size() == 2);
    CHECK(ast.wires[0].name == "q1");
    CHECK(ast.wires[1].dim == 2);
    REQUIRE(ast.instructions.size() == 6);
    CHECK(std::holds_alternative<AncillaDecl>(ast.instructions[0]));
    CHECK(std::holds_alternative<GateApp>(ast.instructions[1]));
    CHECK(std::holds_alternative<DiscardInstr>(ast.instructions[5]));
    const auto& cnot = std::get<GateApp>(ast.instructions[1]);
    CHECK(cnot.spec == "CNOT");
    CHECK(cnot.wires == std::vector<std::string>{"q1", "a"});
}

TEST_CASE("parse errors carry line numbers") {
    try {
        parse_circuit("wire q 2\ngate CNOT q\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
        CHECK(std::string(e.what()).find("does not match") != std::string::npos);
    }

    CHECK_THROWS_AS(parse_circuit("wire q 2\nwire q 3\n"), ParseError);
    CHECK_THROWS_AS(parse_circuit("wire q 2\ngate X p\n"), ParseError);
    CHECK_THROWS_AS(parse_circuit("wire q 2\ndiscard q\ngate X q\n"), ParseError);
    CHECK_THROWS_AS(parse_circuit("wire q 2\ngate X q\nwire p 2\n"), ParseError);
    CHECK_THROWS_AS(parse_circuit("wire q 2\ngate SWAP q q\n"), ParseError);
    CHECK_THROWS_AS(parse_circuit("wire q 2\nancilla a 2 5\n"), ParseError);
    CHECK_THROWS_AS(parse_circuit("wire q 2\nbogus q\n"), ParseError);
    CHECK_THROWS_AS(parse_circuit("wire q 2\ngate inline:{\"rows\":1,\"cols\":2,\"data\":[[1,0],[1,0]]} q\n"),
                    ParseError);
}

TEST_CASE("pretty print round trips") {
    const CircuitAST ast = parse_circuit(kFig1);
    const CircuitAST again = parse_circuit(pretty_print(ast));
    CHECK(pretty_print(again) == pretty_print(ast));
    CHECK(cptp_distance(interpret(ast), interpret(again)) == 0.0);
}

TEST_CASE("pure interpretation of gate-only circuits") {
    CHECK(frobenius_distance(interpret_pure(parse_circuit("wire q1 2\nwire q2 2\n")).matrix,
                             ComplexMatrix::identity(4)) == 0.0);

    // X then X is the identity
    const CircuitAST xx = parse_circuit("wire q 2\ngate X q\ngate X q\n");
    CHECK(frobenius_distance(interpret_pure(xx).matrix, ComplexMatrix::identity(2)) < 1e-12);

    // CNOT with reversed targets equals SWAP CNOT SWAP
    const CircuitAST rev = parse_circuit("wire q1 2\nwire q2 2\ngate CNOT q2 q1\n");
    const ComplexMatrix want =
        (symmetry(2, 2).matrix * lookup_gate("CNOT")->matrix) * symmetry(2, 2).matrix;
    CHECK(frobenius_distance(interpret_pure(rev).matrix, want) < 1e-12);

    // gates on disjoint wires tensor
    const CircuitAST hx = parse_circuit("wire q1 2\nwire q2 2\ngate H q1\ngate X q2\n");
    CHECK(frobenius_distance(interpret_pure(hx).matrix,
                             kron(lookup_gate("H")->matrix, lookup_gate("X")->matrix)) < 1e-12);
}

TEST_CASE("ancilla preparation widens the isometry") {
    const CircuitAST c = parse_circuit("wire q 2\nancilla a 3 1\n");
    const IsometryMor u = interpret_pure(c);
    CHECK(u.dom == 2);
    CHECK(u.cod == 6);
    CHECK(frobenius_distance(u.matrix, kron(ComplexMatrix::identity(2), ket(1, 3).matrix)) == 0.0);

    // ancilla-only circuit is a state preparation
    const CircuitAST bell = parse_circuit(
        "ancilla a 2 0\nancilla b 2 0\ngate H a\ngate CNOT a b\n");
    const IsometryMor psi = interpret_pure(bell);
    CHECK(psi.dom == 1);
    CHECK(psi.cod == 4);
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(psi.matrix(0, 0) - Complex{s, 0.0}) < 1e-12);
    CHECK(std::abs(psi.matrix(3, 0) - Complex{s, 0.0}) < 1e-12);
}

TEST_CASE("the reference circuit strips to a pure isometry 4 -> 8") {
    CircuitAST ast = parse_circuit(kFig1);
    ast.instructions.pop_back();  // drop the discard
    const IsometryMor u = interpret_pure(ast);
    CHECK(u.dom == 4);
    CHECK(u.cod == 8);
    CHECK(is_isometry(u.matrix));
}

TEST_CASE("inline and dilation interpretations agree") {
    const CircuitAST ast = parse_circuit(kFig1);
    const CptpMor inline_form = interpret(ast);
    const CptpMor dilation_form = interpret_via_dilation(ast);
    CHECK(inline_form.dom == 4);
    CHECK(inline_form.cod == 4);
    CHECK(cptp_distance(inline_form, dilation_form) < 1e-9);
    CHECK(is_cptp(inline_form.choi, 4, 4).ok());
}

TEST_CASE("interpretations agree on a circuit with interleaved discards") {
    const char* text =
        "wire q1 2\n"
        "wire q2 2\n"
        "ancilla a 2 0\n"
        "gate H a\n"
        "gate CNOT a q1\n"
        "discard a\n"
        "gate H q2\n"
        "gate CNOT q1 q2\n"
        "discard q2\n";
    const CircuitAST ast = parse_circuit(text);
    const CptpMor f = interpret(ast);
    CHECK(f.dom == 4);
    CHECK(f.cod == 2);
    CHECK(cptp_distance(f, interpret_via_dilation(ast)) < 1e-9);
    CHECK(is_cptp(f.choi, 4, 2).ok());
}

TEST_CASE("discarding half a Bell state leaves the maximally mixed state") {
    const CircuitAST ast = parse_circuit(
        "ancilla a 2 0\nancilla b 2 0\ngate H a\ngate CNOT a b\ndiscard b\n");
    const CptpMor f = interpret(ast);
    CHECK(f.dom == 1);
    CHECK(f.cod == 2);
    ComplexMatrix one(1, 1);
    one(0, 0) = 1.0;
    CHECK(frobenius_distance(apply(f, one), ComplexMatrix::identity(2) * Complex{0.5, 0.0}) < 1e-9);
}

TEST_CASE("discarding everything is the trace") {
    const CircuitAST ast = parse_circuit(
        "wire q1 2\nwire q2 3\ngate H q1\ndiscard q1\ndiscard q2\n");
    const CptpMor f = interpret(ast);
    CHECK(cptp_distance(f, trace_channel(6)) < 1e-9);
}

TEST_CASE("discards commute past gates on other wires") {
    const char* early =
        "wire q1 2\nwire q2 2\ndiscard q2\ngate H q1\n";
    const char* late =
        "wire q1 2\nwire q2 2\ngate H q1\ndiscard q2\n";
    CHECK(cptp_distance(interpret(parse_circuit(early)), interpret(parse_circuit(late))) < 1e-9);
}

TEST_CASE("the shipped circuit files interpret consistently") {
    for (const char* path : {"../../data/fig1.qc", "../../data/fig1_random_u.qc",
                             "../data/fig1.qc", "data/fig1.qc"}) {
        std::ifstream probe(path);
        if (!probe.good()) continue;
        const CircuitAST ast = parse_circuit(read_file(path));
        const CptpMor f = interpret(ast);
        CHECK(is_cptp(f.choi, f.dom, f.cod).ok());
        CHECK(cptp_distance(f, interpret_via_dilation(ast)) < 1e-9);
    }
}

TEST_CASE("discard equations hold for random isometries") {
    Rng rng(81);
    for (int t = 0; t < 10; ++t) {
        const IsometryMor f = random_isometry(2, 6, rng);
        const auto rep = check_discard_equations(f, 3);
        CHECK(rep.pass(1e-8));
    }
    const IsometryMor g = random_isometry(3, 4, rng);
    CHECK(check_discard_equations(g, 2).pass(1e-8));
    CHECK_THROWS_AS(check_discard_equations(g, 3), std::invalid_argument);
}

TEST_CASE("controlled gates and kets validate") {
    CHECK_THROWS_AS(ket(2, 2), std::invalid_argument);
    const IsometryMor cz = controlled(*lookup_gate("Z"));
    CHECK(cz.matrix(3, 3) == Complex{-1.0, 0.0});
    CHECK(cz.matrix(2, 2) == Complex{1.0, 0.0});
    CHECK_FALSE(lookup_gate("BOGUS").has_value());

    // cinline builds the controlled version of an inline matrix
    const IsometryMor cx = resolve_gate(
        "cinline:{\"rows\":2,\"cols\":2,\"data\":[[0,0],[1,0],[1,0],[0,0]]}", 1);
    CHECK(frobenius_distance(cx.matrix, lookup_gate("CNOT")->matrix) == 0.0);
}
