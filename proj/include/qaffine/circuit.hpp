#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "qaffine/category.hpp"
#include "qaffine/cptp.hpp"
#include "qaffine/isometry.hpp"
#include "qaffine/json_io.hpp"
#include "qaffine/stinespring.hpp"

namespace qaffine {

struct ParseError : std::runtime_error {
    int line;
    ParseError(int line_, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line_) + ": " + msg), line(line_) {}
};

struct WireDecl {
    std::string name;
    std::size_t dim;
};

struct GateApp {
    std::string spec;                 // gate name, inline:<json> or cinline:<json>
    std::vector<std::string> wires;   // targets, in argument order
};

struct AncillaDecl {
    std::string name;
    std::size_t dim;
    std::size_t basis_index;
};

struct DiscardInstr {
    std::string name;
};

using Instruction = std::variant<GateApp, AncillaDecl, DiscardInstr>;

struct CircuitAST {
    std::vector<WireDecl> wires;
    std::vector<Instruction> instructions;
};

/// Preparation isometry 1 -> d for the basis state |k>.
inline IsometryMor ket(std::size_t k, std::size_t d) {
    if (k >= d) throw std::invalid_argument("ket: basis index out of range");
    ComplexMatrix v(d, 1);
    v(k, 0) = 1.0;
    return IsometryMor(1, d, std::move(v));
}

/// Controlled-U on 2*d: identity on the |0> control block, U on the |1> block.
inline IsometryMor controlled(const IsometryMor& u) {
    if (u.dom != u.cod) throw std::invalid_argument("controlled: gate must be square");
    const std::size_t d = u.dom;
    ComplexMatrix m(2 * d, 2 * d);
    for (std::size_t i = 0; i < d; ++i) m(i, i) = 1.0;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) m(d + i, d + j) = u.matrix(i, j);
    return IsometryMor(2 * d, 2 * d, std::move(m));
}

/// Named gates. Matrices are built on demand; every entry is an isometry.
inline std::optional<IsometryMor> lookup_gate(const std::string& name) {
    if (name == "X") {
        ComplexMatrix m(2, 2);
        m(0, 1) = 1.0;
        m(1, 0) = 1.0;
        return IsometryMor(2, 2, std::move(m));
    }
    if (name == "Z") {
        ComplexMatrix m(2, 2);
        m(0, 0) = 1.0;
        m(1, 1) = -1.0;
        return IsometryMor(2, 2, std::move(m));
    }
    if (name == "H") {
        const double s = 1.0 / std::sqrt(2.0);
        ComplexMatrix m(2, 2);
        m(0, 0) = s;
        m(0, 1) = s;
        m(1, 0) = s;
        m(1, 1) = -s;
        return IsometryMor(2, 2, std::move(m));
    }
    if (name == "CNOT") {
        return controlled(*lookup_gate("X"));
    }
    if (name == "SWAP") {
        return symmetry(2, 2);
    }
    return std::nullopt;
}

/// Gate matrix for a gate spec (named, inline:<json> or cinline:<json>).
inline IsometryMor resolve_gate(const std::string& spec, int line) {
    auto inline_matrix = [&](const std::string& json_text) {
        ComplexMatrix m;
        try {
            m = matrix_from_json(nlohmann::json::parse(json_text));
        } catch (const std::exception& e) {
            throw ParseError(line, std::string("bad inline matrix: ") + e.what());
        }
        if (m.rows() != m.cols()) throw ParseError(line, "inline gate must be square");
        if (!is_isometry(m)) throw ParseError(line, "inline gate is not an isometry");
        return IsometryMor(m.cols(), m.rows(), std::move(m));
    };
    if (spec.rfind("inline:", 0) == 0) return inline_matrix(spec.substr(7));
    if (spec.rfind("cinline:", 0) == 0) return controlled(inline_matrix(spec.substr(8)));
    if (auto g = lookup_gate(spec)) return *g;
    throw ParseError(line, "unknown gate '" + spec + "'");
}

/// Line-oriented circuit parser. Grammar:
///   wire <name> <dim>
///   ancilla <name> <dim> <basis-index>
///   gate <NAME|inline:<json>|cinline:<json>> <wires...>
///   discard <name>
///   # comment
inline CircuitAST parse_circuit(const std::string& text) {
    CircuitAST ast;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;

    std::vector<std::pair<std::string, std::size_t>> live;  // name -> dim, in wire order
    auto find_live = [&](const std::string& name) -> std::ptrdiff_t {
        for (std::size_t i = 0; i < live.size(); ++i)
            if (live[i].first == name) return static_cast<std::ptrdiff_t>(i);
        return -1;
    };
    std::vector<std::string> dead;
    auto is_dead = [&](const std::string& name) {
        for (const auto& d : dead)
            if (d == name) return true;
        return false;
    };

    bool seen_instruction = false;
    while (std::getline(in, raw)) {
        ++lineno;
        std::istringstream ls(raw);
        std::string tok;
        if (!(ls >> tok) || tok[0] == '#') continue;

        if (tok == "wire") {
            if (seen_instruction)
                throw ParseError(lineno, "wire declarations must precede instructions");
            std::string name;
            std::size_t dim;
            if (!(ls >> name >> dim) || dim < 1) throw ParseError(lineno, "expected: wire <name> <dim>");
            if (find_live(name) >= 0) throw ParseError(lineno, "duplicate wire '" + name + "'");
            ast.wires.push_back({name, dim});
            live.emplace_back(name, dim);
        } else if (tok == "ancilla") {
            seen_instruction = true;
            std::string name;
            std::size_t dim, idx;
            if (!(ls >> name >> dim >> idx) || dim < 1)
                throw ParseError(lineno, "expected: ancilla <name> <dim> <basis-index>");
            if (idx >= dim) throw ParseError(lineno, "ancilla basis index out of range");
            if (find_live(name) >= 0 || is_dead(name))
                throw ParseError(lineno, "duplicate wire '" + name + "'");
            ast.instructions.emplace_back(AncillaDecl{name, dim, idx});
            live.emplace_back(name, dim);
        } else if (tok == "gate") {
            seen_instruction = true;
            std::string spec;
            if (!(ls >> spec)) throw ParseError(lineno, "expected: gate <spec> <wires...>");
            GateApp app{spec, {}};
            std::string w;
            while (ls >> w) app.wires.push_back(w);
            if (app.wires.empty()) throw ParseError(lineno, "gate needs at least one wire");
            std::size_t prod = 1;
            for (const auto& wn : app.wires) {
                if (is_dead(wn)) throw ParseError(lineno, "wire '" + wn + "' was discarded");
                const auto i = find_live(wn);
                if (i < 0) throw ParseError(lineno, "unknown wire '" + wn + "'");
                for (const auto& other : app.wires)
                    if (&other != &wn && other == wn)
                        throw ParseError(lineno, "repeated wire '" + wn + "'");
                prod *= live[static_cast<std::size_t>(i)].second;
            }
            const IsometryMor g = resolve_gate(spec, lineno);
            if (g.dom != prod)
                throw ParseError(lineno, "gate dimension " + std::to_string(g.dom) +
                                             " does not match wires (product " +
                                             std::to_string(prod) + ")");
            ast.instructions.emplace_back(std::move(app));
        } else if (tok == "discard") {
            seen_instruction = true;
            std::string name;
            if (!(ls >> name)) throw ParseError(lineno, "expected: discard <name>");
            if (is_dead(name)) throw ParseError(lineno, "wire '" + name + "' already discarded");
            const auto i = find_live(name);
            if (i < 0) throw ParseError(lineno, "unknown wire '" + name + "'");
            live.erase(live.begin() + i);
            dead.push_back(name);
            ast.instructions.emplace_back(DiscardInstr{name});
        } else {
            throw ParseError(lineno, "unknown directive '" + tok + "'");
        }
    }
    return ast;
}

inline std::string pretty_print(const CircuitAST& ast) {
    std::ostringstream out;
    for (const auto& w : ast.wires) out << "wire " << w.name << " " << w.dim << "\n";
    for (const auto& ins : ast.instructions) {
        if (const auto* g = std::get_if<GateApp>(&ins)) {
            out << "gate " << g->spec;
            for (const auto& w : g->wires) out << " " << w;
            out << "\n";
        } else if (const auto* a = std::get_if<AncillaDecl>(&ins)) {
            out << "ancilla " << a->name << " " << a->dim << " " << a->basis_index << "\n";
        } else {
            out << "discard " << std::get<DiscardInstr>(ins).name << "\n";
        }
    }
    return out.str();
}

namespace detail {

struct WireState {
    std::vector<std::pair<std::string, std::size_t>> wires;  // name, dim

    std::size_t product() const {
        std::size_t p = 1;
        for (const auto& w : wires) p *= w.second;
        return p;
    }

    std::size_t index_of(const std::string& name) const {
        for (std::size_t i = 0; i < wires.size(); ++i)
            if (wires[i].first == name) return i;
        throw std::invalid_argument("unknown wire '" + name + "'");
    }
};

/// Adjacent-swap isometry exchanging wire positions i and i+1.
inline IsometryMor adjacent_swap(const WireState& st, std::size_t i) {
    std::size_t before = 1, after = 1;
    for (std::size_t k = 0; k < i; ++k) before *= st.wires[k].second;
    for (std::size_t k = i + 2; k < st.wires.size(); ++k) after *= st.wires[k].second;
    return iso_tensor(iso_tensor(iso_identity(before),
                                 symmetry(st.wires[i].second, st.wires[i + 1].second)),
                      iso_identity(after));
}

/// Permutation isometry routing the named wires to the front, in the given
/// order, preserving the relative order of the rest; mutates the wire state
/// to the routed order. Built entirely from symmetries.
inline IsometryMor route_to_front(WireState& st, const std::vector<std::string>& targets) {
    IsometryMor perm = iso_identity(st.product());
    for (std::size_t t = 0; t < targets.size(); ++t) {
        std::size_t pos = st.index_of(targets[t]);
        while (pos > t) {
            perm = iso_compose(adjacent_swap(st, pos - 1), perm);
            std::swap(st.wires[pos - 1], st.wires[pos]);
            --pos;
        }
    }
    return perm;
}

}  // namespace detail

/// Interpret a discard-free circuit as one isometry: ancilla preparations
/// tensor in ket isometries, gates compose in program order with identity
/// padding and symmetry-based routing.
inline IsometryMor interpret_pure(const CircuitAST& ast) {
    detail::WireState st;
    for (const auto& w : ast.wires) st.wires.emplace_back(w.name, w.dim);
    const std::size_t dom = st.product();
    IsometryMor u = iso_identity(dom);
    for (const auto& ins : ast.instructions) {
        if (std::holds_alternative<DiscardInstr>(ins))
            throw std::invalid_argument("interpret_pure: circuit contains a discard");
        if (const auto* a = std::get_if<AncillaDecl>(&ins)) {
            u = iso_compose(iso_tensor(iso_identity(st.product()), ket(a->basis_index, a->dim)), u);
            st.wires.emplace_back(a->name, a->dim);
        } else {
            const auto& app = std::get<GateApp>(ins);
            const IsometryMor g = resolve_gate(app.spec, 0);
            detail::WireState routed = st;
            const IsometryMor perm = detail::route_to_front(routed, app.wires);
            const std::size_t rest = routed.product() / g.dom;
            const IsometryMor step =
                iso_compose(dagger_isometry(perm),
                            iso_compose(iso_tensor(g, iso_identity(rest)), perm));
            u = iso_compose(step, u);
        }
    }
    return u;
}

/// Inline interpretation: pure steps through E, each discard as a routed
/// partial-trace channel.
inline CptpMor interpret(const CircuitAST& ast, const ToleranceConfig& tol = default_tol()) {
    detail::WireState st;
    for (const auto& w : ast.wires) st.wires.emplace_back(w.name, w.dim);
    CptpMor c = cptp_identity(st.product());
    for (const auto& ins : ast.instructions) {
        if (const auto* a = std::get_if<AncillaDecl>(&ins)) {
            const IsometryMor step =
                iso_tensor(iso_identity(st.product()), ket(a->basis_index, a->dim));
            c = cptp_compose(from_isometry(step, tol), c, tol);
            st.wires.emplace_back(a->name, a->dim);
        } else if (const auto* g_app = std::get_if<GateApp>(&ins)) {
            const IsometryMor g = resolve_gate(g_app->spec, 0);
            detail::WireState routed = st;
            const IsometryMor perm = detail::route_to_front(routed, g_app->wires);
            const std::size_t rest = routed.product() / g.dom;
            const IsometryMor step =
                iso_compose(dagger_isometry(perm),
                            iso_compose(iso_tensor(g, iso_identity(rest)), perm));
            c = cptp_compose(from_isometry(step, tol), c, tol);
        } else {
            const auto& d = std::get<DiscardInstr>(ins);
            // route the wire to the back, then trace the last factor
            detail::WireState routed = st;
            std::vector<std::string> keep;
            for (const auto& w : st.wires)
                if (w.first != d.name) keep.push_back(w.first);
            const IsometryMor perm = detail::route_to_front(routed, keep);
            const std::size_t ddim = routed.wires.back().second;
            c = cptp_compose(partial_trace_channel(routed.product() / ddim, ddim),
                             cptp_compose(from_isometry(perm, tol), c, tol), tol);
            st = routed;
            st.wires.pop_back();
        }
    }
    return c;
}

/// Dilation-form interpretation: run the whole circuit as one isometry with
/// discards deferred, then trace the discarded block at once.
inline CptpMor interpret_via_dilation(const CircuitAST& ast,
                                      const ToleranceConfig& tol = default_tol()) {
    CircuitAST pure = ast;
    std::vector<std::string> discarded;
    pure.instructions.clear();
    for (const auto& ins : ast.instructions) {
        if (const auto* d = std::get_if<DiscardInstr>(&ins))
            discarded.push_back(d->name);
        else
            pure.instructions.push_back(ins);
    }
    detail::WireState st;
    for (const auto& w : ast.wires) st.wires.emplace_back(w.name, w.dim);
    for (const auto& ins : pure.instructions)
        if (const auto* a = std::get_if<AncillaDecl>(&ins)) st.wires.emplace_back(a->name, a->dim);

    const IsometryMor u = interpret_pure(pure);
    std::vector<std::string> keep;
    for (const auto& w : st.wires) {
        bool dead = false;
        for (const auto& d : discarded) dead = dead || d == w.first;
        if (!dead) keep.push_back(w.first);
    }
    detail::WireState routed = st;
    const IsometryMor perm = detail::route_to_front(routed, keep);
    std::size_t kept_dim = 1, disc_dim = 1;
    for (std::size_t i = 0; i < routed.wires.size(); ++i)
        (i < keep.size() ? kept_dim : disc_dim) *= routed.wires[i].second;

    StinespringDilation d;
    d.dom = u.dom;
    d.cod = kept_dim;
    d.ancilla = disc_dim;
    d.isometry = iso_compose(perm, u);
    return channel_of_dilation(d, tol);
}

struct DiscardEquationReport {
    double full_discard_deviation = 0.0;     // tr after E(f) vs tr before
    double partial_discard_deviation = 0.0;  // routed partial discard vs dilation form
    bool pass(double atol) const {
        return full_discard_deviation <= atol && partial_discard_deviation <= atol;
    }
};

/// The discard equations of the reflected PROP, checked numerically:
/// discarding every output of E(f) equals discarding every input, and
/// partially discarded channels agree with their dilation normal form.
inline DiscardEquationReport check_discard_equations(const IsometryMor& f,
                                                     std::size_t cod_split_first,
                                                     const ToleranceConfig& tol = default_tol()) {
    DiscardEquationReport rep;
    rep.full_discard_deviation =
        cptp_distance(cptp_compose(trace_channel(f.cod), from_isometry(f, tol), tol),
                      trace_channel(f.dom));
    if (f.cod % cod_split_first != 0)
        throw std::invalid_argument("check_discard_equations: split does not divide codomain");
    const std::size_t n2 = f.cod / cod_split_first;
    const CptpMor via_discard = cptp_compose(partial_trace_channel(cod_split_first, n2),
                                             from_isometry(f, tol), tol);
    StinespringDilation d;
    d.dom = f.dom;
    d.cod = cod_split_first;
    d.ancilla = n2;
    d.isometry = f;
    const CptpMor via_min = channel_of_dilation(dilate(channel_of_dilation(d, tol), tol), tol);
    rep.partial_discard_deviation = cptp_distance(via_discard, via_min);
    return rep;
}

}  // namespace qaffine
