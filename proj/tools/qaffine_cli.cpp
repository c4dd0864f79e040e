#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "qaffine/circuit.hpp"
#include "qaffine/json_io.hpp"
#include "qaffine/verify.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

nlohmann::json read_json(const std::string& path) {
    return nlohmann::json::parse(read_file(path));
}

}  // namespace

int main(int argc, char** argv) {
    using namespace qaffine;

    CLI::App app{"Channels, dilations and affine reflections of monoidal categories"};
    app.require_subcommand(1);

    double atol = default_tol().atol;
    std::uint64_t seed = 42;
    bool json_output = false;
    app.add_option("--atol", atol, "absolute tolerance for approximate equality");
    app.add_option("--seed", seed, "seed for randomized checks");
    app.add_flag("--json", json_output, "machine-readable output");

    std::string in_a, in_b;
    std::size_t dims = 3;
    bool qubits = false;

    auto* cmd_dilate = app.add_subcommand("dilate", "minimal Stinespring dilation of a channel");
    cmd_dilate->add_option("channel", in_a, "channel JSON file")->required();

    auto* cmd_choi = app.add_subcommand("choi", "interpret a circuit file as a channel");
    cmd_choi->add_option("circuit", in_a, "circuit (.qc) file")->required();
    cmd_choi->add_flag("--qubits", qubits, "report objects as qubit counts");

    auto* cmd_eq = app.add_subcommand("eq", "channel equality (exit 0 iff equal)");
    cmd_eq->add_option("a", in_a, "channel JSON file")->required();
    cmd_eq->add_option("b", in_b, "channel JSON file")->required();

    auto* cmd_connect = app.add_subcommand("connect", "connect two dilations of one channel");
    cmd_connect->add_option("d1", in_a, "dilation JSON file")->required();
    cmd_connect->add_option("d2", in_b, "dilation JSON file")->required();

    auto* cmd_pad = app.add_subcommand("pad2", "pad a dilation's ancilla to a power of two");
    cmd_pad->add_option("d", in_a, "dilation JSON file")->required();

    auto* cmd_tennent = app.add_subcommand("tennent", "Tennent-category operations");
    auto* cmd_embed = cmd_tennent->add_subcommand("embed", "embed an injection as a Tennent morphism");
    cmd_embed->add_option("f", in_a, "injection JSON file")->required();
    auto* cmd_check =
        cmd_tennent->add_subcommand("check", "run the Function-category counterexample check");

    auto* cmd_verify = app.add_subcommand("verify", "run the full property suite");
    cmd_verify->add_option("--dims", dims, "maximum object dimension for sampled checks");
    std::string circuit_path = "data/fig1.qc";
    cmd_verify->add_option("--circuit", circuit_path, "circuit file for the interpretation check");

    CLI11_PARSE(app, argc, argv);
    const ToleranceConfig tol{atol, default_tol().rank_rtol};

    try {
        if (*cmd_dilate) {
            const CptpMor f = cptp_from_json(read_json(in_a), tol);
            std::cout << dilation_to_json(dilate(f, tol)).dump(2) << "\n";
        } else if (*cmd_choi) {
            const CircuitAST ast = parse_circuit(read_file(in_a));
            const CptpMor c = interpret(ast, tol);
            nlohmann::json out = cptp_to_json(c);
            if (qubits) {
                if (!is_power_of_two(c.dom) || !is_power_of_two(c.cod)) {
                    std::cerr << "error: channel dimensions are not powers of two\n";
                    return 2;
                }
                out["qubits_in"] = qubit_view_inverse(c.dom).qubits;
                out["qubits_out"] = qubit_view_inverse(c.cod).qubits;
            }
            std::cout << out.dump(2) << "\n";
        } else if (*cmd_eq) {
            const CptpMor f = cptp_from_json(read_json(in_a), tol);
            const CptpMor g = cptp_from_json(read_json(in_b), tol);
            if (f.dom != g.dom || f.cod != g.cod) {
                std::cerr << "error: shape mismatch\n";
                return 2;
            }
            const double d = cptp_distance(f, g);
            if (json_output)
                std::cout << nlohmann::json{{"equal", d <= tol.atol}, {"distance", d}}.dump(2)
                          << "\n";
            else
                std::cout << (d <= tol.atol ? "equal" : "different") << " (Choi distance " << d
                          << ")\n";
            return d <= tol.atol ? 0 : 1;
        } else if (*cmd_connect) {
            const StinespringDilation d1 = dilation_from_json(read_json(in_a), tol);
            const StinespringDilation d2 = dilation_from_json(read_json(in_b), tol);
            const DilationConnection conn = connect_dilations(d1, d2, tol);
            std::cout << nlohmann::json{{"c", conn.c},
                                        {"V", isometry_to_json(conn.into_c_from_a)},
                                        {"W", isometry_to_json(conn.into_c_from_b)}}
                             .dump(2)
                      << "\n";
        } else if (*cmd_pad) {
            const StinespringDilation d = dilation_from_json(read_json(in_a), tol);
            std::cout << dilation_to_json(pad_to_power_of_two(d, tol)).dump(2) << "\n";
        } else if (*cmd_embed) {
            const InjectionMor f = injection_from_json(read_json(in_a));
            std::cout << tennent_to_json(from_injection(f)).dump(2) << "\n";
        } else if (*cmd_check) {
            const CounterexampleReport rep = function_counterexample_check(seed);
            if (json_output)
                std::cout << nlohmann::json{{"passed", rep.ok()},
                                            {"max_deviation", rep.max_deviation}}
                                 .dump(2)
                          << "\n";
            else
                std::cout << (rep.ok() ? "PASS" : "FAIL")
                          << " Function-category counterexample (max deviation "
                          << rep.max_deviation << ")\n";
            return rep.ok() ? 0 : 1;
        } else if (*cmd_verify) {
            const std::string circuit_text = read_file(circuit_path);
            const auto results = run_acceptance(seed, circuit_text, tol, dims);
            bool all = true;
            nlohmann::json jout = nlohmann::json::array();
            for (const auto& r : results) {
                all = all && r.passed;
                if (json_output) {
                    jout.push_back({{"suite", r.name},
                                    {"passed", r.passed},
                                    {"max_deviation", r.max_deviation},
                                    {"seed", seed},
                                    {"seconds", r.seconds}});
                } else {
                    std::cout << (r.passed ? "PASS" : "FAIL") << " " << r.index << ". " << r.name
                              << " (max deviation " << r.max_deviation << ", " << r.seconds
                              << " s)";
                    if (!r.detail.empty()) std::cout << " -- " << r.detail;
                    std::cout << "\n";
                }
            }
            if (json_output) std::cout << jout.dump(2) << "\n";
            return all ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
