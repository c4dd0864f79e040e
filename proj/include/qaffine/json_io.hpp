#pragma once

#include <json.hpp>

#include "qaffine/cptp.hpp"
#include "qaffine/isometry.hpp"
#include "qaffine/stinespring.hpp"
#include "qaffine/tennent.hpp"

namespace qaffine {

// Matrix JSON format: {"rows": n, "cols": m, "data": [[re, im], ...]} with
// row-major data. Indices in all JSON payloads are 0-based.

inline nlohmann::json matrix_to_json(const ComplexMatrix& m) {
    nlohmann::json data = nlohmann::json::array();
    for (const auto& z : m.data()) data.push_back({z.real(), z.imag()});
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

inline ComplexMatrix matrix_from_json(const nlohmann::json& j) {
    const std::size_t rows = j.at("rows").get<std::size_t>();
    const std::size_t cols = j.at("cols").get<std::size_t>();
    const auto& data = j.at("data");
    if (data.size() != rows * cols)
        throw std::invalid_argument("matrix JSON: data length != rows*cols");
    std::vector<Complex> entries;
    entries.reserve(rows * cols);
    for (const auto& e : data) {
        if (!e.is_array() || e.size() != 2)
            throw std::invalid_argument("matrix JSON: entries must be [re, im] pairs");
        entries.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    ComplexMatrix m(rows, cols, std::move(entries));
    if (!m.all_finite()) throw std::invalid_argument("matrix JSON: non-finite entry");
    return m;
}

inline nlohmann::json isometry_to_json(const IsometryMor& v) { return matrix_to_json(v.matrix); }

inline IsometryMor isometry_from_json(const nlohmann::json& j,
                                      const ToleranceConfig& tol = default_tol()) {
    ComplexMatrix m = matrix_from_json(j);
    return IsometryMor(m.cols(), m.rows(), std::move(m), tol);
}

inline nlohmann::json injection_to_json(const InjectionMor& f) {
    return {{"dom", f.dom}, {"cod", f.cod}, {"map", f.map}};
}

inline InjectionMor injection_from_json(const nlohmann::json& j) {
    return InjectionMor(j.at("dom").get<std::size_t>(), j.at("cod").get<std::size_t>(),
                        j.at("map").get<std::vector<std::size_t>>());
}

inline nlohmann::json cptp_to_json(const CptpMor& f) {
    return {{"dom", f.dom}, {"cod", f.cod}, {"choi", matrix_to_json(f.choi)}};
}

inline CptpMor cptp_from_json(const nlohmann::json& j,
                              const ToleranceConfig& tol = default_tol()) {
    return CptpMor(j.at("dom").get<std::size_t>(), j.at("cod").get<std::size_t>(),
                   matrix_from_json(j.at("choi")), tol);
}

inline nlohmann::json dilation_to_json(const StinespringDilation& d) {
    return {{"dom", d.dom},
            {"cod", d.cod},
            {"ancilla", d.ancilla},
            {"isometry", matrix_to_json(d.isometry.matrix)},
            {"minimal", d.minimal}};
}

inline StinespringDilation dilation_from_json(const nlohmann::json& j,
                                              const ToleranceConfig& tol = default_tol()) {
    StinespringDilation d;
    d.dom = j.at("dom").get<std::size_t>();
    d.cod = j.at("cod").get<std::size_t>();
    d.ancilla = j.at("ancilla").get<std::size_t>();
    ComplexMatrix m = matrix_from_json(j.at("isometry"));
    if (m.rows() != d.cod * d.ancilla || m.cols() != d.dom)
        throw std::invalid_argument("dilation JSON: isometry shape mismatch");
    d.isometry = IsometryMor(d.dom, d.cod * d.ancilla, std::move(m), tol);
    d.minimal = j.value("minimal", false);
    return d;
}

inline nlohmann::json tennent_to_json(const TennentMor& t) {
    return {{"dom", t.dom}, {"cod", t.cod}, {"classes", t.relation.classes}, {"map", t.map}};
}

inline TennentMor tennent_from_json(const nlohmann::json& j) {
    return TennentMor(j.at("dom").get<std::size_t>(), j.at("cod").get<std::size_t>(),
                      EquivRelation(j.at("classes").get<std::vector<std::size_t>>()),
                      j.at("map").get<std::vector<std::size_t>>());
}

}  // namespace qaffine
