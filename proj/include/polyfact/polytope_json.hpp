// JSON (de)serialization of polytope specs and ellipsoids.
//
// Polytope schema: {"dim": r, "kind": "special"|"hform"|"vform"|"featurespec", ...}
//   special:     {"name": "binf"|"b1"|"binfplus"|"b1plus"}
//   hform:       {"A": [[...] f rows of r], "b": [...]}
//   vform:       {"V": [[...] r rows of m]}
//   featurespec: {"constraints": [{"type":"box","index":i,"lo":l,"hi":h} |
//                                 {"type":"l1ball","indices":[...],"radius":x} |
//                                 {"type":"simplexcap","indices":[...],"radius":x}]}
// Ellipsoid sidecar: {"C": [[...]], "g": [...]}
#ifndef POLYFACT_POLYTOPE_JSON_HPP
#define POLYFACT_POLYTOPE_JSON_HPP

#include <fstream>
#include <string>

#include <json.hpp>

#include "polyfact/ellipsoid.hpp"
#include "polyfact/polytope.hpp"

namespace polyfact {

namespace detail {

inline nlohmann::json matrix_to_json(const Matrix& M) {
    nlohmann::json rows = nlohmann::json::array();
    for (Index i = 0; i < M.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Index j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
        rows.push_back(row);
    }
    return rows;
}

inline Matrix matrix_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.empty()) throw PolyfactError("json matrix: expected nonempty array");
    const Index rows = static_cast<Index>(j.size());
    const Index cols = static_cast<Index>(j[0].size());
    Matrix M(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        if (static_cast<Index>(j[static_cast<size_t>(i)].size()) != cols)
            throw PolyfactError("json matrix: ragged rows");
        for (Index k = 0; k < cols; ++k)
            M(i, k) = j[static_cast<size_t>(i)][static_cast<size_t>(k)].get<double>();
    }
    return M;
}

inline nlohmann::json vector_to_json(const Vector& v) {
    nlohmann::json out = nlohmann::json::array();
    for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

inline Vector vector_from_json(const nlohmann::json& j) {
    Vector v(static_cast<Index>(j.size()));
    for (Index i = 0; i < v.size(); ++i) v(i) = j[static_cast<size_t>(i)].get<double>();
    return v;
}

}  // namespace detail

inline SpecialKind special_kind_from_name(const std::string& name) {
    if (name == "binf") return SpecialKind::BInf;
    if (name == "b1") return SpecialKind::B1;
    if (name == "binfplus") return SpecialKind::BInfPlus;
    if (name == "b1plus") return SpecialKind::B1Plus;
    throw PolyfactError("unknown special polytope name: " + name);
}

inline nlohmann::json polytope_to_json(const Polytope& p) {
    nlohmann::json j;
    j["dim"] = p.dim();
    if (auto k = p.special()) {
        j["kind"] = "special";
        j["name"] = special_kind_name(*k);
    } else if (p.has_feature_spec()) {
        j["kind"] = "featurespec";
        nlohmann::json cs = nlohmann::json::array();
        for (const auto& c : p.feature_spec().constraints) {
            nlohmann::json jc;
            if (const auto* box = std::get_if<BoxConstraint>(&c)) {
                jc = {{"type", "box"}, {"index", box->index}, {"lo", box->lo}, {"hi", box->hi}};
            } else if (const auto* l1 = std::get_if<L1BallConstraint>(&c)) {
                jc = {{"type", "l1ball"}, {"indices", l1->indices}, {"radius", l1->radius}};
            } else {
                const auto& cap = std::get<SimplexCapConstraint>(c);
                jc = {{"type", "simplexcap"}, {"indices", cap.indices}, {"radius", cap.radius}};
            }
            cs.push_back(jc);
        }
        j["constraints"] = cs;
    } else if (p.has_hform()) {
        j["kind"] = "hform";
        j["A"] = detail::matrix_to_json(p.hform().A);
        j["b"] = detail::vector_to_json(p.hform().b);
    } else {
        j["kind"] = "vform";
        j["V"] = detail::matrix_to_json(p.vform().V);
    }
    return j;
}

inline Polytope polytope_from_json(const nlohmann::json& j) {
    if (!j.contains("dim") || !j.contains("kind"))
        throw PolyfactError("polytope json: 'dim' and 'kind' are required");
    const int dim = j.at("dim").get<int>();
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "special") {
        return make_special(special_kind_from_name(j.at("name").get<std::string>()), dim);
    }
    if (kind == "hform") {
        HalfspaceForm h{detail::matrix_from_json(j.at("A")), detail::vector_from_json(j.at("b"))};
        if (static_cast<int>(h.dim()) != dim) throw PolyfactError("polytope json: dim mismatch");
        h.validate();
        return Polytope(std::move(h));
    }
    if (kind == "vform") {
        VertexForm v{detail::matrix_from_json(j.at("V"))};
        if (static_cast<int>(v.dim()) != dim) throw PolyfactError("polytope json: dim mismatch");
        return Polytope(std::move(v));
    }
    if (kind == "featurespec") {
        FeatureSpec spec;
        spec.dim = dim;
        for (const auto& jc : j.at("constraints")) {
            const std::string type = jc.at("type").get<std::string>();
            if (type == "box") {
                spec.constraints.push_back(BoxConstraint{jc.at("index").get<int>(),
                                                         jc.at("lo").get<double>(),
                                                         jc.at("hi").get<double>()});
            } else if (type == "l1ball") {
                spec.constraints.push_back(L1BallConstraint{
                    jc.at("indices").get<std::vector<int>>(), jc.at("radius").get<double>()});
            } else if (type == "simplexcap") {
                spec.constraints.push_back(SimplexCapConstraint{
                    jc.at("indices").get<std::vector<int>>(), jc.at("radius").get<double>()});
            } else {
                throw PolyfactError("polytope json: unknown constraint type " + type);
            }
        }
        spec.validate();
        return Polytope(std::move(spec));
    }
    throw PolyfactError("polytope json: unknown kind " + kind);
}

inline nlohmann::json ellipsoid_to_json(const Ellipsoid& e) {
    return {{"C", detail::matrix_to_json(e.C)}, {"g", detail::vector_to_json(e.g)}};
}

inline Ellipsoid ellipsoid_from_json(const nlohmann::json& j) {
    Ellipsoid e{detail::matrix_from_json(j.at("C")), detail::vector_from_json(j.at("g"))};
    e.validate();
    return e;
}

inline Polytope load_polytope_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw PolyfactError("cannot open polytope file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& ex) {
        throw PolyfactError(std::string("polytope json parse error: ") + ex.what());
    }
    return polytope_from_json(j);
}

// CLI convenience: a special-polytope name ("binf", ...), the built-in
// composite demo ("composite"), or a JSON file path.
inline Polytope resolve_polytope_arg(const std::string& arg, int dim) {
    if (arg == "binf" || arg == "b1" || arg == "binfplus" || arg == "b1plus") {
        if (dim < 1)
            throw PolyfactError("special polytope '" + arg + "' needs a positive dimension");
        return make_special(special_kind_from_name(arg), dim);
    }
    if (arg == "composite") return make_composite_example();
    return load_polytope_file(arg);
}

} // namespace polyfact

#endif
