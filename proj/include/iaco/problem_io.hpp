#pragma once

#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>

#include <json.hpp>

#include "problem.hpp"

namespace iaco {

namespace detail {

inline std::vector<std::string> string_array(const nlohmann::json& doc, const char* key) {
    if (!doc.contains(key) || !doc[key].is_array()) {
        throw ValidationError(std::string("malformed document: \"") + key + "\" must be an array of strings");
    }
    std::vector<std::string> out;
    out.reserve(doc[key].size());
    for (const auto& v : doc[key]) {
        if (!v.is_string()) throw ValidationError(std::string("malformed document: \"") + key + "\" entries must be strings");
        out.push_back(v.get<std::string>());
    }
    return out;
}

inline std::unordered_map<std::string, std::uint32_t> index_of(const std::vector<std::string>& labels) {
    std::unordered_map<std::string, std::uint32_t> idx;
    for (std::uint32_t i = 0; i < labels.size(); ++i) idx.emplace(labels[i], i);
    return idx;
}

}  // namespace detail

/// Builds a validated problem from an already-parsed instance object.
inline DesignProblem problem_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw ValidationError("malformed document: instance must be an object");
    DesignProblem p;
    if (!doc.contains("name") || !doc["name"].is_string()) throw ValidationError("malformed document: \"name\" must be a string");
    p.name = doc["name"].get<std::string>();
    if (!doc.contains("classCount") || !doc["classCount"].is_number_integer()) {
        throw ValidationError("malformed document: \"classCount\" must be an integer");
    }
    const auto cc = doc["classCount"].get<std::int64_t>();
    if (cc < 1) throw ValidationError("classCount must be at least 1");
    if (cc > std::numeric_limits<std::uint32_t>::max()) throw ValidationError("classCount out of range");
    p.class_count = static_cast<std::uint32_t>(cc);
    p.attributes = detail::string_array(doc, "attributes");
    p.methods = detail::string_array(doc, "methods");
    detail::require_unique(p.attributes, "attribute");
    detail::require_unique(p.methods, "method");

    if (!doc.contains("uses") || !doc["uses"].is_array()) throw ValidationError("malformed document: \"uses\" must be an array");
    const auto attr_idx = detail::index_of(p.attributes);
    const auto meth_idx = detail::index_of(p.methods);
    for (const auto& pair : doc["uses"]) {
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() || !pair[1].is_string()) {
            throw ValidationError("malformed document: each use must be [methodLabel, attributeLabel]");
        }
        const auto m = meth_idx.find(pair[0].get<std::string>());
        if (m == meth_idx.end()) throw ValidationError("unknown method \"" + pair[0].get<std::string>() + "\"");
        const auto a = attr_idx.find(pair[1].get<std::string>());
        if (a == attr_idx.end()) throw ValidationError("unknown attribute \"" + pair[1].get<std::string>() + "\"");
        p.uses.push_back({m->second, a->second});
    }
    validate(p);
    return p;
}

inline DesignProblem parse_problem(std::string_view document) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(document);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("malformed document: ") + e.what());
    }
    return problem_from_json(doc);
}

inline nlohmann::ordered_json problem_to_json(const DesignProblem& p) {
    nlohmann::ordered_json doc;
    doc["name"] = p.name;
    doc["classCount"] = p.class_count;
    doc["attributes"] = p.attributes;
    doc["methods"] = p.methods;
    auto uses = nlohmann::ordered_json::array();
    for (const auto& u : p.uses) uses.push_back({p.methods[u.method], p.attributes[u.attribute]});
    doc["uses"] = std::move(uses);
    return doc;
}

/// Pretty-printed UTF-8 instance document, newline-terminated.
inline std::string serialize_problem(const DesignProblem& p) { return problem_to_json(p).dump(2) + "\n"; }

inline DesignProblem load_problem(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot read problem file \"" + path + "\"");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_problem(buf.str());
}

}  // namespace iaco
