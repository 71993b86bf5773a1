#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "errors.hpp"

namespace iaco {

/// Index of a design element. Attributes occupy [0, A), methods [A, A + M).
using ElementId = std::uint32_t;

/// A method's dependency on an attribute. Indices are per-category.
struct Use {
    std::uint32_t method = 0;
    std::uint32_t attribute = 0;

    auto operator<=>(const Use&) const = default;
};

/// Attributes, methods and uses to be grouped into a fixed number of classes.
/// Labels double as ids and are unique within their category.
struct DesignProblem {
    std::string name;
    std::vector<std::string> attributes;
    std::vector<std::string> methods;
    std::vector<Use> uses;
    std::uint32_t class_count = 1;

    std::uint32_t attribute_count() const { return static_cast<std::uint32_t>(attributes.size()); }
    std::uint32_t method_count() const { return static_cast<std::uint32_t>(methods.size()); }
    std::uint32_t element_count() const { return attribute_count() + method_count(); }

    bool is_attribute(ElementId e) const { return e < attribute_count(); }
    bool is_method(ElementId e) const { return e >= attribute_count() && e < element_count(); }
    ElementId attribute_element(std::uint32_t a) const { return a; }
    ElementId method_element(std::uint32_t m) const { return attribute_count() + m; }

    const std::string& label(ElementId e) const {
        return is_attribute(e) ? attributes[e] : methods[e - attribute_count()];
    }

    bool operator==(const DesignProblem&) const = default;
};

namespace detail {

inline void require_unique(const std::vector<std::string>& labels, const char* category) {
    std::unordered_set<std::string> seen;
    for (const auto& l : labels) {
        if (!seen.insert(l).second) {
            throw ValidationError(std::string("duplicate ") + category + " id \"" + l + "\"");
        }
    }
}

}  // namespace detail

/// Throws ValidationError when any invariant of DesignProblem is broken.
inline void validate(const DesignProblem& p) {
    detail::require_unique(p.attributes, "attribute");
    detail::require_unique(p.methods, "method");
    if (p.uses.empty()) throw ValidationError("problem needs at least one use");
    std::set<Use> seen;
    for (const auto& u : p.uses) {
        if (u.method >= p.method_count()) throw ValidationError("use references unknown method");
        if (u.attribute >= p.attribute_count()) throw ValidationError("use references unknown attribute");
        if (!seen.insert(u).second) {
            throw ValidationError("duplicate use (" + p.methods[u.method] + ", " + p.attributes[u.attribute] + ")");
        }
    }
    if (p.class_count < 1) throw ValidationError("classCount must be at least 1");
    if (p.class_count > p.element_count()) {
        throw ValidationError("classCount exceeds number of attributes and methods");
    }
}

/// A grouping of every element into class_count ordered classes. Element order
/// within a class is kept because it encodes the construction path.
struct DesignSolution {
    std::vector<std::vector<ElementId>> classes;

    bool operator==(const DesignSolution&) const = default;
};

inline constexpr std::uint32_t kUnassigned = ~std::uint32_t{0};

/// Class index of every element; throws when the solution is not a partition of the problem.
inline std::vector<std::uint32_t> class_assignment(const DesignProblem& p, const DesignSolution& s) {
    if (s.classes.size() != p.class_count) {
        throw ValidationError("solution has " + std::to_string(s.classes.size()) + " classes, problem requires " +
                              std::to_string(p.class_count));
    }
    std::vector<std::uint32_t> owner(p.element_count(), kUnassigned);
    for (std::uint32_t c = 0; c < s.classes.size(); ++c) {
        for (ElementId e : s.classes[c]) {
            if (e >= p.element_count()) throw ValidationError("solution references unknown element");
            if (owner[e] != kUnassigned) throw ValidationError("element \"" + p.label(e) + "\" assigned twice");
            owner[e] = c;
        }
    }
    for (ElementId e = 0; e < owner.size(); ++e) {
        if (owner[e] == kUnassigned) throw ValidationError("element \"" + p.label(e) + "\" not assigned");
    }
    return owner;
}

inline void validate(const DesignProblem& p, const DesignSolution& s) { (void)class_assignment(p, s); }

inline bool is_valid(const DesignProblem& p, const DesignSolution& s) {
    try {
        validate(p, s);
        return true;
    } catch (const ValidationError&) {
        return false;
    }
}

}  // namespace iaco
