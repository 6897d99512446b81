#pragma once

#include <map>
#include <string>
#include <vector>

namespace qlb {

struct ObservableTag {
    std::string observable;
    std::vector<std::string> values;
};

// The alphabet the formula language is built over: state predicates,
// property predicates, mu-context identifiers, and per-property sets of
// measurement procedures. Optional observable tags mirror the classical
// representation of a property as (observable, value set).
struct Signature {
    std::vector<std::string> states;
    std::vector<std::string> properties;
    std::vector<std::string> mu_contexts;
    std::map<std::string, std::vector<std::string>> procedures; // property -> procedure ids
    std::map<std::string, std::vector<std::string>> observable_domains;
    std::map<std::string, ObservableTag> observable_tags;

    bool is_state(const std::string& id) const;
    bool is_property(const std::string& id) const;
    bool is_context(const std::string& id) const;

    // Procedures shared by every property in `props` (set intersection).
    std::vector<std::string> shared_procedures(const std::vector<std::string>& props) const;

    // Throws InputError on any structural violation: overlapping state and
    // property names, a property without measurement procedures, a tag whose
    // value set leaves its observable's domain.
    void validate() const;

    // Sorts and dedupes the identifier lists so downstream iteration order
    // is deterministic.
    void normalize();
};

} // namespace qlb
