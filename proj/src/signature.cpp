#include "qlbridge/signature.hpp"

#include <algorithm>
#include <set>

#include "qlbridge/errors.hpp"

namespace qlb {

namespace {

bool contains(const std::vector<std::string>& v, const std::string& id) {
    return std::binary_search(v.begin(), v.end(), id);
}

void sort_unique(std::vector<std::string>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

} // namespace

bool Signature::is_state(const std::string& id) const { return contains(states, id); }
bool Signature::is_property(const std::string& id) const { return contains(properties, id); }
bool Signature::is_context(const std::string& id) const { return contains(mu_contexts, id); }

std::vector<std::string> Signature::shared_procedures(const std::vector<std::string>& props) const {
    std::vector<std::string> shared;
    bool first = true;
    for (const auto& p : props) {
        auto it = procedures.find(p);
        if (it == procedures.end()) throw InputError("unknown property '" + p + "'");
        std::vector<std::string> ms = it->second;
        std::sort(ms.begin(), ms.end());
        if (first) {
            shared = ms;
            first = false;
        } else {
            std::vector<std::string> next;
            std::set_intersection(shared.begin(), shared.end(), ms.begin(), ms.end(),
                                  std::back_inserter(next));
            shared = std::move(next);
        }
    }
    return shared;
}

void Signature::validate() const {
    for (const auto& s : states)
        if (is_property(s))
            throw InputError("identifier '" + s + "' declared both as state and property");
    for (const auto& p : properties) {
        auto it = procedures.find(p);
        if (it == procedures.end() || it->second.empty())
            throw InputError("property '" + p + "' has no measurement procedure");
    }
    for (const auto& [prop, _] : procedures)
        if (!is_property(prop))
            throw InputError("procedure set declared for unknown property '" + prop + "'");
    for (const auto& [prop, tag] : observable_tags) {
        if (!is_property(prop))
            throw InputError("observable tag on unknown property '" + prop + "'");
        auto dom = observable_domains.find(tag.observable);
        if (dom == observable_domains.end())
            throw InputError("observable tag on '" + prop + "' references undeclared observable '" +
                             tag.observable + "'");
        for (const auto& v : tag.values)
            if (std::find(dom->second.begin(), dom->second.end(), v) == dom->second.end())
                throw InputError("observable tag on '" + prop + "' uses value '" + v +
                                 "' outside the domain of '" + tag.observable + "'");
    }
}

void Signature::normalize() {
    sort_unique(states);
    sort_unique(properties);
    sort_unique(mu_contexts);
    for (auto& [_, ms] : procedures) sort_unique(ms);
}

} // namespace qlb
