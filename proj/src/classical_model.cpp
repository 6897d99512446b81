#include "qlbridge/classical_model.hpp"

#include <algorithm>
#include <bit>

#include "qlbridge/errors.hpp"

namespace qlb {

namespace {
constexpr std::size_t kWordBits = 64;
}

ObjectSet::ObjectSet(std::size_t universe_size, bool full)
    : size_(universe_size), bits_((universe_size + kWordBits - 1) / kWordBits, 0) {
    if (full) {
        for (auto& w : bits_) w = ~std::uint64_t{0};
        if (size_ % kWordBits != 0 && !bits_.empty())
            bits_.back() &= (std::uint64_t{1} << (size_ % kWordBits)) - 1;
    }
}

bool ObjectSet::test(std::size_t i) const {
    return (bits_[i / kWordBits] >> (i % kWordBits)) & 1u;
}

void ObjectSet::set(std::size_t i, bool value) {
    if (value)
        bits_[i / kWordBits] |= std::uint64_t{1} << (i % kWordBits);
    else
        bits_[i / kWordBits] &= ~(std::uint64_t{1} << (i % kWordBits));
}

std::size_t ObjectSet::count() const {
    std::size_t n = 0;
    for (auto w : bits_) n += std::popcount(w);
    return n;
}

void ObjectSet::check_same(const ObjectSet& other) const {
    if (size_ != other.size_) throw std::logic_error("object sets over different universes");
}

ObjectSet ObjectSet::complement() const {
    ObjectSet out(size_, true);
    for (std::size_t i = 0; i < bits_.size(); ++i) out.bits_[i] &= ~bits_[i];
    return out;
}

ObjectSet ObjectSet::intersect(const ObjectSet& other) const {
    check_same(other);
    ObjectSet out(size_);
    for (std::size_t i = 0; i < bits_.size(); ++i) out.bits_[i] = bits_[i] & other.bits_[i];
    return out;
}

ObjectSet ObjectSet::unite(const ObjectSet& other) const {
    check_same(other);
    ObjectSet out(size_);
    for (std::size_t i = 0; i < bits_.size(); ++i) out.bits_[i] = bits_[i] | other.bits_[i];
    return out;
}

bool ObjectSet::subset_of(const ObjectSet& other) const {
    check_same(other);
    for (std::size_t i = 0; i < bits_.size(); ++i)
        if (bits_[i] & ~other.bits_[i]) return false;
    return true;
}

bool ObjectSet::intersects(const ObjectSet& other) const {
    check_same(other);
    for (std::size_t i = 0; i < bits_.size(); ++i)
        if (bits_[i] & other.bits_[i]) return true;
    return false;
}

bool ObjectSet::operator==(const ObjectSet& other) const {
    return size_ == other.size_ && bits_ == other.bits_;
}

std::vector<std::size_t> ObjectSet::members() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < size_; ++i)
        if (test(i)) out.push_back(i);
    return out;
}

ClassicalModel ClassicalModel::make(Signature sig, std::vector<std::string> universe_ids,
                                    std::map<std::string, std::vector<std::string>> extensions,
                                    std::map<std::string, Rational> object_weights) {
    ClassicalModel m;
    sig.normalize();
    sig.validate();
    m.signature = std::move(sig);
    m.universe = std::move(universe_ids);
    for (std::size_t i = 0; i < m.universe.size(); ++i) {
        if (!m.object_index.emplace(m.universe[i], i).second)
            throw InputError("duplicate object id '" + m.universe[i] + "'");
    }
    for (auto& [key, ids] : extensions) m.atom_extensions.emplace(key, m.set_of(ids));
    if (object_weights.empty()) {
        if (m.universe.empty()) throw InputError("empty universe");
        Rational w(1, static_cast<long>(m.universe.size()));
        m.weights.assign(m.universe.size(), w);
        m.uniform_weights = true;
    } else {
        m.weights.resize(m.universe.size());
        for (const auto& [id, w] : object_weights) {
            auto it = m.object_index.find(id);
            if (it == m.object_index.end())
                throw InputError("weight for unknown object '" + id + "'");
            m.weights[it->second] = w;
        }
    }
    m.validate();
    return m;
}

const ObjectSet& ClassicalModel::extension_of_atom(const std::string& key) const {
    auto it = atom_extensions.find(key);
    if (it == atom_extensions.end()) throw InputError("no extension declared for atom '" + key + "'");
    return it->second;
}

ObjectSet ClassicalModel::set_of(const std::vector<std::string>& object_ids) const {
    ObjectSet s(universe.size());
    for (const auto& id : object_ids) {
        auto it = object_index.find(id);
        if (it == object_index.end()) throw InputError("unknown object '" + id + "'");
        s.set(it->second);
    }
    return s;
}

Rational ClassicalModel::measure(const ObjectSet& s) const {
    if (uniform_weights)
        return Rational(static_cast<long long>(s.count()),
                        static_cast<long long>(universe.size()));
    Rational total = 0;
    for (std::size_t i = 0; i < universe.size(); ++i)
        if (s.test(i)) total += weights[i];
    return total;
}

void ClassicalModel::validate() const {
    Rational total = 0;
    for (const auto& w : weights) {
        if (w < 0) throw InputError("negative object weight");
        total += w;
    }
    if (total != 1) throw InputError("object weights sum to " + to_string(total) + ", expected 1");
    for (const auto& [key, ext] : atom_extensions)
        if (ext.universe_size() != universe.size())
            throw InputError("extension of '" + key + "' sized for a different universe");
}

ObjectSet extension(const Wff& w, const ClassicalModel& m) {
    switch (w.kind) {
    case Wff::Kind::state_atom:
    case Wff::Kind::property_atom:
    case Wff::Kind::contextual_atom: return m.extension_of_atom(atom_key(w));
    case Wff::Kind::negation: return extension(*w.left, m).complement();
    case Wff::Kind::conjunction: return extension(*w.left, m).intersect(extension(*w.right, m));
    case Wff::Kind::disjunction: return extension(*w.left, m).unite(extension(*w.right, m));
    case Wff::Kind::implication:
        return extension(*w.left, m).complement().unite(extension(*w.right, m));
    }
    throw std::logic_error("unreachable");
}

bool holds_at(const Wff& w, const ClassicalModel& m, const std::string& object_id) {
    auto it = m.object_index.find(object_id);
    if (it == m.object_index.end()) throw InputError("unknown object '" + object_id + "'");
    return extension(w, m).test(it->second);
}

bool logical_preorder(const Wff& a, const Wff& b, const ClassicalModel& m) {
    return extension(a, m).subset_of(extension(b, m));
}

std::string to_string(CTruth v) {
    switch (v) {
    case CTruth::certainly_true: return "certainly-true";
    case CTruth::certainly_false: return "certainly-false";
    case CTruth::indeterminate: return "indeterminate";
    case CTruth::vacuous: return "vacuous";
    }
    throw std::logic_error("unreachable");
}

namespace {

void require_property_only(const Wff& a, const char* op) {
    if (!fragment_of(a).property_only)
        throw PreconditionError(std::string(op) + ": wff '" + print(a) +
                                "' contains a state atom");
}

// Certain truth/falsity as a pair of flags; an empty-extension state sets both.
struct CFlags {
    bool certainly_true;
    bool certainly_false;
};

CFlags c_flags(const Wff& a, const std::string& state_id, const ClassicalModel& m) {
    const ObjectSet& state_ext = m.extension_of_atom(state_id);
    ObjectSet wff_ext = extension(a, m);
    return {state_ext.subset_of(wff_ext), !state_ext.intersects(wff_ext)};
}

} // namespace

CTruth c_truth(const Wff& a, const std::string& state_id, const ClassicalModel& m) {
    require_property_only(a, "c_truth");
    if (!m.signature.is_state(state_id))
        throw InputError("unknown state '" + state_id + "'");
    CFlags f = c_flags(a, state_id, m);
    if (f.certainly_true && f.certainly_false) return CTruth::vacuous;
    if (f.certainly_true) return CTruth::certainly_true;
    if (f.certainly_false) return CTruth::certainly_false;
    return CTruth::indeterminate;
}

bool physical_preorder(const Wff& a, const Wff& b, const ClassicalModel& m) {
    require_property_only(a, "physical_preorder");
    require_property_only(b, "physical_preorder");
    for (const auto& s : m.signature.states) {
        if (c_flags(a, s, m).certainly_true && !c_flags(b, s, m).certainly_true) return false;
    }
    return true;
}

bool physical_equivalent(const Wff& a, const Wff& b, const ClassicalModel& m) {
    return physical_preorder(a, b, m) && physical_preorder(b, a, m);
}

std::vector<WffPtr> verifiable_wffs(const std::vector<WffPtr>& candidates, const ClassicalModel& m,
                                    const VerifiabilityOverride& override_list) {
    auto in_list = [](const std::vector<WffPtr>& list, const Wff& w) {
        return std::any_of(list.begin(), list.end(),
                           [&](const WffPtr& x) { return structurally_equal(*x, w); });
    };

    // Extensions of the elementary property wffs (plain and contextual).
    std::vector<const ObjectSet*> elementary;
    for (const auto& [key, ext] : m.atom_extensions)
        if (!m.signature.is_state(key)) elementary.push_back(&ext);

    std::vector<WffPtr> out;
    for (const auto& c : candidates) {
        require_property_only(*c, "verifiable_wffs");
        if (in_list(override_list.remove, *c)) continue;
        if (in_list(override_list.add, *c)) {
            out.push_back(c);
            continue;
        }
        ObjectSet ext = extension(*c, m);
        if (std::any_of(elementary.begin(), elementary.end(),
                        [&](const ObjectSet* e) { return *e == ext; }))
            out.push_back(c);
    }
    return out;
}

} // namespace qlb
