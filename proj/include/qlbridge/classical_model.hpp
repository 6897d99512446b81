#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qlbridge/rational.hpp"
#include "qlbridge/signature.hpp"
#include "qlbridge/wff.hpp"

namespace qlb {

// Subset of a finite universe, stored as a bit vector over object indices.
class ObjectSet {
public:
    ObjectSet() = default;
    explicit ObjectSet(std::size_t universe_size, bool full = false);

    std::size_t universe_size() const { return size_; }
    bool test(std::size_t i) const;
    void set(std::size_t i, bool value = true);
    std::size_t count() const;
    bool empty() const { return count() == 0; }

    ObjectSet complement() const;
    ObjectSet intersect(const ObjectSet& other) const;
    ObjectSet unite(const ObjectSet& other) const;
    bool subset_of(const ObjectSet& other) const;
    bool intersects(const ObjectSet& other) const;
    bool operator==(const ObjectSet& other) const;

    std::vector<std::size_t> members() const;

private:
    std::size_t size_ = 0;
    std::vector<std::uint64_t> bits_;
    void check_same(const ObjectSet& other) const;
};

// Finite universe of individual objects with an extension for every atomic
// predicate and a rational probability weight per object (uniform unless
// stated). An interpretation of the variable x is a choice of object, so the
// interpretation set coincides with the universe.
struct ClassicalModel {
    Signature signature;
    std::vector<std::string> universe;
    std::map<std::string, std::size_t> object_index;
    std::map<std::string, ObjectSet> atom_extensions; // atom key -> extension
    std::vector<Rational> weights;
    bool uniform_weights = false;

    static ClassicalModel make(Signature sig, std::vector<std::string> universe_ids,
                               std::map<std::string, std::vector<std::string>> extensions,
                               std::map<std::string, Rational> object_weights = {});

    const ObjectSet& extension_of_atom(const std::string& key) const;
    ObjectSet set_of(const std::vector<std::string>& object_ids) const;
    Rational measure(const ObjectSet& s) const;
    void validate() const;
};

// Recursive extension of a wff: complement / intersection / union over the
// atom extensions; implication as material conditional. The truth value of w
// under the interpretation sigma(x) = u is membership of u in this set.
ObjectSet extension(const Wff& w, const ClassicalModel& m);

bool holds_at(const Wff& w, const ClassicalModel& m, const std::string& object_id);

// a < b: truth preservation under every interpretation, i.e. extension
// inclusion. Logical equivalence is mutual preorder.
bool logical_preorder(const Wff& a, const Wff& b, const ClassicalModel& m);

enum class CTruth { certainly_true, certainly_false, indeterminate, vacuous };

std::string to_string(CTruth v);

// Certain truth of a property-only wff in a state: certainly true when every
// object satisfying S(x) satisfies the wff, certainly false when none does.
// A state with empty extension satisfies both clauses and is reported as
// `vacuous`.
CTruth c_truth(const Wff& a, const std::string& state_id, const ClassicalModel& m);

// a ≺ b: for every state, certain truth of a implies certain truth of b.
// Implied by the logical preorder but generally weaker.
bool physical_preorder(const Wff& a, const Wff& b, const ClassicalModel& m);

bool physical_equivalent(const Wff& a, const Wff& b, const ClassicalModel& m);

struct VerifiabilityOverride {
    std::vector<WffPtr> add;
    std::vector<WffPtr> remove;
};

// The candidates whose extension coincides with the extension of some
// elementary property wff of the model. The override models theories with
// restricted testability criteria.
std::vector<WffPtr> verifiable_wffs(const std::vector<WffPtr>& candidates, const ClassicalModel& m,
                                    const VerifiabilityOverride& override_list = {});

} // namespace qlb
