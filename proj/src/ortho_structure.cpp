#include "qlbridge/ortho_structure.hpp"

#include <algorithm>
#include <numeric>

#include "qlbridge/errors.hpp"

namespace qlb {

void OrthoStructure::validate_shape() const {
    const std::size_t n = labels.size();
    if (leq.size() != n) throw InputError("ortho structure: order matrix has wrong row count");
    for (const auto& row : leq)
        if (row.size() != n) throw InputError("ortho structure: order matrix is not square");
    if (ortho.size() != n) throw InputError("ortho structure: ortho map has wrong size");
    for (int t : ortho)
        if (t < 0 || static_cast<std::size_t>(t) >= n)
            throw InputError("ortho structure: ortho map leaves the element list");
}

std::vector<OrthoViolation> weak_ortho_violations(const OrthoStructure& s) {
    s.validate_shape();
    std::vector<OrthoViolation> out;
    const std::size_t n = s.size();
    for (std::size_t i = 0; i < n; ++i)
        if (!s.leq[i][i]) out.push_back({"reflexivity", s.labels[i]});
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                if (s.leq[i][j] && s.leq[j][k] && !s.leq[i][k]) {
                    out.push_back({"transitivity",
                                   s.labels[i] + " ≺ " + s.labels[j] + " ≺ " + s.labels[k]});
                    goto transitivity_done;
                }
transitivity_done:
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t ii = s.ortho[s.ortho[i]];
        if (!s.equivalent(i, ii))
            out.push_back({"involution", s.labels[i] + "^⊥⊥ = " + s.labels[ii]});
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (s.leq[i][j] && !s.leq[s.ortho[j]][s.ortho[i]])
                out.push_back({"antitonicity", "(" + s.labels[i] + ", " + s.labels[j] + ")"});
    return out;
}

QuotientResult quotient(const OrthoStructure& s) {
    s.validate_shape();
    const std::size_t n = s.size();
    QuotientResult q;
    q.class_of.assign(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        if (q.class_of[i] >= 0) continue;
        int cls = static_cast<int>(q.representative.size());
        q.class_of[i] = cls;
        q.representative.push_back(static_cast<int>(i));
        for (std::size_t j = i + 1; j < n; ++j)
            if (q.class_of[j] < 0 && s.equivalent(i, j)) q.class_of[j] = cls;
    }
    const std::size_t m = q.representative.size();
    q.structure.labels.resize(m);
    q.structure.leq.assign(m, std::vector<bool>(m, false));
    q.structure.ortho.assign(m, -1);
    for (std::size_t a = 0; a < m; ++a) {
        q.structure.labels[a] = s.labels[q.representative[a]];
        for (std::size_t b = 0; b < m; ++b)
            q.structure.leq[a][b] = s.leq[q.representative[a]][q.representative[b]];
    }
    for (std::size_t i = 0; i < n; ++i) {
        int cls = q.class_of[i];
        int target = q.class_of[s.ortho[i]];
        if (q.structure.ortho[cls] < 0)
            q.structure.ortho[cls] = target;
        else if (q.structure.ortho[cls] != target)
            throw InputError("ortho map is not constant on the equivalence class of '" +
                             s.labels[i] + "'");
    }
    return q;
}

namespace {

// Greatest lower bound of {i, j} within the finite poset, -1 if none.
int glb(const OrthoStructure& p, int i, int j) {
    int best = -1;
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (!p.leq[k][i] || !p.leq[k][j]) continue;
        if (best < 0 || p.leq[best][k]) best = static_cast<int>(k);
    }
    if (best < 0) return -1;
    for (std::size_t k = 0; k < p.size(); ++k)
        if (p.leq[k][i] && p.leq[k][j] && !p.leq[k][best]) return -1;
    return best;
}

int lub(const OrthoStructure& p, int i, int j) {
    int best = -1;
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (!p.leq[i][k] || !p.leq[j][k]) continue;
        if (best < 0 || p.leq[k][best]) best = static_cast<int>(k);
    }
    if (best < 0) return -1;
    for (std::size_t k = 0; k < p.size(); ++k)
        if (p.leq[i][k] && p.leq[j][k] && !p.leq[best][k]) return -1;
    return best;
}

} // namespace

LatticeDiagnostics lattice_diagnostics(const OrthoStructure& input) {
    QuotientResult q = quotient(input);
    const OrthoStructure& p = q.structure;
    const int n = static_cast<int>(p.size());
    LatticeDiagnostics d;

    int bottom = -1, top = -1;
    for (int i = 0; i < n; ++i) {
        if (std::all_of(p.leq[i].begin(), p.leq[i].end(), [](bool b) { return b; })) bottom = i;
        bool is_top = true;
        for (int j = 0; j < n; ++j) is_top = is_top && p.leq[j][i];
        if (is_top) top = i;
    }
    if (bottom < 0 || top < 0) {
        d.bounded_lattice = false;
        d.bound_failure = bottom < 0 ? "no least element" : "no greatest element";
        return d;
    }

    std::vector<std::vector<int>> meets(n, std::vector<int>(n)), joins(n, std::vector<int>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            meets[i][j] = glb(p, i, j);
            joins[i][j] = lub(p, i, j);
            if (meets[i][j] < 0 || joins[i][j] < 0) {
                d.bounded_lattice = false;
                d.bound_failure = "no " + std::string(meets[i][j] < 0 ? "meet" : "join") +
                                  " for (" + p.labels[i] + ", " + p.labels[j] + ")";
                return d;
            }
        }

    // Orthomodular law: a ≤ b implies b = a ∨ (a⊥ ∧ b).
    for (int a = 0; a < n && d.orthomodular.holds; ++a)
        for (int b = 0; b < n; ++b) {
            if (!p.leq[a][b]) continue;
            int rhs = joins[a][meets[p.ortho[a]][b]];
            if (rhs != b) {
                d.orthomodular = {false, "a=" + p.labels[a] + ", b=" + p.labels[b]};
                break;
            }
        }

    // Distributivity: a ∧ (b ∨ c) = (a ∧ b) ∨ (a ∧ c).
    for (int a = 0; a < n && d.distributive.holds; ++a)
        for (int b = 0; b < n && d.distributive.holds; ++b)
            for (int c = 0; c < n; ++c) {
                int lhs = meets[a][joins[b][c]];
                int rhs = joins[meets[a][b]][meets[a][c]];
                if (lhs != rhs) {
                    d.distributive = {false, "a=" + p.labels[a] + ", b=" + p.labels[b] +
                                                 ", c=" + p.labels[c]};
                    break;
                }
            }

    bool complemented = true;
    for (int a = 0; a < n; ++a)
        complemented = complemented && meets[a][p.ortho[a]] == bottom && joins[a][p.ortho[a]] == top;
    d.boolean = d.distributive.holds && complemented;
    return d;
}

namespace {

// Per-element invariant preserved by any order+ortho isomorphism.
struct NodeSignature {
    int down, up, ortho_down, self_ortho;
    bool operator==(const NodeSignature&) const = default;
    auto operator<=>(const NodeSignature&) const = default;
};

std::vector<NodeSignature> signatures(const OrthoStructure& p) {
    const int n = static_cast<int>(p.size());
    std::vector<NodeSignature> sig(n);
    for (int i = 0; i < n; ++i) {
        int down = 0, up = 0, odown = 0;
        for (int j = 0; j < n; ++j) {
            if (p.leq[j][i]) ++down;
            if (p.leq[i][j]) ++up;
            if (p.leq[j][p.ortho[i]]) ++odown;
        }
        sig[i] = {down, up, odown, p.ortho[i] == i ? 1 : 0};
    }
    return sig;
}

bool extend(const OrthoStructure& a, const OrthoStructure& b,
            const std::vector<NodeSignature>& sa, const std::vector<NodeSignature>& sb,
            std::vector<int>& map_ab, std::vector<bool>& used, std::size_t next) {
    const std::size_t n = a.size();
    if (next == n) return true;
    for (std::size_t cand = 0; cand < n; ++cand) {
        if (used[cand] || sa[next] != sb[cand]) continue;
        bool ok = true;
        for (std::size_t prev = 0; prev < next && ok; ++prev) {
            ok = a.leq[next][prev] == b.leq[cand][map_ab[prev]] &&
                 a.leq[prev][next] == b.leq[map_ab[prev]][cand];
        }
        // Ortho compatibility with already-placed elements.
        if (ok) {
            int oa = a.ortho[next];
            if (static_cast<std::size_t>(oa) < next && map_ab[oa] != b.ortho[cand]) ok = false;
            if (static_cast<std::size_t>(oa) == next && b.ortho[cand] != static_cast<int>(cand))
                ok = false;
            for (std::size_t prev = 0; prev < next && ok; ++prev)
                if (a.ortho[prev] == static_cast<int>(next) &&
                    b.ortho[map_ab[prev]] != static_cast<int>(cand))
                    ok = false;
        }
        if (!ok) continue;
        map_ab[next] = static_cast<int>(cand);
        used[cand] = true;
        if (extend(a, b, sa, sb, map_ab, used, next + 1)) return true;
        used[cand] = false;
    }
    return false;
}

} // namespace

IsoResult order_isomorphic(const OrthoStructure& a_in, const OrthoStructure& b_in) {
    QuotientResult qa = quotient(a_in), qb = quotient(b_in);
    IsoResult res;
    res.classes_a = qa.structure.size();
    res.classes_b = qb.structure.size();
    if (res.classes_a != res.classes_b) {
        res.refutation = "class counts differ: " + std::to_string(res.classes_a) + " vs " +
                         std::to_string(res.classes_b);
        return res;
    }
    auto sa = signatures(qa.structure), sb = signatures(qb.structure);
    auto sorted_a = sa, sorted_b = sb;
    std::sort(sorted_a.begin(), sorted_a.end());
    std::sort(sorted_b.begin(), sorted_b.end());
    if (sorted_a != sorted_b) {
        res.refutation = "order/ortho degree signatures differ";
        return res;
    }
    std::vector<int> map_ab(res.classes_a, -1);
    std::vector<bool> used(res.classes_a, false);
    if (extend(qa.structure, qb.structure, sa, sb, map_ab, used, 0)) {
        res.mapping = map_ab;
    } else {
        res.refutation = "no order- and ortho-preserving bijection (search exhausted)";
    }
    return res;
}

ConcreteLogic concrete_logic(const ClassicalModel& m, const std::vector<WffPtr>& phi_v,
                             const std::map<std::string, std::string>& ortho) {
    ConcreteLogic out;
    out.elements = phi_v;
    const std::size_t n = phi_v.size();
    std::map<std::string, std::size_t> index;
    out.structure.labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::string label = print(*phi_v[i]);
        index.emplace(label, i);
        out.structure.labels.push_back(std::move(label));
    }
    out.structure.ortho.assign(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        auto it = ortho.find(out.structure.labels[i]);
        if (it == ortho.end())
            throw InputError("ortho map missing entry for '" + out.structure.labels[i] + "'");
        auto target = index.find(it->second);
        if (target == index.end())
            throw InputError("ortho map sends '" + out.structure.labels[i] + "' to '" +
                             it->second + "', which is not in phi_V");
        out.structure.ortho[i] = static_cast<int>(target->second);
    }
    out.structure.leq.assign(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            out.structure.leq[i][j] = physical_preorder(*phi_v[i], *phi_v[j], m);
    out.violations = weak_ortho_violations(out.structure);
    return out;
}

} // namespace qlb
