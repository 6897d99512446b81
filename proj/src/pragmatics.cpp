#include "qlbridge/pragmatics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <random>

#include "qlbridge/errors.hpp"

namespace qlb {

namespace {

AfPtr make(AssertiveFormula f) { return std::make_shared<const AssertiveFormula>(std::move(f)); }

} // namespace

AfPtr AssertiveFormula::assertion(WffPtr radical) {
    return make({Kind::assertion, std::move(radical), nullptr, nullptr});
}
AfPtr AssertiveFormula::n(AfPtr d) { return make({Kind::N, nullptr, std::move(d), nullptr}); }
AfPtr AssertiveFormula::k(AfPtr x, AfPtr y) {
    return make({Kind::K, nullptr, std::move(x), std::move(y)});
}
AfPtr AssertiveFormula::a(AfPtr x, AfPtr y) {
    return make({Kind::A, nullptr, std::move(x), std::move(y)});
}
AfPtr AssertiveFormula::c(AfPtr x, AfPtr y) {
    return make({Kind::C, nullptr, std::move(x), std::move(y)});
}
AfPtr AssertiveFormula::e(AfPtr x, AfPtr y) {
    return make({Kind::E, nullptr, std::move(x), std::move(y)});
}

std::string print(const AssertiveFormula& d) {
    switch (d.kind) {
    case AssertiveFormula::Kind::assertion: return "|-(" + print(*d.radical) + ")";
    case AssertiveFormula::Kind::N: return "N" + print(*d.left);
    case AssertiveFormula::Kind::K: return "K(" + print(*d.left) + "," + print(*d.right) + ")";
    case AssertiveFormula::Kind::A: return "A(" + print(*d.left) + "," + print(*d.right) + ")";
    case AssertiveFormula::Kind::C: return "C(" + print(*d.left) + "," + print(*d.right) + ")";
    case AssertiveFormula::Kind::E: return "E(" + print(*d.left) + "," + print(*d.right) + ")";
    }
    throw std::logic_error("unreachable");
}

namespace {

class AfParser {
public:
    AfParser(const std::string& text, const Signature& sig) : text_(text), sig_(sig) {}

    AfPtr run() {
        AfPtr d = parse_af();
        skip_ws();
        if (pos_ != text_.size()) throw ParseError("unexpected trailing input", pos_);
        return d;
    }

private:
    const std::string& text_;
    const Signature& sig_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    void expect(char c) {
        skip_ws();
        if (pos_ >= text_.size() || text_[pos_] != c)
            throw ParseError("expected '" + std::string(1, c) + "'", pos_);
        ++pos_;
    }

    AfPtr parse_af() {
        skip_ws();
        if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
        if (text_.compare(pos_, 2, "|-") == 0) {
            pos_ += 2;
            expect('(');
            // The radical runs to the matching close parenthesis.
            std::size_t depth = 1, start = pos_;
            while (pos_ < text_.size() && depth > 0) {
                if (text_[pos_] == '(') ++depth;
                if (text_[pos_] == ')') --depth;
                ++pos_;
            }
            if (depth != 0) throw ParseError("unterminated radical formula", start);
            std::string radical_text = text_.substr(start, pos_ - 1 - start);
            return AssertiveFormula::assertion(parse(radical_text, sig_, Alphabet::basic));
        }
        char head = text_[pos_];
        if (head == 'N') {
            ++pos_;
            return AssertiveFormula::n(parse_af());
        }
        if (head == 'K' || head == 'A' || head == 'C' || head == 'E') {
            ++pos_;
            expect('(');
            AfPtr x = parse_af();
            expect(',');
            AfPtr y = parse_af();
            expect(')');
            switch (head) {
            case 'K': return AssertiveFormula::k(x, y);
            case 'A': return AssertiveFormula::a(x, y);
            case 'C': return AssertiveFormula::c(x, y);
            default: return AssertiveFormula::e(x, y);
            }
        }
        throw ParseError("expected an assertive formula", pos_);
    }
};

} // namespace

AfPtr parse_assertive(const std::string& text, const Signature& sig) {
    return AfParser(text, sig).run();
}

const Projection& QuantumProofOracle::binding(const std::string& property_id) const {
    auto it = bindings.find(property_id);
    if (it == bindings.end())
        throw PreconditionError("no projection bound to property '" + property_id + "'");
    return it->second;
}

void QuantumProofOracle::validate() const {
    for (const auto& [id, p] : bindings) {
        if (p.dim() != dim) throw InputError("binding for '" + id + "' has the wrong dimension");
        p.validate(tol);
    }
}

namespace {

bool subspace_leq(const Matrix& p, const Matrix& q, double tol) {
    return (q * p - p).cwiseAbs().maxCoeff() <= tol;
}

void canonicalize(JustificationSet& s, double tol) {
    auto& ms = s.members;
    ms.erase(std::remove_if(ms.begin(), ms.end(),
                            [&](const Matrix& m) { return m.trace().real() < 0.5; }),
             ms.end());
    // Drop members contained in another member.
    std::vector<Matrix> kept;
    for (std::size_t i = 0; i < ms.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < ms.size() && !dominated; ++j) {
            if (i == j) continue;
            if (subspace_leq(ms[i], ms[j], tol)) {
                // Ties (equal subspaces) keep the first occurrence only.
                dominated = !subspace_leq(ms[j], ms[i], tol) || j < i;
            }
        }
        if (!dominated) kept.push_back(ms[i]);
    }
    std::stable_sort(kept.begin(), kept.end(), [&](const Matrix& a, const Matrix& b) {
        return a.trace().real() < b.trace().real() - 0.5;
    });
    s.members = std::move(kept);
}

// Intersection of the subspaces of multiple projections.
Matrix intersect_all(const std::vector<Matrix>& parts, int dim, double tol) {
    Projection acc = identity_projection(dim);
    for (const auto& p : parts) acc = meet(acc, {p}, tol);
    return acc.m;
}

bool truth_of(const Wff& w, const std::map<std::string, bool>& valuation) {
    switch (w.kind) {
    case Wff::Kind::property_atom: return valuation.at(w.name);
    case Wff::Kind::negation: return !truth_of(*w.left, valuation);
    case Wff::Kind::conjunction: return truth_of(*w.left, valuation) && truth_of(*w.right, valuation);
    case Wff::Kind::disjunction: return truth_of(*w.left, valuation) || truth_of(*w.right, valuation);
    case Wff::Kind::implication:
        return !truth_of(*w.left, valuation) || truth_of(*w.right, valuation);
    default: throw PreconditionError("radical formula contains a non-property atom");
    }
}

// Justification set of an elementary assertive formula. A radical has a
// truth value at a pure state only when every atom is empirically decided
// there (Born probability 0 or 1); the assertion is justified where the
// radical is decided and true. That region is the union, over satisfying
// valuations of the atoms, of the intersections of the matching ranges and
// kernels.
JustificationSet assertion_set(const Wff& radical, const QuantumProofOracle& oracle) {
    std::vector<std::string> atoms;
    for (const Wff* a : atoms_of(radical)) {
        if (a->kind != Wff::Kind::property_atom)
            throw PreconditionError("radical atom '" + atom_key(*a) +
                                    "' is not a property; the quantum fragment admits property "
                                    "radicals only");
        atoms.push_back(a->name);
    }
    std::sort(atoms.begin(), atoms.end());
    atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());

    JustificationSet out;
    out.dim = oracle.dim;
    const std::size_t k = atoms.size();
    for (std::size_t bits = 0; bits < (std::size_t{1} << k); ++bits) {
        std::map<std::string, bool> valuation;
        std::vector<Matrix> parts;
        for (std::size_t i = 0; i < k; ++i) {
            bool value = (bits >> i) & 1;
            valuation[atoms[i]] = value;
            const Projection& p = oracle.binding(atoms[i]);
            parts.push_back(value ? p.m : ortho(p).m);
        }
        if (truth_of(radical, valuation))
            out.members.push_back(intersect_all(parts, oracle.dim, oracle.tol));
    }
    canonicalize(out, oracle.tol);
    return out;
}

} // namespace

bool JustificationSet::contains(const Vector& pure_state, double tol) const {
    double n2 = pure_state.squaredNorm();
    if (n2 == 0.0) throw InputError("zero vector is not a state");
    for (const auto& p : members) {
        double overlap = (pure_state.adjoint() * p * pure_state).real()(0, 0) / n2;
        if (overlap >= 1.0 - tol) return true;
    }
    return false;
}

bool JustificationSet::subset_of(const JustificationSet& other, double tol) const {
    // A subspace lies in a finite union of subspaces iff it lies in one of
    // them, so member-wise coverage decides inclusion.
    for (const auto& m : members) {
        bool covered = false;
        for (const auto& o : other.members)
            if (subspace_leq(m, o, tol)) {
                covered = true;
                break;
            }
        if (!covered) return false;
    }
    return true;
}

Matrix JustificationSet::span(double tol) const {
    Projection acc = zero_projection(dim);
    for (const auto& m : members) acc = join(acc, {m}, tol);
    return acc.m;
}

JustificationSet justification_set(const AssertiveFormula& d, const QuantumProofOracle& oracle) {
    const double tol = oracle.tol;
    switch (d.kind) {
    case AssertiveFormula::Kind::assertion: return assertion_set(*d.radical, oracle);
    case AssertiveFormula::Kind::N: {
        JustificationSet inner = justification_set(*d.left, oracle);
        JustificationSet out;
        out.dim = oracle.dim;
        out.members.push_back(ortho({inner.span(tol)}).m);
        canonicalize(out, tol);
        return out;
    }
    case AssertiveFormula::Kind::K: {
        JustificationSet l = justification_set(*d.left, oracle);
        JustificationSet r = justification_set(*d.right, oracle);
        JustificationSet out;
        out.dim = oracle.dim;
        for (const auto& a : l.members)
            for (const auto& b : r.members)
                out.members.push_back(meet({a}, {b}, tol).m);
        canonicalize(out, tol);
        return out;
    }
    case AssertiveFormula::Kind::A: {
        JustificationSet l = justification_set(*d.left, oracle);
        JustificationSet r = justification_set(*d.right, oracle);
        JustificationSet out;
        out.dim = oracle.dim;
        out.members = l.members;
        out.members.insert(out.members.end(), r.members.begin(), r.members.end());
        canonicalize(out, tol);
        return out;
    }
    case AssertiveFormula::Kind::C: {
        JustificationSet l = justification_set(*d.left, oracle);
        JustificationSet r = justification_set(*d.right, oracle);
        JustificationSet out;
        out.dim = oracle.dim;
        if (l.subset_of(r, tol)) out.members.push_back(identity_projection(oracle.dim).m);
        return out;
    }
    case AssertiveFormula::Kind::E: {
        JustificationSet l = justification_set(*d.left, oracle);
        JustificationSet r = justification_set(*d.right, oracle);
        JustificationSet out;
        out.dim = oracle.dim;
        if (l.subset_of(r, tol) && r.subset_of(l, tol))
            out.members.push_back(identity_projection(oracle.dim).m);
        return out;
    }
    }
    throw std::logic_error("unreachable");
}

bool justify(const AssertiveFormula& d, const Vector& point, const QuantumProofOracle& oracle) {
    if (point.size() != oracle.dim) throw InputError("evaluation point has the wrong dimension");
    return justification_set(d, oracle).contains(point, oracle.tol);
}

bool pragmatic_preorder(const AssertiveFormula& d1, const AssertiveFormula& d2,
                        const QuantumProofOracle& oracle) {
    return justification_set(d1, oracle).subset_of(justification_set(d2, oracle), oracle.tol);
}

bool pragmatic_preorder_sampled(const AssertiveFormula& d1, const AssertiveFormula& d2,
                                const std::vector<Vector>& points,
                                const QuantumProofOracle& oracle) {
    JustificationSet s1 = justification_set(d1, oracle);
    JustificationSet s2 = justification_set(d2, oracle);
    for (const auto& p : points)
        if (s1.contains(p, oracle.tol) && !s2.contains(p, oracle.tol)) return false;
    return true;
}

std::vector<Vector> sample_pure_states(int dim, std::size_t count, unsigned long long seed) {
    std::mt19937_64 eng(seed);
    auto uniform01 = [&] { return (eng() >> 11) * 0x1.0p-53; };
    auto gaussian = [&] {
        // Box-Muller, hand-rolled so the stream is library-independent.
        double u = 0.0;
        while (u <= 0.0) u = uniform01();
        double v = uniform01();
        return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * M_PI * v);
    };
    std::vector<Vector> out;
    out.reserve(count);
    while (out.size() < count) {
        Vector v(dim);
        for (int i = 0; i < dim; ++i) v[i] = std::complex<double>(gaussian(), gaussian());
        double n = v.norm();
        if (n < 1e-6) continue;
        out.push_back(v / n);
    }
    return out;
}

QuantumFragmentStructure quantum_fragment_structure(const QuantumProofOracle& oracle, int depth,
                                                    std::size_t budget) {
    oracle.validate();

    QuantumFragmentStructure result;
    if (oracle.bindings.empty()) {
        // No formulas exist; only the absurd and the trivial class remain.
        result.structure.labels = {"absurd", "trivial"};
        result.structure.leq = {{true, true}, {false, true}};
        result.structure.ortho = {1, 0};
        result.representatives = result.structure.labels;
        return result;
    }

    struct Item {
        Matrix proj; // justification subspace
        int depth;
        std::string rep;
    };
    std::vector<Item> items;
    auto find = [&](const Matrix& p) {
        for (std::size_t i = 0; i < items.size(); ++i)
            if (approx_equal(items[i].proj, p, oracle.tol)) return static_cast<int>(i);
        return -1;
    };
    auto add = [&](Matrix p, int d, std::string rep) {
        if (find(p) >= 0) return false;
        if (items.size() >= budget)
            throw BudgetExhausted("assertive-formula enumeration exceeded " +
                                  std::to_string(budget) + " distinct justification subspaces");
        items.push_back({std::move(p), d, std::move(rep)});
        return true;
    };

    for (const auto& [id, p] : oracle.bindings) add(p.m, 0, "|-(" + id + "(x))");

    for (int d = 1; d <= depth; ++d) {
        bool grew = false;
        const std::size_t n = items.size();
        for (std::size_t i = 0; i < n; ++i) {
            if (items[i].depth != d - 1) continue;
            grew |= add(ortho({items[i].proj}).m, d, "N" + items[i].rep);
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i; j < n; ++j) {
                if (std::max(items[i].depth, items[j].depth) != d - 1) continue;
                grew |= add(meet({items[i].proj}, {items[j].proj}, oracle.tol).m, d,
                            "K(" + items[i].rep + "," + items[j].rep + ")");
                grew |= add(join({items[i].proj}, {items[j].proj}, oracle.tol).m, d,
                            "A(" + items[i].rep + "," + items[j].rep + ")");
            }
        }
        if (!grew) break;
    }

    // The ortho map must be total, so complements of boundary-depth items
    // are included as well.
    for (std::size_t i = 0, n = items.size(); i < n; ++i)
        add(ortho({items[i].proj}).m, items[i].depth + 1, "N" + items[i].rep);

    const std::size_t n = items.size();
    result.structure.labels.reserve(n);
    for (const auto& it : items) result.structure.labels.push_back(it.rep);
    result.representatives = result.structure.labels;
    result.structure.leq.assign(n, std::vector<bool>(n, false));
    result.structure.ortho.assign(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            result.structure.leq[i][j] =
                projection_leq({items[i].proj}, {items[j].proj}, oracle.tol);
        result.structure.ortho[i] = find(ortho({items[i].proj}).m);
    }
    return result;
}

} // namespace qlb
