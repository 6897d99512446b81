#include "qlbridge/wff.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

#include "qlbridge/errors.hpp"

namespace qlb {

namespace {

WffPtr make(Wff w) { return std::make_shared<const Wff>(std::move(w)); }

} // namespace

WffPtr Wff::state(std::string id) {
    return make({Kind::state_atom, std::move(id), "", nullptr, nullptr});
}
WffPtr Wff::property(std::string id) {
    return make({Kind::property_atom, std::move(id), "", nullptr, nullptr});
}
WffPtr Wff::contextual(std::string property_id, std::string context_id) {
    return make({Kind::contextual_atom, std::move(property_id), std::move(context_id), nullptr,
                 nullptr});
}
WffPtr Wff::negation_of(WffPtr w) {
    return make({Kind::negation, "", "", std::move(w), nullptr});
}
WffPtr Wff::conjunction_of(WffPtr a, WffPtr b) {
    return make({Kind::conjunction, "", "", std::move(a), std::move(b)});
}
WffPtr Wff::disjunction_of(WffPtr a, WffPtr b) {
    return make({Kind::disjunction, "", "", std::move(a), std::move(b)});
}
WffPtr Wff::implication_of(WffPtr a, WffPtr b) {
    return make({Kind::implication, "", "", std::move(a), std::move(b)});
}

bool structurally_equal(const Wff& a, const Wff& b) {
    if (a.kind != b.kind || a.name != b.name || a.context != b.context) return false;
    if ((a.left == nullptr) != (b.left == nullptr)) return false;
    if ((a.right == nullptr) != (b.right == nullptr)) return false;
    if (a.left && !structurally_equal(*a.left, *b.left)) return false;
    if (a.right && !structurally_equal(*a.right, *b.right)) return false;
    return true;
}

std::string atom_key(const Wff& atom) {
    switch (atom.kind) {
    case Wff::Kind::state_atom:
    case Wff::Kind::property_atom: return atom.name;
    case Wff::Kind::contextual_atom: return atom.name + "[" + atom.context + "]";
    default: throw std::logic_error("atom_key on non-atom node");
    }
}

std::string print(const Wff& w) {
    switch (w.kind) {
    case Wff::Kind::state_atom:
    case Wff::Kind::property_atom: return w.name + "(x)";
    case Wff::Kind::contextual_atom: return w.name + "[" + w.context + "](x)";
    case Wff::Kind::negation: return "~" + print(*w.left);
    case Wff::Kind::conjunction: return "(" + print(*w.left) + " & " + print(*w.right) + ")";
    case Wff::Kind::disjunction: return "(" + print(*w.left) + " | " + print(*w.right) + ")";
    case Wff::Kind::implication: return "(" + print(*w.left) + " -> " + print(*w.right) + ")";
    }
    throw std::logic_error("unreachable");
}

namespace {

// Recursive-descent parser with one token of lookahead over the raw string.
class Parser {
public:
    Parser(const std::string& text, const Signature& sig, Alphabet alphabet)
        : text_(text), sig_(sig), alphabet_(alphabet) {}

    WffPtr run() {
        WffPtr w = parse_implication();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return w;
    }

private:
    const std::string& text_;
    const Signature& sig_;
    Alphabet alphabet_;
    std::size_t pos_ = 0;
    // Whether the expression just parsed was a parenthesized group with no
    // connective applied at the current level; parentheses may wrap exactly
    // one binary application, so "((a & b))" is outside the grammar.
    bool bare_group_ = false;

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    bool eat(const std::string& tok) {
        skip_ws();
        if (text_.compare(pos_, tok.size(), tok) == 0) {
            pos_ += tok.size();
            return true;
        }
        return false;
    }

    void expect(char c, const std::string& what) {
        if (!eat(c)) fail("expected '" + std::string(1, c) + "' " + what);
    }

    WffPtr parse_implication() {
        WffPtr w = parse_disjunction();
        while (true) {
            skip_ws();
            if (text_.compare(pos_, 2, "->") == 0) {
                std::size_t at = pos_;
                pos_ += 2;
                if (alphabet_ == Alphabet::contextual) {
                    pos_ = at;
                    fail("connective '->' is not part of the contextual alphabet");
                }
                w = Wff::implication_of(w, parse_disjunction());
                bare_group_ = false;
            } else {
                return w;
            }
        }
    }

    WffPtr parse_disjunction() {
        WffPtr w = parse_conjunction();
        while (true) {
            skip_ws();
            // A lone '|' only; keep '->' for the caller.
            if (pos_ < text_.size() && text_[pos_] == '|') {
                ++pos_;
                w = Wff::disjunction_of(w, parse_conjunction());
                bare_group_ = false;
            } else {
                return w;
            }
        }
    }

    WffPtr parse_conjunction() {
        WffPtr w = parse_unary();
        while (eat('&')) {
            w = Wff::conjunction_of(w, parse_unary());
            bare_group_ = false;
        }
        return w;
    }

    WffPtr parse_unary() {
        if (eat('~')) {
            WffPtr w = Wff::negation_of(parse_unary());
            bare_group_ = false;
            return w;
        }
        return parse_primary();
    }

    WffPtr parse_primary() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        if (text_[pos_] == '(') {
            std::size_t open = pos_;
            ++pos_;
            WffPtr inner = parse_implication();
            bool inner_is_group = bare_group_;
            expect(')', "to close the group opened earlier");
            bool binary = inner->kind == Wff::Kind::conjunction ||
                          inner->kind == Wff::Kind::disjunction ||
                          inner->kind == Wff::Kind::implication;
            if (!binary || inner_is_group) {
                pos_ = open;
                fail("parentheses must enclose a binary connective application");
            }
            bare_group_ = true;
            return inner;
        }
        WffPtr atom = parse_atom();
        bare_group_ = false;
        return atom;
    }

    std::string parse_ident() {
        skip_ws();
        std::size_t start = pos_;
        if (pos_ >= text_.size() || !(std::isalpha(static_cast<unsigned char>(text_[pos_]))))
            fail("expected identifier");
        ++pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        return text_.substr(start, pos_ - start);
    }

    WffPtr parse_atom() {
        std::size_t ident_at = pos_;
        std::string id = parse_ident();
        std::string ctx;
        bool contextual = false;
        if (eat('[')) {
            contextual = true;
            ctx = parse_ident();
            expect(']', "to close the context reference");
        }
        expect('(', "before the individual variable");
        skip_ws();
        if (pos_ >= text_.size() || text_[pos_] != 'x') fail("expected the individual variable x");
        ++pos_;
        expect(')', "after the individual variable");

        if (contextual) {
            if (alphabet_ == Alphabet::basic) {
                pos_ = ident_at;
                fail("contextual atom '" + id + "[" + ctx +
                     "]' is not part of the basic alphabet");
            }
            if (!sig_.is_property(id)) {
                pos_ = ident_at;
                fail("unknown property '" + id + "'");
            }
            if (!sig_.is_context(ctx)) {
                pos_ = ident_at;
                fail("unknown mu-context '" + ctx + "'");
            }
            return Wff::contextual(id, ctx);
        }
        if (sig_.is_state(id)) return Wff::state(id);
        if (sig_.is_property(id)) {
            if (alphabet_ == Alphabet::contextual) {
                pos_ = ident_at;
                fail("plain property atom '" + id +
                     "' is not part of the contextual alphabet; write " + id + "[c](x)");
            }
            return Wff::property(id);
        }
        pos_ = ident_at;
        fail("unknown identifier '" + id + "'");
    }
};

void walk(const Wff& w, const std::function<void(const Wff&)>& visit) {
    visit(w);
    if (w.left) walk(*w.left, visit);
    if (w.right) walk(*w.right, visit);
}

} // namespace

WffPtr parse(const std::string& text, const Signature& sig, Alphabet alphabet) {
    return Parser(text, sig, alphabet).run();
}

FragmentInfo fragment_of(const Wff& w) {
    FragmentInfo info;
    walk(w, [&](const Wff& node) {
        if (!node.is_atom()) return;
        info.atom_counts[atom_key(node)] += 1;
        if (node.kind == Wff::Kind::state_atom) info.property_only = false;
        if (node.kind == Wff::Kind::contextual_atom) info.has_contextual = true;
    });
    return info;
}

std::vector<const Wff*> atoms_of(const Wff& w) {
    std::vector<const Wff*> out;
    walk(w, [&](const Wff& node) {
        if (node.is_atom()) out.push_back(&node);
    });
    return out;
}

std::vector<std::string> contextual_properties_of(const Wff& w) {
    std::vector<std::string> props;
    walk(w, [&](const Wff& node) {
        if (node.kind == Wff::Kind::contextual_atom) props.push_back(node.name);
    });
    std::sort(props.begin(), props.end());
    props.erase(std::unique(props.begin(), props.end()), props.end());
    return props;
}

std::vector<std::string> contexts_of(const Wff& w) {
    std::vector<std::string> ctxs;
    walk(w, [&](const Wff& node) {
        if (node.kind == Wff::Kind::contextual_atom) ctxs.push_back(node.context);
    });
    std::sort(ctxs.begin(), ctxs.end());
    ctxs.erase(std::unique(ctxs.begin(), ctxs.end()), ctxs.end());
    return ctxs;
}

WffPtr rebind_contexts(const Wff& w, const std::string& context_id) {
    switch (w.kind) {
    case Wff::Kind::contextual_atom: return Wff::contextual(w.name, context_id);
    case Wff::Kind::state_atom: return Wff::state(w.name);
    case Wff::Kind::property_atom: return Wff::property(w.name);
    case Wff::Kind::negation: return Wff::negation_of(rebind_contexts(*w.left, context_id));
    case Wff::Kind::conjunction:
        return Wff::conjunction_of(rebind_contexts(*w.left, context_id),
                                   rebind_contexts(*w.right, context_id));
    case Wff::Kind::disjunction:
        return Wff::disjunction_of(rebind_contexts(*w.left, context_id),
                                   rebind_contexts(*w.right, context_id));
    case Wff::Kind::implication:
        return Wff::implication_of(rebind_contexts(*w.left, context_id),
                                   rebind_contexts(*w.right, context_id));
    }
    throw std::logic_error("unreachable");
}

} // namespace qlb
