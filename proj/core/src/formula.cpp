#include "teamdim/formula.hpp"

#include <algorithm>
#include <cstddef>
#include <sstream>
#include <utility>

#include "teamdim/error.hpp"

namespace teamdim {

namespace {

Formula make(Node n) { return std::make_shared<const Node>(std::move(n)); }

void require(bool ok, const std::string& msg) {
    if (!ok) throw DomainError(msg);
}

void require_pl_block(const std::vector<Formula>& fs, const char* where) {
    for (const auto& f : fs) {
        require(f != nullptr, std::string(where) + ": null argument");
        require(is_pl(f), std::string(where) + ": arguments must be propositional");
    }
}

} // namespace

Formula top() {
    static const Formula t = make(Node{NodeKind::True});
    return t;
}

Formula bot() {
    static const Formula b = make(Node{NodeKind::False});
    return b;
}

Formula lit(std::string name, bool positive) {
    require(!name.empty(), "literal: empty variable name");
    Node n{NodeKind::Literal};
    n.var = std::move(name);
    n.positive = positive;
    return make(std::move(n));
}

namespace {

Formula binary(NodeKind k, Formula a, Formula b, const char* where) {
    require(a != nullptr && b != nullptr, std::string(where) + ": null operand");
    Node n{k};
    n.left = std::move(a);
    n.right = std::move(b);
    return make(std::move(n));
}

Formula quantifier(NodeKind k, std::string var, Formula body, const char* where) {
    require(!var.empty(), std::string(where) + ": empty variable name");
    require(body != nullptr, std::string(where) + ": null body");
    Node n{k};
    n.var = std::move(var);
    n.left = std::move(body);
    return make(std::move(n));
}

Formula unary(NodeKind k, Formula f, const char* where) {
    require(f != nullptr, std::string(where) + ": null body");
    Node n{k};
    n.left = std::move(f);
    return make(std::move(n));
}

} // namespace

Formula conj(Formula a, Formula b) { return binary(NodeKind::And, std::move(a), std::move(b), "conj"); }
Formula disj(Formula a, Formula b) { return binary(NodeKind::Or, std::move(a), std::move(b), "disj"); }
Formula global_or(Formula a, Formula b) {
    return binary(NodeKind::GlobalOr, std::move(a), std::move(b), "global_or");
}
Formula exists(std::string var, Formula body) {
    return quantifier(NodeKind::Exists, std::move(var), std::move(body), "exists");
}
Formula forall(std::string var, Formula body) {
    return quantifier(NodeKind::Forall, std::move(var), std::move(body), "forall");
}

Formula dep_atom(std::vector<Formula> ps, Formula q) {
    require_pl_block(ps, "dep");
    require(q != nullptr && is_pl(q), "dep: target must be propositional");
    Node n{NodeKind::Dep};
    n.block1 = std::move(ps);
    n.block2 = {std::move(q)};
    return make(std::move(n));
}

Formula anon_atom(std::vector<Formula> ps, Formula q) {
    require_pl_block(ps, "anon");
    require(q != nullptr && is_pl(q), "anon: target must be propositional");
    Node n{NodeKind::Anon};
    n.block1 = std::move(ps);
    n.block2 = {std::move(q)};
    return make(std::move(n));
}

Formula inc_atom(std::vector<Formula> ps, std::vector<Formula> qs) {
    require(ps.size() == qs.size(), "incl: sides must have equal length");
    require_pl_block(ps, "incl");
    require_pl_block(qs, "incl");
    Node n{NodeKind::Inc};
    n.block1 = std::move(ps);
    n.block2 = std::move(qs);
    return make(std::move(n));
}

Formula exc_atom(std::vector<Formula> ps, std::vector<Formula> qs) {
    require(ps.size() == qs.size(), "excl: sides must have equal length");
    require_pl_block(ps, "excl");
    require_pl_block(qs, "excl");
    Node n{NodeKind::Exc};
    n.block1 = std::move(ps);
    n.block2 = std::move(qs);
    return make(std::move(n));
}

Formula indep_atom(std::vector<Formula> cond, std::vector<Formula> ps, std::vector<Formula> qs) {
    require(!ps.empty() && !qs.empty(), "indep: the two independent blocks must be nonempty");
    require_pl_block(cond, "indep");
    require_pl_block(ps, "indep");
    require_pl_block(qs, "indep");
    Node n{NodeKind::Indep};
    n.block1 = std::move(cond);
    n.block2 = std::move(ps);
    n.block3 = std::move(qs);
    return make(std::move(n));
}

namespace {

Formula rel_atom(NodeKind k, std::vector<Formula> ps, Formula alpha, std::vector<Formula> qs,
                 Formula beta, const char* where) {
    require(ps.size() == qs.size(), std::string(where) + ": sides must have equal length");
    require_pl_block(ps, where);
    require_pl_block(qs, where);
    require(alpha != nullptr && is_pl(alpha), std::string(where) + ": guard must be propositional");
    require(beta != nullptr && is_pl(beta), std::string(where) + ": guard must be propositional");
    Node n{k};
    n.block1 = std::move(ps);
    n.block2 = std::move(qs);
    n.alpha = std::move(alpha);
    n.beta = std::move(beta);
    return make(std::move(n));
}

} // namespace

Formula rel_inc_atom(std::vector<Formula> ps, Formula alpha, std::vector<Formula> qs,
                     Formula beta) {
    return rel_atom(NodeKind::RelInc, std::move(ps), std::move(alpha), std::move(qs),
                    std::move(beta), "rincl");
}

Formula rel_exc_atom(std::vector<Formula> ps, Formula alpha, std::vector<Formula> qs,
                     Formula beta) {
    return rel_atom(NodeKind::RelExc, std::move(ps), std::move(alpha), std::move(qs),
                    std::move(beta), "rexcl");
}

Formula prim_inc_atom(std::vector<char> bits, std::vector<Formula> ps) {
    require(bits.size() == ps.size(), "pincl: one bit per argument");
    for (char b : bits) require(b == 0 || b == 1, "pincl: bits must be 0 or 1");
    require_pl_block(ps, "pincl");
    Node n{NodeKind::PrimInc};
    n.bits = std::move(bits);
    n.block1 = std::move(ps);
    return make(std::move(n));
}

Formula nonconst_atom(std::vector<Formula> ps) {
    require(!ps.empty(), "nonconst: at least one argument");
    require_pl_block(ps, "nonconst");
    Node n{NodeKind::NonConst};
    n.block1 = std::move(ps);
    return make(std::move(n));
}

Formula ne_atom() {
    static const Formula n = make(Node{NodeKind::NE});
    return n;
}

Formula might(Formula f) { return unary(NodeKind::Might, std::move(f), "might"); }
Formula smight(Formula f) { return unary(NodeKind::SMight, std::move(f), "smight"); }
Formula emight(Formula f) { return unary(NodeKind::EMight, std::move(f), "emight"); }

Formula conj_all(const std::vector<Formula>& fs) {
    if (fs.empty()) return top();
    Formula acc = fs[0];
    for (std::size_t i = 1; i < fs.size(); ++i) acc = conj(acc, fs[i]);
    return acc;
}

Formula disj_all(const std::vector<Formula>& fs) {
    if (fs.empty()) return bot();
    Formula acc = fs[0];
    for (std::size_t i = 1; i < fs.size(); ++i) acc = disj(acc, fs[i]);
    return acc;
}

bool is_pl(const Formula& f) {
    if (!f) return false;
    switch (f->kind) {
    case NodeKind::True:
    case NodeKind::False:
    case NodeKind::Literal:
        return true;
    case NodeKind::And:
    case NodeKind::Or:
        return is_pl(f->left) && is_pl(f->right);
    default:
        return false;
    }
}

Formula negate(const Formula& f) {
    require(f != nullptr, "negate: null formula");
    switch (f->kind) {
    case NodeKind::True:
        return bot();
    case NodeKind::False:
        return top();
    case NodeKind::Literal:
        return lit(f->var, !f->positive);
    case NodeKind::And:
        return disj(negate(f->left), negate(f->right));
    case NodeKind::Or:
        return conj(negate(f->left), negate(f->right));
    default:
        throw DomainError("negate: defined for propositional formulas only");
    }
}

namespace {

bool equal_blocks(const std::vector<Formula>& a, const std::vector<Formula>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!equal_formulas(a[i], b[i])) return false;
    return true;
}

} // namespace

bool equal_formulas(const Formula& a, const Formula& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind) return false;
    if (a->var != b->var || a->positive != b->positive) return false;
    if (a->bits != b->bits) return false;
    if ((a->left == nullptr) != (b->left == nullptr)) return false;
    if (a->left && !equal_formulas(a->left, b->left)) return false;
    if ((a->right == nullptr) != (b->right == nullptr)) return false;
    if (a->right && !equal_formulas(a->right, b->right)) return false;
    if ((a->alpha == nullptr) != (b->alpha == nullptr)) return false;
    if (a->alpha && !equal_formulas(a->alpha, b->alpha)) return false;
    if ((a->beta == nullptr) != (b->beta == nullptr)) return false;
    if (a->beta && !equal_formulas(a->beta, b->beta)) return false;
    return equal_blocks(a->block1, b->block1) && equal_blocks(a->block2, b->block2) &&
           equal_blocks(a->block3, b->block3);
}

namespace {

void collect_free(const Formula& f, std::set<std::string>& out,
                  std::set<std::string>& bound) {
    if (!f) return;
    switch (f->kind) {
    case NodeKind::Literal:
        if (!bound.count(f->var)) out.insert(f->var);
        return;
    case NodeKind::Exists:
    case NodeKind::Forall: {
        const bool was_bound = bound.count(f->var) > 0;
        bound.insert(f->var);
        collect_free(f->left, out, bound);
        if (!was_bound) bound.erase(f->var);
        return;
    }
    default:
        break;
    }
    if (f->left) collect_free(f->left, out, bound);
    if (f->right) collect_free(f->right, out, bound);
    if (f->alpha) collect_free(f->alpha, out, bound);
    if (f->beta) collect_free(f->beta, out, bound);
    for (const auto* blk : {&f->block1, &f->block2, &f->block3})
        for (const auto& g : *blk) collect_free(g, out, bound);
}

} // namespace

std::set<std::string> free_vars(const Formula& f) {
    std::set<std::string> out;
    std::set<std::string> bound;
    collect_free(f, out, bound);
    return out;
}

// ---------------------------------------------------------------------------
// lexing

namespace {

enum class Tok {
    Ident,
    Bits, // digit run, only meaningful inside pincl
    LParen,
    RParen,
    Comma,
    Semi,
    Dot,
    AndOp,
    OrOp,
    GOrOp,
    NotOp,
    EqOp,
    NeqOp,
    End,
};

struct Token {
    Tok type = Tok::End;
    std::string text;
    std::size_t pos = 0;
};

const std::set<std::string>& keywords() {
    static const std::set<std::string> kw = {
        "dep",  "anon",  "incl",   "excl",     "indep", "rincl", "rexcl", "pincl",
        "nonconst", "NE", "might", "smight", "emight", "top",   "bot",   "E",
        "A",    "vv",
    };
    return kw;
}

bool is_ident_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}

bool is_ident_char(char c) {
    return is_ident_start(c) || (c >= '0' && c <= '9') || c == '\'';
}

// multi-byte aliases accepted on input; the renderer emits ASCII only
struct Alias {
    const char* utf8;
    Tok type;
    const char* text;
};

constexpr Alias kAliases[] = {
    {"∧", Tok::AndOp, "/\\"},  // AND
    {"∨", Tok::OrOp, "\\/"},   // OR
    {"¬", Tok::NotOp, "~"},    // NOT sign
    {"⊤", Tok::Ident, "top"},  // verum
    {"⊥", Tok::Ident, "bot"},  // falsum
    {"∃", Tok::Ident, "E"},    // existential
    {"∀", Tok::Ident, "A"},    // universal
    {"⩒", Tok::GOrOp, "vv"},   // big vee
    {"≠", Tok::NeqOp, "!="},   // not equal
};

std::vector<Token> lex(const std::string& s) {
    std::vector<Token> out;
    std::size_t i = 0;
    const std::size_t n = s.size();
    while (i < n) {
        const char c = s[i];
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
            ++i;
            continue;
        }
        const std::size_t start = i;
        if (c == '/' && i + 1 < n && s[i + 1] == '\\') {
            out.push_back({Tok::AndOp, "/\\", start});
            i += 2;
            continue;
        }
        if (c == '\\' && i + 1 < n && s[i + 1] == '/') {
            out.push_back({Tok::OrOp, "\\/", start});
            i += 2;
            continue;
        }
        if (c == '!' && i + 1 < n && s[i + 1] == '=') {
            out.push_back({Tok::NeqOp, "!=", start});
            i += 2;
            continue;
        }
        switch (c) {
        case '(': out.push_back({Tok::LParen, "(", start}); ++i; continue;
        case ')': out.push_back({Tok::RParen, ")", start}); ++i; continue;
        case ',': out.push_back({Tok::Comma, ",", start}); ++i; continue;
        case ';': out.push_back({Tok::Semi, ";", start}); ++i; continue;
        case '.': out.push_back({Tok::Dot, ".", start}); ++i; continue;
        case '~': out.push_back({Tok::NotOp, "~", start}); ++i; continue;
        case '=': out.push_back({Tok::EqOp, "=", start}); ++i; continue;
        default: break;
        }
        if (is_ident_start(c)) {
            std::size_t j = i + 1;
            while (j < n && is_ident_char(s[j])) ++j;
            std::string word = s.substr(i, j - i);
            if (word == "vv")
                out.push_back({Tok::GOrOp, std::move(word), start});
            else
                out.push_back({Tok::Ident, std::move(word), start});
            i = j;
            continue;
        }
        if (c >= '0' && c <= '9') {
            std::size_t j = i + 1;
            while (j < n && s[j] >= '0' && s[j] <= '9') ++j;
            out.push_back({Tok::Bits, s.substr(i, j - i), start});
            i = j;
            continue;
        }
        bool aliased = false;
        for (const Alias& a : kAliases) {
            const std::size_t len = std::char_traits<char>::length(a.utf8);
            if (s.compare(i, len, a.utf8) == 0) {
                out.push_back({a.type, a.text, start});
                i += len;
                aliased = true;
                break;
            }
        }
        if (aliased) continue;
        throw ParseError("unexpected character", start);
    }
    out.push_back({Tok::End, "", n});
    return out;
}

// ---------------------------------------------------------------------------
// parsing
//
// precedence: /\ binds tighter than \/ which binds tighter than vv; E p. and
// A p. swallow everything to their right. Atom arguments are juxtaposed, so
// inside an atom `p q` is two arguments while `p /\ q` is one.

class FormulaParser {
public:
    explicit FormulaParser(const std::string& text) : toks_(lex(text)) {}

    Formula run() {
        Formula f = parse_formula();
        if (!at(Tok::End)) throw ParseError("trailing input", peek().pos);
        return f;
    }

private:
    std::vector<Token> toks_;
    std::size_t i_ = 0;

    const Token& peek() const { return toks_[i_]; }
    const Token& next() { return toks_[i_++]; }
    bool at(Tok t) const { return peek().type == t; }

    bool at_keyword(const char* kw) const {
        return peek().type == Tok::Ident && peek().text == kw;
    }

    void expect(Tok t, const char* what) {
        if (!at(t)) throw ParseError(std::string("expected ") + what, peek().pos);
        ++i_;
    }

    std::string expect_var() {
        if (!at(Tok::Ident) || keywords().count(peek().text))
            throw ParseError("expected a variable name", peek().pos);
        return next().text;
    }

    bool at_term_start() const {
        switch (peek().type) {
        case Tok::NotOp:
        case Tok::LParen:
            return true;
        case Tok::Ident:
            return !keywords().count(peek().text) || peek().text == "top" ||
                   peek().text == "bot";
        default:
            return false;
        }
    }

    Formula parse_formula() { return parse_gor(); }

    Formula parse_gor() {
        Formula f = parse_or();
        while (at(Tok::GOrOp)) {
            next();
            f = global_or(std::move(f), parse_or());
        }
        return f;
    }

    Formula parse_or() {
        Formula f = parse_and();
        while (at(Tok::OrOp)) {
            next();
            f = disj(std::move(f), parse_and());
        }
        return f;
    }

    Formula parse_and() {
        Formula f = parse_unit();
        while (at(Tok::AndOp)) {
            next();
            f = conj(std::move(f), parse_unit());
        }
        return f;
    }

    Formula parse_unit() {
        if (at(Tok::Ident)) {
            const std::string& w = peek().text;
            if (w == "E" || w == "A") return parse_quantifier();
            if (w == "NE") {
                next();
                return ne_atom();
            }
            if (w == "might" || w == "smight" || w == "emight") return parse_might();
            if (w == "dep" || w == "anon") return parse_dep_like();
            if (w == "incl" || w == "excl") return parse_inc_like();
            if (w == "indep") return parse_indep();
            if (w == "rincl" || w == "rexcl") return parse_rel();
            if (w == "pincl") return parse_prim_inc();
            if (w == "nonconst") return parse_nonconst();
        }
        return parse_term_tuple();
    }

    Formula parse_quantifier() {
        const bool ex = next().text == "E";
        const std::size_t pos = peek().pos;
        std::string v = expect_var();
        expect(Tok::Dot, "'.' after the quantified variable");
        Formula body = parse_formula(); // maximal scope to the right
        (void)pos;
        return ex ? exists(std::move(v), std::move(body))
                  : forall(std::move(v), std::move(body));
    }

    Formula parse_might() {
        const std::string w = next().text;
        expect(Tok::LParen, "'('");
        Formula body = parse_formula();
        expect(Tok::RParen, "')'");
        if (w == "might") return might(std::move(body));
        if (w == "smight") return smight(std::move(body));
        return emight(std::move(body));
    }

    // argument formula: terms combined with /\ and \/; a fresh term starts the
    // next argument instead
    Formula parse_arg() {
        Formula f = parse_arg_and();
        while (at(Tok::OrOp)) {
            next();
            f = disj(std::move(f), parse_arg_and());
        }
        return f;
    }

    Formula parse_arg_and() {
        Formula f = parse_term();
        while (at(Tok::AndOp)) {
            next();
            f = conj(std::move(f), parse_term());
        }
        return f;
    }

    std::vector<Formula> parse_arg_list() {
        std::vector<Formula> out;
        while (at_term_start()) out.push_back(parse_arg());
        return out;
    }

    template <typename Build>
    Formula build_atom(std::size_t pos, Build&& build) {
        try {
            return build();
        } catch (const DomainError& e) {
            throw ParseError(e.what(), pos);
        }
    }

    Formula parse_dep_like() {
        const std::size_t pos = peek().pos;
        const bool is_dep = next().text == "dep";
        expect(Tok::LParen, "'('");
        std::vector<Formula> ps = parse_arg_list();
        expect(Tok::Semi, "';'");
        Formula q = parse_arg();
        expect(Tok::RParen, "')'");
        return build_atom(pos, [&] {
            return is_dep ? dep_atom(std::move(ps), std::move(q))
                          : anon_atom(std::move(ps), std::move(q));
        });
    }

    Formula parse_inc_like() {
        const std::size_t pos = peek().pos;
        const bool is_inc = next().text == "incl";
        expect(Tok::LParen, "'('");
        std::vector<Formula> ps = parse_arg_list();
        expect(Tok::Comma, "','");
        std::vector<Formula> qs = parse_arg_list();
        expect(Tok::RParen, "')'");
        return build_atom(pos, [&] {
            return is_inc ? inc_atom(std::move(ps), std::move(qs))
                          : exc_atom(std::move(ps), std::move(qs));
        });
    }

    Formula parse_indep() {
        const std::size_t pos = peek().pos;
        next();
        expect(Tok::LParen, "'('");
        std::vector<Formula> cond = parse_arg_list();
        expect(Tok::Semi, "';'");
        std::vector<Formula> ps = parse_arg_list();
        expect(Tok::Semi, "';'");
        std::vector<Formula> qs = parse_arg_list();
        expect(Tok::RParen, "')'");
        return build_atom(pos, [&] {
            return indep_atom(std::move(cond), std::move(ps), std::move(qs));
        });
    }

    Formula parse_rel() {
        const std::size_t pos = peek().pos;
        const bool is_inc = next().text == "rincl";
        expect(Tok::LParen, "'('");
        expect(Tok::LParen, "'('");
        std::vector<Formula> ps = parse_arg_list();
        expect(Tok::Semi, "';'");
        Formula alpha = parse_formula();
        expect(Tok::RParen, "')'");
        expect(Tok::Comma, "','");
        expect(Tok::LParen, "'('");
        std::vector<Formula> qs = parse_arg_list();
        expect(Tok::Semi, "';'");
        Formula beta = parse_formula();
        expect(Tok::RParen, "')'");
        expect(Tok::RParen, "')'");
        return build_atom(pos, [&] {
            return is_inc ? rel_inc_atom(std::move(ps), std::move(alpha), std::move(qs),
                                         std::move(beta))
                          : rel_exc_atom(std::move(ps), std::move(alpha), std::move(qs),
                                         std::move(beta));
        });
    }

    Formula parse_prim_inc() {
        const std::size_t pos = peek().pos;
        next();
        expect(Tok::LParen, "'('");
        std::vector<char> bits;
        while (at(Tok::Bits)) {
            for (char c : next().text) {
                if (c != '0' && c != '1')
                    throw ParseError("pincl bits must be 0 or 1", pos);
                bits.push_back(static_cast<char>(c - '0'));
            }
        }
        expect(Tok::Comma, "','");
        std::vector<Formula> ps = parse_arg_list();
        expect(Tok::RParen, "')'");
        return build_atom(pos,
                          [&] { return prim_inc_atom(std::move(bits), std::move(ps)); });
    }

    Formula parse_nonconst() {
        const std::size_t pos = peek().pos;
        next();
        expect(Tok::LParen, "'('");
        std::vector<Formula> ps = parse_arg_list();
        expect(Tok::RParen, "')'");
        return build_atom(pos, [&] { return nonconst_atom(std::move(ps)); });
    }

    Formula parse_term() {
        if (at(Tok::NotOp)) {
            const std::size_t pos = next().pos;
            Formula t = parse_term();
            if (!is_pl(t)) throw ParseError("negation applies to propositional formulas only", pos);
            return negate(t);
        }
        if (at(Tok::LParen)) {
            next();
            Formula f = parse_formula();
            expect(Tok::RParen, "')'");
            return f;
        }
        if (at(Tok::Ident)) {
            const std::string& w = peek().text;
            if (w == "top") {
                next();
                return top();
            }
            if (w == "bot") {
                next();
                return bot();
            }
            if (!keywords().count(w)) return lit(next().text);
        }
        throw ParseError("expected a term", peek().pos);
    }

    // `t1 .. tn = s1 .. sn` expands to the componentwise biconditional; a lone
    // term is just itself
    Formula parse_term_tuple() {
        const std::size_t pos = peek().pos;
        std::vector<Formula> lhs;
        if (!at_term_start()) throw ParseError("expected a formula", pos);
        while (at_term_start()) lhs.push_back(parse_term());
        if (!at(Tok::EqOp) && !at(Tok::NeqOp)) {
            if (lhs.size() != 1)
                throw ParseError("adjacent terms need '=' or '!=' between the tuples", pos);
            return lhs[0];
        }
        const bool eq = next().type == Tok::EqOp;
        std::vector<Formula> rhs;
        while (at_term_start()) rhs.push_back(parse_term());
        if (rhs.empty()) throw ParseError("expected a term tuple on the right", peek().pos);
        if (lhs.size() != rhs.size())
            throw ParseError("tuple lengths differ around '='", pos);
        for (const auto& side : {&lhs, &rhs})
            for (const auto& t : *side)
                if (!is_pl(t))
                    throw ParseError("'=' and '!=' apply to propositional terms only", pos);
        std::vector<Formula> parts;
        parts.reserve(lhs.size());
        for (std::size_t k = 0; k < lhs.size(); ++k) {
            if (eq)
                parts.push_back(disj(conj(lhs[k], rhs[k]),
                                     conj(negate(lhs[k]), negate(rhs[k]))));
            else
                parts.push_back(disj(conj(lhs[k], negate(rhs[k])),
                                     conj(negate(lhs[k]), rhs[k])));
        }
        return eq ? conj_all(parts) : disj_all(parts);
    }
};

} // namespace

Formula parse_formula(const std::string& text) { return FormulaParser(text).run(); }

// ---------------------------------------------------------------------------
// rendering

namespace {

bool parens_as_operand(const Formula& f) {
    switch (f->kind) {
    case NodeKind::And:
    case NodeKind::Or:
    case NodeKind::GlobalOr:
    case NodeKind::Exists:
    case NodeKind::Forall:
        return true;
    default:
        return false;
    }
}

bool is_binary(const Formula& f) {
    return f->kind == NodeKind::And || f->kind == NodeKind::Or ||
           f->kind == NodeKind::GlobalOr;
}

std::string render(const Formula& f);

std::string render_operand(const Formula& f) {
    if (parens_as_operand(f)) return "(" + render(f) + ")";
    return render(f);
}

std::string render_arg(const Formula& f) {
    switch (f->kind) {
    case NodeKind::Literal:
    case NodeKind::True:
    case NodeKind::False:
        return render(f);
    default:
        return "(" + render(f) + ")";
    }
}

std::string render_block(const std::vector<Formula>& blk) {
    std::string out;
    for (std::size_t i = 0; i < blk.size(); ++i) {
        if (i) out += ' ';
        out += render_arg(blk[i]);
    }
    return out;
}

// "lhs, rhs" with the separator glued to lhs so empty blocks stay tidy
std::string join_sep(const std::string& lhs, char sep, const std::string& rhs) {
    std::string out = lhs;
    out += sep;
    if (!rhs.empty()) {
        out += ' ';
        out += rhs;
    }
    return out;
}

std::string render(const Formula& f) {
    switch (f->kind) {
    case NodeKind::True:
        return "top";
    case NodeKind::False:
        return "bot";
    case NodeKind::Literal:
        return f->positive ? f->var : "~" + f->var;
    case NodeKind::And:
        return render_operand(f->left) + " /\\ " + render_operand(f->right);
    case NodeKind::Or:
        return render_operand(f->left) + " \\/ " + render_operand(f->right);
    case NodeKind::GlobalOr:
        return render_operand(f->left) + " vv " + render_operand(f->right);
    case NodeKind::Exists:
    case NodeKind::Forall: {
        std::string head = (f->kind == NodeKind::Exists ? "E " : "A ") + f->var + ".";
        if (is_binary(f->left)) return head + "(" + render(f->left) + ")";
        return head + " " + render(f->left);
    }
    case NodeKind::Dep:
        return "dep(" + join_sep(render_block(f->block1), ';', render_block(f->block2)) + ")";
    case NodeKind::Anon:
        return "anon(" + join_sep(render_block(f->block1), ';', render_block(f->block2)) + ")";
    case NodeKind::Inc:
        return "incl(" + join_sep(render_block(f->block1), ',', render_block(f->block2)) + ")";
    case NodeKind::Exc:
        return "excl(" + join_sep(render_block(f->block1), ',', render_block(f->block2)) + ")";
    case NodeKind::Indep:
        return "indep(" +
               join_sep(render_block(f->block1), ';',
                        join_sep(render_block(f->block2), ';', render_block(f->block3))) +
               ")";
    case NodeKind::RelInc:
    case NodeKind::RelExc: {
        const char* kw = f->kind == NodeKind::RelInc ? "rincl" : "rexcl";
        return std::string(kw) + "((" + join_sep(render_block(f->block1), ';', render(f->alpha)) +
               "), (" + join_sep(render_block(f->block2), ';', render(f->beta)) + "))";
    }
    case NodeKind::PrimInc: {
        std::string bits;
        for (std::size_t i = 0; i < f->bits.size(); ++i) {
            if (i) bits += ' ';
            bits += static_cast<char>('0' + f->bits[i]);
        }
        return "pincl(" + join_sep(bits, ',', render_block(f->block1)) + ")";
    }
    case NodeKind::NonConst:
        return "nonconst(" + render_block(f->block1) + ")";
    case NodeKind::NE:
        return "NE";
    case NodeKind::Might:
        return "might(" + render(f->left) + ")";
    case NodeKind::SMight:
        return "smight(" + render(f->left) + ")";
    case NodeKind::EMight:
        return "emight(" + render(f->left) + ")";
    }
    throw DomainError("render: unknown node kind");
}

} // namespace

std::string render_formula(const Formula& f) {
    require(f != nullptr, "render: null formula");
    return render(f);
}

// ---------------------------------------------------------------------------
// fragment bookkeeping

std::string to_string(AtomTag t) {
    switch (t) {
    case AtomTag::dep: return "dep";
    case AtomTag::anon: return "anon";
    case AtomTag::inc: return "incl";
    case AtomTag::exc: return "excl";
    case AtomTag::indep: return "indep";
    case AtomTag::rel_inc: return "rincl";
    case AtomTag::rel_exc: return "rexcl";
    case AtomTag::prim_inc: return "pincl";
    case AtomTag::nonconst: return "nonconst";
    case AtomTag::ne: return "NE";
    case AtomTag::might: return "might";
    case AtomTag::smight: return "smight";
    case AtomTag::emight: return "emight";
    }
    return "?";
}

int FragmentProfile::count(AtomTag t) const {
    auto it = occurrences.find(t);
    return it == occurrences.end() ? 0 : it->second;
}

int FragmentProfile::arity(AtomTag t) const {
    auto it = max_arity.find(t);
    return it == max_arity.end() ? 0 : it->second;
}

bool FragmentProfile::member_of(AtomTag kind, int k, int n) const {
    for (const auto& [tag, cnt] : occurrences)
        if (tag != kind && cnt > 0) return false;
    if (count(kind) > n) return false;
    if (kind == AtomTag::indep)
        return std::max({indep_arity[0], indep_arity[1], indep_arity[2]}) <= k;
    return arity(kind) <= k;
}

namespace {

bool plain_block(const std::vector<Formula>& blk) {
    for (const auto& f : blk)
        if (f->kind != NodeKind::Literal || !f->positive) return false;
    return true;
}

void scan(const Formula& f, FragmentProfile& p) {
    auto atom = [&](AtomTag t, int arity, bool plain) {
        p.occurrences[t] += 1;
        auto& m = p.max_arity[t];
        m = std::max(m, arity);
        if (!plain) p.has_extended_args = true;
    };
    switch (f->kind) {
    case NodeKind::True:
    case NodeKind::False:
    case NodeKind::Literal:
        return;
    case NodeKind::And:
    case NodeKind::Or:
    case NodeKind::GlobalOr:
        scan(f->left, p);
        scan(f->right, p);
        return;
    case NodeKind::Exists:
    case NodeKind::Forall:
        p.quantifier_free = false;
        scan(f->left, p);
        return;
    case NodeKind::Dep:
        atom(AtomTag::dep, static_cast<int>(f->block1.size()),
             plain_block(f->block1) && plain_block(f->block2));
        return;
    case NodeKind::Anon:
        atom(AtomTag::anon, static_cast<int>(f->block1.size()),
             plain_block(f->block1) && plain_block(f->block2));
        return;
    case NodeKind::Inc:
        atom(AtomTag::inc, static_cast<int>(f->block1.size()),
             plain_block(f->block1) && plain_block(f->block2));
        return;
    case NodeKind::Exc:
        atom(AtomTag::exc, static_cast<int>(f->block1.size()),
             plain_block(f->block1) && plain_block(f->block2));
        return;
    case NodeKind::Indep: {
        atom(AtomTag::indep, static_cast<int>(f->block1.size()),
             plain_block(f->block1) && plain_block(f->block2) && plain_block(f->block3));
        p.indep_arity[0] = std::max(p.indep_arity[0], static_cast<int>(f->block1.size()));
        p.indep_arity[1] = std::max(p.indep_arity[1], static_cast<int>(f->block2.size()));
        p.indep_arity[2] = std::max(p.indep_arity[2], static_cast<int>(f->block3.size()));
        return;
    }
    case NodeKind::RelInc:
    case NodeKind::RelExc:
        atom(f->kind == NodeKind::RelInc ? AtomTag::rel_inc : AtomTag::rel_exc,
             static_cast<int>(f->block1.size()),
             plain_block(f->block1) && plain_block(f->block2));
        return;
    case NodeKind::PrimInc:
        atom(AtomTag::prim_inc, static_cast<int>(f->bits.size()), plain_block(f->block1));
        return;
    case NodeKind::NonConst:
        atom(AtomTag::nonconst, static_cast<int>(f->block1.size()), plain_block(f->block1));
        return;
    case NodeKind::NE:
        atom(AtomTag::ne, 0, true);
        return;
    case NodeKind::Might:
        atom(AtomTag::might, 0, true);
        scan(f->left, p);
        return;
    case NodeKind::SMight:
        atom(AtomTag::smight, 0, true);
        scan(f->left, p);
        return;
    case NodeKind::EMight:
        atom(AtomTag::emight, 0, true);
        scan(f->left, p);
        return;
    }
}

} // namespace

FragmentProfile fragment_profile(const Formula& f) {
    require(f != nullptr, "fragment_profile: null formula");
    FragmentProfile p;
    scan(f, p);
    return p;
}

} // namespace teamdim
