#include "teamdim/semantics.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "teamdim/error.hpp"

namespace teamdim {

namespace {

using Names = std::vector<std::string>;

// rightmost match, so a rebound variable shadows the outer slot
std::size_t rindex(const Names& scope, const std::string& name) {
    for (std::size_t i = scope.size(); i-- > 0;)
        if (scope[i] == name) return i;
    return Scope::npos;
}

std::vector<unsigned> positions(const Names& scope, const Names& names) {
    std::vector<unsigned> pos;
    pos.reserve(names.size());
    for (const auto& n : names) {
        std::size_t i = rindex(scope, n);
        if (i == Scope::npos) throw DomainError("variable " + n + " is not in scope");
        pos.push_back(static_cast<unsigned>(i));
    }
    return pos;
}

std::uint32_t gather(std::size_t e, const std::vector<unsigned>& pos) {
    std::uint32_t out = 0;
    for (std::size_t j = 0; j < pos.size(); ++j)
        out |= static_cast<std::uint32_t>((e >> pos[j]) & 1u) << j;
    return out;
}

bool eval_pl(const Formula& f, const Names& scope, std::size_t e) {
    switch (f->kind) {
    case NodeKind::True:
        return true;
    case NodeKind::False:
        return false;
    case NodeKind::Literal: {
        std::size_t i = rindex(scope, f->var);
        if (i == Scope::npos) throw DomainError("variable " + f->var + " is not in scope");
        return (((e >> i) & 1u) != 0) == f->positive;
    }
    case NodeKind::And:
        return eval_pl(f->left, scope, e) && eval_pl(f->right, scope, e);
    case NodeKind::Or:
        return eval_pl(f->left, scope, e) || eval_pl(f->right, scope, e);
    default:
        throw DomainError("not a propositional formula");
    }
}

std::string eval_label(std::uint32_t e, std::size_t n) {
    std::string s(n, '0');
    for (std::size_t j = 0; j < n; ++j)
        if ((e >> j) & 1u) s[j] = '1';
    return s;
}

struct NodeInfo {
    Names fv;             // sorted, unique
    bool pl = false;      // propositional, hence flat
    std::size_t qdepth = 0;

    std::size_t table_width() const { return fv.size() + qdepth; }
};

Names merge_names(const Names& a, const Names& b) {
    Names out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

std::string scope_signature(const Names& scope) {
    std::string sig;
    for (const auto& n : scope) {
        sig += n;
        sig += '\x1f';
    }
    return sig;
}

// ---------------------------------------------------------------------------
// evaluation engine
//
// Two modes. The table engine computes every satisfying team over a small
// scope at once (width = scope plus quantifier depth, capped); the per-team
// recursion handles wider formulas, delegating any subtree that fits a table
// back to the table engine, and dissolving existential blocks into a witness
// search over the block variables.

// Full tables amortize over the 2^(2^n) queries of a sweep; a single
// satisfaction query is answered through the per-team paths instead, touching
// tables only where they are tiny or where enumeration would blow the caps.
class Engine {
public:
    Engine(const EvalOptions& opt, bool sweep) : opt_(opt), sweep_(sweep) {}

    const NodeInfo& info(const Formula& f) {
        auto it = infos_.find(f.get());
        if (it != infos_.end()) return it->second;
        NodeInfo ni;
        switch (f->kind) {
        case NodeKind::True:
        case NodeKind::False:
            ni.pl = true;
            break;
        case NodeKind::Literal:
            ni.pl = true;
            ni.fv = {f->var};
            break;
        case NodeKind::And:
        case NodeKind::Or:
        case NodeKind::GlobalOr: {
            const NodeInfo& l = info(f->left);
            const NodeInfo& r = info(f->right);
            ni.pl = f->kind != NodeKind::GlobalOr && l.pl && r.pl;
            ni.fv = merge_names(l.fv, r.fv);
            ni.qdepth = std::max(l.qdepth, r.qdepth);
            break;
        }
        case NodeKind::Exists:
        case NodeKind::Forall: {
            const NodeInfo& b = info(f->left);
            ni.fv = b.fv;
            ni.fv.erase(std::remove(ni.fv.begin(), ni.fv.end(), f->var), ni.fv.end());
            ni.qdepth = b.qdepth + 1;
            break;
        }
        case NodeKind::Might:
        case NodeKind::SMight:
        case NodeKind::EMight: {
            const NodeInfo& b = info(f->left);
            ni.fv = b.fv;
            ni.qdepth = b.qdepth;
            break;
        }
        default: { // atoms and NE
            auto s = free_vars(f);
            ni.fv.assign(s.begin(), s.end());
            break;
        }
        }
        return infos_.emplace(f.get(), std::move(ni)).first->second;
    }

    // full satisfaction table over the given scope; cached
    const Bitset& table(const Formula& f, const Names& scope) {
        auto key = std::make_pair(f.get(), scope_signature(scope));
        auto it = tables_.find(key);
        if (it != tables_.end()) return it->second;
        Bitset t = build_table(f, scope);
        return tables_.emplace(std::move(key), std::move(t)).first->second;
    }

    bool sat(const Formula& f, Names& scope, const Bitset& team) {
        const NodeInfo& ni = info(f);
        if (ni.pl) {
            bool ok = true;
            team.for_each([&](std::size_t e) { ok = ok && eval_pl(f, scope, e); });
            return ok;
        }
        const bool fits = !opt_.force_per_team && ni.table_width() <= opt_.max_table_vars;
        if (fits && (sweep_ || ni.table_width() <= 2))
            return table_lookup(f, ni, scope, team);
        switch (f->kind) {
        case NodeKind::And:
            return sat(f->left, scope, team) && sat(f->right, scope, team);
        case NodeKind::GlobalOr:
            return sat(f->left, scope, team) || sat(f->right, scope, team);
        case NodeKind::Or:
            if (team.count() > opt_.max_split_team && fits)
                return table_lookup(f, ni, scope, team);
            return split_or(f, scope, team);
        case NodeKind::Exists:
            try {
                return exists_block(f, scope, team);
            } catch (const CapError&) {
                if (fits) return table_lookup(f, ni, scope, team);
                throw;
            }
        case NodeKind::Forall: {
            if (scope.size() + 1 > opt_.max_total_vars) {
                if (fits) return table_lookup(f, ni, scope, team);
                throw CapError("quantifier nesting exceeds the variable budget");
            }
            scope.push_back(f->var);
            Bitset wide(team.size() * 2);
            team.for_each([&](std::size_t e) {
                wide.set(e);
                wide.set(e + team.size());
            });
            bool r = sat(f->left, scope, wide);
            scope.pop_back();
            return r;
        }
        case NodeKind::Might:
            if (team.none()) return true;
            if (team.count() > opt_.max_split_team && !info(f->left).pl && fits)
                return table_lookup(f, ni, scope, team);
            return some_nonempty_subteam(f->left, scope, team);
        case NodeKind::SMight: {
            if (team.none()) return true;
            bool found = false;
            team.for_each([&](std::size_t e) {
                if (found) return;
                Bitset single(team.size());
                single.set(e);
                found = sat(f->left, scope, single);
            });
            return found;
        }
        case NodeKind::EMight:
            if (team.none()) return false;
            if (team.count() > opt_.max_split_team && !info(f->left).pl && fits)
                return table_lookup(f, ni, scope, team);
            return some_nonempty_subteam(f->left, scope, team);
        case NodeKind::NE:
            return team.any();
        default:
            return atom_sat(f, scope, team);
        }
    }

private:
    EvalOptions opt_;
    bool sweep_;
    std::unordered_map<const Node*, NodeInfo> infos_;
    std::map<std::pair<const Node*, std::string>, Bitset> tables_;

    struct Device {
        Names zvars;   // sorted free names through the block
        Names wvars;   // zvars first, then the used block variables
        Bitset gmask;  // W-evaluations passing the flat conjuncts
        bool has_theta = false;
        Bitset theta_table;                 // satisfying teams over the theta scope
        std::vector<Bitset> classmask;      // W-evaluations per theta projection code
        std::size_t theta_codes = 0;        // 1 << |theta scope|
    };
    std::unordered_map<const Node*, Device> devices_;

    bool table_lookup(const Formula& f, const NodeInfo& ni, const Names& scope,
                      const Bitset& team) {
        const Bitset& tb = table(f, ni.fv);
        auto pos = positions(scope, ni.fv);
        std::uint32_t code = 0;
        team.for_each([&](std::size_t e) { code |= 1u << gather(e, pos); });
        return tb.test(code);
    }

    bool some_nonempty_subteam(const Formula& body, Names& scope, const Bitset& team) {
        if (info(body).pl) {
            // a flat body is witnessed by a single evaluation
            bool found = false;
            team.for_each([&](std::size_t e) {
                found = found || eval_pl(body, scope, e);
            });
            return found;
        }
        std::vector<std::size_t> elems;
        team.for_each([&](std::size_t e) { elems.push_back(e); });
        if (elems.size() > opt_.max_split_team)
            throw CapError("might over a team of " + std::to_string(elems.size()) +
                           " evaluations exceeds the split budget");
        for (std::size_t sub = 1; sub < (std::size_t{1} << elems.size()); ++sub) {
            Bitset s(team.size());
            for (std::size_t i = 0; i < elems.size(); ++i)
                if ((sub >> i) & 1u) s.set(elems[i]);
            if (sat(body, scope, s)) return true;
        }
        return false;
    }

    // elementwise three-way labeling of a lax split; fallback for wide disjunctions
    bool split_or(const Formula& f, Names& scope, const Bitset& team) {
        std::vector<std::size_t> elems;
        team.for_each([&](std::size_t e) { elems.push_back(e); });
        if (elems.size() > opt_.max_split_team)
            throw CapError("lax disjunction over a team of " +
                           std::to_string(elems.size()) +
                           " evaluations exceeds the split budget");
        std::size_t total = 1;
        for (std::size_t i = 0; i < elems.size(); ++i) total *= 3;
        for (std::size_t code = 0; code < total; ++code) {
            Bitset left(team.size()), right(team.size());
            std::size_t c = code;
            for (std::size_t e : elems) {
                switch (c % 3) {
                case 0: left.set(e); break;
                case 1: right.set(e); break;
                default: left.set(e); right.set(e); break;
                }
                c /= 3;
            }
            if (sat(f->left, scope, left) && sat(f->right, scope, right)) return true;
        }
        return false;
    }

    // T satisfies E q1...E qm. phi iff some team U over W = Z ∪ {used q} has
    // exactly P = proj_Z(T) as its Z-projection and satisfies phi. Flat
    // conjuncts of phi restrict U pointwise; the rest is decided through its
    // projection onto the non-flat conjuncts' variables, which is enumerated.
    bool exists_block(const Formula& f, Names& scope, const Bitset& team) {
        const Device& dev = device(f);
        if (dev.wvars.size() > opt_.max_total_vars)
            throw CapError("existential block exceeds the variable budget");
        const std::size_t nz = std::size_t{1} << dev.zvars.size();
        const std::size_t nw = std::size_t{1} << dev.wvars.size();
        const std::size_t zmask = nz - 1; // W orders Z-variables first

        auto zpos = positions(scope, dev.zvars);
        Bitset p(nz);
        team.for_each([&](std::size_t e) { p.set(gather(e, zpos)); });

        Bitset base(nw);
        for (std::size_t w = 0; w < nw; ++w)
            if (dev.gmask.test(w) && p.test(w & zmask)) base.set(w);
        Bitset pb(nz);
        base.for_each([&](std::size_t w) { pb.set(w & zmask); });
        if (!(pb == p)) return false;
        if (!dev.has_theta) return true;

        for (std::size_t x = 0; x < (std::size_t{1} << dev.theta_codes); ++x) {
            if (!dev.theta_table.test(x)) continue;
            Bitset h(nw);
            for (std::size_t c = 0; c < dev.theta_codes; ++c)
                if ((x >> c) & 1u) h |= dev.classmask[c];
            h &= base;
            bool exact = true;
            for (std::size_t c = 0; exact && c < dev.theta_codes; ++c)
                if (((x >> c) & 1u) && !h.intersects(dev.classmask[c])) exact = false;
            if (!exact) continue;
            Bitset ph(nz);
            h.for_each([&](std::size_t w) { ph.set(w & zmask); });
            if (ph == p) return true;
        }
        return false;
    }

    const Device& device(const Formula& f) {
        auto it = devices_.find(f.get());
        if (it != devices_.end()) return it->second;

        Names block;
        Formula body = f;
        while (body->kind == NodeKind::Exists) {
            block.push_back(body->var);
            body = body->left;
        }
        // a rebound block variable shadows the earlier one completely
        Names dedup;
        for (std::size_t i = 0; i < block.size(); ++i) {
            bool last = true;
            for (std::size_t j = i + 1; j < block.size(); ++j)
                if (block[j] == block[i]) last = false;
            if (last) dedup.push_back(block[i]);
        }

        std::vector<Formula> conjuncts;
        std::vector<Formula> stack{body};
        while (!stack.empty()) {
            Formula g = stack.back();
            stack.pop_back();
            if (g->kind == NodeKind::And) {
                stack.push_back(g->right);
                stack.push_back(g->left);
            } else {
                conjuncts.push_back(g);
            }
        }

        Device dev;
        const NodeInfo& bi = info(body);
        for (const auto& n : bi.fv)
            if (std::find(dedup.begin(), dedup.end(), n) == dedup.end())
                dev.zvars.push_back(n); // bi.fv sorted, so zvars is sorted
        dev.wvars = dev.zvars;
        for (const auto& n : dedup)
            if (std::binary_search(bi.fv.begin(), bi.fv.end(), n)) dev.wvars.push_back(n);
        if (dev.wvars.size() > opt_.max_total_vars)
            throw CapError("existential block exceeds the variable budget");

        const std::size_t nw = std::size_t{1} << dev.wvars.size();
        std::vector<Formula> thetas;
        dev.gmask = Bitset(nw);
        dev.gmask.fill();
        for (const auto& g : conjuncts) {
            if (info(g).pl) {
                for (std::size_t w = 0; w < nw; ++w)
                    if (dev.gmask.test(w) && !eval_pl(g, dev.wvars, w)) dev.gmask.reset(w);
            } else {
                thetas.push_back(g);
            }
        }

        if (!thetas.empty()) {
            dev.has_theta = true;
            Names tvars;
            for (const auto& g : thetas) tvars = merge_names(tvars, info(g).fv);
            for (const auto& g : thetas)
                if (tvars.size() + info(g).qdepth > opt_.max_table_vars)
                    throw CapError("existential block conjunct needs a table wider "
                                   "than the configured limit");
            dev.theta_codes = std::size_t{1} << tvars.size();
            Bitset tt(std::size_t{1} << dev.theta_codes);
            tt.fill();
            for (const auto& g : thetas) tt &= table(g, tvars);
            dev.theta_table = std::move(tt);
            auto tpos = positions(dev.wvars, tvars);
            dev.classmask.assign(dev.theta_codes, Bitset(nw));
            for (std::size_t w = 0; w < nw; ++w)
                dev.classmask[gather(w, tpos)].set(w);
        }
        return devices_.emplace(f.get(), std::move(dev)).first->second;
    }

    // direct atom check on the projection to the atom's own variables
    bool atom_sat(const Formula& f, const Names& scope, const Bitset& team) {
        const NodeInfo& ni = info(f);
        auto pos = positions(scope, ni.fv);
        Bitset proj(std::size_t{1} << ni.fv.size());
        team.for_each([&](std::size_t e) { proj.set(gather(e, pos)); });
        std::vector<std::uint32_t> elems;
        proj.for_each([&](std::size_t e) { elems.push_back(static_cast<std::uint32_t>(e)); });

        auto vals = [&](const std::vector<Formula>& blk, std::uint32_t e) {
            std::uint32_t v = 0;
            for (std::size_t j = 0; j < blk.size(); ++j)
                if (eval_pl(blk[j], ni.fv, e)) v |= 1u << j;
            return v;
        };

        switch (f->kind) {
        case NodeKind::Dep: {
            for (std::uint32_t a : elems)
                for (std::uint32_t b : elems)
                    if (vals(f->block1, a) == vals(f->block1, b) &&
                        vals(f->block2, a) != vals(f->block2, b))
                        return false;
            return true;
        }
        case NodeKind::Anon: {
            for (std::uint32_t a : elems) {
                bool twin = false;
                for (std::uint32_t b : elems)
                    if (vals(f->block1, a) == vals(f->block1, b) &&
                        vals(f->block2, a) != vals(f->block2, b)) {
                        twin = true;
                        break;
                    }
                if (!twin) return false;
            }
            return true;
        }
        case NodeKind::Inc: {
            for (std::uint32_t a : elems) {
                bool found = false;
                for (std::uint32_t b : elems)
                    if (vals(f->block2, b) == vals(f->block1, a)) {
                        found = true;
                        break;
                    }
                if (!found) return false;
            }
            return true;
        }
        case NodeKind::Exc: {
            for (std::uint32_t a : elems)
                for (std::uint32_t b : elems)
                    if (vals(f->block2, b) == vals(f->block1, a)) return false;
            return true;
        }
        case NodeKind::Indep: {
            for (std::uint32_t a : elems)
                for (std::uint32_t b : elems) {
                    if (vals(f->block1, a) != vals(f->block1, b)) continue;
                    bool found = false;
                    for (std::uint32_t c : elems)
                        if (vals(f->block1, c) == vals(f->block1, a) &&
                            vals(f->block2, c) == vals(f->block2, a) &&
                            vals(f->block3, c) == vals(f->block3, b)) {
                            found = true;
                            break;
                        }
                    if (!found) return false;
                }
            return true;
        }
        case NodeKind::RelInc: {
            for (std::uint32_t a : elems) {
                if (!eval_pl(f->alpha, ni.fv, a)) continue;
                bool found = false;
                for (std::uint32_t b : elems)
                    if (eval_pl(f->beta, ni.fv, b) &&
                        vals(f->block2, b) == vals(f->block1, a)) {
                        found = true;
                        break;
                    }
                if (!found) return false;
            }
            return true;
        }
        case NodeKind::RelExc: {
            for (std::uint32_t a : elems) {
                if (!eval_pl(f->alpha, ni.fv, a)) continue;
                for (std::uint32_t b : elems)
                    if (eval_pl(f->beta, ni.fv, b) &&
                        vals(f->block2, b) == vals(f->block1, a))
                        return false;
            }
            return true;
        }
        case NodeKind::PrimInc: {
            if (elems.empty()) return true;
            std::uint32_t want = 0;
            for (std::size_t j = 0; j < f->bits.size(); ++j)
                if (f->bits[j]) want |= 1u << j;
            for (std::uint32_t a : elems)
                if (vals(f->block1, a) == want) return true;
            return false;
        }
        case NodeKind::NonConst: {
            if (elems.empty()) return true;
            for (std::uint32_t a : elems)
                if (vals(f->block1, a) != vals(f->block1, elems[0])) return true;
            return false;
        }
        default:
            throw DomainError("not an atom");
        }
    }

    Bitset build_table(const Formula& f, const Names& scope) {
        const std::size_t w = scope.size();
        if (w > opt_.max_table_vars)
            throw CapError("table scope of " + std::to_string(w) +
                           " variables exceeds the configured limit");
        const std::size_t n = std::size_t{1} << w;       // evaluations
        const std::size_t m = std::size_t{1} << n;       // team codes
        Bitset out(m);

        switch (f->kind) {
        case NodeKind::True:
            out.fill();
            return out;
        case NodeKind::False:
            out.set(0);
            return out;
        case NodeKind::Literal: {
            std::uint32_t good = 0;
            for (std::size_t e = 0; e < n; ++e)
                if (eval_pl(f, scope, e)) good |= 1u << e;
            for (std::size_t t = 0; t < m; ++t)
                if ((t & ~static_cast<std::size_t>(good)) == 0) out.set(t);
            return out;
        }
        case NodeKind::And:
            return table(f->left, scope) & table(f->right, scope);
        case NodeKind::GlobalOr:
            return table(f->left, scope) | table(f->right, scope);
        case NodeKind::Or: {
            // count exact lax splits through a zeta transform over subteams
            const Bitset& lt = table(f->left, scope);
            const Bitset& rt = table(f->right, scope);
            std::vector<std::int64_t> a(m), b(m);
            for (std::size_t t = 0; t < m; ++t) {
                a[t] = lt.test(t);
                b[t] = rt.test(t);
            }
            for (std::size_t d = 0; d < n; ++d) {
                const std::size_t bit = std::size_t{1} << d;
                for (std::size_t t = 0; t < m; ++t)
                    if (t & bit) {
                        a[t] += a[t ^ bit];
                        b[t] += b[t ^ bit];
                    }
            }
            for (std::size_t t = 0; t < m; ++t) a[t] *= b[t];
            for (std::size_t d = 0; d < n; ++d) {
                const std::size_t bit = std::size_t{1} << d;
                for (std::size_t t = 0; t < m; ++t)
                    if (t & bit) a[t] -= a[t ^ bit];
            }
            for (std::size_t t = 0; t < m; ++t)
                if (a[t] != 0) out.set(t);
            return out;
        }
        case NodeKind::Exists: {
            Names inner = scope;
            inner.push_back(f->var);
            const Bitset& child = table(f->left, inner);
            child.for_each([&](std::size_t t2) { out.set((t2 & (m - 1)) | (t2 >> n)); });
            return out;
        }
        case NodeKind::Forall: {
            Names inner = scope;
            inner.push_back(f->var);
            const Bitset& child = table(f->left, inner);
            for (std::size_t t = 0; t < m; ++t)
                if (child.test(t | (t << n))) out.set(t);
            return out;
        }
        case NodeKind::Might: {
            out = table(f->left, scope);
            out.reset(0);
            out.subset_or(static_cast<unsigned>(n));
            out.set(0);
            return out;
        }
        case NodeKind::EMight: {
            out = table(f->left, scope);
            out.reset(0);
            out.subset_or(static_cast<unsigned>(n));
            return out;
        }
        case NodeKind::SMight: {
            const Bitset& child = table(f->left, scope);
            std::uint32_t good = 0;
            for (std::size_t e = 0; e < n; ++e)
                if (child.test(std::size_t{1} << e)) good |= 1u << e;
            out.set(0);
            for (std::size_t t = 1; t < m; ++t)
                if (t & good) out.set(t);
            return out;
        }
        case NodeKind::NE:
            out.fill();
            out.reset(0);
            return out;
        default:
            return atom_table(f, scope);
        }
    }

    Bitset atom_table(const Formula& f, const Names& scope) {
        const std::size_t n = std::size_t{1} << scope.size();
        const std::size_t m = std::size_t{1} << n;
        Bitset out(m);

        auto vals = [&](const std::vector<Formula>& blk, std::size_t e) {
            std::uint32_t v = 0;
            for (std::size_t j = 0; j < blk.size(); ++j)
                if (eval_pl(blk[j], scope, e)) v |= 1u << j;
            return v;
        };
        auto guard = [&](const Formula& g, std::size_t e) { return eval_pl(g, scope, e); };

        // required[e]: the team must meet it; forbidden[e]: must avoid it
        auto fill_pointwise = [&](const std::vector<std::uint32_t>& need,
                                  const std::vector<std::uint32_t>& avoid,
                                  const std::vector<bool>& active) {
            for (std::size_t t = 0; t < m; ++t) {
                bool ok = true;
                for (std::size_t e = 0; ok && e < n; ++e) {
                    if (!((t >> e) & 1u) || !active[e]) continue;
                    if (need[e] != 0 && (t & need[e]) == 0) ok = false;
                    if ((t & avoid[e]) != 0) ok = false;
                }
                if (ok) out.set(t);
            }
        };

        std::vector<std::uint32_t> need(n, 0), avoid(n, 0);
        std::vector<bool> active(n, true);

        switch (f->kind) {
        case NodeKind::Dep:
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = 0; b < n; ++b)
                    if (vals(f->block1, a) == vals(f->block1, b) &&
                        vals(f->block2, a) != vals(f->block2, b))
                        avoid[a] |= 1u << b;
            fill_pointwise(need, avoid, active);
            return out;
        case NodeKind::Anon:
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = 0; b < n; ++b)
                    if (vals(f->block1, a) == vals(f->block1, b) &&
                        vals(f->block2, a) != vals(f->block2, b))
                        need[a] |= 1u << b;
            // an evaluation with no possible twin kills every team containing it
            for (std::size_t a = 0; a < n; ++a)
                if (need[a] == 0) avoid[a] |= 1u << a;
            fill_pointwise(need, avoid, active);
            return out;
        case NodeKind::Inc:
            for (std::size_t a = 0; a < n; ++a) {
                for (std::size_t b = 0; b < n; ++b)
                    if (vals(f->block2, b) == vals(f->block1, a)) need[a] |= 1u << b;
                if (need[a] == 0) avoid[a] |= 1u << a;
            }
            fill_pointwise(need, avoid, active);
            return out;
        case NodeKind::Exc:
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = 0; b < n; ++b)
                    if (vals(f->block2, b) == vals(f->block1, a)) avoid[a] |= 1u << b;
            fill_pointwise(need, avoid, active);
            return out;
        case NodeKind::RelInc:
            for (std::size_t a = 0; a < n; ++a) {
                if (!guard(f->alpha, a)) {
                    active[a] = false;
                    continue;
                }
                for (std::size_t b = 0; b < n; ++b)
                    if (guard(f->beta, b) && vals(f->block2, b) == vals(f->block1, a))
                        need[a] |= 1u << b;
                if (need[a] == 0) avoid[a] |= 1u << a;
            }
            fill_pointwise(need, avoid, active);
            return out;
        case NodeKind::RelExc:
            for (std::size_t a = 0; a < n; ++a) {
                if (!guard(f->alpha, a)) {
                    active[a] = false;
                    continue;
                }
                for (std::size_t b = 0; b < n; ++b)
                    if (guard(f->beta, b) && vals(f->block2, b) == vals(f->block1, a))
                        avoid[a] |= 1u << b;
            }
            fill_pointwise(need, avoid, active);
            return out;
        case NodeKind::Indep: {
            for (std::size_t t = 0; t < m; ++t) {
                bool ok = true;
                for (std::size_t a = 0; ok && a < n; ++a) {
                    if (!((t >> a) & 1u)) continue;
                    for (std::size_t b = 0; ok && b < n; ++b) {
                        if (!((t >> b) & 1u)) continue;
                        if (vals(f->block1, a) != vals(f->block1, b)) continue;
                        bool found = false;
                        for (std::size_t c = 0; !found && c < n; ++c)
                            if (((t >> c) & 1u) && vals(f->block1, c) == vals(f->block1, a) &&
                                vals(f->block2, c) == vals(f->block2, a) &&
                                vals(f->block3, c) == vals(f->block3, b))
                                found = true;
                        ok = found;
                    }
                }
                if (ok) out.set(t);
            }
            return out;
        }
        case NodeKind::PrimInc: {
            std::uint32_t want = 0;
            for (std::size_t j = 0; j < f->bits.size(); ++j)
                if (f->bits[j]) want |= 1u << j;
            std::uint32_t hits = 0;
            for (std::size_t e = 0; e < n; ++e)
                if (vals(f->block1, e) == want) hits |= 1u << e;
            out.set(0);
            for (std::size_t t = 1; t < m; ++t)
                if (t & hits) out.set(t);
            return out;
        }
        case NodeKind::NonConst: {
            std::vector<std::uint32_t> cls(n);
            for (std::size_t e = 0; e < n; ++e) cls[e] = vals(f->block1, e);
            out.set(0);
            for (std::size_t t = 1; t < m; ++t) {
                const std::size_t first = static_cast<std::size_t>(__builtin_ctzll(t));
                for (std::size_t e = first + 1; e < n; ++e)
                    if (((t >> e) & 1u) && cls[e] != cls[first]) {
                        out.set(t);
                        break;
                    }
            }
            return out;
        }
        default:
            throw DomainError("not an atom");
        }
    }
};

Bitset team_bits(const Team& t) {
    Bitset b(t.scope.eval_count());
    for (auto e : t.members) b.set(e);
    return b;
}

void require_scoped(const Formula& f, const Scope& scope, const char* what) {
    for (const auto& v : free_vars(f))
        if (scope.index_of(v) == Scope::npos)
            throw DomainError(std::string(what) + ": free variable " + v +
                              " is not in the scope");
}

} // namespace

// ---------------------------------------------------------------------------
// scope and team plumbing

std::size_t Scope::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < vars.size(); ++i)
        if (vars[i] == name) return i;
    return npos;
}

Scope make_scope(std::vector<std::string> vars) {
    std::set<std::string> seen;
    for (const auto& v : vars) {
        if (v.empty()) throw DomainError("scope: empty variable name");
        if (!seen.insert(v).second) throw DomainError("scope: duplicate variable " + v);
    }
    if (vars.size() > 26) throw CapError("scope of more than 26 variables");
    return Scope{std::move(vars)};
}

Scope scope_of(const Formula& f) {
    auto fv = free_vars(f);
    return Scope{{fv.begin(), fv.end()}};
}

std::uint64_t Team::eval_mask() const {
    if (scope.size() > 6) throw DomainError("mask form needs at most 6 scope variables");
    std::uint64_t m = 0;
    for (auto e : members) m |= std::uint64_t{1} << e;
    return m;
}

Team make_team(Scope scope, std::vector<std::uint32_t> members) {
    if (scope.size() > 26) throw CapError("team scope of more than 26 variables");
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    for (auto e : members)
        if (e >= scope.eval_count())
            throw DomainError("team member outside the scope's evaluations");
    return Team{std::move(scope), std::move(members)};
}

Team team_from_mask(Scope scope, std::uint64_t mask) {
    if (scope.size() > 6) throw DomainError("mask form needs at most 6 scope variables");
    std::vector<std::uint32_t> members;
    for (std::uint32_t e = 0; e < scope.eval_count(); ++e)
        if ((mask >> e) & 1u) members.push_back(e);
    return make_team(std::move(scope), std::move(members));
}

namespace {

void skip_ws(const std::string& s, std::size_t& i) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\n' || s[i] == '\r')) ++i;
}

void expect_char(const std::string& s, std::size_t& i, char c) {
    skip_ws(s, i);
    if (i >= s.size() || s[i] != c)
        throw ParseError(std::string("expected '") + c + "'", i);
    ++i;
}

} // namespace

Team parse_team(const std::string& text) {
    std::size_t i = 0;
    skip_ws(text, i);
    if (text.compare(i, 5, "scope") != 0) throw ParseError("expected 'scope'", i);
    i += 5;
    expect_char(text, i, '=');
    expect_char(text, i, '[');
    std::vector<std::string> vars;
    skip_ws(text, i);
    while (i < text.size() && text[i] != ']') {
        std::size_t start = i;
        while (i < text.size() && text[i] != ',' && text[i] != ']' && text[i] != ' ' &&
               text[i] != '\t')
            ++i;
        if (i == start) throw ParseError("expected a variable name", i);
        vars.push_back(text.substr(start, i - start));
        skip_ws(text, i);
        if (i < text.size() && text[i] == ',') {
            ++i;
            skip_ws(text, i);
        }
    }
    expect_char(text, i, ']');
    expect_char(text, i, ';');
    expect_char(text, i, '{');
    Scope scope;
    try {
        scope = make_scope(std::move(vars));
    } catch (const DomainError& e) {
        throw ParseError(e.what(), 0);
    }
    if (scope.size() == 0) throw ParseError("team text needs a nonempty scope", 0);
    std::vector<std::uint32_t> members;
    skip_ws(text, i);
    while (i < text.size() && text[i] != '}') {
        std::size_t start = i;
        std::uint32_t code = 0;
        std::size_t j = 0;
        while (i < text.size() && (text[i] == '0' || text[i] == '1')) {
            if (text[i] == '1') code |= 1u << j;
            ++j;
            ++i;
        }
        if (j != scope.size())
            throw ParseError("evaluation needs one bit per scope variable", start);
        members.push_back(code);
        skip_ws(text, i);
        if (i < text.size() && text[i] == ',') {
            ++i;
            skip_ws(text, i);
        }
    }
    expect_char(text, i, '}');
    skip_ws(text, i);
    if (i != text.size()) throw ParseError("trailing input", i);
    return make_team(std::move(scope), std::move(members));
}

std::string team_to_text(const Team& t) {
    if (t.scope.size() == 0) throw DomainError("cannot render a team over an empty scope");
    std::string out = "scope=[";
    for (std::size_t i = 0; i < t.scope.vars.size(); ++i) {
        if (i) out += ',';
        out += t.scope.vars[i];
    }
    out += "]; {";
    for (std::size_t i = 0; i < t.members.size(); ++i) {
        if (i) out += ',';
        out += eval_label(t.members[i], t.scope.size());
    }
    out += '}';
    return out;
}

Team team_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(e.what(), 0);
    }
    if (!j.is_object() || !j.contains("scope") || !j.contains("teams"))
        throw ParseError("team JSON needs \"scope\" and \"teams\"", 0);
    std::vector<std::string> vars;
    for (const auto& v : j["scope"]) {
        if (!v.is_string()) throw ParseError("scope entries must be strings", 0);
        vars.push_back(v.get<std::string>());
    }
    if (!j["teams"].is_array() || j["teams"].size() != 1)
        throw ParseError("team JSON needs exactly one team", 0);
    Scope scope;
    try {
        scope = make_scope(std::move(vars));
    } catch (const DomainError& e) {
        throw ParseError(e.what(), 0);
    }
    std::vector<std::uint32_t> members;
    for (const auto& entry : j["teams"][0]) {
        if (!entry.is_string()) throw ParseError("evaluations must be strings", 0);
        std::string s = entry.get<std::string>();
        if (s.size() != scope.size())
            throw ParseError("evaluation needs one bit per scope variable", 0);
        std::uint32_t code = 0;
        for (std::size_t k = 0; k < s.size(); ++k) {
            if (s[k] != '0' && s[k] != '1') throw ParseError("evaluations are 0/1 strings", 0);
            if (s[k] == '1') code |= 1u << k;
        }
        members.push_back(code);
    }
    try {
        return make_team(std::move(scope), std::move(members));
    } catch (const DomainError& e) {
        throw ParseError(e.what(), 0);
    }
}

std::string team_to_json(const Team& t) {
    nlohmann::json j;
    j["scope"] = t.scope.vars;
    nlohmann::json team = nlohmann::json::array();
    for (auto e : t.members) team.push_back(eval_label(e, t.scope.size()));
    j["teams"] = nlohmann::json::array({team});
    return j.dump();
}

// ---------------------------------------------------------------------------
// public operations

bool satisfies(const Team& t, const Formula& f, const EvalOptions& opt) {
    if (t.scope.size() > opt.max_scope)
        throw CapError("team scope exceeds the evaluation limit of " +
                       std::to_string(opt.max_scope) + " variables");
    require_scoped(f, t.scope, "satisfies");
    Engine engine(opt, false);
    Names scope = t.scope.vars;
    return engine.sat(f, scope, team_bits(t));
}

TeamProperty team_property(const Formula& f, const Scope& scope, const EvalOptions& opt) {
    if (scope.size() > opt.max_property_scope)
        throw CapError("property scope exceeds the limit of " +
                       std::to_string(opt.max_property_scope) + " variables");
    require_scoped(f, scope, "team_property");
    Engine engine(opt, true);
    const std::size_t n = scope.eval_count();
    const std::size_t m = std::size_t{1} << n;
    std::vector<Mask> members;
    Names names = scope.vars;
    for (std::size_t code = 0; code < m; ++code) {
        Bitset team(n);
        for (std::size_t e = 0; e < n; ++e)
            if ((code >> e) & 1u) team.set(e);
        if (engine.sat(f, names, team)) members.push_back(static_cast<Mask>(code));
    }
    std::vector<std::string> labels;
    for (std::size_t e = 0; e < n; ++e) labels.push_back(eval_label(e, scope.size()));
    return TeamProperty{scope, SetFamily(BaseSet(std::move(labels)), std::move(members))};
}

Team restrict_team(const Team& t, const Scope& smaller) {
    std::vector<unsigned> pos;
    for (const auto& v : smaller.vars) {
        std::size_t i = t.scope.index_of(v);
        if (i == Scope::npos)
            throw DomainError("restrict: variable " + v + " is not in the team scope");
        pos.push_back(static_cast<unsigned>(i));
    }
    std::vector<std::uint32_t> members;
    for (auto e : t.members) members.push_back(gather(e, pos));
    return make_team(smaller, std::move(members));
}

EquivalenceResult check_equivalent(const Formula& f, const Formula& g,
                                   const EvalOptions& opt) {
    if (free_vars(f) != free_vars(g))
        throw DomainError("equivalence needs identical free variables");
    Scope scope = scope_of(f);
    if (scope.size() > opt.max_property_scope)
        throw CapError("equivalence scope exceeds the limit of " +
                       std::to_string(opt.max_property_scope) + " variables");
    Engine engine(opt, true);
    const std::size_t n = scope.eval_count();
    const std::size_t m = std::size_t{1} << n;
    Names names = scope.vars;
    for (std::size_t code = 0; code < m; ++code) {
        Bitset team(n);
        for (std::size_t e = 0; e < n; ++e)
            if ((code >> e) & 1u) team.set(e);
        bool lv = engine.sat(f, names, team);
        bool rv = engine.sat(g, names, team);
        if (lv != rv)
            return EquivalenceResult{false, team_from_mask(scope, code), lv, rv};
    }
    return EquivalenceResult{};
}

} // namespace teamdim
