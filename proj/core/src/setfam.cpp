#include "teamdim/setfam.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "shadow_engine.hpp"
#include "teamdim/error.hpp"

namespace teamdim {

namespace {

constexpr std::size_t kHardMaxBase = 26;

std::vector<std::string> default_labels(std::size_t n) {
    std::vector<std::string> out;
    out.reserve(n);
    if (n <= 26) {
        for (std::size_t i = 0; i < n; ++i) out.push_back(std::string(1, char('a' + i)));
    } else {
        for (std::size_t i = 0; i < n; ++i) out.push_back("e" + std::to_string(i));
    }
    return out;
}

} // namespace

BaseSet::BaseSet(std::size_t n) : labels_(default_labels(n)) {
    if (n == 0) throw DomainError("base set must have at least one element");
}

BaseSet::BaseSet(std::vector<std::string> labels) : labels_(std::move(labels)) {
    if (labels_.empty()) throw DomainError("base set must have at least one element");
    std::unordered_set<std::string> seen;
    for (const auto& l : labels_) {
        if (l.empty()) throw DomainError("empty base element label");
        if (!seen.insert(l).second) throw DomainError("duplicate base element label: " + l);
    }
}

std::optional<std::size_t> BaseSet::index(std::string_view name) const {
    for (std::size_t i = 0; i < labels_.size(); ++i)
        if (labels_[i] == name) return i;
    return std::nullopt;
}

SetFamily::SetFamily(BaseSet base, std::vector<Mask> members, FamilyLimits limits)
    : base_(std::move(base)), members_(std::move(members)) {
    if (base_.size() > kHardMaxBase)
        throw CapError("base size " + std::to_string(base_.size()) + " exceeds engine limit " +
                       std::to_string(kHardMaxBase));
    if (base_.size() > limits.max_base)
        throw CapError("base size " + std::to_string(base_.size()) + " exceeds cap " +
                       std::to_string(limits.max_base));
    Mask full = base_.full_mask();
    for (Mask m : members_)
        if (!subset_of(m, full)) throw DomainError("family member is not a subset of the base");
    std::sort(members_.begin(), members_.end(), canonical_less);
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
    if (members_.size() > limits.max_members)
        throw CapError("family size " + std::to_string(members_.size()) + " exceeds cap " +
                       std::to_string(limits.max_members));
    by_value_ = members_;
    std::sort(by_value_.begin(), by_value_.end());
}

bool SetFamily::contains(Mask m) const {
    return std::binary_search(by_value_.begin(), by_value_.end(), m);
}

std::size_t SetFamily::index_of(Mask m) const {
    auto it = std::lower_bound(members_.begin(), members_.end(), m, canonical_less);
    if (it == members_.end() || *it != m) return npos;
    return static_cast<std::size_t>(it - members_.begin());
}

Bitset SetFamily::membership_bitset() const {
    Bitset bits(std::size_t{1} << base_.size());
    for (Mask m : members_) bits.set(m);
    return bits;
}

namespace detail {

LatticeView::LatticeView(const SetFamily& f)
    : dims(static_cast<unsigned>(f.base().size())),
      membership(f.membership_bitset()),
      members(f.members()) {}

Bitset cone_bits(unsigned dims, Mask apex, bool dual) {
    Bitset out(std::size_t{1} << dims);
    out.fill();
    for (unsigned x = 0; x < dims; ++x) {
        bool in_apex = (apex >> x) & 1;
        if (!dual && !in_apex) out.axis_filter(x, false);
        if (dual && in_apex) out.axis_filter(x, true);
    }
    return out;
}

Bitset shadow_bits(const LatticeView& v, Mask apex, bool dual) {
    Bitset cone = cone_bits(v.dims, apex, dual);
    Bitset bad = cone;
    bad.and_not(v.membership);
    if (!dual)
        bad.superset_or(v.dims);
    else
        bad.subset_or(v.dims);
    cone.and_not(bad);
    return cone;
}

std::vector<Mask> shadow_extremes(const LatticeView& v, Mask apex, bool dual) {
    Bitset sh = shadow_bits(v, apex, dual);
    std::vector<Mask> elems;
    sh.for_each([&](std::size_t p) { elems.push_back(static_cast<Mask>(p)); });
    std::vector<Mask> out;
    if (elems.size() <= 2048) {
        for (Mask m : elems) {
            bool extreme = true;
            if (!dual) {
                for (Mask rest = m; rest && extreme; rest &= rest - 1)
                    if (sh.test(m & ~(rest & -rest))) extreme = false;
            } else {
                Mask full = v.dims >= 32 ? ~Mask{0} : (Mask{1} << v.dims) - 1;
                for (Mask rest = full & ~m; rest && extreme; rest &= rest - 1)
                    if (sh.test(m | (rest & -rest))) extreme = false;
            }
            if (extreme) out.push_back(m);
        }
    } else {
        Bitset strict = sh;
        if (!dual)
            strict.strict_subset_or(v.dims);
        else
            strict.strict_superset_or(v.dims);
        sh.and_not(strict);
        sh.for_each([&](std::size_t p) { out.push_back(static_cast<Mask>(p)); });
    }
    std::sort(out.begin(), out.end(), canonical_less);
    return out;
}

namespace {

// FIFO-capped cache of opposite-direction shadows keyed by apex mask.
class ShadowCache {
public:
    ShadowCache(const LatticeView& v, bool dual, std::size_t budget_bytes = std::size_t{64} << 20)
        : v_(v), dual_(dual) {
        std::size_t entry = ((std::size_t{1} << v.dims) + 7) / 8 + 64;
        cap_ = std::max<std::size_t>(4, budget_bytes / entry);
    }

    const Bitset& get(Mask m) {
        auto it = map_.find(m);
        if (it != map_.end()) return it->second;
        if (map_.size() >= cap_) {
            map_.erase(order_.front());
            order_.pop_front();
        }
        auto [ins, ok] = map_.emplace(m, shadow_bits(v_, m, dual_));
        order_.push_back(m);
        return ins->second;
    }

private:
    const LatticeView& v_;
    bool dual_;
    std::size_t cap_;
    std::unordered_map<Mask, Bitset> map_;
    std::deque<Mask> order_;
};

} // namespace

std::vector<char> critical_flags(const LatticeView& v, bool dual) {
    std::size_t n = v.members.size();
    std::vector<std::vector<Mask>> ext(n);
    for (std::size_t i = 0; i < n; ++i) ext[i] = shadow_extremes(v, v.members[i], dual);

    ShadowCache cache(v, !dual);
    std::vector<char> flags(n, 1);
    for (std::size_t i = 0; i < n; ++i) {
        Mask b = v.members[i];
        Bitset acc = cache.get(ext[i][0]);
        for (std::size_t k = 1; k < ext[i].size(); ++k) acc &= cache.get(ext[i][k]);
        // a strictly dominating apex is a strict superset (subset when dual) of b
        if (!dual) {
            for (std::size_t p = acc.find_next_from(b + 1); p != Bitset::npos;
                 p = acc.find_next_from(p + 1)) {
                if (subset_of(b, static_cast<Mask>(p))) {
                    flags[i] = 0;
                    break;
                }
            }
        } else {
            for (std::size_t p = acc.find_first(); p != Bitset::npos && p < b;
                 p = acc.find_next_from(p + 1)) {
                if (subset_of(static_cast<Mask>(p), b)) {
                    flags[i] = 0;
                    break;
                }
            }
        }
    }
    return flags;
}

} // namespace detail

SetFamily interval(const BaseSet& base, Mask a, Mask b, FamilyLimits limits) {
    Mask full = base.full_mask();
    if (!subset_of(a, full) || !subset_of(b, full))
        throw DomainError("interval endpoint is not a subset of the base");
    std::vector<Mask> out;
    if (subset_of(a, b)) {
        Mask diff = b & ~a;
        if (static_cast<std::size_t>(set_size(diff)) >= 8 * sizeof(std::size_t) ||
            (std::size_t{1} << set_size(diff)) > limits.max_members)
            throw CapError("interval size exceeds member cap");
        Mask s = diff;
        while (true) {
            out.push_back(a | s);
            if (!s) break;
            s = (s - 1) & diff;
        }
    }
    return SetFamily(base, std::move(out), limits);
}

SetFamily convex_shadow(const SetFamily& f, Mask a, bool dual) {
    if (!f.contains(a)) throw DomainError("shadow apex is not a member of the family");
    detail::LatticeView v(f);
    Bitset sh = detail::shadow_bits(v, a, dual);
    std::vector<Mask> out;
    sh.for_each([&](std::size_t p) { out.push_back(static_cast<Mask>(p)); });
    return SetFamily(f.base(), std::move(out));
}

SetFamily extremal_sets(const SetFamily& f, Extremal mode) {
    if (f.empty()) throw DomainError("extremal sets of an empty family");
    unsigned dims = static_cast<unsigned>(f.base().size());
    Mask full = f.base_mask();

    auto pick = [&](Bitset m, bool maximal) {
        Bitset strict = m;
        if (maximal)
            strict.strict_superset_or(dims);
        else
            strict.strict_subset_or(dims);
        m.and_not(strict);
        std::vector<Mask> out;
        m.for_each([&](std::size_t p) { out.push_back(static_cast<Mask>(p)); });
        return out;
    };

    Bitset m = f.membership_bitset();
    std::vector<Mask> out;
    switch (mode) {
    case Extremal::max:
        out = pick(std::move(m), true);
        break;
    case Extremal::min:
        out = pick(std::move(m), false);
        break;
    case Extremal::max_q:
        if (!f.contains(full)) throw DomainError("max_q requires the base set in the family");
        m.reset(full);
        out = pick(std::move(m), true);
        out.push_back(full);
        break;
    case Extremal::min_q:
        if (!f.contains(0)) throw DomainError("min_q requires the empty set in the family");
        m.reset(0);
        out = pick(std::move(m), false);
        out.push_back(0);
        break;
    }
    return SetFamily(f.base(), std::move(out));
}

SetFamily critical_sets(const SetFamily& f, bool dual) {
    if (f.empty()) throw DomainError("critical sets of an empty family");
    detail::LatticeView v(f);
    auto flags = detail::critical_flags(v, dual);
    std::vector<Mask> out;
    for (std::size_t i = 0; i < flags.size(); ++i)
        if (flags[i]) out.push_back(v.members[i]);
    return SetFamily(f.base(), std::move(out));
}

ClosureProfile closure_profile(const SetFamily& f) {
    ClosureProfile p;
    unsigned dims = static_cast<unsigned>(f.base().size());
    Mask full = f.base_mask();
    Bitset m = f.membership_bitset();

    auto closed_under = [&](const Bitset& ind, bool downward) {
        Bitset reach = ind;
        if (downward)
            reach.superset_or(dims); // C ⊆ some member
        else
            reach.subset_or(dims); // C ⊇ some member
        reach.and_not(ind);
        return reach.none();
    };

    Bitset up = m, down = m;
    up.superset_or(dims);
    down.subset_or(dims);

    p.has_empty_set = f.contains(0);
    p.has_base_set = f.contains(full);

    {
        Bitset t = up;
        t.and_not(m);
        p.downward_closed = t.none();
    }
    {
        Bitset t = down;
        t.and_not(m);
        p.upward_closed = t.none();
    }
    {
        Bitset t = up;
        t &= down;
        t.and_not(m);
        p.convex = t.none();
    }

    if (p.has_base_set) {
        Bitset m2 = m;
        m2.reset(full);
        p.weak_quasi_downward = closed_under(m2, true);
    }
    if (p.has_empty_set) {
        Bitset m2 = m;
        m2.reset(0);
        p.weak_quasi_upward = closed_under(m2, false);
    }
    p.quasi_downward = p.weak_quasi_downward && !p.downward_closed;
    p.quasi_upward = p.weak_quasi_upward && !p.upward_closed;

    std::size_t sz = f.size();
    if (sz * sz <= (std::size_t{1} << 24)) {
        p.union_closed = true;
        p.intersection_closed = true;
        const auto& mem = f.members();
        for (std::size_t i = 0; i < sz && (p.union_closed || p.intersection_closed); ++i) {
            for (std::size_t j = i; j < sz; ++j) {
                if (p.union_closed && !m.test(mem[i] | mem[j])) p.union_closed = false;
                if (p.intersection_closed && !m.test(mem[i] & mem[j])) p.intersection_closed = false;
                if (!p.union_closed && !p.intersection_closed) break;
            }
        }
    } else {
        // g[C] = union of all member-subsets of C; closure fails iff some reachable
        // C equals that union but is not a member (dually for intersections).
        std::size_t lat = std::size_t{1} << dims;
        std::vector<Mask> g(lat);
        for (std::size_t c = 0; c < lat; ++c) g[c] = m.test(c) ? static_cast<Mask>(c) : 0;
        for (unsigned d = 0; d < dims; ++d) {
            std::size_t bit = std::size_t{1} << d;
            for (std::size_t c = 0; c < lat; ++c)
                if (c & bit) g[c] |= g[c ^ bit];
        }
        p.union_closed = true;
        for (std::size_t c = 0; c < lat; ++c)
            if (down.test(c) && g[c] == static_cast<Mask>(c) && !m.test(c)) {
                p.union_closed = false;
                break;
            }
        for (std::size_t c = 0; c < lat; ++c) g[c] = m.test(c) ? static_cast<Mask>(c) : full;
        for (unsigned d = 0; d < dims; ++d) {
            std::size_t bit = std::size_t{1} << d;
            for (std::size_t c = 0; c < lat; ++c)
                if (!(c & bit)) g[c] &= g[c | bit];
        }
        p.intersection_closed = true;
        for (std::size_t c = 0; c < lat; ++c)
            if (up.test(c) && g[c] == static_cast<Mask>(c) && !m.test(c)) {
                p.intersection_closed = false;
                break;
            }
    }

    p.flat_compatible = p.downward_closed && p.union_closed && p.has_empty_set;
    return p;
}

namespace {

struct Cursor {
    const std::string& s;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eat(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!eat(c)) throw ParseError(std::string("expected '") + c + "'", pos);
    }
    bool eat_word(std::string_view w) {
        skip_ws();
        if (s.compare(pos, w.size(), w) == 0) {
            pos += w.size();
            return true;
        }
        return false;
    }
    std::string label() {
        skip_ws();
        std::size_t start = pos;
        while (pos < s.size() &&
               (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_' || s[pos] == '\''))
            ++pos;
        if (pos == start) throw ParseError("expected element label", pos);
        return s.substr(start, pos - start);
    }
    bool at_end() {
        skip_ws();
        return pos >= s.size();
    }
};

SetFamily parse_family_text(const std::string& text, FamilyLimits limits) {
    Cursor c{text};
    if (!c.eat_word("base")) throw ParseError("expected 'base='", c.pos);
    c.expect('=');
    c.skip_ws();

    BaseSet base{1};
    bool have_base = false;
    if (c.pos < text.size() && std::isdigit(static_cast<unsigned char>(text[c.pos]))) {
        std::size_t start = c.pos;
        while (c.pos < text.size() && std::isdigit(static_cast<unsigned char>(text[c.pos]))) ++c.pos;
        unsigned long n = std::stoul(text.substr(start, c.pos - start));
        if (n == 0 || n > kHardMaxBase) throw ParseError("base size out of range", start);
        base = BaseSet(n);
        have_base = true;
    } else {
        c.expect('{');
        std::vector<std::string> labels;
        if (!c.eat('}')) {
            do {
                labels.push_back(c.label());
            } while (c.eat(','));
            c.expect('}');
        }
        base = BaseSet(std::move(labels));
        have_base = true;
    }
    if (!have_base) throw ParseError("missing base", c.pos);
    c.expect(';');
    c.expect('{');
    std::vector<Mask> members;
    c.skip_ws();
    if (!c.eat('}')) {
        do {
            c.expect('{');
            Mask m = 0;
            if (!c.eat('}')) {
                do {
                    std::size_t at = c.pos;
                    std::string l = c.label();
                    auto idx = base.index(l);
                    if (!idx) throw ParseError("unknown element '" + l + "'", at);
                    m |= Mask{1} << *idx;
                } while (c.eat(','));
                c.expect('}');
            }
            members.push_back(m);
        } while (c.eat(','));
        c.expect('}');
    }
    if (!c.at_end()) throw ParseError("trailing input after family", c.pos);
    return SetFamily(std::move(base), std::move(members), limits);
}

SetFamily parse_family_json(const std::string& text, FamilyLimits limits) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("bad JSON: ") + e.what(), e.byte);
    }
    if (!j.is_object() || !j.contains("base") || !j.contains("members"))
        throw ParseError("family JSON needs \"base\" and \"members\"", 0);
    BaseSet base{1};
    if (j["base"].is_number_unsigned() || j["base"].is_number_integer()) {
        long long n = j["base"].get<long long>();
        if (n < 1 || n > static_cast<long long>(kHardMaxBase))
            throw ParseError("base size out of range", 0);
        base = BaseSet(static_cast<std::size_t>(n));
    } else if (j["base"].is_array()) {
        base = BaseSet(j["base"].get<std::vector<std::string>>());
    } else {
        throw ParseError("\"base\" must be a count or a label array", 0);
    }
    std::vector<Mask> members;
    for (const auto& arr : j["members"]) {
        if (!arr.is_array()) throw ParseError("each member must be an index array", 0);
        Mask m = 0;
        for (const auto& e : arr) {
            long long i = e.get<long long>();
            if (i < 0 || i >= static_cast<long long>(base.size()))
                throw ParseError("element index " + std::to_string(i) + " out of range", 0);
            m |= Mask{1} << i;
        }
        members.push_back(m);
    }
    return SetFamily(std::move(base), std::move(members), limits);
}

} // namespace

SetFamily parse_family(const std::string& text, FamilyLimits limits) {
    std::size_t i = 0;
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i < text.size() && text[i] == '{') return parse_family_json(text, limits);
    return parse_family_text(text, limits);
}

std::string groundset_to_text(const BaseSet& base, Mask m) {
    std::string out = "{";
    bool first = true;
    for (std::size_t i = 0; i < base.size(); ++i)
        if (m & (Mask{1} << i)) {
            if (!first) out += ",";
            out += base.label(i);
            first = false;
        }
    return out + "}";
}

std::string family_to_text(const SetFamily& f) {
    std::string out = "base={";
    for (std::size_t i = 0; i < f.base().size(); ++i) {
        if (i) out += ",";
        out += f.base().label(i);
    }
    out += "}; {";
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (i) out += ",";
        out += groundset_to_text(f.base(), f.member(i));
    }
    return out + "}";
}

std::string family_to_json(const SetFamily& f) {
    nlohmann::json j;
    j["base"] = f.base().size();
    if (f.base() != BaseSet(f.base().size())) {
        std::vector<std::string> labels;
        for (std::size_t i = 0; i < f.base().size(); ++i) labels.push_back(f.base().label(i));
        j["labels"] = labels;
    }
    auto members = nlohmann::json::array();
    for (Mask m : f.members()) {
        auto arr = nlohmann::json::array();
        for (std::size_t i = 0; i < f.base().size(); ++i)
            if (m & (Mask{1} << i)) arr.push_back(i);
        members.push_back(arr);
    }
    j["members"] = members;
    return j.dump();
}

} // namespace teamdim
