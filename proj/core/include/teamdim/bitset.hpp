#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace teamdim {

// Dynamic bit set. Doubles as an indicator function over the subset lattice
// {0,1}^dims when size() == 1u << dims; the *_or transforms work in that view.
class Bitset {
public:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    Bitset() = default;
    explicit Bitset(std::size_t nbits) : nbits_(nbits), words_((nbits + 63) / 64, 0) {}

    std::size_t size() const { return nbits_; }

    bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
    void assign(std::size_t i, bool v) { v ? set(i) : reset(i); }

    void clear();
    void fill();

    bool none() const;
    bool any() const { return !none(); }
    std::size_t count() const;

    Bitset& operator&=(const Bitset& o);
    Bitset& operator|=(const Bitset& o);
    Bitset& operator^=(const Bitset& o);
    // this &= ~o
    Bitset& and_not(const Bitset& o);
    Bitset operator~() const;

    friend Bitset operator&(Bitset a, const Bitset& b) { return a &= b; }
    friend Bitset operator|(Bitset a, const Bitset& b) { return a |= b; }

    bool operator==(const Bitset& o) const { return nbits_ == o.nbits_ && words_ == o.words_; }

    bool intersects(const Bitset& o) const;
    // (this & ~o).none()
    bool subset_of(const Bitset& o) const;

    std::uint64_t hash() const;

    std::size_t find_first() const { return find_next_from(0); }
    // first set bit with index >= i
    std::size_t find_next_from(std::size_t i) const;

    template <class Fn>
    void for_each(Fn&& fn) const {
        for (std::size_t i = find_first(); i != npos; i = find_next_from(i + 1)) fn(i);
    }

    // Subset-lattice transforms; require size() == 1u << dims.
    // After superset_or, bit m is set iff some m' with m ⊆ m' was set before.
    void superset_or(unsigned dims);
    // After subset_or, bit m is set iff some m' with m' ⊆ m was set before.
    void subset_or(unsigned dims);
    // Bit m set iff some strict superset (resp. strict subset) of m was set.
    void strict_superset_or(unsigned dims);
    void strict_subset_or(unsigned dims);
    // Zero every position whose bit `axis` differs from `value`.
    void axis_filter(unsigned axis, bool value);

private:
    std::size_t nbits_ = 0;
    std::vector<std::uint64_t> words_;

    void trim();
    void check_same_size(const Bitset& o) const;
};

} // namespace teamdim
