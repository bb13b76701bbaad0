#include "teamdim/bitset.hpp"

#include <bit>
#include <cassert>
#include <stdexcept>

namespace teamdim {

namespace {

// positions whose bit d (d < 6) is zero
constexpr std::uint64_t kLowMask[6] = {
    0x5555555555555555ull, 0x3333333333333333ull, 0x0f0f0f0f0f0f0f0full,
    0x00ff00ff00ff00ffull, 0x0000ffff0000ffffull, 0x00000000ffffffffull,
};

} // namespace

void Bitset::clear() {
    for (auto& w : words_) w = 0;
}

void Bitset::fill() {
    for (auto& w : words_) w = ~std::uint64_t{0};
    trim();
}

bool Bitset::none() const {
    for (auto w : words_)
        if (w) return false;
    return true;
}

std::size_t Bitset::count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
}

void Bitset::check_same_size(const Bitset& o) const {
    if (nbits_ != o.nbits_) throw std::invalid_argument("bitset size mismatch");
}

Bitset& Bitset::operator&=(const Bitset& o) {
    check_same_size(o);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
}

Bitset& Bitset::operator|=(const Bitset& o) {
    check_same_size(o);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
}

Bitset& Bitset::operator^=(const Bitset& o) {
    check_same_size(o);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= o.words_[i];
    return *this;
}

Bitset& Bitset::and_not(const Bitset& o) {
    check_same_size(o);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
    return *this;
}

Bitset Bitset::operator~() const {
    Bitset r = *this;
    for (auto& w : r.words_) w = ~w;
    r.trim();
    return r;
}

bool Bitset::intersects(const Bitset& o) const {
    check_same_size(o);
    for (std::size_t i = 0; i < words_.size(); ++i)
        if (words_[i] & o.words_[i]) return true;
    return false;
}

bool Bitset::subset_of(const Bitset& o) const {
    check_same_size(o);
    for (std::size_t i = 0; i < words_.size(); ++i)
        if (words_[i] & ~o.words_[i]) return false;
    return true;
}

std::uint64_t Bitset::hash() const {
    std::uint64_t h = 1469598103934665603ull;
    for (auto w : words_) {
        h ^= w;
        h *= 1099511628211ull;
    }
    return h;
}

std::size_t Bitset::find_next_from(std::size_t i) const {
    if (i >= nbits_) return npos;
    std::size_t wi = i >> 6;
    std::uint64_t w = words_[wi] & (~std::uint64_t{0} << (i & 63));
    while (true) {
        if (w) {
            std::size_t pos = (wi << 6) + static_cast<std::size_t>(std::countr_zero(w));
            return pos < nbits_ ? pos : npos;
        }
        if (++wi == words_.size()) return npos;
        w = words_[wi];
    }
}

void Bitset::trim() {
    std::size_t used = nbits_ & 63;
    if (used && !words_.empty()) words_.back() &= (~std::uint64_t{0}) >> (64 - used);
}

void Bitset::superset_or(unsigned dims) {
    assert(nbits_ == (std::size_t{1} << dims));
    for (unsigned d = 0; d < dims; ++d) {
        if (d < 6) {
            std::uint64_t s = std::uint64_t{1} << d;
            for (auto& w : words_) w |= (w >> s) & kLowMask[d];
        } else {
            std::size_t stride = std::size_t{1} << (d - 6);
            for (std::size_t j = 0; j < words_.size(); ++j)
                if (!((j >> (d - 6)) & 1)) words_[j] |= words_[j + stride];
        }
    }
    trim();
}

void Bitset::subset_or(unsigned dims) {
    assert(nbits_ == (std::size_t{1} << dims));
    for (unsigned d = 0; d < dims; ++d) {
        if (d < 6) {
            std::uint64_t s = std::uint64_t{1} << d;
            for (auto& w : words_) w |= (w << s) & ~kLowMask[d];
        } else {
            std::size_t stride = std::size_t{1} << (d - 6);
            for (std::size_t j = 0; j < words_.size(); ++j)
                if (!((j >> (d - 6)) & 1)) words_[j + stride] |= words_[j];
        }
    }
    trim();
}

void Bitset::strict_superset_or(unsigned dims) {
    // OR over strict supersets: full superset closure, then one step up per axis.
    Bitset closed = *this;
    closed.superset_or(dims);
    Bitset out(nbits_);
    for (unsigned d = 0; d < dims; ++d) {
        if (d < 6) {
            std::uint64_t s = std::uint64_t{1} << d;
            for (std::size_t i = 0; i < words_.size(); ++i)
                out.words_[i] |= (closed.words_[i] >> s) & kLowMask[d];
        } else {
            std::size_t stride = std::size_t{1} << (d - 6);
            for (std::size_t j = 0; j < words_.size(); ++j)
                if (!((j >> (d - 6)) & 1)) out.words_[j] |= closed.words_[j + stride];
        }
    }
    out.trim();
    *this = out;
}

void Bitset::axis_filter(unsigned axis, bool value) {
    if (axis < 6) {
        std::uint64_t keep = value ? ~kLowMask[axis] : kLowMask[axis];
        for (auto& w : words_) w &= keep;
    } else {
        for (std::size_t j = 0; j < words_.size(); ++j)
            if (((j >> (axis - 6)) & 1) != static_cast<std::size_t>(value)) words_[j] = 0;
    }
}

void Bitset::strict_subset_or(unsigned dims) {
    Bitset closed = *this;
    closed.subset_or(dims);
    Bitset out(nbits_);
    for (unsigned d = 0; d < dims; ++d) {
        if (d < 6) {
            std::uint64_t s = std::uint64_t{1} << d;
            for (std::size_t i = 0; i < words_.size(); ++i)
                out.words_[i] |= (closed.words_[i] << s) & ~kLowMask[d];
        } else {
            std::size_t stride = std::size_t{1} << (d - 6);
            for (std::size_t j = 0; j < words_.size(); ++j)
                if (!((j >> (d - 6)) & 1)) out.words_[j + stride] |= closed.words_[j];
        }
    }
    out.trim();
    *this = out;
}

} // namespace teamdim
