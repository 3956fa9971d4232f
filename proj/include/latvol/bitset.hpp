#ifndef LATVOL_BITSET_HPP
#define LATVOL_BITSET_HPP

#include <bit>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <functional>

namespace latvol {

// Fixed-width bitset over 64-bit words. Incidence rows, vertex sets of faces
// and face signatures all use it; the fused kernels (assign_and, and_count,
// contains) are the hot path of the descent, so they work on raw words.
// Widths up to 64 bits are stored inline: face signatures of polytopes with
// few facets never touch the heap.
class Bitset {
public:
    Bitset() { inline_ = 0; }
    explicit Bitset(std::size_t nbits) : nbits_(nbits), nwords_((nbits + 63) / 64)
    {
        if (on_heap()) {
            heap_ = new std::uint64_t[nwords_];
            std::memset(heap_, 0, nwords_ * 8);
        } else {
            inline_ = 0;
        }
    }
    Bitset(const Bitset& o) : nbits_(o.nbits_), nwords_(o.nwords_)
    {
        if (on_heap()) {
            heap_ = new std::uint64_t[nwords_];
            std::memcpy(heap_, o.heap_, nwords_ * 8);
        } else {
            inline_ = o.inline_;
        }
    }
    Bitset(Bitset&& o) noexcept : nbits_(o.nbits_), nwords_(o.nwords_), heap_(o.heap_)
    {
        o.nbits_ = 0;
        o.nwords_ = 0;
        o.inline_ = 0;
    }
    Bitset& operator=(const Bitset& o)
    {
        if (this == &o)
            return *this;
        if (on_heap() && nwords_ == o.nwords_) { // common case: same width, reuse
            std::memcpy(heap_, o.heap_, nwords_ * 8);
            nbits_ = o.nbits_;
            return *this;
        }
        if (on_heap())
            delete[] heap_;
        nbits_ = o.nbits_;
        nwords_ = o.nwords_;
        if (on_heap()) {
            heap_ = new std::uint64_t[nwords_];
            std::memcpy(heap_, o.heap_, nwords_ * 8);
        } else {
            inline_ = o.inline_;
        }
        return *this;
    }
    Bitset& operator=(Bitset&& o) noexcept
    {
        if (this == &o)
            return *this;
        if (on_heap())
            delete[] heap_;
        nbits_ = o.nbits_;
        nwords_ = o.nwords_;
        heap_ = o.heap_;
        o.nbits_ = 0;
        o.nwords_ = 0;
        o.inline_ = 0;
        return *this;
    }
    ~Bitset()
    {
        if (on_heap())
            delete[] heap_;
    }

    std::size_t size() const { return nbits_; }
    std::size_t word_count() const { return nwords_; }

    void set(std::size_t i) { words()[i >> 6] |= std::uint64_t(1) << (i & 63); }
    void reset(std::size_t i) { words()[i >> 6] &= ~(std::uint64_t(1) << (i & 63)); }
    bool test(std::size_t i) const { return (words()[i >> 6] >> (i & 63)) & 1; }

    void set_all()
    {
        std::uint64_t* w = words();
        for (std::size_t k = 0; k < nwords_; ++k)
            w[k] = ~std::uint64_t(0);
        trim();
    }
    void clear()
    {
        std::uint64_t* w = words();
        for (std::size_t k = 0; k < nwords_; ++k)
            w[k] = 0;
    }

    std::size_t count() const
    {
        const std::uint64_t* w = words();
        std::size_t c = 0;
        for (std::size_t k = 0; k < nwords_; ++k)
            c += std::popcount(w[k]);
        return c;
    }

    bool any() const
    {
        const std::uint64_t* w = words();
        for (std::size_t k = 0; k < nwords_; ++k)
            if (w[k])
                return true;
        return false;
    }

    /// *this = a & b; a and b must have equal widths.
    void assign_and(const Bitset& a, const Bitset& b)
    {
        resize_like(a);
        std::uint64_t* w = words();
        const std::uint64_t* wa = a.words();
        const std::uint64_t* wb = b.words();
        for (std::size_t k = 0; k < nwords_; ++k)
            w[k] = wa[k] & wb[k];
    }

    /// *this = a & b, returning popcount(*this) from the same pass.
    std::size_t assign_and_count(const Bitset& a, const Bitset& b)
    {
        resize_like(a);
        std::uint64_t* w = words();
        const std::uint64_t* wa = a.words();
        const std::uint64_t* wb = b.words();
        std::size_t c = 0;
        for (std::size_t k = 0; k < nwords_; ++k) {
            w[k] = wa[k] & wb[k];
            c += std::popcount(w[k]);
        }
        return c;
    }

    void operator&=(const Bitset& o)
    {
        std::uint64_t* w = words();
        const std::uint64_t* wo = o.words();
        for (std::size_t k = 0; k < nwords_; ++k)
            w[k] &= wo[k];
    }

    std::size_t and_count(const Bitset& o) const
    {
        const std::uint64_t* w = words();
        const std::uint64_t* wo = o.words();
        std::size_t c = 0;
        for (std::size_t k = 0; k < nwords_; ++k)
            c += std::popcount(w[k] & wo[k]);
        return c;
    }

    /// True iff every bit of o is also set in *this.
    bool contains(const Bitset& o) const
    {
        const std::uint64_t* w = words();
        const std::uint64_t* wo = o.words();
        for (std::size_t k = 0; k < nwords_; ++k)
            if (wo[k] & ~w[k])
                return false;
        return true;
    }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::size_t find_first() const { return find_next_from(0); }
    std::size_t find_next(std::size_t i) const { return find_next_from(i + 1); }

    template <typename F>
    void for_each(F&& f) const
    {
        const std::uint64_t* ws = words();
        for (std::size_t k = 0; k < nwords_; ++k) {
            std::uint64_t w = ws[k];
            while (w) {
                f(k * 64 + static_cast<std::size_t>(std::countr_zero(w)));
                w &= w - 1;
            }
        }
    }

    bool operator==(const Bitset& o) const
    {
        if (nbits_ != o.nbits_)
            return false;
        const std::uint64_t* w = words();
        const std::uint64_t* wo = o.words();
        for (std::size_t k = 0; k < nwords_; ++k)
            if (w[k] != wo[k])
                return false;
        return true;
    }

    std::size_t hash() const
    {
        const std::uint64_t* w = words();
        std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ nbits_;
        for (std::size_t k = 0; k < nwords_; ++k)
            h ^= w[k] + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return static_cast<std::size_t>(h);
    }

private:
    bool on_heap() const { return nwords_ > 1; }
    std::uint64_t* words() { return on_heap() ? heap_ : &inline_; }
    const std::uint64_t* words() const { return on_heap() ? heap_ : &inline_; }

    void resize_like(const Bitset& a)
    {
        if (nwords_ != a.nwords_) {
            if (on_heap())
                delete[] heap_;
            nwords_ = a.nwords_;
            if (on_heap())
                heap_ = new std::uint64_t[nwords_];
        }
        nbits_ = a.nbits_;
    }

    void trim()
    {
        if (nbits_ % 64 && nwords_)
            words()[nwords_ - 1] &= (std::uint64_t(1) << (nbits_ % 64)) - 1;
    }

    std::size_t find_next_from(std::size_t i) const
    {
        if (i >= nbits_)
            return npos;
        const std::uint64_t* ws = words();
        std::size_t k = i >> 6;
        std::uint64_t w = ws[k] >> (i & 63);
        if (w)
            return i + static_cast<std::size_t>(std::countr_zero(w));
        for (++k; k < nwords_; ++k)
            if (ws[k])
                return k * 64 + static_cast<std::size_t>(std::countr_zero(ws[k]));
        return npos;
    }

    std::size_t nbits_ = 0;
    std::size_t nwords_ = 0;
    union {
        std::uint64_t inline_;
        std::uint64_t* heap_;
    };
};

struct BitsetHash {
    std::size_t operator()(const Bitset& b) const { return b.hash(); }
};

} // namespace latvol

#endif
