#pragma once

#include <cstdint>
#include <vector>

namespace chainsim {

// Growable bitset keyed by dense ids. Out-of-range reads are false.
class DynamicBitset {
public:
    bool test(std::uint64_t pos) const {
        const std::uint64_t w = pos >> 6;
        if (w >= words_.size()) return false;
        return (words_[w] >> (pos & 63)) & 1u;
    }

    // Returns true when the bit was newly set.
    bool set(std::uint64_t pos) {
        const std::uint64_t w = pos >> 6;
        if (w >= words_.size()) words_.resize(w + 1, 0);
        const std::uint64_t mask = std::uint64_t{1} << (pos & 63);
        if (words_[w] & mask) return false;
        words_[w] |= mask;
        return true;
    }

    void reset(std::uint64_t pos) {
        const std::uint64_t w = pos >> 6;
        if (w < words_.size()) words_[w] &= ~(std::uint64_t{1} << (pos & 63));
    }

    std::uint64_t count() const {
        std::uint64_t c = 0;
        for (std::uint64_t w : words_) c += static_cast<std::uint64_t>(__builtin_popcountll(w));
        return c;
    }

    bool empty() const { return count() == 0; }

    void clear() { words_.clear(); }

    // Visits set bits in ascending order.
    template <typename Fn>
    void for_each(Fn&& fn) const {
        for (std::size_t wi = 0; wi < words_.size(); ++wi) {
            std::uint64_t w = words_[wi];
            while (w) {
                const int b = __builtin_ctzll(w);
                fn(static_cast<std::uint64_t>(wi) * 64 + static_cast<std::uint64_t>(b));
                w &= w - 1;
            }
        }
    }

private:
    std::vector<std::uint64_t> words_;
};

} // namespace chainsim
