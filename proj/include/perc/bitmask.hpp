#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace perc {

// Fixed-length packed bit array. Bit k lives in word k/64 at position k%64.
class BitMask {
  public:
    BitMask() = default;
    explicit BitMask(std::size_t size, bool value = false)
        : size_(size), words_((size + 63) / 64, value ? ~std::uint64_t{0} : 0) {
        trim();
    }

    // Low `size` bits of `bits` (size <= 64).
    static BitMask from_word(std::size_t size, std::uint64_t bits) {
        BitMask m(size);
        if (!m.words_.empty()) m.words_[0] = bits;
        m.trim();
        return m;
    }

    std::size_t size() const noexcept { return size_; }

    bool test(std::size_t k) const noexcept { return (words_[k >> 6] >> (k & 63)) & 1u; }
    void set(std::size_t k, bool value = true) noexcept {
        const std::uint64_t bit = std::uint64_t{1} << (k & 63);
        if (value)
            words_[k >> 6] |= bit;
        else
            words_[k >> 6] &= ~bit;
    }

    std::size_t count() const noexcept {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }
    bool any() const noexcept {
        for (auto w : words_)
            if (w) return true;
        return false;
    }
    bool none() const noexcept { return !any(); }

    // Every set bit of *this is also set in `other`.
    bool subset_of(const BitMask& other) const noexcept {
        if (other.size_ != size_) return false;
        for (std::size_t k = 0; k < words_.size(); ++k)
            if (words_[k] & ~other.words_[k]) return false;
        return true;
    }

    friend bool operator==(const BitMask&, const BitMask&) = default;

  private:
    void trim() noexcept {
        if (size_ % 64 != 0 && !words_.empty())
            words_.back() &= (std::uint64_t{1} << (size_ % 64)) - 1;
    }

    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

}  // namespace perc
