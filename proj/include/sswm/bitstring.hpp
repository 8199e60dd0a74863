#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sswm {

/// Fixed-length genotype x in {0,1}^n, packed into 64-bit words.
/// Position 0 is the leftmost character of the string form.
class BitString {
public:
    using word_type = std::uint64_t;
    static constexpr std::size_t word_bits = 64;

    BitString() = default;
    explicit BitString(std::size_t n) : n_(n), words_((n + word_bits - 1) / word_bits, 0) {}

    static BitString from_string(std::string_view s) {
        BitString x(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '1') x.set(i, true);
            else if (s[i] != '0') throw std::invalid_argument("BitString: expected only '0'/'1' characters");
        }
        return x;
    }

    static BitString ones(std::size_t n) {
        BitString x(n);
        for (std::size_t i = 0; i < n; ++i) x.set(i, true);
        return x;
    }

    /// Uniformly random string; consumes ceil(n/64) words from `rng`.
    template <class Rng>
    static BitString random(std::size_t n, Rng& rng) {
        BitString x(n);
        for (auto& w : x.words_) w = static_cast<word_type>(rng());
        x.clear_tail();
        return x;
    }

    [[nodiscard]] std::size_t size() const noexcept { return n_; }

    [[nodiscard]] bool test(std::size_t i) const noexcept {
        return (words_[i / word_bits] >> (i % word_bits)) & 1u;
    }
    void set(std::size_t i, bool v) noexcept {
        const word_type m = word_type{1} << (i % word_bits);
        if (v) words_[i / word_bits] |= m;
        else words_[i / word_bits] &= ~m;
    }
    void flip(std::size_t i) noexcept { words_[i / word_bits] ^= word_type{1} << (i % word_bits); }

    [[nodiscard]] std::size_t count() const noexcept {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    /// Number of ones in positions [lo, hi).
    [[nodiscard]] std::size_t count(std::size_t lo, std::size_t hi) const noexcept {
        std::size_t c = 0;
        while (lo < hi) {
            const std::size_t w = lo / word_bits, off = lo % word_bits;
            const std::size_t take = std::min(word_bits - off, hi - lo);
            word_type bits = words_[w] >> off;
            if (take < word_bits) bits &= (word_type{1} << take) - 1;
            c += static_cast<std::size_t>(std::popcount(bits));
            lo += take;
        }
        return c;
    }

    /// Length of the all-ones run starting at `lo`, capped at `hi`.
    [[nodiscard]] std::size_t leading_ones(std::size_t lo, std::size_t hi) const noexcept {
        std::size_t run = 0;
        while (lo < hi) {
            const std::size_t w = lo / word_bits, off = lo % word_bits;
            const std::size_t take = std::min(word_bits - off, hi - lo);
            const auto r = static_cast<std::size_t>(std::countr_one(words_[w] >> off));
            if (r < take) return run + r;
            run += take;
            lo += take;
        }
        return run;
    }

    [[nodiscard]] std::string to_string() const {
        std::string s(n_, '0');
        for (std::size_t i = 0; i < n_; ++i)
            if (test(i)) s[i] = '1';
        return s;
    }

    friend bool operator==(const BitString&, const BitString&) = default;

private:
    void clear_tail() noexcept {
        if (const std::size_t r = n_ % word_bits; r != 0 && !words_.empty())
            words_.back() &= (word_type{1} << r) - 1;
    }

    std::size_t n_ = 0;
    std::vector<word_type> words_;
};

[[nodiscard]] inline std::size_t hamming_distance(const BitString& a, const BitString& b) {
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += a.test(i) != b.test(i);
    return d;
}

} // namespace sswm
