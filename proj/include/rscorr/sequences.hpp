#pragma once

// Rudin-Shapiro words and the induced two-letter sequence, generated by
// every available route: digit counting, constant-length substitution,
// non-local even/odd substitution, and the sliding block code.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rscorr {

enum class Alphabet : std::uint8_t { quaternary, abcd, binary };

constexpr std::size_t alphabet_size(Alphabet a) noexcept { return a == Alphabet::binary ? 2 : 4; }

constexpr char letter_char(Alphabet a, std::uint8_t letter) noexcept {
    switch (a) {
        case Alphabet::quaternary: return static_cast<char>('0' + letter);
        case Alphabet::abcd: return static_cast<char>('A' + letter);
        case Alphabet::binary: return static_cast<char>('a' + letter);
    }
    return '?';
}

inline std::uint8_t parse_letter(Alphabet a, char c) {
    int v = -1;
    switch (a) {
        case Alphabet::quaternary: v = c - '0'; break;
        case Alphabet::abcd: v = c - 'A'; break;
        case Alphabet::binary: v = c - 'a'; break;
    }
    if (v < 0 || static_cast<std::size_t>(v) >= alphabet_size(a))
        throw std::invalid_argument(std::string("letter outside alphabet: ") + c);
    return static_cast<std::uint8_t>(v);
}

/// Finite word over one of the alphabets; index 0 is position 0 of the
/// one-sided sequence.
struct Word {
    Alphabet alphabet = Alphabet::quaternary;
    std::vector<std::uint8_t> letters;

    static Word from_string(Alphabet a, std::string_view s) {
        Word w{a, {}};
        w.letters.reserve(s.size());
        for (char c : s) w.letters.push_back(parse_letter(a, c));
        return w;
    }

    std::size_t size() const noexcept { return letters.size(); }

    std::string to_string() const {
        std::string s;
        s.reserve(letters.size());
        for (auto l : letters) s.push_back(letter_char(alphabet, l));
        return s;
    }

    Word prefix(std::size_t n) const {
        Word w{alphabet, {}};
        w.letters.assign(letters.begin(), letters.begin() + static_cast<std::ptrdiff_t>(std::min(n, size())));
        return w;
    }

    friend bool operator==(const Word&, const Word&) = default;
};

/// +1 / -1 per position.
using SignWord = std::vector<std::int8_t>;

class SubstitutionRule {
public:
    static SubstitutionRule local(Alphabet a, const std::vector<std::string>& images) {
        SubstitutionRule r;
        r.alphabet_ = a;
        r.even_ = r.parse_images(images);
        r.odd_ = r.even_;
        r.local_ = true;
        return r;
    }

    /// Rule whose image depends on the parity of the letter's absolute position.
    static SubstitutionRule non_local(Alphabet a, const std::vector<std::string>& even,
                                      const std::vector<std::string>& odd) {
        SubstitutionRule r;
        r.alphabet_ = a;
        r.even_ = r.parse_images(even);
        r.odd_ = r.parse_images(odd);
        if (r.even_.front().size() != r.odd_.front().size())
            throw std::invalid_argument("even and odd images differ in length");
        r.local_ = false;
        return r;
    }

    Alphabet alphabet() const noexcept { return alphabet_; }
    std::size_t length() const noexcept { return even_.front().size(); }
    bool is_local() const noexcept { return local_; }

    const std::vector<std::uint8_t>& image(std::uint8_t letter, bool odd_position) const {
        if (letter >= even_.size()) throw std::invalid_argument("letter outside alphabet");
        return odd_position ? odd_[letter] : even_[letter];
    }

private:
    std::vector<std::vector<std::uint8_t>> parse_images(const std::vector<std::string>& images) const {
        if (images.size() != alphabet_size(alphabet_)) throw std::invalid_argument("one image per letter required");
        std::vector<std::vector<std::uint8_t>> out;
        for (const auto& img : images) {
            if (img.empty() || (!out.empty() && img.size() != out.front().size()))
                throw std::invalid_argument("substitution must have constant length");
            out.push_back(Word::from_string(alphabet_, img).letters);
        }
        return out;
    }

    Alphabet alphabet_ = Alphabet::quaternary;
    std::vector<std::vector<std::uint8_t>> even_, odd_;
    bool local_ = true;
};

/// k-fold image of `seed`. For non-local rules, `start_parity` is the parity
/// of the absolute position of the seed's first letter.
inline Word substitution_iterate(const SubstitutionRule& rule, Word seed, unsigned k, unsigned start_parity = 0) {
    if (seed.alphabet != rule.alphabet()) throw std::invalid_argument("seed alphabet does not match rule");
    for (auto l : seed.letters)
        if (l >= alphabet_size(rule.alphabet())) throw std::invalid_argument("letter outside alphabet");
    unsigned parity = start_parity & 1U;
    for (unsigned it = 0; it < k; ++it) {
        Word next{seed.alphabet, {}};
        next.letters.reserve(seed.size() * rule.length());
        for (std::size_t i = 0; i < seed.size(); ++i) {
            const auto& img = rule.image(seed.letters[i], ((i + parity) & 1U) != 0);
            next.letters.insert(next.letters.end(), img.begin(), img.end());
        }
        parity = static_cast<unsigned>((parity * rule.length()) & 1U);
        seed = std::move(next);
    }
    return seed;
}

inline SubstitutionRule rudin_shapiro_rule() {
    return SubstitutionRule::local(Alphabet::quaternary, {"02", "32", "01", "31"});
}

inline SubstitutionRule rudin_shapiro_binary_rule() {
    return SubstitutionRule::non_local(Alphabet::binary, {"aaab", "bbba"}, {"aaba", "bbab"});
}

inline SubstitutionRule induced_rule() {
    return SubstitutionRule::local(Alphabet::abcd, {"BC", "BD", "AD", "AC"});
}

inline SubstitutionRule induced_binary_rule() {
    return SubstitutionRule::non_local(Alphabet::binary, {"bbab", "bbaa"}, {"baaa", "baab"});
}

/// phi: {0,2} -> a, {1,3} -> b.
inline Word code_quaternary(const Word& w) {
    if (w.alphabet != Alphabet::quaternary) throw std::invalid_argument("expected a quaternary word");
    Word out{Alphabet::binary, {}};
    out.letters.reserve(w.size());
    for (auto l : w.letters) out.letters.push_back(static_cast<std::uint8_t>(l & 1U));
    return out;
}

/// {A,C} -> a, {B,D} -> b.
inline Word code_abcd(const Word& w) {
    if (w.alphabet != Alphabet::abcd) throw std::invalid_argument("expected a word over ABCD");
    Word out{Alphabet::binary, {}};
    out.letters.reserve(w.size());
    for (auto l : w.letters) out.letters.push_back(static_cast<std::uint8_t>(l & 1U));
    return out;
}

/// a -> +1, b -> -1.
inline SignWord to_signs(const Word& w) {
    if (w.alphabet != Alphabet::binary) throw std::invalid_argument("expected a binary word");
    SignWord s;
    s.reserve(w.size());
    for (auto l : w.letters) s.push_back(l == 0 ? std::int8_t{1} : std::int8_t{-1});
    return s;
}

namespace detail {

// Grows the one-sided fixed point from a prefix-stable seed letter.
inline Word grow_fixed_point(const SubstitutionRule& rule, Word seed, std::size_t len) {
    unsigned parity = 0;
    while (seed.size() < len) {
        seed = substitution_iterate(rule, std::move(seed), 1, parity);
        parity = static_cast<unsigned>((parity * rule.length()) & 1U);
    }
    return seed.prefix(len);
}

}  // namespace detail

/// (-1)^{b_n}, b_n = number of adjacent "11" pairs in the binary expansion of n.
constexpr int rs_letter(std::uint64_t n) noexcept {
    return (std::popcount(n & (n >> 1)) & 1) != 0 ? -1 : 1;
}

/// Prefix of the quaternary fixed point with letter 0 at position 0.
inline Word rs_quaternary_word(std::size_t len) {
    return detail::grow_fixed_point(rudin_shapiro_rule(), Word::from_string(Alphabet::quaternary, "0"), len);
}

inline SignWord rs_binary_word(std::size_t len) { return to_signs(code_quaternary(rs_quaternary_word(len))); }

/// Same prefix, grown with the non-local even/odd binary rule.
inline SignWord rs_binary_word_nonlocal(std::size_t len) {
    return to_signs(detail::grow_fixed_point(rudin_shapiro_binary_rule(), Word::from_string(Alphabet::binary, "a"), len));
}

/// Sliding block map on legal two-letter subwords:
/// 01,32 -> A; 02,31 -> B; 10,23 -> C; 20,13 -> D.
inline Word chi_block_code(const Word& w) {
    if (w.alphabet != Alphabet::quaternary) throw std::invalid_argument("expected a quaternary word");
    // table[x][y] for the pair xy; 0xFF marks an illegal pair
    constexpr std::uint8_t X = 0xFF;
    constexpr std::uint8_t table[4][4] = {
        {X, 0, 1, X},
        {2, X, X, 3},
        {3, X, X, 2},
        {X, 1, 0, X},
    };
    Word out{Alphabet::abcd, {}};
    if (w.size() < 2) return out;
    out.letters.reserve(w.size() - 1);
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
        const auto a = w.letters[i], b = w.letters[i + 1];
        if (a > 3 || b > 3 || table[a][b] == X)
            throw std::invalid_argument(std::string("illegal pair ") + letter_char(Alphabet::quaternary, a) +
                                        letter_char(Alphabet::quaternary, b));
        out.letters.push_back(table[a][b]);
    }
    return out;
}

/// Sign of the induced binary fixed point:
/// w_{4m} = -1, w_{4m+1} = (-1)^{m+1}, w_{4m+2} = 1, w_{4m+3} = (-1)^{m+1} w_m.
inline int induced_letter(std::uint64_t n) noexcept {
    int sign = 1;
    for (;;) {
        const std::uint64_t m = n >> 2;
        const int odd_m = static_cast<int>(m & 1U);
        switch (n & 3U) {
            case 0: return -sign;
            case 1: return odd_m ? sign : -sign;
            case 2: return sign;
            default:
                if (!odd_m) sign = -sign;
                n = m;
        }
    }
}

/// Induced word via the substitution on {A,B,C,D} grown from B, then coded.
inline SignWord induced_word(std::size_t len) {
    return to_signs(code_abcd(detail::grow_fixed_point(induced_rule(), Word::from_string(Alphabet::abcd, "B"), len)));
}

/// Induced word via the sliding block code of the quaternary RS word.
inline SignWord induced_word_via_chi(std::size_t len) {
    return to_signs(code_abcd(chi_block_code(rs_quaternary_word(len + 1))));
}

/// Induced word via the non-local even/odd binary rule.
inline SignWord induced_word_nonlocal(std::size_t len) {
    return to_signs(detail::grow_fixed_point(induced_binary_rule(), Word::from_string(Alphabet::binary, "b"), len));
}

/// One bit per sign (+1 -> 0, -1 -> 1), least significant bit first.
inline std::vector<std::uint8_t> pack_signs(std::span<const std::int8_t> signs) {
    std::vector<std::uint8_t> bytes((signs.size() + 7) / 8, 0);
    for (std::size_t i = 0; i < signs.size(); ++i)
        if (signs[i] < 0) bytes[i / 8] |= static_cast<std::uint8_t>(1U << (i % 8));
    return bytes;
}

inline SignWord unpack_signs(std::span<const std::uint8_t> bytes, std::size_t len) {
    if (len > bytes.size() * 8) throw std::invalid_argument("not enough bytes for requested length");
    SignWord s(len);
    for (std::size_t i = 0; i < len; ++i) s[i] = ((bytes[i / 8] >> (i % 8)) & 1U) ? std::int8_t{-1} : std::int8_t{1};
    return s;
}

inline std::string format_signs_csv(std::span<const std::int8_t> signs) {
    std::string out;
    out.reserve(signs.size() * 3);
    for (std::size_t i = 0; i < signs.size(); ++i) {
        if (i) out.push_back(',');
        out += signs[i] > 0 ? "1" : "-1";
    }
    return out;
}

}  // namespace rscorr
