#pragma once

// The printed 3- and 4-point renormalisation tables as text fixtures, a
// parser for them, and a check against the generic derivation.
//
// Fixture grammar:
//   equation := kind '(' residues ')' '=' ( '0' | coef '[' sum ']' )
//   coef     := '1/2' | '1/4'
//   sum      := ['+'|'-'] term { ('+'|'-') term }
//   term     := { factor } target
//   factor   := parity | '(' poly ')'
//   poly     := ['+'|'-'] mono { ('+'|'-') mono },  mono := '1' | parity
//   parity   := 'p(' ( 'M' | 'mK' { '+' 'mK' } ) ')'      meaning (-1)^{...}
//   target   := kind '(' arg { ',' arg } ')',  arg := 'mK' [ '+1' ]

#include "rscorr/renorm.hpp"

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rscorr {

inline const std::vector<std::string_view>& three_point_fixtures() {
    static const std::vector<std::string_view> table = {
        "eta(0,0) = 1/2 [ eta(m1,m2) ]",
        "eta(0,1) = 1/4 [ eta(m1,m2) + p(m2)(1-p(m1)) theta(m1,m2) + p(m1) eta(m1,m2+1) ]",
        "eta(0,2) = 1/2 [ p(m1) eta(m1,m2+1) ]",
        "eta(0,3) = 1/4 [ -p(m2) theta(m1,m2) + (1+p(m1)) eta(m1,m2+1) - p(m1+m2) theta(m1,m2+1) ]",
        "eta(1,1) = 1/4 [ (1+p(m1+m2)) eta(m1,m2) + p(m1+m2) theta(m1,m2) - theta(m1+1,m2+1) ]",
        "eta(1,2) = 1/4 [ -p(m1+m2) eta(m1,m2) + p(m2) theta(m1,m2) - p(m1) eta(m1,m2+1) - theta(m1+1,m2+1) ]",
        "eta(1,3) = 1/4 [ -p(m2) theta(m1,m2) + p(m1) theta(m1,m2+1) - p(m1) eta(m1,m2+1) + p(m2) eta(m1+1,m2+1) ]",
        "eta(2,2) = 1/2 [ p(m1+m2) eta(m1,m2) ]",
        "eta(2,3) = 1/4 [ -p(m1+m2) eta(m1,m2) - p(m1) theta(m1,m2+1) + p(m2) eta(m1+1,m2+1) + theta(m1+1,m2+1) ]",
        "eta(3,3) = 1/4 [ p(m1+m2) eta(m1,m2) + eta(m1+1,m2+1) + (1-p(m1+m2)) theta(m1+1,m2+1) ]",
        "theta(0,0) = 1/2 [ p(m1+m2) theta(m1,m2) ]",
        "theta(0,1) = 1/4 [ eta(m1,m2) - p(m2)(1+p(m1)) theta(m1,m2) - p(m1) eta(m1,m2+1) ]",
        "theta(0,2) = 1/2 [ p(m2) theta(m1,m2) ]",
        "theta(0,3) = 1/4 [ -p(m2) theta(m1,m2) + (p(m1)-1) eta(m1,m2+1) + p(m1+m2) theta(m1,m2+1) ]",
        "theta(1,1) = 1/4 [ (1-p(m1+m2)) eta(m1,m2) + p(m1+m2) theta(m1,m2) + theta(m1+1,m2+1) ]",
        "theta(1,2) = 1/4 [ p(m1+m2) eta(m1,m2) + p(m2) theta(m1,m2) - p(m1) eta(m1,m2+1) + theta(m1+1,m2+1) ]",
        "theta(1,3) = 1/4 [ -p(m2) theta(m1,m2) - p(m1) theta(m1,m2+1) - p(m1) eta(m1,m2+1) - p(m2) eta(m1+1,m2+1) ]",
        "theta(2,2) = 1/2 [ theta(m1+1,m2+1) ]",
        "theta(2,3) = 1/4 [ -p(m1+m2) eta(m1,m2) + p(m1) theta(m1,m2+1) - p(m2) eta(m1+1,m2+1) + theta(m1+1,m2+1) ]",
        "theta(3,3) = 1/4 [ p(m1+m2) eta(m1,m2) - eta(m1+1,m2+1) + (1+p(m1+m2)) theta(m1+1,m2+1) ]",
    };
    return table;
}

inline const std::vector<std::string_view>& four_point_fixtures() {
    static const std::vector<std::string_view> table = {
        "eta(0,0,0) = 1/2 [ (1+p(M)) eta(m1,m2,m3) ]",
        "eta(0,0,1) = 1/4 [ (1-p(M)) eta(m1,m2,m3) + p(m3) theta(m1,m2,m3) - p(m1+m2) theta(m1,m2,m3+1) ]",
        "eta(0,0,2) = 0",
        "eta(0,0,3) = 1/4 [ -p(m3) theta(m1,m2,m3) + (1+p(M)) eta(m1,m2,m3+1) + p(m1+m2) theta(m1,m2,m3+1) ]",
        "eta(0,1,1) = 1/4 [ (1+p(m2+m3)+p(M)) eta(m1,m2,m3) + p(m1) eta(m1,m2+1,m3+1) ]",
        "eta(0,1,2) = 1/4 [ -p(m2+m3) eta(m1,m2,m3) + p(m3) theta(m1,m2,m3) - p(m1+m2) theta(m1,m2,m3+1)"
        " + p(m1) eta(m1,m2+1,m3+1) ]",
        "eta(0,1,3) = 1/4 [ -p(m3) theta(m1,m2,m3) + p(m2)(1-p(m1)) theta(m1,m2,m3+1) - p(m1+m3) theta(m1,m2+1,m3+1) ]",
        "eta(0,2,2) = 1/2 [ p(m2+m3) eta(m1,m2,m3) + p(m1) eta(m1,m2+1,m3+1) ]",
        "eta(0,2,3) = 1/4 [ -p(m2+m3) eta(m1,m2,m3) - p(m2) theta(m1,m2,m3+1) + p(m1) eta(m1,m2+1,m3+1)"
        " - p(m1+m3) theta(m1,m2+1,m3+1) ]",
        "eta(0,3,3) = 1/4 [ p(m2+m3) eta(m1,m2,m3) + (1+p(m1)+p(M)) eta(m1,m2+1,m3+1) ]",
        "eta(1,1,1) = 1/4 [ (1-p(M)) eta(m1,m2,m3) + p(M) theta(m1,m2,m3) - theta(m1+1,m2+1,m3+1) ]",
        "eta(1,1,2) = 1/4 [ (p(m3)-p(M)) theta(m1,m2,m3) + p(m1+m2) theta(m1,m2,m3+1) - theta(m1+1,m2+1,m3+1) ]",
        "eta(1,1,3) = 1/4 [ -p(m3) theta(m1,m2,m3) + p(m1+m2) eta(m1,m2,m3+1) + p(m1+m2) theta(m1,m2,m3+1)"
        " + p(m3) eta(m1+1,m2+1,m3+1) ]",
        "eta(1,2,2) = 1/4 [ p(m2+m3) eta(m1,m2,m3) + p(M) theta(m1,m2,m3) - p(m1) eta(m1,m2+1,m3+1)"
        " - theta(m1+1,m2+1,m3+1) ]",
        "eta(1,2,3) = 1/4 [ -p(m2+m3) eta(m1,m2,m3) - p(m1+m2) eta(m1,m2,m3+1) - p(m1) eta(m1,m2+1,m3+1)"
        " + p(m3) eta(m1+1,m2+1,m3+1) ]",
        "eta(1,3,3) = 1/4 [ p(m2+m3) eta(m1,m2,m3) - p(m1) eta(m1,m2+1,m3+1) + p(m1) theta(m1,m2+1,m3+1)"
        " - p(m2+m3) theta(m1+1,m2+1,m3+1) ]",
        "eta(2,2,2) = 0",
        "eta(2,2,3) = 1/4 [ -p(M) theta(m1,m2,m3) + p(m1+m2) eta(m1,m2,m3+1) + p(m3) eta(m1+1,m2+1,m3+1)"
        " + theta(m1+1,m2+1,m3+1) ]",
        "eta(2,3,3) = 1/4 [ p(M) theta(m1,m2,m3) - p(m1) theta(m1,m2+1,m3+1) + (1-p(m2+m3)) theta(m1+1,m2+1,m3+1) ]",
        "eta(3,3,3) = 1/4 [ -p(M) theta(m1,m2,m3) + (1+p(M)) eta(m1+1,m2+1,m3+1) + theta(m1+1,m2+1,m3+1) ]",
        "theta(0,0,0) = 0",
        "theta(0,0,1) = 1/4 [ (1-p(M)) eta(m1,m2,m3) - p(m3) theta(m1,m2,m3) + p(m1+m2) theta(m1,m2,m3+1) ]",
        "theta(0,0,2) = 1/2 [ p(m3) theta(m1,m2,m3) + p(m1+m2) theta(m1,m2,m3+1) ]",
        "theta(0,0,3) = 1/4 [ -p(m3) theta(m1,m2,m3) - (1+p(M)) eta(m1,m2,m3+1) + p(m1+m2) theta(m1,m2,m3+1) ]",
        "theta(0,1,1) = 1/4 [ (1-p(m2+m3)+p(M)) eta(m1,m2,m3) - p(m1) eta(m1,m2+1,m3+1) ]",
        "theta(0,1,2) = 1/4 [ p(m2+m3) eta(m1,m2,m3) + p(m3) theta(m1,m2,m3) - p(m1+m2) theta(m1,m2,m3+1)"
        " - p(m1) eta(m1,m2+1,m3+1) ]",
        "theta(0,1,3) = 1/4 [ -p(m3) theta(m1,m2,m3) - p(m2)(1+p(m1)) theta(m1,m2,m3+1)"
        " + p(m1+m3) theta(m1,m2+1,m3+1) ]",
        "theta(0,2,2) = 0",
        "theta(0,2,3) = 1/4 [ -p(m2+m3) eta(m1,m2,m3) + p(m2) theta(m1,m2,m3+1) + p(m1) eta(m1,m2+1,m3+1)"
        " + p(m1+m3) theta(m1,m2+1,m3+1) ]",
        "theta(0,3,3) = 1/4 [ p(m2+m3) eta(m1,m2,m3) + (-1+p(m1)-p(M)) eta(m1,m2+1,m3+1) ]",
        "theta(1,1,1) = 1/4 [ (1-p(M)) eta(m1,m2,m3) - p(M) theta(m1,m2,m3) + theta(m1+1,m2+1,m3+1) ]",
        "theta(1,1,2) = 1/4 [ (p(m3)+p(M)) theta(m1,m2,m3) + p(m1+m2) theta(m1,m2,m3+1) + theta(m1+1,m2+1,m3+1) ]",
        "theta(1,1,3) = 1/4 [ -p(m3) theta(m1,m2,m3) - p(m1+m2) eta(m1,m2,m3+1) + p(m1+m2) theta(m1,m2,m3+1)"
        " - p(m3) eta(m1+1,m2+1,m3+1) ]",
        "theta(1,2,2) = 1/4 [ p(m2+m3) eta(m1,m2,m3) - p(M) theta(m1,m2,m3) - p(m1) eta(m1,m2+1,m3+1)"
        " + theta(m1+1,m2+1,m3+1) ]",
        "theta(1,2,3) = 1/4 [ -p(m2+m3) eta(m1,m2,m3) + p(m1+m2) eta(m1,m2,m3+1) - p(m1) eta(m1,m2+1,m3+1)"
        " - p(m3) eta(m1+1,m2+1,m3+1) ]",
        "theta(1,3,3) = 1/4 [ p(m2+m3) eta(m1,m2,m3) - p(m1) eta(m1,m2+1,m3+1) - p(m1) theta(m1,m2+1,m3+1)"
        " + p(m2+m3) theta(m1+1,m2+1,m3+1) ]",
        "theta(2,2,2) = 1/2 [ p(M) theta(m1,m2,m3) + theta(m1+1,m2+1,m3+1) ]",
        "theta(2,2,3) = 1/4 [ -p(M) theta(m1,m2,m3) - p(m1+m2) eta(m1,m2,m3+1) - p(m3) eta(m1+1,m2+1,m3+1)"
        " + theta(m1+1,m2+1,m3+1) ]",
        "theta(2,3,3) = 1/4 [ p(M) theta(m1,m2,m3) + p(m1) theta(m1,m2+1,m3+1) + (1-p(m2+m3)) theta(m1+1,m2+1,m3+1) ]",
        "theta(3,3,3) = 1/4 [ -p(M) theta(m1,m2,m3) - (1+p(M)) eta(m1+1,m2+1,m3+1) + theta(m1+1,m2+1,m3+1) ]",
    };
    return table;
}

class FixtureParseError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

namespace detail {

class FixtureParser {
public:
    explicit FixtureParser(std::string_view text) : text_(text) {}

    CollectedEquation parse() {
        CollectedEquation eq;
        eq.lhs = parse_kind_word();
        expect('(');
        for (;;) {
            skip();
            if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
                fail("expected residue");
            eq.residues.push_back(static_cast<std::uint8_t>(text_[pos_++] - '0'));
            if (eq.residues.back() > 3) fail("residue outside 0..3");
            if (accept(')')) break;
            expect(',');
        }
        slots_ = eq.residues.size();
        expect('=');
        skip();
        if (accept('0')) {
            finish();
            return eq;
        }
        int scale = 0;  // coefficient multiplier to reach the common 1/4
        if (accept_word("1/2")) scale = 2;
        else if (accept_word("1/4")) scale = 1;
        else fail("expected 1/2 or 1/4");
        expect('[');
        bool first = true;
        for (;;) {
            skip();
            if (accept(']')) break;
            int sign = 1;
            if (accept('-')) sign = -1;
            else if (!accept('+') && !first) fail("expected + or -");
            first = false;
            parse_term(eq, sign * scale);
        }
        finish();
        return eq;
    }

private:
    using Poly = CollectedEquation::Polynomial;

    void parse_term(CollectedEquation& eq, int coefficient) {
        Poly poly{{0, coefficient}};
        for (;;) {
            skip();
            if (peek_word("p(")) {
                poly = multiply(poly, Poly{{parse_parity(), 1}});
            } else if (accept('(')) {
                poly = multiply(poly, parse_poly());
            } else {
                break;
            }
        }
        const Kind kind = parse_kind_word();
        expect('(');
        std::vector<std::uint8_t> carries;
        for (std::size_t k = 0; k < slots_; ++k) {
            if (k) expect(',');
            if (parse_slot() != k) fail("arguments out of order");
            carries.push_back(accept_word("+1") ? 1 : 0);
        }
        expect(')');
        for (const auto& [mask, c] : poly) eq.add({kind, carries}, mask, c);
    }

    Poly parse_poly() {
        Poly poly;
        bool first = true;
        for (;;) {
            skip();
            if (accept(')')) break;
            int sign = 1;
            if (accept('-')) sign = -1;
            else if (!accept('+') && !first) fail("expected + or - in factor");
            first = false;
            skip();
            std::uint64_t mask = 0;
            if (accept('1')) mask = 0;
            else if (peek_word("p(")) mask = parse_parity();
            else fail("expected 1 or p(...)");
            if ((poly[mask] += sign) == 0) poly.erase(mask);
        }
        return poly;
    }

    std::uint64_t parse_parity() {
        if (!accept_word("p(")) fail("expected p(");
        std::uint64_t mask = 0;
        skip();
        if (accept('M')) {
            mask = (std::uint64_t{1} << slots_) - 1;
        } else {
            for (;;) {
                mask ^= std::uint64_t{1} << parse_slot();
                if (!accept('+')) break;
            }
        }
        expect(')');
        return mask;
    }

    std::size_t parse_slot() {
        skip();
        if (!accept('m')) fail("expected mK");
        if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) fail("expected slot index");
        const auto k = static_cast<std::size_t>(text_[pos_++] - '0');
        if (k < 1 || k > slots_) fail("slot index out of range");
        return k - 1;
    }

    static Poly multiply(const Poly& a, const Poly& b) {
        Poly out;
        for (const auto& [ma, ca] : a)
            for (const auto& [mb, cb] : b)
                if ((out[ma ^ mb] += ca * cb) == 0) out.erase(ma ^ mb);
        return out;
    }

    Kind parse_kind_word() {
        skip();
        if (accept_word("theta")) return Kind::theta;
        if (accept_word("eta")) return Kind::eta;
        fail("expected eta or theta");
    }

    void skip() {
        while (pos_ < text_.size() && text_[pos_] == ' ') ++pos_;
    }
    bool accept(char c) {
        skip();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    bool peek_word(std::string_view w) {
        skip();
        return text_.substr(pos_).starts_with(w);
    }
    bool accept_word(std::string_view w) {
        if (!peek_word(w)) return false;
        pos_ += w.size();
        return true;
    }
    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }
    void finish() {
        skip();
        if (pos_ != text_.size()) fail("trailing input");
    }
    [[noreturn]] void fail(const std::string& what) const {
        throw FixtureParseError(what + " at column " + std::to_string(pos_) + " in: " + std::string(text_));
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t slots_ = 0;
};

}  // namespace detail

inline CollectedEquation parse_fixture(std::string_view text) { return detail::FixtureParser(text).parse(); }

struct AppendixMismatch {
    std::string fixture;
    std::string derived;
};

struct AppendixReport {
    std::size_t checked = 0;
    std::vector<AppendixMismatch> mismatches;
    bool ok() const noexcept { return mismatches.empty(); }
};

inline AppendixReport verify_appendix_tables() {
    AppendixReport report;
    for (const auto* table : {&three_point_fixtures(), &four_point_fixtures()}) {
        for (const auto text : *table) {
            const CollectedEquation printed = parse_fixture(text);
            const CollectedEquation derived = collect(derive_renorm_equation(printed.lhs, printed.residues));
            ++report.checked;
            if (!(printed == derived)) report.mismatches.push_back({std::string(text), derived.to_string()});
        }
    }
    return report;
}

}  // namespace rscorr
