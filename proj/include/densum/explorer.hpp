#pragma once

// Declarative set specs and the two probes they feed:
//   hypothesis_ratio       A(log x / log 2) * B(x) / x
//   general_density  |{n <= x : n = 2^a + b, a in A, b in B}| / x
// Exponents a may be any positive integers; only 2^a <= x - 1 contributes.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "densum/bitmap.hpp"
#include "densum/errors.hpp"
#include "densum/psets.hpp"
#include "densum/sieve.hpp"

namespace densum {

enum class SetKind { primes, semiprimes, p2, p2star, naturals, squares, file };

struct SetSpec {
    SetKind kind = SetKind::primes;
    std::string path; // for SetKind::file

    static SetSpec parse(const std::string& text) {
        if (text == "primes") return {SetKind::primes, {}};
        if (text == "semiprimes") return {SetKind::semiprimes, {}};
        if (text == "p2") return {SetKind::p2, {}};
        if (text == "p2star") return {SetKind::p2star, {}};
        if (text == "naturals") return {SetKind::naturals, {}};
        if (text == "squares") return {SetKind::squares, {}};
        if (text.rfind("file:", 0) == 0) return {SetKind::file, text.substr(5)};
        throw std::invalid_argument(
            "set spec '" + text +
            "' not recognized; expected primes|semiprimes|p2|p2star|naturals|squares|file:PATH");
    }

    std::string to_string() const {
        switch (kind) {
            case SetKind::primes: return "primes";
            case SetKind::semiprimes: return "semiprimes";
            case SetKind::p2: return "p2";
            case SetKind::p2star: return "p2star";
            case SetKind::naturals: return "naturals";
            case SetKind::squares: return "squares";
            case SetKind::file: return "file:" + path;
        }
        return "?";
    }
};

namespace detail {

// strictly increasing positive integers, whitespace-separated; values beyond
// `limit` are clamped away but still order-checked
inline Bitmap parse_member_file(std::istream& is, uint64_t limit) {
    Bitmap out(limit);
    uint64_t prev = 0;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string tok;
        while (ls >> tok) {
            uint64_t v = 0;
            try {
                size_t used = 0;
                v = std::stoull(tok, &used);
                if (used != tok.size()) throw std::invalid_argument("");
            } catch (const std::exception&) {
                throw ParseError(lineno, "token '" + tok + "' is not a positive integer");
            }
            if (v == 0) throw ParseError(lineno, "members must be positive");
            if (v <= prev)
                throw ParseError(lineno, "members must be strictly increasing (" +
                                             std::to_string(v) + " after " + std::to_string(prev) +
                                             ")");
            prev = v;
            if (v <= limit) out.set(v);
        }
    }
    return out;
}

} // namespace detail

inline Bitmap resolve_setspec(const SetSpec& spec, uint64_t limit, const SieveOptions& opt = {}) {
    switch (spec.kind) {
        case SetKind::primes: {
            if (limit < 2) return Bitmap(limit);
            return sieve_primes(limit, opt).bits();
        }
        case SetKind::p2:
        case SetKind::p2star:
        case SetKind::semiprimes: {
            if (limit < 4) {
                // P2 and P2* both start {2, 3}; no semiprime exists below 4
                Bitmap small(limit);
                if (spec.kind != SetKind::semiprimes) {
                    if (limit >= 2) small.set(2);
                    if (limit >= 3) small.set(3);
                }
                return small;
            }
            ClassifiedSet cs = classify(limit, opt);
            if (spec.kind == SetKind::p2) return cs.p2();
            if (spec.kind == SetKind::p2star) return cs.p2star();
            Bitmap semis = cs.p2();
            const Bitmap primes = sieve_primes(limit, opt).bits();
            auto sw = semis.words();
            auto pw = primes.words();
            for (size_t i = 0; i < sw.size(); ++i) sw[i] &= ~pw[i];
            return semis;
        }
        case SetKind::naturals: {
            Bitmap all(limit);
            if (limit >= 1) all.set_range(1, limit);
            return all;
        }
        case SetKind::squares: {
            Bitmap sq(limit);
            for (uint64_t i = 1; i * i <= limit; ++i) sq.set(i * i);
            return sq;
        }
        case SetKind::file: {
            std::ifstream in(spec.path);
            if (!in)
                throw std::invalid_argument("set file '" + spec.path + "' cannot be opened");
            return detail::parse_member_file(in, limit);
        }
    }
    throw std::logic_error("resolve_setspec: unreachable");
}

// Sumset {2^a + b : a in A, b in B} restricted to [1, x]. As with the prime
// sumset, membership of n is x-independent, so prefix counts of one bitmap
// serve every smaller x.
inline Bitmap general_sumset_bitmap(uint64_t x, const Bitmap& a_set, const Bitmap& b_set) {
    Bitmap acc(x);
    uint64_t a_top = std::min<uint64_t>(a_set.limit(), 62);
    for (uint64_t a = 1; a <= a_top; ++a) {
        if (!a_set.test(a)) continue;
        uint64_t shift = uint64_t(1) << a;
        if (shift >= x) break; // no room for b >= 1
        acc.or_shifted(b_set, shift, x - shift);
    }
    return acc;
}

inline double general_density(uint64_t x, const Bitmap& a_set, const Bitmap& b_set) {
    if (x < 4) throw std::invalid_argument("general_density: x must be at least 4");
    return static_cast<double>(general_sumset_bitmap(x, a_set, b_set).count_upto(x)) /
           static_cast<double>(x);
}

// A(log x / log 2) * B(x) / x with floor semantics at the real evaluation
// point. a_set must be resolved at least up to floor(log2 x).
inline double hypothesis_ratio(uint64_t x, const Bitmap& a_set, const Bitmap& b_set) {
    if (x < 4) throw std::invalid_argument("hypothesis_ratio: x must be at least 4");
    uint64_t t = static_cast<uint64_t>(std::floor(std::log2(static_cast<double>(x))));
    if (t > a_set.limit())
        throw std::out_of_range("hypothesis_ratio: A resolved only to " +
                                std::to_string(a_set.limit()) + " but log2(x) reaches " +
                                std::to_string(t));
    uint64_t ca = a_set.count_upto(t);
    uint64_t cb = count_upto(b_set, x);
    return static_cast<double>(ca) * static_cast<double>(cb) / static_cast<double>(x);
}

inline double hypothesis_ratio(const SetSpec& a, const SetSpec& b, uint64_t x) {
    Bitmap a_set = resolve_setspec(a, 62);
    Bitmap b_set = resolve_setspec(b, x);
    return hypothesis_ratio(x, a_set, b_set);
}

inline double general_density(const SetSpec& a, const SetSpec& b, uint64_t x) {
    Bitmap a_set = resolve_setspec(a, 62);
    Bitmap b_set = resolve_setspec(b, x);
    return general_density(x, a_set, b_set);
}

} // namespace densum
