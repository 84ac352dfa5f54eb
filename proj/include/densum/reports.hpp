#pragma once

// Report builders shared by the CLI and the tests. Each experiment produces
// a Table; rendering to CSV or JSON is byte-deterministic for a fixed
// configuration, independent of thread count. The CLI adds nothing numeric
// on top of these, which a test asserts by byte comparison.

#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "densum/arith.hpp"
#include "densum/explorer.hpp"
#include "densum/paircorr.hpp"
#include "densum/psets.hpp"
#include "densum/sieve.hpp"
#include "densum/sumset.hpp"

#include "json.hpp"

namespace densum::reports {

// 12 significant digits for every real-valued column
inline std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline std::string format_u64(uint64_t v) { return std::to_string(v); }

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows; // cells; "" renders as empty/null

    std::string to_csv() const {
        std::string out;
        for (size_t i = 0; i < columns.size(); ++i) {
            if (i) out += ',';
            out += columns[i];
        }
        out += '\n';
        for (const auto& row : rows) {
            for (size_t i = 0; i < row.size(); ++i) {
                if (i) out += ',';
                out += row[i];
            }
            out += '\n';
        }
        return out;
    }

    std::string to_json() const {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& row : rows) {
            nlohmann::ordered_json rec = nlohmann::ordered_json::object();
            for (size_t i = 0; i < columns.size(); ++i) {
                if (row[i].empty()) {
                    rec[columns[i]] = nullptr;
                } else {
                    rec[columns[i]] = row[i]; // cells stay strings so JSON mirrors CSV exactly
                }
            }
            arr.push_back(std::move(rec));
        }
        return arr.dump(2) + "\n";
    }
};

enum class OutputFormat { csv, json };

inline std::string render(const Table& t, OutputFormat f) {
    return f == OutputFormat::csv ? t.to_csv() : t.to_json();
}

// Checkpoint schedule: log10-spaced decades or an explicit list.
struct Checkpoints {
    bool log10 = true;
    std::vector<uint64_t> explicit_xs;

    static Checkpoints parse(const std::string& text) {
        Checkpoints c;
        if (text == "log10") return c;
        c.log10 = false;
        std::string cur;
        for (char ch : text + ",") {
            if (ch == ',') {
                if (!cur.empty()) {
                    c.explicit_xs.push_back(static_cast<uint64_t>(std::stod(cur)));
                    cur.clear();
                }
            } else {
                cur += ch;
            }
        }
        if (c.explicit_xs.empty())
            throw std::invalid_argument("checkpoints: expected `log10` or a comma list");
        return c;
    }

    // decades 10^k in [min_x, limit], plus the limit itself
    std::vector<uint64_t> materialize(uint64_t limit, uint64_t min_x = 100) const {
        if (!log10) return explicit_xs;
        std::vector<uint64_t> xs;
        for (uint64_t x = 1; x <= limit / 10; x *= 10)
            if (x * 10 >= min_x) xs.push_back(x * 10);
        if (xs.empty() || xs.back() != limit) {
            if (limit >= min_x) xs.push_back(limit);
        }
        return xs;
    }
};

struct RunConfig {
    uint64_t limit = 1'000'000;
    Checkpoints checkpoints;
    OutputFormat format = OutputFormat::csv;
    unsigned threads = 1;

    SieveOptions sieve_options() const { return SieveOptions{uint64_t(1) << 20, threads}; }
};

// named membership set used by several subcommands
inline Bitmap select_set(const std::string& name, uint64_t limit, const SieveOptions& opt) {
    return resolve_setspec(SetSpec::parse(name), limit, opt);
}

// ---------------------------------------------------------------------------
// Per-subcommand builders
// ---------------------------------------------------------------------------

// x,count: prime counts at checkpoints
inline Table sieve_report(const RunConfig& cfg) {
    PrimeTable t = sieve_primes(cfg.limit, cfg.sieve_options());
    Table out;
    out.columns = {"x", "count"};
    for (uint64_t x : cfg.checkpoints.materialize(cfg.limit))
        out.rows.push_back({format_u64(x), format_u64(count_upto(t, x))});
    return out;
}

// x,count,normalized for a named set; optionally drop prime squares from P2
inline Table classify_report(const RunConfig& cfg, const std::string& set_name,
                             bool exclude_prime_squares = false) {
    if (set_name != "primes" && set_name != "p2" && set_name != "p2star")
        throw std::invalid_argument("classify: --set must be p2, p2star or primes");
    SieveOptions opt = cfg.sieve_options();
    PrimeTable primes = sieve_primes(cfg.limit, opt);
    Bitmap set;
    if (set_name == "primes") {
        set = primes.bits();
    } else {
        ClassifiedSet cs = classify(primes, opt);
        set = set_name == "p2" ? cs.p2() : cs.p2star();
    }
    Table out;
    out.columns = {"x", "count", "normalized"};
    for (const auto& rec : checkpoint_report(set, cfg.checkpoints.materialize(cfg.limit))) {
        uint64_t count = rec.count;
        double norm = rec.normalized;
        if (exclude_prime_squares && set_name == "p2") {
            count -= prime_squares_upto(primes, rec.x);
            norm = normalized_count(rec.x, count);
        }
        out.rows.push_back({format_u64(rec.x), format_u64(count), format_real(norm)});
    }
    return out;
}

// x,sumset_count,rep_sum,rep_square_sum,cs_bound,density
inline Table density_report(const RunConfig& cfg, const std::string& set_name) {
    SieveOptions opt = cfg.sieve_options();
    Bitmap set = select_set(set_name, cfg.limit, opt);
    Bitmap acc = sumset_bitmap(cfg.limit, set);
    Table out;
    out.columns = {"x", "sumset_count", "rep_sum", "rep_square_sum", "cs_bound", "density"};
    for (uint64_t x : cfg.checkpoints.materialize(cfg.limit)) {
        uint64_t sc = acc.count_upto(x);
        uint64_t rs = rep_sum(x, set);
        uint64_t rss = rep_square_sum(x, set);
        std::string cs = rs == 0 ? "" : format_real(static_cast<double>(rs) *
                                                    static_cast<double>(rs) /
                                                    static_cast<double>(rss));
        out.rows.push_back({format_u64(x), format_u64(sc), format_u64(rs), format_u64(rss), cs,
                            format_real(static_cast<double>(sc) / static_cast<double>(x))});
    }
    return out;
}

// x,rep_sum,product_lb,rep_square_sum,cs_bound: product_lb is the coarse
// first-moment bound 2^P(x/2) * P2*(x/2), reported next to the exact rep_sum
// so the slack between them stays visible.
inline Table moments_report(const RunConfig& cfg, const std::string& set_name,
                            bool verify_direct = false) {
    SieveOptions opt = cfg.sieve_options();
    Bitmap set = select_set(set_name, cfg.limit, opt);
    Table out;
    out.columns = {"x", "rep_sum", "product_lb", "rep_square_sum", "cs_bound"};
    for (uint64_t x : cfg.checkpoints.materialize(cfg.limit)) {
        uint64_t rs = rep_sum(x, set);
        uint64_t rss = rep_square_sum(x, set);
        if (verify_direct) {
            RepCounts rc = rep_counts_direct(x, set);
            uint64_t direct_rs = 0, direct_rss = 0;
            for (uint64_t n = 0; n <= rc.x; ++n) {
                direct_rs += rc.r[n];
                direct_rss += static_cast<uint64_t>(rc.r[n]) * rc.r[n];
            }
            if (direct_rs != rs || direct_rss != rss)
                throw VerificationError("moments: direct counters disagree with moment "
                                        "identities at x = " + std::to_string(x));
        }
        uint64_t exps_half = exponent_set(x / 2).size();
        uint64_t product_lb = exps_half * set.count_upto(x / 2);
        std::string cs = rs == 0 ? "" : format_real(static_cast<double>(rs) *
                                                    static_cast<double>(rs) /
                                                    static_cast<double>(rss));
        out.rows.push_back({format_u64(x), format_u64(rs), format_u64(product_lb),
                            format_u64(rss), cs});
    }
    return out;
}

struct Range {
    uint64_t a = 0, b = 0, step = 1;

    static Range parse(const std::string& text) {
        Range r;
        size_t c1 = text.find(':');
        if (c1 == std::string::npos) {
            r.a = r.b = static_cast<uint64_t>(std::stod(text));
            return r;
        }
        size_t c2 = text.find(':', c1 + 1);
        r.a = static_cast<uint64_t>(std::stod(text.substr(0, c1)));
        if (c2 == std::string::npos) {
            r.b = static_cast<uint64_t>(std::stod(text.substr(c1 + 1)));
        } else {
            r.b = static_cast<uint64_t>(std::stod(text.substr(c1 + 1, c2 - c1 - 1)));
            r.step = static_cast<uint64_t>(std::stod(text.substr(c2 + 1)));
        }
        if (r.step == 0) throw std::invalid_argument("range: step must be positive");
        return r;
    }

    std::vector<uint64_t> values() const {
        std::vector<uint64_t> v;
        for (uint64_t n = a; n <= b; n += step) v.push_back(n);
        return v;
    }
};

// x,N,count,sigma,normalized: one row per offset. raw mode drops the
// normalization columns and accepts odd offsets.
inline Table pairs_report(const RunConfig& cfg, const Range& offsets,
                          const std::string& set_name, bool raw = false) {
    SieveOptions opt = cfg.sieve_options();
    Bitmap set = select_set(set_name, cfg.limit, opt);
    Table out;
    if (raw) {
        out.columns = {"x", "N", "count"};
        for (uint64_t n : offsets.values())
            out.rows.push_back({format_u64(cfg.limit), format_u64(n),
                                format_u64(count_pairs(cfg.limit, n, set))});
        return out;
    }
    out.columns = {"x", "N", "count", "sigma", "normalized"};
    for (uint64_t n : offsets.values()) {
        PairReport rep = pair_ratio(cfg.limit, n, set);
        out.rows.push_back({format_u64(rep.x), format_u64(rep.n), format_u64(rep.count),
                            format_real(rep.sigma.to_double()), format_real(rep.normalized)});
    }
    return out;
}

// x,k1,l1,k2,l2,count,sigma,normalized
inline Table primepairs_report(const RunConfig& cfg, const LinearFormPair& f) {
    uint128_t need = std::max(static_cast<uint128_t>(f.k1) * cfg.limit + f.l1,
                              static_cast<uint128_t>(f.k2) * cfg.limit + f.l2);
    if (need > kMaxTableLimit)
        throw std::invalid_argument("primepairs: form values at x exceed the prime table cap");
    PrimeTable primes = sieve_primes(std::max<uint64_t>(static_cast<uint64_t>(need), 2),
                                     cfg.sieve_options());
    PrimePairCount r = prime_pair_count(cfg.limit, f, primes);
    Table out;
    out.columns = {"x", "k1", "l1", "k2", "l2", "count", "sigma", "normalized"};
    out.rows.push_back({format_u64(cfg.limit), format_u64(f.k1), format_u64(f.l1),
                        format_u64(f.k2), format_u64(f.l2), format_u64(r.count),
                        format_real(r.sigma.to_double()),
                        r.normalized ? format_real(*r.normalized) : ""});
    return out;
}

// d,e: orders of 2 for odd d in the range
inline Table order_report(const Range& ds) {
    Table out;
    out.columns = {"d", "e"};
    for (uint64_t d : ds.values())
        out.rows.push_back({format_u64(d), format_u64(mult_order2(d))});
    return out;
}

// K,W_dp,W_scan,D,ratio_to_logK: rows for K = 1..k_top. mode selects which
// estimator columns are filled; ratio_to_logK uses W_dp when available.
inline Table wseries_report(unsigned k_top, const std::string& mode, uint64_t scan_limit,
                            const FactorTable* table = nullptr,
                            unsigned k_max = kDefaultWKMax) {
    bool want_dp = mode == "dp" || mode == "both";
    bool want_scan = mode == "scan" || mode == "both";
    if (!want_dp && !want_scan)
        throw std::invalid_argument("wseries: --mode must be dp, scan or both");
    std::optional<WScanBuckets> buckets;
    if (want_scan) buckets = w_scan_by_order(k_top, scan_limit);
    Table out;
    out.columns = {"K", "W_dp", "W_scan", "D", "ratio_to_logK"};
    Rational scan_prefix(0);
    for (unsigned k = 1; k <= k_top; ++k) {
        std::string dp_cell, scan_cell, ratio_cell;
        double ratio_source = 0;
        bool have_ratio = false;
        if (want_dp) {
            SeriesEstimate dp = w_dp(k, table, k_max);
            dp_cell = format_real(dp.value);
            ratio_source = dp.value;
            have_ratio = true;
        }
        if (want_scan) {
            scan_prefix += buckets->sums[k];
            double v = scan_prefix.to_double();
            scan_cell = format_real(v);
            if (!have_ratio) { ratio_source = v; have_ratio = true; }
        }
        if (k >= 2 && have_ratio)
            ratio_cell = format_real(ratio_source / std::log(static_cast<double>(k)));
        out.rows.push_back({format_u64(k), dp_cell, scan_cell,
                            want_scan ? format_u64(scan_limit) : "", ratio_cell});
    }
    return out;
}

// k,closed,trunc,error_bound,k_times_closed: the last column monitors the
// k^(-2/3)-style decay without asserting it.
inline Table innersum_report(unsigned k_top, uint64_t dp_limit) {
    Table out;
    out.columns = {"k", "closed", "trunc", "error_bound", "k_times_closed"};
    for (uint64_t k = 1; k <= k_top; ++k) {
        double closed = inner_sum_closed(k);
        SeriesEstimate tr = inner_sum_trunc(k, dp_limit);
        out.rows.push_back({format_u64(k), format_real(closed), format_real(tr.value),
                            format_real(*tr.error_bound),
                            format_real(static_cast<double>(k) * closed)});
    }
    return out;
}

// Dd,Dp,partial_sum: halving ladder up to (Dd, Dp) so convergence deltas
// are visible in one report
inline Table series2_report(uint64_t dd_limit, uint64_t dp_limit) {
    Table out;
    out.columns = {"Dd", "Dp", "partial_sum"};
    std::vector<std::pair<uint64_t, uint64_t>> ladder;
    for (int shift = 3; shift >= 0; --shift) {
        uint64_t dd = dd_limit >> shift, dp = dp_limit >> shift;
        if (dd == 0 || dp == 0) continue;
        if (!ladder.empty() && ladder.back() == std::make_pair(dd, dp)) continue;
        ladder.emplace_back(dd, dp);
    }
    for (auto [dd, dp] : ladder) {
        SeriesEstimate est = double_series_partial(dd, dp);
        out.rows.push_back({format_u64(dd), format_u64(dp), format_real(est.value)});
    }
    return out;
}

// x,ratio,density,c_exceeded
inline Table conjecture_report(const RunConfig& cfg, const SetSpec& a, const SetSpec& b,
                               double c) {
    SieveOptions opt = cfg.sieve_options();
    Bitmap a_set = resolve_setspec(a, 62, opt);
    Bitmap b_set = resolve_setspec(b, cfg.limit, opt);
    Bitmap acc = general_sumset_bitmap(cfg.limit, a_set, b_set);
    Table out;
    out.columns = {"x", "ratio", "density", "c_exceeded"};
    for (uint64_t x : cfg.checkpoints.materialize(cfg.limit, 4)) {
        double ratio = hypothesis_ratio(x, a_set, b_set);
        double density = static_cast<double>(acc.count_upto(x)) / static_cast<double>(x);
        out.rows.push_back({format_u64(x), format_real(ratio), format_real(density),
                            ratio > c ? "1" : "0"});
    }
    return out;
}

} // namespace densum::reports
