// densum: command-line front end for the density experiments.
//
// One subcommand per experiment; every numeric result comes from the library
// report builders, so CLI output is byte-identical to a direct library call
// with the same configuration. Exit codes: 0 success, 2 usage error,
// 3 verification failure (e.g. a rejected factor table).

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "densum/reports.hpp"

namespace {

using namespace densum;
using namespace densum::reports;

// numeric flags accept scientific notation ("1e6") and plain integers
uint64_t parse_count(const std::string& text) {
    size_t used = 0;
    double v = std::stod(text, &used);
    if (used != text.size() || v < 0 || v > 1.8e19)
        throw CLI::ValidationError("expected a nonnegative count, got '" + text + "'");
    return static_cast<uint64_t>(v);
}

struct CommonFlags {
    std::string limit = "1e6";
    std::string checkpoints = "log10";
    std::string out;
    bool json = false;
    unsigned threads = 1;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool with_limit = true) {
    if (with_limit) cmd->add_option("--limit", f.limit, "upper limit x (scientific ok)");
    cmd->add_option("--checkpoints", f.checkpoints, "log10 or x1,x2,...");
    cmd->add_option("--out", f.out, "write the report to PATH instead of stdout");
    cmd->add_flag("--json", f.json, "emit JSON records instead of CSV");
    cmd->add_option("--threads", f.threads, "worker threads (output is identical for any count)");
}

RunConfig make_config(const CommonFlags& f) {
    RunConfig cfg;
    cfg.limit = parse_count(f.limit);
    cfg.checkpoints = Checkpoints::parse(f.checkpoints);
    cfg.format = f.json ? OutputFormat::json : OutputFormat::csv;
    cfg.threads = f.threads;
    return cfg;
}

void emit(const Table& table, const CommonFlags& f) {
    std::string text = render(table, f.json ? OutputFormat::json : OutputFormat::csv);
    if (f.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream os(f.out, std::ios::binary);
    if (!os) throw std::invalid_argument("cannot open output file '" + f.out + "'");
    os << text;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"density experiments for sumsets of powers of two with primes and semiprimes"};
    app.require_subcommand(1);

    CommonFlags sieve_f, classify_f, density_f, moments_f, pairs_f, primepairs_f, order_f,
        wseries_f, innersum_f, series2_f, conjecture_f;

    auto* cmd_sieve = app.add_subcommand("sieve", "prime counts at checkpoints");
    add_common(cmd_sieve, sieve_f);
    std::string dump_bits;
    cmd_sieve->add_option("--dump-bits", dump_bits, "also write the prime bitmap dump to PATH");

    auto* cmd_classify = app.add_subcommand("classify", "P2 / P2* counts and normalizations");
    add_common(cmd_classify, classify_f);
    std::string classify_set = "p2star";
    bool exclude_squares = false;
    cmd_classify->add_option("--set", classify_set, "p2, p2star or primes");
    cmd_classify->add_flag("--exclude-prime-squares", exclude_squares,
                           "report the P2 convention without prime squares");

    auto* cmd_density = app.add_subcommand("density", "sumset density and moments per checkpoint");
    add_common(cmd_density, density_f);
    std::string density_set = "p2star";
    cmd_density->add_option("--set", density_set, "p2, p2star or primes");

    auto* cmd_moments = app.add_subcommand("moments", "representation-function moments");
    add_common(cmd_moments, moments_f);
    std::string moments_set = "p2star";
    bool moments_direct = false;
    cmd_moments->add_option("--set", moments_set, "p2, p2star or primes");
    cmd_moments->add_flag("--direct", moments_direct,
                          "verify against direct per-n counters (memory-capped)");

    auto* cmd_pairs = app.add_subcommand("pairs", "correlated membership at offsets N");
    add_common(cmd_pairs, pairs_f);
    std::string pairs_set = "p2star", pairs_range = "2:100:2";
    bool pairs_raw = false;
    cmd_pairs->add_option("--N", pairs_range, "offset or range a:b:step");
    cmd_pairs->add_option("--set", pairs_set, "p2, p2star or primes");
    cmd_pairs->add_flag("--raw", pairs_raw, "counts only; allows odd N, no normalization");

    auto* cmd_primepairs = app.add_subcommand("primepairs", "two linear forms simultaneously prime");
    add_common(cmd_primepairs, primepairs_f);
    std::string form = "1,0,1,2";
    cmd_primepairs->add_option("--form", form, "k1,l1,k2,l2");

    auto* cmd_order = app.add_subcommand("order", "multiplicative order of 2 mod d");
    add_common(cmd_order, order_f, /*with_limit=*/false);
    std::string order_range = "1:99:2";
    cmd_order->add_option("--N", order_range, "odd d or range a:b:step");

    auto* cmd_wseries = app.add_subcommand("wseries", "W(K) partial sums, two estimators");
    add_common(cmd_wseries, wseries_f, /*with_limit=*/false);
    std::string w_mode = "both", w_scan_limit = "1e4", factor_table_path;
    std::string w_top = "20", w_kmax = std::to_string(kDefaultWKMax);
    cmd_wseries->add_option("--K", w_top, "report rows for K = 1..K");
    cmd_wseries->add_option("--mode", w_mode, "dp, scan or both");
    cmd_wseries->add_option("--D", w_scan_limit, "scan truncation for W_scan");
    cmd_wseries->add_option("--factor-table", factor_table_path,
                            "verified factorizations of 2^k-1 for k beyond the in-process range");
    cmd_wseries->add_option("--k-max", w_kmax, "raise the default W cap of 60");

    auto* cmd_innersum = app.add_subcommand("innersum", "inner sum: closed form vs truncation");
    add_common(cmd_innersum, innersum_f, /*with_limit=*/false);
    std::string inner_top = "50", inner_dp = "1e4";
    cmd_innersum->add_option("--K", inner_top, "report rows for k = 1..K");
    cmd_innersum->add_option("--Dp", inner_dp, "truncation for the d' sum");

    auto* cmd_series2 = app.add_subcommand("series2", "double series partial sums");
    add_common(cmd_series2, series2_f, /*with_limit=*/false);
    std::string s2_dd = "1e4", s2_dp = "1e4";
    cmd_series2->add_option("--D", s2_dd, "truncation for the odd squarefree d sum");
    cmd_series2->add_option("--Dp", s2_dp, "truncation for the squarefree d' sum");

    auto* cmd_conjecture = app.add_subcommand("conjecture", "ratio/density probe for set pairs");
    add_common(cmd_conjecture, conjecture_f);
    std::string spec_a = "primes", spec_b = "p2star";
    double c_threshold = 0.0;
    cmd_conjecture->add_option("--A", spec_a, "exponent set spec");
    cmd_conjecture->add_option("--B", spec_b, "base set spec");
    cmd_conjecture->add_option("--c", c_threshold, "mark checkpoints with ratio > c");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e); // prints help, exits 0
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (cmd_sieve->parsed()) {
            RunConfig cfg = make_config(sieve_f);
            if (!dump_bits.empty()) {
                PrimeTable t = sieve_primes(cfg.limit, cfg.sieve_options());
                std::ofstream os(dump_bits, std::ios::binary);
                if (!os) throw std::invalid_argument("cannot open dump file '" + dump_bits + "'");
                write_bitmap(os, t.bits(), BitmapKind::primes);
            }
            emit(sieve_report(cfg), sieve_f);
        } else if (cmd_classify->parsed()) {
            emit(classify_report(make_config(classify_f), classify_set, exclude_squares),
                 classify_f);
        } else if (cmd_density->parsed()) {
            emit(density_report(make_config(density_f), density_set), density_f);
        } else if (cmd_moments->parsed()) {
            emit(moments_report(make_config(moments_f), moments_set, moments_direct), moments_f);
        } else if (cmd_pairs->parsed()) {
            emit(pairs_report(make_config(pairs_f), Range::parse(pairs_range), pairs_set,
                              pairs_raw),
                 pairs_f);
        } else if (cmd_primepairs->parsed()) {
            std::vector<uint64_t> parts;
            { // k1,l1,k2,l2 as a comma list
                std::string cur;
                for (char ch : form + ",") {
                    if (ch == ',') {
                        parts.push_back(parse_count(cur));
                        cur.clear();
                    } else cur += ch;
                }
            }
            if (parts.size() != 4)
                throw std::invalid_argument("--form expects k1,l1,k2,l2");
            emit(primepairs_report(make_config(primepairs_f),
                                   LinearFormPair{parts[0], parts[1], parts[2], parts[3]}),
                 primepairs_f);
        } else if (cmd_order->parsed()) {
            emit(order_report(Range::parse(order_range)), order_f);
        } else if (cmd_wseries->parsed()) {
            FactorTable table;
            bool have_table = false;
            if (!factor_table_path.empty()) {
                std::ifstream is(factor_table_path);
                if (!is)
                    throw std::invalid_argument("cannot open factor table '" + factor_table_path +
                                                "'");
                table = load_factor_table(is);
                have_table = true;
            }
            emit(wseries_report(static_cast<unsigned>(parse_count(w_top)), w_mode,
                                parse_count(w_scan_limit), have_table ? &table : nullptr,
                                static_cast<unsigned>(parse_count(w_kmax))),
                 wseries_f);
        } else if (cmd_innersum->parsed()) {
            emit(innersum_report(static_cast<unsigned>(parse_count(inner_top)),
                                 parse_count(inner_dp)),
                 innersum_f);
        } else if (cmd_series2->parsed()) {
            emit(series2_report(parse_count(s2_dd), parse_count(s2_dp)), series2_f);
        } else if (cmd_conjecture->parsed()) {
            emit(conjecture_report(make_config(conjecture_f), SetSpec::parse(spec_a),
                                   SetSpec::parse(spec_b), c_threshold),
                 conjecture_f);
        }
    } catch (const VerificationError& e) {
        std::cerr << "verification failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
