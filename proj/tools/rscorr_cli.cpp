// rscorr: exact and empirical correlation functions of the Rudin-Shapiro sequence.

#include "rscorr/rscorr.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <functional>
#include <random>
#include <cstdint>
#include <iostream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace {

using nlohmann::ordered_json;
using namespace rscorr;

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct Options {
    std::string format = "json";
    unsigned jobs = 1;
    std::uint64_t seed = default_seed;
};

std::vector<std::int64_t> parse_int_list(const std::string& text) {
    std::vector<std::int64_t> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t end = std::min(text.find(',', start), text.size());
        const std::string item = text.substr(start, end - start);
        std::int64_t v = 0;
        const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (item.empty() || ec != std::errc{} || ptr != item.data() + item.size())
            throw UsageError("not an integer list: " + text);
        out.push_back(v);
        start = end + 1;
    }
    return out;
}

std::pair<std::int64_t, std::int64_t> parse_range(const std::string& text) {
    const auto dots = text.find("..");
    if (dots == std::string::npos) throw UsageError("range must look like a..b: " + text);
    const auto lo = parse_int_list(text.substr(0, dots)), hi = parse_int_list(text.substr(dots + 2));
    if (lo.size() != 1 || hi.size() != 1 || lo[0] > hi[0]) throw UsageError("bad range: " + text);
    return {lo[0], hi[0]};
}

ordered_json exact_json(const Dyadic& v) { return {{"exact", v.to_string()}, {"float", v.to_double()}}; }

void check_format(const Options& o, std::initializer_list<const char*> allowed) {
    for (const char* a : allowed)
        if (o.format == a) return;
    throw UsageError("format '" + o.format + "' not supported by this command");
}

// Prints rows as CSV (header first) or as a JSON array of objects.
void emit_table(const Options& o, const std::vector<std::string>& header,
                const std::vector<std::vector<ordered_json>>& rows) {
    if (o.format == "csv" || o.format == "plain") {
        const char sep = o.format == "csv" ? ',' : ' ';
        for (std::size_t i = 0; i < header.size(); ++i) std::cout << (i ? std::string(1, sep) : "") << header[i];
        std::cout << '\n';
        for (const auto& r : rows) {
            for (std::size_t i = 0; i < r.size(); ++i) {
                if (i) std::cout << sep;
                std::cout << (r[i].is_string() ? r[i].get<std::string>() : r[i].dump());
            }
            std::cout << '\n';
        }
        return;
    }
    ordered_json arr = ordered_json::array();
    for (const auto& r : rows) {
        ordered_json obj;
        for (std::size_t i = 0; i < header.size(); ++i) obj[header[i]] = r[i];
        arr.push_back(obj);
    }
    std::cout << arr.dump() << '\n';
}

int cmd_sequence(const Options& o, const std::string& word, std::size_t length) {
    check_format(o, {"json", "csv", "plain", "bits"});
    SignWord signs;
    std::string letters;
    if (word == "rs") {
        signs = rs_binary_word(length);
    } else if (word == "induced") {
        signs = induced_word(length);
    } else if (word == "quaternary") {
        letters = rs_quaternary_word(length).to_string();
    } else if (word == "abcd") {
        letters = chi_block_code(rs_quaternary_word(length + 1)).to_string();
    } else {
        throw UsageError("unknown word: " + word);
    }
    if (!letters.empty() || length == 0) {
        if (o.format == "json") std::cout << ordered_json{{"word", word}, {"length", length}, {"letters", letters}}.dump() << '\n';
        else std::cout << letters << '\n';
        return 0;
    }
    if (o.format == "bits") {
        static const char* hex = "0123456789abcdef";
        for (auto b : pack_signs(signs)) std::cout << hex[b >> 4] << hex[b & 15];
        std::cout << '\n';
    } else if (o.format == "json") {
        std::vector<int> v(signs.begin(), signs.end());
        std::cout << ordered_json{{"word", word}, {"length", length}, {"signs", v}}.dump() << '\n';
    } else {
        std::cout << format_signs_csv(signs) << '\n';
    }
    return 0;
}

int cmd_eval(const Options& o, const std::string& kind_text, const std::string& offsets_text,
             const std::string& weights) {
    check_format(o, {"json", "csv", "plain"});
    const auto offsets = offsets_text.empty() ? std::vector<std::int64_t>{} : parse_int_list(offsets_text);
    if (!weights.empty()) {
        const auto comma = weights.find(',');
        if (comma == std::string::npos) throw UsageError("--weights needs f+,f-");
        const Rational fp = parse_rational(weights.substr(0, comma)), fm = parse_rational(weights.substr(comma + 1));
        const Rational v = weighted_correlation(offsets, fp, fm);
        if (o.format == "json")
            std::cout << ordered_json{{"offsets", offsets}, {"weights", weights}, {"exact", to_string(v)}, {"float", to_double(v)}}.dump() << '\n';
        else
            std::cout << to_string(v) << (o.format == "csv" ? "," : " ") << to_double(v) << '\n';
        return 0;
    }
    const Kind kind = parse_kind(kind_text);
    const Dyadic v = correlation(CorrelationQuery::from_offsets(kind, offsets));
    if (o.format == "json") {
        ordered_json j{{"offsets", offsets}, {"kind", kind_name(kind)}};
        j.update(exact_json(v));
        std::cout << j.dump() << '\n';
    } else {
        std::cout << v.to_string() << (o.format == "csv" ? "," : " ") << v.to_double() << '\n';
    }
    return 0;
}

int cmd_oracle(const Options& o, const std::string& kind_text, const std::string& offsets_text, std::int64_t N) {
    check_format(o, {"json", "csv", "plain"});
    const Kind kind = parse_kind(kind_text);
    const auto offsets = offsets_text.empty() ? std::vector<std::int64_t>{} : parse_int_list(offsets_text);
    for (auto x : offsets)
        if (x < 0) throw UsageError("oracle offsets must be non-negative");
    if (N < 1) throw UsageError("--N must be positive");
    const auto q = CorrelationQuery::from_offsets(kind, offsets);
    const auto est = empirical_correlation(kind, q.positions, N, o.jobs);
    const Dyadic exact = correlation(q);
    if (o.format == "json") {
        ordered_json j{{"value", est.value}, {"N", N}, {"positions", q.positions}, {"kind", kind_name(kind)},
                       {"exact", exact.to_string()}, {"deviation", est.value - exact.to_double()}};
        std::cout << j.dump() << '\n';
    } else {
        std::cout << est.value << (o.format == "csv" ? "," : " ") << exact.to_string() << '\n';
    }
    return 0;
}

std::map<std::string, std::function<CheckResult(const Options&)>> suites() {
    return {
        {"autocorrelation", [](const Options&) { Evaluator ev; return check_autocorrelation(ev); }},
        {"odd", [](const Options& o) { Evaluator ev; return check_odd_vanishing(ev, o.seed); }},
        {"hypercube", [](const Options&) { Evaluator ev; return check_hypercube(ev); }},
        {"self-consistent", [](const Options&) { Evaluator ev; return check_self_consistent(ev); }},
        {"appendix", [](const Options&) { return check_appendix(); }},
        {"levelsets", [](const Options&) { Evaluator ev; return check_level_set_families(ev); }},
        {"coincidence", [](const Options&) { Evaluator ev; return check_coincidence(ev); }},
        {"matrices", [](const Options& o) { Evaluator ev; return check_matrices(ev, o.seed); }},
        {"oracle", [](const Options& o) { Evaluator ev; return check_oracle_agreement(ev, o.seed, o.jobs); }},
        {"averages", [](const Options& o) { Evaluator ev; return check_averages(ev, o.jobs); }},
        {"sequences", [](const Options&) { return check_sequences(); }},
        {"symmetry", [](const Options& o) { Evaluator ev; return check_symmetry(ev, o.seed); }},
    };
}

int cmd_verify(const Options& o, const std::string& which) {
    check_format(o, {"json", "plain"});
    const auto all = suites();
    std::vector<std::string> names;
    if (which == "all") {
        for (const auto& [n, f] : all) names.push_back(n);
    } else if (all.count(which)) {
        names.push_back(which);
    } else {
        throw UsageError("unknown suite: " + which);
    }
    bool ok = true;
    ordered_json arr = ordered_json::array();
    for (const auto& n : names) {
        const CheckResult r = all.at(n)(o);
        ok = ok && r.passed;
        if (o.format == "json")
            arr.push_back({{"suite", n}, {"passed", r.passed}, {"detail", r.detail}, {"seconds", r.seconds}});
        else
            std::cout << (r.passed ? "PASS " : "FAIL ") << n << ": " << r.detail << " (" << r.seconds << " s)\n";
    }
    if (o.format == "json") std::cout << arr.dump() << '\n';
    return ok ? 0 : 1;
}

int cmd_matrices_verify(const Options& o, int n, std::int64_t grid, std::size_t samples) {
    check_format(o, {"json", "plain"});
    if (n < 2 || n > 4) throw UsageError("--n must be 2, 3 or 4");
    if (grid < 0) throw UsageError("--grid must be non-negative");
    ConventionReport rep;
    if (n == 4) {
        std::mt19937_64 rng(o.seed);
        std::uniform_int_distribution<std::int64_t> dm(0, grid);
        std::uniform_int_distribution<int> dr(0, 7);
        rep.n = 4;
        rep.candidates = {{Anchor::m}, {Anchor::two_m}};
        for (std::size_t i = 0; i < samples; ++i) {
            const auto one = verify_block_convention(4, {{dm(rng), dm(rng), dm(rng)}}, {{dr(rng), dr(rng), dr(rng)}});
            for (std::size_t c = 0; c < 2; ++c) {
                rep.candidates[c].checked += one.candidates[c].checked;
                rep.candidates[c].value_mismatches += one.candidates[c].value_mismatches;
                rep.candidates[c].structure_mismatches += one.candidates[c].structure_mismatches;
            }
        }
    } else {
        std::vector<std::vector<std::int64_t>> pts;
        std::vector<std::vector<int>> res;
        for (std::int64_t a = 0; a <= grid; ++a) {
            if (n == 2) pts.push_back({a});
            else
                for (std::int64_t b = 0; b <= grid; ++b) pts.push_back({a, b});
        }
        for (int a = 0; a < 8; ++a) {
            if (n == 2) res.push_back({a});
            else
                for (int b = 0; b < 8; ++b) res.push_back({a, b});
        }
        rep = verify_block_convention(n, pts, res);
    }
    const auto w = rep.winner();
    if (o.format == "json") {
        ordered_json cands = ordered_json::array();
        for (const auto& c : rep.candidates)
            cands.push_back({{"anchor", anchor_name(c.anchor)}, {"checked", c.checked},
                             {"value_mismatches", c.value_mismatches}, {"structure_mismatches", c.structure_mismatches}});
        std::cout << ordered_json{{"n", n}, {"convention", w ? ordered_json(anchor_name(*w)) : ordered_json(nullptr)},
                                  {"candidates", cands}}.dump()
                  << '\n';
    } else {
        std::cout << "n=" << n << " convention " << (w ? std::string(anchor_name(*w)) : "none") << '\n';
        for (const auto& c : rep.candidates)
            std::cout << "  " << anchor_name(c.anchor) << ": " << c.checked << " rows, " << c.value_mismatches
                      << " value / " << c.structure_mismatches << " structure mismatches\n";
    }
    return w ? 0 : 1;
}

int cmd_matrices_dump(const Options& o, int n, const std::string& r_text) {
    check_format(o, {"csv", "json"});
    const auto rr = parse_int_list(r_text);
    const BlockMatrix b = build_block_matrix(n, std::vector<int>(rr.begin(), rr.end()));
    if (o.format == "json") {
        ordered_json entries = ordered_json::array();
        for (std::size_t i = 0; i < b.dim(); ++i)
            for (const auto& [j, v] : b.row(i)) entries.push_back({i, j, b.entry(i, j).to_string()});
        std::cout << ordered_json{{"n", n}, {"r", rr}, {"dim", b.dim()}, {"entries", entries}}.dump() << '\n';
        return 0;
    }
    for (std::size_t i = 0; i < b.dim(); ++i) {
        for (std::size_t j = 0; j < b.dim(); ++j) std::cout << (j ? "," : "") << b.entry(i, j).to_string();
        std::cout << '\n';
    }
    return 0;
}

int cmd_levelset(const Options& o, const std::string& family, int n, int m, const std::string& l_range,
                 const std::string& kind_text) {
    check_format(o, {"json", "csv", "plain"});
    const LevelSetFamily f = parse_family(family);
    const Kind kind = parse_kind(kind_text);
    const auto [lo, hi] = parse_range(l_range);
    std::vector<std::vector<ordered_json>> rows;
    for (std::int64_t l = lo; l <= hi; ++l) {
        const Triple t = family_point(f, m, n, l);
        const Dyadic v = engine_value(kind, t);
        ordered_json printed = nullptr;
        try {
            printed = closed_form(f, kind, m, n, l).to_string();
        } catch (const std::domain_error&) {
        }
        rows.push_back({l, t[0], t[1], t[2], v.to_string(), v.to_double(), printed,
                        printed.is_null() ? ordered_json(nullptr) : ordered_json(printed == v.to_string())});
    }
    emit_table(o, {"l", "m1", "m2", "m3", "exact", "float", "closed_form", "agrees"}, rows);
    return 0;
}

int cmd_averages(const Options& o, std::int64_t N) {
    check_format(o, {"json", "plain"});
    if (N < 1) throw UsageError("--N must be positive");
    const auto r = averages(N, default_evaluator(), o.jobs);
    if (o.format == "json") {
        std::cout << ordered_json{{"N", N},
                                  {"sigma", to_string(r.sigma)},
                                  {"theta", to_string(r.theta_sum)},
                                  {"sigma2", to_string(r.sigma2)},
                                  {"sigma_float", to_double(r.sigma)},
                                  {"theta_float", to_double(r.theta_sum)},
                                  {"sigma2_float", to_double(r.sigma2)}}
                         .dump()
                  << '\n';
    } else {
        std::cout << "N=" << N << " Sigma=" << to_string(r.sigma) << " Theta=" << to_string(r.theta_sum)
                  << " Sigma2=" << to_string(r.sigma2) << '\n';
    }
    return 0;
}

int cmd_scan(const Options& o, const std::string& value, std::int64_t box) {
    check_format(o, {"json", "csv", "plain"});
    const Dyadic target = parse_dyadic(value);
    const auto pts = scan_level_set(target, box, default_evaluator(), o.jobs);
    std::vector<std::vector<ordered_json>> rows;
    for (const auto& t : pts) rows.push_back({t[0], t[1], t[2], target.to_string(), target.to_double()});
    emit_table(o, {"m1", "m2", "m3", "exact", "float"}, rows);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact n-point correlations of the Rudin-Shapiro sequence", "rscorr"};
    app.fallthrough();
    app.require_subcommand(1);
    Options opt;
    app.add_option("--format", opt.format, "json | csv | plain (bits for sequence)")->capture_default_str();
    app.add_option("--jobs", opt.jobs, "worker threads for scans and oracle windows")->capture_default_str();
    app.add_option("--seed", opt.seed, "seed for randomized suites")->capture_default_str();

    std::string kind = "eta", offsets, weights, word = "rs", which = "all", family, l_range = "-16..16", value;
    std::string r_text;
    std::size_t length = 64, samples = 20;
    std::int64_t N = std::int64_t{1} << 20, grid = 8, box = 32;
    int n = 2, m = 0;

    auto* seq = app.add_subcommand("sequence", "print a prefix of a sequence");
    seq->add_option("--word", word, "rs | induced | quaternary | abcd")->capture_default_str();
    seq->add_option("--length", length)->capture_default_str();

    auto* ev = app.add_subcommand("eval", "exact correlation value");
    ev->add_option("--kind", kind, "eta | theta")->capture_default_str();
    ev->add_option("--offsets", offsets, "comma-separated offsets m1,...,m_{n-1}");
    ev->add_option("--weights", weights, "f(+1),f(-1): weighted correlation");

    auto* orc = app.add_subcommand("oracle", "empirical average over a finite window");
    orc->add_option("--kind", kind)->capture_default_str();
    orc->add_option("--offsets", offsets);
    orc->add_option("--N", N, "window length")->capture_default_str();

    auto* ver = app.add_subcommand("verify", "run verification suites");
    ver->add_option("suite", which, "all | autocorrelation | odd | hypercube | self-consistent | appendix | "
                                    "levelsets | coincidence | matrices | oracle | averages | sequences | symmetry")
        ->capture_default_str();

    auto* mat = app.add_subcommand("matrices", "block matrices of the renormalisation");
    mat->require_subcommand(1);
    auto* mver = mat->add_subcommand("verify", "check the anchor convention of B_(r)");
    mver->add_option("--n", n)->capture_default_str();
    mver->add_option("--grid", grid, "base points range over [0, grid]")->capture_default_str();
    mver->add_option("--samples", samples, "random (m, r) samples for n = 4")->capture_default_str();
    auto* mdump = mat->add_subcommand("dump", "print B_(r) entries");
    mdump->add_option("--n", n)->capture_default_str();
    mdump->add_option("--r", r_text, "residues r_1,...,r_{n-1} in 0..7")->required();

    auto* lvl = app.add_subcommand("levelset", "family points with engine and closed-form values");
    lvl->add_option("--family", family, "Cn | V1a | V1b | V2a | V2b | V3a | V3b")->required();
    lvl->add_option("--n", n)->capture_default_str();
    lvl->add_option("--m", m)->capture_default_str();
    lvl->add_option("--l-range", l_range)->capture_default_str();
    lvl->add_option("--kind", kind)->capture_default_str();

    auto* avg = app.add_subcommand("averages", "exact cube averages");
    avg->add_option("--N", N)->required();

    auto* scan = app.add_subcommand("scan", "sorted triples in [0, box]^3 with a given eta value");
    scan->add_option("--value", value)->required();
    scan->add_option("--box", box)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    try {
        if (opt.jobs == 0) throw UsageError("--jobs must be at least 1");
        if (*seq) return cmd_sequence(opt, word, length);
        if (*ev) return cmd_eval(opt, kind, offsets, weights);
        if (*orc) return cmd_oracle(opt, kind, offsets, N);
        if (*ver) return cmd_verify(opt, which);
        if (*mver) return cmd_matrices_verify(opt, n, grid, samples);
        if (*mdump) return cmd_matrices_dump(opt, n, r_text);
        if (*lvl) return cmd_levelset(opt, family, n, m, l_range, kind);
        if (*avg) return cmd_averages(opt, N);
        if (*scan) return cmd_scan(opt, value, box);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }
    return 2;
}
