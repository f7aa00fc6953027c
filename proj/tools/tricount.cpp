#include "tricount/closed_forms.hpp"
#include "tricount/identity_lab.hpp"
#include "tricount/map_oracle.hpp"
#include "tricount/peel.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using nlohmann::ordered_json;
using namespace tricount;

namespace {

// The exhaustive enumerator visits every rooted map with n edges; past this
// many edges a single query is no longer interactive.
constexpr long kOracleMaxEdges = 8;

std::string cache_dir_from(const std::string& flag) {
    if (!flag.empty()) return flag;
    const char* env = std::getenv("TRICOUNT_CACHE_DIR");
    return env ? std::string(env) : std::string();
}

// Loads the recurrence memo from <dir>/peel_memo.txt and saves it back when
// the command finishes, so repeated CLI sweeps resume where they left off.
class CacheGuard {
  public:
    CacheGuard(MemoTable& memo, const std::string& dir) : memo_(memo) {
        if (dir.empty()) return;
        std::filesystem::create_directories(dir);
        path_ = dir + "/peel_memo.txt";
        if (std::filesystem::exists(path_)) memo_.load(path_);
    }
    ~CacheGuard() {
        if (path_.empty()) return;
        try {
            memo_.save(path_);
        } catch (...) {
            // A failed cache write must not turn a correct answer into an error.
        }
    }

  private:
    MemoTable& memo_;
    std::string path_;
};

BoundaryProfile parse_boundaries(const std::string& s) {
    BoundaryProfile p;
    std::istringstream is(s);
    std::string item;
    bool first = true;
    while (std::getline(is, item, ',')) {
        size_t pos = 0;
        long v = 0;
        try {
            v = std::stol(item, &pos);
        } catch (const std::exception&) {
            throw CLI::ValidationError("--boundaries", "not an integer: '" + item + "'");
        }
        if (pos != item.size() || v < 1)
            throw CLI::ValidationError("--boundaries", "lengths must be positive integers");
        if (first)
            p.alpha0 = v;
        else
            p.others.push_back(v);
        first = false;
    }
    if (first) throw CLI::ValidationError("--boundaries", "at least the root length is required");
    return p;
}

std::string boundaries_text(const BoundaryProfile& p, char sep) {
    std::string out = std::to_string(p.alpha0);
    for (long a : p.others) {
        out += sep;
        out += std::to_string(a);
    }
    return out;
}

ordered_json boundaries_json(const BoundaryProfile& p) {
    ordered_json arr = ordered_json::array();
    arr.push_back(p.alpha0);
    for (long a : p.others) arr.push_back(a);
    return arr;
}

// Closed-form count where one exists: the explicit genus-0 formula for any
// number of boundaries, and coefficient extraction from the genus-1/2
// one-boundary generating functions.
std::optional<ExactInt> closed_count(long genus, long n, const BoundaryProfile& p) {
    if (genus == 0) return count_theorem1(n, p);
    if (!p.others.empty() || genus > 2) return std::nullopt;
    auto gf = genus == 1 ? gf_t10(static_cast<int>(n), static_cast<int>(p.alpha0))
                         : gf_t20(static_cast<int>(n), static_cast<int>(p.alpha0));
    ExactRat c = gf.coeff({{"x", static_cast<int>(n)}, {"y", static_cast<int>(p.alpha0)}});
    if (c.get_den() != 1) throw std::logic_error("non-integral closed-form coefficient");
    return ExactInt(c.get_num());
}

void emit(const std::string& format, const ordered_json& j, const std::string& text) {
    if (format == "json")
        std::cout << j.dump(2) << "\n";
    else
        std::cout << text;
}

// ---------------------------------------------------------------------------
// count

int cmd_count(long genus, long n, const std::string& bounds, const std::string& method,
              const std::string& format, const std::string& cache_flag) {
    BoundaryProfile p = parse_boundaries(bounds);
    p.validate();
    if (method == "oracle" && n > kOracleMaxEdges)
        throw CLI::ValidationError("--method",
                                   "oracle supports at most " +
                                       std::to_string(kOracleMaxEdges) + " edges");

    ordered_json out;
    out["genus"] = genus;
    out["n"] = n;
    out["boundaries"] = boundaries_json(p);
    std::ostringstream text;
    text << "genus=" << genus << " n=" << n << " boundaries=" << boundaries_text(p, ',')
         << "\n";

    if (auto reason = classify_infeasible(genus, n, p)) {
        out["feasible"] = false;
        out["reason"] = to_string(*reason);
        out["count"] = "0";
        out["agree"] = true;
        text << "count=0 reason=" << to_string(*reason) << "\n";
        emit(format, out, text.str());
        return 0;
    }
    out["feasible"] = true;
    out["reason"] = nullptr;

    std::vector<std::pair<std::string, ExactInt>> counts;
    if (method == "closed" || method == "all") {
        auto c = closed_count(genus, n, p);
        if (c)
            counts.emplace_back("closed", *c);
        else if (method == "closed")
            throw CLI::ValidationError(
                "--method", "no closed form for this genus/boundary combination");
    }
    if (method == "recurrence" || method == "all") {
        MemoTable memo;
        CacheGuard guard(memo, cache_dir_from(cache_flag));
        counts.emplace_back("recurrence", count_recursive(genus, n, p, memo));
    }
    if (method == "oracle" || (method == "all" && n <= kOracleMaxEdges))
        counts.emplace_back("oracle", count_by_oracle(genus, n, p));

    bool agree = true;
    for (const auto& [name, v] : counts) agree = agree && v == counts.front().second;
    ordered_json jc;
    for (const auto& [name, v] : counts) {
        jc[name] = v.get_str();
        text << name << " " << v.get_str() << "\n";
    }
    out["counts"] = jc;
    out["agree"] = agree;
    text << "agree " << (agree ? "yes" : "NO") << "\n";
    emit(format, out, text.str());
    return agree ? 0 : 1;
}

// ---------------------------------------------------------------------------
// seq

int cmd_seq(const std::string& which, long length, const std::string& format) {
    std::vector<std::string> values;
    for (long k = 0; k < length; ++k) {
        if (which == "h") {
            ExactRat c = h_power_coeff(1 + 3 * k, 1);
            if (c.get_den() != 1) throw std::logic_error("non-integral kernel coefficient");
            values.push_back(ExactInt(c.get_num()).get_str());
        } else {  // disk: boundary length 1, k interior vertices
            values.push_back(count_disk(2 + 3 * k, 1).get_str());
        }
    }
    ordered_json out;
    out["name"] = which;
    out["values"] = values;
    std::string text;
    for (size_t i = 0; i < values.size(); ++i) {
        if (i) text += ", ";
        text += values[i];
    }
    if (!text.empty()) text += "\n";
    emit(format, out, text);
    return 0;
}

// ---------------------------------------------------------------------------
// series

struct SeriesSpec {
    long genus;
    long r;
    bool symmetrized;
};

const std::map<std::string, SeriesSpec>& series_table() {
    static const std::map<std::string, SeriesSpec> table = {
        {"u0", {0, 0, false}},    {"u1", {0, 1, false}},  {"u1sym", {0, 1, true}},
        {"u2", {0, 2, false}},    {"u2sym", {0, 2, true}}, {"u3sym", {0, 3, true}},
        {"t10", {1, 0, false}},   {"t20", {2, 0, false}},
    };
    return table;
}

MultiSeries closed_series(const std::string& name, int X, int Y, int Z) {
    if (name == "u0") return gf_u0(X, Y);
    if (name == "u1") return gf_u1(X, Y, Z);
    if (name == "u1sym") return gf_u1sym(X, Y, Z);
    if (name == "u2") return gf_u2(X, Y, Z);
    if (name == "u2sym") return gf_u2sym(X, Y, Z);
    if (name == "u3sym") return gf_u3sym(X, Y, Z);
    if (name == "t10") return gf_t10(X, Y);
    if (name == "t20") return gf_t20(X, Y);
    throw std::logic_error("unknown series name");
}

ordered_json series_json(const std::string& name, const MultiSeries& s) {
    ordered_json out;
    out["name"] = name;
    out["vars"] = s.vars();
    out["trunc"] = s.trunc();
    ordered_json terms = ordered_json::array();
    std::istringstream is(s.dump());
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto tab = line.find('\t');
        ordered_json term;
        ordered_json exps = ordered_json::array();
        std::istringstream es(line.substr(0, tab));
        int e;
        while (es >> e) exps.push_back(e);
        term["exponents"] = exps;
        term["coefficient"] = line.substr(tab + 1);
        terms.push_back(term);
    }
    out["terms"] = terms;
    return out;
}

int cmd_series(const std::string& name, int X, int Y, int Z, const std::string& method,
               const std::string& format, const std::string& cache_flag) {
    auto it = series_table().find(name);
    if (it == series_table().end())
        throw CLI::ValidationError("--name", "unknown series '" + name + "'");
    const SeriesSpec spec = it->second;

    std::optional<MultiSeries> closed;
    if (method == "closed" || method == "all") closed = closed_series(name, X, Y, Z);
    std::optional<MultiSeries> dp;
    if (method == "recurrence" || method == "all") {
        MemoTable memo;
        CacheGuard guard(memo, cache_dir_from(cache_flag));
        dp = series_from_dp(spec.genus, spec.r, X, std::max(Y, Z), memo, spec.symmetrized);
    }

    bool agree = true;
    std::optional<MultiSeries::Discrepancy> diff;
    if (closed && dp) {
        std::map<std::string, int> box;
        for (const auto& v : closed->vars()) box[v] = closed->trunc_of(v);
        diff = MultiSeries::compare(*closed, *dp, box);
        agree = !diff;
    }

    const MultiSeries& primary = closed ? *closed : *dp;
    ordered_json out = series_json(name, primary);
    std::string text = primary.dump();
    if (closed && dp) {
        out["agree"] = agree;
        if (diff) {
            ordered_json d;
            d["exponents"] = diff->exponents;
            d["lhs"] = diff->lhs.get_str();
            d["rhs"] = diff->rhs.get_str();
            out["first_discrepancy"] = d;
            text += "# DISAGREE with recurrence series\n";
        } else {
            text += "# agrees with recurrence series\n";
        }
    }
    emit(format, out, text);
    return agree ? 0 : 1;
}

// ---------------------------------------------------------------------------
// verify

CheckResult cross_method_g0(MemoTable& memo) {
    CheckResult res;
    res.name = "cross_method_g0";
    res.orders = "n<=12 holes<=3";
    res.ok = true;
    for (long n = 1; n <= 12 && res.ok; ++n) {
        for (const auto& p : feasible_profiles(0, n, 3)) {
            ExactInt a = count_theorem1(n, p);
            ExactInt b = count_recursive(0, n, p, memo);
            if (a != b) {
                res.ok = false;
                res.note = "n=" + std::to_string(n) + " boundaries=" +
                           boundaries_text(p, ',') + ": closed=" + a.get_str() +
                           " recurrence=" + b.get_str();
                break;
            }
        }
    }
    if (res.ok) res.note = "closed form equals recurrence on every feasible profile";
    return res;
}

CheckResult cross_method_oracle(MemoTable& memo) {
    CheckResult res;
    res.name = "cross_method_oracle";
    res.orders = "n<=5 genus<=1";
    res.ok = true;
    for (long n = 1; n <= 5 && res.ok; ++n) {
        Census census = build_census(static_cast<int>(n));
        for (long genus = 0; genus <= 1 && res.ok; ++genus) {
            for (const auto& p : feasible_profiles(genus, n, 3)) {
                ExactInt a = census_lookup(census, genus, p);
                ExactInt b = genus == 0 ? count_theorem1(n, p)
                                        : count_recursive(genus, n, p, memo);
                if (a != b) {
                    res.ok = false;
                    res.note = "genus=" + std::to_string(genus) + " n=" + std::to_string(n) +
                               " boundaries=" + boundaries_text(p, ',') +
                               ": oracle=" + a.get_str() + " other=" + b.get_str();
                    break;
                }
            }
        }
    }
    if (res.ok) res.note = "exhaustive enumeration matches both other methods";
    return res;
}

int cmd_verify(const LabOptions& opt, const std::string& only, bool no_cross,
               const std::string& format, const std::string& cache_flag) {
    MemoTable memo;
    CacheGuard guard(memo, cache_dir_from(cache_flag));
    auto matches = [&only](const std::string& name) {
        return only.empty() || name.find(only) != std::string::npos;
    };

    std::vector<CheckResult> results;
    for (const auto& c : identity_check_registry())
        if (matches(c.name)) results.push_back(c.run(opt, memo));
    if (!opt.mutate && !no_cross) {
        if (matches("cross_method_g0")) results.push_back(cross_method_g0(memo));
        if (matches("cross_method_oracle")) results.push_back(cross_method_oracle(memo));
    }

    ordered_json rows = ordered_json::array();
    std::ostringstream text;
    bool all_good = true;
    for (const auto& r : results) {
        // In mutation mode a detector proves itself by failing.
        bool good = opt.mutate ? !r.ok : r.ok;
        all_good = all_good && good;
        ordered_json row;
        row["check"] = r.name;
        row["orders"] = r.orders;
        row["status"] = opt.mutate ? (r.ok ? "not_flipped" : "flipped")
                                   : (r.ok ? "pass" : "fail");
        if (r.first_discrepancy) {
            ordered_json d;
            d["exponents"] = r.first_discrepancy->exponents;
            d["lhs"] = r.first_discrepancy->lhs.get_str();
            d["rhs"] = r.first_discrepancy->rhs.get_str();
            row["first_discrepancy"] = d;
        } else {
            row["first_discrepancy"] = nullptr;
        }
        row["note"] = r.note;
        rows.push_back(row);
        if (opt.mutate)
            text << (good ? "flipped " : "NOT-FLIPPED ");
        else
            text << (good ? "PASS " : "FAIL ");
        text << r.name << " [" << r.orders << "]";
        if (!r.note.empty()) text << " -- " << r.note;
        text << "\n";
    }
    const char* verdict = opt.mutate ? (all_good ? "all checks flipped" : "CHECKS DID NOT FLIP")
                                     : (all_good ? "all checks passed" : "CHECKS FAILED");
    text << verdict << " (" << results.size() << " run)\n";
    emit(format, rows, text.str());
    if (results.empty()) {
        std::cerr << "no check matches --only filter '" << only << "'\n";
        return 1;
    }
    return all_good ? 0 : 1;
}

// ---------------------------------------------------------------------------
// census

int cmd_census(long genus, long min_edges, long max_edges, long max_r,
               const std::string& method, const std::string& out_path,
               const std::string& format, const std::string& cache_flag) {
    if (method == "oracle" && max_edges > kOracleMaxEdges)
        throw CLI::ValidationError("--method",
                                   "oracle supports at most " +
                                       std::to_string(kOracleMaxEdges) + " edges");
    MemoTable memo;
    CacheGuard guard(memo, cache_dir_from(cache_flag));

    struct Row {
        long n;
        BoundaryProfile p;
        std::string method;
        ExactInt count;
    };
    std::vector<Row> rows;
    bool agree = true;
    std::string first_disagreement;
    for (long n = min_edges; n <= max_edges; ++n) {
        std::optional<Census> census;
        bool want_oracle =
            method == "oracle" || (method == "all" && n <= kOracleMaxEdges);
        if (want_oracle) census = build_census_parallel(static_cast<int>(n));
        for (const auto& p : feasible_profiles(genus, n, max_r)) {
            std::vector<Row> group;
            if (method == "closed" || method == "all") {
                if (auto c = closed_count(genus, n, p))
                    group.push_back({n, p, "closed", *c});
                else if (method == "closed")
                    throw CLI::ValidationError(
                        "--method", "no closed form for genus " + std::to_string(genus));
            }
            if (method == "recurrence" || method == "all")
                group.push_back({n, p, "recurrence", count_recursive(genus, n, p, memo)});
            if (want_oracle) group.push_back({n, p, "oracle", census_lookup(*census, genus, p)});
            for (const auto& row : group) {
                if (row.count != group.front().count && agree) {
                    agree = false;
                    first_disagreement = "n=" + std::to_string(n) + " boundaries=" +
                                         boundaries_text(p, ',');
                }
            }
            std::sort(group.begin(), group.end(),
                      [](const Row& a, const Row& b) { return a.method < b.method; });
            for (auto& row : group) rows.push_back(std::move(row));
        }
    }

    std::string body;
    if (format == "csv") {
        body = "genus,n,boundaries,count,method\n";
        for (const auto& row : rows)
            body += std::to_string(genus) + "," + std::to_string(row.n) + "," +
                    boundaries_text(row.p, ';') + "," + row.count.get_str() + "," +
                    row.method + "\n";
    } else {
        ordered_json arr = ordered_json::array();
        for (const auto& row : rows) {
            ordered_json j;
            j["genus"] = genus;
            j["n"] = row.n;
            j["boundaries"] = boundaries_json(row.p);
            j["count"] = row.count.get_str();
            j["method"] = row.method;
            arr.push_back(j);
        }
        body = arr.dump(2) + "\n";
    }
    if (out_path.empty()) {
        std::cout << body;
    } else {
        std::ofstream os(out_path, std::ios::binary);
        if (!os) throw CLI::ValidationError("--out", "cannot open '" + out_path + "'");
        os << body;
        if (!os) throw CLI::ValidationError("--out", "write failed for '" + out_path + "'");
    }
    if (!agree) std::cerr << "method disagreement at " << first_disagreement << "\n";
    return agree ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Exact counts of rooted triangulations of orientable surfaces with boundary:\n"
        "closed formulas, a root-edge-removal recurrence, and exhaustive enumeration,\n"
        "cross-checked against each other and against the series identities they rest on."};
    app.require_subcommand(1);
    std::string cache_flag;
    app.add_option("--cache-dir", cache_flag,
                   "directory for the recurrence memo cache (default: $TRICOUNT_CACHE_DIR)");

    auto* count = app.add_subcommand("count", "count triangulations for one boundary profile");
    long genus = 0, edges = 0;
    std::string bounds, method = "all", format = "text";
    count->add_option("--genus", genus, "surface genus")->check(CLI::Range(0, 15));
    count->add_option("--edges", edges, "number of edges")->required()->check(CLI::Range(1l, 1000l));
    count->add_option("--boundaries", bounds, "comma-separated lengths, root boundary first")
        ->required();
    count->add_option("--method", method, "closed | recurrence | oracle | all")
        ->check(CLI::IsMember({"closed", "recurrence", "oracle", "all"}));
    count->add_option("--format", format, "text | json")
        ->check(CLI::IsMember({"text", "json"}));

    auto* seq = app.add_subcommand("seq", "dump a reference sequence");
    std::string which = "h", seq_format = "text";
    long length = 8;
    seq->add_option("--which", which, "h (kernel coefficients) | disk (boundary-1 counts)")
        ->check(CLI::IsMember({"h", "disk"}));
    seq->add_option("--length", length, "number of terms")->check(CLI::Range(0l, 200l));
    seq->add_option("--format", seq_format, "text | json")
        ->check(CLI::IsMember({"text", "json"}));

    auto* series = app.add_subcommand("series", "print a counting series");
    std::string sname = "u0", smethod = "closed", sformat = "text";
    int sx = 12, sy = 4, sz = 4;
    series->add_option("--name", sname, "u0 u1 u1sym u2 u2sym u3sym t10 t20");
    series->add_option("--x-order", sx, "edge-variable order")->check(CLI::Range(1, 60));
    series->add_option("--y-order", sy, "root-boundary order")->check(CLI::Range(1, 30));
    series->add_option("--z-order", sz, "other-boundary order")->check(CLI::Range(1, 30));
    series->add_option("--method", smethod, "closed | recurrence | all")
        ->check(CLI::IsMember({"closed", "recurrence", "all"}));
    series->add_option("--format", sformat, "text | json")
        ->check(CLI::IsMember({"text", "json"}));

    auto* verify = app.add_subcommand("verify", "run the identity and agreement checks");
    LabOptions lab;
    std::string only, vformat = "text";
    bool no_cross = false;
    verify->add_option("--x-order", lab.x_order, "kernel checks: x order");
    verify->add_option("--y-order", lab.y_order, "kernel checks: y order");
    verify->add_option("--xz-order", lab.xz_order, "multi-hole checks: x order");
    verify->add_option("--yz-order", lab.yz_order, "multi-hole checks: y/z order");
    verify->add_option("--t-order", lab.t_order, "reindexed checks: t order");
    verify->add_option("--ty-order", lab.ty_order, "reindexed checks: root order");
    verify->add_option("--tz-order", lab.tz_order, "reindexed checks: hole order");
    verify->add_flag("--mutate", lab.mutate,
                     "corrupt each check's ingredients; every check must then fail");
    verify->add_option("--only", only, "run only checks whose name contains this substring");
    verify->add_flag("--no-cross", no_cross, "skip the cross-method agreement checks");
    verify->add_option("--format", vformat, "text | json")
        ->check(CLI::IsMember({"text", "json"}));

    auto* census = app.add_subcommand("census", "tabulate counts for every feasible profile");
    long cgenus = 0, cmin = 1, cmax = 0, cmaxr = 3;
    std::string cmethod = "all", cout_path, cformat = "csv";
    census->add_option("--genus", cgenus, "surface genus")->check(CLI::Range(0, 15));
    census->add_option("--min-edges", cmin, "smallest edge count")->check(CLI::Range(1l, 1000l));
    census->add_option("--max-edges", cmax, "largest edge count")
        ->required()
        ->check(CLI::Range(0l, 1000l));
    census->add_option("--max-boundaries", cmaxr, "largest number of non-root boundaries")
        ->check(CLI::Range(0l, 5l));
    census->add_option("--method", cmethod, "closed | recurrence | oracle | all")
        ->check(CLI::IsMember({"closed", "recurrence", "oracle", "all"}));
    census->add_option("--out", cout_path, "output file (default: stdout)");
    census->add_option("--format", cformat, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (*count) return cmd_count(genus, edges, bounds, method, format, cache_flag);
        if (*seq) return cmd_seq(which, length, seq_format);
        if (*series) return cmd_series(sname, sx, sy, sz, smethod, sformat, cache_flag);
        if (*verify) return cmd_verify(lab, only, no_cross, vformat, cache_flag);
        if (*census)
            return cmd_census(cgenus, cmin, cmax, cmaxr, cmethod, cout_path, cformat,
                              cache_flag);
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
