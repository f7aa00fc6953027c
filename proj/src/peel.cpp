#include "tricount/peel.hpp"

#include <omp.h>

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace tricount {

namespace {

constexpr int kMaxOthers = 5;

void check_ranges(int genus, int n, int alpha0, const std::vector<int>& others) {
    if (genus < 0 || genus > 15) throw std::invalid_argument("peel: genus out of packable range");
    if (n < 0 || n > 255) throw std::invalid_argument("peel: edge count out of packable range");
    if (alpha0 < 0 || alpha0 > 255)
        throw std::invalid_argument("peel: root boundary out of packable range");
    if (others.size() > kMaxOthers)
        throw std::invalid_argument("peel: too many non-root holes to pack");
    for (int v : others) {
        if (v < 1 || v > 255) throw std::invalid_argument("peel: hole length out of packable range");
    }
}

}  // namespace

CountKey CountKey::make(long genus, long n, const BoundaryProfile& p) {
    CountKey k;
    k.genus = static_cast<int>(genus);
    k.n = static_cast<int>(n);
    k.alpha0 = static_cast<int>(p.alpha0);
    k.others.assign(p.others.begin(), p.others.end());
    std::sort(k.others.begin(), k.others.end());
    check_ranges(k.genus, k.n, k.alpha0, k.others);
    return k;
}

uint64_t CountKey::pack() const {
    check_ranges(genus, n, alpha0, others);
    uint64_t bits = static_cast<uint64_t>(genus);
    bits = (bits << 8) | static_cast<uint64_t>(n);
    bits = (bits << 8) | static_cast<uint64_t>(alpha0);
    for (int slot = 0; slot < kMaxOthers; ++slot) {
        uint64_t part = slot < static_cast<int>(others.size())
                            ? static_cast<uint64_t>(others[slot])
                            : 0;  // parts are >= 1, so 0 marks an empty slot
        bits = (bits << 8) | part;
    }
    return bits;
}

CountKey CountKey::unpack(uint64_t bits) {
    CountKey k;
    std::vector<int> rev;
    for (int slot = 0; slot < kMaxOthers; ++slot) {
        int part = static_cast<int>(bits & 0xff);
        bits >>= 8;
        if (part != 0) rev.push_back(part);
    }
    k.others.assign(rev.rbegin(), rev.rend());
    k.alpha0 = static_cast<int>(bits & 0xff);
    bits >>= 8;
    k.n = static_cast<int>(bits & 0xff);
    bits >>= 8;
    k.genus = static_cast<int>(bits & 0xf);
    return k;
}

MemoTable::MemoTable(size_t shards) : shards_(shards == 0 ? 1 : shards) {}

MemoTable::Shard& MemoTable::shard_for(uint64_t key) {
    return shards_[std::hash<uint64_t>{}(key) % shards_.size()];
}

const MemoTable::Shard& MemoTable::shard_for(uint64_t key) const {
    return shards_[std::hash<uint64_t>{}(key) % shards_.size()];
}

bool MemoTable::lookup(uint64_t key, ExactInt& out) const {
    const Shard& s = shard_for(key);
    std::lock_guard<std::mutex> lock(s.mu);
    auto it = s.map.find(key);
    if (it == s.map.end()) return false;
    out = it->second;
    return true;
}

void MemoTable::store(uint64_t key, ExactInt v) {
    Shard& s = shard_for(key);
    std::lock_guard<std::mutex> lock(s.mu);
    s.map.emplace(key, std::move(v));  // first writer wins; values agree anyway
}

size_t MemoTable::size() const {
    size_t total = 0;
    for (const Shard& s : shards_) {
        std::lock_guard<std::mutex> lock(s.mu);
        total += s.map.size();
    }
    return total;
}

void MemoTable::clear() {
    for (Shard& s : shards_) {
        std::lock_guard<std::mutex> lock(s.mu);
        s.map.clear();
    }
}

void MemoTable::save(const std::string& path) const {
    std::map<uint64_t, std::string> rows;  // ordered for deterministic output
    for (const Shard& s : shards_) {
        std::lock_guard<std::mutex> lock(s.mu);
        for (const auto& [key, value] : s.map) {
            CountKey k = CountKey::unpack(key);
            std::ostringstream line;
            line << k.genus << ' ' << k.n << ' ' << k.alpha0;
            for (int v : k.others) line << ' ' << v;
            line << '\t' << value.get_str();
            rows.emplace(key, line.str());
        }
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("peel: cannot write cache file " + path);
    for (const auto& [key, line] : rows) out << line << '\n';
}

void MemoTable::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("peel: cannot read cache file " + path);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos) throw std::runtime_error("peel: malformed cache line");
        std::istringstream head(line.substr(0, tab));
        CountKey k;
        if (!(head >> k.genus >> k.n >> k.alpha0)) {
            throw std::runtime_error("peel: malformed cache key");
        }
        int part;
        while (head >> part) k.others.push_back(part);
        std::sort(k.others.begin(), k.others.end());
        ExactInt value(line.substr(tab + 1));
        store(k.pack(), std::move(value));
    }
}

namespace {

long others_sum(const std::vector<int>& others) {
    long s = 0;
    for (int v : others) s += v;
    return s;
}

// (value, multiplicity) runs of a sorted multiset.
std::vector<std::pair<int, int>> runs_of(const std::vector<int>& sorted) {
    std::vector<std::pair<int, int>> runs;
    for (int v : sorted) {
        if (!runs.empty() && runs.back().first == v) {
            ++runs.back().second;
        } else {
            runs.emplace_back(v, 1);
        }
    }
    return runs;
}

// Same layout as CountKey::pack, without materializing a CountKey.
// `others` must already be sorted ascending.
uint64_t pack_fields(int genus, int n, int alpha0, const std::vector<int>& others) {
    check_ranges(genus, n, alpha0, others);
    uint64_t bits = static_cast<uint64_t>(genus);
    bits = (bits << 8) | static_cast<uint64_t>(n);
    bits = (bits << 8) | static_cast<uint64_t>(alpha0);
    for (int slot = 0; slot < kMaxOthers; ++slot) {
        uint64_t part = slot < static_cast<int>(others.size())
                            ? static_cast<uint64_t>(others[slot])
                            : 0;
        bits = (bits << 8) | part;
    }
    return bits;
}

struct Evaluator {
    MemoTable& memo;
    PeelOptions opt;

    // Structural vanishing without touching the memo: the triangle count
    // (2n - m)/3 must be a non-negative integer and the Euler relation needs
    // k >= r - 1 + 2g interior-vertex budget, where n = 2m + 3k.
    static bool quick_zero(int genus, int n, int alpha0, long m, long r) {
        if (genus < 0 || n < 1 || alpha0 < 1) return true;
        if ((2L * n - m) % 3 != 0 || 2L * n < m) return true;
        long k = (static_cast<long>(n) - 2 * m) / 3;  // exact; may be negative
        return k < r - 1 + 2L * genus;
    }

    // `others` must be sorted ascending.
    ExactInt eval(int genus, int n, int alpha0, const std::vector<int>& others) {
        long m = alpha0 + others_sum(others);
        long r = static_cast<long>(others.size());
        if (quick_zero(genus, n, alpha0, m, r)) return 0;
        if (n == 1) return (genus == 0 && alpha0 == 2 && others.empty()) ? 1 : 0;

        uint64_t packed = pack_fields(genus, n, alpha0, others);
        ExactInt cached;
        if (memo.lookup(packed, cached)) return cached;

        ExactInt total = 0;

        // A: apex of the peeled triangle is a new interior vertex.
        total += eval(genus, n - 1, alpha0 + 1, others);

        // C: apex lies on another hole of length a; the holes merge.
        auto runs = runs_of(others);
        for (size_t i = 0; i < runs.size(); ++i) {
            auto [a, mult] = runs[i];
            std::vector<int> rest;
            rest.reserve(others.size() - 1);
            bool removed = false;
            for (int v : others) {
                if (!removed && v == a) {
                    removed = true;
                    continue;
                }
                rest.push_back(v);
            }
            total += ExactInt(mult) * eval(genus, n - 1, alpha0 + a + 1, rest);
        }

        // B: apex lands back on the root hole; the map splits in two pieces
        // sharing nothing but that vertex. Sum over the split of the genus,
        // of the remaining root boundary (m1 + m2 = alpha0 + 1), of the
        // edges (n1 + n2 = n - 1), and of the other holes as a labeled
        // sub-multiset (binomial multiplicities per value). The m1 loop is
        // restricted to its feasible residue class and Euler bound, which is
        // what keeps large sweeps affordable.
        {
            int g_lo = opt.genus_split_from_zero ? 0 : 1;
            // Enumerate sub-multisets by choosing 0..mult from each run
            // (mixed-radix odometer).
            std::vector<int> take(runs.size(), 0);
            while (true) {
                std::vector<int> sub1, sub2;
                ExactInt ways = 1;
                for (size_t i = 0; i < runs.size(); ++i) {
                    ways *= binomial(runs[i].second, take[i]);
                    for (int c = 0; c < take[i]; ++c) sub1.push_back(runs[i].first);
                    for (int c = take[i]; c < runs[i].second; ++c) sub2.push_back(runs[i].first);
                }
                long s1 = others_sum(sub1);
                long s2 = others_sum(sub2);
                long r1 = static_cast<long>(sub1.size());
                long r2 = static_cast<long>(sub2.size());
                for (int g1 = g_lo; g1 <= genus; ++g1) {
                    int g2 = genus - g1;
                    for (int n1 = 1; n1 <= n - 2; ++n1) {
                        int n2 = n - 1 - n1;
                        // m1 must satisfy m1 = 2 n1 - s1 (mod 3) and the
                        // Euler budget n1 - 2(m1+s1) >= 3(r1 - 1 + 2 g1).
                        long cap = std::min<long>(
                            alpha0, (n1 - 2 * s1 - 3 * (r1 - 1 + 2L * g1)) / 2);
                        long res = ((2L * n1 - s1) % 3 + 3) % 3;
                        long start = res == 0 ? 3 : res;
                        for (long m1 = start; m1 <= cap; m1 += 3) {
                            long m2 = alpha0 + 1 - m1;
                            if (quick_zero(g2, n2, static_cast<int>(m2), m2 + s2, r2)) continue;
                            ExactInt c1 = eval(g1, n1, static_cast<int>(m1), sub1);
                            if (c1 == 0) continue;
                            ExactInt c2 = eval(g2, n2, static_cast<int>(m2), sub2);
                            if (c2 == 0) continue;
                            total += ways * c1 * c2;
                        }
                    }
                }
                size_t i = 0;
                while (i < runs.size() && take[i] == runs[i].second) take[i++] = 0;
                if (i == runs.size()) break;
                ++take[i];
            }
        }

        // D: apex lands back on the root hole around a handle; the genus
        // drops and the root hole sheds a new hole of length b (the b
        // possible roots of that hole give the factor b).
        if (genus >= 1) {
            for (int b = 1; b <= alpha0; ++b) {
                std::vector<int> extended = others;
                extended.insert(std::upper_bound(extended.begin(), extended.end(), b), b);
                total += ExactInt(b) * eval(genus - 1, n - 1, alpha0 + 1 - b, extended);
            }
        }

        memo.store(packed, total);
        return total;
    }
};

}  // namespace

ExactInt count_recursive(long genus, long n, const BoundaryProfile& p, MemoTable& memo,
                         const PeelOptions& opt) {
    p.validate();
    if (genus < 0) throw std::invalid_argument("count_recursive: genus must be >= 0");
    if (n < 1) return 0;
    CountKey key = CountKey::make(genus, n, p);  // validates packable ranges
    Evaluator ev{memo, opt};
    return ev.eval(key.genus, key.n, key.alpha0, key.others);
}

ExactInt count_recursive(long genus, long n, const BoundaryProfile& p) {
    MemoTable memo;
    return count_recursive(genus, n, p, memo);
}

void warm_memo_parallel(const std::vector<CountKey>& queries, MemoTable& memo,
                        const PeelOptions& opt) {
#pragma omp parallel for schedule(dynamic)
    for (size_t i = 0; i < queries.size(); ++i) {
        Evaluator ev{memo, opt};
        ev.eval(queries[i].genus, queries[i].n, queries[i].alpha0, queries[i].others);
    }
}

namespace {

// All non-decreasing r-tuples with entries in 1..cap.
void for_each_multiset(int r, int cap, const std::function<void(const std::vector<int>&)>& fn) {
    std::vector<int> tuple(r, 1);
    if (r == 0) {
        fn(tuple);
        return;
    }
    while (true) {
        fn(tuple);
        int i = r - 1;
        while (i >= 0 && tuple[i] == cap) --i;
        if (i < 0) break;
        int v = tuple[i] + 1;
        for (int j = i; j < r; ++j) tuple[j] = v;
    }
}

// Distinct permutations of a sorted tuple.
std::vector<std::vector<int>> distinct_permutations(std::vector<int> sorted) {
    std::vector<std::vector<int>> out;
    do {
        out.push_back(sorted);
    } while (std::next_permutation(sorted.begin(), sorted.end()));
    return out;
}

std::vector<std::string> boundary_names(long r) {
    std::vector<std::string> names{"y"};
    if (r == 1) {
        names.push_back("z");  // match the closed-form one-hole series
    } else {
        for (long j = 1; j <= r; ++j) names.push_back("z" + std::to_string(j));
    }
    return names;
}

}  // namespace

MultiSeries series_from_dp(long genus, long r, int x_order, int boundary_order,
                           MemoTable& memo, bool symmetrized) {
    if (r < 0 || r > 4) throw std::invalid_argument("series_from_dp: r out of range");
    std::vector<std::string> vars{"x"};
    for (const auto& nm : boundary_names(r)) vars.push_back(nm);
    std::vector<int> trunc{x_order};
    for (long j = 0; j <= r; ++j) trunc.push_back(boundary_order);
    MultiSeries out(vars, trunc);

    // Gather the distinct DP keys first, warm the memo in parallel, then read.
    std::vector<CountKey> keys;
    for (int n = 1; n <= x_order; ++n) {
        for (int a0 = 1; a0 <= boundary_order; ++a0) {
            for_each_multiset(static_cast<int>(r), boundary_order, [&](const std::vector<int>& zs) {
                BoundaryProfile p;
                p.alpha0 = a0;
                p.others.assign(zs.begin(), zs.end());
                long m = a0 + others_sum(zs);
                if ((2L * n - m) % 3 != 0 || 2L * n < m) return;
                long k = (n - 2 * m) / 3;
                if (k < r - 1 + 2 * genus) return;
                keys.push_back(CountKey::make(genus, n, p));
            });
        }
    }
    warm_memo_parallel(keys, memo);

    Evaluator ev{memo, PeelOptions{}};
    for (const CountKey& key : keys) {
        ExactInt c = ev.eval(key.genus, key.n, key.alpha0, key.others);
        if (c == 0) continue;
        ExactInt scale = 1;
        if (symmetrized) {
            for (int v : key.others) scale *= v;
        }
        for (const auto& perm : distinct_permutations(key.others)) {
            std::map<std::string, int> exps{{"x", key.n}, {"y", key.alpha0}};
            for (size_t j = 0; j < perm.size(); ++j) exps[vars[2 + j]] = perm[j];
            out.set_coeff(exps, ExactRat(scale * c));
        }
    }
    return out;
}

MultiSeries uhat_from_dp(long r, int t_order, int boundary_order, MemoTable& memo) {
    if (r < 0 || r > 4) throw std::invalid_argument("uhat_from_dp: r out of range");
    std::vector<std::string> vars{"t"};
    for (const auto& nm : boundary_names(r)) vars.push_back(nm);
    std::vector<int> trunc{t_order};
    for (long j = 0; j <= r; ++j) trunc.push_back(boundary_order);
    MultiSeries out(vars, trunc);

    std::vector<CountKey> keys;
    std::vector<int> texps;
    for (int a0 = 1; a0 <= boundary_order; ++a0) {
        for_each_multiset(static_cast<int>(r), boundary_order, [&](const std::vector<int>& zs) {
            long m = a0 + others_sum(zs);
            // t exponent is k + 1 - r; k >= r - 1 for a nonzero count.
            for (long k = r - 1; k + 1 - r <= t_order; ++k) {
                long n = 2 * m + 3 * k;
                if (n < 1) continue;
                if (n > 255) throw std::invalid_argument("uhat_from_dp: order too large");
                BoundaryProfile p;
                p.alpha0 = a0;
                p.others.assign(zs.begin(), zs.end());
                keys.push_back(CountKey::make(0, n, p));
                texps.push_back(static_cast<int>(k + 1 - r));
            }
        });
    }
    warm_memo_parallel(keys, memo);

    Evaluator ev{memo, PeelOptions{}};
    for (size_t i = 0; i < keys.size(); ++i) {
        const CountKey& key = keys[i];
        ExactInt c = ev.eval(key.genus, key.n, key.alpha0, key.others);
        if (c == 0) continue;
        for (const auto& perm : distinct_permutations(key.others)) {
            std::map<std::string, int> exps{{"t", texps[i]}, {"y", key.alpha0}};
            for (size_t j = 0; j < perm.size(); ++j) exps[vars[2 + j]] = perm[j];
            out.set_coeff(exps, ExactRat(c));
        }
    }
    return out;
}

}  // namespace tricount
