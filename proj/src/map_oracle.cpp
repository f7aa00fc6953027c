#include "tricount/map_oracle.hpp"

#include <omp.h>

#include <algorithm>
#include <stdexcept>
#include <tuple>

namespace tricount {

MapStructure analyze(const DartMap& m) {
    const int nd = 2 * m.edges;
    MapStructure s;
    s.vertex_of.assign(nd, -1);
    for (int d = 0; d < nd; ++d) {
        if (s.vertex_of[d] != -1) continue;
        int v = s.vertices++;
        int e = d;
        do {
            s.vertex_of[e] = v;
            e = m.sigma[e];
        } while (e != d);
    }
    std::vector<int> face_of(nd, -1);
    for (int d = 0; d < nd; ++d) {
        if (face_of[d] != -1) continue;
        int f = s.faces++;
        s.face_darts.emplace_back();
        int e = d;
        do {
            face_of[e] = f;
            s.face_darts.back().push_back(e);
            e = m.phi(e);
        } while (e != d);
    }
    s.face_of_root = face_of[0];
    int chi = s.vertices - m.edges + s.faces;
    if ((2 - chi) % 2 != 0 || chi > 2)
        throw std::logic_error("analyze: impossible Euler characteristic");
    s.genus = (2 - chi) / 2;
    return s;
}

namespace {

// Depth-first construction of sigma in canonical label order.
struct Enumerator {
    int nd;
    std::vector<int> sigma;
    std::vector<char> used;  // dart already taken as a sigma image
    int next_fresh;
    const std::function<void(const DartMap&)>* visit;

    explicit Enumerator(int n)
        : nd(2 * n), sigma(nd, -1), used(nd, 0), next_fresh(2), visit(nullptr) {}

    void run(int d) {
        if (d == nd) {
            if (next_fresh == nd) {
                DartMap m;
                m.edges = nd / 2;
                m.sigma = sigma;
                (*visit)(m);
            }
            return;
        }
        if (d >= next_fresh) return;  // dart d was never discovered: disconnected
        for (int e = 0; e < next_fresh; ++e) {
            if (used[e]) continue;
            used[e] = 1;
            sigma[d] = e;
            run(d + 1);
            used[e] = 0;
        }
        if (next_fresh < nd) {
            int e = next_fresh;
            next_fresh += 2;
            used[e] = 1;
            sigma[d] = e;
            run(d + 1);
            used[e] = 0;
            next_fresh -= 2;
        }
        sigma[d] = -1;
    }

    // Collect copies of the search state at a fixed depth instead of recursing
    // past it (for the parallel lane).
    struct Prefix {
        std::vector<int> sigma;
        std::vector<char> used;
        int next_fresh;
    };

    void collect(int d, int limit, std::vector<Prefix>& out) {
        if (d == limit) {
            out.push_back(Prefix{sigma, used, next_fresh});
            return;
        }
        if (d >= next_fresh) return;
        for (int e = 0; e < next_fresh; ++e) {
            if (used[e]) continue;
            used[e] = 1;
            sigma[d] = e;
            collect(d + 1, limit, out);
            used[e] = 0;
        }
        if (next_fresh < nd) {
            int e = next_fresh;
            next_fresh += 2;
            used[e] = 1;
            sigma[d] = e;
            collect(d + 1, limit, out);
            used[e] = 0;
            next_fresh -= 2;
        }
        sigma[d] = -1;
    }
};

void check_n(int n) {
    if (n < 1 || n > 10) throw std::invalid_argument("map oracle: n must be in 1..10");
}

// Add one map's hole assignments to the census. A face can serve as a hole
// only if its contour is simple (all tail vertices distinct); every non-root
// face that is not a triangle must be a hole; simple triangles may go either
// way; chosen holes (root face included) must be pairwise vertex-disjoint.
void contribute(const DartMap& m, Census& census) {
    MapStructure s = analyze(m);
    const int nf = s.faces;
    std::vector<uint64_t> vmask(nf, 0);
    std::vector<char> simple(nf, 1);
    for (int f = 0; f < nf; ++f) {
        for (int d : s.face_darts[f]) {
            uint64_t bit = uint64_t{1} << s.vertex_of[d];
            if (vmask[f] & bit) simple[f] = 0;
            vmask[f] |= bit;
        }
    }
    const int f0 = s.face_of_root;
    if (!simple[f0]) return;
    uint64_t base = vmask[f0];
    std::vector<int> mandatory_deg;
    std::vector<int> optional;
    for (int f = 0; f < nf; ++f) {
        if (f == f0) continue;
        int deg = static_cast<int>(s.face_darts[f].size());
        if (deg != 3) {
            if (!simple[f]) return;      // forced hole with a pinched contour
            if (vmask[f] & base) return; // forced holes must avoid each other
            base |= vmask[f];
            mandatory_deg.push_back(deg);
        } else if (simple[f]) {
            optional.push_back(f);
        }
    }
    std::sort(mandatory_deg.begin(), mandatory_deg.end());

    std::vector<int> chosen;  // degrees of optional holes taken (all equal 3)
    auto record = [&]() {
        CensusKey key;
        key.genus = s.genus;
        key.alpha0 = static_cast<int>(s.face_darts[f0].size());
        key.holes = mandatory_deg;
        key.holes.insert(key.holes.end(), chosen.begin(), chosen.end());
        std::sort(key.holes.begin(), key.holes.end());
        ExactInt weight = 1;
        size_t i = 0;
        while (i < key.holes.size()) {
            size_t j = i;
            while (j < key.holes.size() && key.holes[j] == key.holes[i]) ++j;
            weight *= factorial(static_cast<long>(j - i));
            i = j;
        }
        census[key] += weight;
    };
    // Subsets of the optional (simple triangle) faces, pruned by disjointness.
    std::function<void(size_t, uint64_t)> pick = [&](size_t idx, uint64_t mask) {
        if (idx == optional.size()) {
            record();
            return;
        }
        pick(idx + 1, mask);  // this triangle stays an interior face
        int f = optional[idx];
        if (!(vmask[f] & mask)) {
            chosen.push_back(3);
            pick(idx + 1, mask | vmask[f]);
            chosen.pop_back();
        }
    };
    pick(0, base);
}

void merge_census(Census& into, const Census& from) {
    for (const auto& [key, value] : from) into[key] += value;
}

}  // namespace

void enumerate_rooted_maps(int n, const std::function<void(const DartMap&)>& visit) {
    check_n(n);
    Enumerator en(n);
    en.visit = &visit;
    en.run(0);
}

uint64_t count_all_rooted_maps(int n) {
    uint64_t total = 0;
    enumerate_rooted_maps(n, [&](const DartMap&) { ++total; });
    return total;
}

Census build_census(int n) {
    check_n(n);
    Census census;
    enumerate_rooted_maps(n, [&](const DartMap& m) { contribute(m, census); });
    return census;
}

Census build_census_parallel(int n) {
    check_n(n);
    Enumerator seed(n);
    std::vector<Enumerator::Prefix> prefixes;
    const int depth = std::min(2 * n, 5);
    seed.collect(0, depth, prefixes);

    Census census;
#pragma omp parallel
    {
        Census local;
        std::function<void(const DartMap&)> visit = [&](const DartMap& m) {
            contribute(m, local);
        };
#pragma omp for schedule(dynamic)
        for (size_t i = 0; i < prefixes.size(); ++i) {
            Enumerator en(n);
            en.sigma = prefixes[i].sigma;
            en.used = prefixes[i].used;
            en.next_fresh = prefixes[i].next_fresh;
            en.visit = &visit;
            en.run(depth);
        }
#pragma omp critical
        merge_census(census, local);
    }
    return census;
}

bool CensusKey::operator<(const CensusKey& o) const {
    return std::tie(genus, alpha0, holes) < std::tie(o.genus, o.alpha0, o.holes);
}

ExactInt census_lookup(const Census& c, long genus, const BoundaryProfile& p) {
    p.validate();
    CensusKey key;
    key.genus = static_cast<int>(genus);
    key.alpha0 = static_cast<int>(p.alpha0);
    key.holes.assign(p.others.begin(), p.others.end());
    std::sort(key.holes.begin(), key.holes.end());
    auto it = c.find(key);
    return it == c.end() ? ExactInt(0) : it->second;
}

ExactInt count_by_oracle(long genus, long n, const BoundaryProfile& p) {
    check_n(static_cast<int>(n));
    Census census = build_census(static_cast<int>(n));
    return census_lookup(census, genus, p);
}

}  // namespace tricount
