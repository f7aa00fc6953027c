#pragma once

#include "tricount/closed_forms.hpp"
#include "tricount/exact.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

namespace tricount {

// Rotation system on 2n darts. Edge pairing is d <-> d^1, the root is dart 0,
// sigma[d] is the next dart counterclockwise around the tail vertex of d, and
// the next dart along a face contour is phi(d) = sigma[d^1].
struct DartMap {
    int edges = 0;
    std::vector<int> sigma;

    int alpha(int d) const { return d ^ 1; }
    int phi(int d) const { return sigma[static_cast<size_t>(d ^ 1)]; }
};

struct MapStructure {
    int vertices = 0;
    int faces = 0;
    int genus = 0;
    std::vector<int> vertex_of;                // dart -> vertex id
    std::vector<std::vector<int>> face_darts;  // face id -> darts in contour order
    int face_of_root = 0;
};

MapStructure analyze(const DartMap& m);

// Visit every rooted map with n edges (connected, any genus) exactly once.
// Canonical labels: darts are discovered in increasing order, so a sigma
// image is either an already-discovered dart or the lowest fresh edge.
void enumerate_rooted_maps(int n, const std::function<void(const DartMap&)>& visit);

uint64_t count_all_rooted_maps(int n);

// Census of triangulations-with-holes assembled from the exhaustive map run.
// Key: genus, root hole length, sorted multiset of the other hole lengths.
// Value: number of (map, labeled hole family) pairs, i.e. each map counts
// prod_v mult(v)! per unordered hole choice so lookups by an ordered boundary
// profile need no further symmetry factor.
struct CensusKey {
    int genus = 0;
    int alpha0 = 0;
    std::vector<int> holes;

    bool operator<(const CensusKey& o) const;
    bool operator==(const CensusKey& o) const = default;
};
using Census = std::map<CensusKey, ExactInt>;

Census build_census(int n);           // serial reference
Census build_census_parallel(int n);  // OpenMP over search-tree prefixes

ExactInt census_lookup(const Census& c, long genus, const BoundaryProfile& p);

// One-shot exhaustive count (rebuilds the census for n; prefer build_census
// plus census_lookup when scanning many profiles).
ExactInt count_by_oracle(long genus, long n, const BoundaryProfile& p);

}  // namespace tricount
