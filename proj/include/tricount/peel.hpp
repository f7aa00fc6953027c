#pragma once

#include "tricount/closed_forms.hpp"
#include "tricount/exact.hpp"
#include "tricount/series.hpp"

#include <cstdint>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

namespace tricount {

// Canonical key of the root-edge-removal recurrence: genus, edge count,
// root-hole boundary length, multiset of the other boundary lengths
// (sorted ascending; counts are symmetric in the non-root holes).
struct CountKey {
    int genus = 0;
    int n = 0;
    int alpha0 = 0;
    std::vector<int> others;

    static CountKey make(long genus, long n, const BoundaryProfile& p);
    // Injective packing for memoization: genus:4 | n:8 | alpha0:8 | 5 parts x 8.
    uint64_t pack() const;
    static CountKey unpack(uint64_t bits);
};

struct PeelOptions {
    // The surface-splitting term convolves genus g1 + g2 = g over g1 = 0..g.
    // Setting this false restricts to g1 = 1..g; that variant exists only to
    // demonstrate (against exhaustive enumeration) that it undercounts.
    bool genus_split_from_zero = true;
};

// Thread-safe single-assignment memo (sharded; duplicate computation of the
// same key is harmless because values are deterministic).
class MemoTable {
  public:
    explicit MemoTable(size_t shards = 64);
    MemoTable(const MemoTable&) = delete;
    MemoTable& operator=(const MemoTable&) = delete;

    bool lookup(uint64_t key, ExactInt& out) const;
    void store(uint64_t key, ExactInt v);
    size_t size() const;
    void clear();

    // Line-oriented cache: "g n alpha0 [others...] <TAB> value", sorted.
    void save(const std::string& path) const;
    void load(const std::string& path);  // merges; bad lines are an error

  private:
    struct Shard {
        mutable std::mutex mu;
        std::unordered_map<uint64_t, ExactInt> map;
    };
    std::vector<Shard> shards_;
    Shard& shard_for(uint64_t key);
    const Shard& shard_for(uint64_t key) const;
};

// Exact count by the recurrence (root-edge removal): cases are
//   A: the peeled triangle's apex is an interior vertex,
//   B: the apex splits the root hole / the surface in two,
//   C: the apex lies on another hole (holes merge),
//   D: the apex closes a handle (genus drops, a new hole appears).
// Base case: one edge, a disk whose boundary has length 2.
ExactInt count_recursive(long genus, long n, const BoundaryProfile& p, MemoTable& memo,
                         const PeelOptions& opt = {});
ExactInt count_recursive(long genus, long n, const BoundaryProfile& p);

// Compute a batch of keys in parallel into the shared memo (OpenMP lane;
// equals the serial recursion exactly).
void warm_memo_parallel(const std::vector<CountKey>& queries, MemoTable& memo,
                        const PeelOptions& opt = {});

// Generating series assembled from the recurrence: coefficient of
// x^n y^a0 z1^a1...zr^ar is the labeled count for that profile.
// With symmetrized=true each coefficient is multiplied by a1*...*ar.
MultiSeries series_from_dp(long genus, long r, int x_order, int boundary_order,
                           MemoTable& memo, bool symmetrized = false);

// Genus-0 counts reindexed as a series in t: the coefficient of
// t^(k+1-r) y^a0 z1^a1..zr^ar is the count at n = 2m+3k, m = a0+sum(aj).
MultiSeries uhat_from_dp(long r, int t_order, int boundary_order, MemoTable& memo);

}  // namespace tricount
