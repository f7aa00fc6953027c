#pragma once

#include "tricount/exact.hpp"
#include "tricount/series.hpp"

#include <optional>
#include <string>
#include <vector>

namespace tricount {

// Boundary profile of a triangulated surface with holes: hole 0 carries the
// root (a directed edge on its boundary with the hole on its fixed side);
// the other holes are labeled 1..r. All boundary lengths are >= 1.
struct BoundaryProfile {
    long alpha0 = 0;
    std::vector<long> others;  // alpha_1 .. alpha_r, labeled

    long r() const { return static_cast<long>(others.size()); }
    long total() const;  // m = alpha0 + sum(others)
    void validate() const;
};

// Reasons a (genus, n, profile) query is structurally empty.
enum class InfeasibleReason {
    kMod3,       // 2n - m not divisible by 3
    kKBelowR,    // k = (n-2m)/3 < r-1
    kEulerBound  // vertex count cannot host disjoint simple boundaries (k < r-1+2g)
};
std::optional<InfeasibleReason> classify_infeasible(long genus, long n,
                                                    const BoundaryProfile& p);
std::string to_string(InfeasibleReason r);

// Every structurally nonempty profile at (genus, n) with at most max_r
// non-root boundaries: root length first, the rest ascending. Deterministic
// order: by total boundary length, then hole count, then lexicographically.
std::vector<BoundaryProfile> feasible_profiles(long genus, long n, long max_r);

// Closed-form count of rooted genus-0 triangulations with n edges and
// labeled boundary profile p. Zero off support; result asserted integral.
ExactInt count_theorem1(long n, const BoundaryProfile& p);

// Count with an extra root on each non-root hole: prod_{j>=1} alpha_j times
// count_theorem1. Fully symmetric in (alpha0, alpha_1..alpha_r).
ExactInt count_sym(long n, const BoundaryProfile& p);

// One-hole specialization (disk with boundary length m):
// m C(2m,m) 4^k (2m+3k-2)!! / ((k+1)! (2m+k)!!), n = 2m+3k.
ExactInt count_disk(long n, long m);

// [x^n] h(x)^m = (m/k!) 4^k (m+3k-2)!!/(m+k)!! for n = m+3k, else 0.
ExactRat h_power_coeff(long n, long m);

// Closed-form generating functions, built by series algebra over the
// algebraic kernel h(x). Variables are named "x", "y" (root hole) and
// "z"/"z1".."z3" (other holes); coefficient of x^n y^a0 z1^a1... is the
// corresponding count.
MultiSeries gf_u0(int x_order, int y_order);
MultiSeries gf_u1(int x_order, int y_order, int z_order);
MultiSeries gf_u2(int x_order, int y_order, int z_order);
MultiSeries gf_u1sym(int x_order, int y_order, int z_order);
MultiSeries gf_u2sym(int x_order, int y_order, int z_order);
MultiSeries gf_u3sym(int x_order, int y_order, int z_order);
// One-hole counts on genus 1 and genus 2 surfaces.
MultiSeries gf_t10(int x_order, int y_order);
MultiSeries gf_t20(int x_order, int y_order);

// Rooted slicings (boundary-only maps) with boundary cycle lengths n_1..n_k:
// (n-1)!/(n-k+2)! * prod (2 n_i)!/(n_i! (n_i-1)!), n = sum n_i.
ExactInt slicings_gamma(const std::vector<long>& parts);

// Disk triangulations with boundary length 1 and k internal vertices
// ("almost trivalent": every vertex has degree 3 except the boundary one).
// A widely printed closed form for this count carries a constant that is off
// by a factor of 4; the report evaluates both and flags the mismatch.
struct AlmostTrivalentReport {
    ExactInt count;            // count_disk(2+3k, 1)
    ExactRat printed_variant;  // 2*4^(k-1) (3k)!!/((k+1)!(k+2)!!)
    bool printed_matches;
};
ExactInt almost_trivalent(long k);
AlmostTrivalentReport almost_trivalent_report(long k);

}  // namespace tricount
