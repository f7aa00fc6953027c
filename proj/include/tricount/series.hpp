#pragma once

#include "tricount/exact.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tricount {

// Sparse multivariate power series with exact rational coefficients,
// truncated independently in each variable.
//
// Semantics: a series knows a list of variables and a per-variable truncation
// order (the highest exponent it retains). Every stored coefficient is exact;
// exponents beyond the truncation box are dropped on insertion. A variable
// that does not appear in a series' variable list is treated as "exactly
// absent" (the series is constant in it), which is stronger than "truncated
// at order 0". Binary operations work over the union of the variable lists;
// where both operands constrain a variable the truncations are combined
// soundly (min for add/mul; exact shifts for monomial multiply/divide,
// derive and antiderive).
class MultiSeries {
  public:
    static constexpr int kMaxVars = 8;
    using Exp = std::array<uint8_t, kMaxVars>;  // padded with 0 past n_vars

    struct Discrepancy {
        std::map<std::string, int> exponents;
        ExactRat lhs, rhs;
    };

    MultiSeries() = default;  // zero series in no variables

    // Zero series over the given variables / truncation orders.
    MultiSeries(std::vector<std::string> vars, std::vector<int> trunc);

    static MultiSeries constant(const ExactRat& c, std::vector<std::string> vars,
                                std::vector<int> trunc);
    // The monomial c * prod(vars[i]^exps[i]).
    static MultiSeries monomial(const ExactRat& c, std::vector<std::string> vars,
                                std::vector<int> exps, std::vector<int> trunc);
    static MultiSeries var(const std::string& name, int trunc_order);

    const std::vector<std::string>& vars() const { return vars_; }
    const std::vector<int>& trunc() const { return trunc_; }
    int trunc_of(const std::string& v) const;  // -1 if v not tracked
    size_t term_count() const { return terms_.size(); }
    bool is_empty() const { return terms_.empty(); }

    // Terms, lexicographically ordered by exponent vector.
    const std::map<Exp, ExactRat>& terms() const { return terms_; }

    void set_coeff(const std::map<std::string, int>& exps, const ExactRat& c);
    // Coefficient at the given exponents (vars not mentioned get exponent 0).
    // Asking outside the truncation box is an error.
    ExactRat coeff(const std::map<std::string, int>& exps) const;

    MultiSeries operator+(const MultiSeries& o) const;
    MultiSeries operator-(const MultiSeries& o) const;
    MultiSeries operator-() const;
    MultiSeries operator*(const MultiSeries& o) const;
    MultiSeries operator*(const ExactRat& c) const;
    bool operator==(const MultiSeries& o) const;  // same vars/trunc/terms

    // Serial reference convolution; operator* dispatches to an OpenMP
    // variant for large inputs and must agree with this exactly.
    static MultiSeries mul_serial(const MultiSeries& a, const MultiSeries& b);
    static MultiSeries mul_parallel(const MultiSeries& a, const MultiSeries& b);

    // a / b where b is a single-term monomial (every term of a must be
    // divisible) or has an invertible (nonzero) constant term. Anything else
    // is an error.
    MultiSeries div_exact(const MultiSeries& b) const;

    // (this)^(p/q); requires constant term exactly 1.
    MultiSeries pow_rational(long p, long q) const;
    // (this)^k for k >= 0, any constant term.
    MultiSeries pow_int(long k) const;

    MultiSeries derive(const std::string& v) const;      // truncation drops by 1 in v
    MultiSeries antiderive(const std::string& v) const;  // integration constant 0

    // Substitute s for v. s must be a single-term monomial not involving v,
    // or a series with zero constant term. Result truncations are exact for
    // the monomial path and conservative (componentwise min) otherwise.
    MultiSeries substitute(const std::string& v, const MultiSeries& s) const;

    // Coefficient of v^k as a series in the remaining variables.
    MultiSeries slice(const std::string& v, int k) const;

    // this / (v1 - v2), exact synthetic division; error when the remainder
    // (this evaluated at v1 = v2) is nonzero. The caller states the output
    // truncations it needs; requires trunc(v1) >= out1 + out2 + 1 and
    // trunc(v2) >= out2 on the input.
    MultiSeries divide_by_var_difference(const std::string& v1, const std::string& v2,
                                         int out1, int out2) const;

    // Lower truncations to the given box (vars not mentioned keep theirs).
    MultiSeries truncate_to(const std::map<std::string, int>& box) const;
    // Add variables (with truncations) this series does not yet track.
    MultiSeries with_vars(const std::vector<std::string>& vars,
                          const std::vector<int>& trunc) const;

    // First coefficient difference within the box, or nullopt if equal.
    // The box must lie inside both trusted regions.
    static std::optional<Discrepancy> compare(const MultiSeries& a, const MultiSeries& b,
                                              const std::map<std::string, int>& box);
    bool is_zero_within(const std::map<std::string, int>& box) const;

    // One line per term: "e1 e2 ... ek<TAB>num/den", exponents in variable
    // order, lines sorted lexicographically; preceded by "# vars:" and
    // "# trunc:" header lines. Golden-file tests freeze these bytes.
    std::string dump() const;

  private:
    std::vector<std::string> vars_;
    std::vector<int> trunc_;
    std::map<Exp, ExactRat> terms_;

    int var_index(const std::string& v) const;  // -1 if absent
    bool within_trunc(const Exp& e) const;
    void insert_add(const Exp& e, const ExactRat& c);
    static void align_onto(const MultiSeries& src, const std::vector<std::string>& vars,
                           std::map<Exp, ExactRat>& out);
    static MultiSeries make_union_frame(const MultiSeries& a, const MultiSeries& b,
                                        bool trunc_min_shared);
    MultiSeries inverse_unit() const;
    friend class SeriesOps;
};

// zeta(t): the unique power series with zeta = 8 t (1 + zeta)^(3/2),
// computed by fixed-point iteration to the given order in t.
MultiSeries fixed_point_zeta(int order, const std::string& var = "t");

// h(x): the unique power series solution of 8 h^3 x^2 - h^2 + x^2 = 0 with
// h = x + O(x^4), via the contraction h <- x (1 + 8 h^3)^(1/2).
MultiSeries fixed_point_h(int order, const std::string& var = "x");

}  // namespace tricount
