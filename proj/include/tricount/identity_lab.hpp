#pragma once

#include "tricount/peel.hpp"
#include "tricount/series.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tricount {

// Mechanical verification of the series identities the closed forms rest on.
// Every check rebuilds both sides of one identity from independent
// ingredients and compares coefficients exactly inside a stated truncation
// box. There are no tolerances: a check passes only when the residual is
// identically zero on the box.

struct CheckResult {
    std::string name;
    std::string orders;  // human-readable truncation box, e.g. "t<=10 y<=4"
    bool ok = false;
    // First coefficient mismatch when a comparison failed (absent when ok,
    // or when the failure is a scalar/structural one described in `note`).
    std::optional<MultiSeries::Discrepancy> first_discrepancy;
    std::string note;  // what was verified, or what was deliberately mutated
};

struct LabOptions {
    // x-domain checks (loop equations over the kernel h(x)).
    int x_order = 20;
    int y_order = 8;
    int xz_order = 14;  // x order when hole variables are present
    int yz_order = 4;   // y and z orders for the multi-hole loop equations
    // t-domain checks (reindexed series over zeta(t)).
    int t_order = 10;
    int ty_order = 4;  // root-boundary order
    int tz_order = 4;  // per-hole boundary order
    // When set, each check corrupts one of its own ingredients and must
    // then fail; used to prove the detectors are not vacuous.
    bool mutate = false;
};

// Immutable bundle of t-domain ingredients shared by the reindexed checks:
// zeta(t) with zeta = 8t(1+zeta)^{3/2}, w = (1+zeta)^{1/2}, the weight
// lambda = y zeta' / By^{3/2} with Bv = 1 - 4(1+zeta)v, the hole factors
// f_j = 1/sqrt(Bz_j) - 1, and the pinned antiderivatives of lambda and
// lambda f_j (explicit closed forms, not zero-constant integrals).
class ProofContext {
  public:
    ProofContext(int t_order, int y_order, std::vector<int> z_orders);

    int t_order() const { return t_order_; }
    int y_order() const { return y_order_; }
    const std::vector<int>& z_orders() const { return z_orders_; }
    int holes() const { return static_cast<int>(z_orders_.size()); }
    static std::string z_name(int j);  // 1-based: "z1", "z2", ...

    const MultiSeries& zeta() const { return zeta_; }
    const MultiSeries& opz() const { return opz_; }  // 1 + zeta
    const MultiSeries& w() const { return w_; }      // (1+zeta)^{1/2}
    const MultiSeries& zeta_prime() const { return zeta_prime_; }
    const MultiSeries& lambda() const { return lambda_; }        // root var y
    const MultiSeries& dinv_lambda() const { return dinv1_; }    // 1/(2 sqrt(By))
    const MultiSeries& dinv2_lambda() const { return dinv2_; }
    const MultiSeries& f(int j) const;             // hole factor, 1-based
    const MultiSeries& dinv_lambda_f(int j) const; // pinned antiderivative

    // Ingredient builders for arbitrary variables/orders (all exact).
    MultiSeries boundary_unit(const std::string& v, int ord) const;  // 1-4(1+zeta)v
    MultiSeries lambda_at(const std::string& v, int ord) const;
    MultiSeries f_at(const std::string& v, int ord) const;
    MultiSeries dinv_lambda_at(const std::string& v, int ord) const;
    MultiSeries dinv2_lambda_at(const std::string& v, int ord) const;
    MultiSeries dinv_lambda_f_at(const std::string& root, int root_ord,
                                 const std::string& zv, int z_ord) const;
    // Product lambda * prod_{j in subset} f_j (subset of 1..holes()).
    MultiSeries lambda_f(const std::vector<int>& subset) const;
    // d^n/dt^n with n possibly negative only for the pinned cases above.
    static MultiSeries d_pow(const MultiSeries& s, int n);

  private:
    int t_order_, y_order_;
    std::vector<int> z_orders_;
    MultiSeries zeta_, opz_, w_, two_minus_zeta_, zeta_prime_;
    MultiSeries lambda_, dinv1_, dinv2_;
    std::vector<MultiSeries> f_, dinv_lambda_f_;
};

// Algebraic kernel checks (x-domain).
CheckResult check_kernel_equation(const LabOptions& opt);
CheckResult check_kernel_vs_zeta(const LabOptions& opt);
CheckResult check_zeta_derivative(const LabOptions& opt);
CheckResult check_lagrange_coefficients(const LabOptions& opt);

// Root-edge decomposition loop equations (x-domain).
CheckResult check_loop_equation_disk(const LabOptions& opt);
CheckResult check_loop_equation_one_hole(const LabOptions& opt);
CheckResult check_loop_equation_two_holes(const LabOptions& opt);

// Pinned-antiderivative calculus (t-domain).
CheckResult check_antiderivatives(const LabOptions& opt);
CheckResult check_reindexed_closed_forms(const LabOptions& opt, MemoTable& memo);
CheckResult check_integral_representation_r3(const LabOptions& opt, MemoTable& memo);
CheckResult check_product_rule_identities(const LabOptions& opt);
CheckResult check_subset_expansion(const LabOptions& opt);
CheckResult check_linearity_reductions(const LabOptions& opt);
CheckResult check_boundary_swap_term(const LabOptions& opt);
CheckResult check_split_equation_k3(const LabOptions& opt, MemoTable& memo);
CheckResult check_linear_pinning(const LabOptions& opt);

// Genus closed forms against the decomposition recurrence.
CheckResult check_genus_closed_forms(const LabOptions& opt, MemoTable& memo);

// Exploratory: the generic antiderivative-convolution rearrangement on
// concrete polynomial instances, with zero-constant antiderivatives. A
// widely printed statement of its second sum carries index misprints; the
// checker evaluates both the symmetric (corrected) reading and the literal
// printed one.
struct ConvolutionInstance {
    int k = 1;
    int l = 1;
    MultiSeries lambda;            // polynomial in t
    MultiSeries mu;                // polynomial in t
    std::vector<MultiSeries> fs;   // f_1..f_r, polynomials in t
};
struct ConvolutionVerdict {
    bool matches = false;          // symmetric reading reproduces the LHS
    bool printed_matches = false;  // literal printed second sum does
    std::optional<MultiSeries::Discrepancy> first_discrepancy;  // symmetric
};
ConvolutionVerdict check_one_convolution(const ConvolutionInstance& inst, int t_order);
CheckResult check_antiderivative_convolution(const LabOptions& opt);

// Stable name -> runner table so front ends can list or filter checks.
struct NamedCheck {
    std::string name;
    std::function<CheckResult(const LabOptions&, MemoTable&)> run;
};
const std::vector<NamedCheck>& identity_check_registry();

// All checks, in registry order, sharing one memo table.
std::vector<CheckResult> run_identity_checks(const LabOptions& opt, MemoTable& memo);

}  // namespace tricount
