#include "tricount/identity_lab.hpp"

#include "tricount/closed_forms.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <stdexcept>

namespace tricount {

namespace {

using Box = std::map<std::string, int>;

std::string box_str(const Box& box) {
    std::ostringstream os;
    bool first = true;
    for (const auto& [v, k] : box) {
        if (!first) os << ' ';
        first = false;
        os << v << "<=" << k;
    }
    return os.str();
}

CheckResult make_result(std::string name, const Box& box) {
    CheckResult res;
    res.name = std::move(name);
    res.orders = box_str(box);
    res.ok = true;
    return res;
}

void note_line(CheckResult& res, const std::string& line) {
    if (!res.note.empty()) res.note += "; ";
    res.note += line;
}

bool expect_equal(CheckResult& res, const MultiSeries& a, const MultiSeries& b,
                  const Box& box, const std::string& what) {
    auto d = MultiSeries::compare(a, b, box);
    if (!d) return true;
    res.ok = false;
    if (!res.first_discrepancy) {
        res.first_discrepancy = *d;
        note_line(res, "mismatch in " + what);
    }
    return false;
}

bool expect_zero(CheckResult& res, const MultiSeries& s, const Box& box,
                 const std::string& what) {
    return expect_equal(res, s, MultiSeries(s.vars(), s.trunc()), box, what);
}

// For deliberate-misprint demonstrations: the check fails if the two sides
// (which encode a widely printed but wrong reading vs the true one) agree.
void expect_mismatch(CheckResult& res, const MultiSeries& a, const MultiSeries& b,
                     const Box& box, const std::string& what) {
    auto d = MultiSeries::compare(a, b, box);
    if (d) {
        note_line(res, what + " differ as expected");
        return;
    }
    res.ok = false;
    note_line(res, what + " unexpectedly agree");
}

MultiSeries bump(const MultiSeries& s, const Box& at) {
    MultiSeries r = s;
    r.set_coeff(at, r.coeff(at) + ExactRat(1));
    return r;
}

// Substitution targeting a fresh variable name, used to relabel boundary
// variables; the monomial path keeps truncations exact.
MultiSeries rename_var(const MultiSeries& s, const std::string& from, const std::string& to) {
    return s.substitute(from, MultiSeries::var(to, std::max(1, s.trunc_of(from))));
}

MultiSeries div_var(const MultiSeries& s, const std::string& v) {
    return s.div_exact(MultiSeries::var(v, std::max(1, s.trunc_of(v))));
}

MultiSeries d_signed(const MultiSeries& s, int n) {
    MultiSeries out = s;
    for (int i = 0; i < n; ++i) out = out.derive("t");
    for (int i = 0; i > n; --i) out = out.antiderive("t");
    return out;
}

std::vector<int> mask_to_subset(unsigned mask, int k) {
    std::vector<int> subset;
    for (int j = 1; j <= k; ++j)
        if (mask & (1u << (j - 1))) subset.push_back(j);
    return subset;
}

}  // namespace

// ---------------------------------------------------------------------------
// ProofContext

std::string ProofContext::z_name(int j) { return "z" + std::to_string(j); }

ProofContext::ProofContext(int t_order, int y_order, std::vector<int> z_orders)
    : t_order_(t_order), y_order_(y_order), z_orders_(std::move(z_orders)) {
    if (t_order_ < 1) throw std::invalid_argument("ProofContext: t_order must be >= 1");
    if (y_order_ < 1) throw std::invalid_argument("ProofContext: y_order must be >= 1");
    zeta_ = fixed_point_zeta(t_order_);
    opz_ = MultiSeries::constant(1, {"t"}, {t_order_}) + zeta_;
    w_ = opz_.pow_rational(1, 2);
    two_minus_zeta_ = MultiSeries::constant(2, {"t"}, {t_order_}) - zeta_;
    zeta_prime_ = (opz_.pow_rational(5, 2) * ExactRat(16)).div_exact(two_minus_zeta_);
    lambda_ = lambda_at("y", y_order_);
    dinv1_ = dinv_lambda_at("y", y_order_);
    dinv2_ = dinv2_lambda_at("y", y_order_);
    for (int j = 1; j <= holes(); ++j) {
        f_.push_back(f_at(z_name(j), z_orders_[j - 1]));
        dinv_lambda_f_.push_back(
            dinv_lambda_f_at("y", y_order_, z_name(j), z_orders_[j - 1]));
    }
}

const MultiSeries& ProofContext::f(int j) const {
    if (j < 1 || j > holes()) throw std::out_of_range("ProofContext::f: hole index");
    return f_[static_cast<size_t>(j) - 1];
}

const MultiSeries& ProofContext::dinv_lambda_f(int j) const {
    if (j < 1 || j > holes())
        throw std::out_of_range("ProofContext::dinv_lambda_f: hole index");
    return dinv_lambda_f_[static_cast<size_t>(j) - 1];
}

MultiSeries ProofContext::boundary_unit(const std::string& v, int ord) const {
    return MultiSeries::constant(1, {}, {}) -
           opz_ * MultiSeries::var(v, ord) * ExactRat(4);
}

MultiSeries ProofContext::lambda_at(const std::string& v, int ord) const {
    auto B = boundary_unit(v, ord);
    return MultiSeries::var(v, ord) * zeta_prime_ * B.pow_rational(-3, 2);
}

MultiSeries ProofContext::f_at(const std::string& v, int ord) const {
    return boundary_unit(v, ord).pow_rational(-1, 2) - MultiSeries::constant(1, {}, {});
}

MultiSeries ProofContext::dinv_lambda_at(const std::string& v, int ord) const {
    return boundary_unit(v, ord).pow_rational(-1, 2) * make_rat(1, 2);
}

MultiSeries ProofContext::dinv2_lambda_at(const std::string& v, int ord) const {
    auto B = boundary_unit(v, ord);
    auto num = zeta_ - opz_ * MultiSeries::var(v, ord) * ExactRat(8);
    return num * B.pow_rational(1, 2) * opz_.pow_rational(-3, 2) * make_rat(1, 16);
}

MultiSeries ProofContext::dinv_lambda_f_at(const std::string& root, int root_ord,
                                           const std::string& zv, int z_ord) const {
    int yw = root_ord + z_ord + 1;
    auto Sy = boundary_unit(root, yw).pow_rational(1, 2);
    auto Sz = boundary_unit(zv, z_ord).pow_rational(1, 2);
    auto vy = MultiSeries::var(root, yw);
    auto vz = MultiSeries::var(zv, z_ord);
    auto num = vy * Sz - vz * Sy - vy + vz;
    auto ratio = num.divide_by_var_difference(root, zv, root_ord, z_ord);
    return ratio * dinv_lambda_at(root, root_ord);
}

MultiSeries ProofContext::lambda_f(const std::vector<int>& subset) const {
    MultiSeries out = lambda_;
    for (int j : subset) out = out * f(j);
    return out;
}

MultiSeries ProofContext::d_pow(const MultiSeries& s, int n) {
    if (n < 0)
        throw std::logic_error("d_pow: negative power needs a pinned antiderivative");
    MultiSeries out = s;
    for (int i = 0; i < n; ++i) out = out.derive("t");
    return out;
}

// ---------------------------------------------------------------------------
// Algebraic kernel checks (x-domain).

CheckResult check_kernel_equation(const LabOptions& opt) {
    const int X = std::max(30, opt.x_order);
    Box box{{"x", X}};
    auto res = make_result("kernel_equation", box);
    auto h = fixed_point_h(X);
    if (opt.mutate) h = bump(h, {{"x", 7}});
    auto x = MultiSeries::var("x", X);
    auto residual = h.pow_int(3) * x * x * ExactRat(8) - h * h + x * x;
    if (expect_zero(res, residual, box, "kernel polynomial residual"))
        note_line(res, "8 h^3 x^2 - h^2 + x^2 == 0");
    return res;
}

CheckResult check_kernel_vs_zeta(const LabOptions& opt) {
    const int T = std::max(4, opt.t_order);
    const int X = 3 * T + 2;
    Box box{{"x", X}};
    auto res = make_result("kernel_vs_zeta", box);
    auto zeta = fixed_point_zeta(T);
    if (opt.mutate) zeta = bump(zeta, {{"t", 2}});
    auto w = (MultiSeries::constant(1, {"t"}, {T}) + zeta).pow_rational(1, 2);
    auto wx = w.substitute("t", MultiSeries::monomial(1, {"x"}, {3}, {X}));
    auto lhs = wx * MultiSeries::var("x", X);
    auto h = fixed_point_h(X);
    if (expect_equal(res, lhs, h, box, "x sqrt(1+zeta(x^3)) vs h(x)"))
        note_line(res, "h(x) == x (1+zeta)^{1/2} at t=x^3");
    return res;
}

CheckResult check_zeta_derivative(const LabOptions& opt) {
    const int T = opt.t_order + 2;
    Box box{{"t", T - 1}};
    auto res = make_result("zeta_derivative", box);
    auto zeta = fixed_point_zeta(T);
    auto lhs = zeta.derive("t");
    if (opt.mutate) lhs = bump(lhs, {{"t", 2}});
    auto one = MultiSeries::constant(1, {"t"}, {T});
    auto two = MultiSeries::constant(2, {"t"}, {T});
    auto closed = ((one + zeta).pow_rational(5, 2) * ExactRat(16)).div_exact(two - zeta);
    if (expect_equal(res, lhs, closed, box, "zeta' vs 16(1+zeta)^{5/2}/(2-zeta)"))
        note_line(res, "implicit derivative of zeta = 8t(1+zeta)^{3/2}");
    return res;
}

CheckResult check_lagrange_coefficients(const LabOptions& opt) {
    const int K = std::max(6, opt.t_order);
    const int M = 5;
    const int X = 2 * M + 3 * K;
    auto res = make_result("lagrange_coefficients", {});
    res.orders = "m<=" + std::to_string(M) + " k<=" + std::to_string(K);
    auto h = fixed_point_h(X);
    auto zeta = fixed_point_zeta(K);
    auto opz = MultiSeries::constant(1, {"t"}, {K}) + zeta;
    for (int m = 1; m <= M; ++m) {
        auto hp = h.pow_int(2 * m);
        auto zp = opz.pow_int(m);
        for (int k = 0; k <= K; ++k) {
            ExactRat a = hp.coeff({{"x", 2 * m + 3 * k}});
            ExactRat b = zp.coeff({{"t", k}});
            if (opt.mutate && m == 2 && k == 1) b += ExactRat(1);
            if (a == b) continue;
            res.ok = false;
            if (!res.first_discrepancy) {
                MultiSeries::Discrepancy d;
                d.exponents = {{"k", k}, {"m", m}};
                d.lhs = a;
                d.rhs = b;
                res.first_discrepancy = d;
                note_line(res, "coefficient transfer fails at m=" + std::to_string(m) +
                                   " k=" + std::to_string(k));
            }
        }
    }
    if (res.ok) note_line(res, "[x^{2m+3k}] h^{2m} == [t^k] (1+zeta)^m");
    return res;
}

// ---------------------------------------------------------------------------
// Root-edge decomposition loop equations (x-domain).

CheckResult check_loop_equation_disk(const LabOptions& opt) {
    const int X = opt.x_order;
    const int Y = opt.y_order;
    Box box{{"x", X}, {"y", Y - 1}};
    auto res = make_result("loop_equation_disk", box);
    auto U0 = gf_u0(X, Y);
    if (opt.mutate) U0 = bump(U0, {{"x", 5}, {"y", 1}});
    auto x = MultiSeries::var("x", X);
    auto y = MultiSeries::var("y", Y);
    auto L0 = U0.slice("y", 1);
    auto rhs = x * y * y + div_var(U0 - y * L0, "y") * x + div_var(U0 * U0, "y") * x;
    if (expect_equal(res, U0, rhs, box, "disk root-edge equation"))
        note_line(res, "U0 == x y^2 + (x/y)(U0 - y L0) + (x/y) U0^2");
    return res;
}

CheckResult check_loop_equation_one_hole(const LabOptions& opt) {
    const int X = opt.xz_order;
    const int Yc = opt.yz_order;
    const int Zc = opt.yz_order;
    const int Yb = Yc + 1;
    const int Yw = Yc + Zc + 2;
    Box box{{"x", X}, {"y", Yc}, {"z", Zc}};
    auto res = make_result("loop_equation_one_hole", box);

    auto U0w = gf_u0(X, Yw);
    auto U1 = gf_u1(X, Yb, Zc);
    if (opt.mutate) U1 = bump(U1, {{"x", 4}, {"y", 1}, {"z", 1}});
    auto x = MultiSeries::var("x", X);
    auto y = MultiSeries::var("y", Yb);

    auto L1 = U1.slice("y", 1);
    auto t1 = div_var(U1 - y * L1, "y") * x;
    auto t2 = div_var(U0w * U1, "y") * x * ExactRat(2);

    auto a = div_var(U0w, "y") * MultiSeries::var("z", Zc);
    auto U0z = rename_var(gf_u0(X, Zc + 1), "y", "z");
    auto b = div_var(U0z, "z") * MultiSeries::var("y", Yc + Zc + 1);
    auto J = (a - b).divide_by_var_difference("y", "z", Yc, Zc) * x;

    auto L0 = U0w.slice("y", 1);
    auto rhs = t1 + t2 + J + x * L0;
    if (expect_equal(res, U1, rhs, box, "one-hole root-edge equation"))
        note_line(res, "hole term uses exact division by y - z");
    return res;
}

CheckResult check_loop_equation_two_holes(const LabOptions& opt) {
    const int X = opt.xz_order;
    const int Yc = opt.yz_order;
    const int Zc = opt.yz_order;
    const int Yb = Yc + 1;
    const int Yw = Yc + Zc + 2;
    Box box{{"x", X}, {"y", Yc}, {"z1", Zc}, {"z2", Zc}};
    auto res = make_result("loop_equation_two_holes", box);

    auto U0w = gf_u0(X, Yw);
    auto U2 = gf_u2(X, Yb, Zc);
    if (opt.mutate) U2 = bump(U2, {{"x", 9}, {"y", 1}, {"z1", 1}, {"z2", 1}});
    auto x = MultiSeries::var("x", X);
    auto y = MultiSeries::var("y", Yb);

    auto L2 = U2.slice("y", 1);
    auto t1 = div_var(U2 - y * L2, "y") * x;

    auto U1n = gf_u1(X, Yb, Zc);
    auto U1a = rename_var(U1n, "z", "z1");
    auto U1b = rename_var(U1n, "z", "z2");
    auto t2 = div_var(U0w * U2 * ExactRat(2) + U1a * U1b * ExactRat(2), "y") * x;

    auto U1w = gf_u1(X, Yw, Zc);
    auto U1zz = gf_u1(X, Zc + 1, Zc);
    MultiSeries jsum;
    MultiSeries lsum;
    for (int j = 1; j <= 2; ++j) {
        std::string zj = "z" + std::to_string(j);
        std::string zo = "z" + std::to_string(3 - j);
        auto U1y = rename_var(U1w, "z", zo);
        auto a = div_var(U1y, "y") * MultiSeries::var(zj, Zc);
        auto U1z = rename_var(rename_var(U1zz, "z", zo), "y", zj);
        auto b = div_var(U1z, zj) * MultiSeries::var("y", Yc + Zc + 1);
        jsum = jsum + (a - b).divide_by_var_difference("y", zj, Yc, Zc) * x;
        lsum = lsum + U1y.slice("y", 1) * x;
    }

    auto rhs = t1 + t2 + jsum + lsum;
    if (expect_equal(res, U2, rhs, box, "two-hole root-edge equation"))
        note_line(res, "subset convolution covers empty and full hole sets");
    return res;
}

// ---------------------------------------------------------------------------
// Pinned-antiderivative calculus (t-domain).

CheckResult check_antiderivatives(const LabOptions& opt) {
    const int T = opt.t_order;
    const int ty = opt.ty_order;
    const int tz = opt.tz_order;
    Box box{{"t", T}, {"y", ty}};
    auto res = make_result("antiderivatives", box);
    ProofContext ctx(T + 1, ty, {tz});

    auto dinv2 = ctx.dinv2_lambda();
    if (opt.mutate) dinv2 = bump(dinv2, {{"t", 2}, {"y", 1}});

    expect_equal(res, ctx.dinv_lambda().derive("t"), ctx.lambda(), box,
                 "D of 1/(2 sqrt(By)) vs lambda");
    expect_equal(res, dinv2.derive("t"), ctx.dinv_lambda(), box,
                 "D of second antiderivative vs first");
    Box boxz{{"t", T}, {"y", ty}, {"z1", tz}};
    expect_equal(res, ctx.dinv_lambda_f(1).derive("t"), ctx.lambda() * ctx.f(1), boxz,
                 "D of pinned two-boundary antiderivative vs lambda f");

    auto t = MultiSeries::var("t", T + 1);
    auto yv = MultiSeries::var("y", ty);
    auto display =
        (t - yv * ctx.opz().pow_rational(-1, 2)) *
        ctx.boundary_unit("y", ty).pow_rational(1, 2) * make_rat(1, 2);
    expect_equal(res, display, dinv2, box,
                 "(t - y/sqrt(1+zeta)) sqrt(By)/2 vs second antiderivative");
    if (res.ok) note_line(res, "all pinned antiderivatives differentiate back");
    return res;
}

CheckResult check_reindexed_closed_forms(const LabOptions& opt, MemoTable& memo) {
    const int T = opt.t_order;
    const int ty = opt.ty_order;
    const int tz = opt.tz_order;
    Box box0{{"t", T}, {"y", ty}};
    auto res = make_result("reindexed_closed_forms", box0);
    ProofContext ctx(T, ty, {tz, tz});

    auto u0dp = uhat_from_dp(0, T, std::max(2, ty), memo);
    auto half_ty = (MultiSeries::var("t", T) - MultiSeries::var("y", ty)) * make_rat(1, 2);
    expect_equal(res, ctx.dinv2_lambda() - half_ty, u0dp, box0,
                 "planar root series vs pinned antiderivative form");

    Box box1{{"t", T}, {"y", ty}, {"z", tz}};
    auto u1dp = uhat_from_dp(1, T, std::max({2, ty, tz}), memo);
    expect_equal(res, ctx.dinv_lambda_f_at("y", ty, "z", tz), u1dp, box1,
                 "cylinder series vs pinned antiderivative form");

    Box box2{{"t", T}, {"y", ty}, {"z1", tz}, {"z2", tz}};
    auto u2dp = uhat_from_dp(2, T, std::max(ty, tz), memo);
    auto u2cf = ctx.lambda_f({1, 2});
    if (opt.mutate) u2cf = u2cf * MultiSeries::var("t", T);
    expect_equal(res, u2cf, u2dp, box2, "pair-of-pants series vs lambda f1 f2");

    // A widely printed display carries a spurious factor t: it equals
    // t * (this series), not the series itself.
    auto printed = ctx.lambda_f({1, 2}) * MultiSeries::var("t", T);
    expect_mismatch(res, printed, u2dp, box2, "printed three-boundary display and series");
    expect_equal(res, printed, u2dp * MultiSeries::var("t", T), box2,
                 "printed display vs t times the series");
    return res;
}

CheckResult check_integral_representation_r3(const LabOptions& opt, MemoTable& memo) {
    const int T = opt.t_order;
    const int ty = opt.ty_order;
    const int tz = opt.tz_order;
    Box box{{"t", T}, {"y", ty}, {"z1", tz}, {"z2", tz}, {"z3", tz}};
    auto res = make_result("integral_representation_r3", box);
    ProofContext ctx(T + 1, ty, {tz, tz, tz});
    auto closed = ctx.lambda_f({1, 2, 3});
    if (!opt.mutate) closed = closed.derive("t");
    auto dp = uhat_from_dp(3, T, std::max(ty, tz), memo);
    if (expect_equal(res, closed, dp, box, "D(lambda f1 f2 f3) vs recurrence series"))
        note_line(res, "four-boundary planar series is one derivative up");
    return res;
}

CheckResult check_product_rule_identities(const LabOptions& opt) {
    const int T = opt.t_order;
    const int ty = opt.ty_order;
    const int tz = opt.tz_order;
    Box box{{"t", T}, {"y", ty}, {"z1", tz}, {"z2", tz}, {"z3", tz}};
    auto res = make_result("product_rule_identities", box);
    ProofContext ctx(T + 1, ty, {tz, tz, tz});

    auto lf123 = ctx.lambda_f({1, 2, 3});
    auto lhs1 = (ctx.dinv2_lambda() * lf123).derive("t");
    auto dlam = ctx.lambda().derive("t");
    auto fI = ctx.f(1) * ctx.f(2) * ctx.f(3);
    auto rhs1 = ctx.dinv_lambda() * lf123 + ctx.dinv2_lambda() * dlam * fI;
    for (int j = 1; j <= 3; ++j) {
        std::vector<int> rest;
        for (int i = 1; i <= 3; ++i)
            if (i != j) rest.push_back(i);
        if (opt.mutate && j == 3) continue;
        rhs1 = rhs1 + ctx.dinv2_lambda() * ctx.f(j).derive("t") * ctx.lambda_f(rest);
    }
    expect_equal(res, lhs1, rhs1, box, "Leibniz expansion of D(D^{-2}lambda * lambda f)");

    auto lhs2 = ctx.dinv_lambda() * lf123 * ExactRat(3);
    MultiSeries rhs2;
    for (int j = 1; j <= 3; ++j) {
        std::vector<int> rest;
        for (int i = 1; i <= 3; ++i)
            if (i != j) rest.push_back(i);
        rhs2 = rhs2 + ctx.dinv_lambda() * ctx.f(j) * ctx.lambda_f(rest);
    }
    expect_equal(res, lhs2, rhs2, box, "multiplicity-k regrouping of D^{-1}lambda terms");
    if (res.ok) note_line(res, "both product-rule reductions hold exactly");
    return res;
}

namespace {

MultiSeries anti_term(const ProofContext& ctx, const std::vector<int>& subset) {
    if (subset.empty()) return ctx.dinv2_lambda();
    if (subset.size() == 1) return ctx.dinv_lambda_f(subset[0]);
    return ProofContext::d_pow(ctx.lambda_f(subset), static_cast<int>(subset.size()) - 2);
}

void subset_expansion_at(CheckResult& res, const LabOptions& opt, int k,
                         const std::vector<int>& z_orders, const Box& box) {
    ProofContext ctx(opt.t_order + 2, opt.ty_order, z_orders);
    std::vector<int> I;
    for (int j = 1; j <= k; ++j) I.push_back(j);
    auto lfI = ctx.lambda_f(I);
    MultiSeries fI = MultiSeries::constant(1, {}, {});
    for (int j = 1; j <= k; ++j) fI = fI * ctx.f(j);

    MultiSeries A;
    const unsigned all = (1u << k) - 1;
    for (unsigned mask = 0; mask <= all; ++mask) {
        if (opt.mutate && k == 3 && mask == 0) continue;
        auto sub = mask_to_subset(mask, k);
        auto comp = mask_to_subset(all & ~mask, k);
        A = A + anti_term(ctx, sub) * anti_term(ctx, comp);
    }

    auto B = ProofContext::d_pow(ctx.dinv2_lambda() * lfI, k - 2) * ExactRat(2) -
             ProofContext::d_pow(ctx.dinv_lambda() * lfI, k - 3) * ExactRat(2 * (k - 2));
    MultiSeries Cinner = ctx.dinv2_lambda() * ctx.lambda().derive("t") * fI +
                         ctx.dinv_lambda() * lfI * ExactRat(3);
    for (int j = 1; j <= k; ++j) {
        std::vector<int> rest;
        for (int i = 1; i <= k; ++i)
            if (i != j) rest.push_back(i);
        auto lfRest = ctx.lambda_f(rest);
        B = B + ProofContext::d_pow(ctx.dinv_lambda_f(j) * lfRest, k - 3) * ExactRat(2);
        Cinner = Cinner + (ctx.dinv2_lambda() * ctx.f(j).derive("t") -
                           ctx.dinv_lambda() * ctx.f(j) + ctx.dinv_lambda_f(j)) *
                              lfRest;
    }
    auto C = ProofContext::d_pow(Cinner, k - 3) * ExactRat(2);

    std::string tag = " (k=" + std::to_string(k) + ")";
    expect_equal(res, A, B, box, "subset sum vs first rearrangement" + tag);
    expect_equal(res, B, C, box, "first vs second rearrangement" + tag);
}

}  // namespace

CheckResult check_subset_expansion(const LabOptions& opt) {
    const int T = opt.t_order;
    const int ty = opt.ty_order;
    const int tz = opt.tz_order;
    Box box3{{"t", T}, {"y", ty}, {"z1", tz}, {"z2", tz}, {"z3", tz}};
    auto res = make_result("subset_expansion", box3);
    res.orders += " (k=3); z*<=1 (k=4)";
    subset_expansion_at(res, opt, 3, {tz, tz, tz}, box3);
    Box box4{{"t", T}, {"y", ty}, {"z1", 1}, {"z2", 1}, {"z3", 1}, {"z4", 1}};
    subset_expansion_at(res, opt, 4, {1, 1, 1, 1}, box4);
    if (res.ok) note_line(res, "pairing over all boundary subsets rearranges exactly");
    return res;
}

namespace {

// (z Bz^{3/2} - y By^{3/2}) / ((y - z) Bz^{3/2}): the exact swap-term
// multiplier; vanishes nowhere but its numerator vanishes at y = z.
MultiSeries swap_bracket(const ProofContext& ctx, const std::string& zj, int ty, int tz) {
    const int yw = ty + tz + 1;
    auto By32 = ctx.boundary_unit("y", yw).pow_rational(3, 2);
    auto Bz32 = ctx.boundary_unit(zj, tz).pow_rational(3, 2);
    auto num = MultiSeries::var(zj, tz) * Bz32 - MultiSeries::var("y", yw) * By32;
    return num.divide_by_var_difference("y", zj, ty, tz) *
           ctx.boundary_unit(zj, tz).pow_rational(-3, 2);
}

}  // namespace

CheckResult check_linearity_reductions(const LabOptions& opt) {
    const int T = opt.t_order;
    const int ty = std::max(2, opt.ty_order);
    const int tz = opt.tz_order;
    Box box{{"t", T - 1}, {"y", ty}};
    auto res = make_result("linearity_reductions", box);
    ProofContext ctx(T, ty, {tz});

    auto tm = MultiSeries::constant(2, {"t"}, {T}) - ctx.zeta();
    auto lhs1 = ctx.dinv2_lambda() * ctx.lambda().derive("t") +
                ctx.dinv_lambda() * ctx.lambda() * ExactRat(3);
    // The reduction of the genus-zero group really is linear in y, but with
    // denominator (2-zeta)^3; the squared denominator often quoted fails.
    auto den1 = opt.mutate ? tm * tm : tm * tm * tm;
    auto rhs1 = (ctx.opz().pow_rational(5, 2) * ExactRat(96)).div_exact(den1) *
                MultiSeries::var("y", ty);
    if (expect_equal(res, lhs1, rhs1, box, "first reduction, cubic denominator"))
        note_line(res, "first reduction is exactly linear in y");
    expect_mismatch(res, lhs1,
                    (ctx.opz().pow_rational(5, 2) * ExactRat(96)).div_exact(tm * tm) *
                        MultiSeries::var("y", ty),
                    box, "first reduction with squared denominator");

    Box boxz{{"t", T - 1}, {"y", ty}, {"z1", tz}};
    Box boxz0{{"t", T - 1}, {"z1", tz}};
    auto lhs2 = ctx.dinv2_lambda() * ctx.f(1).derive("t") * ExactRat(2) -
                ctx.dinv_lambda() * ctx.f(1) * ExactRat(2) +
                ctx.dinv_lambda_f(1) * ExactRat(2) + swap_bracket(ctx, "z1", ty, tz);
    auto Bzm32 = ctx.boundary_unit("z1", tz).pow_rational(-3, 2);
    // The per-hole bracket is not linear in y on its own: it carries a nonzero
    // constant slice and a quadratic tail, cancelled only after weighting by
    // lambda f and summing over holes. Its low slices have closed forms.
    auto slice0 = ctx.zeta() * ctx.zeta_prime() * MultiSeries::var("z1", tz) *
                      make_rat(1, 4) * ctx.opz().pow_rational(-3, 2) * Bzm32 -
                  ctx.boundary_unit("z1", tz).pow_rational(-1, 2);
    expect_equal(res, lhs2.slice("y", 0), slice0, boxz0,
                 "constant slice of the per-hole bracket");
    auto lin2 = tm - ctx.opz() * MultiSeries::var("z1", tz) * ExactRat(8);
    auto slice1 = (ctx.opz() * lin2 * ExactRat(6)).div_exact(tm) * Bzm32;
    expect_equal(res, lhs2.slice("y", 1), slice1, boxz0,
                 "linear slice of the per-hole bracket");
    auto printed2 = (ctx.opz().pow_rational(5, 2) * lin2 * ExactRat(-16))
                        .div_exact(tm * tm) *
                    Bzm32 * MultiSeries::var("y", ty);
    expect_mismatch(res, lhs2, printed2, boxz,
                    "per-hole bracket and its pure y-linear display");
    expect_mismatch(
        res, lhs2.slice("y", 2),
        MultiSeries(std::vector<std::string>{"t", "z1"}, std::vector<int>{T, tz}),
        boxz0, "quadratic slice of the per-hole bracket and zero");
    if (res.ok) note_line(res, "slice closed forms pin both reductions");
    return res;
}

CheckResult check_boundary_swap_term(const LabOptions& opt) {
    const int T = opt.t_order;
    const int ty = opt.ty_order;
    const int tz = opt.tz_order;
    const int yW = ty + tz + 2;
    Box box{{"t", T}, {"y", ty}, {"z1", tz}, {"z2", tz}, {"z3", tz}};
    auto res = make_result("boundary_swap_term", box);
    ProofContext ctx(T, ty, {tz, tz, tz});

    auto a = div_var(ctx.lambda_at("y", yW), "y") * MultiSeries::var("z1", tz);
    auto b = div_var(ctx.lambda_at("z1", tz + 1), "z1") * MultiSeries::var("y", yW - 1);
    auto lhs = (a - b).divide_by_var_difference("y", "z1", ty, tz) *
               MultiSeries::var("y", ty) * ctx.f(2) * ctx.f(3);

    std::vector<int> rest = opt.mutate ? std::vector<int>{2} : std::vector<int>{2, 3};
    auto rhs = swap_bracket(ctx, "z1", ty, tz) * ctx.lambda_f(rest);
    if (expect_equal(res, lhs, rhs, box, "hole-swap difference vs bracket multiplier"))
        note_line(res, "swap term reduces to a t-free multiplier of lambda f");
    return res;
}

CheckResult check_split_equation_k3(const LabOptions& opt, MemoTable& memo) {
    const int T = opt.t_order;
    const int ty = opt.ty_order;
    const int tz = opt.tz_order;
    const int yW = ty + tz + 2;
    Box box{{"t", T}, {"y", ty}, {"z1", tz}, {"z2", tz}, {"z3", tz}};
    auto res = make_result("split_equation_k3", box);

    auto u0 = uhat_from_dp(0, T, std::max(2, yW), memo);
    auto u1 = uhat_from_dp(1, T, std::max({2, ty, tz}), memo);
    auto u2 = uhat_from_dp(2, T, yW, memo);
    auto u3 = uhat_from_dp(3, T, std::max(ty, tz), memo);
    if (opt.mutate) u3 = bump(u3, {{"t", 0}, {"y", 1}, {"z1", 1}, {"z2", 1}, {"z3", 1}});

    auto lin = MultiSeries::var("y", yW) - MultiSeries::var("t", T) - u0 * ExactRat(2);
    auto lhs = lin * u3;

    MultiSeries omega;
    MultiSeries jsum;
    MultiSeries lsum;
    for (int j = 1; j <= 3; ++j) {
        std::string zj = "z" + std::to_string(j);
        auto u1j = rename_var(u1, "z", zj);
        MultiSeries u2oj = u2;
        if (j == 1) u2oj = rename_var(rename_var(u2oj, "z2", "z3"), "z1", "z2");
        if (j == 2) u2oj = rename_var(u2oj, "z2", "z3");
        omega = omega + u1j * u2oj * ExactRat(2);

        auto a = div_var(u2oj, "y") * MultiSeries::var(zj, tz);
        auto sub = u2oj.substitute("y", MultiSeries::var(zj, yW));
        auto b = div_var(sub, zj) * MultiSeries::var("y", ty + tz + 1);
        jsum = jsum + (a - b).divide_by_var_difference("y", zj, ty, tz) *
                          MultiSeries::var("y", ty);
        lsum = lsum + u2oj.slice("y", 1);
    }
    auto ltab = (lsum - u3.slice("y", 1) * MultiSeries::var("t", T)) *
                MultiSeries::var("y", ty);
    auto rhs = omega + jsum + ltab;
    expect_equal(res, lhs, rhs, box, "rearranged four-boundary split equation");

    // The proper-subset convolution must include the single-hole splits; a
    // printed restriction to middle sizes only would halve it.
    expect_mismatch(res, lhs, rhs - omega * make_rat(1, 2), box,
                    "split equation with halved subset convolution");
    if (res.ok) note_line(res, "recurrence series satisfy the rearranged equation");
    return res;
}

CheckResult check_linear_pinning(const LabOptions& opt) {
    const int T = opt.t_order;
    const int ty = opt.ty_order;
    const int tz = opt.tz_order;
    Box box{{"t", T}, {"y", ty}, {"z1", tz}, {"z2", tz}, {"z3", tz}};
    auto res = make_result("linear_pinning", box);

    // (a) the second antiderivative vanishes along y = zeta/(8(1+zeta)).
    ProofContext flat(T, T, {});
    auto ystar = flat.zeta().div_exact(flat.opz() * ExactRat(8));
    auto pinned = flat.dinv2_lambda().substitute("y", ystar);
    expect_zero(res, pinned, {{"t", T}}, "second antiderivative at its linear root");

    // (b) the fully reduced split-equation right side is identically zero.
    ProofContext ctx(T + 1, ty, {tz, tz, tz});
    auto fI = ctx.f(1) * ctx.f(2) * ctx.f(3);
    auto lfI = ctx.lambda_f({1, 2, 3});
    auto rhs3 = ctx.dinv2_lambda() * ctx.lambda().derive("t") * fI * ExactRat(2) +
                ctx.dinv_lambda() * lfI * ExactRat(6);
    MultiSeries l2sum;
    for (int j = 1; j <= 3; ++j) {
        std::vector<int> rest;
        for (int i = 1; i <= 3; ++i)
            if (i != j) rest.push_back(i);
        auto term = ctx.dinv2_lambda() * ctx.f(j).derive("t") * ExactRat(2) -
                    ctx.dinv_lambda() * ctx.f(j) * ExactRat(2) +
                    ctx.dinv_lambda_f(j) * ExactRat(2) +
                    swap_bracket(ctx, "z" + std::to_string(j), ty, tz);
        rhs3 = rhs3 + ctx.lambda_f(rest) * term;
        l2sum = l2sum + ctx.lambda_f(rest).slice("y", 1);
    }
    auto l3 = lfI.derive("t").slice("y", 1);
    MultiSeries tail = l2sum;
    if (!opt.mutate) tail = tail - l3 * MultiSeries::var("t", T);
    rhs3 = rhs3 + tail * MultiSeries::var("y", ty);
    expect_zero(res, rhs3, box, "reduced split-equation right side");

    // (c) without the boundary tail the brace is linear in y.
    auto brace = rhs3 - tail * MultiSeries::var("y", ty);
    for (int j = 2; j <= ty; ++j)
        expect_zero(res, brace.slice("y", j), {{"t", T}, {"z1", tz}, {"z2", tz}, {"z3", tz}},
                    "y^" + std::to_string(j) + " slice of the reduced brace");
    if (res.ok) note_line(res, "linear-in-y kill argument closes the identity");
    return res;
}

CheckResult check_genus_closed_forms(const LabOptions& opt, MemoTable& memo) {
    const int X = opt.xz_order;
    const int Y = opt.yz_order;
    Box box{{"x", X}, {"y", Y}};
    auto res = make_result("genus_closed_forms", box);
    auto t1dp = series_from_dp(1, 0, X, Y, memo);
    if (opt.mutate) t1dp = bump(t1dp, {{"x", 5}, {"y", 1}});
    expect_equal(res, gf_t10(X, Y), t1dp, box, "one-handle closed form vs recurrence");
    auto t2dp = series_from_dp(2, 0, X, Y, memo);
    expect_equal(res, gf_t20(X, Y), t2dp, box, "two-handle closed form vs recurrence");
    if (res.ok) note_line(res, "higher-genus closed forms match the recurrence");
    return res;
}

// ---------------------------------------------------------------------------
// Antiderivative-convolution rearrangement on polynomial instances.

namespace {

MultiSeries masked_product(const MultiSeries& base, const std::vector<MultiSeries>& fs,
                           unsigned mask) {
    MultiSeries out = base;
    for (size_t i = 0; i < fs.size(); ++i)
        if (mask & (1u << i)) out = out * fs[i];
    return out;
}

}  // namespace

ConvolutionVerdict check_one_convolution(const ConvolutionInstance& inst, int t_order) {
    const int r = static_cast<int>(inst.fs.size());
    const int k = inst.k;
    const int l = inst.l;
    const unsigned all = r == 0 ? 0u : (1u << r) - 1;
    Box box{{"t", t_order}};

    MultiSeries lhs;
    for (unsigned mask = 0; mask <= all; ++mask) {
        int s = static_cast<int>(__builtin_popcount(mask));
        auto left = d_signed(masked_product(inst.lambda, inst.fs, mask), s - k);
        auto right = d_signed(masked_product(inst.mu, inst.fs, all & ~mask), (r - s) - l);
        lhs = lhs + left * right;
    }

    auto first_sum = [&](MultiSeries& acc) {
        for (unsigned mask = 0; mask <= all; ++mask) {
            int s = static_cast<int>(__builtin_popcount(mask));
            if (s >= k) continue;
            auto lam = masked_product(inst.lambda, inst.fs, mask);
            auto mu = masked_product(inst.mu, inst.fs, all & ~mask);
            int sbar = r - s;
            for (int i = 0; i <= k - 1 - s; ++i) {
                ExactRat c = binomial_rat(ExactRat(sbar - l), i);
                if (i % 2) c = -c;
                auto term = d_signed(d_signed(lam, -k + s + i) * mu, sbar - l - i);
                acc = acc + term * c;
            }
        }
    };

    MultiSeries rhs_sym;
    first_sum(rhs_sym);
    for (unsigned mask = 0; mask <= all; ++mask) {
        int s = static_cast<int>(__builtin_popcount(mask));
        int sbar = r - s;
        if (sbar >= l) continue;
        auto lam = masked_product(inst.lambda, inst.fs, mask);
        auto mu = masked_product(inst.mu, inst.fs, all & ~mask);
        for (int i = 0; i <= l - 1 - sbar; ++i) {
            ExactRat c = binomial_rat(ExactRat(s - k), i);
            if (i % 2) c = -c;
            auto term = d_signed(lam * d_signed(mu, -l + sbar + i), s - k - i);
            rhs_sym = rhs_sym + term * c;
        }
    }

    MultiSeries rhs_printed;
    first_sum(rhs_printed);
    for (unsigned mask = 0; mask <= all; ++mask) {
        int s = static_cast<int>(__builtin_popcount(mask));
        int sbar = r - s;
        if (sbar >= l) continue;
        auto lam_bar = masked_product(inst.lambda, inst.fs, all & ~mask);
        auto mu = masked_product(inst.mu, inst.fs, all & ~mask);
        for (int i = 0; i <= l - 1 - sbar; ++i) {
            ExactRat c = binomial_rat(ExactRat(s - l), i);
            if (i % 2) c = -c;
            auto term = d_signed(lam_bar * d_signed(mu, -l + sbar + i), s - l - i);
            rhs_printed = rhs_printed + term * c;
        }
    }

    ConvolutionVerdict v;
    auto d = MultiSeries::compare(lhs, rhs_sym, box);
    v.matches = !d;
    if (d) v.first_discrepancy = *d;
    v.printed_matches = !MultiSeries::compare(lhs, rhs_printed, box);
    return v;
}

CheckResult check_antiderivative_convolution(const LabOptions& opt) {
    const int kOrder = 40;
    const int kBox = 30;
    auto res = make_result("antiderivative_convolution", {{"t", kBox}});
    std::mt19937 rng(12345);
    std::uniform_int_distribution<int> coeff(-3, 3);
    auto random_poly = [&]() {
        MultiSeries p({"t"}, {kOrder});
        for (int d = 0; d <= 3; ++d) p.set_coeff({{"t", d}}, ExactRat(coeff(rng)));
        if (p.is_empty()) p.set_coeff({{"t", 1}}, ExactRat(1));
        return p;
    };

    struct Combo {
        int r, k, l;
    };
    const Combo combos[] = {{0, 1, 1}, {1, 1, 1}, {2, 1, 1}, {2, 2, 1}, {2, 1, 2},
                            {3, 1, 1}, {3, 2, 1}, {3, 1, 2}, {3, 2, 2}, {3, 3, 1},
                            {3, 1, 3}};
    bool printed_diverges_221 = false;
    for (const auto& c : combos) {
        ConvolutionInstance inst;
        inst.k = c.k;
        inst.l = c.l;
        inst.lambda = random_poly();
        inst.mu = random_poly();
        for (int j = 0; j < c.r; ++j) inst.fs.push_back(random_poly());
        auto v = check_one_convolution(inst, kBox);
        std::string tag = "(r=" + std::to_string(c.r) + ",k=" + std::to_string(c.k) +
                          ",l=" + std::to_string(c.l) + ")";
        // For r > k+l-1 some subsets appear verbatim on both sides; the
        // correction sums' telescoping excess reproduces them exactly, so the
        // rearrangement holds for every r >= k+l-1. The r=0, k=l=1 case holds
        // with the zero-constant antiderivative because every term vanishes
        // at the origin.
        bool gated = c.r >= c.k + c.l - 1 || (c.r == 0 && c.k == 1 && c.l == 1);
        if (gated && !v.matches) {
            res.ok = false;
            if (!res.first_discrepancy) res.first_discrepancy = v.first_discrepancy;
            note_line(res, tag + " symmetric reading fails");
        } else if (gated) {
            note_line(res, tag + " holds");
        } else {
            note_line(res, tag + (v.matches ? " holds anyway" : " not covered"));
        }
        if (c.r == 2 && c.k == 2 && c.l == 1) {
            printed_diverges_221 = !v.printed_matches;
            if (opt.mutate && !v.printed_matches) {
                res.ok = false;
                note_line(res, tag + " literal printed reading fails (expected)");
            }
        }
    }
    if (!printed_diverges_221) {
        res.ok = false;
        note_line(res, "printed second-sum reading unexpectedly agrees at (2,2,1)");
    } else if (!opt.mutate) {
        note_line(res, "printed second-sum reading diverges at (2,2,1) as expected");
    }
    return res;
}

const std::vector<NamedCheck>& identity_check_registry() {
    auto plain = [](CheckResult (*f)(const LabOptions&)) {
        return std::function<CheckResult(const LabOptions&, MemoTable&)>(
            [f](const LabOptions& o, MemoTable&) { return f(o); });
    };
    static const std::vector<NamedCheck> registry = {
        {"kernel_equation", plain(check_kernel_equation)},
        {"kernel_vs_zeta", plain(check_kernel_vs_zeta)},
        {"zeta_derivative", plain(check_zeta_derivative)},
        {"lagrange_coefficients", plain(check_lagrange_coefficients)},
        {"loop_equation_disk", plain(check_loop_equation_disk)},
        {"loop_equation_one_hole", plain(check_loop_equation_one_hole)},
        {"loop_equation_two_holes", plain(check_loop_equation_two_holes)},
        {"antiderivatives", plain(check_antiderivatives)},
        {"reindexed_closed_forms", check_reindexed_closed_forms},
        {"integral_representation_r3", check_integral_representation_r3},
        {"product_rule_identities", plain(check_product_rule_identities)},
        {"subset_expansion", plain(check_subset_expansion)},
        {"linearity_reductions", plain(check_linearity_reductions)},
        {"boundary_swap_term", plain(check_boundary_swap_term)},
        {"split_equation_k3", check_split_equation_k3},
        {"linear_pinning", plain(check_linear_pinning)},
        {"genus_closed_forms", check_genus_closed_forms},
        {"antiderivative_convolution", plain(check_antiderivative_convolution)},
    };
    return registry;
}

std::vector<CheckResult> run_identity_checks(const LabOptions& opt, MemoTable& memo) {
    std::vector<CheckResult> out;
    for (const auto& c : identity_check_registry()) out.push_back(c.run(opt, memo));
    return out;
}

}  // namespace tricount
