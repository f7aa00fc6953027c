#include "tricount/closed_forms.hpp"

#include <functional>
#include <sstream>
#include <stdexcept>

namespace tricount {

long BoundaryProfile::total() const {
    long m = alpha0;
    for (long a : others) m += a;
    return m;
}

void BoundaryProfile::validate() const {
    if (alpha0 < 1) throw std::invalid_argument("profile: alpha0 must be >= 1");
    for (long a : others)
        if (a < 1) throw std::invalid_argument("profile: boundary lengths must be >= 1");
}

std::optional<InfeasibleReason> classify_infeasible(long genus, long n,
                                                    const BoundaryProfile& p) {
    p.validate();
    long m = p.total();
    if (((n - 2 * m) % 3 + 3) % 3 != 0) return InfeasibleReason::kMod3;
    long k = (n - 2 * m) / 3;
    if (k < p.r() - 1) return InfeasibleReason::kKBelowR;
    if (k < p.r() - 1 + 2 * genus) return InfeasibleReason::kEulerBound;
    return std::nullopt;
}

std::string to_string(InfeasibleReason r) {
    switch (r) {
        case InfeasibleReason::kMod3: return "mod-3";
        case InfeasibleReason::kKBelowR: return "k<r-1";
        case InfeasibleReason::kEulerBound: return "euler-bound";
    }
    return "?";
}

std::vector<BoundaryProfile> feasible_profiles(long genus, long n, long max_r) {
    std::vector<BoundaryProfile> out;
    for (long m = 1; 2 * m <= n + 3; ++m) {
        for (long r = 0; r <= max_r && r < m; ++r) {
            std::vector<long> parts(static_cast<size_t>(r), 0);
            // ascending partitions of m - alpha0 into exactly r parts
            std::function<void(long, long, long)> rec = [&](long a0, long left, long idx) {
                if (idx == r) {
                    if (left != 0) return;
                    BoundaryProfile p;
                    p.alpha0 = a0;
                    p.others = parts;
                    if (!classify_infeasible(genus, n, p)) out.push_back(p);
                    return;
                }
                long lo = idx == 0 ? 1 : parts[static_cast<size_t>(idx) - 1];
                for (long v = lo; v * (r - idx) <= left; ++v) {
                    parts[static_cast<size_t>(idx)] = v;
                    rec(a0, left - v, idx + 1);
                }
            };
            for (long a0 = 1; a0 + r <= m; ++a0) rec(a0, m - a0, 0);
        }
    }
    return out;
}

namespace {
ExactInt require_integral(const ExactRat& v, const char* what) {
    if (v.get_den() != 1) {
        std::ostringstream os;
        os << what << ": non-integral value " << to_string(v);
        throw std::logic_error(os.str());
    }
    return ExactInt(v.get_num());
}
}  // namespace

ExactInt count_theorem1(long n, const BoundaryProfile& p) {
    p.validate();
    if (n < 1) throw std::invalid_argument("count_theorem1: n must be >= 1");
    long m = p.total();
    long r = p.r();
    if (((n - 2 * m) % 3 + 3) % 3 != 0) return 0;
    long k = (n - 2 * m) / 3;
    if (k + 1 - r < 0) return 0;  // also covers every k <= -2
    ExactRat v = pow_rat(4, k);
    v *= ExactRat(double_factorial(2 * m + 3 * k - 2));
    v *= recip_factorial(k + 1 - r);
    v /= ExactRat(double_factorial(2 * m + k));
    v *= ExactRat(p.alpha0);
    v *= ExactRat(binomial(2 * p.alpha0, p.alpha0));
    for (long a : p.others) v *= ExactRat(binomial(2 * a, a));
    return require_integral(v, "count_theorem1");
}

ExactInt count_sym(long n, const BoundaryProfile& p) {
    ExactInt v = count_theorem1(n, p);
    for (long a : p.others) v *= a;
    return v;
}

ExactInt count_disk(long n, long m) {
    if (m < 1) throw std::invalid_argument("count_disk: m must be >= 1");
    if (n < 1) throw std::invalid_argument("count_disk: n must be >= 1");
    if (((n - 2 * m) % 3 + 3) % 3 != 0) return 0;
    long k = (n - 2 * m) / 3;
    if (k < -1) return 0;
    ExactRat v = ExactRat(m) * ExactRat(binomial(2 * m, m)) * pow_rat(4, k);
    v *= ExactRat(double_factorial(2 * m + 3 * k - 2));
    v *= recip_factorial(k + 1);
    v /= ExactRat(double_factorial(2 * m + k));
    return require_integral(v, "count_disk");
}

ExactRat h_power_coeff(long n, long m) {
    if (m < 1 || n < m) return 0;
    if ((n - m) % 3 != 0) return 0;
    long k = (n - m) / 3;
    ExactRat v = ExactRat(m) * recip_factorial(k) * pow_rat(4, k);
    v *= ExactRat(double_factorial(m + 3 * k - 2));
    v /= ExactRat(double_factorial(m + k));
    return v;
}

namespace {

struct Kernel {
    MultiSeries h;    // over "x", truncated generously above the target
    MultiSeries one;  // constant 1 in "x"

    explicit Kernel(int x_order) : h(fixed_point_h(x_order)), one(MultiSeries::constant(1, {"x"}, {x_order})) {}

    // 1 - 4 h^2 v for a boundary variable v
    MultiSeries boundary_unit(const std::string& v, int order) const {
        return one - h.pow_int(2) * MultiSeries::var(v, order) * ExactRat(4);
    }
};

}  // namespace

MultiSeries gf_u0(int x_order, int y_order) {
    Kernel K(x_order + 3);
    auto x = MultiSeries::var("x", x_order + 3);
    auto y = MultiSeries::var("y", y_order);
    auto By = K.boundary_unit("y", y_order);
    auto s = By.pow_rational(1, 2) - K.one;  // sqrt(1-4h^2y) - 1, divisible by x^2 y
    // U0 = (h-y)/(2h) sqrt(1-4h^2y) - (x-y)/(2x)
    //    = [ x s (h-y) + y (h-x) ] / (2 x h)
    auto N = x * s * (K.h - y) + y * (K.h - x);
    auto U0 = N.div_exact(x.pow_int(2)).div_exact(K.h.div_exact(x)) * make_rat(1, 2);
    return U0.truncate_to({{"x", x_order}, {"y", y_order}});
}

MultiSeries gf_u1(int x_order, int y_order, int z_order) {
    int yw = y_order + z_order + 1;  // margin for the (y-z) division
    Kernel K(x_order + 3);
    auto By = K.boundary_unit("y", yw);
    auto Bz = K.boundary_unit("z", z_order);
    auto Sy = By.pow_rational(1, 2);
    auto Sz = Bz.pow_rational(1, 2);
    auto y = MultiSeries::var("y", yw);
    auto z = MultiSeries::var("z", z_order);
    auto N = z * (K.one - Sy) - y * (K.one - Sz);
    auto Q = N.divide_by_var_difference("y", "z", y_order, z_order);
    auto U1 = Q.div_exact(Sy) * make_rat(1, 2);
    return U1.truncate_to({{"x", x_order}});
}

MultiSeries gf_u2(int x_order, int y_order, int z_order) {
    Kernel K(x_order + 3);
    auto y = MultiSeries::var("y", y_order);
    auto By = K.boundary_unit("y", y_order);
    auto Bz1 = K.boundary_unit("z1", z_order);
    auto Bz2 = K.boundary_unit("z2", z_order);
    auto Sz1 = Bz1.pow_rational(1, 2);
    auto Sz2 = Bz2.pow_rational(1, 2);
    auto num = K.h.pow_int(5) * y * (K.one - Sz1) * (K.one - Sz2) * ExactRat(8);
    auto den = (K.one - K.h.pow_int(3) * ExactRat(4)) * By.pow_rational(3, 2) * Sz1 * Sz2;
    return num.div_exact(den).truncate_to({{"x", x_order}});
}

MultiSeries gf_u1sym(int x_order, int y_order, int z_order) {
    Kernel K(x_order + 3);
    auto y = MultiSeries::var("y", y_order);
    auto z = MultiSeries::var("z", z_order);
    auto Sy = K.boundary_unit("y", y_order).pow_rational(1, 2);
    auto Sz = K.boundary_unit("z", z_order).pow_rational(1, 2);
    auto num = K.h.pow_int(4) * y * z * ExactRat(4);
    auto den = (Sy + Sz).pow_int(2) * Sy * Sz;  // constant term 4: still a unit
    return num.div_exact(den).truncate_to({{"x", x_order}});
}

MultiSeries gf_u2sym(int x_order, int y_order, int z_order) {
    Kernel K(x_order + 3);
    auto y = MultiSeries::var("y", y_order);
    auto z1 = MultiSeries::var("z1", z_order);
    auto z2 = MultiSeries::var("z2", z_order);
    auto num = K.h.pow_int(9) * y * z1 * z2 * ExactRat(32);
    auto den = (K.one - K.h.pow_int(3) * ExactRat(4)) *
               K.boundary_unit("y", y_order).pow_rational(3, 2) *
               K.boundary_unit("z1", z_order).pow_rational(3, 2) *
               K.boundary_unit("z2", z_order).pow_rational(3, 2);
    return num.div_exact(den).truncate_to({{"x", x_order}});
}

MultiSeries gf_u3sym(int x_order, int y_order, int z_order) {
    Kernel K(x_order + 3);
    auto y = MultiSeries::var("y", y_order);
    auto z1 = MultiSeries::var("z1", z_order);
    auto z2 = MultiSeries::var("z2", z_order);
    auto z3 = MultiSeries::var("z3", z_order);
    auto h2 = K.h.pow_int(2);
    // arguments of the symmetric polynomials: h^3, h^2 y, h^2 z1, h^2 z2, h^2 z3
    std::vector<MultiSeries> args = {K.h.pow_int(3), h2 * y, h2 * z1, h2 * z2, h2 * z3};
    MultiSeries e1({"x"}, {x_order + 3}), e2 = e1, e3 = e1;
    for (size_t i = 0; i < args.size(); ++i) {
        e1 = e1 + args[i];
        for (size_t j = i + 1; j < args.size(); ++j) {
            e2 = e2 + args[i] * args[j];
            for (size_t k = j + 1; k < args.size(); ++k) e3 = e3 + args[i] * args[j] * args[k];
        }
    }
    auto P3 = K.one - e1 * ExactRat(3) + e2 * ExactRat(8) - e3 * ExactRat(16) +
              K.h.pow_int(11) * y * z1 * z2 * z3 * ExactRat(256);
    auto num = K.h.pow_int(14) * y * z1 * z2 * z3 * P3 * ExactRat(3072);
    auto den = (K.one - K.h.pow_int(3) * ExactRat(4)).pow_int(3) *
               K.boundary_unit("y", y_order).pow_rational(5, 2) *
               K.boundary_unit("z1", z_order).pow_rational(5, 2) *
               K.boundary_unit("z2", z_order).pow_rational(5, 2) *
               K.boundary_unit("z3", z_order).pow_rational(5, 2);
    return num.div_exact(den).truncate_to({{"x", x_order}});
}

MultiSeries gf_t10(int x_order, int y_order) {
    Kernel K(x_order + 3);
    auto y = MultiSeries::var("y", y_order);
    auto h5y = K.h.pow_int(5) * y;
    auto num = (K.one - h5y * ExactRat(16)) * h5y;
    auto den = (K.one - K.h.pow_int(3) * ExactRat(4)).pow_int(2) *
               K.boundary_unit("y", y_order).pow_rational(5, 2);
    return num.div_exact(den).truncate_to({{"x", x_order}});
}

MultiSeries gf_t20(int x_order, int y_order) {
    Kernel K(x_order + 3);
    auto y = MultiSeries::var("y", y_order);
    auto h = K.h;
    auto hp = [&](int k) { return h.pow_int(k); };
    auto yp = [&](int k) { return y.pow_int(k); };
    auto c = [&](long v) { return MultiSeries::constant(v, {"x"}, {x_order + 3}); };
    auto P20 = (hp(11) * y * ExactRat(3)) * (c(35) + hp(3) * ExactRat(184) + hp(6) * ExactRat(48)) *
                   (hp(11) * yp(4) * ExactRat(1024) + hp(12) * yp(3) * ExactRat(1024) -
                    hp(9) * yp(3) * ExactRat(1280) + K.one) +
               (hp(18) * yp(3) * ExactRat(128)) *
                   (c(545) + hp(3) * ExactRat(1488) - hp(6) * ExactRat(3216) + hp(9) * ExactRat(2560)) +
               (hp(16) * yp(2) * ExactRat(64)) *
                   (c(-307) - hp(6) * ExactRat(480) + hp(9) * ExactRat(256) + hp(3) * ExactRat(324));
    auto den = (K.one - hp(3) * ExactRat(4)).pow_int(7) *
               K.boundary_unit("y", y_order).pow_rational(11, 2);
    return P20.div_exact(den).truncate_to({{"x", x_order}});
}

ExactInt slicings_gamma(const std::vector<long>& parts) {
    if (parts.empty()) throw std::invalid_argument("slicings_gamma: empty part list");
    long n = 0;
    for (long p : parts) {
        if (p < 1) throw std::invalid_argument("slicings_gamma: parts must be >= 1");
        n += p;
    }
    long k = static_cast<long>(parts.size());
    ExactRat v = ExactRat(factorial(n - 1)) * recip_factorial(n - k + 2);
    for (long p : parts) v *= ExactRat(factorial(2 * p)) / ExactRat(factorial(p) * factorial(p - 1));
    return require_integral(v, "slicings_gamma");
}

ExactInt almost_trivalent(long k) { return almost_trivalent_report(k).count; }

AlmostTrivalentReport almost_trivalent_report(long k) {
    if (k < 0) throw std::invalid_argument("almost_trivalent: k must be >= 0");
    AlmostTrivalentReport rep;
    rep.count = count_disk(2 + 3 * k, 1);
    rep.printed_variant = ExactRat(2) * pow_rat(4, k - 1) *
                          ExactRat(double_factorial(3 * k)) * recip_factorial(k + 1) /
                          ExactRat(double_factorial(k + 2));
    rep.printed_matches = rep.printed_variant == ExactRat(rep.count);
    return rep;
}

}  // namespace tricount
