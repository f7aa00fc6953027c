#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "tricount/exact.hpp"
#include "tricount/series.hpp"

using namespace tricount;

TEST_CASE("double factorial conventions and pairing identity") {
    CHECK(double_factorial(-1) == 1);
    CHECK(double_factorial(0) == 1);
    CHECK(double_factorial(1) == 1);
    CHECK(double_factorial(5) == 15);
    CHECK(double_factorial(6) == 48);
    CHECK_THROWS_AS(double_factorial(-2), std::domain_error);
    for (long n = 1; n <= 20; ++n)
        CHECK(double_factorial(n) * double_factorial(n - 1) == factorial(n));
}

TEST_CASE("binomial edges and central-binomial identity") {
    CHECK(binomial(4, 2) == 6);
    CHECK(binomial(4, -1) == 0);
    CHECK(binomial(4, 5) == 0);
    CHECK(binomial(0, 0) == 1);
    for (long m = 1; m <= 15; ++m) {
        ExactInt lhs = binomial(2 * m, m) * m;
        ExactInt rhs = factorial(2 * m) / (factorial(m) * factorial(m - 1));
        CHECK(lhs == rhs);
    }
}

TEST_CASE("recip_factorial vanishes below zero") {
    CHECK(recip_factorial(-1) == 0);
    CHECK(recip_factorial(-5) == 0);
    for (long n = 0; n <= 12; ++n) CHECK(recip_factorial(n) * ExactRat(factorial(n)) == 1);
}

TEST_CASE("pow_rat and make_rat canonical form") {
    CHECK(pow_rat(4, -1) == make_rat(1, 4));
    CHECK(pow_rat(4, 3) == 64);
    CHECK(pow_rat(2, 0) == 1);
    ExactRat q = make_rat(2, -4);
    CHECK(q == make_rat(-1, 2));
    CHECK(q.get_den() == 2);
    CHECK(to_string(q) == "-1/2");
}

TEST_CASE("binomial_rat generalized binomial") {
    CHECK(binomial_rat(make_rat(1, 2), 2) == make_rat(-1, 8));
    CHECK(binomial_rat(make_rat(3, 2), 0) == 1);
    CHECK(binomial_rat(ExactRat(5), 2) == 10);
}

namespace {

MultiSeries random_series(std::mt19937& rng, const std::vector<std::string>& vars,
                          const std::vector<int>& trunc, int nterms) {
    MultiSeries s(vars, trunc);
    std::uniform_int_distribution<int> coef(-6, 6);
    for (int t = 0; t < nterms; ++t) {
        std::map<std::string, int> e;
        for (size_t i = 0; i < vars.size(); ++i) {
            std::uniform_int_distribution<int> ed(0, trunc[i]);
            e[vars[i]] = ed(rng);
        }
        int c = coef(rng);
        int d = 1 + std::abs(coef(rng));
        s.set_coeff(e, make_rat(c, d));
    }
    return s;
}

}  // namespace

TEST_CASE("series ring axioms on random inputs") {
    std::mt19937 rng(20260819);
    for (int round = 0; round < 10; ++round) {
        auto a = random_series(rng, {"x", "y"}, {6, 4}, 8);
        auto b = random_series(rng, {"x", "y"}, {6, 4}, 8);
        auto c = random_series(rng, {"x", "y"}, {6, 4}, 8);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a + b == b + a);
        CHECK(a * b == b * a);
        CHECK(a - a == MultiSeries({"x", "y"}, {6, 4}));
    }
}

TEST_CASE("serial and parallel convolution agree") {
    std::mt19937 rng(7);
    auto a = random_series(rng, {"x", "y", "z"}, {8, 5, 5}, 60);
    auto b = random_series(rng, {"x", "y", "z"}, {8, 5, 5}, 60);
    CHECK(MultiSeries::mul_serial(a, b) == MultiSeries::mul_parallel(a, b));
}

TEST_CASE("union frames treat absent variables as exact constants") {
    auto a = MultiSeries::var("x", 5);           // series in x only
    auto b = MultiSeries::monomial(2, {"y"}, {1}, {3});
    auto p = a * b;                              // 2xy over union
    CHECK(p.coeff({{"x", 1}, {"y", 1}}) == 2);
    CHECK(p.trunc_of("x") == 5);
    CHECK(p.trunc_of("y") == 3);
}

TEST_CASE("square root and inverse-cube-root expansions") {
    // (1+u)^(1/2) = 1 + u/2 - u^2/8 + ...
    auto u = MultiSeries::var("u", 2);
    auto one = MultiSeries::constant(1, {"u"}, {2});
    auto r = (one + u).pow_rational(1, 2);
    CHECK(r.coeff({}) == 1);
    CHECK(r.coeff({{"u", 1}}) == make_rat(1, 2));
    CHECK(r.coeff({{"u", 2}}) == make_rat(-1, 8));
    // (1+u)^(-3/2) = 1 - 3u/2 + ...
    auto u1 = MultiSeries::var("u", 1);
    auto one1 = MultiSeries::constant(1, {"u"}, {1});
    auto r2 = (one1 + u1).pow_rational(-3, 2);
    CHECK(r2.coeff({}) == 1);
    CHECK(r2.coeff({{"u", 1}}) == make_rat(-3, 2));
}

TEST_CASE("pow_rational inverts pow_int") {
    std::mt19937 rng(99);
    auto n = random_series(rng, {"x", "y"}, {5, 4}, 6);
    // force constant term 1
    n.set_coeff({}, 1);
    auto root = n.pow_rational(1, 3);
    CHECK(root.pow_int(3) == n);
    auto p32 = n.pow_rational(3, 2);
    CHECK(p32.pow_int(2) == n.pow_int(3));
    CHECK_THROWS_AS(MultiSeries::var("x", 3).pow_rational(1, 2), std::domain_error);
}

TEST_CASE("div_exact by monomial shifts truncation soundly") {
    auto x = MultiSeries::var("x", 6);
    auto y = MultiSeries::var("y", 4);
    auto m = x.pow_int(3) * y;  // x^3 y
    auto q = m.div_exact(x.pow_int(2));
    CHECK(q.coeff({{"x", 1}, {"y", 1}}) == 1);
    CHECK(q.trunc_of("x") == 4);
    auto bad = x + y;
    CHECK_THROWS_AS(bad.div_exact(x), std::domain_error);
}

TEST_CASE("div_exact by unit series and round trips") {
    std::mt19937 rng(3);
    auto a = random_series(rng, {"x", "y"}, {6, 4}, 8);
    auto b = random_series(rng, {"x", "y"}, {6, 4}, 8);
    b.set_coeff({}, make_rat(4, 1));  // invertible constant, not 1
    CHECK((a * b).div_exact(b) == a);
    auto one = MultiSeries::constant(1, {"x", "y"}, {6, 4});
    CHECK(b.div_exact(b) == one);
    MultiSeries zerodiv({"x", "y"}, {6, 4});
    CHECK_THROWS_AS(a.div_exact(zerodiv), std::domain_error);
}

TEST_CASE("derive and antiderive") {
    auto x = MultiSeries::var("x", 6);
    auto y = MultiSeries::var("y", 4).with_vars({"x"}, {6});
    auto s = x.pow_int(3) * y + x * ExactRat(2);
    auto d = s.derive("x");
    CHECK(d.coeff({{"x", 2}, {"y", 1}}) == 3);
    CHECK(d.coeff({}) == 2);
    CHECK(d.trunc_of("x") == 5);
    auto ad = d.antiderive("x");
    CHECK(ad.coeff({{"x", 3}, {"y", 1}}) == 1);
    CHECK(ad.coeff({{"x", 1}}) == 2);
    // integration constant is zero
    CHECK(ad.coeff({{"y", 0}}) == 0);
}

TEST_CASE("substitute examples") {
    // substitute(1/(1-u), u, 2t): geometric series 1 + 2t + 4t^2
    auto one = MultiSeries::constant(1, {"u"}, {2});
    auto u = MultiSeries::var("u", 2);
    auto geo = one.div_exact(one - u);
    auto two_t = MultiSeries::monomial(2, {"t"}, {1}, {2});
    auto g = geo.substitute("u", two_t);
    CHECK(g.coeff({}) == 1);
    CHECK(g.coeff({{"t", 1}}) == 2);
    CHECK(g.coeff({{"t", 2}}) == 4);
    // substitute(y^2, y, t*w) = t^2 w^2 (monomial rescale)
    auto y2 = MultiSeries::var("y", 3).pow_int(2);
    auto tw = MultiSeries::monomial(1, {"t", "w"}, {1, 1}, {3, 3});
    auto r = y2.substitute("y", tw);
    CHECK(r.coeff({{"t", 2}, {"w", 2}}) == 1);
    // substituting 0 keeps the constant layer only
    auto s = geo.substitute("u", MultiSeries({"t"}, {2}));
    CHECK(s.coeff({}) == 1);
    CHECK(s.term_count() == 1);
    // non-nilpotent substitution refused
    auto c1 = MultiSeries::constant(2, {"t"}, {2});
    CHECK_THROWS_AS(geo.substitute("u", c1), std::domain_error);
}

TEST_CASE("divide_by_var_difference") {
    auto y = MultiSeries::var("y", 5);
    auto z = MultiSeries::var("z", 5).with_vars({"y"}, {5});
    auto yz = y.with_vars({"z"}, {5});
    // (y^2 - z^2)/(y - z) = y + z
    auto n = yz.pow_int(2) - z.pow_int(2);
    auto q = n.divide_by_var_difference("y", "z", 2, 2);
    CHECK(q.coeff({{"y", 1}}) == 1);
    CHECK(q.coeff({{"z", 1}}) == 1);
    CHECK(q.term_count() == 2);
    // y alone is not divisible by (y - z)
    CHECK_THROWS_AS(yz.divide_by_var_difference("y", "z", 1, 1), std::domain_error);
    // box larger than the input truncation supports is refused
    CHECK_THROWS_AS(n.divide_by_var_difference("y", "z", 5, 5), std::domain_error);
}

TEST_CASE("compare and zero tests respect trusted boxes") {
    auto a = MultiSeries::var("x", 4);
    auto b = MultiSeries::var("x", 4) + MultiSeries::monomial(1, {"x"}, {3}, {4});
    auto d = MultiSeries::compare(a, b, {{"x", 4}});
    REQUIRE(d.has_value());
    CHECK(d->exponents.at("x") == 3);
    CHECK(d->lhs == 0);
    CHECK(d->rhs == 1);
    CHECK(!MultiSeries::compare(a, b, {{"x", 2}}).has_value());
    CHECK_THROWS_AS(MultiSeries::compare(a, b, {{"x", 9}}), std::domain_error);
    CHECK((a - a).is_zero_within({{"x", 4}}));
}

TEST_CASE("zeta fixed point: low orders and Lagrange inversion") {
    auto z1 = fixed_point_zeta(1);
    CHECK(z1.coeff({{"t", 1}}) == 8);
    CHECK(z1.term_count() == 1);
    auto z2 = fixed_point_zeta(2);
    CHECK(z2.coeff({{"t", 1}}) == 8);
    CHECK(z2.coeff({{"t", 2}}) == 96);
    // [t^n] zeta = (8^n / n) * C(3n/2, n-1), from Lagrange inversion of
    // zeta = 8 t (1+zeta)^(3/2); independent of the fixed-point iteration.
    auto z = fixed_point_zeta(8);
    for (long n = 1; n <= 8; ++n) {
        ExactRat expect = pow_rat(8, n) / ExactRat(n) * binomial_rat(make_rat(3 * n, 2), n - 1);
        CHECK(z.coeff({{"t", int(n)}}) == expect);
        // integrality and positivity
        CHECK(expect.get_den() == 1);
        CHECK(expect > 0);
    }
}

TEST_CASE("h fixed point: initial terms and defining equation") {
    auto h = fixed_point_h(10);
    CHECK(h.coeff({{"x", 1}}) == 1);
    CHECK(h.coeff({{"x", 2}}) == 0);
    CHECK(h.coeff({{"x", 3}}) == 0);
    CHECK(h.coeff({{"x", 4}}) == 4);
    CHECK(h.coeff({{"x", 7}}) == 40);
    CHECK(h.coeff({{"x", 10}}) == 512);
    // 8 h^3 x^2 - h^2 + x^2 = 0
    auto x2 = MultiSeries::var("x", 10).pow_int(2);
    auto residual = h.pow_int(3) * x2 * ExactRat(8) - h.pow_int(2) + x2;
    CHECK(residual.is_zero_within({{"x", 10}}));
}

TEST_CASE("h equals x sqrt(1 + zeta(x^3))") {
    auto zeta = fixed_point_zeta(6);
    auto x3 = MultiSeries::monomial(1, {"x"}, {3}, {20});
    auto w = (MultiSeries::constant(1, {"t"}, {6}) + zeta).pow_rational(1, 2);
    auto hx = MultiSeries::var("x", 20) * w.substitute("t", x3);
    auto h = fixed_point_h(19);
    CHECK(!MultiSeries::compare(h, hx, {{"x", 19}}).has_value());
}

TEST_CASE("dump format is stable") {
    auto s = MultiSeries::var("x", 2) * MultiSeries::var("y", 1) * make_rat(1, 2) +
             MultiSeries::monomial(3, {"x"}, {2}, {2});
    CHECK(s.dump() ==
          "# vars: x y\n"
          "# trunc: 2 1\n"
          "1 1\t1/2\n"
          "2 0\t3/1\n");
}
