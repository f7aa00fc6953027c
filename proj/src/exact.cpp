#include "tricount/exact.hpp"

#include <stdexcept>

namespace tricount {

ExactRat make_rat(const ExactInt& num, const ExactInt& den) {
    if (den == 0) throw std::domain_error("make_rat: zero denominator");
    ExactRat q(num, den);
    q.canonicalize();
    return q;
}

ExactInt factorial(long n) {
    if (n < 0) throw std::domain_error("factorial: negative argument");
    ExactInt r;
    mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
    return r;
}

ExactInt double_factorial(long n) {
    if (n < -1) throw std::domain_error("double_factorial: argument below -1");
    if (n <= 0) return 1;  // (-1)!! = 0!! = 1
    ExactInt r;
    mpz_2fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
    return r;
}

ExactInt binomial(long n, long k) {
    if (n < 0) throw std::domain_error("binomial: negative n");
    if (k < 0 || k > n) return 0;
    ExactInt r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n),
                 static_cast<unsigned long>(k));
    return r;
}

ExactRat recip_factorial(long n) {
    if (n < 0) return 0;
    return make_rat(1, factorial(n));
}

ExactRat pow_rat(long b, long e) {
    ExactInt base(b);
    ExactInt p;
    mpz_pow_ui(p.get_mpz_t(), base.get_mpz_t(),
               static_cast<unsigned long>(e < 0 ? -e : e));
    if (e >= 0) return ExactRat(p);
    if (b == 0) throw std::domain_error("pow_rat: negative power of zero");
    return make_rat(1, p);
}

ExactRat binomial_rat(const ExactRat& a, long j) {
    if (j < 0) throw std::domain_error("binomial_rat: negative j");
    ExactRat r = 1;
    for (long i = 0; i < j; ++i) {
        r *= a - ExactRat(i);
        r /= ExactRat(i + 1);
    }
    return r;
}

std::string to_string(const ExactInt& v) { return v.get_str(); }

std::string to_string(const ExactRat& v) {
    return v.get_num().get_str() + "/" + v.get_den().get_str();
}

}  // namespace tricount
