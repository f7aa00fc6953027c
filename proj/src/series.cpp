#include "tricount/series.hpp"

#include <omp.h>

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace tricount {

namespace {
constexpr int kTruncCap = 250;  // exponents are stored in uint8_t

void check_frame(const std::vector<std::string>& vars, const std::vector<int>& trunc) {
    if (vars.size() != trunc.size())
        throw std::invalid_argument("series: vars/trunc size mismatch");
    if (vars.size() > MultiSeries::kMaxVars)
        throw std::invalid_argument("series: too many variables");
    for (size_t i = 0; i < vars.size(); ++i) {
        if (vars[i].empty()) throw std::invalid_argument("series: empty variable name");
        if (trunc[i] < 0 || trunc[i] > kTruncCap)
            throw std::invalid_argument("series: truncation out of range");
        for (size_t j = i + 1; j < vars.size(); ++j)
            if (vars[i] == vars[j])
                throw std::invalid_argument("series: duplicate variable " + vars[i]);
    }
}
}  // namespace

MultiSeries::MultiSeries(std::vector<std::string> vars, std::vector<int> trunc) {
    check_frame(vars, trunc);
    vars_ = std::move(vars);
    trunc_ = std::move(trunc);
}

MultiSeries MultiSeries::constant(const ExactRat& c, std::vector<std::string> vars,
                                  std::vector<int> trunc) {
    MultiSeries s(std::move(vars), std::move(trunc));
    if (c != 0) s.terms_.emplace(Exp{}, c);
    return s;
}

MultiSeries MultiSeries::monomial(const ExactRat& c, std::vector<std::string> vars,
                                  std::vector<int> exps, std::vector<int> trunc) {
    if (exps.size() != vars.size())
        throw std::invalid_argument("monomial: vars/exps size mismatch");
    MultiSeries s(std::move(vars), std::move(trunc));
    Exp e{};
    for (size_t i = 0; i < exps.size(); ++i) {
        if (exps[i] < 0 || exps[i] > s.trunc_[i])
            throw std::invalid_argument("monomial: exponent outside truncation");
        e[i] = static_cast<uint8_t>(exps[i]);
    }
    if (c != 0) s.terms_.emplace(e, c);
    return s;
}

MultiSeries MultiSeries::var(const std::string& name, int trunc_order) {
    return monomial(1, {name}, {1}, {trunc_order});
}

int MultiSeries::var_index(const std::string& v) const {
    for (size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i] == v) return static_cast<int>(i);
    return -1;
}

int MultiSeries::trunc_of(const std::string& v) const {
    int i = var_index(v);
    return i < 0 ? -1 : trunc_[i];
}

bool MultiSeries::within_trunc(const Exp& e) const {
    for (size_t i = 0; i < vars_.size(); ++i)
        if (e[i] > trunc_[i]) return false;
    for (size_t i = vars_.size(); i < kMaxVars; ++i)
        if (e[i] != 0) return false;
    return true;
}

void MultiSeries::insert_add(const Exp& e, const ExactRat& c) {
    if (c == 0 || !within_trunc(e)) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_.emplace(e, c);
    } else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

void MultiSeries::set_coeff(const std::map<std::string, int>& exps, const ExactRat& c) {
    Exp e{};
    for (const auto& [v, k] : exps) {
        int i = var_index(v);
        if (i < 0) throw std::invalid_argument("set_coeff: unknown variable " + v);
        if (k < 0 || k > trunc_[i])
            throw std::invalid_argument("set_coeff: exponent outside truncation");
        e[i] = static_cast<uint8_t>(k);
    }
    terms_.erase(e);
    if (c != 0) terms_.emplace(e, c);
}

ExactRat MultiSeries::coeff(const std::map<std::string, int>& exps) const {
    Exp e{};
    for (const auto& [v, k] : exps) {
        if (k == 0) continue;
        int i = var_index(v);
        if (i < 0) return 0;  // series is constant in v, positive power -> 0
        if (k < 0 || k > trunc_[i])
            throw std::out_of_range("coeff: exponent outside truncation of " + v);
        e[i] = static_cast<uint8_t>(k);
    }
    auto it = terms_.find(e);
    return it == terms_.end() ? ExactRat(0) : it->second;
}

// Result frame for a binary op: union of variable lists; shared variables
// get min truncation, others keep their own (a variable absent from one
// operand is exact there).
MultiSeries MultiSeries::make_union_frame(const MultiSeries& a, const MultiSeries& b,
                                          bool /*trunc_min_shared*/) {
    std::vector<std::string> vars = a.vars_;
    std::vector<int> trunc = a.trunc_;
    for (size_t j = 0; j < b.vars_.size(); ++j) {
        int i = a.var_index(b.vars_[j]);
        if (i < 0) {
            vars.push_back(b.vars_[j]);
            trunc.push_back(b.trunc_[j]);
        } else {
            trunc[i] = std::min(trunc[i], b.trunc_[j]);
        }
    }
    return MultiSeries(std::move(vars), std::move(trunc));
}

void MultiSeries::align_onto(const MultiSeries& src, const std::vector<std::string>& vars,
                             std::map<Exp, ExactRat>& out) {
    std::array<int, kMaxVars> pos{};
    for (size_t i = 0; i < src.vars_.size(); ++i) {
        auto it = std::find(vars.begin(), vars.end(), src.vars_[i]);
        pos[i] = static_cast<int>(it - vars.begin());
    }
    for (const auto& [e, c] : src.terms_) {
        Exp ne{};
        for (size_t i = 0; i < src.vars_.size(); ++i) ne[pos[i]] = e[i];
        out.emplace(ne, c);
    }
}

MultiSeries MultiSeries::operator+(const MultiSeries& o) const {
    MultiSeries r = make_union_frame(*this, o, true);
    std::map<Exp, ExactRat> ta, tb;
    align_onto(*this, r.vars_, ta);
    align_onto(o, r.vars_, tb);
    for (auto& [e, c] : ta) r.insert_add(e, c);
    for (auto& [e, c] : tb) r.insert_add(e, c);
    return r;
}

MultiSeries MultiSeries::operator-() const {
    MultiSeries r = *this;
    for (auto& [e, c] : r.terms_) c = -c;
    return r;
}

MultiSeries MultiSeries::operator-(const MultiSeries& o) const { return *this + (-o); }

MultiSeries MultiSeries::operator*(const ExactRat& c) const {
    MultiSeries r(vars_, trunc_);
    if (c == 0) return r;
    r.terms_ = terms_;
    for (auto& [e, v] : r.terms_) v *= c;
    return r;
}

namespace {
using Term = std::pair<MultiSeries::Exp, ExactRat>;

bool add_exp(const MultiSeries::Exp& a, const MultiSeries::Exp& b,
             const std::vector<int>& trunc, MultiSeries::Exp& out) {
    for (size_t i = 0; i < trunc.size(); ++i) {
        int v = int(a[i]) + int(b[i]);
        if (v > trunc[i]) return false;
        out[i] = static_cast<uint8_t>(v);
    }
    return true;
}
}  // namespace

MultiSeries MultiSeries::mul_serial(const MultiSeries& a, const MultiSeries& b) {
    MultiSeries r = make_union_frame(a, b, true);
    std::map<Exp, ExactRat> ta, tb;
    align_onto(a, r.vars_, ta);
    align_onto(b, r.vars_, tb);
    for (const auto& [ea, ca] : ta) {
        for (const auto& [eb, cb] : tb) {
            Exp e{};
            if (!add_exp(ea, eb, r.trunc_, e)) continue;
            r.insert_add(e, ca * cb);
        }
    }
    return r;
}

MultiSeries MultiSeries::mul_parallel(const MultiSeries& a, const MultiSeries& b) {
    MultiSeries r = make_union_frame(a, b, true);
    std::map<Exp, ExactRat> ta_m, tb_m;
    align_onto(a, r.vars_, ta_m);
    align_onto(b, r.vars_, tb_m);
    std::vector<Term> ta(ta_m.begin(), ta_m.end()), tb(tb_m.begin(), tb_m.end());

    int nth = omp_get_max_threads();
    std::vector<std::map<Exp, ExactRat>> partial(nth);
#pragma omp parallel num_threads(nth)
    {
        int tid = omp_get_thread_num();
        auto& local = partial[tid];
#pragma omp for schedule(static)
        for (long i = 0; i < static_cast<long>(ta.size()); ++i) {
            for (const auto& [eb, cb] : tb) {
                Exp e{};
                if (!add_exp(ta[i].first, eb, r.trunc_, e)) continue;
                auto it = local.find(e);
                if (it == local.end())
                    local.emplace(e, ta[i].second * cb);
                else
                    it->second += ta[i].second * cb;
            }
        }
    }
    // exact arithmetic: merge order cannot change the result
    for (auto& part : partial)
        for (auto& [e, c] : part) r.insert_add(e, c);
    return r;
}

MultiSeries MultiSeries::operator*(const MultiSeries& o) const {
    size_t work = terms_.size() * o.terms_.size();
    if (work >= 16384 && omp_get_max_threads() > 1) return mul_parallel(*this, o);
    return mul_serial(*this, o);
}

bool MultiSeries::operator==(const MultiSeries& o) const {
    return vars_ == o.vars_ && trunc_ == o.trunc_ && terms_ == o.terms_;
}

MultiSeries MultiSeries::inverse_unit() const {
    ExactRat c0 = coeff({});
    if (c0 == 0) throw std::domain_error("inverse: constant term is zero");
    // 1/b = (1/c0) * sum_j (1 - b/c0)^j ; the tail is nilpotent to truncation
    ExactRat ic0 = ExactRat(1) / c0;
    MultiSeries u = constant(1, vars_, trunc_) - (*this * ic0);
    MultiSeries acc = constant(1, vars_, trunc_);
    MultiSeries pow = constant(1, vars_, trunc_);
    // each extra factor of u raises the minimum total degree by >= 1
    size_t guard = 1;
    for (int i = 0; i < static_cast<int>(vars_.size()); ++i) guard += trunc_[i];
    for (size_t j = 0; j < guard; ++j) {
        pow = pow * u;
        if (pow.is_empty()) break;
        acc = acc + pow;
    }
    if (!pow.is_empty()) throw std::domain_error("inverse: did not terminate");
    return acc * ic0;
}

MultiSeries MultiSeries::div_exact(const MultiSeries& b) const {
    if (b.is_empty()) throw std::domain_error("div_exact: division by zero series");
    if (b.terms_.size() == 1) {
        // monomial divisor: exact exponent shift, truncations move down
        const auto& [eb, cb] = *b.terms_.begin();
        MultiSeries r = make_union_frame(*this, b, true);
        for (size_t i = 0; i < r.vars_.size(); ++i) {
            int bi = b.var_index(r.vars_[i]);
            int sh = bi < 0 ? 0 : int(eb[bi]);
            int self = var_index(r.vars_[i]);
            int base = self < 0 ? (bi < 0 ? 0 : b.trunc_[bi]) : trunc_[self];
            r.trunc_[i] = base - sh;
            if (r.trunc_[i] < 0) throw std::domain_error("div_exact: truncation exhausted");
        }
        std::map<Exp, ExactRat> ta;
        align_onto(*this, r.vars_, ta);
        Exp ebr{};
        {
            std::map<Exp, ExactRat> tbm;
            align_onto(b, r.vars_, tbm);
            ebr = tbm.begin()->first;
        }
        for (const auto& [e, c] : ta) {
            Exp q{};
            for (size_t i = 0; i < r.vars_.size(); ++i) {
                int d = int(e[i]) - int(ebr[i]);
                if (d < 0) throw std::domain_error("div_exact: term not divisible by monomial");
                q[i] = static_cast<uint8_t>(d);
            }
            r.insert_add(q, c / cb);
        }
        return r;
    }
    return *this * b.inverse_unit();
}

MultiSeries MultiSeries::pow_rational(long p, long q) const {
    if (q <= 0) throw std::domain_error("pow_rational: q must be positive");
    if (coeff({}) != 1) throw std::domain_error("pow_rational: constant term must be 1");
    ExactRat a = make_rat(p, q);
    MultiSeries u = *this - constant(1, vars_, trunc_);
    MultiSeries acc = constant(1, vars_, trunc_);
    MultiSeries pw = constant(1, vars_, trunc_);
    size_t guard = 1;
    for (int i = 0; i < static_cast<int>(vars_.size()); ++i) guard += trunc_[i];
    for (size_t j = 1; j <= guard; ++j) {
        pw = pw * u;
        if (pw.is_empty()) break;
        acc = acc + pw * binomial_rat(a, static_cast<long>(j));
    }
    if (!pw.is_empty()) throw std::domain_error("pow_rational: did not terminate");
    return acc;
}

MultiSeries MultiSeries::pow_int(long k) const {
    if (k < 0) throw std::domain_error("pow_int: negative exponent");
    MultiSeries acc = constant(1, vars_, trunc_);
    for (long i = 0; i < k; ++i) acc = acc * *this;
    return acc;
}

MultiSeries MultiSeries::derive(const std::string& v) const {
    int i = var_index(v);
    if (i < 0) throw std::invalid_argument("derive: unknown variable " + v);
    if (trunc_[i] < 1) throw std::domain_error("derive: truncation exhausted in " + v);
    MultiSeries r(vars_, trunc_);
    r.trunc_[i] -= 1;
    for (const auto& [e, c] : terms_) {
        if (e[i] == 0) continue;
        Exp ne = e;
        ne[i] -= 1;
        r.insert_add(ne, c * ExactRat(int(e[i])));
    }
    return r;
}

MultiSeries MultiSeries::antiderive(const std::string& v) const {
    int i = var_index(v);
    if (i < 0) throw std::invalid_argument("antiderive: unknown variable " + v);
    if (trunc_[i] >= kTruncCap) throw std::domain_error("antiderive: truncation cap");
    MultiSeries r(vars_, trunc_);
    r.trunc_[i] += 1;
    for (const auto& [e, c] : terms_) {
        Exp ne = e;
        ne[i] += 1;
        r.insert_add(ne, c / ExactRat(int(e[i]) + 1));
    }
    return r;
}

MultiSeries MultiSeries::substitute(const std::string& v, const MultiSeries& s) const {
    int vi = var_index(v);
    if (vi < 0) return *this;  // constant in v: nothing to substitute

    bool monomial_path = s.terms_.size() == 1;
    if (monomial_path) {
        const auto& [em, cm] = *s.terms_.begin();
        bool all_zero = true;
        for (size_t j = 0; j < s.vars_.size(); ++j) {
            if (em[j] == 0) continue;
            all_zero = false;
            if (s.vars_[j] != v && var_index(s.vars_[j]) >= 0)
                monomial_path = false;  // overlaps our frame: fall through
        }
        if (all_zero)
            throw std::domain_error("substitute: non-nilpotent (constant) substitution");
        if (monomial_path) {
            // exact exponent remapping: v^k -> cm^k * prod w^(k*em_w)
            std::vector<std::string> vars;
            std::vector<int> trunc;
            for (size_t i = 0; i < vars_.size(); ++i) {
                if (static_cast<int>(i) == vi) continue;
                vars.push_back(vars_[i]);
                trunc.push_back(trunc_[i]);
            }
            int tv = trunc_[vi];
            for (size_t j = 0; j < s.vars_.size(); ++j) {
                if (em[j] == 0) continue;
                vars.push_back(s.vars_[j]);
                trunc.push_back(std::min<long>((long(tv) + 1) * em[j] - 1, kTruncCap));
            }
            MultiSeries r(vars, trunc);
            for (const auto& [e, c] : terms_) {
                std::map<std::string, int> ne;
                for (size_t i = 0; i < vars_.size(); ++i)
                    if (static_cast<int>(i) != vi && e[i]) ne[vars_[i]] += e[i];
                int k = e[vi];
                for (size_t j = 0; j < s.vars_.size(); ++j)
                    if (em[j]) ne[s.vars_[j]] += k * em[j];
                Exp xe{};
                bool ok = true;
                for (auto& [w, kk] : ne) {
                    int i = r.var_index(w);
                    if (kk > r.trunc_[i]) { ok = false; break; }
                    xe[i] = static_cast<uint8_t>(kk);
                }
                if (!ok) continue;
                ExactRat cc = c;
                for (int t = 0; t < k; ++t) cc *= cm;
                r.insert_add(xe, cc);
            }
            return r;
        }
    }

    if (!s.is_empty() && s.coeff({}) != 0)
        throw std::domain_error("substitute: substituted series has nonzero constant term");

    // Horner in v over the union frame; conservative truncations via operator*.
    MultiSeries frame = make_union_frame(*this, s, true);
    int kmax = 0;
    for (const auto& [e, c] : terms_) kmax = std::max(kmax, int(e[vi]));
    MultiSeries acc(frame.vars_, frame.trunc_);
    for (int k = kmax; k >= 0; --k) {
        MultiSeries layer = slice(v, k).with_vars(frame.vars_, frame.trunc_);
        acc = acc * s + layer;
    }
    // v is gone now; drop it from the frame
    std::vector<std::string> vars;
    std::vector<int> trunc;
    for (size_t i = 0; i < acc.vars_.size(); ++i) {
        if (acc.vars_[i] == v) continue;
        vars.push_back(acc.vars_[i]);
        trunc.push_back(acc.trunc_[i]);
    }
    MultiSeries r(vars, trunc);
    int dvi = acc.var_index(v);
    for (const auto& [e, c] : acc.terms_) {
        if (dvi >= 0 && e[dvi] != 0)
            throw std::logic_error("substitute: residual exponent in substituted variable");
        Exp ne{};
        size_t w = 0;
        for (size_t i = 0; i < acc.vars_.size(); ++i) {
            if (static_cast<int>(i) == dvi) continue;
            ne[w++] = e[i];
        }
        r.insert_add(ne, c);
    }
    return r;
}

MultiSeries MultiSeries::slice(const std::string& v, int k) const {
    int vi = var_index(v);
    if (vi < 0) {
        if (k == 0) return *this;
        return MultiSeries(vars_, trunc_);
    }
    if (k < 0 || k > trunc_[vi]) throw std::out_of_range("slice: order outside truncation");
    std::vector<std::string> vars;
    std::vector<int> trunc;
    for (size_t i = 0; i < vars_.size(); ++i) {
        if (static_cast<int>(i) == vi) continue;
        vars.push_back(vars_[i]);
        trunc.push_back(trunc_[i]);
    }
    MultiSeries r(vars, trunc);
    for (const auto& [e, c] : terms_) {
        if (int(e[vi]) != k) continue;
        Exp ne{};
        size_t w = 0;
        for (size_t i = 0; i < vars_.size(); ++i) {
            if (static_cast<int>(i) == vi) continue;
            ne[w++] = e[i];
        }
        r.insert_add(ne, c);
    }
    return r;
}

MultiSeries MultiSeries::divide_by_var_difference(const std::string& v1, const std::string& v2,
                                                  int out1, int out2) const {
    int i1 = var_index(v1), i2 = var_index(v2);
    if (i1 < 0 || i2 < 0)
        throw std::invalid_argument("divide_by_var_difference: unknown variable");
    if (out1 < 0 || out2 < 0) throw std::invalid_argument("divide_by_var_difference: bad box");
    if (trunc_[i1] < out1 + out2 + 1 || trunc_[i2] < out2)
        throw std::domain_error(
            "divide_by_var_difference: input truncation too small for requested box");
    int rem_guard = std::min(trunc_[i1], trunc_[i2]);

    MultiSeries r(vars_, trunc_);
    r.trunc_[i1] = out1;
    r.trunc_[i2] = out2;

    // synthetic division by (v1 - v2), processing v1-layers downward:
    //   q_{i-1} = c_i + carry_i,  carry_{i-1} = v2 * q_{i-1},  rem = c_0 + carry_0
    int top = 0;
    for (const auto& [e, c] : terms_) top = std::max(top, int(e[i1]));
    std::map<Exp, ExactRat> carry;  // exponents with v1 zeroed
    for (int i = top; i >= 1; --i) {
        std::map<Exp, ExactRat> layer = std::move(carry);
        carry.clear();
        for (const auto& [e, c] : terms_) {
            if (int(e[i1]) != i) continue;
            Exp ne = e;
            ne[i1] = 0;
            auto it = layer.find(ne);
            if (it == layer.end())
                layer.emplace(ne, c);
            else {
                it->second += c;
                if (it->second == 0) layer.erase(it);
            }
        }
        for (const auto& [e, c] : layer) {
            Exp qe = e;
            qe[i1] = static_cast<uint8_t>(i - 1);
            r.insert_add(qe, c);
            if (int(e[i2]) + 1 <= rem_guard) {
                Exp ce = e;
                ce[i2] += 1;
                auto it = carry.find(ce);
                if (it == carry.end())
                    carry.emplace(ce, c);
                else {
                    it->second += c;
                    if (it->second == 0) carry.erase(it);
                }
            }
        }
    }
    // remainder = v1-free layer of the input plus final carry; it is the
    // input evaluated at v1 = v2 and must vanish where trusted
    for (const auto& [e, c] : terms_) {
        if (e[i1] != 0) continue;
        auto it = carry.find(e);
        if (it == carry.end())
            carry.emplace(e, c);
        else {
            it->second += c;
            if (it->second == 0) carry.erase(it);
        }
    }
    for (const auto& [e, c] : carry) {
        if (int(e[i2]) <= rem_guard && c != 0)
            throw std::domain_error("divide_by_var_difference: not divisible");
    }
    return r;
}

MultiSeries MultiSeries::truncate_to(const std::map<std::string, int>& box) const {
    MultiSeries r(vars_, trunc_);
    for (const auto& [v, t] : box) {
        int i = var_index(v);
        if (i < 0) continue;
        if (t > trunc_[i])
            throw std::domain_error("truncate_to: cannot raise truncation of " + v);
        r.trunc_[i] = t;
    }
    for (const auto& [e, c] : terms_) r.insert_add(e, c);
    return r;
}

MultiSeries MultiSeries::with_vars(const std::vector<std::string>& vars,
                                   const std::vector<int>& trunc) const {
    check_frame(vars, trunc);
    std::vector<std::string> nv = vars_;
    std::vector<int> nt = trunc_;
    for (size_t j = 0; j < vars.size(); ++j) {
        if (var_index(vars[j]) >= 0) continue;
        nv.push_back(vars[j]);
        nt.push_back(trunc[j]);
    }
    MultiSeries r(nv, nt);
    std::map<Exp, ExactRat> t;
    align_onto(*this, r.vars_, t);
    r.terms_ = std::move(t);
    return r;
}

std::optional<MultiSeries::Discrepancy> MultiSeries::compare(
    const MultiSeries& a, const MultiSeries& b, const std::map<std::string, int>& box) {
    for (const auto& [v, t] : box) {
        int ia = a.var_index(v), ib = b.var_index(v);
        if (ia >= 0 && a.trunc_[ia] < t)
            throw std::domain_error("compare: box exceeds truncation of lhs in " + v);
        if (ib >= 0 && b.trunc_[ib] < t)
            throw std::domain_error("compare: box exceeds truncation of rhs in " + v);
    }
    MultiSeries frame = make_union_frame(a, b, true);
    std::map<Exp, ExactRat> ta, tb;
    align_onto(a, frame.vars_, ta);
    align_onto(b, frame.vars_, tb);
    auto in_box = [&](const Exp& e) {
        for (size_t i = 0; i < frame.vars_.size(); ++i) {
            auto it = box.find(frame.vars_[i]);
            if (it != box.end() && int(e[i]) > it->second) return false;
        }
        return true;
    };
    std::map<Exp, ExactRat> diff;
    for (const auto& [e, c] : ta)
        if (in_box(e)) diff[e] = c;
    for (const auto& [e, c] : tb) {
        if (!in_box(e)) continue;
        auto it = diff.find(e);
        if (it == diff.end())
            diff.emplace(e, -c);
        else {
            it->second -= c;
            if (it->second == 0) diff.erase(it);
        }
    }
    if (diff.empty()) return std::nullopt;
    const Exp& e = diff.begin()->first;
    Discrepancy d;
    for (size_t i = 0; i < frame.vars_.size(); ++i)
        if (e[i]) d.exponents[frame.vars_[i]] = e[i];
    auto ita = ta.find(e);
    auto itb = tb.find(e);
    d.lhs = ita == ta.end() ? ExactRat(0) : ita->second;
    d.rhs = itb == tb.end() ? ExactRat(0) : itb->second;
    return d;
}

bool MultiSeries::is_zero_within(const std::map<std::string, int>& box) const {
    MultiSeries z(vars_, trunc_);
    return !compare(*this, z, box).has_value();
}

std::string MultiSeries::dump() const {
    std::ostringstream os;
    os << "# vars:";
    for (const auto& v : vars_) os << " " << v;
    os << "\n# trunc:";
    for (int t : trunc_) os << " " << t;
    os << "\n";
    for (const auto& [e, c] : terms_) {
        for (size_t i = 0; i < vars_.size(); ++i) {
            if (i) os << " ";
            os << int(e[i]);
        }
        os << "\t" << to_string(c) << "\n";
    }
    return os.str();
}

MultiSeries fixed_point_zeta(int order, const std::string& var) {
    if (order < 1) throw std::invalid_argument("fixed_point_zeta: order must be >= 1");
    MultiSeries t8 = MultiSeries::monomial(8, {var}, {1}, {order});
    MultiSeries one = MultiSeries::constant(1, {var}, {order});
    MultiSeries z(std::vector<std::string>{var}, std::vector<int>{order});
    MultiSeries prev = z;
    for (int i = 0; i <= order + 1; ++i) {
        prev = z;
        z = t8 * (one + z).pow_rational(3, 2);
        if (z == prev) return z;
    }
    throw std::logic_error("fixed_point_zeta: no fixed point reached");
}

MultiSeries fixed_point_h(int order, const std::string& var) {
    if (order < 1) throw std::invalid_argument("fixed_point_h: order must be >= 1");
    MultiSeries x = MultiSeries::var(var, order);
    MultiSeries one = MultiSeries::constant(1, {var}, {order});
    MultiSeries h = x;
    MultiSeries prev = h;
    for (int i = 0; i <= order / 3 + 2; ++i) {
        prev = h;
        h = x * (one + h.pow_int(3) * ExactRat(8)).pow_rational(1, 2);
        if (h == prev) return h;
    }
    throw std::logic_error("fixed_point_h: no fixed point reached");
}

}  // namespace tricount
