#include "polya/series.hpp"

#include "polya/errors.hpp"

#include <algorithm>
#include <string>
#include <utility>

namespace polya {

Rational parse_rational(std::string_view text)
{
    Rational q;
    if (q.set_str(std::string(text), 10) != 0 || q.get_den() == 0) {
        throw RangeError("not a rational: " + std::string(text));
    }
    q.canonicalize();
    return q;
}

// ---------------------------------------------------------------------------
// UPolynomial

UPolynomial::UPolynomial(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs))
{
    trim();
}

UPolynomial UPolynomial::monomial(std::size_t power, const Rational &coeff)
{
    std::vector<Rational> c(power + 1);
    c[power] = coeff;
    return UPolynomial(std::move(c));
}

void UPolynomial::trim()
{
    while (!coeffs_.empty() && coeffs_.back() == 0) {
        coeffs_.pop_back();
    }
}

Rational UPolynomial::coeff(std::size_t k) const
{
    return k < coeffs_.size() ? coeffs_[k] : Rational(0);
}

Rational UPolynomial::eval(const Rational &u) const
{
    Rational acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        acc = acc * u + *it;
    }
    return acc;
}

Rational UPolynomial::eval_at_one() const
{
    Rational acc = 0;
    for (const auto &c : coeffs_) {
        acc += c;
    }
    return acc;
}

Rational UPolynomial::derivative_at_one() const
{
    Rational acc = 0;
    for (std::size_t k = 1; k < coeffs_.size(); ++k) {
        acc += coeffs_[k] * static_cast<unsigned long>(k);
    }
    return acc;
}

UPolynomial &UPolynomial::operator+=(const UPolynomial &other)
{
    if (other.coeffs_.size() > coeffs_.size()) {
        coeffs_.resize(other.coeffs_.size());
    }
    for (std::size_t k = 0; k < other.coeffs_.size(); ++k) {
        coeffs_[k] += other.coeffs_[k];
    }
    trim();
    return *this;
}

UPolynomial &UPolynomial::operator*=(const UPolynomial &other)
{
    if (coeffs_.empty() || other.coeffs_.empty()) {
        coeffs_.clear();
        return *this;
    }
    std::vector<Rational> out(coeffs_.size() + other.coeffs_.size() - 1);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (coeffs_[i] == 0) {
            continue;
        }
        for (std::size_t j = 0; j < other.coeffs_.size(); ++j) {
            out[i + j] += coeffs_[i] * other.coeffs_[j];
        }
    }
    coeffs_ = std::move(out);
    trim();
    return *this;
}

UPolynomial &UPolynomial::operator*=(const Rational &scalar)
{
    for (auto &c : coeffs_) {
        c *= scalar;
    }
    trim();
    return *this;
}

// ---------------------------------------------------------------------------
// ExactSeries

ExactSeries::ExactSeries(std::size_t order) : coeffs_(order + 1), order_(order) {}

ExactSeries::ExactSeries(std::vector<Rational> coeffs, std::size_t order)
    : coeffs_(std::move(coeffs)), order_(order)
{
    coeffs_.resize(order + 1);
}

ExactSeries ExactSeries::identity(std::size_t order)
{
    ExactSeries s(order);
    if (order >= 1) {
        s.coeffs_[1] = 1;
    }
    return s;
}

ExactSeries ExactSeries::constant(const Rational &c, std::size_t order)
{
    ExactSeries s(order);
    s.coeffs_[0] = c;
    return s;
}

ExactSeries ExactSeries::truncated(std::size_t order) const
{
    std::vector<Rational> c(coeffs_.begin(), coeffs_.begin() + static_cast<long>(std::min(order, order_) + 1));
    return ExactSeries(std::move(c), order);
}

ExactSeries ExactSeries::derivative() const
{
    ExactSeries out(order_);
    for (std::size_t i = 1; i <= order_; ++i) {
        out.coeffs_[i - 1] = coeffs_[i] * static_cast<unsigned long>(i);
    }
    return out;
}

ExactSeries ExactSeries::dilate(std::size_t k) const
{
    require(k >= 1, "dilation factor must be positive");
    ExactSeries out(order_);
    for (std::size_t i = 0; i * k <= order_; ++i) {
        out.coeffs_[i * k] = coeffs_[i];
    }
    return out;
}

ExactSeries ExactSeries::shift(std::size_t k) const
{
    ExactSeries out(order_);
    for (std::size_t i = 0; i + k <= order_; ++i) {
        out.coeffs_[i + k] = coeffs_[i];
    }
    return out;
}

ExactSeries ExactSeries::exp() const
{
    require(coeffs_[0] == 0, "exp requires a zero constant term");
    // g' = f' g  =>  n g_n = sum_{k=1}^{n} k f_k g_{n-k}
    ExactSeries g(order_);
    g.coeffs_[0] = 1;
    Rational acc;
    for (std::size_t n = 1; n <= order_; ++n) {
        acc = 0;
        for (std::size_t k = 1; k <= n; ++k) {
            if (coeffs_[k] != 0) {
                acc += coeffs_[k] * g.coeffs_[n - k] * static_cast<unsigned long>(k);
            }
        }
        g.coeffs_[n] = acc / static_cast<unsigned long>(n);
    }
    return g;
}

ExactSeries ExactSeries::reciprocal() const
{
    require(coeffs_[0] != 0, "reciprocal requires a nonzero constant term");
    ExactSeries g(order_);
    const Rational inv0 = 1 / coeffs_[0];
    g.coeffs_[0] = inv0;
    Rational acc;
    for (std::size_t n = 1; n <= order_; ++n) {
        acc = 0;
        for (std::size_t k = 1; k <= n; ++k) {
            if (coeffs_[k] != 0) {
                acc += coeffs_[k] * g.coeffs_[n - k];
            }
        }
        g.coeffs_[n] = -acc * inv0;
    }
    return g;
}

ExactSeries &ExactSeries::operator+=(const ExactSeries &other)
{
    order_ = std::min(order_, other.order_);
    coeffs_.resize(order_ + 1);
    for (std::size_t i = 0; i <= order_; ++i) {
        coeffs_[i] += other.coeffs_[i];
    }
    return *this;
}

ExactSeries &ExactSeries::operator-=(const ExactSeries &other)
{
    order_ = std::min(order_, other.order_);
    coeffs_.resize(order_ + 1);
    for (std::size_t i = 0; i <= order_; ++i) {
        coeffs_[i] -= other.coeffs_[i];
    }
    return *this;
}

ExactSeries &ExactSeries::operator*=(const Rational &scalar)
{
    for (auto &c : coeffs_) {
        c *= scalar;
    }
    return *this;
}

ExactSeries operator*(const ExactSeries &a, const ExactSeries &b)
{
    const std::size_t order = std::min(a.order_, b.order_);
    ExactSeries out(order);
    for (std::size_t i = 0; i <= order; ++i) {
        if (a.coeffs_[i] == 0) {
            continue;
        }
        for (std::size_t j = 0; i + j <= order; ++j) {
            if (b.coeffs_[j] != 0) {
                out.coeffs_[i + j] += a.coeffs_[i] * b.coeffs_[j];
            }
        }
    }
    return out;
}

ExactSeries series_compose(const ExactSeries &outer, const ExactSeries &inner, std::size_t order)
{
    require(inner[0] == 0, "inner series of a composition must have zero constant term");
    const ExactSeries in = inner.truncated(order);
    // Horner: o_0 + x(o_1 + x(o_2 + ...)), only coefficients up to `order` of
    // the outer series can contribute since inner = O(z).
    const std::size_t top = std::min(order, outer.order());
    ExactSeries acc = ExactSeries::constant(outer[top], order);
    for (std::size_t k = top; k-- > 0;) {
        acc = acc * in;
        acc[0] += outer[k];
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Counting sequences

std::vector<BigInt> polya_counts(std::size_t max_n)
{
    require(max_n >= 1, "polya_counts: empty range (N must be >= 1)");
    std::vector<BigInt> t(max_n + 1);
    // s[i] = sum_{m | i} m t_m
    std::vector<BigInt> s(max_n + 1);
    t[1] = 1;
    BigInt acc;
    for (std::size_t n = 2; n <= max_n; ++n) {
        const std::size_t i = n - 1;
        s[i] = 0;
        for (std::size_t m = 1; m * m <= i; ++m) {
            if (i % m != 0) {
                continue;
            }
            s[i] += t[m] * static_cast<unsigned long>(m);
            const std::size_t q = i / m;
            if (q != m) {
                s[i] += t[q] * static_cast<unsigned long>(q);
            }
        }
        acc = 0;
        for (std::size_t k = 1; k < n; ++k) {
            mpz_addmul(acc.get_mpz_t(), t[n - k].get_mpz_t(), s[k].get_mpz_t());
        }
        const unsigned long divisor = n - 1;
        check_consistency(mpz_divisible_ui_p(acc.get_mpz_t(), divisor) != 0,
                          "t_n recurrence left a nonzero remainder at n = " + std::to_string(n));
        mpz_divexact_ui(t[n].get_mpz_t(), acc.get_mpz_t(), divisor);
    }
    return t;
}

std::vector<Rational> cayley_weights(std::size_t max_n)
{
    require(max_n >= 1, "cayley_weights: N must be >= 1");
    std::vector<Rational> c(max_n + 1);
    BigInt factorial = 1;
    BigInt power;
    for (std::size_t n = 1; n <= max_n; ++n) {
        factorial *= static_cast<unsigned long>(n);
        mpz_ui_pow_ui(power.get_mpz_t(), n, n - 1);
        c[n] = Rational(power, factorial);
        c[n].canonicalize();
    }
    const ExactSeries C(c, max_n);
    const ExactSeries rhs = C.exp().shift(1);
    check_consistency(rhs == C, "C(z) = z exp(C(z)) failed");
    return c;
}

namespace {

std::vector<BigInt> proper_divisor_sums(const std::vector<BigInt> &t, std::size_t max_n)
{
    // s[i] = sum_{m | i, m != i} m t_m
    std::vector<BigInt> s(max_n + 1);
    for (std::size_t m = 1; m <= max_n; ++m) {
        const BigInt w = t[m] * static_cast<unsigned long>(m);
        for (std::size_t i = 2 * m; i <= max_n; i += m) {
            s[i] += w;
        }
    }
    return s;
}

} // namespace

std::vector<Rational> dforest_weights_recurrence(const std::vector<BigInt> &t, std::size_t max_n)
{
    require(t.size() > max_n / 2, "dforest_weights: count table too short");
    std::vector<Rational> d(max_n + 1);
    d[0] = 1;
    if (max_n == 0) {
        return d;
    }
    d[1] = 0;
    std::vector<BigInt> tt(t.begin(), t.end());
    tt.resize(max_n + 1); // t_m with m > N/2 never enters a proper divisor sum
    const auto s = proper_divisor_sums(tt, max_n);
    Rational acc;
    for (std::size_t n = 2; n <= max_n; ++n) {
        acc = 0;
        for (std::size_t i = 2; i <= n; ++i) {
            if (s[i] != 0 && d[n - i] != 0) {
                acc += d[n - i] * s[i];
            }
        }
        d[n] = acc / static_cast<unsigned long>(n);
    }
    return d;
}

std::vector<Rational> dforest_weights_exp(const std::vector<BigInt> &t, std::size_t max_n)
{
    require(t.size() > max_n / 2, "dforest_weights: count table too short");
    ExactSeries sum(max_n);
    for (std::size_t i = 2; i <= max_n; ++i) {
        for (std::size_t k = 1; k * i <= max_n; ++k) {
            sum[k * i] += Rational(t[k], static_cast<unsigned long>(i));
        }
    }
    for (std::size_t k = 0; k <= max_n; ++k) {
        sum[k].canonicalize();
    }
    return sum.exp().coeffs();
}

std::vector<Rational> dforest_weights(std::size_t max_n)
{
    const auto t = polya_counts(std::max<std::size_t>(max_n, 1));
    auto d = dforest_weights_recurrence(t, max_n);
    check_consistency(d == dforest_weights_exp(t, max_n), "d_n recurrence and exp route disagree");
    return d;
}

CountTable CountTable::build(std::size_t max_n)
{
    CountTable table;
    table.t = polya_counts(max_n);
    table.d = dforest_weights_recurrence(table.t, max_n);
    check_consistency(table.d == dforest_weights_exp(table.t, max_n), "d_n recurrence and exp route disagree");
    table.c = cayley_weights(max_n);
    return table;
}

ExactSeries CountTable::T() const
{
    std::vector<Rational> c(t.begin(), t.end());
    return ExactSeries(std::move(c), order());
}

ExactSeries CountTable::D() const
{
    return ExactSeries(d, order());
}

ExactSeries CountTable::C() const
{
    return ExactSeries(c, order());
}

BivariatePolynomialTable ctree_polynomials(const CountTable &table)
{
    const std::size_t max_n = table.order();
    // coeffs[n][k] = c_k [z^n] (z D(z))^k
    std::vector<std::vector<Rational>> coeffs(max_n + 1, std::vector<Rational>(max_n + 1));
    const ExactSeries x = table.D().shift(1);
    ExactSeries power = x;
    for (std::size_t k = 1; k <= max_n; ++k) {
        for (std::size_t n = k; n <= max_n; ++n) {
            if (power[n] != 0) {
                coeffs[n][k] = table.c[k] * power[n];
            }
        }
        if (k < max_n) {
            power = power * x;
        }
    }
    BivariatePolynomialTable out;
    out.rows.reserve(max_n + 1);
    for (auto &row : coeffs) {
        out.rows.emplace_back(std::move(row));
    }
    return out;
}

BivariatePolynomialTable ctree_polynomials(std::size_t max_n)
{
    return ctree_polynomials(CountTable::build(max_n));
}

ExactSeries pointed_series(const CountTable &table)
{
    const ExactSeries T = table.T();
    const ExactSeries one_minus_t = ExactSeries::constant(1, T.order()) - T;
    ExactSeries out = T * one_minus_t.reciprocal();
    for (const auto &c : out.coeffs()) {
        check_consistency(c >= 0 && c.get_den() == 1, "T/(1-T) has a non-integer coefficient");
    }
    return out;
}

ExactSeries pointed_series(std::size_t max_n)
{
    return pointed_series(CountTable::build(max_n));
}

ForestSizeLaw::ForestSizeLaw(std::size_t n) : ForestSizeLaw(CountTable::build(std::max<std::size_t>(n, 1)), n) {}

ForestSizeLaw::ForestSizeLaw(const CountTable &table, std::size_t n) : n_(n)
{
    require(n >= 1, "forest size law: [z^n] T_c(z) vanishes for n < 1");
    require(table.order() >= n, "forest size law: count table shorter than n");
    const CountTable small{
        .t = {table.t.begin(), table.t.begin() + static_cast<long>(n + 1)},
        .d = {table.d.begin(), table.d.begin() + static_cast<long>(n + 1)},
        .c = {table.c.begin(), table.c.begin() + static_cast<long>(n + 1)},
    };
    const ExactSeries tc = pointed_series(small);
    total_ = tc[n];
    tc_over_d_ = (tc * small.D().reciprocal()).coeffs();
    d_ = small.d;
}

Rational ForestSizeLaw::weight(std::size_t m) const
{
    require(m <= n_, "forest size m exceeds tree size n");
    return d_[m] * tc_over_d_[n_ - m];
}

Rational ForestSizeLaw::probability(std::size_t m) const
{
    return weight(m) / total_;
}

Rational exact_forest_prob(std::size_t n, std::size_t m)
{
    require(n >= 1, "exact_forest_prob: probability undefined for n < 1");
    require(m <= n, "exact_forest_prob: m must not exceed n");
    return ForestSizeLaw(n).probability(m);
}

} // namespace polya
