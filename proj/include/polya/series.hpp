#pragma once

#include "polya/rational.hpp"

#include <cstddef>
#include <vector>

namespace polya {

/// Polynomial in a single marker variable with exact rational coefficients.
///
/// Coefficients are indexed by the power of the marker; trailing zeros are
/// always trimmed so that `degree()` is the true degree (the zero polynomial
/// has no coefficients and degree -1).
class UPolynomial {
public:
    UPolynomial() = default;
    explicit UPolynomial(std::vector<Rational> coeffs);

    static UPolynomial monomial(std::size_t power, const Rational &coeff = 1);

    [[nodiscard]] long degree() const { return static_cast<long>(coeffs_.size()) - 1; }
    [[nodiscard]] const std::vector<Rational> &coeffs() const { return coeffs_; }
    // Coefficient of u^k, zero beyond the degree.
    [[nodiscard]] Rational coeff(std::size_t k) const;

    [[nodiscard]] Rational eval(const Rational &u) const;
    [[nodiscard]] Rational eval_at_one() const;
    // p'(1) = sum k [u^k]p
    [[nodiscard]] Rational derivative_at_one() const;

    UPolynomial &operator+=(const UPolynomial &other);
    UPolynomial &operator*=(const UPolynomial &other);
    UPolynomial &operator*=(const Rational &scalar);

    friend UPolynomial operator+(UPolynomial a, const UPolynomial &b) { return a += b; }
    friend UPolynomial operator*(UPolynomial a, const UPolynomial &b) { return a *= b; }
    friend UPolynomial operator*(UPolynomial a, const Rational &s) { return a *= s; }
    friend bool operator==(const UPolynomial &, const UPolynomial &) = default;

private:
    void trim();

    std::vector<Rational> coeffs_;
};

/// Truncated power series sum_{i=0}^{N} a_i z^i over exact rationals.
///
/// The coefficient vector always has exactly order()+1 entries. Binary
/// operations truncate to the smaller of the two orders.
class ExactSeries {
public:
    explicit ExactSeries(std::size_t order);
    ExactSeries(std::vector<Rational> coeffs, std::size_t order);

    static ExactSeries identity(std::size_t order); // z
    static ExactSeries constant(const Rational &c, std::size_t order);

    [[nodiscard]] std::size_t order() const { return order_; }
    [[nodiscard]] const std::vector<Rational> &coeffs() const { return coeffs_; }
    [[nodiscard]] const Rational &operator[](std::size_t i) const { return coeffs_.at(i); }
    Rational &operator[](std::size_t i) { return coeffs_.at(i); }

    [[nodiscard]] ExactSeries truncated(std::size_t order) const;
    [[nodiscard]] ExactSeries derivative() const;
    // f(z^k)
    [[nodiscard]] ExactSeries dilate(std::size_t k) const;
    // z^k f(z), truncated
    [[nodiscard]] ExactSeries shift(std::size_t k) const;
    // exp(f); requires f(0) == 0
    [[nodiscard]] ExactSeries exp() const;
    // 1/f; requires f(0) != 0
    [[nodiscard]] ExactSeries reciprocal() const;

    ExactSeries &operator+=(const ExactSeries &other);
    ExactSeries &operator-=(const ExactSeries &other);
    ExactSeries &operator*=(const Rational &scalar);

    friend ExactSeries operator+(ExactSeries a, const ExactSeries &b) { return a += b; }
    friend ExactSeries operator-(ExactSeries a, const ExactSeries &b) { return a -= b; }
    friend ExactSeries operator*(ExactSeries a, const Rational &s) { return a *= s; }
    friend ExactSeries operator*(const ExactSeries &a, const ExactSeries &b);
    friend bool operator==(const ExactSeries &, const ExactSeries &) = default;

private:
    std::vector<Rational> coeffs_;
    std::size_t order_;
};

/// outer(inner(z)) truncated at `order`. Throws RangeError if inner(0) != 0.
ExactSeries series_compose(const ExactSeries &outer, const ExactSeries &inner, std::size_t order);

/// Number of Pólya trees t_1..t_N, returned with index 0 unused (t[0] == 0).
std::vector<BigInt> polya_counts(std::size_t max_n);

/// Cayley weights c_n = n^(n-1)/n!, index 0..N with c_0 = 0. Also checks
/// C(z) = z exp(C(z)) coefficient-wise.
std::vector<Rational> cayley_weights(std::size_t max_n);

// d_0..d_N from the divisor-sum recurrence.
std::vector<Rational> dforest_weights_recurrence(const std::vector<BigInt> &t, std::size_t max_n);
// d_0..d_N as the coefficients of exp(sum_{i>=2} T(z^i)/i).
std::vector<Rational> dforest_weights_exp(const std::vector<BigInt> &t, std::size_t max_n);
/// d_0..d_N computed both ways; throws ConsistencyError if they differ.
std::vector<Rational> dforest_weights(std::size_t max_n);

struct CountTable {
    std::vector<BigInt> t;   // t[0] = 0
    std::vector<Rational> d; // d_0..d_N
    std::vector<Rational> c; // c_0..c_N

    [[nodiscard]] std::size_t order() const { return t.size() - 1; }
    [[nodiscard]] ExactSeries T() const;
    [[nodiscard]] ExactSeries D() const;
    [[nodiscard]] ExactSeries C() const;

    static CountTable build(std::size_t max_n);
};

/// Rows t_{c,n}(u) for n = 1..N; row 0 is the zero polynomial.
struct BivariatePolynomialTable {
    std::vector<UPolynomial> rows;

    [[nodiscard]] const UPolynomial &row(std::size_t n) const { return rows.at(n); }
    [[nodiscard]] std::size_t order() const { return rows.size() - 1; }
};

/// t_{c,n}(u) = [z^n] C(u z D(z)), expanded power by power of zD(z).
BivariatePolynomialTable ctree_polynomials(const CountTable &table);
BivariatePolynomialTable ctree_polynomials(std::size_t max_n);

/// T(z)/(1-T(z)); every coefficient is asserted to be a nonnegative integer.
ExactSeries pointed_series(const CountTable &table);
ExactSeries pointed_series(std::size_t max_n);

/// Exact probabilities that a random C-node of a random size-n tree carries
/// a forest of size m, for fixed n.
class ForestSizeLaw {
public:
    explicit ForestSizeLaw(std::size_t n);
    ForestSizeLaw(const CountTable &table, std::size_t n);

    [[nodiscard]] std::size_t n() const { return n_; }
    // [z^n](T_c(z) d_m z^m / D(z))
    [[nodiscard]] Rational weight(std::size_t m) const;
    // [z^n] T_c(z)
    [[nodiscard]] const Rational &total() const { return total_; }
    [[nodiscard]] Rational probability(std::size_t m) const;

private:
    std::size_t n_;
    std::vector<Rational> d_;
    std::vector<Rational> tc_over_d_; // coefficients of T_c(z)/D(z) up to z^n
    Rational total_;
};

Rational exact_forest_prob(std::size_t n, std::size_t m);

} // namespace polya
