#pragma once

#include "polya/rational.hpp"

#include <boost/multiprecision/mpfr.hpp>

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace polya {

// 100 significant decimal digits; requested precisions must stay below this.
using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<100>>;

inline constexpr int max_precision_digits = 90;

Real to_real(const Rational &q);
Real to_real(const BigInt &z);
std::string to_decimal(const Real &x, int digits);

/// Constants of the square-root singularity of T(z) at rho.
struct SingularityConstants {
    Real rho;
    Real b;
    Real c;      // b^2 / 3
    Real D_rho;  // D(rho)
    Real Dp_rho; // D'(rho)
    Real c1;     // leading constant of the L_n tail (asymptotic equivalent)
    Real residual; // |rho D(rho) - 1/e|
    std::size_t series_order = 0;
    int working_precision_digits = 0;
    int newton_iterations = 0;
    std::vector<Real> d; // D coefficients used for evaluation

    // D and D' by Horner on the truncated series
    [[nodiscard]] Real D(const Real &z) const;
    [[nodiscard]] Real Dprime(const Real &z) const;
};

/// Solves rho D(rho) = 1/e by Newton iteration from 0.3 on the truncated D
/// series and derives b, c and c1. Throws NumericError if Newton does not
/// converge within 100 steps.
SingularityConstants compute_constants(std::size_t order = 128, int precision_digits = 50);

/// Flat key -> decimal string map (constants plus metadata), fixed key order.
std::vector<std::pair<std::string, std::string>> export_constants(const SingularityConstants &k, int digits);

/// (b sqrt(rho) / (2 sqrt(pi))) rho^-n n^-3/2
Real tn_asymptotic(std::size_t n, const SingularityConstants &k);

/// exp(-c1 n rho^{m/2} / m^{3/2}), the leading term of P[L_n <= m].
Real ln_tail_prob(std::size_t n, std::size_t m, const SingularityConstants &k);

/// Real m at which the leading-term tail law of L_n equals 1/2.
Real ln_tail_median(std::size_t n, const SingularityConstants &k);

/// -2 ln n / ln rho - 3 ln ln n / ln rho, i.e. E L_n without its
/// unspecified O(1) term. Requires n >= 3.
Real ln_expectation(std::size_t n, const SingularityConstants &k);

struct CnMoments {
    Real mean;        // 2n/(b^2 rho)
    Real variance;    // 11n/(12 b^2 rho)
    Real dn_mean;     // n(1 - 2/(b^2 rho))
    Real dn_variance; // 11n/(12 b^2 rho)
};

CnMoments cn_moments(std::size_t n, const SingularityConstants &k);

/// d_m rho^m / D(rho): limiting probability that a random C-node carries a
/// forest of size m.
Real forest_prob_asymptotic(std::size_t m, const SingularityConstants &k, const std::vector<Rational> &d);

/// D(rho u)/D(rho) for u in [0, 1], summed over the given coefficients.
Real forest_pgf(const Real &u, const SingularityConstants &k, const std::vector<Rational> &d);

/// Rows (m, P[|F| = m], P[|F| >= m]) for m = 0..max_m; the second column is a
/// tail sum over the whole coefficient table.
struct ForestTableRow {
    std::size_t m;
    Real equal;
    Real at_least;
};

std::vector<ForestTableRow> forest_size_table(std::size_t max_m, const SingularityConstants &k,
                                              const std::vector<Rational> &d);

} // namespace polya
