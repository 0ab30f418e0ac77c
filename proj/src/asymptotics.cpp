#include "polya/asymptotics.hpp"

#include "polya/errors.hpp"
#include "polya/series.hpp"

#include <boost/math/constants/constants.hpp>

#include <sstream>

namespace polya {

namespace mp = boost::multiprecision;

Real to_real(const BigInt &z)
{
    return Real(z.get_mpz_t());
}

Real to_real(const Rational &q)
{
    return Real(q.get_num_mpz_t()) / Real(q.get_den_mpz_t());
}

std::string to_decimal(const Real &x, int digits)
{
    std::ostringstream os;
    os.precision(digits);
    os << x;
    return os.str();
}

Real SingularityConstants::D(const Real &z) const
{
    Real acc = 0;
    for (auto it = d.rbegin(); it != d.rend(); ++it) {
        acc = acc * z + *it;
    }
    return acc;
}

Real SingularityConstants::Dprime(const Real &z) const
{
    Real acc = 0;
    for (std::size_t i = d.size(); i-- > 1;) {
        acc = acc * z + d[i] * static_cast<unsigned long>(i);
    }
    return acc;
}

SingularityConstants compute_constants(std::size_t order, int precision_digits)
{
    require(order >= 32, "compute_constants: series order must be >= 32");
    require(precision_digits >= 20 && precision_digits <= max_precision_digits,
            "compute_constants: precision must lie in [20, " + std::to_string(max_precision_digits) + "]");

    SingularityConstants k;
    k.series_order = order;
    k.working_precision_digits = precision_digits;
    const auto d = dforest_weights_recurrence(polya_counts(order), order);
    k.d.reserve(d.size());
    for (const auto &q : d) {
        k.d.push_back(to_real(q));
    }

    const Real e_inv = mp::exp(Real(-1));
    const Real tolerance = mp::pow(Real(10), -precision_digits);
    constexpr int max_iterations = 100;
    Real z("0.3");
    bool converged = false;
    Real step = 0;
    for (int it = 1; it <= max_iterations; ++it) {
        const Real f = z * k.D(z) - e_inv;
        const Real fp = k.D(z) + z * k.Dprime(z);
        step = f / fp;
        z -= step;
        k.newton_iterations = it;
        if (mp::abs(step) < tolerance) {
            converged = true;
            break;
        }
    }
    if (!converged || !(z > 0 && z < 1)) {
        throw NumericError("Newton iteration for rho D(rho) = 1/e did not converge: last iterate " +
                           to_decimal(z, 20) + ", last step " + to_decimal(step, 5) + " after " +
                           std::to_string(k.newton_iterations) + " iterations");
    }

    k.rho = z;
    k.D_rho = k.D(z);
    k.Dp_rho = k.Dprime(z);
    k.residual = mp::abs(k.rho * k.D_rho - e_inv);
    const Real slope = k.D_rho + k.rho * k.Dp_rho;
    const Real e = mp::exp(Real(1));
    k.b = mp::sqrt(2 * e * slope);
    k.c = k.b * k.b / 3;
    const Real pi = boost::math::constants::pi<Real>();
    k.c1 = k.b / (2 * mp::sqrt(pi) * (1 - mp::sqrt(k.rho)) * slope);
    return k;
}

std::vector<std::pair<std::string, std::string>> export_constants(const SingularityConstants &k, int digits)
{
    return {
        {"rho", to_decimal(k.rho, digits)},
        {"b", to_decimal(k.b, digits)},
        {"c", to_decimal(k.c, digits)},
        {"D_rho", to_decimal(k.D_rho, digits)},
        {"Dp_rho", to_decimal(k.Dp_rho, digits)},
        {"c1", to_decimal(k.c1, digits)},
        {"c1_note", "asymptotic equivalent (leading-order expression)"},
        {"series_order", std::to_string(k.series_order)},
        {"precision_digits", std::to_string(k.working_precision_digits)},
        {"newton_iterations", std::to_string(k.newton_iterations)},
        {"residual", to_decimal(k.residual, 6)},
    };
}

Real tn_asymptotic(std::size_t n, const SingularityConstants &k)
{
    require(n >= 1, "tn_asymptotic: n must be >= 1");
    const Real pi = boost::math::constants::pi<Real>();
    const Real nn = static_cast<unsigned long>(n);
    return k.b * mp::sqrt(k.rho) / (2 * mp::sqrt(pi)) * mp::pow(k.rho, -nn) / (nn * mp::sqrt(nn));
}

Real ln_tail_prob(std::size_t n, std::size_t m, const SingularityConstants &k)
{
    require(m >= 1, "ln_tail_prob: m must be >= 1");
    const Real mm = static_cast<unsigned long>(m);
    const Real nn = static_cast<unsigned long>(n);
    return mp::exp(-k.c1 * nn * mp::pow(k.rho, mm / 2) / (mm * mp::sqrt(mm)));
}

Real ln_tail_median(std::size_t n, const SingularityConstants &k)
{
    require(n >= 1, "ln_tail_median: n must be >= 1");
    // g(m) = ln(c1 n) + (m/2) ln rho - (3/2) ln m - ln ln 2, decreasing for m > 0
    const Real log_rho = mp::log(k.rho);
    const Real target = mp::log(k.c1 * static_cast<unsigned long>(n)) - mp::log(mp::log(Real(2)));
    auto g = [&](const Real &m) { return target + m / 2 * log_rho - Real(3) / 2 * mp::log(m); };
    Real lo = Real("1e-6");
    Real hi = 1;
    while (g(hi) > 0) {
        hi *= 2;
    }
    if (g(lo) < 0) {
        return lo;
    }
    for (int i = 0; i < 200; ++i) {
        const Real mid = (lo + hi) / 2;
        (g(mid) > 0 ? lo : hi) = mid;
    }
    return (lo + hi) / 2;
}

Real ln_expectation(std::size_t n, const SingularityConstants &k)
{
    require(n >= 3, "ln_expectation: n must be >= 3 so that ln ln n > 0");
    const Real log_n = mp::log(Real(static_cast<unsigned long>(n)));
    const Real log_rho = mp::log(k.rho);
    return -2 * log_n / log_rho - 3 * mp::log(log_n) / log_rho;
}

CnMoments cn_moments(std::size_t n, const SingularityConstants &k)
{
    require(n >= 1, "cn_moments: n must be >= 1");
    const Real nn = static_cast<unsigned long>(n);
    const Real b2rho = k.b * k.b * k.rho;
    CnMoments out;
    out.mean = 2 * nn / b2rho;
    out.variance = 11 * nn / (12 * b2rho);
    out.dn_mean = nn * (1 - 2 / b2rho);
    out.dn_variance = out.variance;
    return out;
}

Real forest_prob_asymptotic(std::size_t m, const SingularityConstants &k, const std::vector<Rational> &d)
{
    require(m < d.size(), "forest_prob_asymptotic: m beyond the coefficient table");
    return to_real(d[m]) * mp::pow(k.rho, static_cast<unsigned long>(m)) / k.D_rho;
}

Real forest_pgf(const Real &u, const SingularityConstants &k, const std::vector<Rational> &d)
{
    require(u >= 0 && u <= 1, "forest_pgf: u must lie in [0, 1]");
    const Real x = k.rho * u;
    Real acc = 0;
    for (auto it = d.rbegin(); it != d.rend(); ++it) {
        acc = acc * x + to_real(*it);
    }
    return acc / k.D_rho;
}

std::vector<ForestTableRow> forest_size_table(std::size_t max_m, const SingularityConstants &k,
                                              const std::vector<Rational> &d)
{
    require(max_m < d.size(), "forest_size_table: max_m beyond the coefficient table");
    std::vector<Real> p(d.size());
    for (std::size_t m = 0; m < d.size(); ++m) {
        p[m] = forest_prob_asymptotic(m, k, d);
    }
    std::vector<ForestTableRow> rows;
    Real tail = 0;
    for (std::size_t m = d.size(); m-- > 0;) {
        tail += p[m];
        if (m <= max_m) {
            rows.push_back({m, p[m], tail});
        }
    }
    std::reverse(rows.begin(), rows.end());
    return rows;
}

} // namespace polya
