#pragma once

// Independent reference computations used only by the tests. Nothing here
// calls into the code under test except where noted.

#include "polya/rational.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace oracle {

// AHU-style encoding: each node is "1" + sorted child encodings + "0".
// Sorting is plain lexicographic on the encodings, which is a different
// total order from the library's (size first).
inline std::string ahu_code(const std::vector<std::vector<int>> &kids, int v)
{
    std::vector<std::string> parts;
    for (int c : kids[static_cast<std::size_t>(v)]) {
        parts.push_back(ahu_code(kids, c));
    }
    std::sort(parts.begin(), parts.end());
    std::string s = "1";
    for (const auto &p : parts) {
        s += p;
    }
    return s + "0";
}

inline std::string ahu_code(const std::vector<int> &parent)
{
    std::vector<std::vector<int>> kids(parent.size());
    int root = 0;
    for (std::size_t v = 0; v < parent.size(); ++v) {
        if (parent[v] < 0) {
            root = static_cast<int>(v);
        } else {
            kids[static_cast<std::size_t>(parent[v])].push_back(static_cast<int>(v));
        }
    }
    return ahu_code(kids, root);
}

inline std::vector<int> parents_from_ahu(const std::string &code)
{
    std::vector<int> parent;
    std::vector<int> stack;
    for (char ch : code) {
        if (ch == '1') {
            parent.push_back(stack.empty() ? -1 : stack.back());
            stack.push_back(static_cast<int>(parent.size()) - 1);
        } else {
            stack.pop_back();
        }
    }
    return parent;
}

// Unlabeled rooted trees of size n, grown by attaching a leaf anywhere to
// every tree of size n-1 and deduplicating by AHU code.
inline std::set<std::string> grow_trees(std::size_t n)
{
    std::set<std::string> level{"10"};
    for (std::size_t size = 2; size <= n; ++size) {
        std::set<std::string> next;
        for (const auto &code : level) {
            auto parent = parents_from_ahu(code);
            for (std::size_t v = 0; v < parent.size(); ++v) {
                parent.push_back(static_cast<int>(v));
                next.insert(ahu_code(parent));
                parent.pop_back();
            }
        }
        level = std::move(next);
    }
    return level;
}

// Integer coefficients of T(z) from the classical recurrence, with plain
// 64-bit arithmetic (exact for n <= 40).
inline std::vector<unsigned long long> small_counts(std::size_t n)
{
    std::vector<unsigned long long> t(n + 1, 0);
    t[1] = 1;
    for (std::size_t m = 2; m <= n; ++m) {
        unsigned long long acc = 0;
        for (std::size_t i = 1; i < m; ++i) {
            unsigned long long s = 0;
            for (std::size_t dd = 1; dd <= i; ++dd) {
                if (i % dd == 0) {
                    s += dd * t[dd];
                }
            }
            acc += s * t[m - i];
        }
        t[m] = acc / (m - 1);
    }
    return t;
}

// Exact E|C_n| and E|C_n|^2 of the C-tree size: with x C'(x) = C/(1-C) and
// x (x C')' = C/(1-C)^3 at x = zD(z), the factorial moments are coefficients
// of T/(1-T) and T/(1-T)^3. Only integer power series are needed.
struct CnExact {
    polya::Rational mean;
    polya::Rational second;
    [[nodiscard]] polya::Rational variance() const { return second - mean * mean; }
};

inline CnExact cn_exact_moments(const std::vector<polya::BigInt> &t, std::size_t n)
{
    // g = 1/(1-T) via g = 1 + T g
    std::vector<polya::BigInt> g(n + 1, 0);
    g[0] = 1;
    for (std::size_t k = 1; k <= n; ++k) {
        for (std::size_t i = 1; i <= k; ++i) {
            g[k] += t[i] * g[k - i];
        }
    }
    auto mul = [n](const std::vector<polya::BigInt> &a, const std::vector<polya::BigInt> &b) {
        std::vector<polya::BigInt> c(n + 1, 0);
        for (std::size_t i = 0; i <= n; ++i) {
            if (a[i] == 0) {
                continue;
            }
            for (std::size_t j = 0; i + j <= n; ++j) {
                c[i + j] += a[i] * b[j];
            }
        }
        return c;
    };
    std::vector<polya::BigInt> tt(t.begin(), t.begin() + static_cast<long>(n) + 1);
    const auto p1 = mul(tt, g);
    const auto p3 = mul(mul(p1, g), g);
    CnExact out;
    out.mean = polya::Rational(p1[n], t[n]);
    out.second = polya::Rational(p3[n], t[n]);
    out.mean.canonicalize();
    out.second.canonicalize();
    return out;
}

// Upper tail p-value of Pearson's statistic for observed counts against
// expected probabilities (cells with zero probability must have zero count).
inline double chi_square_p(const std::vector<double> &observed, const std::vector<double> &prob)
{
    double total = 0;
    for (double o : observed) {
        total += o;
    }
    double stat = 0;
    int cells = 0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        if (prob[i] <= 0) {
            continue;
        }
        const double e = total * prob[i];
        stat += (observed[i] - e) * (observed[i] - e) / e;
        ++cells;
    }
    if (cells < 2) {
        return 1.0;
    }
    boost::math::chi_squared dist(cells - 1);
    return boost::math::cdf(boost::math::complement(dist, stat));
}

} // namespace oracle
