#include "polya/tree_enum.hpp"

#include "polya/errors.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <unordered_map>

namespace polya {

namespace {

// Per-thread memo of subtree invariants keyed by canonical code.
struct SubtreeMemo {
    std::unordered_map<std::string, BigInt> aut;
    std::unordered_map<std::string, UPolynomial> poly;
    std::unordered_map<std::string, std::size_t> orbits;
};

SubtreeMemo &memo()
{
    thread_local SubtreeMemo m;
    return m;
}

const std::vector<BigInt> &derangement_table(std::size_t r)
{
    thread_local std::vector<BigInt> table{1, 0};
    if (table.size() <= r) {
        table = derangements(std::max(r, 2 * table.size()));
    }
    return table;
}

BigInt factorial(std::size_t k)
{
    BigInt f;
    mpz_fac_ui(f.get_mpz_t(), k);
    return f;
}

BigInt binomial(std::size_t n, std::size_t k)
{
    BigInt b;
    mpz_bin_uiui(b.get_mpz_t(), n, k);
    return b;
}

// Z(S_k; s, 1, ..., 1) = (1/k!) sum_j binom(k, j) D_{k-j} s^j
UPolynomial symmetric_fixed_point_index(std::size_t k, const UPolynomial &s)
{
    const auto &der = derangement_table(k);
    UPolynomial acc;
    UPolynomial power = UPolynomial::monomial(0);
    for (std::size_t j = 0; j <= k; ++j) {
        const BigInt weight = binomial(k, j) * der[k - j];
        if (weight != 0) {
            acc += power * Rational(weight);
        }
        if (j < k) {
            power *= s;
        }
    }
    acc *= Rational(1, 1) / Rational(factorial(k));
    return acc;
}

} // namespace

const std::vector<CanonicalTree> &TreeCatalog::trees(std::size_t n)
{
    require(n >= 1, "tree size must be positive");
    if (n > limits_.max_tree_size) {
        throw ResourceError("tree enumeration cap exceeded: n = " + std::to_string(n) + " > " +
                            std::to_string(limits_.max_tree_size));
    }
    while (by_size_.size() <= n) {
        const std::size_t size = by_size_.size();
        // every smaller tree, globally descending in canonical order
        std::vector<const CanonicalTree *> pool;
        for (std::size_t s = size - 1; s >= 1; --s) {
            for (const auto &t : by_size_[s]) {
                pool.push_back(&t);
            }
        }
        std::vector<CanonicalTree> out;
        std::string code = "(";
        // children are chosen as a non-increasing sequence from the pool
        auto extend = [&](auto &&self, std::size_t start, std::size_t remaining) -> void {
            if (remaining == 0) {
                out.push_back(CanonicalTree(code + ")"));
                return;
            }
            for (std::size_t i = start; i < pool.size(); ++i) {
                const std::size_t s = pool[i]->size();
                if (s > remaining) {
                    continue;
                }
                const std::size_t mark = code.size();
                code += pool[i]->parens();
                self(self, i, remaining - s);
                code.resize(mark);
            }
        };
        extend(extend, 0, size - 1);
        std::sort(out.begin(), out.end(), std::greater<>());
        by_size_.push_back(std::move(out));
    }
    return by_size_[n];
}

std::vector<CanonicalTree> enumerate_trees(std::size_t n, EnumerationLimits limits)
{
    TreeCatalog catalog(limits);
    return catalog.trees(n);
}

std::vector<BigInt> derangements(std::size_t r)
{
    std::vector<BigInt> d(std::max<std::size_t>(r + 1, 2));
    d[0] = 1;
    d[1] = 0;
    for (std::size_t k = 2; k <= r; ++k) {
        d[k] = BigInt(static_cast<unsigned long>(k - 1)) * (d[k - 1] + d[k - 2]);
    }
    d.resize(r + 1);
    return d;
}

BigInt aut_order(const CanonicalTree &tree)
{
    auto &cache = memo().aut;
    if (auto it = cache.find(tree.parens()); it != cache.end()) {
        return it->second;
    }
    BigInt order = 1;
    for (const auto &[sub, k] : tree.child_classes()) {
        BigInt sub_order;
        mpz_pow_ui(sub_order.get_mpz_t(), aut_order(sub).get_mpz_t(), k);
        order *= factorial(k) * sub_order;
    }
    cache.emplace(tree.parens(), order);
    return order;
}

UPolynomial fixed_point_polynomial(const CanonicalTree &tree)
{
    auto &cache = memo().poly;
    if (auto it = cache.find(tree.parens()); it != cache.end()) {
        return it->second;
    }
    UPolynomial poly = UPolynomial::monomial(1);
    for (const auto &[sub, k] : tree.child_classes()) {
        poly *= symmetric_fixed_point_index(k, fixed_point_polynomial(sub));
    }
    cache.emplace(tree.parens(), poly);
    return poly;
}

std::size_t orbit_count(const CanonicalTree &tree)
{
    auto &cache = memo().orbits;
    if (auto it = cache.find(tree.parens()); it != cache.end()) {
        return it->second;
    }
    std::size_t orbits = 1;
    for (const auto &cls : tree.child_classes()) {
        orbits += orbit_count(cls.first);
    }
    cache.emplace(tree.parens(), orbits);
    return orbits;
}

std::size_t ForestSpec::size() const
{
    std::size_t total = 0;
    for (const auto &[tree, m] : classes) {
        total += tree.size() * m;
    }
    return total;
}

bool ForestSpec::valid() const
{
    for (std::size_t i = 0; i < classes.size(); ++i) {
        if (classes[i].second < 2) {
            return false;
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (classes[i].first == classes[j].first) {
                return false;
            }
        }
    }
    return true;
}

std::vector<int> ForestSpec::parent_array() const
{
    std::vector<int> parent;
    for (const auto &[tree, m] : classes) {
        const NodeLayout layout(tree);
        for (std::size_t copy = 0; copy < m; ++copy) {
            const int offset = static_cast<int>(parent.size());
            for (int p : layout.parent) {
                parent.push_back(p < 0 ? -1 : p + offset);
            }
        }
    }
    return parent;
}

std::vector<ForestSpec> enumerate_forests(std::size_t n, EnumerationLimits limits)
{
    if (n > limits.max_forest_size) {
        throw ResourceError("forest enumeration cap exceeded: n = " + std::to_string(n) + " > " +
                            std::to_string(limits.max_forest_size));
    }
    std::vector<ForestSpec> out;
    if (n == 0) {
        out.push_back(ForestSpec{});
        return out;
    }
    TreeCatalog catalog(EnumerationLimits{.max_tree_size = std::max(limits.max_tree_size, n / 2),
                                          .max_forest_size = limits.max_forest_size});
    std::vector<CanonicalTree> pool;
    for (std::size_t s = n / 2; s >= 1; --s) {
        const auto &level = catalog.trees(s);
        pool.insert(pool.end(), level.begin(), level.end());
    }
    ForestSpec current;
    auto extend = [&](auto &&self, std::size_t start, std::size_t remaining) -> void {
        if (remaining == 0) {
            out.push_back(current);
            return;
        }
        for (std::size_t i = start; i < pool.size(); ++i) {
            const std::size_t s = pool[i].size();
            for (std::size_t m = 2; m * s <= remaining; ++m) {
                current.classes.emplace_back(pool[i], m);
                self(self, i + 1, remaining - m * s);
                current.classes.pop_back();
            }
        }
    };
    extend(extend, 0, n);
    return out;
}

Rational forest_weight(const ForestSpec &forest)
{
    Rational weight = 1;
    for (const auto &[tree, m] : forest.classes) {
        const auto &der = derangement_table(m);
        weight *= Rational(der[m], factorial(m));
    }
    weight.canonicalize();
    return weight;
}

std::vector<std::vector<int>> brute_force_automorphisms(const std::vector<int> &parent)
{
    const std::size_t n = parent.size();
    if (n > brute_force_node_cap) {
        throw ResourceError("brute-force automorphism enumeration is capped at " +
                            std::to_string(brute_force_node_cap) + " nodes");
    }
    std::vector<int> image(n);
    std::iota(image.begin(), image.end(), 0);
    std::vector<std::vector<int>> out;
    do {
        bool ok = true;
        for (std::size_t v = 0; v < n && ok; ++v) {
            const int p = parent[v];
            const int img_parent = parent[static_cast<std::size_t>(image[v])];
            ok = p < 0 ? img_parent < 0 : img_parent == image[static_cast<std::size_t>(p)];
        }
        if (ok) {
            out.push_back(image);
        }
    } while (std::next_permutation(image.begin(), image.end()));
    return out;
}

Rational forest_weight_bruteforce(const ForestSpec &forest)
{
    const auto autos = brute_force_automorphisms(forest.parent_array());
    std::size_t fixed_point_free = 0;
    for (const auto &sigma : autos) {
        bool has_fixed = false;
        for (std::size_t v = 0; v < sigma.size() && !has_fixed; ++v) {
            has_fixed = sigma[v] == static_cast<int>(v);
        }
        fixed_point_free += has_fixed ? 0 : 1;
    }
    Rational w(static_cast<unsigned long>(fixed_point_free), static_cast<unsigned long>(autos.size()));
    w.canonicalize();
    return w;
}

Rational dn_oracle(std::size_t n, EnumerationLimits limits)
{
    Rational total = 0;
    for (const auto &forest : enumerate_forests(n, limits)) {
        total += forest_weight(forest);
    }
    return total;
}

UPolynomial tcn_polynomial_oracle(std::size_t n, EnumerationLimits limits)
{
    UPolynomial total;
    for (const auto &tree : enumerate_trees(n, limits)) {
        total += fixed_point_polynomial(tree);
    }
    return total;
}

} // namespace polya
