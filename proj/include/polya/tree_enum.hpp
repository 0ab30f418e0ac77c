#pragma once

#include "polya/rational.hpp"
#include "polya/series.hpp"
#include "polya/tree.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace polya {

struct EnumerationLimits {
    std::size_t max_tree_size = 16;
    std::size_t max_forest_size = 14;
};

/// Lazily built lists of all canonical trees by size, each list sorted in
/// descending canonical order. Not thread-safe; one catalog per thread.
class TreeCatalog {
public:
    explicit TreeCatalog(EnumerationLimits limits = {}) : limits_(limits) {}

    const std::vector<CanonicalTree> &trees(std::size_t n);
    [[nodiscard]] const EnumerationLimits &limits() const { return limits_; }

private:
    EnumerationLimits limits_;
    std::vector<std::vector<CanonicalTree>> by_size_{{}, {CanonicalTree()}};
};

/// All canonical trees with n nodes. Throws ResourceError above the cap.
std::vector<CanonicalTree> enumerate_trees(std::size_t n, EnumerationLimits limits = {});

/// Derangement numbers D_0..D_r.
std::vector<BigInt> derangements(std::size_t r);

/// |Aut(T)| = prod_i k_i! |Aut(S_i)|^{k_i}, applied recursively.
BigInt aut_order(const CanonicalTree &tree);

/// t_T(u) = (1/|Aut T|) sum_{sigma} u^{#fixed nodes}, via the wreath-product
/// recursion t_T(u) = u prod_i Z(S_{k_i}; t_{S_i}(u), 1, ..., 1).
UPolynomial fixed_point_polynomial(const CanonicalTree &tree);

/// Number of node orbits under Aut(T): 1 + sum over child classes.
std::size_t orbit_count(const CanonicalTree &tree);

/// Multiset of trees in which every distinct tree occurs at least twice.
struct ForestSpec {
    std::vector<std::pair<CanonicalTree, std::size_t>> classes;

    [[nodiscard]] std::size_t size() const;
    [[nodiscard]] bool valid() const;
    // forest as a parent array (roots have parent -1), classes in order
    [[nodiscard]] std::vector<int> parent_array() const;
    friend bool operator==(const ForestSpec &, const ForestSpec &) = default;
};

std::vector<ForestSpec> enumerate_forests(std::size_t n, EnumerationLimits limits = {});

/// Fraction of fixed-point-free automorphisms, closed form prod_i D_{m_i}/m_i!.
Rational forest_weight(const ForestSpec &forest);

/// Same quantity by listing every node bijection of the forest that
/// preserves the parent relation. Only for forests of at most
/// `brute_force_node_cap` nodes.
Rational forest_weight_bruteforce(const ForestSpec &forest);

inline constexpr std::size_t brute_force_node_cap = 9;

/// Every parent-preserving node permutation of a rooted forest given as a
/// parent array, as image vectors. Exponential; capped at
/// `brute_force_node_cap` nodes.
std::vector<std::vector<int>> brute_force_automorphisms(const std::vector<int> &parent);

/// sum over enumerate_forests(n) of forest_weight.
Rational dn_oracle(std::size_t n, EnumerationLimits limits = {});

/// sum over enumerate_trees(n) of fixed_point_polynomial.
UPolynomial tcn_polynomial_oracle(std::size_t n, EnumerationLimits limits = {});

} // namespace polya
