#pragma once

#include "polya/rational.hpp"
#include "polya/rng.hpp"
#include "polya/tree.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace polya {

inline constexpr std::size_t default_sampler_cap = 20000;

/// Hash-consed pool of isomorphism classes of rooted trees.
///
/// A class is identified by its multiset of child classes, so equal ids mean
/// isomorphic trees. Ids are handed out children-first.
class ShapePool {
public:
    struct Shape {
        std::size_t size;
        // (child class id, multiplicity), sorted by id, ids distinct
        std::vector<std::pair<std::uint32_t, std::uint32_t>> children;
    };

    // Canonicalizes the child list (merging repeated ids) and returns the id.
    std::uint32_t intern(std::vector<std::pair<std::uint32_t, std::uint32_t>> children);

    [[nodiscard]] const Shape &shape(std::uint32_t id) const { return shapes_[id]; }
    [[nodiscard]] std::size_t class_count() const { return shapes_.size(); }
    [[nodiscard]] CanonicalTree to_canonical(std::uint32_t id) const;
    void clear();

private:
    struct KeyHash {
        std::size_t operator()(const std::vector<std::pair<std::uint32_t, std::uint32_t>> &key) const;
    };

    std::vector<Shape> shapes_;
    std::unordered_map<std::vector<std::pair<std::uint32_t, std::uint32_t>>, std::uint32_t, KeyHash> index_;
};

struct SamplerOptions {
    // Skip the floating-point filter and decide every draw with big integers.
    bool force_exact = false;
};

/// Uniform generator of Pólya trees of a given size.
///
/// Uses the classical recursive method: a tree of size n is a tree of size
/// n - j d with j copies of a tree of size d attached to its root, where
/// (j, d) is drawn with probability t_{n-jd} d t_d / ((n-1) t_n). The draw is
/// an inverse-CDF lookup of a uniform U in [0, 1) whose bits are produced on
/// demand: a double-precision pass settles it when U is provably away from
/// every bucket boundary, otherwise exact big-integer comparisons decide.
/// Either way the outcome depends only on U, so the law is exact.
class PolyaSampler {
public:
    explicit PolyaSampler(std::size_t max_n, std::size_t cap = default_sampler_cap, SamplerOptions options = {});

    [[nodiscard]] std::size_t max_n() const { return t_.size() - 1; }
    [[nodiscard]] const std::vector<BigInt> &counts() const { return t_; }

    /// Samples into `pool` and returns the root class id.
    std::uint32_t sample_shape(std::size_t n, RngStream &rng, ShapePool &pool) const;

    /// Draws the (j, d) split for a tree of size n >= 2.
    std::pair<std::size_t, std::size_t> draw_split(std::size_t n, RngStream &rng) const;

private:
    std::pair<std::size_t, std::size_t> draw_split_exact(std::size_t n, std::uint64_t first_word, RngStream &rng) const;
    [[nodiscard]] double split_ratio(std::size_t n, std::size_t j, std::size_t d) const;

    std::vector<BigInt> t_;
    std::vector<double> mantissa_; // t_k = mantissa_k * 2^exponent_k, mantissa in [0.5, 1)
    std::vector<long> exponent_;
    SamplerOptions options_;
};

/// Uniform random Pólya tree of size n.
CanonicalTree sample_tree(const PolyaSampler &sampler, std::size_t n, RngStream &rng);

/// Element of Aut(T) for a canonical tree T, stored as one permutation of
/// copy positions per (node, child class). perms[v][i][c] is the copy that
/// copy c of class i at node v is sent to, among the children of v's image.
/// Nodes are in preorder of the canonical code.
struct AutomorphismElement {
    std::vector<std::vector<std::vector<std::uint32_t>>> perms;

    static AutomorphismElement identity(const CanonicalTree &tree);
};

/// Runs of isomorphic children per node: (index of first child, count).
std::vector<std::vector<std::pair<std::size_t, std::size_t>>> child_class_runs(const CanonicalTree &tree,
                                                                                 const NodeLayout &layout);

/// Uniform element of Aut(T): an independent uniform permutation for every
/// node and child class.
AutomorphismElement sample_automorphism(const CanonicalTree &tree, RngStream &rng);

/// Node map of the automorphism (image[v]). Throws RangeError if `a` does not
/// fit the tree.
std::vector<int> apply_automorphism(const CanonicalTree &tree, const AutomorphismElement &a);

/// Split of a tree into C-nodes (fixed points of an automorphism) and the
/// D-forests hanging off them.
struct Decomposition {
    CanonicalTree tree;
    std::vector<bool> c_mask;                             // preorder
    std::vector<std::pair<std::size_t, std::size_t>> forests; // (C-node, forest size), every C-node
    std::size_t c_size = 0;
    std::size_t max_forest = 0;

    [[nodiscard]] std::string mask_string() const;
};

/// Throws RangeError if `a` is not an element of Aut(tree).
Decomposition decompose(const CanonicalTree &tree, const AutomorphismElement &a);

Decomposition sample_decomposition(const PolyaSampler &sampler, std::size_t n, RngStream &rng);

/// C-tree statistics of one automorphism drawn on a pooled shape, without
/// expanding the tree: every C-node forest size in traversal order.
struct ShapeDecomposition {
    std::size_t c_size = 0;
    std::size_t max_forest = 0;
    std::vector<std::uint32_t> forests; // one entry per C-node
};

void decompose_shape(const ShapePool &pool, std::uint32_t root, RngStream &rng, ShapeDecomposition &out);

} // namespace polya
