#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace polya {

/// Rooted unordered tree stored in canonical form.
///
/// The representation is the balanced-parenthesis code of the tree with
/// every node's children listed in non-increasing canonical order. The
/// canonical order compares size first and breaks ties by comparing codes
/// lexicographically ('(' < ')'). Two trees are isomorphic iff their codes
/// are equal, so multiset equality of children is sequence equality.
class CanonicalTree {
public:
    // single node
    CanonicalTree();

    /// Canonicalizes an arbitrary list of children under a new root.
    static CanonicalTree from_children(std::vector<CanonicalTree> children);
    /// Parses any balanced-parenthesis code (children in any order).
    static CanonicalTree from_parens(std::string_view code);
    /// Parses a preorder depth sequence such as "1 2 2 2" (root depth 1).
    static CanonicalTree from_level_sequence(const std::vector<int> &levels);
    static CanonicalTree from_level_sequence(std::string_view text);
    /// Parses a parent array (parent[0] == -1, parent[i] < i not required).
    static CanonicalTree from_parents(const std::vector<int> &parent);

    static CanonicalTree chain(std::size_t n);
    static CanonicalTree star(std::size_t leaves);

    [[nodiscard]] std::size_t size() const { return code_.size() / 2; }
    [[nodiscard]] const std::string &parens() const { return code_; }
    [[nodiscard]] std::vector<int> level_sequence() const;
    [[nodiscard]] std::string level_string() const;

    /// Children in canonical (non-increasing) order.
    [[nodiscard]] std::vector<CanonicalTree> children() const;
    /// Children grouped into isomorphism classes with multiplicities, in
    /// canonical order.
    [[nodiscard]] std::vector<std::pair<CanonicalTree, std::size_t>> child_classes() const;

    friend bool operator==(const CanonicalTree &, const CanonicalTree &) = default;
    friend std::strong_ordering operator<=>(const CanonicalTree &a, const CanonicalTree &b);

private:
    friend class TreeCatalog;
    explicit CanonicalTree(std::string code) : code_(std::move(code)) {}

    std::string code_;
};

/// Canonical representative of a tree given by a parent array. Idempotent on
/// canonical input; isomorphic inputs give identical outputs.
inline CanonicalTree canonical_form(const std::vector<int> &parent)
{
    return CanonicalTree::from_parents(parent);
}

inline CanonicalTree canonical_form(std::string_view parens)
{
    return CanonicalTree::from_parens(parens);
}

/// Explicit node view of a canonical tree: preorder indices, root = 0.
struct NodeLayout {
    std::vector<int> parent;                 // parent[0] == -1
    std::vector<std::vector<int>> children;  // canonical order
    std::vector<std::size_t> subtree_size;
    std::vector<std::size_t> code_offset;    // position of the node's '(' in the code

    explicit NodeLayout(const CanonicalTree &tree);
    [[nodiscard]] std::size_t size() const { return parent.size(); }
};

} // namespace polya
