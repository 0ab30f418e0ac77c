#include "polya/tree.hpp"

#include "polya/errors.hpp"

#include <algorithm>
#include <charconv>
#include <functional>

namespace polya {

namespace {

bool canonical_greater(const CanonicalTree &a, const CanonicalTree &b)
{
    return a > b;
}

std::vector<int> parse_parent_array(std::string_view code)
{
    require(code.size() >= 2 && code.size() % 2 == 0, "malformed parenthesis code: \"" + std::string(code) + "\"");
    std::vector<int> parent;
    parent.reserve(code.size() / 2);
    std::vector<int> stack;
    for (std::size_t i = 0; i < code.size(); ++i) {
        const char ch = code[i];
        if (ch == '(') {
            require(i == 0 || !stack.empty(), "parenthesis code describes a forest, not a tree");
            parent.push_back(stack.empty() ? -1 : stack.back());
            stack.push_back(static_cast<int>(parent.size()) - 1);
        } else if (ch == ')') {
            require(!stack.empty(), "unbalanced parenthesis code");
            stack.pop_back();
        } else {
            throw RangeError("unexpected character in parenthesis code");
        }
    }
    require(stack.empty(), "unbalanced parenthesis code");
    return parent;
}

} // namespace

CanonicalTree::CanonicalTree() : code_("()") {}

std::strong_ordering operator<=>(const CanonicalTree &a, const CanonicalTree &b)
{
    if (auto c = a.size() <=> b.size(); c != 0) {
        return c;
    }
    return a.code_ <=> b.code_;
}

CanonicalTree CanonicalTree::from_children(std::vector<CanonicalTree> children)
{
    std::sort(children.begin(), children.end(), canonical_greater);
    std::string code = "(";
    for (const auto &c : children) {
        code += c.code_;
    }
    code += ')';
    return CanonicalTree(std::move(code));
}

CanonicalTree CanonicalTree::from_parens(std::string_view code)
{
    return from_parents(parse_parent_array(code));
}

CanonicalTree CanonicalTree::from_parents(const std::vector<int> &parent)
{
    const std::size_t n = parent.size();
    require(n >= 1, "a tree needs at least one node");
    std::vector<std::vector<int>> kids(n);
    int root = -1;
    for (std::size_t v = 0; v < n; ++v) {
        const int p = parent[v];
        if (p < 0) {
            require(root < 0, "parent array has more than one root");
            root = static_cast<int>(v);
        } else {
            require(static_cast<std::size_t>(p) < n && p != static_cast<int>(v), "parent index out of range");
            kids[static_cast<std::size_t>(p)].push_back(static_cast<int>(v));
        }
    }
    require(root >= 0, "parent array has no root");

    // iterative post-order so deep chains do not exhaust the stack
    std::vector<int> order;
    order.reserve(n);
    std::vector<int> stack{root};
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        order.push_back(v);
        for (int c : kids[static_cast<std::size_t>(v)]) {
            stack.push_back(c);
        }
    }
    require(order.size() == n, "parent array is not connected (contains a cycle)");

    std::vector<CanonicalTree> built(n);
    std::vector<CanonicalTree> buffer;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const auto v = static_cast<std::size_t>(*it);
        buffer.clear();
        for (int c : kids[v]) {
            buffer.push_back(std::move(built[static_cast<std::size_t>(c)]));
        }
        built[v] = from_children(std::move(buffer));
        buffer = {};
    }
    return std::move(built[static_cast<std::size_t>(root)]);
}

CanonicalTree CanonicalTree::from_level_sequence(const std::vector<int> &levels)
{
    require(!levels.empty() && levels[0] == 1, "level sequence must start with the root at level 1");
    std::vector<int> parent(levels.size());
    std::vector<int> path; // path[d-1] = last node seen at depth d
    parent[0] = -1;
    path.push_back(0);
    for (std::size_t i = 1; i < levels.size(); ++i) {
        const int lv = levels[i];
        require(lv >= 2 && static_cast<std::size_t>(lv) <= path.size() + 1, "invalid level sequence");
        path.resize(static_cast<std::size_t>(lv - 1));
        parent[i] = path.back();
        path.push_back(static_cast<int>(i));
    }
    return from_parents(parent);
}

CanonicalTree CanonicalTree::from_level_sequence(std::string_view text)
{
    std::vector<int> levels;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && (text[i] == ' ' || text[i] == ',' || text[i] == '\t')) {
            ++i;
        }
        if (i >= text.size()) {
            break;
        }
        int value = 0;
        auto [ptr, ec] = std::from_chars(text.data() + i, text.data() + text.size(), value);
        require(ec == std::errc(), "invalid level sequence text");
        levels.push_back(value);
        i = static_cast<std::size_t>(ptr - text.data());
    }
    return from_level_sequence(levels);
}

CanonicalTree CanonicalTree::chain(std::size_t n)
{
    require(n >= 1, "chain needs at least one node");
    return CanonicalTree(std::string(n, '(') + std::string(n, ')'));
}

CanonicalTree CanonicalTree::star(std::size_t leaves)
{
    std::string code = "(";
    for (std::size_t i = 0; i < leaves; ++i) {
        code += "()";
    }
    code += ')';
    return CanonicalTree(std::move(code));
}

std::vector<int> CanonicalTree::level_sequence() const
{
    std::vector<int> levels;
    levels.reserve(size());
    int depth = 0;
    for (char ch : code_) {
        if (ch == '(') {
            levels.push_back(++depth);
        } else {
            --depth;
        }
    }
    return levels;
}

std::string CanonicalTree::level_string() const
{
    std::string out;
    for (int lv : level_sequence()) {
        if (!out.empty()) {
            out += ' ';
        }
        out += std::to_string(lv);
    }
    return out;
}

std::vector<CanonicalTree> CanonicalTree::children() const
{
    std::vector<CanonicalTree> out;
    int depth = 0;
    std::size_t start = 1;
    for (std::size_t i = 1; i + 1 < code_.size(); ++i) {
        depth += code_[i] == '(' ? 1 : -1;
        if (depth == 0) {
            out.push_back(CanonicalTree(code_.substr(start, i + 1 - start)));
            start = i + 1;
        }
    }
    return out;
}

std::vector<std::pair<CanonicalTree, std::size_t>> CanonicalTree::child_classes() const
{
    std::vector<std::pair<CanonicalTree, std::size_t>> out;
    for (auto &c : children()) {
        if (!out.empty() && out.back().first == c) {
            ++out.back().second;
        } else {
            out.emplace_back(std::move(c), 1);
        }
    }
    return out;
}

NodeLayout::NodeLayout(const CanonicalTree &tree)
{
    const auto &code = tree.parens();
    parent.reserve(tree.size());
    children.reserve(tree.size());
    code_offset.reserve(tree.size());
    std::vector<int> stack;
    for (std::size_t i = 0; i < code.size(); ++i) {
        if (code[i] == '(') {
            const int v = static_cast<int>(parent.size());
            const int p = stack.empty() ? -1 : stack.back();
            parent.push_back(p);
            code_offset.push_back(i);
            children.emplace_back();
            if (p >= 0) {
                children[static_cast<std::size_t>(p)].push_back(v);
            }
            stack.push_back(v);
        } else {
            stack.pop_back();
        }
    }
    subtree_size.assign(parent.size(), 1);
    for (std::size_t v = parent.size(); v-- > 1;) {
        subtree_size[static_cast<std::size_t>(parent[v])] += subtree_size[v];
    }
}

} // namespace polya
