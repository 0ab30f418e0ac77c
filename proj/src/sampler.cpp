#include "polya/sampler.hpp"

#include "polya/errors.hpp"
#include "polya/series.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace polya {

// ---------------------------------------------------------------------------
// ShapePool

std::size_t ShapePool::KeyHash::operator()(const std::vector<std::pair<std::uint32_t, std::uint32_t>> &key) const
{
    std::uint64_t h = 0x84222325CBF29CE4ULL ^ key.size();
    for (const auto &[id, mult] : key) {
        h ^= (static_cast<std::uint64_t>(id) << 32) | mult;
        h *= 0x100000001B3ULL;
        h ^= h >> 29;
    }
    return static_cast<std::size_t>(h);
}

std::uint32_t ShapePool::intern(std::vector<std::pair<std::uint32_t, std::uint32_t>> children)
{
    std::sort(children.begin(), children.end());
    std::size_t out = 0;
    for (std::size_t i = 0; i < children.size(); ++i) {
        if (out > 0 && children[out - 1].first == children[i].first) {
            children[out - 1].second += children[i].second;
        } else {
            children[out++] = children[i];
        }
    }
    children.resize(out);
    if (auto it = index_.find(children); it != index_.end()) {
        return it->second;
    }
    std::size_t size = 1;
    for (const auto &[id, mult] : children) {
        size += shapes_[id].size * mult;
    }
    const auto id = static_cast<std::uint32_t>(shapes_.size());
    shapes_.push_back(Shape{size, children});
    index_.emplace(std::move(children), id);
    return id;
}

CanonicalTree ShapePool::to_canonical(std::uint32_t id) const
{
    require(id < shapes_.size(), "unknown shape id");
    // ids are assigned children-first, so one ascending pass suffices
    std::vector<CanonicalTree> trees(id + 1);
    std::vector<CanonicalTree> kids;
    for (std::uint32_t i = 0; i <= id; ++i) {
        kids.clear();
        for (const auto &[child, mult] : shapes_[i].children) {
            kids.insert(kids.end(), mult, trees[child]);
        }
        trees[i] = CanonicalTree::from_children(std::move(kids));
        kids = {};
    }
    return std::move(trees[id]);
}

void ShapePool::clear()
{
    shapes_.clear();
    index_.clear();
}

// ---------------------------------------------------------------------------
// PolyaSampler

PolyaSampler::PolyaSampler(std::size_t max_n, std::size_t cap, SamplerOptions options) : options_(options)
{
    require(max_n >= 1, "sampler table bound must be >= 1");
    if (max_n > cap) {
        throw ResourceError("sampler table bound " + std::to_string(max_n) + " exceeds cap " + std::to_string(cap));
    }
    t_ = polya_counts(max_n);
    mantissa_.resize(t_.size());
    exponent_.resize(t_.size());
    for (std::size_t k = 1; k < t_.size(); ++k) {
        long e = 0;
        mantissa_[k] = mpz_get_d_2exp(&e, t_[k].get_mpz_t());
        exponent_[k] = e;
    }
}

double PolyaSampler::split_ratio(std::size_t n, std::size_t j, std::size_t d) const
{
    const std::size_t rest = n - j * d;
    const double scale = static_cast<double>(d) / static_cast<double>(n - 1);
    const double mant = mantissa_[d] * mantissa_[rest] / mantissa_[n];
    const long e = exponent_[d] + exponent_[rest] - exponent_[n];
    return std::ldexp(scale * mant, static_cast<int>(e));
}

std::pair<std::size_t, std::size_t> PolyaSampler::draw_split(std::size_t n, RngStream &rng) const
{
    require(n >= 2 && n <= max_n(), "draw_split: n outside the sampler table");
    const std::uint64_t word = rng.next_u64();
    if (!options_.force_exact) {
        // U lies in [word, word + 1) * 2^-64. Accept bucket i only if U is
        // clear of both of its approximate boundaries by more than their
        // accumulated rounding error.
        const double x = std::ldexp(static_cast<double>(word), -64);
        double cum = 0.0;
        std::size_t steps = 0;
        for (std::size_t d = n - 1; d >= 1; --d) {
            for (std::size_t j = 1; j * d <= n - 1; ++j) {
                const double prev = cum;
                cum += split_ratio(n, j, d);
                ++steps;
                if (x < cum) {
                    const double margin = static_cast<double>(steps + 4) * 4e-15;
                    if (x - prev > margin && cum - x > margin) {
                        return {j, d};
                    }
                    return draw_split_exact(n, word, rng);
                }
            }
        }
    }
    return draw_split_exact(n, word, rng);
}

std::pair<std::size_t, std::size_t> PolyaSampler::draw_split_exact(std::size_t n, std::uint64_t first_word,
                                                                   RngStream &rng) const
{
    const BigInt total = t_[n] * static_cast<unsigned long>(n - 1);
    // U in [X, X + 1) / 2^bits
    BigInt X = BigInt(static_cast<unsigned long>(first_word >> 32)) << 32;
    X += static_cast<unsigned long>(first_word & 0xFFFFFFFFULL);
    std::size_t bits = 64;
    BigInt cum;
    BigInt weight;
    BigInt scaled;
    for (;;) {
        const BigInt low = X * total;
        const BigInt high = low + total;
        cum = 0;
        for (std::size_t d = n - 1; d >= 1; --d) {
            for (std::size_t j = 1; j * d <= n - 1; ++j) {
                weight = t_[d] * t_[n - j * d];
                weight *= static_cast<unsigned long>(d);
                cum += weight;
                mpz_mul_2exp(scaled.get_mpz_t(), cum.get_mpz_t(), bits);
                if (low < scaled) {
                    if (high <= scaled) {
                        return {j, d};
                    }
                    goto refine;
                }
            }
        }
        check_consistency(false, "split weights do not sum to (n-1) t_n");
    refine:
        const std::uint64_t next = rng.next_u64();
        X <<= 64;
        X += BigInt(static_cast<unsigned long>(next >> 32)) << 32;
        X += static_cast<unsigned long>(next & 0xFFFFFFFFULL);
        bits += 64;
    }
}

std::uint32_t PolyaSampler::sample_shape(std::size_t n, RngStream &rng, ShapePool &pool) const
{
    require(n >= 1, "tree size must be positive");
    if (n > max_n()) {
        throw ResourceError("tree size " + std::to_string(n) + " exceeds the sampler table bound " +
                            std::to_string(max_n()));
    }
    // Each frame builds one tree: `remaining` is the size still to be
    // produced at its root, `pending` the multiplicity of the subtree being
    // sampled in the frame above it.
    struct Frame {
        std::size_t remaining;
        std::uint32_t pending = 0;
        std::vector<std::pair<std::uint32_t, std::uint32_t>> kids;
    };
    std::vector<Frame> stack;
    stack.push_back(Frame{n, 0, {}});
    for (;;) {
        const std::size_t top = stack.size() - 1;
        if (stack[top].remaining == 1) {
            const std::uint32_t id = pool.intern(std::move(stack[top].kids));
            stack.pop_back();
            if (stack.empty()) {
                return id;
            }
            auto &parent = stack.back();
            parent.kids.emplace_back(id, parent.pending);
            continue;
        }
        const auto [j, d] = draw_split(stack[top].remaining, rng);
        stack[top].remaining -= j * d;
        stack[top].pending = static_cast<std::uint32_t>(j);
        stack.push_back(Frame{d, 0, {}});
    }
}

CanonicalTree sample_tree(const PolyaSampler &sampler, std::size_t n, RngStream &rng)
{
    ShapePool pool;
    return pool.to_canonical(sampler.sample_shape(n, rng, pool));
}

// ---------------------------------------------------------------------------
// Automorphisms and decompositions

namespace {

void shuffle_in_place(std::vector<std::uint32_t> &perm, RngStream &rng)
{
    for (std::size_t i = perm.size(); i-- > 1;) {
        const auto j = static_cast<std::size_t>(rng.below(i + 1));
        std::swap(perm[i], perm[j]);
    }
}

bool same_subtree(const CanonicalTree &tree, const NodeLayout &layout, int a, int b)
{
    const auto ua = static_cast<std::size_t>(a);
    const auto ub = static_cast<std::size_t>(b);
    if (layout.subtree_size[ua] != layout.subtree_size[ub]) {
        return false;
    }
    const std::size_t len = 2 * layout.subtree_size[ua];
    return tree.parens().compare(layout.code_offset[ua], len, tree.parens(), layout.code_offset[ub], len) == 0;
}

using ClassRuns = std::vector<std::vector<std::pair<std::size_t, std::size_t>>>;

void validate(const NodeLayout &layout, const ClassRuns &runs, const AutomorphismElement &a)
{
    require(a.perms.size() == layout.size(), "automorphism does not match the tree: wrong node count");
    std::vector<char> seen;
    for (std::size_t v = 0; v < layout.size(); ++v) {
        require(a.perms[v].size() == runs[v].size(), "automorphism does not match the tree: wrong class count");
        for (std::size_t i = 0; i < runs[v].size(); ++i) {
            const auto &perm = a.perms[v][i];
            const std::size_t k = runs[v][i].second;
            require(perm.size() == k, "automorphism does not match the tree: wrong class multiplicity");
            seen.assign(k, 0);
            for (auto p : perm) {
                require(p < k && !seen[p], "automorphism does not match the tree: not a permutation");
                seen[p] = 1;
            }
        }
    }
}

} // namespace

ClassRuns child_class_runs(const CanonicalTree &tree, const NodeLayout &layout)
{
    ClassRuns runs(layout.size());
    for (std::size_t v = 0; v < layout.size(); ++v) {
        const auto &kids = layout.children[v];
        for (std::size_t i = 0; i < kids.size(); ++i) {
            if (i > 0 && same_subtree(tree, layout, kids[i - 1], kids[i])) {
                ++runs[v].back().second;
            } else {
                runs[v].emplace_back(i, 1);
            }
        }
    }
    return runs;
}

AutomorphismElement AutomorphismElement::identity(const CanonicalTree &tree)
{
    const NodeLayout layout(tree);
    const auto runs = child_class_runs(tree, layout);
    AutomorphismElement a;
    a.perms.resize(layout.size());
    for (std::size_t v = 0; v < layout.size(); ++v) {
        for (const auto &[first, k] : runs[v]) {
            std::vector<std::uint32_t> perm(k);
            std::iota(perm.begin(), perm.end(), 0U);
            a.perms[v].push_back(std::move(perm));
        }
    }
    return a;
}

AutomorphismElement sample_automorphism(const CanonicalTree &tree, RngStream &rng)
{
    AutomorphismElement a = AutomorphismElement::identity(tree);
    for (auto &node : a.perms) {
        for (auto &perm : node) {
            shuffle_in_place(perm, rng);
        }
    }
    return a;
}

std::vector<int> apply_automorphism(const CanonicalTree &tree, const AutomorphismElement &a)
{
    const NodeLayout layout(tree);
    const auto runs = child_class_runs(tree, layout);
    validate(layout, runs, a);
    std::vector<int> image(layout.size(), -1);
    image[0] = 0;
    // preorder: every parent is mapped before its children
    for (std::size_t v = 0; v < layout.size(); ++v) {
        const auto w = static_cast<std::size_t>(image[v]);
        for (std::size_t i = 0; i < runs[v].size(); ++i) {
            const auto [first, k] = runs[v][i];
            for (std::size_t c = 0; c < k; ++c) {
                const auto child = static_cast<std::size_t>(layout.children[v][first + c]);
                image[child] = layout.children[w][first + a.perms[v][i][c]];
            }
        }
    }
    return image;
}

std::string Decomposition::mask_string() const
{
    std::string s;
    s.reserve(c_mask.size());
    for (bool b : c_mask) {
        s += b ? '1' : '0';
    }
    return s;
}

Decomposition decompose(const CanonicalTree &tree, const AutomorphismElement &a)
{
    const NodeLayout layout(tree);
    const auto runs = child_class_runs(tree, layout);
    validate(layout, runs, a);

    Decomposition out{.tree = tree, .c_mask = std::vector<bool>(layout.size(), false), .forests = {}};
    out.c_mask[0] = true;
    for (std::size_t v = 0; v < layout.size(); ++v) {
        if (!out.c_mask[v]) {
            continue;
        }
        std::size_t forest = 0;
        for (std::size_t i = 0; i < runs[v].size(); ++i) {
            const auto [first, k] = runs[v][i];
            for (std::size_t c = 0; c < k; ++c) {
                const auto child = static_cast<std::size_t>(layout.children[v][first + c]);
                if (a.perms[v][i][c] == c) {
                    out.c_mask[child] = true;
                } else {
                    forest += layout.subtree_size[child];
                }
            }
        }
        out.forests.emplace_back(v, forest);
        ++out.c_size;
        out.max_forest = std::max(out.max_forest, forest);
    }
    return out;
}

Decomposition sample_decomposition(const PolyaSampler &sampler, std::size_t n, RngStream &rng)
{
    CanonicalTree tree = sample_tree(sampler, n, rng);
    const AutomorphismElement a = sample_automorphism(tree, rng);
    return decompose(tree, a);
}

void decompose_shape(const ShapePool &pool, std::uint32_t root, RngStream &rng, ShapeDecomposition &out)
{
    out.c_size = 0;
    out.max_forest = 0;
    out.forests.clear();
    thread_local std::vector<std::uint32_t> stack;
    thread_local std::vector<std::uint32_t> perm;
    stack.clear();
    stack.push_back(root);
    while (!stack.empty()) {
        const std::uint32_t id = stack.back();
        stack.pop_back();
        std::size_t forest = 0;
        for (const auto &[child, k] : pool.shape(id).children) {
            std::uint32_t fixed = 1;
            if (k > 1) {
                perm.resize(k);
                std::iota(perm.begin(), perm.end(), 0U);
                shuffle_in_place(perm, rng);
                fixed = 0;
                for (std::uint32_t c = 0; c < k; ++c) {
                    fixed += perm[c] == c ? 1 : 0;
                }
            }
            forest += static_cast<std::size_t>(k - fixed) * pool.shape(child).size;
            stack.insert(stack.end(), fixed, child);
        }
        ++out.c_size;
        out.max_forest = std::max(out.max_forest, forest);
        out.forests.push_back(static_cast<std::uint32_t>(forest));
    }
}

} // namespace polya
