#include "oracles.hpp"

#include "polya/errors.hpp"
#include "polya/sampler.hpp"
#include "polya/series.hpp"
#include "polya/tree_enum.hpp"

#include <doctest.h>

#include <map>
#include <set>

using namespace polya;

namespace {

constexpr std::uint64_t test_seed = 0x5EED0001ULL;

// Chi-square of sampled trees of size n against the uniform law on t_n trees.
double uniformity_p(const PolyaSampler &sampler, std::size_t n, std::size_t samples, std::uint64_t stream)
{
    const auto trees = enumerate_trees(n);
    std::map<CanonicalTree, std::size_t> index;
    for (std::size_t i = 0; i < trees.size(); ++i) {
        index[trees[i]] = i;
    }
    std::vector<double> observed(trees.size(), 0);
    RngStream rng(test_seed, stream);
    for (std::size_t s = 0; s < samples; ++s) {
        const auto it = index.find(sample_tree(sampler, n, rng));
        REQUIRE(it != index.end());
        ++observed[it->second];
    }
    return oracle::chi_square_p(observed, std::vector<double>(trees.size(), 1.0 / static_cast<double>(trees.size())));
}

// Checks the structural invariants of a decomposition.
void check_decomposition(const Decomposition &dec)
{
    const NodeLayout layout(dec.tree);
    const std::size_t n = layout.size();
    REQUIRE(dec.c_mask.size() == n);
    CHECK(dec.c_mask[0]);
    std::size_t c_nodes = 0;
    std::size_t forest_total = 0;
    std::size_t max_forest = 0;
    for (std::size_t v = 0; v < n; ++v) {
        if (dec.c_mask[v]) {
            ++c_nodes;
            if (v > 0) {
                CHECK(dec.c_mask[static_cast<std::size_t>(layout.parent[v])]);
            }
        }
    }
    for (const auto &[v, size] : dec.forests) {
        CHECK(dec.c_mask[v]);
        forest_total += size;
        max_forest = std::max(max_forest, size);

        // the moved children of v: every isomorphism class at least twice
        std::size_t moved = 0;
        std::map<std::string, std::size_t> classes;
        for (int c : layout.children[v]) {
            if (!dec.c_mask[static_cast<std::size_t>(c)]) {
                moved += layout.subtree_size[static_cast<std::size_t>(c)];
                const auto offset = layout.code_offset[static_cast<std::size_t>(c)];
                ++classes[dec.tree.parens().substr(offset, 2 * layout.subtree_size[static_cast<std::size_t>(c)])];
            }
        }
        CHECK(moved == size);
        for (const auto &[code, count] : classes) {
            CHECK(count >= 2);
        }
    }
    CHECK(dec.forests.size() == c_nodes);
    CHECK(dec.c_size == c_nodes);
    CHECK(dec.c_size + forest_total == n);
    CHECK(dec.max_forest == max_forest);
    CHECK(dec.max_forest <= n - 1);
}

} // namespace

TEST_CASE("rng streams are reproducible")
{
    RngStream a(7, 3);
    RngStream b(7, 3);
    RngStream c(7, 4);
    bool differs = false;
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next_u64();
        CHECK(x == b.next_u64());
        differs = differs || x != c.next_u64();
    }
    CHECK(differs);
    RngStream d(7, 3);
    for (int i = 0; i < 1000; ++i) {
        CHECK(d.below(7) < 7);
    }
    CHECK(a.substream(5).next_u64() == b.substream(5).next_u64());
    CHECK(a.substream(5).next_u64() != a.substream(6).next_u64());
}

TEST_CASE("shape pool")
{
    ShapePool pool;
    const auto leaf = pool.intern({});
    const auto edge = pool.intern({{leaf, 1}});
    const auto cherry = pool.intern({{leaf, 1}, {leaf, 1}});
    CHECK(cherry == pool.intern({{leaf, 2}}));
    CHECK(pool.shape(cherry).size == 3);
    CHECK(pool.to_canonical(cherry).parens() == "(()())");
    const auto mixed1 = pool.intern({{edge, 1}, {leaf, 1}});
    const auto mixed2 = pool.intern({{leaf, 1}, {edge, 1}});
    CHECK(mixed1 == mixed2);
    CHECK(pool.to_canonical(mixed1).parens() == "((())())");
    CHECK(pool.class_count() == 4);
}

TEST_CASE("sampler basics")
{
    const PolyaSampler sampler(50);
    RngStream rng(test_seed, 0);
    CHECK(sample_tree(sampler, 1, rng) == CanonicalTree());
    for (std::size_t n = 1; n <= 50; ++n) {
        CHECK(sample_tree(sampler, n, rng).size() == n);
    }
    CHECK_THROWS_AS(sample_tree(sampler, 51, rng), ResourceError);
    CHECK_THROWS_AS(PolyaSampler(20001), ResourceError);
    CHECK_NOTHROW(PolyaSampler(100, 100));
}

TEST_CASE("sampler is uniform")
{
    const PolyaSampler sampler(10);
    CHECK(uniformity_p(sampler, 4, 40000, 1) > 0.001);
    CHECK(uniformity_p(sampler, 6, 40000, 2) > 0.001);
    CHECK(uniformity_p(sampler, 8, 60000, 3) > 0.001);

    // n = 10: every one of the 719 trees shows up and the law is flat
    const auto trees = enumerate_trees(10);
    std::map<CanonicalTree, double> counts;
    RngStream rng(test_seed, 4);
    for (int s = 0; s < 100000; ++s) {
        ++counts[sample_tree(sampler, 10, rng)];
    }
    CHECK(counts.size() == 719);
    std::vector<double> observed;
    for (const auto &tree : trees) {
        observed.push_back(counts[tree]);
    }
    CHECK(oracle::chi_square_p(observed, std::vector<double>(719, 1.0 / 719)) > 0.001);
}

TEST_CASE("exact draws match the floating-point filter")
{
    const PolyaSampler fast(400);
    const PolyaSampler exact(400, default_sampler_cap, {.force_exact = true});
    for (std::size_t n : {2, 7, 30, 150, 400}) {
        RngStream a(test_seed, n);
        RngStream b(test_seed, n);
        for (int rep = 0; rep < 20; ++rep) {
            CHECK(sample_tree(fast, n, a) == sample_tree(exact, n, b));
        }
        CHECK(a.next_u64() == b.next_u64());
    }
}

TEST_CASE("split law matches the recurrence weights")
{
    // P(j, d) = t_{n-jd} d t_d / ((n-1) t_n)
    const std::size_t n = 9;
    const PolyaSampler sampler(n);
    const auto &t = sampler.counts();
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> cell;
    std::vector<double> prob;
    for (std::size_t d = 1; d < n; ++d) {
        for (std::size_t j = 1; j * d <= n - 1; ++j) {
            cell[{j, d}] = prob.size();
            prob.push_back(to_double(Rational(t[n - j * d] * d * t[d], (n - 1) * t[n])));
        }
    }
    std::vector<double> observed(prob.size(), 0);
    RngStream rng(test_seed, 99);
    for (int s = 0; s < 100000; ++s) {
        ++observed[cell.at(sampler.draw_split(n, rng))];
    }
    CHECK(oracle::chi_square_p(observed, prob) > 0.001);
}

TEST_CASE("automorphism sampling")
{
    RngStream rng(test_seed, 5);
    const auto chain = CanonicalTree::chain(5);
    for (int i = 0; i < 20; ++i) {
        const auto image = apply_automorphism(chain, sample_automorphism(chain, rng));
        CHECK(image == std::vector<int>{0, 1, 2, 3, 4});
    }

    // every sampled element is in the brute-force group, uniformly
    for (const char *code : {"(()())", "(()()())", "((()())(()()))", "((())(())())"}) {
        const auto tree = CanonicalTree::from_parens(code);
        const auto group = brute_force_automorphisms(NodeLayout(tree).parent);
        const std::set<std::vector<int>> members(group.begin(), group.end());
        std::map<std::vector<int>, double> counts;
        const int samples = 2000 * static_cast<int>(group.size());
        for (int s = 0; s < samples; ++s) {
            const auto image = apply_automorphism(tree, sample_automorphism(tree, rng));
            CHECK(members.count(image) == 1);
            ++counts[image];
        }
        CHECK(counts.size() == group.size());
        std::vector<double> observed;
        for (const auto &[image, c] : counts) {
            observed.push_back(c);
        }
        CHECK(oracle::chi_square_p(observed, std::vector<double>(observed.size(), 1.0 / observed.size())) > 0.001);
    }

    const auto star = CanonicalTree::star(3);
    AutomorphismElement bad = AutomorphismElement::identity(star);
    bad.perms[0][0] = {0, 0, 1};
    CHECK_THROWS_AS(apply_automorphism(star, bad), RangeError);
    CHECK_THROWS_AS(decompose(star, bad), RangeError);
    CHECK_THROWS_AS(decompose(CanonicalTree::chain(4), bad), RangeError);
}

TEST_CASE("decompose examples")
{
    const auto star = CanonicalTree::star(3);
    const auto id = decompose(star, AutomorphismElement::identity(star));
    CHECK(id.c_size == 4);
    CHECK(id.max_forest == 0);
    CHECK(id.mask_string() == "1111");

    AutomorphismElement swap = AutomorphismElement::identity(star);
    swap.perms[0][0] = {1, 0, 2};
    const auto t = decompose(star, swap);
    CHECK(t.mask_string() == "1001");
    CHECK(t.c_size == 2);
    CHECK(t.forests == std::vector<std::pair<std::size_t, std::size_t>>{{0, 2}, {3, 0}});

    AutomorphismElement cycle = AutomorphismElement::identity(star);
    cycle.perms[0][0] = {1, 2, 0};
    const auto c = decompose(star, cycle);
    CHECK(c.mask_string() == "1000");
    CHECK(c.c_size == 1);
    CHECK(c.max_forest == 3);

    // max_forest == 0 exactly for the identity
    RngStream rng(test_seed, 6);
    const auto tree = CanonicalTree::from_parens("((()())(()())())");
    for (int i = 0; i < 200; ++i) {
        const auto a = sample_automorphism(tree, rng);
        const auto image = apply_automorphism(tree, a);
        bool identity = true;
        for (std::size_t v = 0; v < image.size(); ++v) {
            identity = identity && image[v] == static_cast<int>(v);
        }
        const auto dec = decompose(tree, a);
        CHECK((dec.max_forest == 0) == identity);
        check_decomposition(dec);
    }
}

TEST_CASE("decomposition invariants on random trees")
{
    const PolyaSampler sampler(200);
    RngStream rng(test_seed, 7);
    for (std::size_t n : {1, 2, 3, 10, 50, 200}) {
        for (int i = 0; i < 30; ++i) {
            const auto dec = sample_decomposition(sampler, n, rng);
            CHECK(dec.tree.size() == n);
            check_decomposition(dec);
            if (n <= 2) {
                CHECK(dec.c_size == n);
                CHECK(dec.max_forest == 0);
            }
        }
    }
}

TEST_CASE("C-size law given the tree")
{
    RngStream rng(test_seed, 8);
    // 3-leaf star: P(c = 1, 2, 4) = 1/3, 1/2, 1/6
    {
        const auto star = CanonicalTree::star(3);
        std::vector<double> observed(5, 0);
        for (int s = 0; s < 30000; ++s) {
            ++observed[decompose(star, sample_automorphism(star, rng)).c_size];
        }
        CHECK(oracle::chi_square_p(observed, {0, 1.0 / 3, 0.5, 0, 1.0 / 6}) > 0.001);
    }
    for (std::size_t n = 3; n <= 8; ++n) {
        for (const auto &tree : enumerate_trees(n)) {
            const auto p = fixed_point_polynomial(tree);
            if (p == UPolynomial::monomial(n)) {
                continue;
            }
            std::vector<double> prob(n + 1), observed(n + 1, 0);
            for (std::size_t k = 0; k <= n; ++k) {
                prob[k] = to_double(p.coeff(k));
            }
            for (int s = 0; s < 3000; ++s) {
                ++observed[decompose(tree, sample_automorphism(tree, rng)).c_size];
            }
            CHECK(oracle::chi_square_p(observed, prob) > 0.001);
        }
    }
}

TEST_CASE("unconditional C-size law")
{
    const PolyaSampler sampler(8);
    RngStream rng(test_seed, 9);
    // n = 4: 2/3, 1/4, 1/12 for c = 4, 2, 1
    {
        std::vector<double> observed(5, 0);
        for (int s = 0; s < 40000; ++s) {
            ++observed[sample_decomposition(sampler, 4, rng).c_size];
        }
        CHECK(oracle::chi_square_p(observed, {0, 1.0 / 12, 0.25, 0, 2.0 / 3}) > 0.001);
    }
    const auto row = ctree_polynomials(8).row(8);
    std::vector<double> prob(9), observed(9, 0);
    for (std::size_t k = 0; k <= 8; ++k) {
        prob[k] = to_double(row.coeff(k) / 115);
    }
    for (int s = 0; s < 60000; ++s) {
        ++observed[sample_decomposition(sampler, 8, rng).c_size];
    }
    CHECK(oracle::chi_square_p(observed, prob) > 0.001);
}

TEST_CASE("pooled decomposition agrees in law with the explicit one")
{
    // E|C_n| at n = 60 from the shape path, against the exact value
    const std::size_t n = 60;
    const PolyaSampler sampler(n);
    const auto exact = oracle::cn_exact_moments(sampler.counts(), n);
    ShapePool pool;
    ShapeDecomposition out;
    double sum = 0, sq = 0;
    const int trials = 40000;
    for (int i = 0; i < trials; ++i) {
        RngStream rng(test_seed, 1000 + static_cast<std::uint64_t>(i));
        pool.clear();
        const auto root = sampler.sample_shape(n, rng, pool);
        decompose_shape(pool, root, rng, out);
        std::size_t total = out.c_size;
        for (auto f : out.forests) {
            total += f;
        }
        CHECK(total == n);
        CHECK(out.forests.size() == out.c_size);
        sum += static_cast<double>(out.c_size);
        sq += static_cast<double>(out.c_size) * static_cast<double>(out.c_size);
    }
    const double mean = sum / trials;
    const double var = sq / trials - mean * mean;
    const double se = std::sqrt(to_double(exact.variance()) / trials);
    CHECK(std::abs(mean - to_double(exact.mean)) < 4 * se);
    CHECK(var == doctest::Approx(to_double(exact.variance())).epsilon(0.05));
}
