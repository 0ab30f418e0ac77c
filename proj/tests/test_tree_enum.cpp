#include "oracles.hpp"

#include "polya/errors.hpp"
#include "polya/series.hpp"
#include "polya/tree_enum.hpp"

#include <doctest.h>

#include <functional>
#include <numeric>
#include <set>
#include <thread>

using namespace polya;

namespace {

Rational q(const char *s)
{
    return parse_rational(s);
}

UPolynomial poly(std::initializer_list<const char *> items)
{
    std::vector<Rational> c;
    for (const char *s : items) {
        c.push_back(q(s));
    }
    return UPolynomial(std::move(c));
}

const CanonicalTree cherry = CanonicalTree::from_parens("(()())");
const CanonicalTree star3 = CanonicalTree::star(3);
const CanonicalTree cherry_on_stem = CanonicalTree::from_parens("((()()))");

} // namespace

TEST_CASE("canonical form")
{
    CHECK(CanonicalTree() == CanonicalTree::chain(1));
    CHECK(CanonicalTree::from_parens("()").parens() == "()");
    CHECK(CanonicalTree::from_parens("(()(()))") == CanonicalTree::from_parens("((())())"));
    CHECK(CanonicalTree::from_parens("(()(()))").parens() == "((())())");
    CHECK(canonical_form(std::vector<int>{-1, 0, 0}) == cherry);
    CHECK(canonical_form(std::vector<int>{2, 2, -1}) == cherry);
    CHECK(star3.parens() == "(()()())");
    CHECK(star3.level_string() == "1 2 2 2");
    CHECK(CanonicalTree::from_level_sequence("1 2 2 2") == star3);

    for (const auto &tree : enumerate_trees(4)) {
        CHECK(canonical_form(tree.parens()) == tree);
        CHECK(CanonicalTree::from_level_sequence(tree.level_sequence()) == tree);
    }
    CHECK_THROWS_AS(CanonicalTree::from_parens("(()"), RangeError);
    CHECK_THROWS_AS(CanonicalTree::from_parens("()()"), RangeError);
    CHECK_THROWS_AS(CanonicalTree::from_parents({-1, -1}), RangeError);
    CHECK_THROWS_AS(CanonicalTree::from_parents({1, 2, 1}), RangeError);
    CHECK_THROWS_AS(CanonicalTree::from_level_sequence("1 3"), RangeError);
}

TEST_CASE("isomorphic random relabelings canonicalize identically")
{
    // shuffled parent arrays of every tree of size 7
    std::uint64_t state = 12345;
    auto next = [&state] {
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        return state >> 33;
    };
    for (const auto &tree : enumerate_trees(7)) {
        const NodeLayout layout(tree);
        const std::size_t n = layout.size();
        for (int rep = 0; rep < 5; ++rep) {
            std::vector<int> relabel(n);
            std::iota(relabel.begin(), relabel.end(), 0);
            for (std::size_t i = n; i > 1; --i) {
                std::swap(relabel[i - 1], relabel[next() % i]);
            }
            std::vector<int> parent(n);
            for (std::size_t v = 0; v < n; ++v) {
                const int p = layout.parent[v];
                parent[static_cast<std::size_t>(relabel[v])] = p < 0 ? -1 : relabel[static_cast<std::size_t>(p)];
            }
            CHECK(canonical_form(parent) == tree);
        }
    }
}

TEST_CASE("enumeration counts")
{
    const auto t = polya_counts(12);
    TreeCatalog catalog;
    for (std::size_t n = 1; n <= 12; ++n) {
        const auto &trees = catalog.trees(n);
        CHECK(BigInt(trees.size()) == t[n]);
        const std::set<CanonicalTree> unique(trees.begin(), trees.end());
        CHECK(unique.size() == trees.size());
    }
    CHECK(enumerate_trees(1).size() == 1);
    CHECK(enumerate_trees(10).size() == 719);

    // the same set as the independent leaf-growth enumeration
    std::set<std::string> mine;
    for (const auto &tree : catalog.trees(9)) {
        mine.insert(oracle::ahu_code(NodeLayout(tree).parent));
    }
    CHECK(mine == oracle::grow_trees(9));

    const auto four = enumerate_trees(4);
    const std::set<std::string> expected{"(((())))", "((()()))", "((())())", "(()()())"};
    std::set<std::string> got;
    for (const auto &tree : four) {
        got.insert(tree.parens());
    }
    CHECK(got == expected);

    CHECK_THROWS_AS(enumerate_trees(17), ResourceError);
    CHECK(enumerate_trees(5, {.max_tree_size = 5, .max_forest_size = 5}).size() == 9);
    CHECK_THROWS_AS(enumerate_trees(6, {.max_tree_size = 5, .max_forest_size = 5}), ResourceError);
}

TEST_CASE("automorphism group orders")
{
    CHECK(aut_order(CanonicalTree::chain(4)) == 1);
    CHECK(aut_order(cherry_on_stem) == 2);
    CHECK(aut_order(star3) == 6);
    CHECK(aut_order(CanonicalTree::star(5)) == 120);
    // two cherries under a root: 2! * 2^2
    CHECK(aut_order(CanonicalTree::from_parens("((()())(()()))")) == 8);

    for (std::size_t n = 1; n <= 7; ++n) {
        for (const auto &tree : enumerate_trees(n)) {
            const auto autos = brute_force_automorphisms(NodeLayout(tree).parent);
            CHECK(aut_order(tree) == BigInt(autos.size()));
        }
    }
}

TEST_CASE("fixed-point polynomials")
{
    CHECK(fixed_point_polynomial(CanonicalTree()) == UPolynomial::monomial(1));
    CHECK(fixed_point_polynomial(cherry) == poly({"0", "1/2", "0", "1/2"}));
    CHECK(fixed_point_polynomial(star3) == poly({"0", "1/3", "1/2", "0", "1/6"}));
    CHECK(fixed_point_polynomial(CanonicalTree::chain(4)) == UPolynomial::monomial(4));

    const auto der = derangements(6);
    const std::vector<long> expected{1, 0, 1, 2, 9, 44, 265};
    for (std::size_t r = 0; r <= 6; ++r) {
        CHECK(der[r] == expected[r]);
    }

    for (std::size_t n = 1; n <= 8; ++n) {
        Rational cayley_mass = 0;
        for (const auto &tree : enumerate_trees(n)) {
            const auto p = fixed_point_polynomial(tree);
            const BigInt aut = aut_order(tree);
            CHECK(p.eval_at_one() == 1);
            CHECK(p.degree() == static_cast<long>(n));
            CHECK(p.coeff(n) == Rational(1, aut));
            CHECK((p == UPolynomial::monomial(n)) == (aut == 1));
            for (const auto &c : p.coeffs()) {
                CHECK(c >= 0);
                CHECK(aut % c.get_den() == 0);
            }
            cayley_mass += Rational(1, aut);

            if (n <= 7) {
                // definitional form: average of u^{#fixed nodes}
                const auto autos = brute_force_automorphisms(NodeLayout(tree).parent);
                std::vector<Rational> c(n + 1, 0);
                for (const auto &sigma : autos) {
                    std::size_t fixed = 0;
                    for (std::size_t v = 0; v < n; ++v) {
                        fixed += sigma[v] == static_cast<int>(v) ? 1 : 0;
                    }
                    c[fixed] += Rational(1, static_cast<unsigned long>(autos.size()));
                }
                for (auto &x : c) {
                    x.canonicalize();
                }
                CHECK(p == UPolynomial(c));
            }
        }
        cayley_mass.canonicalize();
        CHECK(cayley_mass == cayley_weights(n)[n]);
    }
}

TEST_CASE("orbit counts")
{
    CHECK(orbit_count(star3) == 2);
    for (std::size_t n = 1; n <= 9; ++n) {
        CHECK(orbit_count(CanonicalTree::chain(n)) == n);
    }
    std::size_t total4 = 0;
    for (const auto &tree : enumerate_trees(4)) {
        total4 += orbit_count(tree);
    }
    CHECK(total4 == 13);

    // orbits of the brute-force group via union-find
    for (std::size_t n = 1; n <= 7; ++n) {
        for (const auto &tree : enumerate_trees(n)) {
            const auto autos = brute_force_automorphisms(NodeLayout(tree).parent);
            std::vector<std::size_t> rep(n);
            std::iota(rep.begin(), rep.end(), 0);
            std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
                return rep[x] == x ? x : rep[x] = find(rep[x]);
            };
            for (const auto &sigma : autos) {
                for (std::size_t v = 0; v < n; ++v) {
                    rep[find(v)] = find(static_cast<std::size_t>(sigma[v]));
                }
            }
            std::size_t orbits = 0;
            for (std::size_t v = 0; v < n; ++v) {
                orbits += find(v) == v ? 1 : 0;
            }
            CHECK(orbit_count(tree) == orbits);
            CHECK(Rational(orbit_count(tree)) == fixed_point_polynomial(tree).derivative_at_one());
        }
    }
}

TEST_CASE("forest enumeration")
{
    CHECK(enumerate_forests(0).size() == 1);
    CHECK(enumerate_forests(0)[0].classes.empty());
    CHECK(enumerate_forests(1).empty());

    const auto two = enumerate_forests(2);
    REQUIRE(two.size() == 1);
    CHECK(two[0].classes == std::vector<std::pair<CanonicalTree, std::size_t>>{{CanonicalTree(), 2}});

    const auto four = enumerate_forests(4);
    REQUIRE(four.size() == 2);
    std::set<std::pair<std::string, std::size_t>> seen;
    for (const auto &f : four) {
        REQUIRE(f.classes.size() == 1);
        seen.emplace(f.classes[0].first.parens(), f.classes[0].second);
    }
    CHECK(seen == std::set<std::pair<std::string, std::size_t>>{{"()", 4}, {"(())", 2}});

    const auto five = enumerate_forests(5);
    REQUIRE(five.size() == 1);
    CHECK(five[0].classes[0].second == 5);

    for (std::size_t n = 0; n <= 10; ++n) {
        const auto forests = enumerate_forests(n);
        for (const auto &f : forests) {
            CHECK(f.valid());
            CHECK(f.size() == n);
        }
        for (std::size_t i = 0; i < forests.size(); ++i) {
            for (std::size_t j = i + 1; j < forests.size(); ++j) {
                CHECK_FALSE(forests[i] == forests[j]);
            }
        }
    }
    CHECK_THROWS_AS(enumerate_forests(15), ResourceError);
}

TEST_CASE("forest weights")
{
    const ForestSpec singles2{{{CanonicalTree(), 2}}};
    const ForestSpec singles4{{{CanonicalTree(), 4}}};
    const ForestSpec pair_of_edges{{{CanonicalTree::chain(2), 2}}};
    CHECK(forest_weight(singles2) == q("1/2"));
    CHECK(forest_weight(singles4) == q("3/8"));
    CHECK(forest_weight(pair_of_edges) == q("1/2"));

    for (std::size_t n = 0; n <= 9; ++n) {
        for (const auto &f : enumerate_forests(n)) {
            CHECK(forest_weight(f) == forest_weight_bruteforce(f));
        }
    }
    CHECK_THROWS_AS(forest_weight_bruteforce(ForestSpec{{{CanonicalTree(), 10}}}), ResourceError);
}

TEST_CASE("D-forest weight oracle")
{
    CHECK(dn_oracle(0) == 1);
    CHECK(dn_oracle(1) == 0);
    CHECK(dn_oracle(4) == q("7/8"));
    CHECK(dn_oracle(6) == q("281/144"));
    const auto d = dforest_weights(12);
    for (std::size_t n = 0; n <= 12; ++n) {
        CHECK(dn_oracle(n) == d[n]);
    }
}

TEST_CASE("C-tree polynomial oracle")
{
    CHECK(tcn_polynomial_oracle(1) == UPolynomial::monomial(1));
    CHECK(tcn_polynomial_oracle(3) == poly({"0", "1/2", "0", "3/2"}));
    CHECK(tcn_polynomial_oracle(4) == poly({"0", "1/3", "1", "0", "8/3"}));
    const auto table = ctree_polynomials(10);
    for (std::size_t n = 1; n <= 10; ++n) {
        CHECK(tcn_polynomial_oracle(n) == table.row(n));
    }
}

TEST_CASE("catalog is consistent under concurrent use")
{
    // memo tables are per thread; results must not depend on the thread
    std::vector<UPolynomial> results(4);
    std::vector<std::thread> threads;
    for (std::size_t i = 0; i < results.size(); ++i) {
        threads.emplace_back([&results, i] { results[i] = tcn_polynomial_oracle(9); });
    }
    for (auto &th : threads) {
        th.join();
    }
    for (const auto &r : results) {
        CHECK(r == results[0]);
    }
}
