#include "commands.hpp"

#include "polya/asymptotics.hpp"
#include "polya/errors.hpp"
#include "polya/experiment.hpp"
#include "polya/sampler.hpp"
#include "polya/series.hpp"
#include "polya/tree_enum.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

namespace polya::cli {

namespace {

using json = nlohmann::ordered_json;

struct Report {
    json data;
    std::string csv;
};

std::string fixed(double x, int decimals)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, x);
    return buf;
}

std::string general(double x, int digits = 12)
{
    std::ostringstream os;
    os.precision(digits);
    os << x;
    return os.str();
}

std::string join(const std::vector<std::string> &items, char sep = ',')
{
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) {
            out += sep;
        }
        out += items[i];
    }
    return out;
}

// Seeds are accepted in decimal or with a 0x prefix.
std::uint64_t parse_seed(const std::string &text)
{
    try {
        std::size_t used = 0;
        const auto v = std::stoull(text, &used, 0);
        if (used == text.size()) {
            return v;
        }
    } catch (const std::exception &) {
    }
    throw RangeError("invalid seed: " + text);
}

std::string seed_string(std::uint64_t seed)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "0x%llX", static_cast<unsigned long long>(seed));
    return buf;
}

Report counts_report(std::size_t n)
{
    const auto t = polya_counts(n);
    std::vector<std::string> values;
    for (std::size_t i = 1; i <= n; ++i) {
        values.push_back(to_string(t[i]));
    }
    Report r;
    r.data["n"] = n;
    r.data["t"] = values;
    r.csv = join(values) + "\n";
    return r;
}

Report weights_report(std::size_t n)
{
    const auto d = dforest_weights(n);
    const auto c = cayley_weights(std::max<std::size_t>(n, 1));
    std::vector<std::string> ds, cs;
    Report r;
    r.csv = "n,d,c\n";
    for (std::size_t i = 0; i <= n; ++i) {
        ds.push_back(to_string(d[i]));
        cs.push_back(to_string(c[i]));
        r.csv += std::to_string(i) + "," + ds.back() + "," + cs.back() + "\n";
    }
    r.data["d"] = ds;
    r.data["c"] = cs;
    return r;
}

Report polys_report(std::size_t n)
{
    const auto table = ctree_polynomials(n);
    Report r;
    r.csv = "n,k,coeff\n";
    json rows = json::array();
    for (std::size_t i = 1; i <= n; ++i) {
        const auto &p = table.row(i);
        std::vector<std::string> coeffs;
        for (std::size_t k = 0; k < p.coeffs().size(); ++k) {
            coeffs.push_back(to_string(p.coeffs()[k]));
            if (p.coeffs()[k] != 0) {
                r.csv += std::to_string(i) + "," + std::to_string(k) + "," + coeffs.back() + "\n";
            }
        }
        rows.push_back({{"n", i}, {"coeffs", coeffs}});
    }
    r.data["rows"] = rows;
    return r;
}

Report constants_report(std::size_t order, int precision, int digits)
{
    require(digits >= 1 && digits <= precision, "--digits must lie in [1, precision]");
    const auto k = compute_constants(order, precision);
    Report r;
    r.csv = "key,value\n";
    for (const auto &[key, value] : export_constants(k, digits)) {
        r.data[key] = value;
        r.csv += key + "," + value + "\n";
    }
    r.data["log_note"] = "log ratios are base-invariant; natural logs are used internally";
    r.csv += "log_note,log ratios are base-invariant; natural logs are used internally\n";
    return r;
}

Report oracle_report(std::size_t n)
{
    require(n >= 1, "--n must be positive");
    const EnumerationLimits limits;
    if (n > limits.max_tree_size || n > limits.max_forest_size) {
        throw ResourceError("oracle size " + std::to_string(n) + " exceeds the enumeration cap " +
                            std::to_string(std::min(limits.max_tree_size, limits.max_forest_size)));
    }
    const auto table = CountTable::build(n);
    const auto polys = ctree_polynomials(table);
    const auto pointed = pointed_series(table);
    TreeCatalog catalog(limits);

    Report r;
    r.csv = "n,trees,d,tcn,orbits\n";
    json rows = json::array();
    for (std::size_t i = 0; i <= n; ++i) {
        const bool d_ok = dn_oracle(i, limits) == table.d[i];
        check_consistency(d_ok, "forest oracle disagrees with d_" + std::to_string(i));
        std::size_t trees = 0;
        if (i >= 1) {
            const auto &list = catalog.trees(i);
            trees = list.size();
            check_consistency(BigInt(trees) == table.t[i], "tree enumeration disagrees with t_" + std::to_string(i));
            check_consistency(tcn_polynomial_oracle(i, limits) == polys.row(i),
                              "tree oracle disagrees with t_{c," + std::to_string(i) + "}(u)");
            Rational orbits = 0;
            for (const auto &tree : list) {
                const auto o = orbit_count(tree);
                check_consistency(Rational(o) == fixed_point_polynomial(tree).derivative_at_one(),
                                  "orbit count differs from t_T'(1) for " + tree.parens());
                orbits += o;
            }
            check_consistency(orbits == pointed[i], "orbit sum differs from [z^n] T/(1-T) at n=" + std::to_string(i));
        }
        rows.push_back({{"n", i}, {"trees", trees}, {"d", "OK"}, {"tcn", i ? "OK" : "-"}, {"orbits", i ? "OK" : "-"}});
        r.csv += std::to_string(i) + "," + std::to_string(trees) + ",OK," + (i ? "OK,OK" : "-,-") + "\n";
    }
    r.data["status"] = "OK";
    r.data["checks"] = rows;
    r.csv = "OK\n" + r.csv;
    return r;
}

Report sample_report(std::size_t n, std::size_t count, std::uint64_t seed)
{
    require(n >= 1, "--n must be positive");
    require(count >= 1, "--count must be positive");
    const PolyaSampler sampler(n);
    RngStream rng(seed, 0);
    Report r;
    r.csv = "index,parens,levels\n";
    json trees = json::array();
    for (std::size_t i = 0; i < count; ++i) {
        const auto tree = sample_tree(sampler, n, rng);
        trees.push_back({{"parens", tree.parens()}, {"levels", tree.level_string()}});
        r.csv += std::to_string(i) + "," + tree.parens() + "," + tree.level_string() + "\n";
    }
    r.data["n"] = n;
    r.data["seed"] = seed_string(seed);
    r.data["trees"] = trees;
    return r;
}

Report decompose_report(std::optional<std::size_t> n, const std::string &tree_code, std::uint64_t seed)
{
    RngStream rng(seed, 0);
    Decomposition dec;
    if (!tree_code.empty()) {
        const auto tree = CanonicalTree::from_parens(tree_code);
        dec = decompose(tree, sample_automorphism(tree, rng));
    } else {
        require(n.has_value() && *n >= 1, "decompose needs --n or --tree");
        const PolyaSampler sampler(*n);
        dec = sample_decomposition(sampler, *n, rng);
    }
    Report r;
    r.data["tree"] = dec.tree.parens();
    r.data["c_mask"] = dec.mask_string();
    json forests = json::array();
    r.csv = "node,forest_size\n";
    for (const auto &[node, size] : dec.forests) {
        forests.push_back({node, size});
        r.csv += std::to_string(node) + "," + std::to_string(size) + "\n";
    }
    r.data["forests"] = forests;
    r.data["c_size"] = dec.c_size;
    r.data["max_forest"] = dec.max_forest;
    r.data["seed"] = seed_string(seed);
    return r;
}

Report experiment_report(std::size_t n, std::size_t trials, std::uint64_t seed, std::size_t workers,
                         const std::string &mode_name)
{
    require(n >= 1, "--n must be positive");
    const HistogramMode mode = mode_name == "all" ? HistogramMode::AllNodes : HistogramMode::RandomNode;
    const PolyaSampler sampler(n);
    const auto s = run_experiment(sampler, n, trials, RngStream(seed, 0), workers, mode);
    const double nn = static_cast<double>(n);

    Report r;
    auto &d = r.data;
    d["n"] = std::to_string(s.n);
    d["trials"] = std::to_string(s.trials);
    d["seed"] = seed_string(seed);
    d["mode"] = mode_name;
    d["mean_c"] = general(s.mean_c);
    d["var_c"] = general(s.var_c);
    d["mean_c_over_n"] = general(s.mean_c / nn);
    d["var_c_over_n"] = general(s.var_c / nn);
    d["ln_mean"] = general(s.ln_values.mean);
    d["ln_variance"] = general(s.ln_values.variance);
    d["ln_min"] = general(s.ln_values.min);
    d["ln_q25"] = general(s.ln_values.q25);
    d["ln_median"] = general(s.ln_values.median);
    d["ln_q75"] = general(s.ln_values.q75);
    d["ln_max"] = general(s.ln_values.max);
    d["histogram_nodes"] = std::to_string(s.histogram_total);
    json hist = json::array();
    r.csv = "m,freq\n";
    for (const auto &[m, f] : s.forest_size_histogram) {
        hist.push_back({{"m", std::to_string(m)}, {"freq", general(f)}});
        r.csv += std::to_string(m) + "," + general(f) + "\n";
    }
    d["histogram"] = hist;
    return r;
}

Report table1_report(std::size_t max_m, int decimals, std::size_t order)
{
    require(decimals >= 1 && decimals <= 15, "--digits must lie in [1, 15]");
    const auto k = compute_constants(order, 50);
    const auto d = dforest_weights(order);
    Report r;
    r.csv = "m,equal,at_least\n";
    json rows = json::array();
    for (const auto &row : forest_size_table(max_m, k, d)) {
        const auto eq = fixed(row.equal.convert_to<double>(), decimals);
        const auto ge = fixed(row.at_least.convert_to<double>(), decimals);
        rows.push_back({{"m", row.m}, {"equal", eq}, {"at_least", ge}});
        r.csv += std::to_string(row.m) + "," + eq + "," + ge + "\n";
    }
    r.data["rows"] = rows;
    return r;
}

void write_error(std::ostream &err, const char *kind, int code, const std::string &message)
{
    json e;
    e["error"] = {{"kind", kind}, {"code", code}, {"message", message}};
    err << e.dump() << "\n";
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Exact counts, oracles, constants and Monte Carlo for the C-tree/D-forest decomposition of "
                 "random Pólya trees"};
    app.name("polya");
    app.fallthrough();
    app.require_subcommand(1, 1);

    std::string format = "json";
    std::string output;
    app.add_option("--format", format, "report format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    app.add_option("--output", output, "write the report to this file instead of standard output");

    std::size_t n = 10;
    std::size_t order = 128;
    int precision = 50;
    int digits = 30;
    std::size_t count = 1;
    std::size_t trials = 10000;
    std::size_t workers = 1;
    std::size_t max_m = 7;
    std::string seed_text = "0x5EED0001";
    std::string mode = "random";
    std::string tree_code;
    std::function<Report()> action;

    const auto add_seed = [&](CLI::App *sub) {
        sub->add_option("--seed", seed_text, "random seed, decimal or 0x-prefixed (default 0x5EED0001)");
    };

    auto *counts = app.add_subcommand(
        "counts", "Number t_n of Pólya trees of size n = 1..N, i.e. the coefficients of T(z) = z exp(sum_i T(z^i)/i)");
    counts->add_option("--n", n, "largest size N")->capture_default_str();
    counts->callback([&] { action = [&] { return counts_report(n); }; });

    auto *weights = app.add_subcommand(
        "weights", "D-forest weights d_0..d_N of D(z) = exp(sum_{i>=2} T(z^i)/i) and Cayley weights n^(n-1)/n!");
    weights->add_option("--n", n, "largest index N")->capture_default_str();
    weights->callback([&] { action = [&] { return weights_report(n); }; });

    auto *polys = app.add_subcommand(
        "polys", "C-tree polynomials t_{c,n}(u) = [z^n] C(u z D(z)); [u^k] is the weight of C-trees with k nodes");
    polys->add_option("--n", n, "largest size N")->capture_default_str();
    polys->callback([&] { action = [&] { return polys_report(n); }; });

    auto *constants = app.add_subcommand(
        "constants", "Singularity constants rho, b, c = b^2/3, D(rho), D'(rho), c1 from rho D(rho) = 1/e");
    constants->add_option("--order", order, "truncation order of D")->capture_default_str();
    constants->add_option("--precision", precision, "working decimal digits")->capture_default_str();
    constants->add_option("--digits", digits, "printed significant digits")->capture_default_str();
    constants->callback([&] { action = [&] { return constants_report(order, precision, digits); }; });

    auto *oracle = app.add_subcommand(
        "oracle", "Enumeration cross-checks for sizes up to N: d_n as a sum over D-forests, t_{c,n}(u) as a sum of "
                  "fixed-point polynomials, orbit counts t_T'(1) summing to [z^n] T/(1-T)");
    oracle->add_option("--n", n, "largest size N")->capture_default_str();
    oracle->callback([&] { action = [&] { return oracle_report(n); }; });

    auto *sample = app.add_subcommand("sample", "Uniform random Pólya trees of size n (recursive method)");
    sample->add_option("--n", n, "tree size")->capture_default_str();
    sample->add_option("--count", count, "number of trees")->capture_default_str();
    add_seed(sample);
    sample->callback([&] { action = [&] { return sample_report(n, count, parse_seed(seed_text)); }; });

    auto *dec = app.add_subcommand(
        "decompose", "C-tree/D-forest split of a tree under a uniform automorphism: fixed points are C-nodes");
    auto *dec_n = dec->add_option("--n", n, "sample a uniform tree of this size");
    dec->add_option("--tree", tree_code, "use this tree (parenthesis code) instead of sampling")->excludes(dec_n);
    add_seed(dec);
    dec->callback([&] {
        std::optional<std::size_t> size;
        if (dec_n->count() > 0) {
            size = n;
        }
        action = [&, size] { return decompose_report(size, tree_code, parse_seed(seed_text)); };
    });

    auto *exp = app.add_subcommand(
        "experiment", "Monte Carlo over uniform trees: mean and variance of |C_n|, the law of the maximal D-forest "
                      "size L_n, and the forest size at a random C-node");
    exp->add_option("--n", n, "tree size")->capture_default_str();
    exp->add_option("--trials", trials, "number of trials")->capture_default_str();
    exp->add_option("--workers", workers, "OpenMP threads; results do not depend on it")->capture_default_str();
    exp->add_option("--mode", mode, "histogram over one random C-node per trial, or all C-nodes")
        ->check(CLI::IsMember({"random", "all"}))
        ->capture_default_str();
    add_seed(exp);
    exp->callback([&] {
        action = [&] { return experiment_report(n, trials, parse_seed(seed_text), workers, mode); };
    });

    auto *table1 = app.add_subcommand(
        "table1", "Limit law of the D-forest size at a random C-node: P = d_m rho^m / D(rho) and its tail sum");
    table1->add_option("--max-m", max_m, "largest m")->capture_default_str();
    table1->add_option("--digits", digits, "decimal places")->default_val(4);
    table1->add_option("--order", order, "coefficients used for the tail sum")->capture_default_str();
    table1->callback([&] { action = [&] { return table1_report(max_m, digits, order); }; });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp &) {
        // help for the subcommand that was named, if any
        const auto subs = app.get_subcommands();
        out << (subs.empty() ? app.help() : subs.front()->help());
        return exit_ok;
    } catch (const CLI::ParseError &e) {
        write_error(err, "usage", exit_usage, e.what());
        return exit_usage;
    }

    Report report;
    try {
        report = action();
    } catch (const RangeError &e) {
        write_error(err, "range", exit_usage, e.what());
        return exit_usage;
    } catch (const ResourceError &e) {
        write_error(err, "resource", exit_resource, e.what());
        return exit_resource;
    } catch (const NumericError &e) {
        write_error(err, "numeric", exit_numeric, e.what());
        return exit_numeric;
    } catch (const ConsistencyError &e) {
        write_error(err, "consistency", exit_consistency, e.what());
        return exit_consistency;
    }

    const std::string text = format == "csv" ? report.csv : report.data.dump(2) + "\n";
    if (output.empty()) {
        out << text;
        return out ? exit_ok : exit_io;
    }
    std::ofstream file(output, std::ios::binary);
    file << text;
    file.close();
    if (!file) {
        write_error(err, "io", exit_io, "cannot write " + output);
        return exit_io;
    }
    return exit_ok;
}

} // namespace polya::cli
