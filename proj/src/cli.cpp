#include "cldiv/cli.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "cldiv/census.hpp"
#include "cldiv/frey.hpp"
#include "cldiv/shard.hpp"

namespace cldiv {

using nlohmann::ordered_json;

unsigned long long parse_count(std::string const & s)
{
    auto bad = [&] { return DomainError("cannot parse '" + s + "' as a count"); };
    if (s.empty())
        throw bad();
    auto pos = s.find_first_of("^eE");
    try {
        if (pos == std::string::npos) {
            std::size_t used = 0;
            auto v = std::stoull(s, &used);
            if (used != s.size() || s[0] == '-')
                throw bad();
            return v;
        }
        std::size_t u1 = 0, u2 = 0;
        auto base = std::stoull(s.substr(0, pos), &u1);
        auto exp = std::stoi(s.substr(pos + 1), &u2);
        if (u1 != pos || u2 != s.size() - pos - 1 || exp < 0)
            throw bad();
        // "b^e" is a power, "ke" is k * 10^e
        unsigned long long v = s[pos] == '^' ? 1 : base;
        unsigned long long b = s[pos] == '^' ? base : 10;
        for (int i = 0; i < exp; ++i) {
            if (v > ~0ULL / (b ? b : 1))
                throw SizeError("count '" + s + "' overflows 64 bits");
            v *= b;
        }
        return v;
    } catch (std::invalid_argument const &) {
        throw bad();
    } catch (std::out_of_range const &) {
        throw SizeError("count '" + s + "' overflows 64 bits");
    }
}

namespace {

struct Options {
    std::string D, X, grid, T, cap, points, dataset, out;
    std::string A = "1", B = "4";
    int g = 4;
    std::string t_policy = "default";
    std::string mode = "single";
    std::string sign = "plus";
    std::string curve;
    int which = 1;
    long long d = 0;
    std::string convention = "negative";
    unsigned shards = 1;
    std::string format = "csv";
    unsigned long long seed = 1;
    unsigned long long samples = 500;
    bool no_exact = false;
};

struct Result {
    int code = exit_ok;
    std::string text;
    // census writes the other format next to --out
    std::string companion;
    std::string companion_ext;
};

i64 parse_int(std::string const & s)
{
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(s, &used);
    } catch (std::exception const &) {
        throw DomainError("cannot parse '" + s + "' as an integer");
    }
    if (used != s.size())
        throw DomainError("cannot parse '" + s + "' as an integer");
    return v;
}

std::string quote(std::string const & s) { return "\"" + s + "\""; }

std::vector<u64> parse_grid(Options const & o)
{
    std::vector<u64> grid;
    if (!o.grid.empty()) {
        std::stringstream ss(o.grid);
        for (std::string part; std::getline(ss, part, ',');)
            grid.push_back(parse_count(part));
    } else if (!o.X.empty()) {
        grid.push_back(parse_count(o.X));
    } else {
        throw DomainError("need --X or --grid");
    }
    return grid;
}

ClassSign parse_sign(std::string const & s)
{
    if (s == "plus")
        return ClassSign::plus;
    if (s == "minus")
        return ClassSign::minus;
    throw DomainError("--sign must be plus or minus");
}

WitnessMode parse_mode(std::string const & s)
{
    if (s == "single")
        return WitnessMode::single;
    if (s == "all")
        return WitnessMode::all_triples;
    throw DomainError("--mode must be single or all");
}

TwistConvention parse_convention(std::string const & s)
{
    if (s == "negative")
        return TwistConvention::negative;
    if (s == "positive")
        return TwistConvention::positive;
    throw DomainError("--convention must be negative or positive");
}

std::string rows_to_csv(std::vector<std::string> const & header,
                        std::vector<std::vector<std::string>> const & rows)
{
    std::string out;
    auto line = [&](std::vector<std::string> const & cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i)
                out += ',';
            out += cells[i];
        }
        out += '\n';
    };
    line(header);
    for (auto const & r : rows)
        line(r);
    return out;
}

// ---------------------------------------------------------------- classgroup

Result cmd_classgroup(Options const & o, ordered_json const & echo)
{
    if (o.D.empty())
        throw DomainError("classgroup needs --D");
    u64 D = parse_count(o.D);
    u64 cap = o.cap.empty() ? 1'000'000'000'000ULL : parse_count(o.cap);
    if (D > cap)
        throw BudgetError("D = " + std::to_string(D) + " exceeds the cap " +
                          std::to_string(cap));
    auto s = class_group(discriminant_of(D));
    Result r;
    if (o.format == "json") {
        ordered_json j;
        j["config"] = echo;
        j["D"] = D;
        j["discriminant"] = s.disc.value;
        j["h"] = s.h;
        j["exponent"] = s.exponent;
        j["two_torsion"] = s.two_torsion;
        ordered_json forms = ordered_json::array();
        for (auto const & f : s.reduced_forms)
            forms.push_back({f.a, f.b, f.c});
        j["forms"] = forms;
        r.text = j.dump(2) + "\n";
    } else {
        std::string forms;
        for (auto const & f : s.reduced_forms)
            forms += (forms.empty() ? "" : ";") + to_string(f);
        r.text = rows_to_csv({"D", "discriminant", "h", "exponent", "two_torsion", "forms"},
                             {{std::to_string(D), std::to_string(s.disc.value),
                               std::to_string(s.h), std::to_string(s.exponent),
                               std::to_string(s.two_torsion), quote(forms)}});
    }
    return r;
}

// ------------------------------------------------------------------- special

Result cmd_special(Options const & o, ordered_json const & echo)
{
    i64 A = parse_int(o.A);
    u64 B = parse_count(o.B);
    if (B == 0)
        throw DomainError("--B must be positive");
    auto w = is_special(A, B, o.g);
    Result r;
    r.code = w ? exit_ok : exit_negative;
    if (o.format == "json") {
        ordered_json j;
        j["config"] = echo;
        j["A"] = A;
        j["B"] = B;
        j["g"] = o.g;
        j["special"] = w.has_value();
        if (w)
            j["witness"] = {{"m0", w->m0},
                            {"t0", w->t0},
                            {"m_rep", w->m_rep},
                            {"t_rep", w->t_rep}};
        r.text = j.dump(2) + "\n";
    } else {
        std::vector<std::string> row = {std::to_string(A), std::to_string(B),
                                        std::to_string(o.g), w ? "true" : "false"};
        if (w) {
            for (u64 v : {w->m0, w->t0, w->m_rep, w->t_rep})
                row.push_back(std::to_string(v));
        } else {
            row.insert(row.end(), 4, "");
        }
        r.text = rows_to_csv({"A", "B", "g", "special", "m0", "t0", "m_rep", "t_rep"},
                             {row});
    }
    return r;
}

// ----------------------------------------------------------------- construct

Result cmd_construct(Options const & o, ordered_json const & echo)
{
    i64 A = parse_int(o.A);
    u64 B = parse_count(o.B);
    if (o.X.empty())
        throw DomainError("construct needs --X");
    u64 X = parse_count(o.X);
    u64 cap = o.cap.empty() ? 1'000'000 : parse_count(o.cap);
    ClassSign sign = parse_sign(o.sign);
    int g = o.g;
    if (g < 4 || g % 2 != 0)
        throw DomainError("--g must be even and >= 4");
    auto which = g % 4 == 0 ? ConstructionCase::case2 : ConstructionCase::case1;
    auto lift = lift_progression(A, B, g, which, sign);
    i64 target = apply_sign(sign, lift.A_prime);
    unsigned shards = std::max(1u, o.shards);

    ordered_json j;
    j["config"] = echo;
    j["case"] = which == ConstructionCase::case1 ? 1 : 2;
    j["A_prime"] = lift.A_prime;
    j["B_prime"] = lift.B_prime;
    j["r"] = lift.r;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    auto check_cap = [&](std::size_t n) {
        if (n > cap)
            throw BudgetError("construct emitted " + std::to_string(n) +
                              " tuples, above the cap " + std::to_string(cap));
    };
    if (which == ConstructionCase::case2) {
        auto sw = is_special(target, lift.B_prime, g);
        if (!sw)
            throw InvariantError("lifted class is not special");
        j["witness"] = {{"m0", sw->m0}, {"t0", sw->t0}, {"modulus", sw->modulus}};
        auto segs = split_range(1, static_cast<u64>(iroot(X, g / 2)), shards);
        auto parts = run_sharded(segs.size(), shards, [&](std::size_t i) {
            return gen_case2(X, g, *sw, segs[i].lo, segs[i].hi);
        });
        header = {"m", "t", "D", "squarefree"};
        ordered_json tuples = ordered_json::array();
        for (auto const & part : parts)
            for (auto const & c : part) {
                bool sf = is_squarefree(c.D);
                rows.push_back({std::to_string(c.m), std::to_string(c.t),
                                std::to_string(c.D), sf ? "true" : "false"});
                tuples.push_back({{"m", c.m}, {"t", c.t}, {"D", c.D}, {"squarefree", sf}});
                check_cap(rows.size());
            }
        j["tuples"] = tuples;
    } else {
        u64 T = o.T.empty() ? default_T(X, g) : parse_count(o.T);
        if (T == 0)
            throw DomainError("--T must be positive");
        j["T"] = T;
        auto mode = parse_mode(o.mode);
        std::optional<TripleWitness> w;
        if (mode == WitnessMode::single) {
            w = lemma41_triple(target, lift.B_prime, g / 2);
            j["witness"] = {{"m1", w->m1}, {"n1", w->n1}, {"t1", w->t1},
                            {"modulus", w->modulus}};
        } else {
            j["witness"] = "all residue classes";
        }
        auto segs = split_range(T + 1, 2 * T, shards);
        auto parts = run_sharded(segs.size(), shards, [&](std::size_t i) {
            return w ? gen_case1(X, T, g, *w, segs[i].lo, segs[i].hi)
                     : gen_case1_class(X, T, g, target, lift.B_prime, segs[i].lo,
                                       segs[i].hi);
        });
        std::vector<Case1Tuple> all;
        for (auto const & part : parts)
            all.insert(all.end(), part.begin(), part.end());
        check_cap(all.size());
        header = {"m", "n", "t", "D", "squarefree"};
        ordered_json tuples = ordered_json::array();
        for (auto const & c : all) {
            bool sf = is_squarefree(c.D);
            rows.push_back({std::to_string(c.m), std::to_string(c.n), std::to_string(c.t),
                            std::to_string(c.D), sf ? "true" : "false"});
            tuples.push_back(
                    {{"m", c.m}, {"n", c.n}, {"t", c.t}, {"D", c.D}, {"squarefree", sf}});
        }
        auto split = n_split_diagnostic(X, T, g, all);
        auto fixed = [](double v) {
            std::ostringstream ss;
            ss.setf(std::ios::fixed);
            ss.precision(6);
            ss << v;
            return ss.str();
        };
        j["split"] = {{"total", split.total},         {"squarefree", split.squarefree},
                      {"small", split.small},         {"N1", split.N1},
                      {"N2", split.N2},               {"N3", split.N3},
                      {"Z", fixed(split.Z)},          {"MN_over_T", fixed(split.MN_over_T)},
                      {"phi_average", fixed(split.phi_average)},
                      {"phi_pairs", split.phi_pairs}};
        j["tuples"] = tuples;
    }
    Result r;
    r.text = o.format == "json" ? j.dump(2) + "\n" : rows_to_csv(header, rows);
    return r;
}

// -------------------------------------------------------------------- census

Result cmd_census(Options const & o, ordered_json const & echo)
{
    CensusConfig cfg;
    cfg.g = o.g;
    cfg.A = parse_int(o.A);
    cfg.B = parse_count(o.B);
    cfg.grid = parse_grid(o);
    if (!o.T.empty()) {
        cfg.t_policy = TPolicy::fixed;
        cfg.T = parse_count(o.T);
    } else if (o.t_policy == "max") {
        cfg.t_policy = TPolicy::max_T;
    } else if (o.t_policy != "default") {
        throw DomainError("--t-policy must be default or max");
    }
    cfg.construction.sign = parse_sign(o.sign);
    cfg.construction.mode = parse_mode(o.mode);
    cfg.construction.shards = std::max(1u, o.shards);
    if (!o.cap.empty())
        cfg.cap = parse_count(o.cap);
    cfg.with_exact = !o.no_exact;
    auto rep = census_report(cfg);
    Result r;
    auto csv = to_csv(rep);
    auto json = to_json(rep, echo.dump());
    bool as_json = o.format == "json";
    r.text = as_json ? json : csv;
    r.companion = as_json ? csv : json;
    r.companion_ext = as_json ? ".csv" : ".json";
    for (auto const & row : rep.rows)
        if (!row.chain_holds)
            r.code = exit_negative;
    return r;
}

// ----------------------------------------------------------------------- fit

Result cmd_fit(Options const & o, ordered_json const & echo)
{
    if (o.points.empty())
        throw DomainError("fit needs --points X:count,...");
    std::vector<std::pair<double, double>> pts;
    std::stringstream ss(o.points);
    for (std::string part; std::getline(ss, part, ',');) {
        auto colon = part.find(':');
        if (colon == std::string::npos)
            throw DomainError("point '" + part + "' is not X:count");
        pts.emplace_back(static_cast<double>(parse_count(part.substr(0, colon))),
                         static_cast<double>(parse_count(part.substr(colon + 1))));
    }
    double slope = fit_exponent(pts);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", slope);
    Result r;
    if (o.format == "json") {
        ordered_json j;
        j["config"] = echo;
        ordered_json arr = ordered_json::array();
        for (auto const & [x, c] : pts)
            arr.push_back({static_cast<u64>(x), static_cast<u64>(c)});
        j["points"] = arr;
        j["fitted_exponent"] = buf;
        r.text = j.dump(2) + "\n";
    } else {
        r.text = rows_to_csv({"points", "fitted_exponent"}, {{std::to_string(pts.size()), buf}});
    }
    return r;
}

// -------------------------------------------------------------------- screen

Result cmd_screen(Options const & o, ordered_json const & echo)
{
    if (o.curve.empty())
        throw DomainError("screen needs --curve");
    std::vector<CurveData> loaded;
    if (!o.dataset.empty())
        loaded = load_curves(o.dataset);
    auto const & curves = o.dataset.empty() ? builtin_curves() : loaded;
    CurveData const & c = find_curve(curves, o.curve);
    if (o.which < 1 || o.which > 3)
        throw DomainError("--case must be 1, 2 or 3");
    auto which = static_cast<CorollaryCase>(o.which);
    std::optional<i64> d;
    if (o.d != 0)
        d = o.d;
    if (which == CorollaryCase::case3 && !d)
        throw DomainError("case 3 needs --d");
    auto conv = parse_convention(o.convention);
    if (o.X.empty())
        throw DomainError("screen needs --X");
    u64 X = parse_count(o.X);
    u64 cap = o.cap.empty() ? default_census_cap : parse_count(o.cap);
    if (X > cap)
        throw BudgetError("X = " + std::to_string(X) + " exceeds the cap " +
                          std::to_string(cap));

    Rational expo = corollary_exponent(c.p);
    auto hyps = check_hypotheses(c, which, d);
    bool json = o.format == "json";
    std::string head;
    ordered_json j;
    j["config"] = echo;
    j["curve"] = c.label;
    j["p"] = c.p;
    j["conductor"] = format_factorization(c.conductor);
    j["sign"] = c.sign;
    j["corollary_exponent"] = to_string(expo);
    head += "# curve " + c.label + " p=" + std::to_string(c.p) +
            " N=" + format_factorization(c.conductor) + " sign=" + std::to_string(c.sign) +
            " case=" + std::to_string(o.which) + " corollary_exponent=" + to_string(expo) +
            "\n";
    ordered_json hj = ordered_json::array();
    for (auto const & h : hyps) {
        head += "# hypothesis " + h.name + ": " + (h.holds ? "holds" : "FAILS") +
                (h.detail.empty() ? "" : " (" + h.detail + ")") + "\n";
        hj.push_back({{"name", h.name}, {"holds", h.holds}, {"detail", h.detail}});
    }
    j["hypotheses"] = hj;

    Result r;
    ScreenResult res;
    try {
        res = screen_twists(c, X, which, d, conv, std::max(1u, o.shards));
    } catch (UnsatisfiableClass const & e) {
        head += "# unsatisfiable at prime " + std::to_string(e.prime()) + ": " + e.what() +
                "\n";
        j["unsatisfiable"] = {{"prime", e.prime()}, {"message", e.what()}};
        r.code = exit_negative;
        r.text = json ? j.dump(2) + "\n" : head;
        return r;
    }
    auto sample = sample_class(c, res.cls, o.samples, o.seed);
    u64 bad = sample.failures;
    for (auto const & w : res.witnesses)
        if (!w.check.ok())
            ++bad;
    head += "# class A=" + std::to_string(res.cls.A) + " B=" + std::to_string(res.cls.B) +
            " representative=" + std::to_string(res.cls.representative) + "\n";
    ordered_json conds = ordered_json::array();
    for (auto const & lc : res.cls.conditions) {
        head += "# condition D = " + std::to_string(lc.residue) + " (mod " +
                std::to_string(lc.modulus) + "): " + lc.reason + "\n";
        conds.push_back({{"prime", lc.prime},
                         {"modulus", lc.modulus},
                         {"residue", lc.residue},
                         {"reason", lc.reason}});
    }
    head += "# sampled " + std::to_string(sample.checked) + " members (seed " +
            std::to_string(o.seed) + "): " + std::to_string(sample.failures) +
            " failures\n";
    head += "# members " + std::to_string(res.members) + ", corollary witnesses " +
            std::to_string(res.witnesses.size()) + "\n";
    j["class"] = {{"A", res.cls.A},
                  {"B", res.cls.B},
                  {"representative", res.cls.representative},
                  {"conditions", conds}};
    j["sample"] = {{"checked", sample.checked}, {"failures", sample.failures}};
    j["members"] = res.members;
    std::vector<std::vector<std::string>> rows;
    ordered_json wj = ordered_json::array();
    for (auto const & w : res.witnesses) {
        rows.push_back({std::to_string(w.D), std::to_string(w.h), quote(to_string(w.certificate)),
                        std::to_string(res.cls.A), std::to_string(res.cls.B),
                        w.check.admissible ? "true" : "false", std::to_string(w.check.sign)});
        wj.push_back({{"D", w.D},
                      {"h", w.h},
                      {"certificate", to_string(w.certificate)},
                      {"A", res.cls.A},
                      {"B", res.cls.B},
                      {"admissible", w.check.admissible},
                      {"twist_sign", w.check.sign}});
    }
    j["witnesses"] = wj;
    if (bad > 0)
        r.code = exit_negative;
    r.text = json ? j.dump(2) + "\n"
                  : head + rows_to_csv({"D", "h", "certificate", "A", "B", "admissible",
                                        "twist_sign"},
                                       rows);
    return r;
}

}  // namespace

int run(std::vector<std::string> const & args, std::ostream & out, std::ostream & err)
{
    CLI::App app{"Class groups of imaginary quadratic fields with an element of order g"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App * sub) {
        sub->add_option("--format", o.format, "csv or json")
                ->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--out", o.out, "write the report to this file");
        sub->add_option("--cap", o.cap, "work cap");
    };
    auto klass = [&](CLI::App * sub) {
        sub->add_option("--A", o.A, "residue A");
        sub->add_option("--B", o.B, "modulus B");
        sub->add_option("--g", o.g, "target order g");
    };

    auto * cg = app.add_subcommand("classgroup", "class group of Q(sqrt(-D))");
    cg->add_option("--D", o.D, "square-free D > 0")->required();
    common(cg);

    auto * sp = app.add_subcommand("special", "decide whether (A, B) is special for g");
    klass(sp);
    common(sp);

    auto * co = app.add_subcommand("construct", "emit construction tuples");
    klass(co);
    co->add_option("--X", o.X, "bound X")->required();
    co->add_option("--T", o.T, "box parameter T (case 1)");
    co->add_option("--mode", o.mode, "single or all (case-1 witnesses)");
    co->add_option("--sign", o.sign, "plus or minus");
    co->add_option("--shards", o.shards, "worker threads")->check(CLI::PositiveNumber);
    common(co);

    auto * ce = app.add_subcommand("census", "exact and construction counts over a grid");
    klass(ce);
    ce->add_option("--X", o.X, "single bound");
    ce->add_option("--grid", o.grid, "comma-separated ascending bounds");
    ce->add_option("--T", o.T, "fixed T for case 1");
    ce->add_option("--t-policy", o.t_policy, "default or max (case 1)");
    ce->add_option("--mode", o.mode, "single or all (case-1 witnesses)");
    ce->add_option("--sign", o.sign, "plus or minus");
    ce->add_option("--shards", o.shards, "worker threads")->check(CLI::PositiveNumber);
    ce->add_flag("--no-exact", o.no_exact, "skip the exact census");
    common(ce);

    auto * fi = app.add_subcommand("fit", "least-squares growth exponent");
    fi->add_option("--points", o.points, "X:count,X:count,...")->required();
    common(fi);

    auto * sc = app.add_subcommand("screen", "screen quadratic twists of a curve");
    sc->add_option("--curve", o.curve, "curve label")->required();
    sc->add_option("--dataset", o.dataset, "curve dataset file (default: built-in)");
    sc->add_option("--X", o.X, "bound X")->required();
    sc->add_option("--case", o.which, "1, 2 or 3");
    sc->add_option("--d", o.d, "twist parameter for case 3");
    sc->add_option("--convention", o.convention, "negative or positive");
    sc->add_option("--seed", o.seed, "seed of the sampling validator");
    sc->add_option("--samples", o.samples, "number of sampled class members");
    sc->add_option("--shards", o.shards, "worker threads")->check(CLI::PositiveNumber);
    common(sc);

    std::vector<std::string> argv_store = {"cldiv"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char const *> argv;
    for (auto const & s : argv_store)
        argv.push_back(s.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (CLI::CallForHelp const &) {
        out << app.help();
        return exit_ok;
    } catch (CLI::ParseError const & e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }

    // everything except --shards and --out goes into the echo
    ordered_json echo;
    CLI::App * sub = app.get_subcommands().front();
    echo["subcommand"] = sub->get_name();
    for (auto const * opt : sub->get_options()) {
        std::string name = opt->get_name(false, true);
        if (name.rfind("--", 0) != 0 || name == "--shards" || name == "--out" ||
            name == "--help" || opt->count() == 0)
            continue;
        auto res = opt->results();
        echo[name.substr(2)] = res.empty() ? "true" : res.back();
    }

    Result r;
    try {
        std::string const & name = sub->get_name();
        if (name == "classgroup")
            r = cmd_classgroup(o, echo);
        else if (name == "special")
            r = cmd_special(o, echo);
        else if (name == "construct")
            r = cmd_construct(o, echo);
        else if (name == "census")
            r = cmd_census(o, echo);
        else if (name == "fit")
            r = cmd_fit(o, echo);
        else
            r = cmd_screen(o, echo);
    } catch (BudgetError const & e) {
        err << "budget: " << e.what() << "\n";
        return exit_budget;
    } catch (SizeError const & e) {
        err << "budget: " << e.what() << "\n";
        return exit_budget;
    } catch (SearchExhausted const & e) {
        err << "no result: " << e.what() << "\n";
        return exit_negative;
    } catch (DomainError const & e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (InvariantError const & e) {
        err << "internal error: " << e.what() << "\n";
        return exit_usage;
    }

    if (o.out.empty()) {
        out << r.text;
    } else {
        std::ofstream f(o.out, std::ios::binary);
        if (!f) {
            err << "error: cannot write " << o.out << "\n";
            return exit_usage;
        }
        f << r.text;
        if (!r.companion.empty()) {
            auto path = std::filesystem::path(o.out).replace_extension(r.companion_ext);
            if (path != std::filesystem::path(o.out)) {
                std::ofstream g(path, std::ios::binary);
                if (!g) {
                    err << "error: cannot write " << path.string() << "\n";
                    return exit_usage;
                }
                g << r.companion;
            }
        }
    }
    return r.code;
}

}  // namespace cldiv
