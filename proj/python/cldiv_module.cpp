#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cldiv/census.hpp"
#include "cldiv/cli.hpp"
#include "cldiv/frey.hpp"

namespace py = pybind11;
using namespace cldiv;

namespace {

ClassSign sign_of(std::string const & s)
{
    if (s == "plus")
        return ClassSign::plus;
    if (s == "minus")
        return ClassSign::minus;
    throw DomainError("sign must be 'plus' or 'minus'");
}

py::dict class_group_py(u64 D)
{
    auto s = class_group(discriminant_of(D));
    py::list forms;
    for (auto const & f : s.reduced_forms)
        forms.append(py::make_tuple(f.a, f.b, f.c));
    py::dict d;
    d["discriminant"] = s.disc.value;
    d["h"] = s.h;
    d["exponent"] = s.exponent;
    d["two_torsion"] = s.two_torsion;
    d["forms"] = forms;
    return d;
}

py::object is_special_py(i64 A, u64 B, int g)
{
    auto w = is_special(A, B, g);
    if (!w)
        return py::none();
    py::dict d;
    d["m0"] = w->m0;
    d["t0"] = w->t0;
    d["modulus"] = w->modulus;
    d["m_rep"] = w->m_rep;
    d["t_rep"] = w->t_rep;
    return d;
}

py::dict triple_py(i64 a, u64 b, int g1)
{
    auto w = lemma41_triple(a, b, g1);
    py::dict d;
    d["m1"] = w.m1;
    d["n1"] = w.n1;
    d["t1"] = w.t1;
    d["modulus"] = w.modulus;
    return d;
}

py::tuple lift_py(i64 A, u64 B, int g, std::string const & sign)
{
    auto which = g % 4 == 0 ? ConstructionCase::case2 : ConstructionCase::case1;
    auto l = lift_progression(A, B, g, which, sign_of(sign));
    return py::make_tuple(l.A_prime, l.B_prime, l.r);
}

std::vector<std::tuple<u64, u64, u64>> case2_py(i64 A, u64 B, int g, u64 X,
                                                std::string const & sign)
{
    auto s = sign_of(sign);
    auto l = lift_progression(A, B, g, ConstructionCase::case2, s);
    auto w = is_special(apply_sign(s, l.A_prime), l.B_prime, g);
    if (!w)
        throw InvariantError("lifted class is not special");
    std::vector<std::tuple<u64, u64, u64>> out;
    for (auto const & c : gen_case2(X, g, *w))
        out.emplace_back(c.m, c.t, c.D);
    return out;
}

std::vector<std::tuple<u64, u64, u64, u64>> case1_py(i64 A, u64 B, int g, u64 X, u64 T,
                                                     bool all, std::string const & sign)
{
    auto s = sign_of(sign);
    auto l = lift_progression(A, B, g, ConstructionCase::case1, s);
    i64 target = apply_sign(s, l.A_prime);
    if (T == 0)
        T = default_T(X, g);
    auto tuples = all ? gen_case1_class(X, T, g, target, l.B_prime)
                      : gen_case1(X, T, g, lemma41_triple(target, l.B_prime, g / 2));
    std::vector<std::tuple<u64, u64, u64, u64>> out;
    for (auto const & c : tuples)
        out.emplace_back(c.m, c.n, c.t, c.D);
    return out;
}

std::string census_py(i64 A, u64 B, int g, std::vector<u64> grid, std::string const & mode,
                      u64 T, unsigned shards, std::string const & format)
{
    CensusConfig cfg;
    cfg.g = g;
    cfg.A = A;
    cfg.B = B;
    cfg.grid = std::move(grid);
    if (T != 0) {
        cfg.t_policy = TPolicy::fixed;
        cfg.T = T;
    }
    cfg.construction.mode = mode == "all" ? WitnessMode::all_triples : WitnessMode::single;
    cfg.construction.shards = shards;
    auto rep = census_report(cfg);
    return format == "json" ? to_json(rep) : to_csv(rep);
}

py::dict screen_py(std::string const & label, u64 X, int which, std::optional<i64> d)
{
    auto const & c = find_curve(builtin_curves(), label);
    auto res = screen_twists(c, X, static_cast<CorollaryCase>(which), d);
    py::list ws;
    for (auto const & w : res.witnesses)
        ws.append(py::make_tuple(w.D, w.h, to_string(w.certificate)));
    py::dict out;
    out["A"] = res.cls.A;
    out["B"] = res.cls.B;
    out["members"] = res.members;
    out["witnesses"] = ws;
    return out;
}

py::tuple run_py(std::vector<std::string> const & args)
{
    std::ostringstream out, err;
    int code = run(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_cldiv, m)
{
    m.doc() = "Class groups of imaginary quadratic fields with an element of order g.";

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<SearchExhausted>(m, "SearchExhausted", PyExc_LookupError);
    py::register_exception<BudgetError>(m, "BudgetError", PyExc_RuntimeError);

    m.def("class_group", &class_group_py, py::arg("D"),
          "Class group of Q(sqrt(-D)) for square-free D.");
    m.def(
            "has_element_of_order",
            [](u64 D, u64 g) { return has_element_of_order(discriminant_of(D), g); },
            py::arg("D"), py::arg("g"));
    m.def("is_special", &is_special_py, py::arg("A"), py::arg("B"), py::arg("g"),
          "Smallest special residue pair, or None.");
    m.def("triple_witness", &triple_py, py::arg("a"), py::arg("b"), py::arg("g1"));
    m.def("lift_progression", &lift_py, py::arg("A"), py::arg("B"), py::arg("g"),
          py::arg("sign") = "plus", "Returns (A', B', r).");
    m.def("construct_case1", &case1_py, py::arg("A"), py::arg("B"), py::arg("g"),
          py::arg("X"), py::arg("T") = 0, py::arg("all_triples") = false,
          py::arg("sign") = "plus", py::call_guard<py::gil_scoped_release>());
    m.def("construct_case2", &case2_py, py::arg("A"), py::arg("B"), py::arg("g"),
          py::arg("X"), py::arg("sign") = "plus", py::call_guard<py::gil_scoped_release>());
    m.def(
            "census_exact",
            [](u64 X, i64 A, u64 B, int g, unsigned shards) {
                return census_exact(X, A, B, g, shards);
            },
            py::arg("X"), py::arg("A"), py::arg("B"), py::arg("g"), py::arg("shards") = 1,
            py::call_guard<py::gil_scoped_release>());
    m.def("census", &census_py, py::arg("A"), py::arg("B"), py::arg("g"), py::arg("grid"),
          py::arg("mode") = "single", py::arg("T") = 0, py::arg("shards") = 1,
          py::arg("format") = "csv", py::call_guard<py::gil_scoped_release>());
    m.def("fit_exponent", &fit_exponent, py::arg("points"));
    m.def("screen", &screen_py, py::arg("curve"), py::arg("X"), py::arg("case") = 1,
          py::arg("d") = py::none());
    m.def("run", &run_py, py::arg("args"),
          "Runs the command-line front end; returns (exit code, stdout, stderr).");
}
