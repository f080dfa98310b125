#include "lfrac/problem_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "lfrac/operators.hpp"
#include "lfrac/special.hpp"

namespace lfrac {

using nlohmann::json;

namespace {

cplx parse_cplx(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw std::invalid_argument(where + ": complex numbers must be [re, im] arrays");
    return {j[0].get<double>(), j[1].get<double>()};
}

json dump_cplx(cplx z) { return json::array({z.real(), z.imag()}); }

std::vector<cplx> parse_cplx_vector(const json& j, const std::string& where) {
    if (!j.is_array()) throw std::invalid_argument(where + ": expected an array");
    std::vector<cplx> out;
    out.reserve(j.size());
    for (size_t i = 0; i < j.size(); ++i)
        out.push_back(parse_cplx(j[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

json dump_cplx_vector(const std::vector<cplx>& v) {
    json j = json::array();
    for (const auto& z : v) j.push_back(dump_cplx(z));
    return j;
}

PowerSeries parse_series(const json& j, const std::string& where) {
    auto v = parse_cplx_vector(j, where);
    if (v.empty()) throw std::invalid_argument(where + ": series needs >= 1 coefficient");
    return PowerSeries(std::move(v));
}

ComplexMatrix parse_matrix(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) throw std::invalid_argument(where + ": expected a matrix");
    const int d = static_cast<int>(j.size());
    ComplexMatrix m(d);
    for (int i = 0; i < d; ++i) {
        if (!j[static_cast<size_t>(i)].is_array() ||
            static_cast<int>(j[static_cast<size_t>(i)].size()) != d)
            throw std::invalid_argument(where + ": matrix must be square");
        for (int k = 0; k < d; ++k)
            m(i, k) = parse_cplx(j[static_cast<size_t>(i)][static_cast<size_t>(k)],
                                 where + "[" + std::to_string(i) + "][" + std::to_string(k) + "]");
    }
    for (const auto& z : m.data())
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw std::invalid_argument(where + ": matrix entries must be finite");
    return m;
}

json dump_matrix(const ComplexMatrix& m) {
    json rows = json::array();
    for (int i = 0; i < m.dim(); ++i) {
        json row = json::array();
        for (int k = 0; k < m.dim(); ++k) row.push_back(dump_cplx(m(i, k)));
        rows.push_back(row);
    }
    return rows;
}

SourceTerm parse_source(const json& j, int dim, const std::string& where) {
    const std::string type = j.value("type", "zero");
    if (type == "zero") return SourceTerm::zero();
    if (type == "frac_power") {
        if (!j.contains("terms")) throw std::invalid_argument(where + ": frac_power needs terms");
        std::vector<FracPowerTerm> terms;
        for (const auto& t : j.at("terms")) {
            FracPowerTerm ft;
            ft.ell = parse_cplx(t.at("l"), where + ".terms.l");
            ft.delta = t.at("delta").get<double>();
            terms.push_back(ft);
        }
        if (static_cast<int>(terms.size()) != dim)
            throw std::invalid_argument(where + ": frac_power needs one term per component");
        return SourceTerm::frac_power(std::move(terms));
    }
    if (type == "series") {
        std::vector<PowerSeries> comps;
        for (const auto& c : j.at("components")) comps.push_back(parse_series(c, where + ".components"));
        if (static_cast<int>(comps.size()) != dim)
            throw std::invalid_argument(where + ": series source needs one component per dimension");
        return SourceTerm::series(std::move(comps));
    }
    throw std::invalid_argument(where + ": unknown source type '" + type + "'");
}

json dump_source(const SourceTerm& s) {
    json j;
    switch (s.kind()) {
        case SourceTerm::Kind::Zero: j["type"] = "zero"; break;
        case SourceTerm::Kind::FracPower: {
            j["type"] = "frac_power";
            json terms = json::array();
            for (const auto& t : s.frac_terms())
                terms.push_back(json{{"l", dump_cplx(t.ell)}, {"delta", t.delta}});
            j["terms"] = terms;
            break;
        }
        case SourceTerm::Kind::Series: {
            j["type"] = "series";
            json comps = json::array();
            for (const auto& c : s.series_components()) comps.push_back(dump_cplx_vector(c.coeffs()));
            j["components"] = comps;
            break;
        }
    }
    return j;
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::vector<double> ProblemFile::grid_points() const {
    std::vector<double> t(static_cast<size_t>(grid.n_points));
    if (grid.n_points == 1) {
        t[0] = grid.t_start;
    } else {
        const double h = (grid.t_end - grid.t_start) / (grid.n_points - 1);
        for (int i = 0; i < grid.n_points; ++i) t[static_cast<size_t>(i)] = grid.t_start + i * h;
    }
    return t;
}

ProblemFile parse_problem_file(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("problem file: JSON parse error: ") + e.what());
    }

    ProblemFile pf;
    if (!j.contains("alpha") || !j.at("alpha").is_number())
        throw std::invalid_argument("problem file: missing numeric 'alpha'");
    pf.alpha = j.at("alpha").get<double>();
    FracOrder check_alpha(pf.alpha);  // validates (0, 1]

    pf.kind = j.value("kind", "");
    if (j.contains("grid")) {
        const auto& g = j.at("grid");
        pf.grid.t_start = g.value("t_start", 0.0);
        pf.grid.t_end = g.value("t_end", 1.0);
        pf.grid.n_points = g.value("n_points", 101);
    }
    if (pf.grid.t_start < 0.0 || pf.grid.t_start > pf.grid.t_end || pf.grid.n_points < 1)
        throw std::invalid_argument("problem file: grid requires 0 <= t_start <= t_end, n_points >= 1");
    if (pf.grid.n_points > 1 && !(pf.grid.t_end > pf.grid.t_start))
        throw std::invalid_argument("problem file: n_points > 1 needs t_end > t_start");

    if (j.contains("tol")) {
        const auto& t = j.at("tol");
        pf.tol.rel_tol = t.value("rel", pf.tol.rel_tol);
        pf.tol.abs_tol = t.value("abs", pf.tol.abs_tol);
        pf.tol.max_terms = t.value("max_terms", pf.tol.max_terms);
        pf.tol.validate();
    }

    if (pf.kind == "ml_eval") {
        ProblemFile::MlEvalPayload p;
        const auto& body = j.at("ml_eval");
        p.k = body.value("k", 0);
        if (p.k < 0) throw std::invalid_argument("ml_eval: k must be >= 0");
        if (body.contains("lambda")) p.lambda = parse_cplx(body.at("lambda"), "ml_eval.lambda");
        pf.ml_eval = p;
    } else if (pf.kind == "operator") {
        ProblemFile::OperatorPayload p;
        const auto& body = j.at("operator");
        p.op = body.value("op", "lj");
        if (p.op != "lj" && p.op != "ld")
            throw std::invalid_argument("operator: op must be 'lj' or 'ld'");
        p.series = parse_series(body.at("series"), "operator.series");
        p.n_nodes = body.value("n_nodes", 40);
        if (p.n_nodes < 1) throw std::invalid_argument("operator: n_nodes must be >= 1");
        pf.op = p;
    } else if (pf.kind == "linear_system") {
        ProblemFile::LinearSystemPayload p;
        const auto& body = j.at("linear_system");
        p.matrix = parse_matrix(body.at("matrix"), "linear_system.matrix");
        p.x0 = parse_cplx_vector(body.at("x0"), "linear_system.x0");
        if (static_cast<int>(p.x0.size()) != p.matrix.dim())
            throw std::invalid_argument("linear_system: |x0| must equal matrix dimension");
        p.source = body.contains("source")
                       ? parse_source(body.at("source"), p.matrix.dim(), "linear_system.source")
                       : SourceTerm::zero();
        pf.linear_system = std::move(p);
    } else if (pf.kind == "sequential") {
        ProblemFile::SequentialPayload p;
        const auto& body = j.at("sequential");
        p.a = parse_cplx_vector(body.at("a"), "sequential.a");
        p.init = parse_cplx_vector(body.at("init"), "sequential.init");
        if (p.a.empty() || p.a.size() != p.init.size())
            throw std::invalid_argument("sequential: need m >= 1 coefficients and m initial values");
        if (body.contains("forcing"))
            for (const auto& f : body.at("forcing")) {
                ForcingAtom fa;
                fa.beta = parse_cplx(f.at("beta"), "sequential.forcing.beta");
                fa.mu = parse_cplx(f.at("mu"), "sequential.forcing.mu");
                fa.j = f.value("j", 0);
                if (fa.j < 0) throw std::invalid_argument("sequential: forcing j must be >= 0");
                p.forcing.push_back(fa);
            }
        pf.sequential = std::move(p);
    } else if (pf.kind == "analytic2") {
        ProblemFile::Analytic2Payload p;
        const auto& body = j.at("analytic2");
        if (body.contains("preset")) {
            p.preset = body.at("preset").get<std::string>();
            if (*p.preset != "airy" && *p.preset != "hermite")
                throw std::invalid_argument("analytic2: preset must be 'airy' or 'hermite'");
            if (body.contains("a")) p.a = parse_cplx(body.at("a"), "analytic2.a");
            if (body.contains("eigen_index")) p.eigen_index = body.at("eigen_index").get<int>();
            if (!p.a && !p.eigen_index)
                throw std::invalid_argument("analytic2: preset needs 'a' or 'eigen_index'");
        } else {
            p.p = parse_series(body.at("p"), "analytic2.p");
            p.q = parse_series(body.at("q"), "analytic2.q");
            p.c = body.contains("c") ? parse_series(body.at("c"), "analytic2.c") : PowerSeries();
        }
        const auto init = parse_cplx_vector(body.at("init"), "analytic2.init");
        if (init.size() != 2) throw std::invalid_argument("analytic2: init must be [x0, x01]");
        p.x0 = init[0];
        p.x01 = init[1];
        pf.analytic2 = std::move(p);
    } else {
        throw std::invalid_argument("problem file: unknown kind '" + pf.kind + "'");
    }
    return pf;
}

std::string serialize_problem_file(const ProblemFile& pf) {
    json j;
    j["alpha"] = pf.alpha;
    j["kind"] = pf.kind;
    j["grid"] = {{"t_start", pf.grid.t_start}, {"t_end", pf.grid.t_end}, {"n_points", pf.grid.n_points}};
    j["tol"] = {{"rel", pf.tol.rel_tol}, {"abs", pf.tol.abs_tol}, {"max_terms", pf.tol.max_terms}};
    if (pf.ml_eval)
        j["ml_eval"] = {{"k", pf.ml_eval->k}, {"lambda", dump_cplx(pf.ml_eval->lambda)}};
    if (pf.op)
        j["operator"] = {{"op", pf.op->op}, {"series", dump_cplx_vector(pf.op->series.coeffs())},
                         {"n_nodes", pf.op->n_nodes}};
    if (pf.linear_system)
        j["linear_system"] = {{"matrix", dump_matrix(pf.linear_system->matrix)},
                              {"x0", dump_cplx_vector(pf.linear_system->x0)},
                              {"source", dump_source(pf.linear_system->source)}};
    if (pf.sequential) {
        json forcing = json::array();
        for (const auto& f : pf.sequential->forcing)
            forcing.push_back(json{{"beta", dump_cplx(f.beta)}, {"mu", dump_cplx(f.mu)}, {"j", f.j}});
        j["sequential"] = {{"a", dump_cplx_vector(pf.sequential->a)},
                           {"init", dump_cplx_vector(pf.sequential->init)},
                           {"forcing", forcing}};
    }
    if (pf.analytic2) {
        json body;
        if (pf.analytic2->preset) {
            body["preset"] = *pf.analytic2->preset;
            if (pf.analytic2->a) body["a"] = dump_cplx(*pf.analytic2->a);
            if (pf.analytic2->eigen_index) body["eigen_index"] = *pf.analytic2->eigen_index;
        } else {
            body["p"] = dump_cplx_vector(pf.analytic2->p.coeffs());
            body["q"] = dump_cplx_vector(pf.analytic2->q.coeffs());
            body["c"] = dump_cplx_vector(pf.analytic2->c.coeffs());
        }
        body["init"] = json::array({dump_cplx(pf.analytic2->x0), dump_cplx(pf.analytic2->x01)});
        j["analytic2"] = body;
    }
    return j.dump(2);
}

namespace {

SolveReport solve_ml_eval(const ProblemFile& pf) {
    const FracOrder order(pf.alpha);
    const auto& p = *pf.ml_eval;
    SolveReport rep;
    rep.trajectory.n_components = 1;
    double max_err = 0.0;
    for (double t : pf.grid_points()) {
        const SumResult r = ml_deriv_eval_report(order, p.k, p.lambda * t, pf.tol);
        rep.trajectory.t.push_back(t);
        rep.trajectory.values.push_back({r.value});
        rep.trajectory.err_est.push_back(r.last_term_mag);
        max_err = std::max(max_err, r.last_term_mag);
    }
    std::ostringstream os;
    os << "kind=ml_eval k=" << p.k << " max_term_err=" << max_err << "\n";
    rep.summary = os.str();
    return rep;
}

SolveReport solve_operator(const ProblemFile& pf) {
    const FracOrder order(pf.alpha);
    const auto& p = *pf.op;
    SolveReport rep;
    rep.trajectory.n_components = 1;

    auto horner = [](const PowerSeries& s, double t) {
        cplx acc(0.0);
        for (int i = s.truncation_order(); i >= 0; --i) acc = acc * t + s[i];
        return acc;
    };

    if (p.op == "lj") {
        const QuadratureRule rule = jacobi_rule(order, p.n_nodes);
        Func1D y = [&](double t) { return horner(p.series, t); };
        for (double t : pf.grid_points()) {
            rep.trajectory.t.push_back(t);
            rep.trajectory.values.push_back({lj_apply(y, order, t, rule)});
            rep.trajectory.err_est.push_back(0.0);
        }
    } else {
        // Ordinary derivative of the payload series; the operator needs x'.
        std::vector<cplx> dc(static_cast<size_t>(std::max(p.series.truncation_order(), 1)));
        for (int n = 1; n <= p.series.truncation_order(); ++n)
            dc[static_cast<size_t>(n - 1)] = static_cast<double>(n) * p.series[n];
        const PowerSeries xprime{std::move(dc)};
        Func1D fx = [&](double t) { return horner(xprime, t); };
        const QuadratureRule rule =
            pf.alpha < 1.0 ? ld_rule(order, p.n_nodes) : QuadratureRule{};
        for (double t : pf.grid_points()) {
            rep.trajectory.t.push_back(t);
            rep.trajectory.values.push_back({ld_apply(fx, order, t, rule)});
            rep.trajectory.err_est.push_back(0.0);
        }
    }
    rep.summary = "kind=operator op=" + p.op + "\n";
    return rep;
}

SolveReport solve_linear(const ProblemFile& pf) {
    const FracOrder order(pf.alpha);
    const auto& p = *pf.linear_system;
    LinearSystemProblem problem{order, p.matrix, p.source, p.x0,
                                std::max(pf.grid.t_end, 1e-6)};
    const SeriesSolution sol = solve_linear_system(problem, pf.tol);
    SolveReport rep;
    rep.trajectory.n_components = problem.dim();
    for (double t : pf.grid_points()) {
        auto v = sol.eval(t, pf.tol);
        rep.trajectory.t.push_back(t);
        rep.trajectory.values.push_back(std::move(v.x));
        rep.trajectory.err_est.push_back(v.err_est);
    }
    std::ostringstream os;
    os << "kind=linear_system dim=" << problem.dim() << " n_terms="
       << sol.components[0].truncation_order() << " max_residual=" << residual(problem, sol)
       << "\n";
    rep.summary = os.str();
    return rep;
}

SolveReport solve_sequential_kind(const ProblemFile& pf) {
    const FracOrder order(pf.alpha);
    const auto& p = *pf.sequential;
    SequentialProblem problem{order, p.a, p.init, p.forcing};
    const SymbolicSolution sol = solve_sequential(problem);

    SolveReport rep;
    rep.trajectory.n_components = 1;
    for (double t : pf.grid_points()) {
        cplx v(0.0);
        double err = 0.0;
        for (const auto& term : sol.terms) {
            const SumResult r = ml_deriv_eval_report(order, term.k, term.lambda * t, pf.tol);
            const double tk = std::pow(t, term.k);
            v += term.coeff * tk * r.value;
            err += std::abs(term.coeff) * tk * r.last_term_mag;
        }
        rep.trajectory.t.push_back(t);
        rep.trajectory.values.push_back({v});
        rep.trajectory.err_est.push_back(err);
    }

    std::ostringstream os;
    os << "kind=sequential m=" << problem.order_m()
       << " max_residual=" << sequential_residual(problem, sol, 40) << "\n";
    for (const auto& term : sol.terms)
        os << "  (" << fmt_double(term.coeff.real()) << "," << fmt_double(term.coeff.imag())
           << ") * t^" << term.k << " * ML^(" << term.k << ")((" << fmt_double(term.lambda.real())
           << "," << fmt_double(term.lambda.imag()) << ") t)\n";
    rep.summary = os.str();
    return rep;
}

SolveReport solve_analytic2_kind(const ProblemFile& pf) {
    const FracOrder order(pf.alpha);
    const auto& p = *pf.analytic2;
    const double T = std::max(pf.grid.t_end, 1e-6);

    auto build = [&](int n_terms) {
        Analytic2Problem problem{order, PowerSeries::zero(n_terms), PowerSeries::zero(n_terms),
                                 PowerSeries::zero(n_terms), p.x0, p.x01, T};
        if (p.preset) {
            cplx a = p.a ? *p.a
                         : hermite_eigenvalue(order, p.eigen_index ? *p.eigen_index : 1);
            if (*p.preset == "airy") {
                problem.q = PowerSeries::monomial(a, 1, n_terms);
            } else {
                problem.p = PowerSeries::monomial(cplx(-2.0), 1, n_terms);
                problem.q = PowerSeries::monomial(a, 0, n_terms);
            }
        } else {
            problem.p = p.p.truncated(std::max(n_terms, p.p.truncation_order()));
            problem.q = p.q.truncated(std::max(n_terms, p.q.truncation_order()));
            problem.c = p.c.truncated(std::max(n_terms, p.c.truncation_order()));
        }
        return problem;
    };

    // Grow the truncation until evaluation converges at the grid end.
    int n_terms = 64;
    PowerSeries x = PowerSeries::zero(0);
    Analytic2Problem problem = build(n_terms);
    for (;;) {
        x = solve_analytic2(problem, n_terms);
        try {
            (void)eval(x, T, pf.tol);
            break;
        } catch (const NotConverged&) {
            if (n_terms >= pf.tol.max_terms) throw;
            n_terms = std::min(2 * n_terms, pf.tol.max_terms);
            problem = build(n_terms);
        }
    }

    SolveReport rep;
    rep.trajectory.n_components = 1;
    for (double t : pf.grid_points()) {
        const EvalResult r = eval(x, t, pf.tol);
        rep.trajectory.t.push_back(t);
        rep.trajectory.values.push_back({r.value});
        rep.trajectory.err_est.push_back(r.err_est);
    }
    std::ostringstream os;
    os << "kind=analytic2 n_terms=" << n_terms
       << " max_residual=" << analytic2_residual(problem, x) << "\n";
    rep.summary = os.str();
    return rep;
}

}  // namespace

SolveReport solve_problem(const ProblemFile& pf) {
    if (pf.ml_eval) return solve_ml_eval(pf);
    if (pf.op) return solve_operator(pf);
    if (pf.linear_system) return solve_linear(pf);
    if (pf.sequential) return solve_sequential_kind(pf);
    if (pf.analytic2) return solve_analytic2_kind(pf);
    throw std::invalid_argument("solve_problem: no payload present");
}

void write_trajectory_csv(std::ostream& os, const Trajectory& tr) {
    os << "t";
    for (int i = 0; i < tr.n_components; ++i) os << ",comp" << i << "_re,comp" << i << "_im";
    os << ",err_est\n";
    for (size_t r = 0; r < tr.t.size(); ++r) {
        os << fmt_double(tr.t[r]);
        for (int i = 0; i < tr.n_components; ++i) {
            const cplx v = tr.values[r][static_cast<size_t>(i)];
            os << "," << fmt_double(v.real()) << "," << fmt_double(v.imag());
        }
        os << "," << fmt_double(tr.err_est[r]) << "\n";
    }
}

}  // namespace lfrac
