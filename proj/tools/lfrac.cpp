// Command-line front end: evaluate the Mittag-Leffler-type function, solve
// problems described by a JSON file into CSV trajectories, and run the
// built-in verification suites.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "lfrac/problem_io.hpp"
#include "lfrac/special.hpp"
#include "lfrac/verify_suites.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNotConverged = 3;
constexpr int kExitSingular = 4;

struct TolFlags {
    double rel = 1e-12;
    double abs = 1e-14;
    int max_terms = 4096;

    void attach(CLI::App* cmd) {
        cmd->add_option("--tol-rel", rel, "relative tolerance")->capture_default_str();
        cmd->add_option("--tol-abs", abs, "absolute tolerance")->capture_default_str();
        cmd->add_option("--max-terms", max_terms, "series term budget")->capture_default_str();
    }
    lfrac::Tolerance tolerance() const {
        lfrac::Tolerance t;
        t.rel_tol = rel;
        t.abs_tol = abs;
        t.max_terms = max_terms;
        t.validate();
        return t;
    }
};

int run_ml_eval(double alpha, double s_re, double s_im, int k, const TolFlags& tf) {
    const lfrac::SumResult r = lfrac::ml_deriv_eval_report(
        lfrac::FracOrder(alpha), k, lfrac::cplx(s_re, s_im), tf.tolerance());
    std::printf("%.17g %.17g %d\n", r.value.real(), r.value.imag(), r.terms_used);
    return 0;
}

int run_solve(const std::string& path, const std::string& out_path, const TolFlags& tf,
              bool tol_given) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << "error: cannot open problem file '" << path << "'\n";
        return kExitUsage;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    lfrac::ProblemFile pf = lfrac::parse_problem_file(buf.str());
    if (tol_given) pf.tol = tf.tolerance();

    const lfrac::SolveReport rep = lfrac::solve_problem(pf);
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot open output file '" << out_path << "'\n";
        return kExitUsage;
    }
    lfrac::write_trajectory_csv(out, rep.trajectory);
    std::cout << rep.summary;
    std::cout << "wrote " << rep.trajectory.t.size() << " rows to " << out_path << "\n";
    return 0;
}

int run_verify(const std::string& suite, std::uint64_t seed) {
    const auto checks = lfrac::run_verify_suite(suite, seed);
    bool all = true;
    for (const auto& c : checks) {
        std::printf("%-4s %-45s %s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(),
                    c.detail.c_str());
        all = all && c.pass;
    }
    return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"L-fractional calculus toolkit"};
    app.require_subcommand(1);

    double alpha = 1.0, s_re = 0.0, s_im = 0.0;
    int k = 0;
    std::uint64_t seed = 0;
    std::string problem_path, out_path = "trajectory.csv", suite;
    TolFlags tf_ml, tf_solve;

    CLI::App* ml = app.add_subcommand("ml-eval", "evaluate ML^(k)(s) for the given order");
    ml->add_option("--alpha", alpha, "fractional order in (0,1]")->required();
    ml->add_option("--s-re", s_re, "Re(s)")->required();
    ml->add_option("--s-im", s_im, "Im(s)")->capture_default_str();
    ml->add_option("--k", k, "derivative order")->capture_default_str();
    tf_ml.attach(ml);

    CLI::App* solve = app.add_subcommand("solve", "solve a JSON problem file to CSV");
    solve->add_option("problem", problem_path, "problem JSON path")->required();
    solve->add_option("--out", out_path, "output CSV path")->capture_default_str();
    solve->add_option("--seed", seed, "random seed (reserved)")->capture_default_str();
    tf_solve.attach(solve);

    CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
    std::string names;
    for (const auto& n : lfrac::verify_suite_names()) names += n + " ";
    verify->add_option("suite", suite, "one of: " + names)->required();
    verify->add_option("--seed", seed, "random seed")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);  // prints the message
        return kExitUsage;
    }

    try {
        if (ml->parsed()) return run_ml_eval(alpha, s_re, s_im, k, tf_ml);
        if (solve->parsed()) {
            const bool tol_given = solve->count("--tol-rel") || solve->count("--tol-abs") ||
                                   solve->count("--max-terms");
            return run_solve(problem_path, out_path, tf_solve, tol_given);
        }
        if (verify->parsed()) return run_verify(suite, seed);
    } catch (const lfrac::NotConverged& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNotConverged;
    } catch (const lfrac::SingularWronskian& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSingular;
    } catch (const lfrac::AnsatzMismatch& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSingular;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
