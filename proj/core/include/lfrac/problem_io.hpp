#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lfrac/analytic2.hpp"
#include "lfrac/linsolve.hpp"
#include "lfrac/sequential.hpp"
#include "lfrac/types.hpp"

namespace lfrac {

/// Uniform evaluation grid; t_start >= 0, t_start <= t_end, n_points >= 1.
struct GridSpec {
    double t_start = 0.0;
    double t_end = 1.0;
    int n_points = 101;
};

/// Parsed JSON problem description. Complex numbers are always two-element
/// [re, im] arrays on the wire; the kind selects which payload is active.
struct ProblemFile {
    double alpha = 1.0;
    std::string kind;  // ml_eval | operator | linear_system | sequential | analytic2
    GridSpec grid;
    Tolerance tol;

    struct MlEvalPayload {
        int k = 0;
        cplx lambda{1.0, 0.0};
    };
    struct OperatorPayload {
        std::string op;  // "lj" | "ld"
        PowerSeries series;
        int n_nodes = 40;
    };
    struct LinearSystemPayload {
        ComplexMatrix matrix{1};
        std::vector<cplx> x0;
        SourceTerm source = SourceTerm::zero();
    };
    struct SequentialPayload {
        std::vector<cplx> a;
        std::vector<cplx> init;
        std::vector<ForcingAtom> forcing;
    };
    struct Analytic2Payload {
        std::optional<std::string> preset;  // "airy" | "hermite"
        std::optional<cplx> a;
        std::optional<int> eigen_index;
        PowerSeries p, q, c;
        cplx x0{0.0}, x01{0.0};
    };

    std::optional<MlEvalPayload> ml_eval;
    std::optional<OperatorPayload> op;
    std::optional<LinearSystemPayload> linear_system;
    std::optional<SequentialPayload> sequential;
    std::optional<Analytic2Payload> analytic2;

    std::vector<double> grid_points() const;
};

/// Parse + validate; throws std::invalid_argument with a message naming the
/// offending field.
ProblemFile parse_problem_file(const std::string& json_text);

/// Canonical serialization; parse(serialize(parse(x))) == parse(x).
std::string serialize_problem_file(const ProblemFile& pf);

struct Trajectory {
    std::vector<double> t;
    std::vector<std::vector<cplx>> values;  // one row per grid point
    std::vector<double> err_est;
    int n_components = 1;
};

struct SolveReport {
    Trajectory trajectory;
    std::string summary;  // human-readable: residual, symbolic terms, ...
};

/// Dispatch to the solver selected by the problem kind and sample the
/// solution over the grid.
SolveReport solve_problem(const ProblemFile& pf);

/// CSV contract: header "t,comp0_re,comp0_im,...,err_est", one row per grid
/// point, 17 significant digits, LF line endings.
void write_trajectory_csv(std::ostream& os, const Trajectory& tr);

}  // namespace lfrac
