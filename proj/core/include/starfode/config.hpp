#pragma once

#include "starfode/scalar_solver.hpp"

#include <string>

namespace starfode {

enum class ProblemKind { scalar, system, schrodinger };
enum class SolverKind { dense, stein, projected, lowrank, abm };

struct ScalarParams {
    std::string field = "const"; // "const" (f = F) or "linear" (f = F t)
    double F = -1.0;
    double y0 = 1.0;
    bool manufactured = false; // forcing for the exact solution y(t) = t
};

struct SystemParams {
    std::string name = "pathsum2"; // the 2x2 model M(t) = [[1+t, -t], [1, 0]]
};

struct SchrodingerParams {
    int grid_n = 15;
    bool time_dependent = false;
};

/// One experiment description; JSON on disk, unknown keys rejected.
struct ProblemConfig {
    ProblemKind kind = ProblemKind::scalar;
    double alpha = 0.5;
    double T = 1.0;
    int m = 100;
    CutoffPolicy cutoff;
    SolverKind solver = SolverKind::dense;
    double dt = 1e-4;      // abm step
    double tol = 1e-8;     // low-rank iteration tolerance
    int krylov_dim = 30;   // projected-solver Arnoldi steps
    ScalarParams scalar;
    SystemParams system;
    SchrodingerParams schrodinger;
};

ProblemConfig parse_config(const std::string& text);
std::string serialize_config(const ProblemConfig& cfg);
ProblemConfig load_config(const std::string& path);

} // namespace starfode
