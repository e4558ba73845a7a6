#!/usr/bin/env python3
"""Solver adapter: reads an LP/MPS model, solves it and writes a solution file.

Usage: lego_solver_adapter.py MODEL PARAMS SOLUTION

PARAMS holds key=value lines (solver, time_limit, mip_gap, threads, feastol).
SOLUTION receives "status <s>", "objective <v>" and one "name value" line per
variable. Exit code 0 means the solution file was written, whatever the status.
"""
import sys


def read_params(path):
    params = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, value = line.partition("=")
            params[key.strip()] = value.strip()
    return params


def write_solution(path, status, objective, values):
    with open(path, "w") as fh:
        fh.write(f"status {status}\n")
        fh.write(f"objective {objective!r}\n")
        for name, value in values:
            fh.write(f"{name} {float(value)!r}\n")


def solve_scip(model_path, params):
    from pyscipopt import Model

    def build():
        m = Model()
        m.readProblem(model_path)
        m.setParam("limits/gap", float(params.get("mip_gap", "1e-9")))
        limit = float(params.get("time_limit", "0"))
        if limit > 0:
            m.setParam("limits/time", limit)
        feastol = float(params.get("feastol", "1e-9"))
        m.setParam("numerics/feastol", feastol)
        m.setParam("randomization/randomseedshift", 0)
        return m

    m = build()
    m.optimize()
    status = m.getStatus()
    if status == "inforunbd":
        # Tell infeasible from unbounded with a zero objective.
        probe = build()
        for v in probe.getVars():
            probe.chgVarObj(v, 0.0)
        probe.optimize()
        return ("infeasible" if probe.getStatus() == "infeasible" else "unbounded"), 0.0, []
    if status == "infeasible":
        return "infeasible", 0.0, []
    if status == "unbounded":
        return "unbounded", 0.0, []
    if m.getNSols() == 0:
        return "limit", 0.0, []
    sol = m.getBestSol()
    values = [(v.name, m.getSolVal(sol, v)) for v in m.getVars()]
    return ("optimal" if status == "optimal" else "feasible"), m.getSolObjVal(sol), values


def solve_highs(model_path, params):
    import highspy

    h = highspy.Highs()
    h.setOptionValue("output_flag", True)
    h.setOptionValue("mip_rel_gap", float(params.get("mip_gap", "1e-9")))
    limit = float(params.get("time_limit", "0"))
    if limit > 0:
        h.setOptionValue("time_limit", limit)
    h.setOptionValue("threads", int(params.get("threads", "1")))
    if h.readModel(model_path) != highspy.HighsStatus.kOk:
        raise RuntimeError("HiGHS could not read " + model_path)
    h.run()
    ms = h.getModelStatus()
    S = highspy.HighsModelStatus
    if ms == S.kInfeasible:
        return "infeasible", 0.0, []
    if ms in (S.kUnbounded, S.kUnboundedOrInfeasible):
        return "unbounded", 0.0, []
    info = h.getInfo()
    if info.primal_solution_status != 2:
        return "limit", 0.0, []
    lp = h.getLp()
    col = h.getSolution().col_value
    values = [(lp.col_names_[i], col[i]) for i in range(lp.num_col_)]
    return ("optimal" if ms == S.kOptimal else "feasible"), info.objective_function_value, values


def main(argv):
    if len(argv) != 4:
        sys.stderr.write(__doc__)
        return 64
    model_path, params_path, solution_path = argv[1:]
    params = read_params(params_path)
    solver = params.get("solver", "scip")
    if solver == "scip":
        status, objective, values = solve_scip(model_path, params)
    elif solver == "highs":
        status, objective, values = solve_highs(model_path, params)
    else:
        sys.stderr.write(f"unknown solver {solver}\n")
        return 65
    write_solution(solution_path, status, objective, values)
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
