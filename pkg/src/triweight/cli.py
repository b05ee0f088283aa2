"""Batch command-line front end.

Subcommands: verify-weight, moments, quadrature, solve, eig, converge.
Options come from CLI flags layered over an optional flat key=value config
file.  Reports are JSON; tabular data is CSV with a header row and 17
significant digits; when an output directory is set (flag, config key or
TRIWEIGHT_OUTPUT_DIR), both are written there together with matplotlib
figures, otherwise the selected format goes to stdout.

Exit codes: 0 success, 1 verification failure, 2 numerical failure
(matrix not SPD / eigen iteration stalled), 3 configuration error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import galerkin, report
from .linalg import NoConvergenceError, NotSPDError, solve_spd
from .moments import TriangleWeightParams, dirichlet_moment, triangle_rule
from .poly import MatPoly2, format_poly, parse_poly
from .weights import (DomainEdges, Edge, WeightSpec, triangle_edges,
                      triangle_matrix, verify_weight)

ENV_OUTPUT_DIR = "TRIWEIGHT_OUTPUT_DIR"

_CONFIG_KEYS = {
    "alpha", "beta", "gamma", "factors", "edges",
    "phi11", "phi12", "phi22",
    "degree", "f", "max_order", "points", "degrees",
    "format", "output_dir", "figures",
}


class ConfigError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _fmt(x):
    return f"{x:.17g}"


def _parse_exponent(text):
    try:
        return Fraction(str(text))
    except (ValueError, ZeroDivisionError) as err:
        raise ConfigError(f"bad exponent {text!r}: {err}") from None


def _parse_factors(text):
    factors = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        form_text, sep, exp_text = chunk.rpartition(":")
        if not sep:
            raise ConfigError(f"factor {chunk!r} must look like 'poly:exp'")
        factors.append((parse_poly(form_text), _parse_exponent(exp_text)))
    if not factors:
        raise ConfigError("empty factor list")
    return factors


def _parse_edges(text):
    edges = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        form_text, sep, direction = chunk.partition("@")
        if not sep:
            raise ConfigError(f"edge {chunk!r} must look like 'poly@n1,n2'")
        n1, _, n2 = direction.partition(",")
        edges.append(Edge(parse_poly(form_text),
                          (_parse_exponent(n1), _parse_exponent(n2))))
    if not edges:
        raise ConfigError("empty edge list")
    return DomainEdges(tuple(edges))


def _parse_degrees(text):
    text = text.strip()
    if ":" in text:
        lo, _, hi = text.partition(":")
        lo, hi = int(lo), int(hi)
        if hi < lo:
            raise ConfigError(f"bad degree range {text!r}")
        return list(range(lo, hi + 1))
    return [int(tok) for tok in text.split(",") if tok.strip()]


def _read_config_file(path):
    values = {}
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as err:
        raise ConfigError(f"cannot read config {path}: {err}") from None
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key = key.strip()
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = value.strip()
    return values


class RunConfig:
    """Resolved options for one subcommand run."""

    def __init__(self, args):
        file_values = _read_config_file(args.config) if args.config else {}

        def pick(name, default=None):
            flag = getattr(args, name, None)
            if flag is not None:
                return flag
            return file_values.get(name, default)

        self.alpha = _parse_exponent(pick("alpha", "0"))
        self.beta = _parse_exponent(pick("beta", "0"))
        self.gamma = _parse_exponent(pick("gamma", "0"))
        try:
            self.params = TriangleWeightParams(self.alpha, self.beta,
                                               self.gamma)
        except ValueError as err:
            raise ConfigError(str(err)) from None

        factors = pick("factors")
        self.factors = _parse_factors(factors) if factors else None
        edges = pick("edges")
        self.edges = _parse_edges(edges) if edges else triangle_edges()

        default_phi = triangle_matrix()
        try:
            e11 = parse_poly(pick("phi11")) if pick("phi11") \
                else default_phi.e11
            e12 = parse_poly(pick("phi12")) if pick("phi12") \
                else default_phi.e12
            e22 = parse_poly(pick("phi22")) if pick("phi22") \
                else default_phi.e22
            self.phi = MatPoly2(e11, e12, e22)
        except ValueError as err:
            raise ConfigError(f"bad matrix entry: {err}") from None

        self.degree = int(pick("degree", 4))
        if self.degree < 0:
            raise ConfigError("degree must be nonnegative")
        f_text = pick("f")
        try:
            self.f = parse_poly(f_text) if f_text else None
        except ValueError as err:
            raise ConfigError(f"bad polynomial for f: {err}") from None
        self.max_order = int(pick("max_order", 8))
        self.points = int(pick("points", 8))
        if self.points < 1:
            raise ConfigError("points must be positive")
        degrees = pick("degrees")
        self.degrees = _parse_degrees(degrees) if degrees \
            else list(range(0, self.degree + 1))

        fmt = pick("format")
        if fmt is not None and fmt not in ("json", "csv"):
            raise ConfigError(f"format must be json or csv, not {fmt!r}")
        self.format = fmt
        out = pick("output_dir", os.environ.get(ENV_OUTPUT_DIR))
        self.output_dir = Path(out) if out else None
        figures = pick("figures", "true")
        if isinstance(figures, str):
            figures = figures.lower() in ("1", "true", "yes", "on")
        self.figures = figures

    def weight(self):
        if self.factors is not None:
            try:
                return WeightSpec(tuple(self.factors))
            except ValueError as err:
                raise ConfigError(str(err)) from None
        return WeightSpec.triangle(self.alpha, self.beta, self.gamma)

    def as_dict(self):
        return {
            "alpha": str(self.alpha),
            "beta": str(self.beta),
            "gamma": str(self.gamma),
            "factors": None if self.factors is None else [
                {"form": format_poly(q), "exponent": str(g)}
                for q, g in self.factors],
            "edges": [{"form": format_poly(e.form),
                       "direction": [str(d) for d in e.direction]}
                      for e in self.edges.edges],
            "phi11": format_poly(self.phi.e11),
            "phi12": format_poly(self.phi.e12),
            "phi22": format_poly(self.phi.e22),
            "degree": self.degree,
            "f": None if self.f is None else format_poly(self.f),
            "max_order": self.max_order,
            "points": self.points,
            "degrees": self.degrees,
            "format": self.format,
            "output_dir": None if self.output_dir is None
            else str(self.output_dir),
            "figures": self.figures,
        }


class Emitter:
    """Routes the report/table/figures to stdout or the output directory."""

    def __init__(self, command, cfg, stdout):
        self.command = command
        self.cfg = cfg
        self.stdout = stdout
        self.default_format = "csv" if command in (
            "moments", "quadrature", "converge") else "json"

    def _path(self, suffix):
        self.cfg.output_dir.mkdir(parents=True, exist_ok=True)
        return self.cfg.output_dir / f"{self.command}{suffix}"

    def emit(self, rep, csv_rows=None, figure=None):
        rep = {"command": self.command, "config": self.cfg.as_dict(), **rep}
        text = json.dumps(rep, indent=2)
        csv_text = None
        if csv_rows is not None:
            lines = [",".join(csv_rows[0])]
            for row in csv_rows[1:]:
                lines.append(",".join(
                    _fmt(v) if isinstance(v, float) else str(v)
                    for v in row))
            csv_text = "\n".join(lines) + "\n"
        if self.cfg.output_dir is not None:
            json_path = self._path(".json")
            json_path.write_text(text + "\n")
            written = [json_path]
            if csv_text is not None:
                csv_path = self._path(".csv")
                csv_path.write_text(csv_text)
                written.append(csv_path)
            if figure is not None and self.cfg.figures:
                fig_path = self._path(".png")
                figure(fig_path)
                written.append(fig_path)
            for path in written:
                print(path, file=self.stdout)
        else:
            chosen = self.cfg.format or self.default_format
            if chosen == "csv" and csv_text is not None:
                self.stdout.write(csv_text)
            else:
                print(text, file=self.stdout)


def _cmd_verify_weight(cfg, emitter):
    weight = cfg.weight()
    result = verify_weight(cfg.phi, weight, cfg.edges)
    pearson = {"passed": result.pearson_ok}
    if result.pearson_ok:
        pearson.update({
            "psi1": format_poly(result.pearson.psi1),
            "psi2": format_poly(result.pearson.psi2),
            "det_d": float(result.pearson.det),
            "det_d_exact": str(result.pearson.det),
        })
    else:
        pearson["stage"] = result.pearson_stage
    rep = {
        "pearson": pearson,
        "boundary": {
            "passed": result.boundary.passed,
            "edges": [
                {"index": c.index, "form": format_poly(c.form),
                 "passed": c.passed,
                 "failing_component": c.failing_component}
                for c in result.boundary.checks],
        },
        "differential_system": {
            "A": {"passed": result.system_a.passed},
            "B": {"passed": result.system_b.passed},
        },
        "classical": result.classical,
    }
    emitter.emit(rep)
    return 0 if result.classical else 1


def _cmd_moments(cfg, emitter):
    rows = []
    for m in range(cfg.max_order + 1):
        for n in range(cfg.max_order + 1):
            rows.append((m, n, dirichlet_moment(m, n, cfg.params)))
    csv_rows = [("m", "n", "moment")] + rows
    rep = {"max_order": cfg.max_order,
           "moments": [{"m": m, "n": n, "value": v} for m, n, v in rows]}
    emitter.emit(rep, csv_rows,
                 figure=lambda path: report.render_moments(rows, path))
    return 0


def _cmd_quadrature(cfg, emitter):
    rule = triangle_rule(cfg.points, cfg.params)
    csv_rows = [("x1", "x2", "weight")] + [
        (float(x1), float(x2), float(w))
        for (x1, x2), w in zip(rule.nodes, rule.weights)]
    rep = {
        "points": int(rule.weights.size),
        "exactness_degree": rule.exactness_degree,
        "nodes": [[float(a), float(b)] for a, b in rule.nodes],
        "weights": [float(w) for w in rule.weights],
        "weight_sum": float(rule.weights.sum()),
    }
    emitter.emit(rep, csv_rows,
                 figure=lambda path: report.render_quadrature(rule, path))
    return 0


def _cmd_solve(cfg, emitter):
    if cfg.f is None:
        raise ConfigError("solve requires f (text polynomial)")
    basis = galerkin.build_basis(cfg.degree, cfg.params)
    grams = galerkin.assemble(basis, cfg.phi, cfg.params)
    rhs = galerkin.load_vector(cfg.f, basis)
    coeffs = solve_spd(grams.system, rhs)
    solution = basis.polynomial(coeffs)
    residual = float(np.abs(grams.system @ coeffs - rhs).max())
    csv_rows = [("i", "j", "coefficient")] + [
        (i, j, float(c)) for (i, j), c in solution.terms()]
    rep = {
        "dimension": basis.dimension,
        "coefficients": [float(c) for c in coeffs],
        "solution": format_poly(solution),
        "linear_residual": residual,
        "l2_norm": float(np.linalg.norm(coeffs)),
        "sobolev_norm": galerkin.sobolev_norm(solution, cfg.phi, cfg.params),
    }
    emitter.emit(rep, csv_rows,
                 figure=lambda path: report.render_solution(
                     solution, path, title="weak solution"))
    return 0


def _eig_metrics(result, grams):
    n = result.values.size
    residual = float(np.abs(
        grams.system @ result.vectors
        - grams.mass @ result.vectors @ np.diag(result.values)).max())
    defect = float(np.abs(
        result.vectors.T @ grams.mass @ result.vectors - np.eye(n)).max())
    return residual, defect


def _cmd_eig(cfg, emitter):
    basis = galerkin.build_basis(cfg.degree, cfg.params)
    grams = galerkin.assemble(basis, cfg.phi, cfg.params)
    result = galerkin.eigensolve(grams)
    residual, defect = _eig_metrics(result, grams)
    csv_rows = [("k", "value")] + [
        (k, float(v)) for k, v in enumerate(result.values)]
    rep = {
        "dimension": basis.dimension,
        "values": [float(v) for v in result.values],
        "reciprocals": [float(v) for v in result.reciprocals],
        "eigen_residual": residual,
        "orthonormality_defect": defect,
        "lower_bound_margin": float(result.values[0] - 2.0),
    }
    emitter.emit(rep, csv_rows,
                 figure=lambda path: report.render_spectrum(
                     result.values, path))
    return 0


def _cmd_converge(cfg, emitter):
    rows = []
    for degree in cfg.degrees:
        basis = galerkin.build_basis(degree, cfg.params)
        grams = galerkin.assemble(basis, cfg.phi, cfg.params)
        result = galerkin.eigensolve(grams)
        _, defect = _eig_metrics(result, grams)
        rows.append((degree, [float(v) for v in result.values[:10]], defect,
                     float(result.values[0] - 2.0)))
    header = ["degree"] + [f"nu{k}" for k in range(10)] \
        + ["max_mass_defect", "margin"]
    csv_rows = [tuple(header)]
    for degree, values, defect, margin in rows:
        padded = values + [""] * (10 - len(values))
        csv_rows.append(tuple([degree] + padded + [defect, margin]))
    rep = {"rows": [
        {"degree": d, "values": v, "max_mass_defect": defect,
         "margin": margin}
        for d, v, defect, margin in rows]}
    emitter.emit(rep, csv_rows,
                 figure=lambda path: report.render_convergence(
                     [(d, v) for d, v, _, _ in rows], path))
    return 0


_COMMANDS = {
    "verify-weight": _cmd_verify_weight,
    "moments": _cmd_moments,
    "quadrature": _cmd_quadrature,
    "solve": _cmd_solve,
    "eig": _cmd_eig,
    "converge": _cmd_converge,
}


def _build_parser():
    parser = _Parser(prog="triweight",
                     description="Weight structure checks and weighted "
                                 "Galerkin solves on the unit triangle.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="flat key=value config file")
        p.add_argument("--alpha")
        p.add_argument("--beta")
        p.add_argument("--gamma")
        p.add_argument("--factors",
                       help="general weight, e.g. 'x1:1/2; 1-x1-x2:2'")
        p.add_argument("--edges",
                       help="boundary edges, e.g. 'x1@-1,0; x2@0,-1'")
        p.add_argument("--phi11")
        p.add_argument("--phi12")
        p.add_argument("--phi22")
        p.add_argument("--degree", type=int)
        p.add_argument("--f", help="right-hand side as a text polynomial")
        p.add_argument("--max-order", dest="max_order", type=int)
        p.add_argument("--points", type=int)
        p.add_argument("--degrees", help="sweep, e.g. '0:12' or '2,4,8'")
        p.add_argument("--format", choices=("json", "csv"))
        p.add_argument("--output-dir", dest="output_dir")
        p.add_argument("--figures", dest="figures", action="store_true",
                       default=None)
        p.add_argument("--no-figures", dest="figures", action="store_false")
    return parser


def main(argv=None, stdout=None):
    stdout = stdout or sys.stdout
    try:
        args = _build_parser().parse_args(argv)
        cfg = RunConfig(args)
        emitter = Emitter(args.command, cfg, stdout)
        return _COMMANDS[args.command](cfg, emitter)
    except ConfigError as err:
        print(f"error: {err}", file=sys.stderr)
        return 3
    except (NotSPDError, NoConvergenceError) as err:
        print(f"numerical failure: {err}", file=sys.stderr)
        return 2


def run():
    sys.exit(main())


if __name__ == "__main__":
    run()
