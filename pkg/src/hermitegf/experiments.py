"""Experiment harness: test functions, the error metric, parameter scans and CSV output.

Each experiment expands its configuration into an ordered list of
parameter tuples, runs them (optionally on a thread pool) and returns one
:class:`ResultRow` per tuple and method.  Rows of the RBF-Direct baseline
carry the experiment name with a ``:direct`` suffix, rows of the legacy
cut-off a ``:legacy`` suffix.
"""

from __future__ import annotations

import csv
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np

from hermitegf.auto import bbox_center
from hermitegf.basis import BasisSpec, hlim_rows, squared_degree_sums
from hermitegf.cutoff import CutoffConfig, auto_t, choose_jmax
from hermitegf.errors import (
    CriterionNotMet,
    DivisionByZero,
    HermiteGFError,
    SingularMatrix,
    UnknownFunction,
)
from hermitegf.gaussian import rbf_direct_eval, rbf_direct_fit
from hermitegf.multiindex import basis_count
from hermitegf.pointsets import halton, halton_box, hyperbolic_nodes
from hermitegf.stabilization import build_stable_basis, evaluate, fit

EXPERIMENTS = ("iso2d-hyperbolic", "aniso2d", "multidim", "mehler-check", "criterion-compare")

CSV_HEADER = ("experiment", "N", "d", "eps", "gamma_tag", "p", "t", "jmax", "M",
              "error", "cond_psi", "cond_phi", "runtime_ms", "flags")

# anisotropic patterns
G_ANISO_2D = np.array([[1.0, 0.3], [0.1, 1.3]])
E_ANISO_3D = np.array([[1.0, 0.2, 0.3], [0.2, 1.0, 0.15], [0.1, 0.3, 1.0]])

ORIGIN_EXCLUSION = 1e-3
EVAL_GRID = 53
MULTIDIM_EVAL = 1000


# ---------------------------------------------------------------- test functions and metric

def _fh(P):
    x, y = P[:, 0], P[:, 1]
    return np.sin(x * x + 2.0 * y * y) - np.sin(2.0 * x * x + (y - 0.5) ** 2)


def _fa(P):
    x, y = P[:, 0], P[:, 1]
    return 1.0 / (x * x + x * y + y * y) + 2.0


def _fcos(P):
    return np.cos(P.sum(axis=1))


TEST_FUNCTIONS = {"fh": _fh, "fa": _fa, "fcos": _fcos}


def test_function(name: str, points) -> np.ndarray:
    """Evaluate one of the test functions ``fh``, ``fa`` or ``fcos`` at each row of ``points``."""
    try:
        func = TEST_FUNCTIONS[name]
    except KeyError:
        raise UnknownFunction(f"unknown test function {name!r}; choose from {sorted(TEST_FUNCTIONS)}") from None
    return func(np.atleast_2d(np.asarray(points, dtype=float)))


# pytest would otherwise try to collect it
test_function.__test__ = False


def error_metric(f_true, s) -> float:
    """Average relative error ``sqrt(sum(((f - s) / f)**2)) / n``."""
    f_true = np.asarray(f_true, dtype=float)
    s = np.asarray(s, dtype=float)
    if f_true.shape != s.shape:
        raise ValueError("f_true and s must have the same length")
    if np.any(f_true == 0.0):
        raise DivisionByZero("reference values contain zeros; the relative error is undefined")
    if f_true.size == 0:
        raise ValueError("empty evaluation set")
    return float(np.sqrt(np.sum(((f_true - s) / f_true) ** 2)) / f_true.size)


# ---------------------------------------------------------------- config and rows

@dataclass
class ExperimentConfig:
    """Declarative description of a parameter scan.

    ``experiment`` selects the study; every tuple of the lists ``N`` x
    ``eps`` x ``p`` is run.  ``t`` fixes the truncation parameter, otherwise
    it is picked from ``t_grid``.  ``record_runtime`` is off by default so
    reruns give byte-identical CSV files.
    """

    experiment: str
    N: list = field(default_factory=lambda: [105])
    eps: list = field(default_factory=lambda: [0.05])
    gamma: float = 3.5
    p: list = field(default_factory=lambda: [0.0])
    d: int = 2
    tol: float = 1e-6
    t_grid: list = field(default_factory=lambda: np.linspace(0.3, 0.99, 10).tolist())
    t: float | None = None
    j_max: int = 60
    j_cap: int | None = None
    anisotropic: bool = False
    direct: bool = True
    record_runtime: bool = False
    out: str | None = None

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ValueError(f"unknown experiment {self.experiment!r}; choose from {EXPERIMENTS}")
        for name in ("N", "eps", "p", "t_grid"):
            val = getattr(self, name)
            val = [val] if np.ndim(val) == 0 else list(val)
            if not val:
                raise ValueError(f"{name} must be a nonempty list")
            setattr(self, name, val)
        self.N = [int(n) for n in self.N]
        self.eps = [float(e) for e in self.eps]
        self.p = [float(q) for q in self.p]
        self.t_grid = [float(t) for t in self.t_grid]
        if any(n < 1 for n in self.N):
            raise ValueError("N entries must be positive")
        if any(not e > 0 for e in self.eps):
            raise ValueError("eps entries must be positive")
        if any(not 0.0 <= q < 1.0 for q in self.p):
            raise ValueError("p entries must lie in [0, 1)")
        if not self.gamma > 0:
            raise ValueError("gamma must be positive")
        if self.d < 1:
            raise ValueError("d must be positive")
        if self.experiment in ("iso2d-hyperbolic", "aniso2d", "mehler-check"):
            self.d = 2
        if self.anisotropic and self.experiment == "multidim" and self.d != 3:
            raise ValueError("the anisotropic multidim pattern is defined for d = 3")

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        extra = set(data) - known
        if extra:
            raise ValueError(f"unknown config keys: {sorted(extra)}")
        return cls(**data)

    @classmethod
    def from_json(cls, path) -> "ExperimentConfig":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    def cutoff(self) -> CutoffConfig:
        return CutoffConfig(tol=self.tol, j_cap=self.j_cap, t_grid=self.t_grid)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class ResultRow:
    experiment: str
    N: int
    d: int
    eps: float
    gamma_tag: str
    p: float = 0.0
    t: float | None = None
    jmax: int | None = None
    M: int | None = None
    error: float = math.nan
    cond_psi: float | None = None
    cond_phi: float | None = None
    runtime_ms: float | None = None
    flags: str = ""

    def add_flag(self, flag: str):
        self.flags = flag if not self.flags else f"{self.flags};{flag}"

    @property
    def baseline(self) -> bool:
        return self.experiment.endswith(":direct")


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def write_rows(rows, stream):
    writer = csv.writer(stream, lineterminator="\r\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow([_fmt(getattr(row, name)) for name in CSV_HEADER])


def emit_csv(rows, path) -> Path:
    """Write rows with the fixed header; floats keep 17 significant digits."""
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        write_rows(rows, fh)
    return path


def read_csv(path) -> list[dict]:
    """Parse a results file back into dicts of floats/ints/strings."""
    ints = {"N", "d", "jmax", "M"}
    floats = {"eps", "p", "t", "error", "cond_psi", "cond_phi", "runtime_ms"}
    out = []
    with open(path, newline="", encoding="utf-8") as fh:
        for rec in csv.DictReader(fh):
            for k, v in rec.items():
                if v == "" and (k in ints or k in floats):
                    rec[k] = None
                elif k in ints:
                    rec[k] = int(v)
                elif k in floats:
                    rec[k] = float(v)
            out.append(rec)
    return out


# ---------------------------------------------------------------- building blocks

def _gamma_tag(cfg: ExperimentConfig) -> str:
    g = format(cfg.gamma, "g")
    if cfg.experiment == "aniso2d":
        return f"{g}*[1 0.3;0.1 1.3]"
    return g


def _clock(cfg):
    start = time.perf_counter()
    return lambda: (time.perf_counter() - start) * 1e3 if cfg.record_runtime else None


def _select(X, spec, cfg: ExperimentConfig, row: ResultRow):
    """Pick ``(t, j_max)``; flag and fall back to the best candidate if the criterion fails."""
    cut = cfg.cutoff()
    if cfg.t is not None:
        result = choose_jmax(X, spec.with_t(cfg.t), cut)
        if not result.converged:
            row.add_flag("criterion_not_met")
        return result
    try:
        _, result = auto_t(X, spec, cut)
    except CriterionNotMet as exc:
        row.add_flag("criterion_not_met")
        result = exc.result
    return result


def _qr_and_direct(name, X, Z, func, E, G, x0, cfg, eps, p=0.0):
    """Run HermiteGF-QR (and optionally RBF-Direct) on one node set."""
    N, d = X.shape
    tag = _gamma_tag(cfg)
    fX, fZ = func(X), func(Z)
    row = ResultRow(name, N, d, eps, tag, p)
    stop = _clock(cfg)
    spec = BasisSpec(E, G, 0.5 if cfg.t is None else cfg.t, x0, 0)
    try:
        result = _select(X, spec, cfg, row)
        ip = fit(X, fX, result.basis)
        s = evaluate(ip, Z)
        row.t, row.jmax, row.M = result.t, result.j_max, result.M
        row.cond_psi = ip.cond
        if not np.all(np.isfinite(s)):
            row.add_flag("nonfinite")
        row.error = error_metric(fZ, s)
    except HermiteGFError as exc:
        row.add_flag(type(exc).__name__)
    row.runtime_ms = stop()
    rows = [row]
    if cfg.direct:
        drow = ResultRow(name + ":direct", N, d, eps, tag, p)
        stop = _clock(cfg)
        try:
            df = rbf_direct_fit(X, fX, E)
            drow.cond_phi = row.cond_phi = df.cond
            sd = rbf_direct_eval(df.coeffs, Z, X, E)
            if np.all(np.isfinite(sd)):
                drow.error = error_metric(fZ, sd)
            else:
                drow.add_flag("nonfinite")
        except SingularMatrix as exc:
            drow.cond_phi = row.cond_phi = exc.cond
            drow.add_flag("SingularMatrix")
        drow.runtime_ms = stop()
        rows.append(drow)
    return rows


def _hyperbolic_eval():
    return hyperbolic_nodes(EVAL_GRID ** 2, clustered=False, grid_based=True)


def _box_grid(exclude_origin: bool):
    g = np.linspace(-1.0, 1.0, EVAL_GRID)
    Z = np.stack(np.meshgrid(g, g, indexing="ij"), axis=-1).reshape(-1, 2)
    if exclude_origin:
        Z = Z[np.linalg.norm(Z, axis=1) >= ORIGIN_EXCLUSION]
    return Z


def clustered_box_nodes(n: int, d: int, exclude_origin: bool = False) -> np.ndarray:
    """Boundary-clustered Halton nodes in ``[-1, 1]^d``, optionally avoiding the origin."""
    if not exclude_origin:
        return halton_box(n, d, clustered=True)
    out, drawn = [], 0
    while sum(len(o) for o in out) < n:
        P = halton_box(n, d, clustered=True, skip=drawn)
        drawn += n
        out.append(P[np.linalg.norm(P, axis=1) >= ORIGIN_EXCLUSION])
    return np.concatenate(out)[:n]


# ---------------------------------------------------------------- experiments

def _tasks(cfg: ExperimentConfig):
    exp = cfg.experiment
    if exp == "iso2d-hyperbolic":
        Z = _hyperbolic_eval()
        for N in cfg.N:
            X = hyperbolic_nodes(N, clustered=True)
            x0 = bbox_center(X)
            for eps in cfg.eps:
                yield _iso_task(exp, X, Z, _fh, eps, cfg, x0)
    elif exp == "aniso2d":
        Z = _box_grid(exclude_origin=True)
        G = cfg.gamma * G_ANISO_2D
        for N in cfg.N:
            X = clustered_box_nodes(N, 2, exclude_origin=True)
            for eps in cfg.eps:
                for p in cfg.p:
                    E = eps * np.array([[1.0, p], [p, 1.0]])
                    yield _eps_task(exp, X, Z, _fa, E, G, np.zeros(2), cfg, eps, p)
    elif exp == "multidim":
        d = cfg.d
        pattern = E_ANISO_3D if cfg.anisotropic else np.eye(d)
        G = cfg.gamma * np.eye(d)
        for N in cfg.N:
            X = box_scale_halton(N, d)
            Z = box_scale_halton(MULTIDIM_EVAL, d, skip=N)
            for eps in cfg.eps:
                yield _eps_task(exp, X, Z, _fcos, eps * pattern, G, np.zeros(d), cfg, eps, 0.0)
    elif exp == "mehler-check":
        for N in cfg.N:
            X = box_scale_halton(N, 2)
            for eps in cfg.eps:
                for t in (cfg.t_grid if cfg.t is None else [cfg.t]):
                    yield _mehler_task(X, eps, t, cfg)
    elif exp == "criterion-compare":
        Z = _box_grid(exclude_origin=False)
        for N in cfg.N:
            X = clustered_box_nodes(N, cfg.d) if cfg.d == 2 else box_scale_halton(N, cfg.d)
            for eps in cfg.eps:
                yield _compare_task(X, Z, eps, cfg)


def box_scale_halton(n: int, d: int, skip: int = 0) -> np.ndarray:
    """Plain Halton points scaled to ``[-1, 1]^d``."""
    return 2.0 * halton(n, d, skip) - 1.0


def _iso_task(name, X, Z, func, eps, cfg, x0):
    d = X.shape[1]
    E, G = eps * np.eye(d), cfg.gamma * np.eye(d)
    return _eps_task(name, X, Z, func, E, G, x0, cfg, eps, 0.0)


def _eps_task(name, X, Z, func, E, G, x0, cfg, eps, p):
    return lambda: _qr_and_direct(name, X, Z, func, E, G, x0, cfg, eps, p)


def _mehler_task(X, eps, t, cfg):
    def run():
        d = X.shape[1]
        row = ResultRow("mehler-check", X.shape[0], d, eps, _gamma_tag(cfg), 0.0, t, cfg.j_max,
                        basis_count(d, cfg.j_max))
        stop = _clock(cfg)
        spec = BasisSpec(eps * np.eye(d), cfg.gamma * np.eye(d), t, np.zeros(d), cfg.j_max)
        try:
            partial = squared_degree_sums(X, spec, cfg.j_max).sum(axis=1)
            closed = hlim_rows(X, spec)
            row.error = float(np.max(np.abs(partial - closed) / closed))
            if row.error > 1e-10:
                row.add_flag("not_converged")
        except HermiteGFError as exc:
            row.add_flag(type(exc).__name__)
        row.runtime_ms = stop()
        return [row]
    return run


def _compare_task(X, Z, eps, cfg):
    def run():
        N, d = X.shape
        tag = _gamma_tag(cfg)
        x0 = bbox_center(X)
        spec = BasisSpec(eps * np.eye(d), cfg.gamma * np.eye(d),
                         0.5 if cfg.t is None else cfg.t, x0, 0)
        func = _fh if d == 2 else _fcos
        fX, fZ = func(X), func(Z)
        new = ResultRow("criterion-compare", N, d, eps, tag, 0.0, spec.t)
        old = ResultRow("criterion-compare:legacy", N, d, eps, tag, 0.0, spec.t)
        stop = _clock(cfg)
        try:
            result = choose_jmax(X, spec, cfg.cutoff())
            if not result.converged:
                new.add_flag("criterion_not_met")
            ip = fit(X, fX, result.basis)
            new.jmax, new.M, new.cond_psi = result.j_max, result.M, ip.cond
            new.error = error_metric(fZ, evaluate(ip, Z))
            new.runtime_ms = stop()
            stop = _clock(cfg)
            if result.legacy_j_max is None:
                old.add_flag("CapacityExceeded")
            else:
                b = build_stable_basis(X, spec.with_jmax(result.legacy_j_max))
                ip_old = fit(X, fX, b)
                old.jmax, old.M, old.cond_psi = result.legacy_j_max, b.M, ip_old.cond
                old.error = error_metric(fZ, evaluate(ip_old, Z))
            old.runtime_ms = stop()
        except HermiteGFError as exc:
            new.add_flag(type(exc).__name__)
        return [new, old]
    return run


def run_experiment(cfg: ExperimentConfig, out=None, threads: int = 1) -> list[ResultRow]:
    """Run every parameter tuple of ``cfg`` and return the rows in config order.

    When ``out`` (or ``cfg.out``) is set the rows are also written as CSV.
    """
    tasks = list(_tasks(cfg))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(lambda task: task(), tasks))
    else:
        chunks = [task() for task in tasks]
    rows = [row for chunk in chunks for row in chunk]
    out = out if out is not None else cfg.out
    if out is not None:
        emit_csv(rows, out)
    return rows


def any_flagged(rows) -> bool:
    """True if a HermiteGF row (not a baseline row) carries a flag."""
    return any(r.flags for r in rows if not r.baseline)
