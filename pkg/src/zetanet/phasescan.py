"""Grid scans and critical-curve tracing over the (alpha, beta) plane.

A scan evaluates one threshold margin on a rectangular grid, marks cells
outside the convergence region as absent (never zero), and refines every
sign change along grid lines to a curve point by bisection.  Output
ordering is deterministic (row pass in row-major order, then column pass),
and cell values do not depend on the worker count, so exports are
bit-identical across thread settings.

Sign labels: SUPER for margin > 0, SUB for margin <= 0, OUTSIDE for
non-convergent cells.
"""

from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .epidemics import epidemic_threshold_product
from .errors import ConvergenceDomainError, EmptyWindowError
from .lseries import DEFAULT_TOL, LSeries, make_family
from .thresholds import bipartite_margin, directed_separated_margin

SCHEMA_VERSION = 1

PRESETS: dict[str, dict] = {
    "bipthr": {"kind": "bipartite", "l1": {"family": "liouville"}, "l2": {"family": "liouville"}},
    "dirthr": {"kind": "directed", "l1": {"family": "liouville"}, "l2": {"family": "liouville"}},
    "mixthr": {"kind": "bipartite", "l1": {"family": "liouville"}, "l2": {"family": "mobius"}},
    "epidliouv": {
        "kind": "epidemic",
        "l1": {"family": "liouville"},
        "l2": {"family": "liouville"},
        "target": 0.5,
    },
}

# argument shift of the most divergent L-argument per margin kind
_SHIFT = {"bipartite": 2.0, "directed": 1.0, "epidemic": 2.0}


def _family(params: dict) -> LSeries:
    return make_family(
        params["family"],
        k0=params.get("k0", 0.0),
        w=params.get("w", 1.0),
        a=params.get("a", 1.0),
    )


def resolve_formula(formula) -> dict:
    """Normalize a preset tag or explicit spec dict into a spec dict."""
    if isinstance(formula, str):
        tag = formula.lower()
        if tag not in PRESETS:
            raise ValueError(f"unknown formula tag {tag!r}; presets: {sorted(PRESETS)}")
        spec = dict(PRESETS[tag])
        spec["tag"] = tag
        return spec
    spec = dict(formula)
    if spec.get("kind") not in _SHIFT:
        raise ValueError(f"formula kind must be one of {sorted(_SHIFT)}")
    if spec["kind"] == "epidemic" and "target" not in spec:
        raise ValueError("epidemic scans need a target product")
    spec.setdefault(
        "tag",
        ":".join(
            [spec["kind"], spec["l1"]["family"], spec["l2"]["family"]]
            + ([f"{spec['target']:g}" for _ in [0]] if spec["kind"] == "epidemic" else [])
        ),
    )
    return spec


def _margin_fn(spec: dict, eval_tol: float):
    kind = spec["kind"]
    L1 = _family(spec["l1"])
    L2 = _family(spec["l2"])
    if kind == "bipartite":
        return lambda a, b: bipartite_margin(L1, a, L2, b, eval_tol).margin
    if kind == "directed":
        return lambda a, b: directed_separated_margin(L1, a, L2, b, eval_tol).margin
    target = float(spec["target"])
    return lambda a, b: target - epidemic_threshold_product(L1, a, L2, b, eval_tol)


def default_window(spec: dict) -> tuple[float, float, float, float]:
    shift = _SHIFT[spec["kind"]]
    lo1 = _family(spec["l1"]).sigma_a + shift
    lo2 = _family(spec["l2"]).sigma_a + shift
    return (lo1 + 0.05, lo1 + 3.0, lo2 + 0.05, lo2 + 3.0)


@dataclass(frozen=True)
class PhaseScanResult:
    formula: str
    spec: dict
    alpha_grid: np.ndarray
    beta_grid: np.ndarray
    margin: np.ndarray  # [i, j] at (alpha_grid[i], beta_grid[j]); NaN = outside
    zero_curve: list = field(default_factory=list)
    window: tuple = ()
    clipped_window: tuple = ()
    tol: float = 1e-9
    eval_tol: float = DEFAULT_TOL

    def phase(self, i: int, j: int) -> str:
        m = self.margin[i, j]
        if math.isnan(m):
            return "OUTSIDE"
        return "SUPER" if m > 0 else "SUB"


def _row_values(args) -> np.ndarray:
    spec, alpha, betas, eval_tol, min_a, min_b = args
    fn = _margin_fn(spec, eval_tol)
    out = np.full(len(betas), np.nan)
    if alpha <= min_a:
        return out
    for j, b in enumerate(betas):
        if b <= min_b:
            continue
        try:
            out[j] = fn(alpha, b)
        except ConvergenceDomainError:
            pass
    return out


def _bisect_line(fn, lo: float, hi: float, flo: float, fhi: float, tol: float):
    """Refine a bracketed sign change until |margin| <= tol; None if not reached."""
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fmid = fn(mid)
        if abs(fmid) <= tol:
            return mid
        if flo * fmid < 0:
            hi, fhi = mid, fmid
        else:
            lo, flo = mid, fmid
        if hi - lo <= 1e-15 * max(1.0, abs(hi)):
            break
    return None


def scan(
    formula,
    window: tuple[float, float, float, float] | None = None,
    resolution: int | tuple[int, int] = 200,
    tol: float = 1e-9,
    eval_tol: float = DEFAULT_TOL,
    threads: int = 1,
) -> PhaseScanResult:
    """Evaluate a threshold margin on a grid and trace its zero curve.

    formula is a preset tag ("bipthr", "dirthr", "mixthr", "epidliouv") or
    a spec dict {kind, l1, l2[, target]}.  Cells outside convergence are
    absent; a window with no convergent cell at all is an error.
    """
    spec = resolve_formula(formula)
    if window is None:
        window = default_window(spec)
    a0, a1, b0, b1 = map(float, window)
    if not (a1 > a0 and b1 > b0):
        raise ValueError(f"degenerate window {window}")
    na, nb = (resolution, resolution) if isinstance(resolution, int) else resolution
    if na < 2 or nb < 2:
        raise ValueError("resolution must be >= 2 per axis")
    shift = _SHIFT[spec["kind"]]
    min_a = _family(spec["l1"]).sigma_a + shift
    min_b = _family(spec["l2"]).sigma_a + shift
    if a1 <= min_a or b1 <= min_b:
        raise EmptyWindowError(
            f"window {window} lies at or below the convergence edge "
            f"(alpha > {min_a}, beta > {min_b} required)"
        )
    clipped = (max(a0, min_a), a1, max(b0, min_b), b1)

    alphas = np.linspace(a0, a1, na)
    betas = np.linspace(b0, b1, nb)
    tasks = [(spec, float(a), betas.tolist(), eval_tol, min_a, min_b) for a in alphas]
    margin = np.empty((na, nb))
    if threads <= 1:
        fn = _margin_fn(spec, eval_tol)
        for i, a in enumerate(alphas):
            row = np.full(nb, np.nan)
            if a > min_a:
                for j, b in enumerate(betas):
                    if b > min_b:
                        try:
                            row[j] = fn(a, b)
                        except ConvergenceDomainError:
                            pass
            margin[i] = row
    else:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            for i, row in enumerate(pool.map(_row_values, tasks, chunksize=max(1, na // (4 * threads)))):
                margin[i] = row

    fn = _margin_fn(spec, eval_tol)
    curve: list[tuple[float, float]] = []
    finite = np.isfinite(margin)
    for i in range(na):  # row pass: alpha fixed, walk beta
        a = float(alphas[i])
        for j in range(nb):
            if finite[i, j] and margin[i, j] == 0.0:
                curve.append((a, float(betas[j])))
            if j + 1 < nb and finite[i, j] and finite[i, j + 1]:
                if margin[i, j] * margin[i, j + 1] < 0:
                    root = _bisect_line(
                        lambda b: fn(a, b),
                        float(betas[j]), float(betas[j + 1]),
                        float(margin[i, j]), float(margin[i, j + 1]), tol,
                    )
                    if root is not None:
                        curve.append((a, root))
    for j in range(nb):  # column pass: beta fixed, walk alpha
        b = float(betas[j])
        for i in range(na - 1):
            if finite[i, j] and finite[i + 1, j] and margin[i, j] * margin[i + 1, j] < 0:
                root = _bisect_line(
                    lambda x: fn(x, b),
                    float(alphas[i]), float(alphas[i + 1]),
                    float(margin[i, j]), float(margin[i + 1, j]), tol,
                )
                if root is not None:
                    curve.append((root, b))

    return PhaseScanResult(
        formula=spec["tag"],
        spec=spec,
        alpha_grid=alphas,
        beta_grid=betas,
        margin=margin,
        zero_curve=curve,
        window=(a0, a1, b0, b1),
        clipped_window=clipped,
        tol=tol,
        eval_tol=eval_tol,
    )


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def export_scan(result: PhaseScanResult, path: str, fmt: str = "csv") -> list[str]:
    """Write a scan to disk; returns the written paths.

    csv: columns alpha,beta,margin,phase in row-major cell order, empty
    margin field for OUTSIDE cells, plus a companion <path>.curve.csv with
    the zero-curve points.  json: one document mirroring both, with
    schema_version.
    """
    if fmt == "csv":
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["alpha", "beta", "margin", "phase"])
            for i, a in enumerate(result.alpha_grid):
                for j, b in enumerate(result.beta_grid):
                    m = result.margin[i, j]
                    writer.writerow(
                        [_fmt(a), _fmt(b), "" if math.isnan(m) else _fmt(m), result.phase(i, j)]
                    )
        curve_path = path + ".curve.csv"
        with open(curve_path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["alpha", "beta"])
            for a, b in result.zero_curve:
                writer.writerow([_fmt(a), _fmt(b)])
        return [path, curve_path]
    if fmt == "json":
        doc = {
            "schema_version": SCHEMA_VERSION,
            "formula": result.formula,
            "window": list(result.window),
            "clipped_window": list(result.clipped_window),
            "tol": result.tol,
            "eval_tol": result.eval_tol,
            "alpha_grid": result.alpha_grid.tolist(),
            "beta_grid": result.beta_grid.tolist(),
            "margin": [
                [None if math.isnan(m) else m for m in row] for row in result.margin
            ],
            "phase": [
                [result.phase(i, j) for j in range(len(result.beta_grid))]
                for i in range(len(result.alpha_grid))
            ],
            "zero_curve": [[a, b] for a, b in result.zero_curve],
        }
        with open(path, "w") as fh:
            json.dump(doc, fh)
            fh.write("\n")
        return [path]
    raise ValueError(f"unknown export format {fmt!r}")


def load_scan(path: str) -> PhaseScanResult:
    """Read a scan back from csv (plus companion curve file) or json."""
    if path.endswith(".json"):
        with open(path) as fh:
            doc = json.load(fh)
        if doc.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema_version {doc.get('schema_version')!r}")
        margin = np.array(
            [[math.nan if m is None else m for m in row] for row in doc["margin"]]
        )
        return PhaseScanResult(
            formula=doc["formula"],
            spec={},
            alpha_grid=np.array(doc["alpha_grid"]),
            beta_grid=np.array(doc["beta_grid"]),
            margin=margin,
            zero_curve=[tuple(p) for p in doc["zero_curve"]],
            window=tuple(doc["window"]),
            clipped_window=tuple(doc["clipped_window"]),
            tol=doc["tol"],
            eval_tol=doc["eval_tol"],
        )
    alphas: list[float] = []
    betas: list[float] = []
    cells: list[float] = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != ["alpha", "beta", "margin", "phase"]:
            raise ValueError(f"unexpected csv header {header}")
        for row in reader:
            a, b = float(row[0]), float(row[1])
            if not alphas or a != alphas[-1]:
                alphas.append(a)
            if len(alphas) == 1:
                betas.append(b)
            cells.append(math.nan if row[2] == "" else float(row[2]))
    margin = np.array(cells).reshape(len(alphas), len(betas))
    curve: list[tuple[float, float]] = []
    curve_path = path + ".curve.csv"
    try:
        with open(curve_path, newline="") as fh:
            reader = csv.reader(fh)
            next(reader)
            curve = [(float(r[0]), float(r[1])) for r in reader]
    except FileNotFoundError:
        pass
    ag, bg = np.array(alphas), np.array(betas)
    return PhaseScanResult(
        formula="",
        spec={},
        alpha_grid=ag,
        beta_grid=bg,
        margin=margin,
        zero_curve=curve,
        window=(float(ag[0]), float(ag[-1]), float(bg[0]), float(bg[-1])),
        clipped_window=(),
    )
