"""Closed-form spectra, parameter sweeps, crossing detection, partition functions."""
import dataclasses
import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from ._search import golden_section
from .hamiltonian import PRESETS, build_matrix
from .linalg_core import ConvergenceError, eigh

REL_CROSSING_TOL = 1e-9
PARAM_RESOLUTION = 1e-10
SWEEPABLE = ("eps", "omega1", "omega2", "omega3")


@dataclass(frozen=True)
class ClosedFormSpectrum:
    labels: tuple
    values: tuple

    def __post_init__(self):
        if len(self.labels) != len(self.values):
            raise ValueError("labels and values differ in length")
        if not all(math.isfinite(v) for v in self.values):
            raise ValueError("closed-form spectrum has non-finite values")

    def as_dict(self):
        return dict(zip(self.labels, self.values))

    def sorted_values(self):
        return np.sort(np.asarray(self.values, dtype=float))


def closed_form_product_model(alpha, beta, eps, spec_a, spec_b):
    """alpha*l_j + beta*m_k + eps*l_j*m_k with the (j, k) pair of the product eigenvector."""
    out = []
    for j, lam in enumerate(spec_a.eigenvalues):
        for k, mu in enumerate(spec_b.eigenvalues):
            out.append((float(alpha * lam + beta * mu + eps * lam * mu), (j, k)))
    return out


def closed_form_H2(p):
    a = p.hbar * p.omega1
    b = p.hbar * p.omega2
    e = p.eps
    return ClosedFormSpectrum(
        ("E1", "E2", "E3", "E4"),
        (a + b + e, a - b - e, -a + b - e, -a - b + e),
    )


def closed_form_K2(p):
    plus = math.sqrt((p.hbar * (p.omega1 + p.omega2)) ** 2 + p.eps**2)
    minus = math.sqrt((p.hbar * (p.omega1 - p.omega2)) ** 2 + p.eps**2)
    return ClosedFormSpectrum(("k1", "k2", "k3", "k4"), (-plus, plus, -minus, minus))


def closed_form_H3(p):
    """Eigenvalues of the commuting triple-spin family, keyed by the X, Y, Z sign triple."""
    w1, w2, w3 = p.hbar * p.omega1, p.hbar * p.omega2, p.hbar * p.omega3
    out = []
    for s1, s2, s3 in itertools.product((1, -1), repeat=3):
        value = (
            w1 * s1 + w2 * s2 + w3 * s3
            + p.gamma12 * s1 * s2 + p.gamma13 * s1 * s3 + p.gamma23 * s2 * s3
            + p.eps * s1 * s2 * s3
        )
        out.append((value, (s1, s2, s3)))
    return out


def multiset_distance(a, b):
    a = np.sort(np.asarray(a, dtype=float))
    b = np.sort(np.asarray(b, dtype=float))
    if a.shape != b.shape:
        return math.inf
    return float(np.max(np.abs(a - b))) if a.size else 0.0


@dataclass(frozen=True)
class CrossingEvent:
    parameter_value: float
    track_a: int
    track_b: int
    energy: float
    kind: str
    gap_at_minimum: float


@dataclass(frozen=True)
class DegenerateInterval:
    track_a: int
    track_b: int
    lo: float
    hi: float


@dataclass
class SweepResult:
    parameter_name: str
    grid: np.ndarray
    tracks: np.ndarray  # (n_tracks, n_points)
    eigenvalues: np.ndarray  # (n_points, n_tracks), sorted per point
    crossings: list = field(default_factory=list)
    min_gaps: dict = field(default_factory=dict)
    degenerate_intervals: list = field(default_factory=list)
    evaluate: object = field(default=None, repr=False, compare=False)

    @property
    def exact_crossings(self):
        return [c for c in self.crossings if c.kind == "exact"]

    @property
    def avoided_crossings(self):
        return [c for c in self.crossings if c.kind == "avoided"]

    def min_pairwise_gap(self):
        return min(g for g, _ in self.min_gaps.values())


def model_evaluator(model, params, parameter_name):
    """Return ``value -> sorted eigenvalues`` for a preset family with one free parameter."""
    builder, _ = PRESETS[model] if isinstance(model, str) else (model, None)
    if parameter_name not in SWEEPABLE:
        raise ValueError(f"cannot sweep {parameter_name!r}; choose one of {SWEEPABLE}")
    if not hasattr(params, parameter_name):
        raise ValueError(f"{type(params).__name__} has no parameter {parameter_name!r}")

    def evaluate(value):
        p = dataclasses.replace(params, **{parameter_name: float(value)})
        try:
            return eigh(build_matrix(builder(p))).eigenvalues
        except ConvergenceError as exc:
            raise ConvergenceError(
                exc.off_norm, exc.sweeps, context=f"at {parameter_name}={value!r}"
            ) from exc

    return evaluate


def match_tracks(values):
    """Continue eigenvalue curves across grid points.

    ``values`` is ``(n_points, n)`` with each row sorted. Each step assigns
    new eigenvalues to tracks by minimal total distance to a linear
    extrapolation of the previous two points, so transversal crossings are
    followed instead of being reflected.
    """
    n_points, n = values.shape
    tracks = np.empty((n, n_points))
    tracks[:, 0] = values[0]
    for k in range(1, n_points):
        pred = tracks[:, k - 1] if k == 1 else 2.0 * tracks[:, k - 1] - tracks[:, k - 2]
        cost = np.abs(pred[:, None] - values[k][None, :])
        rows, cols = linear_sum_assignment(cost)
        tracks[rows, k] = values[k][cols]
    return tracks


def sweep(model, params, parameter_name, lo, hi, steps, exact_tol=None, refine=True):
    """Diagonalize along a grid in one parameter and classify level crossings.

    ``model`` is a preset name (``"H2"``, ``"K2"``, ``"H3"``, ``"K3"``) or a
    callable ``params -> HamiltonianSpec``.
    """
    lo, hi = float(lo), float(hi)
    if not (math.isfinite(lo) and math.isfinite(hi)) or not lo < hi:
        raise ValueError(f"invalid sweep range [{lo}, {hi}]")
    if int(steps) != steps or steps < 2:
        raise ValueError(f"steps must be an integer >= 2, got {steps!r}")
    evaluate = model_evaluator(model, params, parameter_name)
    grid = np.linspace(lo, hi, int(steps))
    values = np.array([evaluate(x) for x in grid])
    result = SweepResult(
        parameter_name=parameter_name,
        grid=grid,
        tracks=match_tracks(values),
        eigenvalues=values,
        evaluate=evaluate,
    )
    detect_crossings(result, exact_tol=exact_tol, refine=refine)
    return result


def _scale(eigs):
    return max(float(eigs[-1] - eigs[0]), 1.0)


def _rank_pair(column, i, j):
    order = np.argsort(column, kind="stable")
    rank = np.empty_like(order)
    rank[order] = np.arange(order.size)
    return tuple(sorted((int(rank[i]), int(rank[j]))))


def detect_crossings(s, exact_tol=None, refine=True):
    """Locate and classify level crossings in a sweep.

    Candidates per track pair are sign changes of the tracked difference,
    isolated grid zeros, and interior local minima of the gap between
    rank-adjacent tracks. Each candidate is refined by golden-section
    minimization of the rank gap inside its bracket (resolution 1e-10)
    and classified ``exact`` when the minimum gap is at most ``exact_tol``
    (default ``1e-9 * max(spectral diameter, 1)``), else ``avoided``.
    Runs of two or more grid zeros become ``DegenerateInterval`` entries.

    Updates ``s.crossings``, ``s.degenerate_intervals`` and ``s.min_gaps``
    in place and returns the event list.
    """
    grid, tracks, eigs = s.grid, s.tracks, s.eigenvalues
    n_tracks, n = tracks.shape
    scales = np.array([_scale(e) for e in eigs])
    tol_grid = scales * REL_CROSSING_TOL if exact_tol is None else np.full(n, float(exact_tol))
    noise = 64 * np.finfo(float).eps * scales

    events = []
    intervals = []
    min_gaps = {}
    for i, j in itertools.combinations(range(n_tracks), 2):
        d = tracks[i] - tracks[j]
        ad = np.abs(d)
        kmin = int(np.argmin(ad))
        min_gaps[i, j] = (float(ad[kmin]), float(grid[kmin]))
        zero = ad <= tol_grid
        candidates = []

        k = 0
        while k < n:
            if zero[k]:
                start = k
                while k + 1 < n and zero[k + 1]:
                    k += 1
                if k > start:
                    intervals.append(DegenerateInterval(i, j, float(grid[start]), float(grid[k])))
                else:
                    candidates.append((max(k - 1, 0), min(k + 1, n - 1), k))
            k += 1

        for k in range(n - 1):
            if not zero[k] and not zero[k + 1] and np.sign(d[k]) != np.sign(d[k + 1]):
                candidates.append((k, k + 1, k if ad[k] <= ad[k + 1] else k + 1))

        for k in range(1, n - 1):
            if zero[k] or zero[k - 1] or zero[k + 1]:
                continue
            if not (np.sign(d[k - 1]) == np.sign(d[k]) == np.sign(d[k + 1])):
                continue
            if ad[k - 1] - ad[k] > noise[k] and ad[k + 1] - ad[k] >= -noise[k]:
                r_lo, r_hi = _rank_pair(tracks[:, k], i, j)
                if r_hi - r_lo == 1:
                    candidates.append((k - 1, k + 1, k))

        for a, b, c in sorted(candidates, key=lambda t: t[2]):
            ev = _refine(s, i, j, a, b, c, refine, exact_tol)
            events.append(ev)
            if ev.gap_at_minimum < min_gaps[i, j][0]:
                min_gaps[i, j] = (ev.gap_at_minimum, ev.parameter_value)

    events.sort(key=lambda e: (e.parameter_value, e.track_a, e.track_b))
    s.crossings = events
    s.degenerate_intervals = intervals
    s.min_gaps = min_gaps
    return events


def _refine(s, i, j, a, b, c, refine, exact_tol):
    grid, eigs = s.grid, s.eigenvalues
    r_lo, r_hi = _rank_pair(s.tracks[:, c], i, j)
    best_x = float(grid[c])
    best_e = eigs[c]
    best_gap = float(best_e[r_hi] - best_e[r_lo])
    if refine and s.evaluate is not None and b > a:
        evaluate = s.evaluate

        def gap(x):
            e = evaluate(x)
            return float(e[r_hi] - e[r_lo])

        x, g = golden_section(gap, grid[a], grid[b], xtol=PARAM_RESOLUTION)
        if g < best_gap:
            best_x = float(x)
            best_e = evaluate(best_x)
            best_gap = float(best_e[r_hi] - best_e[r_lo])
    tol = REL_CROSSING_TOL * _scale(best_e) if exact_tol is None else float(exact_tol)
    kind = "exact" if best_gap <= tol else "avoided"
    return CrossingEvent(
        parameter_value=best_x,
        track_a=i,
        track_b=j,
        energy=float(0.5 * (best_e[r_lo] + best_e[r_hi])),
        kind=kind,
        gap_at_minimum=max(best_gap, 0.0),
    )


@dataclass(frozen=True)
class PartitionResult:
    inverse_temperature: float
    value: float
    log_value: float


def partition_function(spec, inverse_temperature):
    """Z = sum_k exp(-b * lambda_k), evaluated with the ground-state energy factored out."""
    b = float(inverse_temperature)
    if not math.isfinite(b) or b <= 0:
        raise ValueError(f"inverse temperature must be > 0, got {inverse_temperature!r}")
    lam = np.asarray(spec.eigenvalues, dtype=float)
    e0 = float(lam.min())
    shifted = float(np.sum(np.exp(-b * (lam - e0))))
    log_z = math.log(shifted) - b * e0
    try:
        value = math.exp(log_z)
    except OverflowError:
        value = math.inf
    return PartitionResult(inverse_temperature=b, value=value, log_value=log_z)


def format_sweep_csv(s):
    """Sweep table with crossing events appended as ``#`` comment lines."""
    head = ",".join(["param"] + [f"track_{k}" for k in range(s.tracks.shape[0])])
    lines = [head]
    for k, x in enumerate(s.grid):
        lines.append(",".join(f"{v:.17g}" for v in (x, *s.tracks[:, k])))
    for ev in s.crossings:
        lines.append(
            f"# crossing: kind={ev.kind} param={ev.parameter_value:.17g} "
            f"tracks={ev.track_a},{ev.track_b} energy={ev.energy:.17g} gap={ev.gap_at_minimum:.17g}"
        )
    for iv in s.degenerate_intervals:
        lines.append(
            f"# degenerate: tracks={iv.track_a},{iv.track_b} from={iv.lo:.17g} to={iv.hi:.17g}"
        )
    return "\n".join(lines) + "\n"
