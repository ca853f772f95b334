"""Command-line front end.

    spinspec spectrum --model K2 --omega1 1 --omega2 2 --eps 0.5
    spinspec sweep --model H2 --omega1 1 --omega2 2 --param eps --range 0:3 --steps 301
    spinspec verify-paper

Exit codes: 0 success, 1 invalid input, 2 eigensolver failure,
3 verify-paper found a failing check.
"""
import argparse
import json
import os
import sys
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import entanglement as ent
from .hamiltonian import PRESETS, build_matrix, parse_terms
from .linalg_core import ConvergenceError, eigh
from .spectra import format_sweep_csv, partition_function, sweep
from .verify import verify_paper

COMMANDS = ("build", "spectrum", "sweep", "partition", "entangle", "verify-paper")
PARAM_KEYS = (
    "omega1", "omega2", "omega3", "gamma12", "gamma13", "gamma23",
    "eps", "hbar", "inverse_temperature",
)
OTHER_KEYS = (
    "model", "terms", "param", "range", "steps", "out", "format", "exact_tol",
    "state", "normalize", "inject_fault",
)
REQUIRED = {
    "H2": ("omega1", "omega2", "eps"),
    "K2": ("omega1", "omega2", "eps"),
    "H3": ("omega1", "omega2", "omega3", "eps"),
    "K3": ("omega1", "omega2", "omega3", "eps"),
}

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC, EXIT_VERIFY = 0, 1, 2, 3


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    model: str = None
    terms: str = None
    params: dict = field(default_factory=dict)
    param: str = None
    lo: float = None
    hi: float = None
    steps: int = None
    out: str = None
    format: str = "csv"
    exact_tol: float = None
    state: str = None
    normalize: bool = False
    inject_fault: str = None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _build_parser():
    parser = _Parser(prog="spinspec", description="Pauli-string spin Hamiltonian toolkit")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", help="key = value file; flags override its values")
    parser.add_argument("--model", help="preset H2, K2, H3 or K3")
    parser.add_argument("--terms", help="term-list file, one '<coefficient> <pauli>' per line")
    for key in PARAM_KEYS:
        parser.add_argument("--" + key.replace("_", "-"), dest=key, type=float)
    parser.add_argument("--param", help="swept parameter: eps, omega1, omega2, omega3")
    parser.add_argument("--range", dest="range", help="lo:hi")
    parser.add_argument("--steps", type=int)
    parser.add_argument("--out")
    parser.add_argument("--format", choices=("csv", "json"))
    parser.add_argument("--exact-tol", dest="exact_tol", type=float)
    parser.add_argument("--state", help="JSON amplitude list, or a path to a file holding one")
    parser.add_argument("--normalize", action="store_true", default=None)
    parser.add_argument("--inject-fault", dest="inject_fault", choices=("k2-entry",))
    return parser


def read_config_file(path):
    values = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc.strerror}") from None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in PARAM_KEYS + OTHER_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = value
    return values


def _as_float(key, value):
    try:
        return float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{key} must be a number, got {value!r}") from None


def _parse_range(text):
    try:
        lo, hi = (float(s) for s in str(text).split(":"))
    except ValueError:
        raise ConfigError(f"range must look like lo:hi, got {text!r}") from None
    if not lo < hi:
        raise ConfigError(f"range needs lo < hi, got {text!r}")
    return lo, hi


def parse_config(argv):
    args = vars(_build_parser().parse_args(argv))
    merged = read_config_file(args["config"]) if args.get("config") else {}
    for key, value in args.items():
        if key not in ("command", "config") and value is not None:
            merged[key] = value

    cfg = RunConfig(command=args["command"])
    for key in PARAM_KEYS:
        if key in merged:
            cfg.params[key] = _as_float(key, merged[key])
    cfg.params.setdefault("hbar", 1.0)
    cfg.model = merged.get("model")
    cfg.terms = merged.get("terms")
    cfg.param = merged.get("param")
    cfg.out = merged.get("out")
    cfg.format = merged.get("format", "csv")
    cfg.state = merged.get("state")
    cfg.inject_fault = merged.get("inject_fault")
    cfg.normalize = str(merged.get("normalize", False)).lower() in ("true", "1", "yes")
    if "exact_tol" in merged:
        cfg.exact_tol = _as_float("exact_tol", merged["exact_tol"])
    if "steps" in merged:
        try:
            cfg.steps = int(merged["steps"])
        except ValueError:
            raise ConfigError(f"steps must be an integer, got {merged['steps']!r}") from None
    if "range" in merged:
        cfg.lo, cfg.hi = _parse_range(merged["range"])
    _validate(cfg)
    return cfg


def _validate(cfg):
    if cfg.format not in ("csv", "json"):
        raise ConfigError(f"format must be csv or json, got {cfg.format!r}")
    if cfg.command == "verify-paper":
        return
    if cfg.command == "entangle":
        if not cfg.state:
            raise ConfigError("entangle needs --state")
        return
    if cfg.model and cfg.terms:
        raise ConfigError("give either --model or --terms, not both")
    if not cfg.model and not cfg.terms:
        raise ConfigError(f"{cfg.command} needs --model or --terms")
    if cfg.model and cfg.model not in PRESETS:
        raise ConfigError(f"unknown model {cfg.model!r}; choose one of {', '.join(PRESETS)}")
    if cfg.command == "sweep":
        if not cfg.model:
            raise ConfigError("sweep needs a preset --model")
        if cfg.param is None:
            raise ConfigError("sweep needs --param")
        if cfg.param not in ("eps", "omega1", "omega2", "omega3"):
            raise ConfigError(f"cannot sweep param {cfg.param!r}")
        if cfg.param == "omega3" and cfg.model in ("H2", "K2"):
            raise ConfigError(f"model {cfg.model} has no parameter omega3")
        if cfg.lo is None:
            raise ConfigError("sweep needs --range lo:hi")
        if cfg.steps is None or cfg.steps < 2:
            raise ConfigError("sweep needs --steps >= 2")
    if cfg.command == "partition":
        if "inverse_temperature" not in cfg.params:
            raise ConfigError("partition needs --inverse-temperature")
        if cfg.params["inverse_temperature"] <= 0:
            raise ConfigError("inverse_temperature must be > 0")
    if cfg.model:
        for key in REQUIRED[cfg.model]:
            if key not in cfg.params and not (cfg.command == "sweep" and key == cfg.param):
                raise ConfigError(f"model {cfg.model} needs parameter {key}")


def _model_params(cfg, override=None):
    builder, param_type = PRESETS[cfg.model]
    names = param_type.__dataclass_fields__
    values = {k: v for k, v in cfg.params.items() if k in names}
    if override:
        values.update(override)
    try:
        return builder, param_type(**values)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None


def _hamiltonian(cfg):
    if cfg.terms:
        try:
            text = Path(cfg.terms).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read term list {cfg.terms}: {exc.strerror}") from None
        try:
            return parse_terms(text)
        except ValueError as exc:
            raise ConfigError(f"{cfg.terms}: {exc}") from None
    builder, params = _model_params(cfg)
    return builder(params)


def _num(x):
    return f"{x:.17g}"


def _cnum(z):
    return f"{z.real:.17g}{z.imag:+.17g}j"


def _pair(z):
    return [float(z.real), float(z.imag)]


def _dump_json(obj):
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def _describe(cfg):
    d = {"model": cfg.model} if cfg.model else {"terms": cfg.terms}
    d["parameters"] = dict(sorted(cfg.params.items()))
    return d


def cmd_build(cfg):
    m = build_matrix(_hamiltonian(cfg))
    if cfg.format == "json":
        return _dump_json(
            {**_describe(cfg), "dim": m.shape[0], "matrix": [[_pair(z) for z in row] for row in m]}
        )
    return "".join(",".join(_cnum(z) for z in row) + "\n" for row in m)


def cmd_spectrum(cfg):
    spec = _hamiltonian(cfg)
    s = eigh(build_matrix(spec))
    tangles = ent.eigenvector_tangles(s) if s.dim in (4, 8) else [None] * s.dim
    if cfg.format == "json":
        return _dump_json(
            {
                **_describe(cfg),
                "dim": s.dim,
                "eigenvalues": [float(x) for x in s.eigenvalues],
                "residuals": [float(x) for x in s.residuals],
                "max_residual": s.max_residual,
                "eigenvectors": [[_pair(z) for z in s.eigenvectors[:, k]] for k in range(s.dim)],
                "tangles": [
                    None if t is None else {
                        "measure": t.measure,
                        "value": t.value,
                        "degenerate_basis_flag": t.degenerate_basis_flag,
                    }
                    for t in tangles
                ],
            }
        )
    lines = ["index,eigenvalue,residual,measure,tangle,degenerate"]
    for k in range(s.dim):
        t = tangles[k]
        tail = "," if t is None else f"{t.measure},{_num(t.value)}"
        flag = "" if t is None else str(t.degenerate_basis_flag).lower()
        lines.append(f"{k},{_num(s.eigenvalues[k])},{_num(s.residuals[k])},{tail},{flag}")
    return "\n".join(lines) + "\n"


def cmd_sweep(cfg):
    start = {cfg.param: cfg.lo}
    _, params = _model_params(cfg, override=start)
    _model_params(cfg, override={cfg.param: cfg.hi})
    try:
        s = sweep(cfg.model, params, cfg.param, cfg.lo, cfg.hi, cfg.steps, exact_tol=cfg.exact_tol)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if cfg.format == "json":
        return _dump_json(
            {
                **_describe(cfg),
                "param": cfg.param,
                "grid": [float(x) for x in s.grid],
                "tracks": [[float(x) for x in t] for t in s.tracks],
                "crossings": [
                    {
                        "kind": e.kind,
                        "param": e.parameter_value,
                        "tracks": [e.track_a, e.track_b],
                        "energy": e.energy,
                        "gap": e.gap_at_minimum,
                    }
                    for e in s.crossings
                ],
                "degenerate_intervals": [
                    {"tracks": [iv.track_a, iv.track_b], "from": iv.lo, "to": iv.hi}
                    for iv in s.degenerate_intervals
                ],
                "min_gaps": [
                    {"tracks": [i, j], "gap": g, "param": x}
                    for (i, j), (g, x) in sorted(s.min_gaps.items())
                ],
            }
        )
    return format_sweep_csv(s)


def cmd_partition(cfg):
    s = eigh(build_matrix(_hamiltonian(cfg)))
    r = partition_function(s, cfg.params["inverse_temperature"])
    if cfg.format == "json":
        return _dump_json(
            {**_describe(cfg), "inverse_temperature": r.inverse_temperature,
             "value": r.value, "log_value": r.log_value}
        )
    return f"inverse_temperature,value,log_value\n{_num(r.inverse_temperature)},{_num(r.value)},{_num(r.log_value)}\n"


def _load_state(text, normalize):
    path = Path(text)
    try:
        if not text.lstrip().startswith("[") and path.exists():
            text = path.read_text()
        raw = json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot parse state: {exc}") from None
    if not isinstance(raw, list) or not raw:
        raise ConfigError("state must be a nonempty JSON list")
    amps = []
    for a in raw:
        if isinstance(a, list) and len(a) == 2:
            amps.append(complex(float(a[0]), float(a[1])))
        elif isinstance(a, (int, float)):
            amps.append(complex(a))
        else:
            raise ConfigError(f"amplitude {a!r} is neither a number nor a [re, im] pair")
    try:
        return ent.PureState.from_amplitudes(np.array(amps), normalize=normalize)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def cmd_entangle(cfg):
    st = _load_state(cfg.state, cfg.normalize)
    if st.qubit_count not in (2, 3):
        raise ConfigError(f"entangle supports 2 or 3 qubits, got {st.qubit_count}")
    measure = ent.tangle2(st) if st.qubit_count == 2 else ent.three_tangle(st)
    cuts = [(k,) for k in range(st.qubit_count)]
    schmidt = [ent.schmidt_coefficients(st, c) for c in cuts]
    cut_tangles = ent.single_qubit_tangles(st)
    if cfg.format == "json":
        return _dump_json(
            {
                "qubits": st.qubit_count,
                "measure": measure.measure,
                "value": measure.value,
                "cuts": [
                    {"qubit": c[0], "schmidt": [float(x) for x in sv], "tangle": t,
                     "product": bool(sv[1] <= 1e-9)}
                    for c, sv, t in zip(cuts, schmidt, cut_tangles)
                ],
            }
        )
    lines = [f"measure,value\n{measure.measure},{_num(measure.value)}", "qubit,schmidt_0,schmidt_1,tangle,product"]
    for c, sv, t in zip(cuts, schmidt, cut_tangles):
        lines.append(f"{c[0]},{_num(sv[0])},{_num(sv[1])},{_num(t)},{str(bool(sv[1] <= 1e-9)).lower()}")
    return "\n".join(lines) + "\n"


def cmd_verify(cfg):
    r = verify_paper(hbar=cfg.params.get("hbar", 1.0), fault=cfg.inject_fault)
    if cfg.format == "json":
        text = _dump_json(
            {
                "status": r.status,
                "settings": r.settings,
                "checks": [
                    {"name": c.name, "status": c.status, "measured": c.measured,
                     "expected": c.expected, "tolerance": c.tolerance, "note": c.note}
                    for c in r.checks
                ],
            }
        )
    else:
        lines = ["name,status,measured,expected,tolerance,note"]
        for c in r.checks:
            lines.append(
                f"\"{c.name}\",{c.status},{_num(c.measured)},{_num(c.expected)},"
                f"{_num(c.tolerance)},\"{c.note}\""
            )
        n_pass = sum(c.passed for c in r.checks)
        lines.append(f"# overall: {r.status} ({n_pass}/{len(r.checks)} checks passed)")
        text = "\n".join(lines) + "\n"
    return text, r


def _emit(text, out):
    if not out:
        sys.stdout.write(text)
        return
    target = Path(out)
    fd, tmp = tempfile.mkstemp(dir=target.parent or ".", prefix=f".{target.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


HANDLERS = {
    "build": cmd_build,
    "spectrum": cmd_spectrum,
    "sweep": cmd_sweep,
    "partition": cmd_partition,
    "entangle": cmd_entangle,
}


def run(cfg):
    try:
        if cfg.command == "verify-paper":
            text, report = cmd_verify(cfg)
            _emit(text, cfg.out)
            if not report.passed:
                names = "; ".join(c.name for c in report.failures())
                print(f"spinspec: verify-paper failed: {names}", file=sys.stderr)
                return EXIT_VERIFY
            return EXIT_OK
        _emit(HANDLERS[cfg.command](cfg), cfg.out)
    except ConfigError as exc:
        print(f"spinspec: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ConvergenceError as exc:
        print(f"spinspec: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"spinspec: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


def main(argv=None):
    try:
        cfg = parse_config(sys.argv[1:] if argv is None else argv)
    except ConfigError as exc:
        print(f"spinspec: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
