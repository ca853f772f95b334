"""Hamiltonians as real-weighted sums of hermitian Pauli strings."""
import math
from dataclasses import dataclass

import numpy as np

from .linalg_core import as_matrix, commutator, hs_inner, DimensionError
from .pauli import PauliString, parse_pauli, string_to_matrix

ASSUMPTION_TOL = 1e-12


@dataclass(frozen=True)
class OperatorTerm:
    coefficient: float
    string: PauliString

    def __post_init__(self):
        c = float(self.coefficient)
        if not math.isfinite(c):
            raise ValueError(f"non-finite coefficient {self.coefficient!r} on {self.string}")
        if self.string.phase != 0:
            raise ValueError(f"term strings must carry phase +1, got {self.string}")
        object.__setattr__(self, "coefficient", c)


@dataclass(frozen=True)
class HamiltonianSpec:
    qubit_count: int
    terms: tuple

    def __post_init__(self):
        terms = tuple(self.terms)
        if not terms:
            raise ValueError("a Hamiltonian needs at least one term")
        for t in terms:
            if t.string.num_qubits != self.qubit_count:
                raise ValueError(
                    f"term {t.string} acts on {t.string.num_qubits} qubits, "
                    f"expected {self.qubit_count}"
                )
        object.__setattr__(self, "terms", terms)

    @classmethod
    def from_pairs(cls, pairs):
        """``[(1.0, "ZI"), (2.0, "IX")]`` -> spec."""
        terms = tuple(
            OperatorTerm(c, s if isinstance(s, PauliString) else parse_pauli(s))
            for c, s in pairs
        )
        if not terms:
            raise ValueError("a Hamiltonian needs at least one term")
        return cls(terms[0].string.num_qubits, terms)


@dataclass(frozen=True)
class TwoSpinParams:
    omega1: float
    omega2: float
    eps: float
    hbar: float = 1.0

    def __post_init__(self):
        _check_finite(self)
        if self.eps < 0:
            raise ValueError(f"eps must be >= 0, got {self.eps}")
        if self.hbar <= 0:
            raise ValueError(f"hbar must be > 0, got {self.hbar}")


@dataclass(frozen=True)
class TripleSpinParams:
    omega1: float
    omega2: float
    omega3: float
    gamma12: float = 0.0
    gamma13: float = 0.0
    gamma23: float = 0.0
    eps: float = 0.0
    hbar: float = 1.0

    def __post_init__(self):
        _check_finite(self)
        if self.eps < 0:
            raise ValueError(f"eps must be >= 0, got {self.eps}")
        if self.hbar <= 0:
            raise ValueError(f"hbar must be > 0, got {self.hbar}")


def _check_finite(params):
    for name, value in vars(params).items():
        if not math.isfinite(float(value)):
            raise ValueError(f"{name} must be finite, got {value!r}")


def build_matrix(spec):
    dim = 2**spec.qubit_count
    h = np.zeros((dim, dim), dtype=np.complex128)
    for term in spec.terms:
        if term.string.num_qubits != spec.qubit_count:
            raise ValueError(f"mixed qubit counts in Hamiltonian ({term.string})")
        if term.coefficient != 0.0:
            h += term.coefficient * string_to_matrix(term.string)
    return h


def preset_H2(p):
    """hbar w1 Z(x)I + hbar w2 I(x)X + eps Z(x)X; block diagonal, product eigenstates."""
    return HamiltonianSpec.from_pairs(
        [(p.hbar * p.omega1, "ZI"), (p.hbar * p.omega2, "IX"), (p.eps, "ZX")]
    )


def preset_K2(p):
    """Same single-spin terms as ``preset_H2`` with the coupling factors swapped: eps X(x)Z."""
    return HamiltonianSpec.from_pairs(
        [(p.hbar * p.omega1, "ZI"), (p.hbar * p.omega2, "IX"), (p.eps, "XZ")]
    )


def _triple(p, interaction):
    return HamiltonianSpec.from_pairs(
        [
            (p.hbar * p.omega1, "XII"),
            (p.hbar * p.omega2, "IYI"),
            (p.hbar * p.omega3, "IIZ"),
            (p.gamma12, "XYI"),
            (p.gamma13, "XIZ"),
            (p.gamma23, "IYZ"),
            (p.eps, interaction),
        ]
    )


def preset_H3(p):
    return _triple(p, "XYZ")


def preset_K3(p):
    return _triple(p, "ZYX")


PRESETS = {
    "H2": (preset_H2, TwoSpinParams),
    "K2": (preset_K2, TwoSpinParams),
    "H3": (preset_H3, TripleSpinParams),
    "K3": (preset_K3, TripleSpinParams),
}


@dataclass(frozen=True)
class AssumptionReport:
    noncommuting: bool
    orthogonal: bool
    commutator_norm: float
    hs_product: complex

    @property
    def ok(self):
        return self.noncommuting and self.orthogonal

    def warnings(self):
        out = []
        if not self.noncommuting:
            out.append(f"[A,B] vanishes (max entry {self.commutator_norm:.3e})")
        if not self.orthogonal:
            out.append(f"<A,B>_HS = {self.hs_product:.6g} is not zero")
        return out


def validate_assumptions(a, b):
    """Check [A,B] != 0 and <A,B>_HS = 0; violations are reported, not raised."""
    a = as_matrix(a, "a")
    b = as_matrix(b, "b")
    if a.shape != b.shape:
        raise DimensionError(f"A is {a.shape}, B is {b.shape}")
    c = float(np.max(np.abs(commutator(a, b))))
    ip = hs_inner(a, b)
    return AssumptionReport(
        noncommuting=c > ASSUMPTION_TOL,
        orthogonal=abs(ip) <= ASSUMPTION_TOL,
        commutator_norm=c,
        hs_product=ip,
    )


def parse_terms(text):
    """Parse the ``<coefficient> <pauli-string>`` term-list format."""
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected '<coefficient> <pauli-string>', got {raw!r}")
        try:
            coeff = float(parts[0])
        except ValueError:
            raise ValueError(f"line {lineno}: bad coefficient {parts[0]!r}") from None
        pairs.append((coeff, parse_pauli(parts[1])))
    if not pairs:
        raise ValueError("term list is empty")
    n = pairs[0][1].num_qubits
    for c, s in pairs:
        if s.num_qubits != n:
            raise ValueError(f"mixed qubit counts in term list ({pairs[0][1]} vs {s})")
    return HamiltonianSpec.from_pairs(pairs)
