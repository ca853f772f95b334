"""Pauli strings with exact phases.

A ``PauliString`` is ``i**phase`` times a tensor product of single-qubit
letters I, X, Y, Z.  The phase is stored as an integer in ``range(4)`` so
group arithmetic never touches floating point.
"""
from dataclasses import dataclass
from functools import reduce

import numpy as np

LETTERS = "IXYZ"

SIGMA = {
    "I": np.eye(2, dtype=np.complex128),
    "X": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "Z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}

PHASE_VALUES = (1, 1j, -1, -1j)
_PHASE_PREFIX = ("", "i", "-", "-i")

# a*b = i**k * c for single letters; missing pairs involve I or a repeat
_LETTER_PRODUCT = {
    ("X", "Y"): (1, "Z"),
    ("Y", "Z"): (1, "X"),
    ("Z", "X"): (1, "Y"),
    ("Y", "X"): (3, "Z"),
    ("Z", "Y"): (3, "X"),
    ("X", "Z"): (3, "Y"),
}


def _letter_product(a, b):
    if a == "I":
        return 0, b
    if b == "I":
        return 0, a
    if a == b:
        return 0, "I"
    return _LETTER_PRODUCT[a, b]


@dataclass(frozen=True, order=False)
class PauliString:
    letters: str
    phase: int = 0

    def __post_init__(self):
        letters = self.letters.upper()
        if not letters or any(c not in LETTERS for c in letters):
            raise ValueError(f"invalid Pauli letters {self.letters!r}")
        object.__setattr__(self, "letters", letters)
        object.__setattr__(self, "phase", int(self.phase) % 4)

    @property
    def num_qubits(self):
        return len(self.letters)

    @property
    def is_hermitian(self):
        return self.phase in (0, 2)

    @property
    def is_identity(self):
        return set(self.letters) == {"I"}

    @property
    def coefficient(self):
        return PHASE_VALUES[self.phase]

    def sort_key(self):
        return (self.letters, self.phase)

    def __str__(self):
        return _PHASE_PREFIX[self.phase] + self.letters

    def __mul__(self, other):
        return multiply(self, other)


def parse_pauli(text):
    """Parse ``ZX``, ``+ZX``, ``-XYZ``, ``iZ``, ``-iYZX``.

    Letters are case-insensitive. A *lowercase* ``i`` directly after the
    optional sign is read as the imaginary unit, so a string that starts
    with the identity must spell it ``I``.
    """
    if not isinstance(text, str) or not text or any(c.isspace() for c in text):
        raise ValueError(f"invalid Pauli string {text!r}")
    s = text
    phase = 0
    if s[0] in "+-":
        phase = 2 if s[0] == "-" else 0
        s = s[1:]
    if s.startswith("i"):
        phase += 1
        s = s[1:]
    if not s:
        raise ValueError(f"Pauli string {text!r} has no letters")
    return PauliString(s, phase)


def _check_same_size(a, b):
    if a.num_qubits != b.num_qubits:
        raise ValueError(
            f"qubit-count mismatch: {a} has {a.num_qubits}, {b} has {b.num_qubits}"
        )


def string_to_matrix(s):
    m = reduce(np.kron, (SIGMA[c] for c in s.letters))
    return PHASE_VALUES[s.phase] * m


def multiply(a, b):
    _check_same_size(a, b)
    phase = a.phase + b.phase
    out = []
    for x, y in zip(a.letters, b.letters):
        k, c = _letter_product(x, y)
        phase += k
        out.append(c)
    return PauliString("".join(out), phase)


def commutes(a, b):
    _check_same_size(a, b)
    clashes = sum(1 for x, y in zip(a.letters, b.letters) if x != "I" and y != "I" and x != y)
    return clashes % 2 == 0


def closure(generators):
    """All products of ``generators`` (phases included), sorted by letters then phase."""
    gens = list(generators)
    if not gens:
        raise ValueError("closure needs at least one generator")
    for g in gens[1:]:
        _check_same_size(gens[0], g)
    group = set(gens)
    frontier = list(gens)
    while frontier:
        fresh = []
        for x in frontier:
            for g in gens:
                y = multiply(x, g)
                if y not in group:
                    group.add(y)
                    fresh.append(y)
        frontier = fresh
    return sorted(group, key=PauliString.sort_key)


def pauli_group_order(num_qubits):
    return 4 ** (num_qubits + 1)
