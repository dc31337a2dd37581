"""Published closed-form identities, transcribed for cross-checking.

Nothing in the computation path reads these; they exist so ``verify`` and
the test-suite can compare numerical results against the printed forms.
"""
from __future__ import annotations

import csv
from importlib import resources
from math import cos, sin

import numpy as np

from scrteleport.qcore import StateVector
from scrteleport.teleport.states import SecretState

# U^dagger P U for the maximal scrambler: single term, coefficient -1.
MAX_SCRAMBLING_TABLE = {
    "XII": ("XZZ", -1.0),
    "IXI": ("ZXZ", -1.0),
    "IIX": ("ZZX", -1.0),
    "YII": ("YXX", -1.0),
    "IYI": ("XYX", -1.0),
    "IIY": ("XXY", -1.0),
    "ZII": ("ZYY", -1.0),
    "IZI": ("YZY", -1.0),
    "IIZ": ("YYZ", -1.0),
}

_TRIG = {
    "s3c": lambda s, c: s**3 * c,
    "s2c2": lambda s, c: s**2 * c**2,
    "sc3": lambda s, c: s * c**3,
    "s4": lambda s, c: s**4,
    "sc": lambda s, c: s * c,
    "c2": lambda s, c: c**2,
    "c4": lambda s, c: c**4,
    "s2": lambda s, c: s**2,
}

# Partial-scrambler expansions: (trig factor, sign, Pauli strings).
PARTIAL_SCRAMBLING_TABLE = {
    "XII": [("s3c", -1, "IIY IYI YYY"), ("s2c2", -1, "XXX"), ("s2c2", 1, "ZXZ ZZX"),
            ("sc3", 1, "YII"), ("s4", -1, "XZZ"), ("sc", 1, "YXX"), ("c2", 1, "XII")],
    "IXI": [("s3c", -1, "IIY YII YYY"), ("s2c2", -1, "XXX"), ("s2c2", 1, "XZZ ZZX"),
            ("sc3", 1, "IYI"), ("s4", -1, "ZXZ"), ("sc", 1, "XYX"), ("c2", 1, "IXI")],
    "IIX": [("s3c", -1, "IYI YII YYY"), ("s2c2", -1, "XXX"), ("s2c2", 1, "XZZ ZXZ"),
            ("sc3", 1, "IIY"), ("s4", -1, "ZZX"), ("sc", 1, "XXY"), ("c2", 1, "IIX")],
    "YII": [("s2c2", -1, "IIY IYI YYY"), ("sc3", -1, "XXX"), ("sc3", 1, "ZXZ ZZX"),
            ("s3c", -1, "XZZ"), ("c4", 1, "YII"), ("sc", -1, "XII"), ("s2", -1, "YXX")],
    "IYI": [("s2c2", -1, "IIY YII YYY"), ("sc3", -1, "XXX"), ("sc3", 1, "XZZ ZZX"),
            ("s3c", -1, "ZXZ"), ("c4", 1, "IYI"), ("sc", -1, "IXI"), ("s2", -1, "XYX")],
    "IIY": [("s2c2", -1, "IYI YII YYY"), ("sc3", -1, "XXX"), ("sc3", 1, "XZZ ZXZ"),
            ("s3c", -1, "ZZX"), ("c4", 1, "IIY"), ("sc", -1, "IIX"), ("s2", -1, "XXY")],
    "ZII": [("c2", 1, "ZII"), ("s2", -1, "ZYY"), ("sc", -1, "YXZ YZX")],
    "IZI": [("c2", 1, "IZI"), ("s2", -1, "YZY"), ("sc", -1, "XYZ ZYX")],
    "IIZ": [("c2", 1, "IIZ"), ("s2", -1, "YYZ"), ("sc", -1, "XZY ZXY")],
}


def printed_partial_expansion(pauli: str, theta: float) -> dict[str, float]:
    """Coefficients of U(theta)^dagger P U(theta) as printed, evaluated at ``theta``."""
    s, c = sin(theta), cos(theta)
    out: dict[str, float] = {}
    for factor, sign, strings in PARTIAL_SCRAMBLING_TABLE[pauli]:
        value = sign * _TRIG[factor](s, c)
        for string in strings.split():
            out[string] = out.get(string, 0.0) + value
    return out


_BELL_ROWS = np.array(
    [[1, 0, 0, 1], [0, 1, 1, 0], [1, 0, 0, -1], [0, 1, -1, 0]], dtype=complex
) / np.sqrt(2)


def bell_expand(state: StateVector) -> np.ndarray:
    """Bob-qubit vectors c[i, j, k] with |Psi> = sum b_ijk (x) c[i, j, k].

    b_ijk = |beta_i>_{05} |beta_j>_{14} |beta_k>_{23}; result shape (4, 4, 4, 2).
    """
    t = state.as_tensor().transpose(0, 5, 1, 4, 2, 3, 6).reshape(4, 4, 4, 2)
    b = _BELL_ROWS.conj()
    return np.einsum("ia,jb,kc,abcd->ijkd", b, b, b, t)


def printed_bell_expansion(secret: SecretState, theta: float) -> np.ndarray:
    """The printed Bell-basis expansion of the scrambled 7-qubit state."""
    al, be = secret.alpha, secret.beta
    psi = np.array([al, be])
    z_psi = np.array([al, -be])
    x_psi = np.array([be, al])
    y_psi = np.array([-be, al])
    s, c = sin(theta), cos(theta)
    s2sq = sin(2 * theta) ** 2
    out = np.zeros((4, 4, 4, 2), dtype=complex)

    def add(keys: str, coef: complex, vec: np.ndarray):
        for key in keys.split():
            i, j, k = (int(ch) for ch in key)
            out[i, j, k] += coef * vec / 8

    add("000", 4, psi)

    add("112 121 233 323 332", s2sq, z_psi)
    add("200", 4 * c**2, z_psi)
    add("211", -4 * s**4, z_psi)
    add("123 132 213 231", 4j * s**3 * c, z_psi)
    add("312 321", -4j * s * c**3, z_psi)

    add("100", 4 * c**2, x_psi)
    add("111 313 331", -s2sq, x_psi)
    add("311", 4j * s * c**3, x_psi)
    add("133", 4 * s**4, x_psi)
    add("113 131 333", -4j * s**3 * c, x_psi)
    add("300", 2j * sin(2 * theta), x_psi)

    add("300", 4 * c**4, y_psi)
    add("100", 4j * s * c**3, y_psi)
    add("212 221", -4j * s * c**3, y_psi)
    add("001 010", -4j * s**3 * c, y_psi)
    add("122", 4j * s**3 * c, y_psi)
    add("322", -4 * s**4, y_psi)
    add("003 030 113 131 311", -s2sq, y_psi)
    add("223 232 333", s2sq, y_psi)
    add("111", 1j * sin(4 * theta), y_psi)
    return out


# Published mean absolute gap (in percent) between the theory column and
# each experimental column, keyed by (fixture, column).
PUBLISHED_ERRORS = {
    ("table4", "qiskit"): 0.225,
    ("table5", "qiskit"): 0.190,
    ("table4", "ibm_oslo"): 0.219,
    ("table5", "ibm_oslo"): 0.114,
    ("table6", "qiskit"): 0.279,
    ("table7", "qiskit"): 0.360,
    ("table6", "ibm_oslo"): 0.329,
    ("table7", "ibm_oslo"): 0.401,
}


def fixture_path(name: str):
    """Path-like handle to ``fixtures/paper-tables/<name>.csv``."""
    return resources.files("scrteleport").joinpath("fixtures", "paper-tables", f"{name}.csv")


def load_fixture(name: str) -> list[dict[str, str]]:
    with fixture_path(name).open("r", newline="") as fh:
        return list(csv.DictReader(fh))
