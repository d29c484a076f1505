"""Hamiltonian families H(s, T) on the scaled time interval s in [0, 1].

A family packages an evaluator (s, T) -> Hermitian matrix together with an
optional analytic s-derivative and two flags: whether the matrix genuinely
depends on the total time T, and whether the sweep closes into a loop
(H(0, T) = H(1, T)).  Built-ins cover the Landau-Zener sweep, the rotating
cone (Berry-phase testbed), constant matrices, a declarative
polynomial/trigonometric custom grammar, and the dual construction
H_dual = -U' H U whose exact propagator is the adjoint of the base
propagator U.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import InvalidParameter, NonUnitaryOracle, SpecError
from .numerics import adjoint, as_matrix, frobenius_norm, hermiticity_defect

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


@dataclass
class HamiltonianFamily:
    name: str
    dim: int
    evaluate: Callable
    derivative_in_s: Optional[Callable] = None
    t_dependent: bool = False
    closed_loop: bool = False
    evaluate_grid: Optional[Callable] = None

    def grid_values(self, s_grid, T):
        """Stack of H(s, T) over an array of s values."""
        if self.evaluate_grid is not None:
            return self.evaluate_grid(np.asarray(s_grid, dtype=float), T)
        return np.stack([self.evaluate(float(s), T) for s in s_grid])

    def derivative(self, s, T, h=1e-5):
        """dH/ds, analytic when available, else central differences."""
        if self.derivative_in_s is not None:
            return self.derivative_in_s(s, T)
        return (self.evaluate(s + h, T) - self.evaluate(s - h, T)) / (2.0 * h)

    def derivative_grid(self, s_grid, T, h=1e-5):
        if self.derivative_in_s is not None:
            return np.stack([self.derivative_in_s(float(s), T) for s in s_grid])
        return np.stack([self.derivative(float(s), T, h=h) for s in s_grid])

    def max_level_spread(self, T, samples=129):
        """Upper estimate of max_s (E_max - E_min), used to size s-grids."""
        s = np.linspace(0.0, 1.0, samples)
        w = np.linalg.eigvalsh(self.grid_values(s, T))
        return float(np.max(w[:, -1] - w[:, 0]))


@dataclass
class FamilySpec:
    """Declarative description of a family, the config-file representation."""
    name: str
    kind: str
    parameters: dict = field(default_factory=dict)
    base: Optional["FamilySpec"] = None

    @classmethod
    def from_dict(cls, d):
        if not isinstance(d, dict):
            raise SpecError("family spec must be a mapping")
        kind = d.get("kind")
        if kind not in BUILTIN_KINDS:
            raise SpecError(f"unknown family kind {kind!r}")
        base = None
        if kind == "dual_of":
            if "base" not in d:
                raise SpecError("dual_of requires a 'base' family spec")
            base = cls.from_dict(d["base"])
        params = {k: v for k, v in d.items() if k not in ("kind", "name", "base")}
        return cls(name=d.get("name", kind), kind=kind, parameters=params, base=base)

    def to_dict(self):
        out = {"kind": self.kind, "name": self.name, **self.parameters}
        if self.base is not None:
            out["base"] = self.base.to_dict()
        return out


def landau_zener(delta=1.0, v=2.0):
    """H(s) = delta*sx + v*(2s-1)*sz, the T-independent avoided crossing."""
    if delta <= 0:
        raise InvalidParameter("landau_zener needs delta > 0 (the gap would close)")

    def evaluate(s, T=None):
        return delta * SIGMA_X + v * (2.0 * s - 1.0) * SIGMA_Z

    def derivative(s, T=None):
        return 2.0 * v * SIGMA_Z

    def evaluate_grid(s, T=None):
        return delta * SIGMA_X + v * (2.0 * s - 1.0)[:, None, None] * SIGMA_Z

    return HamiltonianFamily("landau_zener", 2, evaluate, derivative,
                             evaluate_grid=evaluate_grid)


def rotating_cone(omega0=1.0, theta=np.pi / 3):
    """Level splitting omega0 around a cone of half-angle theta; closed loop."""
    if omega0 <= 0:
        raise InvalidParameter("rotating_cone needs omega0 > 0")
    if not 0.0 <= theta <= np.pi:
        raise InvalidParameter("rotating_cone needs 0 <= theta <= pi")

    def bloch(s):
        return (np.sin(theta) * np.cos(2 * np.pi * s),
                np.sin(theta) * np.sin(2 * np.pi * s),
                np.cos(theta))

    def evaluate(s, T=None):
        nx, ny, nz = bloch(s)
        return 0.5 * omega0 * (nx * SIGMA_X + ny * SIGMA_Y + nz * SIGMA_Z)

    def derivative(s, T=None):
        dn = 2 * np.pi * np.sin(theta)
        return 0.5 * omega0 * dn * (-np.sin(2 * np.pi * s) * SIGMA_X
                                    + np.cos(2 * np.pi * s) * SIGMA_Y)

    def evaluate_grid(s, T=None):
        nx, ny, nz = bloch(s)
        return 0.5 * omega0 * (nx[:, None, None] * SIGMA_X
                               + ny[:, None, None] * SIGMA_Y
                               + nz * SIGMA_Z)

    return HamiltonianFamily("rotating_cone", 2, evaluate, derivative,
                             closed_loop=True, evaluate_grid=evaluate_grid)


def constant(matrix, name="constant"):
    h0 = as_matrix(matrix)
    if hermiticity_defect(h0) > 1e-12 * max(frobenius_norm(h0), 1.0):
        raise SpecError("constant family needs a Hermitian matrix")
    zero = np.zeros_like(h0)

    return HamiltonianFamily(
        name, h0.shape[0],
        evaluate=lambda s, T=None: h0.copy(),
        derivative_in_s=lambda s, T=None: zero.copy(),
        closed_loop=True,
        evaluate_grid=lambda s, T=None: np.broadcast_to(h0, (len(s),) + h0.shape).copy(),
    )


# --- custom polynomial/trigonometric grammar --------------------------------
#
# H(s, T) = sum_m c_m(s, T) * B_m  with Hermitian basis matrices B_m and
#   c_m(s, T) = sum over terms of  c * s**a * (1/T)**b * {1 | cos(2 pi k s) | sin(2 pi k s)}
# Each term is a mapping with keys c, and optionally s_pow, invT_pow, cos_k, sin_k.

def _term_value(term, s, T):
    v = term["c"] * s ** term.get("s_pow", 0)
    b = term.get("invT_pow", 0)
    if b:
        v = v / T ** b
    if "cos_k" in term:
        v = v * np.cos(2 * np.pi * term["cos_k"] * s)
    if "sin_k" in term:
        v = v * np.sin(2 * np.pi * term["sin_k"] * s)
    return v


def _term_derivative(term, s, T):
    a = term.get("s_pow", 0)
    k_cos = term.get("cos_k")
    k_sin = term.get("sin_k")
    d = 0.0
    if a:
        inner = dict(term, s_pow=a - 1)
        inner["c"] = term["c"] * a
        d = d + _term_value(inner, s, T)
    if k_cos is not None:
        # d/ds cos -> -2 pi k sin, with the power factor unchanged
        swapped = {k: v for k, v in term.items() if k != "cos_k"}
        swapped["sin_k"] = k_cos
        swapped["c"] = -2 * np.pi * k_cos * term["c"]
        d = d + _term_value(swapped, s, T)
    if k_sin is not None:
        swapped = {k: v for k, v in term.items() if k != "sin_k"}
        swapped["cos_k"] = k_sin
        swapped["c"] = 2 * np.pi * k_sin * term["c"]
        d = d + _term_value(swapped, s, T)
    return d


def _validate_terms(terms):
    if not isinstance(terms, (list, tuple)) or not terms:
        raise SpecError("coefficient must be a non-empty list of terms")
    for t in terms:
        if not isinstance(t, dict) or "c" not in t:
            raise SpecError(f"malformed coefficient term {t!r}")
        for key in t:
            if key not in ("c", "s_pow", "invT_pow", "cos_k", "sin_k"):
                raise SpecError(f"unknown key {key!r} in coefficient term")
        if not isinstance(t["c"], (int, float)):
            raise SpecError("term coefficient 'c' must be a real number")


def custom_polynomial(basis, coefficients, name="custom"):
    """Family from Hermitian basis matrices and per-matrix coefficient terms."""
    if len(basis) != len(coefficients):
        raise SpecError("need one coefficient list per basis matrix")
    if not basis:
        raise SpecError("need at least one basis matrix")
    mats = []
    for b in basis:
        m = as_matrix(b)
        if hermiticity_defect(m) > 1e-12 * max(frobenius_norm(m), 1.0):
            raise SpecError("non-Hermitian basis matrix in custom family")
        mats.append(m)
    dim = mats[0].shape[0]
    if any(m.shape[0] != dim for m in mats):
        raise SpecError("basis matrices must share one dimension")
    for terms in coefficients:
        _validate_terms(terms)
    stack = np.stack(mats)
    t_dependent = any(t.get("invT_pow", 0) for terms in coefficients for t in terms)

    def coeffs(s, T):
        return np.array([sum(_term_value(t, s, T) for t in terms)
                         for terms in coefficients])

    def evaluate(s, T=1.0):
        return np.tensordot(coeffs(s, T), stack, axes=1)

    def derivative(s, T=1.0):
        d = np.array([sum(_term_derivative(t, s, T) for t in terms)
                      for terms in coefficients])
        return np.tensordot(d, stack, axes=1)

    def evaluate_grid(s, T=1.0):
        c = np.stack([np.broadcast_to(sum(_term_value(t, s, T) for t in terms), s.shape)
                      for terms in coefficients], axis=1)
        return np.tensordot(c, stack, axes=1)

    closed = all(
        frobenius_norm(evaluate(0.0, T) - evaluate(1.0, T)) <= 1e-12
        for T in (1.0, 7.0)
    )
    return HamiltonianFamily(name, dim, evaluate, derivative,
                             t_dependent=t_dependent, closed_loop=closed,
                             evaluate_grid=evaluate_grid)


# --- dual (Marzlin-Sanders style) construction ------------------------------

def build_dual_family(base, propagator_oracle, name=None):
    """Family H_dual(s, T) = -U'(s, T) H(s, T) U(s, T).

    `propagator_oracle(s, T)` must return the exact evolution operator of the
    base family; it may also accept an array of s values and return a stack.
    The exact propagator of the dual family is then the adjoint U'(s, T).
    Since dU/ds = -i T H U, the s-derivative is -U' (dH/ds) U exactly.
    """
    eye = np.eye(base.dim)

    def _unitary(u, s, T):
        drift = np.max(np.abs(adjoint(u) @ u - eye))
        if drift > 1e-8:
            raise NonUnitaryOracle(
                f"oracle drift {drift:.3e} at s={s}, T={T} (upstream integration failure)")
        return u

    def evaluate(s, T):
        u = _unitary(np.asarray(propagator_oracle(s, T)), s, T)
        return -adjoint(u) @ base.evaluate(s, T) @ u

    def derivative(s, T):
        u = np.asarray(propagator_oracle(s, T))
        return -adjoint(u) @ base.derivative(s, T) @ u

    def evaluate_grid(s, T):
        u = np.asarray(propagator_oracle(s, T))
        _unitary(u[-1], float(s[-1]), T)
        h = base.grid_values(s, T)
        return -np.einsum("tba,tbc,tcd->tad", u.conj(), h, u)

    return HamiltonianFamily(name or f"dual_of_{base.name}", base.dim,
                             evaluate, derivative, t_dependent=True,
                             evaluate_grid=evaluate_grid)


# --- registry ---------------------------------------------------------------

BUILTIN_KINDS = {
    "landau_zener": {"delta": "gap parameter (> 0)", "v": "sweep rate"},
    "rotating_cone": {"omega0": "level splitting (> 0)", "theta": "cone half-angle [0, pi]"},
    "constant": {"matrix": "Hermitian matrix as nested [re, im] pairs"},
    "custom_matrix_polynomial": {
        "basis": "list of Hermitian matrices",
        "coefficients": "per-matrix term lists {c, s_pow, invT_pow, cos_k, sin_k}",
    },
    "dual_of": {"base": "family spec of the base system"},
}


def _matrix_from_json(obj):
    try:
        a = np.asarray(obj, dtype=float)
    except (TypeError, ValueError) as exc:
        raise SpecError(f"cannot parse matrix: {exc}") from None
    if a.ndim == 3 and a.shape[-1] == 2:  # nested [re, im] pairs
        return a[..., 0] + 1j * a[..., 1]
    if a.ndim == 2:
        return a.astype(complex)
    raise SpecError(f"cannot parse matrix of shape {a.shape}")


def parse_family(spec):
    """Build the evaluator described by a FamilySpec (or raw dict)."""
    if isinstance(spec, dict):
        spec = FamilySpec.from_dict(spec)
    kind, p = spec.kind, spec.parameters
    try:
        if kind == "landau_zener":
            fam = landau_zener(delta=p.get("delta", 1.0), v=p.get("v", 2.0))
        elif kind == "rotating_cone":
            fam = rotating_cone(omega0=p.get("omega0", 1.0),
                                theta=p.get("theta", np.pi / 3))
        elif kind == "constant":
            if "matrix" not in p:
                raise SpecError("constant family needs a 'matrix'")
            fam = constant(_matrix_from_json(p["matrix"]))
        elif kind == "custom_matrix_polynomial":
            if "basis" not in p or "coefficients" not in p:
                raise SpecError("custom family needs 'basis' and 'coefficients'")
            fam = custom_polynomial([_matrix_from_json(b) for b in p["basis"]],
                                    p["coefficients"])
        elif kind == "dual_of":
            from .evolution import propagator_oracle  # deferred: avoids an import cycle
            base = parse_family(spec.base)
            fam = build_dual_family(base, propagator_oracle(base))
        else:  # pragma: no cover - caught by FamilySpec.from_dict
            raise SpecError(f"unknown family kind {kind!r}")
    except TypeError as exc:
        raise SpecError(f"bad parameters for {kind}: {exc}") from None
    fam.name = spec.name
    return fam


def list_builtin_kinds():
    """Stable-ordered (kind, parameter-schema) pairs for display."""
    return sorted(BUILTIN_KINDS.items())
