"""Quantum states as finite mixtures of displaced Hermite-Gauss atoms.

The analytic branch supports exact pointwise evaluation, exact derivative
and coordinate-multiplication algebra (the Hermite ladder), exact
displacement composition, and closed-form overlaps via displacement
matrix elements. Non-analytic demo states (the plateau wavefunction)
expose pointwise evaluation only; transforms fall back to quadrature.

Conventions (hbar = 1):
  phi_0(y) = pi^{-1/4} e^{-y^2/2},
  phi_{m+1}(y) = y*sqrt(2/(m+1))*phi_m(y) - sqrt(m/(m+1))*phi_{m-1}(y),
  (D_xi phi)(y) = e^{i(y - xi_x/2).xi_p} phi(y - xi_x)   [per axis],
  D_a D_b = e^{i b /\\ a / 2} D_{a+b},  D_a^dagger = D_{-a}.
"""

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import eval_genlaguerre

from .grid import symplectic_form


def hermite_values(m_max, y):
    """phi_0..phi_m_max at y; returns array of shape (m_max+1,) + y.shape."""
    y = np.asarray(y, dtype=float)
    out = np.empty((m_max + 1,) + y.shape)
    out[0] = np.pi ** (-0.25) * np.exp(-0.5 * y * y)
    if m_max >= 1:
        out[1] = np.sqrt(2.0) * y * out[0]
    for m in range(1, m_max):
        out[m + 1] = y * np.sqrt(2.0 / (m + 1)) * out[m] - np.sqrt(
            m / (m + 1.0)
        ) * out[m - 1]
    return out


@dataclass(frozen=True)
class Atom:
    """coeff * D_alpha (phi_{m_1} x ... x phi_{m_n})."""

    m: tuple
    alpha: tuple
    coeff: complex

    def __post_init__(self):
        if any(int(mi) != mi or mi < 0 for mi in self.m):
            raise ValueError(f"hermite orders must be nonnegative ints, got {self.m}")
        if len(self.alpha) != 2 * len(self.m):
            raise ValueError("displacement length must be 2 * number of axes")

    @property
    def n(self):
        return len(self.m)

    def evaluate(self, points):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        squeeze = np.asarray(points).ndim == 1
        if pts.shape[-1] != self.n:
            raise ValueError(f"points last axis must be {self.n}")
        ax = np.asarray(self.alpha[: self.n])
        ap = np.asarray(self.alpha[self.n :])
        val = np.full(pts.shape[:-1], self.coeff, dtype=complex)
        for i in range(self.n):
            shifted = pts[..., i] - ax[i]
            phi = hermite_values(self.m[i], shifted)[self.m[i]]
            val = val * np.exp(1j * (pts[..., i] - 0.5 * ax[i]) * ap[i]) * phi
        return val[0] if squeeze and val.shape == (1,) else val


def _merge(atoms):
    """Combine atoms with identical (m, alpha); drop negligible ones."""
    acc = {}
    for at in atoms:
        key = (at.m, at.alpha)
        acc[key] = acc.get(key, 0.0) + at.coeff
    scale = max((abs(c) for c in acc.values()), default=0.0)
    return [
        Atom(m, alpha, c)
        for (m, alpha), c in acc.items()
        if abs(c) > 1e-300 and abs(c) > 1e-16 * scale
    ]


class PureState:
    """Finite superposition of displaced Hermite-Gauss atoms."""

    def __init__(self, atoms):
        atoms = list(atoms)
        if not atoms:
            raise ValueError("pure state needs at least one atom")
        n = atoms[0].n
        if any(at.n != n for at in atoms):
            raise ValueError("all atoms must share the number of axes")
        self.atoms = _merge(atoms)
        if not self.atoms:  # everything cancelled; keep an explicit zero
            self.atoms = [Atom(atoms[0].m, atoms[0].alpha, 0.0)]
        self._n = n

    @property
    def n(self):
        return self._n

    @property
    def is_analytic(self):
        return True

    def evaluate(self, points):
        vals = [at.evaluate(points) for at in self.atoms]
        return sum(vals[1:], start=vals[0])

    def scaled(self, c):
        return PureState([Atom(a.m, a.alpha, c * a.coeff) for a in self.atoms])

    def displaced(self, xi):
        """D_xi applied to the state, folded into atom data exactly."""
        xi = tuple(float(v) for v in np.asarray(xi, dtype=float))
        if len(xi) != 2 * self.n:
            raise ValueError("displacement length must be 2n")
        out = []
        for at in self.atoms:
            # D_xi D_alpha = e^{i alpha /\ xi / 2} D_{xi+alpha}
            phase = np.exp(
                0.5j * symplectic_form(np.asarray(at.alpha), np.asarray(xi))
            )
            new_alpha = tuple(a + x for a, x in zip(at.alpha, xi))
            out.append(Atom(at.m, new_alpha, at.coeff * phase))
        return PureState(out)

    def derivative(self, axis):
        """d/dy_axis, exact: D_a(i a_p phi_m + phi_m') per atom."""
        out = []
        for at in self.atoms:
            m = at.m[axis]
            ap = at.alpha[self.n + axis]
            out.append(Atom(at.m, at.alpha, at.coeff * 1j * ap))
            if m >= 1:
                mm = at.m[:axis] + (m - 1,) + at.m[axis + 1 :]
                out.append(Atom(mm, at.alpha, at.coeff * math.sqrt(m / 2.0)))
            mp = at.m[:axis] + (m + 1,) + at.m[axis + 1 :]
            out.append(Atom(mp, at.alpha, -at.coeff * math.sqrt((m + 1) / 2.0)))
        return PureState(out)

    def times_coordinate(self, axis):
        """Multiplication by y_axis, exact: D_a((y + a_x) phi_m) per atom."""
        out = []
        for at in self.atoms:
            m = at.m[axis]
            ax = at.alpha[axis]
            out.append(Atom(at.m, at.alpha, at.coeff * ax))
            if m >= 1:
                mm = at.m[:axis] + (m - 1,) + at.m[axis + 1 :]
                out.append(Atom(mm, at.alpha, at.coeff * math.sqrt(m / 2.0)))
            mp = at.m[:axis] + (m + 1,) + at.m[axis + 1 :]
            out.append(Atom(mp, at.alpha, at.coeff * math.sqrt((m + 1) / 2.0)))
        return PureState(out)

    def weighted_derivative(self, a, b):
        """x^a d^b psi with configuration multi-indices a, b (length n)."""
        if len(a) != self.n or len(b) != self.n:
            raise ValueError("indices must have length n")
        state = self
        for axis, bi in enumerate(b):
            for _ in range(int(bi)):
                state = state.derivative(axis)
        for axis, ai in enumerate(a):
            for _ in range(int(ai)):
                state = state.times_coordinate(axis)
        return state

    def norm(self):
        return math.sqrt(max(pure_overlap(self, self).real, 0.0))

    def normalized(self):
        nrm = self.norm()
        if nrm == 0.0:
            raise ValueError("cannot normalize the zero state")
        return self.scaled(1.0 / nrm)

    def plus(self, other):
        if other.n != self.n:
            raise ValueError("axis count mismatch")
        return PureState(self.atoms + other.atoms)

    def reach(self):
        """Radius beyond which the state is numerically negligible."""
        return max(
            max(abs(v) for v in at.alpha[: self.n]) + math.sqrt(2 * max(at.m) + 1)
            for at in self.atoms
        ) + 10.0

    def extent(self):
        """Phase-space box size where the Gaussian envelopes still live.

        Unlike reach(), this carries no quadrature padding; add a decay
        margin when sizing grids from it.
        """
        return max(
            max(abs(v) for v in at.alpha) + math.sqrt(2 * max(at.m) + 1)
            for at in self.atoms
        )


class PlateauState:
    """The indicator wavefunction of [0, 1]: unit norm, not Schwartz."""

    n = 1
    atoms = None
    is_analytic = False

    def evaluate(self, points):
        pts = np.asarray(points, dtype=float)
        y = pts[..., 0] if pts.ndim else pts
        return ((y >= 0.0) & (y <= 1.0)).astype(complex)

    def norm(self):
        return 1.0

    def displaced(self, xi):
        raise ValueError("displacement needs an analytic state")

    def reach(self):
        return 4.0

    def extent(self):
        # the momentum tail only decays polynomially
        return math.inf


class MixedState:
    """Sum_j weight_j |psi_j><psi_j| with weights >= 0."""

    def __init__(self, weights, pure_states):
        weights = [float(w) for w in weights]
        pure_states = list(pure_states)
        if len(weights) != len(pure_states):
            raise ValueError("need one weight per pure state")
        if not pure_states:
            raise ValueError("mixed state needs at least one component")
        if any(w < 0 or not math.isfinite(w) for w in weights):
            raise ValueError("weights must be finite and nonnegative")
        n = pure_states[0].n
        if any(ps.n != n for ps in pure_states):
            raise ValueError("all components must share the number of axes")
        self.weights = tuple(weights)
        self.pure_states = tuple(pure_states)
        self._n = n

    @property
    def n(self):
        return self._n

    @property
    def is_analytic(self):
        return all(ps.is_analytic for ps in self.pure_states)

    def kernel(self, x, y):
        """K(x, y) = sum_j w_j psi_j(x) conj(psi_j(y)); x, y broadcastable."""
        total = 0.0
        for w, ps in zip(self.weights, self.pure_states):
            if w == 0.0:
                continue
            total = total + w * ps.evaluate(x) * np.conj(ps.evaluate(y))
        return total + np.zeros(np.broadcast_shapes(
            np.shape(np.asarray(x))[:-1], np.shape(np.asarray(y))[:-1]
        ), dtype=complex)

    def trace(self):
        return sum(w * ps.norm() ** 2 for w, ps in zip(self.weights, self.pure_states))

    def reach(self):
        return max(ps.reach() for ps in self.pure_states)

    def extent(self):
        return max(ps.extent() for ps in self.pure_states)


def as_mixed(state):
    """Wrap a pure state as a weight-1 mixture; pass mixtures through."""
    if isinstance(state, MixedState):
        return state
    return MixedState([1.0], [state])


def vacuum_state(n=1):
    return PureState([Atom((0,) * n, (0.0,) * (2 * n), 1.0)])


def fock_state(m, n=1):
    if isinstance(m, (int, np.integer)):
        m = (int(m),) * n
    return PureState([Atom(tuple(m), (0.0,) * (2 * n), 1.0)])


# ---------------------------------------------------------------------------
# closed-form overlaps via displacement matrix elements


def _factorial_ratio_sqrt(small, large):
    """sqrt(small! / large!) for small <= large."""
    prod = 1.0
    for j in range(small + 1, large + 1):
        prod *= j
    return 1.0 / math.sqrt(prod)


def _dme_axis(m, n, zeta):
    """<phi_m | D(zeta) | phi_n> for one axis; zeta any complex array."""
    zeta = np.asarray(zeta, dtype=complex)
    r2 = (zeta * np.conj(zeta)).real
    if m >= n:
        amp = _factorial_ratio_sqrt(n, m) * zeta ** (m - n)
        lag = eval_genlaguerre(n, m - n, r2)
    else:
        amp = _factorial_ratio_sqrt(m, n) * (-np.conj(zeta)) ** (n - m)
        lag = eval_genlaguerre(m, n - m, r2)
    return amp * np.exp(-0.5 * r2) * lag


def displacement_matrix_element(m, n, xi):
    """<phi_m | D_xi | phi_n> for multi-axis orders; xi shape (..., 2n).

    Uses the generalized-Laguerre closed form with zeta_i =
    (xi_x,i + i xi_p,i)/sqrt(2) per axis.
    """
    m = tuple(m)
    n_ = tuple(n)
    xi = np.asarray(xi, dtype=float)
    naxes = len(m)
    if len(n_) != naxes or xi.shape[-1] != 2 * naxes:
        raise ValueError("order/displacement dimensions disagree")
    zeta = (xi[..., :naxes] + 1j * xi[..., naxes:]) / np.sqrt(2.0)
    out = np.ones(xi.shape[:-1], dtype=complex)
    for i in range(naxes):
        out = out * _dme_axis(m[i], n_[i], zeta[..., i])
    return out


def pure_overlap(phi, psi):
    """<phi | psi> in closed form for analytic states."""
    if not (phi.is_analytic and psi.is_analytic):
        raise ValueError("closed-form overlap needs analytic states")
    total = 0.0 + 0.0j
    for am in phi.atoms:
        g = np.asarray(am.alpha, dtype=float)
        for an in psi.atoms:
            d = np.asarray(an.alpha, dtype=float)
            # <D_g f | D_d h> = e^{-i d /\ g / 2} <f | D_{d-g} h>
            phase = np.exp(-0.5j * symplectic_form(d, g))
            total += (
                np.conj(am.coeff)
                * an.coeff
                * phase
                * displacement_matrix_element(am.m, an.m, d - g)
            )
    return complex(total)


def displaced_overlaps(chi, alphas, psi):
    """<D_alpha chi | psi> for a batch of alphas, shape (..., 2n)."""
    alphas = np.asarray(alphas, dtype=float)
    out = np.zeros(alphas.shape[:-1], dtype=complex)
    for ac in chi.atoms:
        delta = np.asarray(ac.alpha, dtype=float)
        for ap in psi.atoms:
            gamma = np.asarray(ap.alpha, dtype=float)
            phase = np.exp(
                -0.5j * symplectic_form(delta, alphas)
                - 0.5j * symplectic_form(gamma, alphas + delta)
            )
            out += (
                np.conj(ac.coeff)
                * ap.coeff
                * phase
                * displacement_matrix_element(ac.m, ap.m, gamma - alphas - delta)
            )
    return out


def quasichar_values(state, xis):
    """tr[rho D_xi] in closed form for analytic states; xis shape (..., 2n)."""
    rho = as_mixed(state)
    if not rho.is_analytic:
        raise ValueError("closed-form quasicharacteristic needs analytic states")
    xis = np.asarray(xis, dtype=float)
    out = np.zeros(xis.shape[:-1], dtype=complex)
    for w, ps in zip(rho.weights, rho.pure_states):
        if w == 0.0:
            continue
        comp = np.zeros_like(out)
        for ak in ps.atoms:
            gk = np.asarray(ak.alpha, dtype=float)
            for al in ps.atoms:
                gl = np.asarray(al.alpha, dtype=float)
                phase = np.exp(
                    0.5j * symplectic_form(gl, xis)
                    - 0.5j * symplectic_form(xis + gl, gk)
                )
                comp += (
                    np.conj(ak.coeff)
                    * al.coeff
                    * phase
                    * displacement_matrix_element(ak.m, al.m, xis + gl - gk)
                )
        out += w * comp
    return out


def overlap_by_quadrature(phi, psi, n_nodes=8192, half=None):
    """<phi | psi> by rectangle quadrature on a fine 1-D lattice."""
    if phi.n != 1 or psi.n != 1:
        raise ValueError("quadrature overlap implemented for n=1")
    if half is None:
        half = max(phi.reach(), psi.reach())
    step = 2.0 * half / n_nodes
    ys = (-half + step * np.arange(n_nodes))[:, None]
    return step * np.sum(np.conj(phi.evaluate(ys)) * psi.evaluate(ys))


# ---------------------------------------------------------------------------
# demo states, random ensembles, JSON serialization

HEAVY_TAIL_MAX_K = 20


def demo_state(name, K=None):
    """Built-in states: vacuum, fock1, plateau, heavy_tail (truncated)."""
    key = str(name).replace("-", "_")
    if key == "vacuum":
        return vacuum_state(1)
    if key == "fock1":
        return fock_state(1, 1)
    if key == "plateau":
        return PlateauState()
    if key == "heavy_tail":
        K = 3 if K is None else int(K)
        if K < 1:
            raise ValueError("heavy_tail needs K >= 1")
        if K > HEAVY_TAIL_MAX_K:
            raise ValueError(
                f"heavy_tail K={K} puts centers k^3 far outside any desk grid"
                f" (cap {HEAVY_TAIL_MAX_K})"
            )
        raw = [(6.0 / np.pi**2) * k ** (-2.0) for k in range(1, K + 1)]
        total = sum(raw)
        comps = [
            PureState([Atom((0,), (float(k**3), 0.0), 1.0)]) for k in range(1, K + 1)
        ]
        return MixedState([w / total for w in raw], comps)
    raise ValueError(f"unknown demo state {name!r}")


def random_pure_state(rng, n_atoms=3, n=1, max_order=3, disp=1.2):
    """Normalized random superposition; displacements bounded by disp."""
    atoms = []
    for _ in range(n_atoms):
        m = tuple(int(v) for v in rng.integers(0, max_order + 1, size=n))
        alpha = tuple(float(v) for v in rng.uniform(-disp, disp, size=2 * n))
        coeff = complex(rng.normal(), rng.normal())
        atoms.append(Atom(m, alpha, coeff))
    return PureState(atoms).normalized()


def random_mixture(rng, n_components=2, n_atoms=3, n=1, max_order=3, disp=1.2):
    """Random mixture with Gram-Schmidt-orthonormalized components."""
    comps = []
    while len(comps) < n_components:
        cand = random_pure_state(rng, n_atoms, n, max_order, disp)
        for prev in comps:
            cand = cand.plus(prev.scaled(-pure_overlap(prev, cand)))
        if pure_overlap(cand, cand).real > 0.05:
            comps.append(cand.normalized())
    weights = rng.uniform(0.2, 1.0, size=n_components)
    weights = weights / weights.sum()
    return MixedState(weights.tolist(), comps)


def state_to_dict(state):
    rho = as_mixed(state)
    if not rho.is_analytic:
        raise ValueError("only analytic states can be serialized")
    return {
        "weights": list(rho.weights),
        "pure_states": [
            {
                "atoms": [
                    {
                        "m": list(at.m) if len(at.m) > 1 else at.m[0],
                        "alpha": [float(v) for v in at.alpha],
                        "coeff": [float(at.coeff.real), float(at.coeff.imag)],
                    }
                    for at in ps.atoms
                ]
            }
            for ps in rho.pure_states
        ],
    }


def save_state(state, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(state_to_dict(state), fh, indent=1)
        fh.write("\n")


def _load_atom(entry, where):
    if not isinstance(entry, dict):
        raise ValueError(f"{where}: atom must be an object")
    unknown = set(entry) - {"m", "alpha", "coeff"}
    if unknown:
        raise ValueError(f"{where}: unknown key {sorted(unknown)[0]!r}")
    for key in ("m", "alpha", "coeff"):
        if key not in entry:
            raise ValueError(f"{where}: missing key {key!r}")
    m = entry["m"]
    m = (int(m),) if isinstance(m, (int, float)) else tuple(int(v) for v in m)
    alpha = [float(v) for v in entry["alpha"]]
    if len(alpha) != 2 * len(m):
        raise ValueError(f"{where}: alpha must have length {2 * len(m)}")
    coeff = entry["coeff"]
    if not (isinstance(coeff, (list, tuple)) and len(coeff) == 2):
        raise ValueError(f"{where}: coeff must be a [re, im] pair")
    if not all(math.isfinite(v) for v in alpha + [float(c) for c in coeff]):
        raise ValueError(f"{where}: non-finite number")
    return Atom(m, tuple(alpha), complex(float(coeff[0]), float(coeff[1])))


def state_from_dict(doc):
    if not isinstance(doc, dict):
        raise ValueError("state document must be a JSON object")
    unknown = set(doc) - {"weights", "pure_states"}
    if unknown:
        raise ValueError(f"unknown key {sorted(unknown)[0]!r} in state document")
    if "weights" not in doc or "pure_states" not in doc:
        raise ValueError("state document needs 'weights' and 'pure_states'")
    weights = [float(w) for w in doc["weights"]]
    pures = []
    for i, ps in enumerate(doc["pure_states"]):
        if not isinstance(ps, dict):
            raise ValueError(f"pure_states[{i}] must be an object")
        unknown = set(ps) - {"atoms"}
        if unknown:
            raise ValueError(f"pure_states[{i}]: unknown key {sorted(unknown)[0]!r}")
        atoms = [
            _load_atom(at, f"pure_states[{i}].atoms[{j}]")
            for j, at in enumerate(ps.get("atoms", []))
        ]
        pures.append(PureState(atoms))
    return MixedState(weights, pures)


def load_state(path):
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}")
    return state_from_dict(doc)
