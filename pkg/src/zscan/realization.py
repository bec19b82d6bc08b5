"""Numerical realizations over the complex projective plane.

Lines are complex 3-vectors ``l`` (the line ``l . x = 0``); the conic is a
symmetric matrix ``C`` (the curve ``x^T C x = 0``), by default the reference
circle ``x^2 + y^2 - z^2``.  A projective map ``x -> M x`` acts on lines by
the inverse transpose and on the conic by congruence with ``M^-1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import permutations, product
from typing import Iterator, Sequence

import numpy as np

from .equivalence import canonical_key, iter_witnesses
from .model import Arrangement, ArrangementError, PointRecord, validate

REFERENCE_CONIC = np.diag([1.0, 1.0, -1.0]).astype(complex)


class InvalidTolerance(ValueError):
    pass


class DegenerateInput(ValueError):
    pass


class ClusterAmbiguity(ValueError):
    """Some distance or discriminant falls between a tolerance and ten times it."""


class SingularMatrix(ValueError):
    pass


class TooFewDistinguishedPoints(ValueError):
    pass


@dataclass(frozen=True)
class Tolerances:
    res: float = 1e-9
    cluster: float = 1e-6
    tan: float = 1e-8
    match: float = 1e-6  # projective witness acceptance

    def __post_init__(self):
        for name in ("res", "cluster", "tan", "match"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and v > 0 and math.isfinite(v)):
                raise InvalidTolerance(f"tolerance {name}={v!r} must be positive")


def normalize_vector(v: np.ndarray) -> np.ndarray:
    """Unit norm, with the first non-negligible entry real and positive."""
    v = np.asarray(v, dtype=complex)
    norm = np.linalg.norm(v)
    if norm == 0:
        raise DegenerateInput("zero vector")
    v = v / norm
    flat = v.ravel()
    big = np.flatnonzero(np.abs(flat) > 1e-6 * np.abs(flat).max())[0]
    return v * (abs(flat[big]) / flat[big])


def normalize_conic(c: np.ndarray) -> np.ndarray:
    c = np.asarray(c, dtype=complex)
    c = (c + c.T) / 2
    return normalize_vector(c) * math.sqrt(3.0)


def chordal(p: np.ndarray, q: np.ndarray) -> float:
    """Sine of the angle between two points of CP^2 (0 for equal points)."""
    num = abs(np.vdot(p, q)) ** 2
    den = np.vdot(p, p).real * np.vdot(q, q).real
    return math.sqrt(max(0.0, 1.0 - num / den))


def _pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


@dataclass
class RealizedArrangement:
    conic: np.ndarray
    lines: np.ndarray  # shape (n, 3)
    residual: float = 0.0
    separation: float = 1.0

    def __post_init__(self):
        self.conic = np.asarray(self.conic, dtype=complex).reshape(3, 3)
        self.lines = np.asarray(self.lines, dtype=complex).reshape(-1, 3)
        if any(np.linalg.norm(l) == 0 for l in self.lines):
            raise DegenerateInput("zero line vector")
        if not (math.isfinite(self.residual) and math.isfinite(self.separation)):
            raise ValueError("residual and separation must be finite")

    @property
    def n(self) -> int:
        return len(self.lines)

    def to_json(self) -> dict:
        return {
            "conic": [[_pair(x) for x in row] for row in self.conic],
            "lines": [[_pair(x) for x in l] for l in self.lines],
            "residual": float(self.residual),
            "separation": float(self.separation),
        }

    @classmethod
    def from_json(cls, data: dict) -> "RealizedArrangement":
        def cplx(x):
            return complex(x[0], x[1]) if isinstance(x, (list, tuple)) else complex(x)

        conic = np.array([[cplx(x) for x in row] for row in data["conic"]])
        lines = np.array([[cplx(x) for x in l] for l in data["lines"]]).reshape(-1, 3)
        return cls(conic, lines, float(data.get("residual", 0.0)), float(data.get("separation", 1.0)))


@dataclass
class RealizationResult:
    status: str  # "Realized" or "Unknown"
    geometry: RealizedArrangement | None
    attempts: int
    seed: int = 0

    @property
    def realized(self) -> bool:
        return self.status == "Realized"

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "attempts": self.attempts,
            "seed": self.seed,
            "geometry": None if self.geometry is None else self.geometry.to_json(),
            "note": "Unknown means the search failed, not that the class has no realization",
        }


# ---------------------------------------------------------------------------
# extraction


def _adjugate(c: np.ndarray) -> np.ndarray:
    adj = np.empty((3, 3), dtype=complex)
    for i in range(3):
        for j in range(3):
            minor = np.delete(np.delete(c, i, axis=0), j, axis=1)
            adj[j, i] = (-1) ** (i + j) * (minor[0, 0] * minor[1, 1] - minor[0, 1] * minor[1, 0])
    return adj


def _line_basis(l: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Two points spanning the line ``l . x = 0``."""
    _, _, vh = np.linalg.svd(l.reshape(1, 3))
    return vh[1].conj(), vh[2].conj()


def _conic_roots(c: np.ndarray, l: np.ndarray) -> list[np.ndarray]:
    a, b = _line_basis(l)
    m00, m01, m11 = a @ c @ a, a @ c @ b, b @ c @ b
    # m00 s^2 + 2 m01 s t + m11 t^2 = 0 in (s : t)
    if abs(m00) >= abs(m11):
        roots = np.roots([m00, 2 * m01, m11])  # s/t
        return [r * a + b for r in roots]
    roots = np.roots([m11, 2 * m01, m00])  # t/s
    return [a + r * b for r in roots]


def tangency_discriminant(conic: np.ndarray, l: np.ndarray) -> float:
    """Scale-free measure of how close ``l`` is to tangency (0 when tangent)."""
    c = normalize_conic(conic)
    adj = _adjugate(c)
    l = l / np.linalg.norm(l)
    return float(abs(l @ adj @ l) / np.linalg.norm(adj))


def _gray(value: float, tol: float) -> bool:
    return tol <= value < 10 * tol


@dataclass
class _Candidate:
    point: np.ndarray
    lines: frozenset
    on_conic: bool = False
    tangent: int | None = None


def extract_with_points(
    g: RealizedArrangement, tol: Tolerances | None = None
) -> tuple[Arrangement, list[np.ndarray], float]:
    """Combinatorics of ``g`` with one coordinate vector per normalized point.

    Also returns the minimum chordal distance between distinct points.
    """
    tol = tol or Tolerances()
    n = g.n
    conic = normalize_conic(g.conic)
    if abs(np.linalg.det(conic)) < 1e-9:
        raise DegenerateInput("conic is singular")
    lines = [l / np.linalg.norm(l) for l in g.lines]
    adj = _adjugate(conic)
    cands: list[_Candidate] = []
    for i in range(n):
        for j in range(i + 1, n):
            x = np.cross(lines[i], lines[j])
            if np.linalg.norm(x) < tol.cluster:
                raise DegenerateInput(f"lines {i + 1} and {j + 1} are proportional")
            cands.append(_Candidate(x / np.linalg.norm(x), frozenset((i + 1, j + 1))))
    for i, l in enumerate(lines, start=1):
        d = tangency_discriminant(conic, l)
        if _gray(d, tol.tan):
            raise ClusterAmbiguity(f"line {i}: tangency discriminant {d:.3g} in gray zone")
        if d < tol.tan:
            pole = adj @ l
            if np.linalg.norm(pole) == 0:
                raise DegenerateInput(f"line {i} has no tangency point")
            cands.append(_Candidate(pole / np.linalg.norm(pole), frozenset((i,)), True, i))
        else:
            for r in _conic_roots(conic, l):
                cands.append(_Candidate(r / np.linalg.norm(r), frozenset((i,)), True))

    # single-linkage clustering with an empty band [tol, 10 tol)
    parent = list(range(len(cands)))

    def find(k: int) -> int:
        while parent[k] != k:
            parent[k] = parent[parent[k]]
            k = parent[k]
        return k

    for u in range(len(cands)):
        for v in range(u + 1, len(cands)):
            d = chordal(cands[u].point, cands[v].point)
            if _gray(d, tol.cluster):
                raise ClusterAmbiguity(f"two points at distance {d:.3g}, inside the gray zone")
            if d < tol.cluster:
                parent[find(u)] = find(v)

    groups: dict[int, list[_Candidate]] = {}
    for k, c in enumerate(cands):
        groups.setdefault(find(k), []).append(c)

    records: list[tuple[PointRecord, np.ndarray]] = []
    for members in groups.values():
        tangents = {c.tangent for c in members if c.tangent is not None}
        if len(tangents) > 1:
            raise ClusterAmbiguity(f"lines {sorted(tangents)} tangent at one point")
        conic_lines = [x for c in members if c.on_conic for x in c.lines]
        if len(conic_lines) != len(set(conic_lines)):
            raise ClusterAmbiguity("a line meets the conic twice at one point")
        lines_here = tuple(sorted(set().union(*(c.lines for c in members))))
        rec = PointRecord(lines_here, any(c.on_conic for c in members), next(iter(tangents), None))
        records.append((rec, members[0].point))
    records.sort(key=lambda r: r[0].sort_key)
    try:
        a = validate(n, [r for r, _ in records])
    except ArrangementError as exc:
        raise ClusterAmbiguity(f"clusters do not form an arrangement: {exc}") from exc
    pts = [p for _, p in records]
    sep = 1.0
    for u in range(len(pts)):
        for v in range(u + 1, len(pts)):
            sep = min(sep, chordal(pts[u], pts[v]))
    return a, pts, sep


def extract_combinatorics(g: RealizedArrangement, tol: Tolerances | None = None) -> Arrangement:
    """Intersect everything over C and read off the combinatorial type."""
    return extract_with_points(g, tol)[0]


# ---------------------------------------------------------------------------
# incidence system and solver


def conic_point(t: complex) -> np.ndarray:
    """Rational parametrization of the reference conic."""
    return np.array([1 - t * t, 2 * t, 1 + t * t])


def _conic_point_deriv(t: complex) -> np.ndarray:
    return np.array([-2 * t, 2, 2 * t])


GAUGE_PARAMETERS = (0.0, 1.0, -1.0)


class IncidenceSystem:
    """Polynomial equations whose zeros are realizations of ``a``.

    Unknowns are the line vectors, one conic parameter for every conic point
    met by two or more transverse lines, and affine coordinates for every
    off-conic point met by three or more lines.  Tangency points need no
    unknown: the tangency point of ``l`` is its pole ``Q l``.  Up to three
    conic parameters are frozen to remove the symmetry of the conic.
    """

    def __init__(self, a: Arrangement):
        self.a = a
        self.n = a.n
        q = REFERENCE_CONIC
        self.q = q
        self.tangent: list[int] = sorted(a.tangent_lines)
        self.pole_incidence: list[tuple[int, int]] = []  # (line through, tangent line)
        self.conic_pts: list[tuple[int, ...]] = []
        self.affine_pts: list[tuple[int, ...]] = []
        for p in a.points:
            if p.tangent_line is not None:
                self.pole_incidence += [(x, p.tangent_line) for x in p.lines if x != p.tangent_line]
            elif p.on_conic and len(p.lines) >= 2:
                self.conic_pts.append(p.lines)
            elif not p.on_conic and len(p.lines) >= 3:
                self.affine_pts.append(p.lines)
        self.fixed = {k: GAUGE_PARAMETERS[k] for k in range(min(3, len(self.conic_pts)))}
        self.free_conic = [k for k in range(len(self.conic_pts)) if k not in self.fixed]
        self.size = 3 * self.n + len(self.free_conic) + 2 * len(self.affine_pts)

    def unpack(self, z: np.ndarray):
        lines = z[: 3 * self.n].reshape(self.n, 3)
        pos = 3 * self.n
        params = {}
        for k in range(len(self.conic_pts)):
            if k in self.fixed:
                params[k] = self.fixed[k]
            else:
                params[k] = z[pos]
                pos += 1
        affine = z[pos:].reshape(-1, 2)
        return lines, params, affine

    def _param_index(self, k: int) -> int | None:
        if k in self.fixed:
            return None
        return 3 * self.n + self.free_conic.index(k)

    def random_start(self, rng: np.random.Generator) -> np.ndarray:
        z = (rng.standard_normal(self.size) + 1j * rng.standard_normal(self.size)) / math.sqrt(2)
        return z

    def equations(self, z: np.ndarray, gauge: np.ndarray | None = None) -> tuple[np.ndarray, np.ndarray]:
        """Residual vector and its (holomorphic) Jacobian.

        ``gauge`` holds one covector per line; the rows ``gauge_i . l_i - 1``
        fix the scale of each line and come first.
        """
        lines, params, affine = self.unpack(z)
        rows: list[complex] = []
        jac: list[np.ndarray] = []

        def blank() -> np.ndarray:
            return np.zeros(self.size, dtype=complex)

        def ls(i: int) -> slice:
            return slice(3 * (i - 1), 3 * i)

        if gauge is not None:
            for i in range(1, self.n + 1):
                rows.append(gauge[i - 1] @ lines[i - 1] - 1)
                d = blank()
                d[ls(i)] = gauge[i - 1]
                jac.append(d)
        q = self.q
        for i in self.tangent:
            l = lines[i - 1]
            rows.append(l @ q @ l)
            d = blank()
            d[ls(i)] = 2 * (q @ l)
            jac.append(d)
        for m, t in self.pole_incidence:
            lm, lt = lines[m - 1], lines[t - 1]
            rows.append(lm @ q @ lt)
            d = blank()
            d[ls(m)] = q @ lt
            d[ls(t)] = q @ lm
            jac.append(d)
        for k, pl in enumerate(self.conic_pts):
            tk = params[k]
            p = conic_point(tk)
            dp = _conic_point_deriv(tk)
            idx = self._param_index(k)
            for i in pl:
                l = lines[i - 1]
                rows.append(l @ p)
                d = blank()
                d[ls(i)] = p
                if idx is not None:
                    d[idx] = l @ dp
                jac.append(d)
        base = 3 * self.n + len(self.free_conic)
        for k, pl in enumerate(self.affine_pts):
            u, v = affine[k]
            p = np.array([u, v, 1.0])
            for i in pl:
                l = lines[i - 1]
                rows.append(l @ p)
                d = blank()
                d[ls(i)] = p
                d[base + 2 * k] = l[0]
                d[base + 2 * k + 1] = l[1]
                jac.append(d)
        if not rows:
            return np.zeros(0, dtype=complex), np.zeros((0, self.size), dtype=complex)
        return np.array(rows, dtype=complex), np.array(jac)

    def incidence_residual(self, z: np.ndarray) -> float:
        """Sum of squared incidence residuals with unit-norm lines."""
        lines, _, _ = self.unpack(z)
        z = z.copy()
        norms = np.linalg.norm(lines, axis=1)
        if np.any(norms == 0):
            return math.inf
        z[: 3 * self.n] = (lines / norms[:, None]).ravel()
        r, _ = self.equations(z)
        return float(np.vdot(r, r).real)


def damped_least_squares(
    system: IncidenceSystem,
    z0: np.ndarray,
    gauge: np.ndarray,
    max_iter: int = 200,
    target: float = 1e-28,
) -> tuple[np.ndarray, float]:
    """Levenberg-Marquardt on a complex holomorphic system.

    Returns the final point and its squared residual norm.
    """
    z = z0.copy()
    r, jac = system.equations(z, gauge)
    cost = float(np.vdot(r, r).real)
    lam = 1e-3
    for _ in range(max_iter):
        if cost < target:
            break
        jh = jac.conj().T
        a = jh @ jac
        g = jh @ r
        diag = np.eye(len(z)) * (1.0 + np.abs(np.diag(a)))
        improved = False
        for _ in range(12):
            try:
                step = np.linalg.solve(a + lam * diag, -g)
            except np.linalg.LinAlgError:
                lam *= 10
                continue
            z_new = z + step
            r_new, jac_new = system.equations(z_new, gauge)
            cost_new = float(np.vdot(r_new, r_new).real)
            if cost_new < cost:
                z, r, jac, cost = z_new, r_new, jac_new, cost_new
                lam = max(lam / 3, 1e-12)
                improved = True
                break
            lam *= 4
        if not improved:
            break
    return z, cost


def realize(
    a: Arrangement,
    budget: int = 200,
    tol: Tolerances | None = None,
    seed: int = 0,
    max_iter: int = 200,
) -> RealizationResult:
    """Search for complex coordinates realizing ``a``.

    Attempt ``k`` starts from the generator seeded with ``(seed, k)``; the
    first start whose solution extracts back to exactly ``a`` wins.
    """
    tol = tol or Tolerances()
    if a.n == 0:
        return RealizationResult("Realized", RealizedArrangement(REFERENCE_CONIC, np.zeros((0, 3))), 0, seed)
    system = IncidenceSystem(a)
    for attempt in range(budget):
        rng = np.random.default_rng([seed, attempt])
        z0 = system.random_start(rng)
        lines0 = z0[: 3 * a.n].reshape(a.n, 3)
        gauge = lines0.conj() / (np.linalg.norm(lines0, axis=1) ** 2)[:, None]
        z, _ = damped_least_squares(system, z0, gauge, max_iter=max_iter)
        residual = system.incidence_residual(z)
        if not residual < tol.res:
            continue
        lines, _, _ = system.unpack(z)
        try:
            geom = RealizedArrangement(REFERENCE_CONIC, [normalize_vector(l) for l in lines])
            got, _, sep = extract_with_points(geom, tol)
        except (DegenerateInput, ClusterAmbiguity):
            continue
        if got != a or not sep > 10 * tol.cluster:
            continue
        geom.residual = residual
        geom.separation = sep
        return RealizationResult("Realized", geom, attempt + 1, seed)
    return RealizationResult("Unknown", None, budget, seed)


# ---------------------------------------------------------------------------
# projective maps


def projective_transfer(g: RealizedArrangement, m: np.ndarray) -> RealizedArrangement:
    """Image of ``g`` under the point map ``x -> M x``."""
    m = np.asarray(m, dtype=complex)
    if m.shape != (3, 3) or not np.all(np.isfinite(m)):
        raise SingularMatrix("expected a finite 3x3 matrix")
    if np.linalg.cond(m) > 1e12:
        raise SingularMatrix(f"matrix is singular (condition number {np.linalg.cond(m):.3g})")
    inv = np.linalg.inv(m)
    lines = np.array([normalize_vector(l) for l in g.lines @ inv]).reshape(-1, 3)
    conic = normalize_conic(inv.T @ g.conic @ inv)
    return RealizedArrangement(conic, lines, g.residual, g.separation)


def proportionality_residual(x: np.ndarray, y: np.ndarray) -> float:
    """``min_a |a x - y|`` after scaling both to unit norm."""
    x = np.asarray(x, dtype=complex).ravel()
    y = np.asarray(y, dtype=complex).ravel()
    x = x / np.linalg.norm(x)
    y = y / np.linalg.norm(y)
    alpha = np.vdot(x, y)
    return float(np.linalg.norm(alpha * x - y))


def transfer_mismatch(g1: RealizedArrangement, g2: RealizedArrangement, m: np.ndarray,
                      sigma: dict[int, int]) -> float:
    """How far ``M`` is from carrying ``g1`` onto ``g2`` with lines matched by ``sigma``."""
    inv = np.linalg.inv(m)
    worst = proportionality_residual(inv.T @ g1.conic @ inv, g2.conic)
    for i, j in sigma.items():
        worst = max(worst, proportionality_residual(g1.lines[i - 1] @ inv, g2.lines[j - 1]))
    return worst


def _skew(v: np.ndarray) -> np.ndarray:
    return np.array([[0, -v[2], v[1]], [v[2], 0, -v[0]], [-v[1], v[0], 0]], dtype=complex)


def _point_rows(p: np.ndarray, p2: np.ndarray) -> np.ndarray:
    # p2 x (M p) = 0, M flattened row-major
    b = np.zeros((3, 9), dtype=complex)
    for i in range(3):
        b[i, 3 * i: 3 * i + 3] = p
    return _skew(p2) @ b


def _line_rows(l: np.ndarray, l2: np.ndarray) -> np.ndarray:
    # l x (M^T l2) = 0
    b = np.zeros((3, 9), dtype=complex)
    for j in range(3):
        for i in range(3):
            b[j, 3 * i + j] = l2[i]
    return _skew(l) @ b


def solve_homography(pairs_pts, pairs_lines) -> tuple[np.ndarray, bool]:
    """Least-squares ``M`` from point and line correspondences.

    The flag is False when the correspondences leave ``M`` undetermined.
    """
    blocks = [_point_rows(p, q) for p, q in pairs_pts] + [_line_rows(l, k) for l, k in pairs_lines]
    if not blocks:
        return np.eye(3, dtype=complex), False
    a = np.vstack(blocks)
    _, s, vh = np.linalg.svd(a)
    if len(s) < 8 or s[7] < 1e-8 * s[0]:
        return np.eye(3, dtype=complex), False
    m = vh[-1].conj().reshape(3, 3)
    if abs(np.linalg.det(m)) < 1e-12 * np.linalg.norm(m) ** 3:
        return m, False
    return m / np.linalg.norm(m), True


@dataclass
class EquivalenceVerdict:
    equivalent: bool
    matrix: np.ndarray | None = None
    sigma: dict[int, int] | None = None
    residual: float | None = None
    reason: str = ""
    tried: int = 0

    def to_json(self) -> dict:
        out = {
            "verdict": "Equivalent" if self.equivalent else "NotFound",
            "reason": self.reason,
            "correspondences_tried": self.tried,
        }
        if self.equivalent:
            out["matrix"] = [[_pair(x) for x in row] for row in self.matrix]
            out["sigma"] = {str(k): v for k, v in sorted(self.sigma.items())}
            out["residual"] = self.residual
        return out


def _point_priority(p: PointRecord) -> tuple:
    c = p.char
    return (-(c.components >= 3), -c.tangency, -len(p.lines))


def _correspondences(a1: Arrangement, pts1, a2: Arrangement, pts2, sigma, cap: int) -> Iterator[list]:
    """Point pairings compatible with ``sigma``; interchangeable records are permuted."""
    groups1: dict[tuple, list[int]] = {}
    for k, p in enumerate(a1.points):
        mapped = PointRecord(
            tuple(sorted(sigma[x] for x in p.lines)), p.on_conic,
            None if p.tangent_line is None else sigma[p.tangent_line],
        )
        groups1.setdefault(mapped.sort_key, []).append(k)
    groups2: dict[tuple, list[int]] = {}
    for k, p in enumerate(a2.points):
        groups2.setdefault(p.sort_key, []).append(k)
    keys = sorted(groups1, key=lambda s: _point_priority(a2.points[groups2[s][0]]))
    fixed = [(groups1[s][0], groups2[s][0]) for s in keys if len(groups1[s]) == 1]
    loose = [s for s in keys if len(groups1[s]) > 1]
    options = [list(permutations(groups2[s])) for s in loose]
    count = 0
    for choice in product(*options):
        pairs = list(fixed)
        for s, img in zip(loose, choice):
            pairs += list(zip(groups1[s], img))
        yield [(pts1[i], pts2[j]) for i, j in pairs]
        count += 1
        if count >= cap:
            return


def _conic_polar_pairs(c1, c2, pairs_pts, pairs_lines):
    """Pole/polar images forced by any map carrying ``c1`` to ``c2``."""
    adj1, adj2 = _adjugate(c1), _adjugate(c2)
    lines = [(c1 @ p, c2 @ q) for p, q in pairs_pts]
    pts = [(adj1 @ l, adj2 @ k) for l, k in pairs_lines]
    return pts, lines


def random_conic_point(c: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    l = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    return _conic_roots(c, l)[0]


def projective_equivalent(
    g1: RealizedArrangement,
    g2: RealizedArrangement,
    tol: Tolerances | None = None,
    max_correspondences: int = 4096,
    samples: int = 8,
    seed: int = 0,
) -> EquivalenceVerdict:
    """Look for ``M`` in PGL(3, C) carrying ``g1`` onto ``g2``.

    Every combinatorial line matching and every pairing of interchangeable
    points gives a linear system for ``M`` (with the poles and polars those
    correspondences force).  When that system is underdetermined, random
    conic points are paired up to fill the gap.  Only a found witness is
    conclusive; ``NotFound`` does not prove the realizations inequivalent.
    """
    tol = tol or Tolerances()
    a1, pts1, _ = extract_with_points(g1, tol)
    a2, pts2, _ = extract_with_points(g2, tol)
    if canonical_key(a1) != canonical_key(a2):
        return EquivalenceVerdict(False, reason="combinatorially inequivalent")
    c1, c2 = normalize_conic(g1.conic), normalize_conic(g2.conic)
    rng = np.random.default_rng(seed)
    tried = 0
    determined = False
    for w in iter_witnesses(a1, a2):
        pairs_lines = [(g1.lines[i - 1], g2.lines[j - 1]) for i, j in w.sigma.items()]
        for pairs_pts in _correspondences(a1, pts1, a2, pts2, w.sigma, max_correspondences):
            tried += 1
            extra_pts, extra_lines = _conic_polar_pairs(c1, c2, pairs_pts, pairs_lines)
            m, ok = solve_homography(pairs_pts + extra_pts, pairs_lines + extra_lines)
            attempts = [(m, ok)] if ok else []
            if not ok:
                # sampled correspondences on the conic; the stabilizer makes the choice free
                for _ in range(samples):
                    more = [(random_conic_point(c1, rng), random_conic_point(c2, rng)) for _ in range(3)]
                    for k in range(1, 4):
                        sp = pairs_pts + more[:k]
                        ep, el = _conic_polar_pairs(c1, c2, sp, pairs_lines)
                        m, ok = solve_homography(sp + ep, pairs_lines + el)
                        if ok:
                            attempts.append((m, ok))
                            break
            for m, _ in attempts:
                determined = True
                res = transfer_mismatch(g1, g2, m, w.sigma)
                if res < tol.match:
                    return EquivalenceVerdict(True, m, dict(w.sigma), res, "witness found", tried)
            if tried >= max_correspondences:
                break
        if tried >= max_correspondences:
            break
    if not determined:
        raise TooFewDistinguishedPoints(
            "correspondences never determine a unique projective map (too few points in general position)"
        )
    return EquivalenceVerdict(False, reason="no correspondence gave a witness", tried=tried)


def random_matrix(rng: np.random.Generator, max_cond: float = 50.0) -> np.ndarray:
    """A random complex matrix with condition number below ``max_cond``."""
    while True:
        m = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        if np.linalg.cond(m) < max_cond:
            return m


def conic_parameter(p: np.ndarray) -> complex:
    """Inverse of :func:`conic_point` (``inf`` at the missing point)."""
    x, y, z = p
    if abs(x + z) > abs(y) * 1e-12 and abs(x + z) > 1e-14:
        return complex(y / (x + z))
    return complex("inf")
