"""Classification of bounded travelling waves.

A wave u = phi(x - ct) satisfies the quadrature (phi')^2 = F(phi) with

    F(phi) = P(phi) / (eps^2 (c - phi) - Gamma)     (eps != 0)
    F(phi) = -P(phi) / Gamma                         (eps == 0)

Bounded waves live on intervals between consecutive distinguished points
(real roots of P and the pole c~ = c - Gamma/eps^2) where F > 0.  Each
endpoint is classified by the effective order k of the zero of F there:

    k = -1  pole that is not a root            -> cusp
    k =  0  pole at a simple root (cancels)    -> peak
    k =  1  simple zero                        -> extremum attained
    k >= 2  multiple zero                      -> approached as z -> +-inf

and the pair of endpoint types fixes the wave kind.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from math import factorial

import numpy as np

from . import kernels
from .model import EquationParams, QuinticPoly, ValidationError, WaveParams, pole_location, poly_from_params

KINDS = ("smooth_periodic", "smooth_asymptotic", "peakon_periodic", "peakon_decay",
         "cuspon_periodic", "cuspon_decay", "unbounded", "none")
ROLES = ("min_attained", "inf_asymptotic", "max_attained", "sup_asymptotic",
         "cusp_extremum", "peak_extremum", "unbounded")

_EPS = np.finfo(float).eps


class IllConditionedRoots(ArithmeticError):
    """A root cluster could not be resolved at the requested tolerance."""


class InfeasibleSpec(ValueError):
    """Prescribed roots are incompatible with the normalized polynomial."""


class Unsupported(ValueError):
    """Operation undefined for the given parameters."""


@dataclass(frozen=True)
class RootSet:
    roots: tuple          # ((value, multiplicity), ...) ascending
    complex_pairs: tuple  # ((re, im>0), ...)
    degree: int

    @property
    def values(self) -> list:
        return [r for r, _ in self.roots]

    def expanded(self) -> list:
        """Real roots repeated by multiplicity."""
        return [r for r, m in self.roots for _ in range(m)]


# --- root finding -------------------------------------------------------------

def _deriv_scale(c: np.ndarray, x: float, j: int) -> float:
    """Sum of |terms| of the j-th derivative at x, the natural round-off yardstick."""
    s = 0.0
    for i in range(j, c.size):
        s += abs(c[i]) * factorial(i) / factorial(i - j) * abs(x) ** (i - j)
    return s


def _is_multiple_root(c: np.ndarray, x: float, k: int, tol: float) -> bool:
    pc = c.copy()
    for j in range(k):
        val = np.polynomial.polynomial.polyval(x, pc)
        if abs(val) > tol * max(_deriv_scale(c, x, j), 1e-300):
            return False
        pc = np.polynomial.polynomial.polyder(pc)
    return True


def _newton(c: np.ndarray, x: float, iters: int = 6) -> float:
    dc = np.polynomial.polynomial.polyder(c)
    for _ in range(iters):
        d = np.polynomial.polynomial.polyval(x, dc)
        if d == 0:
            break
        step = np.polynomial.polynomial.polyval(x, c) / d
        if not math.isfinite(step):
            break
        x_new = x - step
        if abs(x_new - x) <= 4 * _EPS * max(1.0, abs(x)):
            x = x_new
            break
        x = x_new
    return x


def _linkage(z: np.ndarray, radius: float) -> list:
    """Single-linkage groups of complex points (small n, O(n^2))."""
    n = z.size
    label = list(range(n))

    def find(i):
        while label[i] != i:
            label[i] = label[label[i]]
            i = label[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(z[i] - z[j]) <= radius:
                label[find(i)] = find(j)
    groups: dict = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return [np.array(g) for g in groups.values()]


def trim_degree(poly: QuinticPoly, drop_tol: float = 1e-13) -> np.ndarray:
    """Ascending coefficients with negligible leading terms removed."""
    c = np.array(poly.coeffs, dtype=float)
    ref = max(1.0, float(np.max(np.abs(c[:4]))))
    d = 5
    while d > 0 and abs(c[d]) <= drop_tol * ref:
        d -= 1
    return c[: d + 1]


def real_roots(poly: QuinticPoly, tol: float = 1e-9) -> RootSet:
    """Real roots with multiplicities, via companion eigenvalues.

    Eigenvalues are grouped by single linkage; a group of size k is accepted
    as one root of multiplicity k when P and its first k-1 derivatives vanish
    at the group mean to relative accuracy ``tol``.  Failing groups are
    re-split with a smaller linkage radius.
    """
    c = trim_degree(poly)
    deg = c.size - 1
    if deg < 1:
        return RootSet((), (), max(deg, 0))
    z = np.roots(c[::-1])
    scale = 1.0 + float(np.max(np.abs(z)))
    real: list = []
    pairs: list = []

    def resolve(idx: np.ndarray, radius: float):
        for g in _linkage(z[idx], radius):
            members = idx[g]
            pts = z[members]
            k = members.size
            centre = complex(np.mean(pts))
            if k > 1 and abs(centre.imag) <= 1e-8 * scale and _is_multiple_root(c, centre.real, k, tol):
                x = centre.real
                if k > 1:
                    x = _newton(np.polynomial.polynomial.polyder(c, k - 1), x)
                real.append((x, k))
            elif k > 1 and radius > 1e-13 * scale:
                resolve(members, radius / 10)
            else:
                for i in members:
                    zi = z[i]
                    if abs(zi.imag) <= 1e-10 * scale:
                        real.append((_newton(c, zi.real), 1))
                    elif zi.imag > 0:
                        pairs.append((zi.real, zi.imag))
                    elif not np.any(np.abs(z - np.conj(zi)) <= 1e-8 * scale):
                        raise IllConditionedRoots(f"unpaired complex root {zi}")

    resolve(np.arange(z.size), 1e-2 * scale)
    real.sort()
    # merge real roots that polishing drove together
    merged: list = []
    for x, m in real:
        if merged and abs(x - merged[-1][0]) <= 1e-12 * scale:
            px, pm = merged[-1]
            merged[-1] = ((px * pm + x * m) / (pm + m), pm + m)
        else:
            merged.append((x, m))
    nreal = sum(m for _, m in merged)
    if nreal + 2 * len(pairs) != deg:
        raise IllConditionedRoots(
            f"root count mismatch: {nreal} real + {len(pairs)} pairs for degree {deg}")
    return RootSet(tuple((float(x), int(m)) for x, m in merged),
                   tuple(sorted(pairs)), deg)


# --- quadrature ratio -------------------------------------------------------

def ratio_denominator(p: EquationParams, w: WaveParams) -> tuple:
    """(a, b) with F = P / (a + b phi)."""
    if p.epsilon == 0:
        return (-p.Gamma, 0.0)
    return (p.eps2 * w.c - p.Gamma, -p.eps2)


def quadrature_ratio(p: EquationParams, w: WaveParams, phi) -> np.ndarray:
    """F(phi) evaluated pointwise."""
    a, b = ratio_denominator(p, w)
    return kernels.quadrature_ratio(np.asarray(poly_from_params(p, w).coeffs), phi, a, b)


def reduced_ratio(p: EquationParams, w: WaveParams, roots: RootSet | None = None):
    """F as (numerator, denominator) ascending coefficient arrays with a
    removable pole cancelled, so F can be evaluated at the pole itself."""
    c = trim_degree(poly_from_params(p, w))
    a, b = ratio_denominator(p, w)
    den = np.array([a, b]) if b != 0 else np.array([a])
    pole = pole_location(p, w)
    if pole is None:
        return c, den
    roots = roots if roots is not None else real_roots(poly_from_params(p, w))
    scale = 1.0 + max([abs(pole)] + [abs(r) for r in roots.values])
    for r, m in roots.roots:
        if abs(r - pole) <= 1e-9 * scale:
            # divide P by (phi - pole) and the denominator -eps^2 (phi - pole)
            q, _ = np.polynomial.polynomial.polydiv(c, np.array([-pole, 1.0]))
            return q, np.array([-p.eps2])
    return c, den


# --- verdicts -----------------------------------------------------------------

@dataclass(frozen=True)
class Endpoint:
    value: float
    mult: int          # multiplicity as a root of P (0 if not a root)
    is_pole: bool
    labels: tuple      # names of the coincident points, e.g. ("r1", "r2")

    @property
    def order(self) -> int:
        if self.is_pole:
            return self.mult - 1
        return self.mult

    @property
    def kind(self) -> str:
        k = self.order
        if k == -1:
            return "cusp"
        if k == 0:
            return "peak"
        if k == 1:
            return "attained"
        return "asymptotic"


@dataclass(frozen=True)
class WaveVerdict:
    kind: str
    lo: float
    hi: float
    lo_role: str
    hi_role: str
    roots: RootSet
    pole: float | None
    theorem_tag: str
    uncatalogued: bool = False
    lo_order: int = 1
    hi_order: int = 1

    def to_json(self) -> dict:
        def num(v):
            return None if not math.isfinite(v) else float(v)
        return {
            "kind": self.kind,
            "interval": [num(self.lo), num(self.hi)],
            "lo_role": self.lo_role,
            "hi_role": self.hi_role,
            "roots": [{"value": float(v), "mult": int(m)} for v, m in self.roots.roots],
            "pole": None if self.pole is None else float(self.pole),
            "theorem_tag": self.theorem_tag,
        }


_ROLE = {
    ("lo", "attained"): "min_attained", ("hi", "attained"): "max_attained",
    ("lo", "asymptotic"): "inf_asymptotic", ("hi", "asymptotic"): "sup_asymptotic",
    ("lo", "cusp"): "cusp_extremum", ("hi", "cusp"): "cusp_extremum",
    ("lo", "peak"): "peak_extremum", ("hi", "peak"): "peak_extremum",
}


def _kind(t_lo: str, t_hi: str) -> str:
    types = {t_lo, t_hi}
    other = (types - {"cusp", "peak"}) or types
    decays = "asymptotic" in other
    if "cusp" in types:
        return "cuspon_decay" if decays else "cuspon_periodic"
    if "peak" in types:
        return "peakon_decay" if decays else "peakon_periodic"
    return "smooth_asymptotic" if decays else "smooth_periodic"


def _pattern(points: list) -> str:
    out = []
    for i, pt in enumerate(points):
        if i:
            out.append("=" if _same(points[i - 1], pt) else "<")
        out.append(pt[1])
    return "".join(out)


def _same(a, b) -> bool:
    return a[0] == b[0]


def classify(p: EquationParams, w: WaveParams, tol: float = 1e-9,
             include_unbounded: bool = False) -> list:
    """All intervals of travelling-wave amplitudes with F > 0.

    Only bounded intervals are reported unless ``include_unbounded``.
    """
    poly = poly_from_params(p, w)
    roots = real_roots(poly, tol)
    pole = pole_location(p, w)
    scale = 1.0 + max([abs(v) for v in roots.values] + ([abs(pole)] if pole is not None else []))

    # labelled points r1..rN (with multiplicity) and the pole
    labelled = []
    idx = 1
    for v, m in roots.roots:
        for _ in range(m):
            labelled.append((v, f"r{idx}"))
            idx += 1
    ends: list = []
    pole_hit = False
    for v, m in roots.roots:
        labs = tuple(lab for val, lab in labelled if val == v)
        at_pole = pole is not None and abs(v - pole) <= 1e-9 * scale
        if at_pole:
            pole = v  # snap onto the root
            pole_hit = True
        ends.append(Endpoint(v, m, at_pole, labs))
    if pole is not None and not pole_hit:
        ends.append(Endpoint(pole, 0, True, ("c~",)))
    ends.sort(key=lambda e: e.value)

    # ordered point list for the structural tag
    pts = []
    for e in ends:
        for val, lab in labelled:
            if val == e.value:
                pts.append((val, lab))
        if e.is_pole:
            pts.append((e.value, "c~"))
    pattern = _pattern(pts)
    deg = roots.degree
    lead = trim_degree(poly)[-1]
    lead_name = {5: "gamma", 4: "beta"}.get(deg, "cubic")
    if p.epsilon == 0:
        sgn = "<0" if lead / p.Gamma < 0 else ">0"
        head = f"eps=0; {lead_name}/Gamma{sgn}" if deg > 3 else "eps=0; beta=gamma=0"
    else:
        sgn = "<0" if lead < 0 else ">0"
        head = f"eps!=0; {lead_name}{sgn}" if deg > 3 else "eps!=0; beta=gamma=0"
    head += f"; {sum(m for _, m in roots.roots)} real roots; {pattern}"

    fvals = lambda x: quadrature_ratio(p, w, np.asarray(x, dtype=float))
    out = []
    bounds = [-math.inf] + [e.value for e in ends] + [math.inf]
    eps_list = [None] + ends + [None]
    for i in range(len(bounds) - 1):
        lo, hi = bounds[i], bounds[i + 1]
        e_lo, e_hi = eps_list[i], eps_list[i + 1]
        if math.isinf(lo) and math.isinf(hi):
            probe = 0.0
        elif math.isinf(lo):
            probe = hi - 1.0 - abs(hi)
        elif math.isinf(hi):
            probe = lo + 1.0 + abs(lo)
        else:
            probe = 0.5 * (lo + hi)
        if not fvals([probe])[0] > 0:
            continue
        if e_lo is None or e_hi is None:
            if include_unbounded:
                out.append(WaveVerdict(
                    "unbounded", lo, hi,
                    "unbounded" if e_lo is None else _ROLE[("lo", e_lo.kind)],
                    "unbounded" if e_hi is None else _ROLE[("hi", e_hi.kind)],
                    roots, pole, head + "; unbounded interval"))
            continue
        kind = _kind(e_lo.kind, e_hi.kind)
        beyond = any(e.mult > 2 or (e.is_pole and e.mult > 1) for e in (e_lo, e_hi))
        tag = f"{head}; interval ({e_lo.labels[-1]}, {e_hi.labels[0]})"
        if deg == 3:
            tag += "; CH/DGH family"
        if beyond:
            tag += "; uncatalogued endpoint"
        out.append(WaveVerdict(kind, lo, hi, _ROLE[("lo", e_lo.kind)], _ROLE[("hi", e_hi.kind)],
                               roots, pole, tag, beyond, e_lo.order, e_hi.order))
    return out


# --- Vieta constructors -------------------------------------------------------

@dataclass(frozen=True)
class RootSpec:
    """Prescribed factorization of P.

    real_roots: ((value, multiplicity), ...); complex_pairs: ((re, modulus^2), ...)
    for factors phi^2 - 2 re phi + modulus^2; lead: scaled leading coefficient
    (gamma/10 for degree 5, beta/6 for degree 4) or None to solve for it.
    """
    real_roots: tuple = ()
    complex_pairs: tuple = ()
    lead: float | None = None

    @property
    def degree(self) -> int:
        return sum(int(m) for _, m in self.real_roots) + 2 * len(self.complex_pairs)


def monic_product(spec: RootSpec) -> np.ndarray:
    q = np.array([1.0])
    for r, m in spec.real_roots:
        for _ in range(int(m)):
            q = np.polynomial.polynomial.polymul(q, [-float(r), 1.0])
    for re, mod2 in spec.complex_pairs:
        q = np.polynomial.polynomial.polymul(q, [float(mod2), -2.0 * float(re), 1.0])
    return q


def coefficients_from_roots(spec: RootSpec, epsilon: float, Gamma: float, c: float):
    """Complete (EquationParams, WaveParams) from a prescribed factorization.

    The phi^3 coefficient of P is always -1; this fixes the leading
    coefficient when it is not prescribed and is checked when it is.
    """
    deg = spec.degree
    if deg not in (3, 4, 5):
        raise InfeasibleSpec(f"factorization has degree {deg}; need 3, 4 or 5")
    q = monic_product(spec)
    q3 = q[3]
    if spec.lead is None:
        if q3 == 0:
            raise InfeasibleSpec("phi^3 coefficient of the factorization vanishes, cannot equal -1")
        lead = -1.0 / q3
    else:
        lead = float(spec.lead)
        if deg == 3 and lead != -1.0:
            raise InfeasibleSpec("a cubic P must have leading coefficient -1")
        if abs(lead * q3 + 1.0) > 1e-12 * max(1.0, abs(lead * q3)):
            raise InfeasibleSpec(f"prescribed lead {lead} gives phi^3 coefficient {lead * q3}, not -1")
    coef = lead * q
    gamma_s = coef[5] if deg == 5 else 0.0
    beta_s = coef[4] if deg >= 4 else 0.0
    try:
        p = EquationParams(alpha=coef[2] - c, beta=6.0 * beta_s, gamma=10.0 * gamma_s,
                           Gamma=Gamma, epsilon=epsilon)
        w = WaveParams(c=c, A=coef[1] / 2.0, B=coef[0])
    except ValidationError as exc:
        raise InfeasibleSpec(str(exc)) from None
    return p, w


def stumpon_A(p: EquationParams, c: float) -> float:
    """Integration constant A compatible with plateau-bearing weak waves.

    2A = -5 g c~^4 - 4 b c~^3 + 3 c~^2 - 2 (alpha + c) c~ with g = gamma/10,
    b = beta/6 and c~ = c - Gamma/eps^2.
    """
    if p.epsilon == 0:
        raise Unsupported("stumpon constant needs eps != 0")
    ct = c - p.Gamma / p.eps2
    g, b = p.gamma / 10.0, p.beta / 6.0
    return 0.5 * (-5 * g * ct**4 - 4 * b * ct**3 + 3 * ct**2 - 2 * (p.alpha + c) * ct)
