"""The quadratic family with small perturbations, and its derivative checks.

The map is (x, y) -> (x^2 + a + y, 0) + B(x, y); built-in perturbations are
B = 0 and the classical B = (0, b x), both with |det Tf| <= b everywhere.
On top sit the tangent cocycle (log-norm ladder, safe for 10^7 steps), cone
fields, the sampled expansion and norm-bound checkers, hyperbolic-times and
partial-collapse inequalities, most-contracted directions, and Lyapunov
exponents.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .params import Params

__all__ = [
    "HenonMap",
    "ConeField",
    "OrbitSegment",
    "TangentProduct",
    "map_from_dict",
    "map_to_dict",
    "load_map",
    "iterate",
    "tangent_cocycle",
    "region_sample_U",
    "G4Report",
    "check_expansion_G4",
    "G6Report",
    "check_G6",
    "h_times_check",
    "pce_check",
    "most_contracted_direction",
    "lyapunov",
]

_PERTURBATIONS = ("zero", "classical", "custom")


@dataclass(frozen=True)
class HenonMap:
    """(x, y) -> (x^2 + a + y, 0) + B with ||B||_C2 <= b.

    perturbation "zero" gives the 1-D quadratic family on R x {0};
    "classical" is B = (0, b x) (det = -b everywhere); "custom" takes
    explicit callables for B and its Jacobian.
    """

    a: float
    b: float = 0.0
    perturbation: str = "zero"
    custom_B: Callable[[float, float], tuple[float, float]] | None = None
    custom_dB: Callable[[float, float], np.ndarray] | None = None

    def __post_init__(self) -> None:
        if self.perturbation not in _PERTURBATIONS:
            raise ValueError(f"unknown perturbation {self.perturbation!r}")
        if self.b < 0:
            raise ValueError("b must be >= 0")
        if self.perturbation == "custom" and (
            self.custom_B is None or self.custom_dB is None
        ):
            raise ValueError("custom perturbation needs custom_B and custom_dB")

    def apply(self, x: float, y: float) -> tuple[float, float]:
        if self.perturbation == "zero":
            return (x * x + self.a + y, 0.0)
        if self.perturbation == "classical":
            return (x * x + self.a + y, self.b * x)
        bx, by = self.custom_B(x, y)
        return (x * x + self.a + y + bx, by)

    def jacobian(self, x: float, y: float) -> np.ndarray:
        J = np.array([[2.0 * x, 1.0], [0.0, 0.0]])
        if self.perturbation == "classical":
            J[1, 0] = self.b
        elif self.perturbation == "custom":
            J = J + self.custom_dB(x, y)
        return J

    def second_derivative_norm(self, x: float, y: float) -> float:
        """Operator norm of the second derivative (2 for the built-ins)."""
        if self.perturbation != "custom":
            return 2.0
        # central second differences of the custom part, worst direction
        h = 1e-5
        worst = 0.0
        for ux, uy in ((1.0, 0.0), (0.0, 1.0), (math.sqrt(0.5), math.sqrt(0.5))):
            p = np.array(self.custom_B(x + h * ux, y + h * uy))
            m = np.array(self.custom_B(x - h * ux, y - h * uy))
            c = np.array(self.custom_B(x, y))
            worst = max(worst, float(np.linalg.norm(p + m - 2 * c)) / h**2)
        return 2.0 + worst


def map_from_dict(data: dict) -> HenonMap:
    """Build a map from {"a": ..., "b": ..., "perturbation": "classical"}."""
    try:
        a = float(data["a"])
        b = float(data.get("b", 0.0))
        pert = str(data.get("perturbation", "zero"))
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed map document: {exc}") from exc
    if pert == "custom":
        raise ValueError("custom perturbations cannot be loaded from JSON")
    return HenonMap(a=a, b=b, perturbation=pert)


def map_to_dict(m: HenonMap) -> dict:
    return {"a": m.a, "b": m.b, "perturbation": m.perturbation}


def load_map(path: str) -> HenonMap:
    with open(path, "r", encoding="utf-8") as fh:
        return map_from_dict(json.load(fh))


@dataclass(frozen=True)
class ConeField:
    """Symmetric cone of directions within half_angle of +-center."""

    center: tuple[float, float] = (1.0, 0.0)
    half_angle: float = 0.5

    def __post_init__(self) -> None:
        if not 0.0 < self.half_angle < math.pi / 4:
            raise ValueError("half-angle must lie in (0, pi/4)")
        n = math.hypot(*self.center)
        if n == 0:
            raise ValueError("center direction must be nonzero")

    def angle_to(self, u: Sequence[float]) -> float:
        cx, cy = self.center
        nc = math.hypot(cx, cy)
        nu = math.hypot(u[0], u[1])
        if nu == 0:
            raise ValueError("zero vector has no direction")
        cosv = abs(u[0] * cx + u[1] * cy) / (nc * nu)
        return math.acos(min(1.0, cosv))

    def contains(self, u: Sequence[float]) -> bool:
        return self.angle_to(u) <= self.half_angle


def horizontal_cone(half_angle: float = 0.5) -> ConeField:
    return ConeField((1.0, 0.0), half_angle)


def vertical_cone(half_angle: float = 0.5) -> ConeField:
    return ConeField((0.0, 1.0), half_angle)


@dataclass(frozen=True)
class OrbitSegment:
    points: np.ndarray  # shape (m+1, 2), orbit up to escape
    escaped: bool
    escape_time: int | None
    n_requested: int

    def __len__(self) -> int:
        return self.points.shape[0]

    def x(self) -> np.ndarray:
        return self.points[:, 0]


def iterate(
    m: HenonMap,
    point: Sequence[float],
    n: int,
    escape_radius: float = 10.0,
) -> OrbitSegment:
    """Forward orbit; stops early (flagged) once |x| or |y| exceeds the
    escape radius."""
    if n < 0:
        raise ValueError("n must be >= 0")
    x, y = float(point[0]), float(point[1])
    pts = np.empty((n + 1, 2))
    pts[0] = (x, y)
    for k in range(1, n + 1):
        x, y = m.apply(x, y)
        if abs(x) > escape_radius or abs(y) > escape_radius:
            return OrbitSegment(
                points=pts[:k].copy(), escaped=True, escape_time=k, n_requested=n
            )
        pts[k] = (x, y)
    return OrbitSegment(points=pts, escaped=False, escape_time=None, n_requested=n)


@dataclass(frozen=True)
class TangentProduct:
    """Log-norm ladder of a tangent vector along an orbit.

    ell[k] = log ||T f^k (u)|| for the initial unit vector u (ell[0] = 0);
    directions[k] is the unit image direction (nan once the vector hits an
    exact kernel); logdets[k-1] = log |det T f| at step k.
    """

    base: tuple[float, float]
    n: int
    ell: np.ndarray
    directions: np.ndarray
    logdets: np.ndarray
    escaped: bool
    escape_time: int | None

    def growth(self, j: int, k: int) -> float:
        """log-norm gain between steps j <= k."""
        return float(self.ell[k] - self.ell[j])

    def logdet_total(self, k: int) -> float:
        return float(self.logdets[:k].sum())


def tangent_cocycle(
    m: HenonMap,
    point: Sequence[float],
    u: Sequence[float],
    n: int,
    escape_radius: float = 10.0,
) -> TangentProduct:
    """Renormalized product of Jacobians applied to u.

    Norms accumulate in log space, so horizons up to 10^7 neither overflow
    nor underflow.  A vector falling into an exact kernel sends the ladder
    to -inf from that step on.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    ux, uy = float(u[0]), float(u[1])
    norm = math.hypot(ux, uy)
    if norm == 0:
        raise ValueError("tangent vector must be nonzero")
    ux, uy = ux / norm, uy / norm

    x, y = float(point[0]), float(point[1])
    ell = np.zeros(n + 1)
    dirs = np.empty((n + 1, 2))
    dirs[0] = (ux, uy)
    logdets = np.empty(n)
    escaped = False
    escape_time = None
    classical = m.perturbation == "classical"
    zero = m.perturbation == "zero"
    k = 0
    for k in range(1, n + 1):
        if zero or classical:
            j21 = m.b if classical else 0.0
            vx = 2.0 * x * ux + uy
            vy = j21 * ux
            det = -j21  # det [[2x, 1], [j21, 0]]
        else:
            J = m.jacobian(x, y)
            vx = J[0, 0] * ux + J[0, 1] * uy
            vy = J[1, 0] * ux + J[1, 1] * uy
            det = float(np.linalg.det(J))
        logdets[k - 1] = math.log(abs(det)) if det != 0.0 else -math.inf
        vnorm = math.hypot(vx, vy)
        if vnorm == 0.0:
            ell[k:] = -math.inf
            dirs[k:] = math.nan
            logdets[k:] = logdets[k - 1]
            return TangentProduct(
                base=(float(point[0]), float(point[1])),
                n=n,
                ell=ell,
                directions=dirs,
                logdets=logdets,
                escaped=False,
                escape_time=None,
            )
        ell[k] = ell[k - 1] + math.log(vnorm)
        ux, uy = vx / vnorm, vy / vnorm
        dirs[k] = (ux, uy)
        x, y = m.apply(x, y)
        if abs(x) > escape_radius or abs(y) > escape_radius:
            escaped = True
            escape_time = k
            ell = ell[: k + 1]
            dirs = dirs[: k + 1]
            logdets = logdets[:k]
            break
    return TangentProduct(
        base=(float(point[0]), float(point[1])),
        n=k if escaped else n,
        ell=ell,
        directions=dirs,
        logdets=logdets,
        escaped=escaped,
        escape_time=escape_time,
    )


def region_sample_U(
    m: HenonMap, params: Params, count: int, seed: int, pad: float = 0.0
) -> np.ndarray:
    """Sample the 3-theta neighborhood of [a, f(a)] x {0}.

    At b = 0 the neighborhood collapses to the segment itself; pad widens
    the interval at both ends (useful to keep a safety distance from the
    endpoints or to stress the check).
    """
    rng = np.random.default_rng(seed)
    fa = m.a * m.a + m.a  # image of the critical value line start
    lo, hi = min(m.a, fa) - pad, max(m.a, fa) + pad
    t = 3.0 * params.theta
    xs = rng.uniform(lo - t, hi + t, size=count)
    ys = rng.uniform(-t, t, size=count) if t > 0 else np.zeros(count)
    return np.column_stack([xs, ys])


@dataclass(frozen=True)
class G4Report:
    n_s: int
    count: int
    expansion_ok: tuple[bool, ...]
    cone_ok: tuple[bool, ...]
    pass_fraction: float
    worst_margin: float  # min over samples/k of ell_ns - ell_{ns-k} - k c

    def to_dict(self) -> dict:
        return {
            "n_s": self.n_s,
            "count": self.count,
            "expansion_pass": int(sum(self.expansion_ok)),
            "cone_pass": int(sum(self.cone_ok)),
            "pass_fraction": self.pass_fraction,
            "worst_margin": self.worst_margin,
        }


def check_expansion_G4(
    m: HenonMap,
    sample: Sequence[tuple[Sequence[float], Sequence[float]]],
    n_s: int,
    params: Params,
    cone: ConeField | None = None,
) -> G4Report:
    """Sampled expansion and cone-invariance check.

    For each (z, u): ||Tf^{n_s}(u)|| >= e^{kc} ||Tf^{n_s - k}(u)|| for all
    k <= n_s, and Tf^{n_s}(u) lies in the cone.  Certifies only "no
    counterexample found in this sample".
    """
    if n_s < 1:
        raise ValueError("n_s must be >= 1")
    cone = cone or horizontal_cone()
    c = params.c
    exp_ok: list[bool] = []
    cone_ok: list[bool] = []
    worst = math.inf
    for z, u in sample:
        tp = tangent_cocycle(m, z, u, n_s)
        if tp.escaped or len(tp.ell) <= n_s:
            exp_ok.append(False)
            cone_ok.append(False)
            continue
        margins = [
            tp.ell[n_s] - tp.ell[n_s - k] - k * c for k in range(1, n_s + 1)
        ]
        mn = min(margins)
        worst = min(worst, mn)
        exp_ok.append(bool(mn >= 0.0))
        d = tp.directions[n_s]
        cone_ok.append(bool(np.all(np.isfinite(d))) and cone.contains(d))
    both = [e and co for e, co in zip(exp_ok, cone_ok)]
    frac = sum(both) / len(both) if both else 0.0
    return G4Report(
        n_s=n_s,
        count=len(exp_ok),
        expansion_ok=tuple(exp_ok),
        cone_ok=tuple(cone_ok),
        pass_fraction=frac,
        worst_margin=worst,
    )


@dataclass(frozen=True)
class G6Report:
    sup_Tf: float
    sup_T2f: float
    bound: float
    ok: bool
    argmax: tuple[float, float]

    def to_dict(self) -> dict:
        return {
            "sup_Tf": self.sup_Tf,
            "sup_T2f": self.sup_T2f,
            "bound": self.bound,
            "ok": self.ok,
            "argmax": list(self.argmax),
        }


def check_G6(
    m: HenonMap, sample: Iterable[Sequence[float]], params: Params
) -> G6Report:
    """Sampled first/second derivative norms against e^{c+} = 5."""
    bound = math.exp(params.c_plus)
    sup1 = 0.0
    sup2 = 0.0
    arg = (math.nan, math.nan)
    for z in sample:
        x, y = float(z[0]), float(z[1])
        n1 = float(np.linalg.norm(m.jacobian(x, y), 2))
        if n1 > sup1:
            sup1 = n1
            arg = (x, y)
        sup2 = max(sup2, m.second_derivative_norm(x, y))
    return G6Report(
        sup_Tf=sup1,
        sup_T2f=sup2,
        bound=bound,
        ok=bool(sup1 <= bound and sup2 <= bound),
        argmax=arg,
    )


def h_times_check(tp: TangentProduct, n: int, params: Params) -> bool:
    """n is a hyperbolic time: ell_n >= (c/3)(n - l) + ell_l for all l <= n."""
    if n > tp.n:
        raise ValueError("horizon shorter than n")
    c3 = params.c / 3.0
    ln = tp.ell[n]
    return bool(all(ln >= c3 * (n - l) + tp.ell[l] for l in range(n + 1)))


def pce_check(tp: TangentProduct, k: int, params: Params) -> bool:
    """Partial collapse bound: ||Tf^j|| >= e^{-Xi c+ (M+1+j)} for j <= k.

    Evaluated on the ladder of the supplied vector, which bounds the
    operator norm from below; a pass here implies the operator-norm
    statement.  At finite M only an exact collapse (-inf ladder) fails.
    """
    if k > tp.n:
        raise ValueError("horizon shorter than k")
    Xi = params.Xi
    cp = params.c_plus
    for j in range(k + 1):
        thr = -Xi * cp * (params.M + 1 + j)
        if not tp.ell[j] >= thr:
            return False
    return True


def most_contracted_direction(
    m: HenonMap, point: Sequence[float], k: int
) -> tuple[np.ndarray, float]:
    """Unit right-singular direction of the smaller singular value of Tf^k.

    Builds the k-step Jacobian product densely (safe for small k) and
    factorizes it.  Returns (e_k, gap) with gap the singular-value spread;
    coincident singular values raise.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    x, y = float(point[0]), float(point[1])
    A = np.eye(2)
    for _ in range(k):
        A = m.jacobian(x, y) @ A
        x, y = m.apply(x, y)
    _, sv, vt = np.linalg.svd(A)
    gap = float(sv[0] - sv[1])
    if gap == 0.0:
        raise ValueError("singular values coincide; most contracted direction undefined (gap 0)")
    return vt[1].copy(), gap


def lyapunov(
    m: HenonMap, point: Sequence[float], n: int, u: Sequence[float] = (1.0, 0.0)
) -> tuple[float, float]:
    """(lambda_1, lambda_2) along one orbit.

    lambda_1 from the renormalized growth of u; lambda_2 closes the pair
    through the determinant identity lambda_1 + lambda_2 = mean log |det|.
    Degenerate Jacobians (b = 0) give lambda_2 = -inf.  Escaping orbits
    raise.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    tp = tangent_cocycle(m, point, u, n)
    if tp.escaped:
        raise RuntimeError(f"orbit escaped at step {tp.escape_time}")
    lam1 = float(tp.ell[n]) / n
    mean_logdet = float(tp.logdets.sum()) / n
    lam2 = mean_logdet - lam1
    return lam1, lam2
