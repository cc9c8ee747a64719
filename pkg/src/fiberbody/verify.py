"""Named invariant-verification suites over a body and projection split.

Each check returns its tolerance and measured residual; a report passes when
every check does.  Suites: homogeneity, symmetry, equivariance,
subadditivity, sandwich, route-agreement.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bodies import (
    Body,
    Discotope,
    Elliptope,
    LinearImage,
    Polytope,
    ProjectionSplit,
    Scaled,
    Zonotope,
    sphere_sample,
    support,
)
from .errors import InputError
from .routes import applicable_methods, compute_fiber, resolve_auto
from .zonoids import DICE_CLOSED_FORM_RATIO, dice_fiber_closed

SUITES = ("homogeneity", "symmetry", "equivariance", "subadditivity",
          "sandwich", "route-agreement")


@dataclass(frozen=True)
class CheckResult:
    name: str
    tolerance: float
    residual: float
    passed: bool
    note: str = ""


@dataclass
class VerifyReport:
    body_label: str
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name, tolerance, residual, note=""):
        self.checks.append(
            CheckResult(name, float(tolerance), float(residual),
                        bool(abs(residual) <= tolerance), note)
        )

    def lines(self) -> list[str]:
        out = [f"verification report for {self.body_label}"]
        for c in self.checks:
            status = "PASS" if c.passed else "FAIL"
            note = f"  ({c.note})" if c.note else ""
            out.append(
                f"  [{status}] {c.name}: residual {c.residual:.3e} vs tolerance "
                f"{c.tolerance:.1e}{note}"
            )
        out.append("overall: " + ("PASS" if self.passed else "FAIL"))
        return out


def _route_tolerance(method: str, values: np.ndarray, stderr=None) -> float:
    scale = 1.0 + float(np.max(np.abs(values))) if len(values) else 1.0
    if method == "zonoid-exact":
        return 1e-9 * scale
    if method == "zonoid-mc":
        return 3.0 * float(np.max(stderr)) + 1e-2 * scale if stderr is not None else 1e-2 * scale
    return 1e-2 * scale


def _fiber(body, split, dirs, method="auto", **kw):
    return compute_fiber(body, split, dirs, method=method, **kw)


def suite_homogeneity(body: Body, split: ProjectionSplit, report: VerifyReport,
                      seed: int = 0, n_dirs: int = 8, factor: float = 2.0, **kw) -> None:
    """Scaling the body by c scales the fiber body by c^(n+1)."""
    dirs = sphere_sample(split.m, n_dirs, "uniform-grid")
    method = resolve_auto(body, split)
    base = _fiber(body, split, dirs, method, seed=seed, **kw)
    scaled = _fiber(Scaled(factor, body), split, dirs, method, seed=seed + 1, **kw)
    expect = factor ** (split.n + 1) * base.values
    tol = 3.0 * _route_tolerance(method, expect, scaled.stderr)
    resid = float(np.max(np.abs(scaled.values - expect)))
    report.add(f"homogeneity(x{factor:g}, factor {factor ** (split.n + 1):g})", tol, resid,
               note=f"route {method}")


def suite_symmetry(body: Body, split: ProjectionSplit, report: VerifyReport,
                   seed: int = 0, n_dirs: int = 8, **kw) -> None:
    """Centered bodies have centrally symmetric fiber bodies: h(u) = h(-u)."""
    dirs = sphere_sample(split.m, n_dirs, "uniform-grid")
    method = resolve_auto(body, split)
    plus = _fiber(body, split, dirs, method, seed=seed, **kw)
    minus = _fiber(body, split, -dirs, method, seed=seed, **kw)
    if method == "zonoid-mc":
        tol, note = 1e-12, "MC estimators are even in u by construction"
    else:
        tol, note = 1e-6 * (1.0 + float(np.max(np.abs(plus.values)))), f"route {method}"
    resid = float(np.max(np.abs(plus.values - minus.values)))
    report.add("symmetry h(u) = h(-u)", tol, resid, note)


def suite_equivariance(body: Body, split: ProjectionSplit, report: VerifyReport,
                       seed: int = 0, n_dirs: int = 8, **kw) -> None:
    """Fiber of (g_V + g_W) K equals |det g_V| g_W (fiber of K)."""
    rng = np.random.default_rng(seed)
    g_v = np.diag(rng.uniform(0.5, 1.5, size=split.n) * rng.choice([-1.0, 1.0], split.n))
    g_w = rng.uniform(-1.0, 1.0, size=(split.m, split.m))
    g_w += np.eye(split.m) * (1.0 + abs(np.linalg.det(g_w)))
    block = np.zeros((split.dim, split.dim))
    block[: split.n, : split.n] = g_v
    block[split.n :, split.n :] = g_w
    # transform in split coordinates, then conjugate back to ambient ones
    B = np.vstack([split.basis_V, split.basis_W])
    transformed = LinearImage(B.T @ block @ B, body)
    dirs = sphere_sample(split.m, n_dirs, "uniform-grid")
    lhs = _fiber(transformed, split, dirs, "slicer", **kw)
    pulled = dirs @ g_w  # rows g_w^T d
    norms = np.linalg.norm(pulled, axis=1, keepdims=True)
    rhs_unit = _fiber(body, split, pulled / norms, "slicer", **kw)
    rhs = abs(np.linalg.det(g_v)) * rhs_unit.values * norms[:, 0]
    scale = 1.0 + float(np.max(np.abs(rhs)))
    resid = float(np.max(np.abs(lhs.values - rhs)))
    report.add("GL equivariance", 1e-2 * scale, resid, note="slicer route both sides")


def suite_subadditivity(body: Body, split: ProjectionSplit, report: VerifyReport,
                        seed: int = 0, triples: int = 200, **kw) -> None:
    """h_K(u+v) <= h_K(u) + h_K(v) on seeded random pairs (body support)."""
    rng = np.random.default_rng(seed)
    worst = -np.inf
    for _ in range(triples):
        u = rng.standard_normal(body.dim)
        v = rng.standard_normal(body.dim)
        worst = max(worst, support(body, u + v) - support(body, u) - support(body, v))
    report.add("support subadditivity", 1e-9, max(worst, 0.0),
               note=f"{triples} seeded triples")


def suite_sandwich(body: Body, split: ProjectionSplit, report: VerifyReport,
                   seed: int = 0, n_dirs: int = 64, nodes: int = 64, **kw) -> None:
    """Fiber bodies preserve inclusions: tetrahedron <= elliptope <= cube."""
    if not isinstance(body, Elliptope):
        raise InputError("the sandwich suite is defined for the elliptope")
    tetra = Polytope([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]])
    cube = Zonotope(2 * np.eye(3))
    dirs = sphere_sample(split.m, n_dirs, "uniform-grid")
    h_t = _fiber(tetra, split, dirs, "slicer", nodes=nodes).values
    h_e = _fiber(body, split, dirs, "slicer", nodes=nodes).values
    h_c = _fiber(cube, split, dirs, "zonoid-exact").values
    slack = min(float(np.min(h_e - h_t)), float(np.min(h_c - h_e)))
    report.add("sandwich inclusions", 1e-3, max(-slack, 0.0),
               note="min slack %.3e" % slack)


def suite_route_agreement(body: Body, split: ProjectionSplit, report: VerifyReport,
                          seed: int = 0, n_dirs: int = 16, nodes: int = 64,
                          samples: int = 200_000, **kw) -> None:
    """All applicable fiber routes agree pairwise within combined tolerances."""
    dirs = sphere_sample(split.m, n_dirs, "uniform-grid")
    methods = [m for m in applicable_methods(body, split) if m != "curved" or
               split.n == 1]
    results = {}
    for m in methods:
        results[m] = compute_fiber(body, split, dirs, method=m, nodes=nodes,
                                   samples=samples, seed=seed)
    names = list(results)
    for i in range(len(names)):
        for j in range(i + 1, len(names)):
            a, b = results[names[i]], results[names[j]]
            tol = max(_route_tolerance(names[i], a.values, a.stderr),
                      _route_tolerance(names[j], b.values, b.stderr))
            resid = float(np.max(np.abs(a.values - b.values)))
            report.add(f"route {names[i]} vs {names[j]}", tol, resid)
    if isinstance(body, Discotope) and "closed-form" in results:
        # quantify the constant of the commonly quoted closed form
        printed = np.array([dice_fiber_closed(d) for d in dirs])
        ratio = float(np.mean(results["closed-form"].values / printed))
        report.add("quoted closed form x4 identity", 1e-9,
                   abs(ratio - DICE_CLOSED_FORM_RATIO),
                   note=f"routes / quoted formula = {ratio:.6f}")


_SUITE_FUNCS = {
    "homogeneity": suite_homogeneity,
    "symmetry": suite_symmetry,
    "equivariance": suite_equivariance,
    "subadditivity": suite_subadditivity,
    "sandwich": suite_sandwich,
    "route-agreement": suite_route_agreement,
}


def run_suites(body: Body, split: ProjectionSplit, suites, label: str = "body",
               seed: int = 0, **kw) -> VerifyReport:
    report = VerifyReport(label)
    for name in suites:
        if name not in _SUITE_FUNCS:
            raise InputError(f"unknown suite {name!r}; choose from {SUITES}")
        _SUITE_FUNCS[name](body, split, report, seed=seed, **kw)
    return report
