"""Catalog-wide residual suites behind the `check` command.

Every function returns a list of CheckLine records; the CLI renders them as
TAP.  All sampling is seeded so repeated runs are bit-identical.
"""

from __future__ import annotations

import math
import zlib
from dataclasses import dataclass

import numpy as np

from .algebra import Covector, classify_map, orbit_report
from .catalog import GroupBundle, builtin, semidirect_S_inverse
from .errors import DomainError, GenericSetError
from .flows import (
    DEFAULT_CONFIG,
    FlowConfig,
    exp_map,
    left_flow,
    right_flow,
    vertical_field,
    vertical_flow,
)
from .groups import Ad_star, group_exp, group_log, momentum_maps
from .hamiltonians import killing_hamiltonian, pullback_hamiltonian
from .symmetry import (
    VerifiedSymmetry,
    apply_s,
    corollary2_check,
    proposition1_residual,
    theorem_residual,
    verify_candidate,
)

SUITES = ("invariants", "theorem", "prop1", "corollaries", "all")


def _crc(name: str) -> int:
    """Stable per-name seed component (str hash is randomized per process)."""
    return zlib.crc32(name.encode()) & 0xFFFF


@dataclass(frozen=True)
class CheckLine:
    name: str
    passed: bool
    detail: str
    skipped: bool = False


def _ok(name: str, residual: float, tol: float) -> CheckLine:
    return CheckLine(name, residual <= tol, f"residual {residual:.3e} (tol {tol:.1e})")


def _skip(name: str, why: str) -> CheckLine:
    return CheckLine(name, True, why, skipped=True)


def sample_in_generic_set(bundle: GroupBundle, rng: np.random.Generator) -> Covector | None:
    for _ in range(500):
        p = bundle.algebra.covector(rng.uniform(-1.0, 1.0, size=bundle.algebra.dim))
        if orbit_report(p).in_generic_set:
            return p
    return None


def verified_symmetries(
    bundle: GroupBundle, hamiltonian: str = "sr"
) -> dict[str, VerifiedSymmetry]:
    """Engine verdicts for every catalog candidate that verifies."""
    H = bundle.hamiltonians[hamiltonian]
    out = {}
    for name, cand in bundle.symmetries.items():
        verdict = verify_candidate(cand, H)
        if isinstance(verdict, VerifiedSymmetry):
            out[name] = verdict
    return out


def _bundles(groups: list[str] | None) -> list[GroupBundle]:
    names = groups if groups is not None else ["heisenberg3", "se2", "sh2", "so3", "engel4"]
    return [builtin(n) for n in names]


# -- suites -------------------------------------------------------------------------


def suite_invariants(groups: list[str] | None, seed: int) -> list[CheckLine]:
    from .algebra import homomorphism_residual, jacobi_residual

    lines: list[CheckLine] = []
    for bundle in _bundles(groups):
        g = bundle.name
        algebra = bundle.algebra
        H = bundle.hamiltonians["sr"]
        n = algebra.dim
        jac, _ = jacobi_residual(algebra.structure_constants)
        lines.append(_ok(f"jacobi[{g}]", jac, 1e-12))
        hom, _ = homomorphism_residual(
            algebra.structure_constants, algebra.representation.matrices
        )
        lines.append(_ok(f"representation-homomorphism[{g}]", hom, 1e-12))

        rng = np.random.default_rng([seed, _crc(g), 1])
        worst_h = worst_jl = worst_jr = worst_tr = worst_proj = 0.0
        for _ in range(2):
            p = algebra.covector(rng.uniform(-1.0, 1.0, size=n))
            h0 = H.value(p.coords)
            pt = left_flow(H, p, 10.0)
            worst_h = max(worst_h, abs(H.value(pt.covector.coords) - h0) / (1 + abs(h0)))
            jl, _ = momentum_maps(pt)
            worst_jl = max(worst_jl, float(np.max(np.abs(jl.coords - p.coords))))
            tr = Ad_star(pt.g, p)
            worst_tr = max(worst_tr, float(np.max(np.abs(tr.coords - pt.covector.coords))))
            vf = vertical_flow(H, p, 10.0)
            worst_proj = max(worst_proj, float(np.max(np.abs(vf.coords - pt.covector.coords))))
            qt = right_flow(H, p, 10.0)
            _, jr = momentum_maps(qt)
            jr0 = p.coords
            worst_jr = max(worst_jr, float(np.max(np.abs(jr.coords - jr0))))
        lines.append(_ok(f"energy-conservation[{g}]", worst_h, 1e-8))
        lines.append(_ok(f"left-momentum-conservation[{g}]", worst_jl, 1e-7))
        lines.append(_ok(f"right-momentum-conservation[{g}]", worst_jr, 1e-7))
        lines.append(_ok(f"coadjoint-transport[{g}]", worst_tr, 1e-6))
        lines.append(_ok(f"vertical-projection[{g}]", worst_proj, 1e-8))

        # adaptive stepper against the fixed-step twin
        p = algebra.covector(rng.uniform(-1.0, 1.0, size=n))
        fine = FlowConfig(method="rk4_fixed", max_step=1e-4)
        a = left_flow(H, p, 1.0)
        bpt = left_flow(H, p, 1.0, fine)
        agree = max(
            float(np.max(np.abs(a.g.matrix - bpt.g.matrix))),
            float(np.max(np.abs(a.covector.coords - bpt.covector.coords))),
        )
        lines.append(_ok(f"adaptive-vs-fixed-step[{g}]", agree, 1e-7))

        # consistency of the group and algebra coadjoint conventions
        xi = algebra.vector(rng.uniform(-1.0, 1.0, size=n))
        p = algebra.covector(rng.uniform(-1.0, 1.0, size=n))
        step = 1e-5
        plus = Ad_star(group_exp(xi * step), p)
        minus = Ad_star(group_exp(xi * (-step)), p)
        fd = (plus.coords - minus.coords) / (2 * step)
        from .algebra import ad_star

        exact = ad_star(xi, p).coords
        lines.append(
            _ok(f"ad-Ad-consistency[{g}]", float(np.max(np.abs(fd - exact))), 1e-6)
        )

        # closure of verified automorphisms under composition
        verified = verified_symmetries(bundle)
        case_a = [v for v in verified.values() if v.case == "a"]
        if len(case_a) >= 2:
            comp = case_a[0].sigma.compose(case_a[1].sigma)
            lines.append(
                CheckLine(
                    f"automorphism-closure[{g}]",
                    classify_map(comp).kind == "automorphism",
                    "composition of two verified automorphisms classifies as automorphism",
                )
            )

        # bi-invariant-metric availability matches compactness
        try:
            HK = killing_hamiltonian(algebra)
            worst = 0.0
            for _ in range(100):
                pp = algebra.covector(rng.standard_normal(n))
                worst = max(worst, float(np.max(np.abs(vertical_field(HK, pp).coords))))
            lines.append(_ok(f"bi-invariant-vertical-field[{g}]", worst, 1e-14))
        except DomainError:
            lines.append(
                CheckLine(
                    f"bi-invariant-rejected[{g}]",
                    g != "so3",
                    "degenerate trace form rejected",
                )
            )
    return lines


def _seeded_pair(rng: np.random.Generator, bundle: GroupBundle, case: str, t_max: float):
    if case == "b":
        p = sample_in_generic_set(bundle, rng)
    else:
        p = bundle.algebra.covector(rng.uniform(-1.0, 1.0, size=bundle.algebra.dim))
    t = float(rng.uniform(0.05, t_max))
    return p, t


def suite_theorem(groups: list[str] | None, seed: int, pairs: int = 20) -> list[CheckLine]:
    lines: list[CheckLine] = []
    for bundle in _bundles(groups):
        g = bundle.name
        H = bundle.hamiltonians["sr"]
        for name, V in verified_symmetries(bundle).items():
            rng = np.random.default_rng([seed, _crc(g), _crc(name)])
            if V.case == "b" and sample_in_generic_set(bundle, rng) is None:
                lines.append(
                    _skip(f"theorem[{g}/{name}]", "no generic covectors (orbit codim > 1)")
                )
                continue
            worst = 0.0
            for _ in range(pairs):
                p, t = _seeded_pair(rng, bundle, V.case, 10.0)
                worst = max(worst, theorem_residual(V, H, p, t))
            lines.append(_ok(f"theorem[{g}/{name}]", worst, 1e-6))
    return lines


def suite_prop1(groups: list[str] | None, seed: int, pairs: int = 20) -> list[CheckLine]:
    lines: list[CheckLine] = []
    for bundle in _bundles(groups):
        g = bundle.name
        H = bundle.hamiltonians["sr"]
        for name, V in verified_symmetries(bundle).items():
            if V.case != "b":
                continue
            rng = np.random.default_rng([seed, _crc(g), _crc(name), 2])
            if sample_in_generic_set(bundle, rng) is None:
                lines.append(
                    _skip(f"prop1[{g}/{name}]", "no generic covectors (orbit codim > 1)")
                )
                continue
            worst = 0.0
            for _ in range(pairs):
                p, t = _seeded_pair(rng, bundle, "b", 5.0)
                worst = max(worst, proposition1_residual(V, H, p, t))
            lines.append(_ok(f"prop1[{g}/{name}]", worst, 1e-6))
    return lines


def suite_corollaries(groups: list[str] | None, seed: int) -> list[CheckLine]:
    lines: list[CheckLine] = []
    wanted = set(groups) if groups is not None else {"se2", "sh2", "so3"}

    # factor-wise action of S^{-1} on the semidirect catalogs
    for gname in ("se2", "sh2"):
        if gname not in wanted:
            continue
        bundle = builtin(gname)
        semi = bundle.semidirect
        verified = verified_symmetries(bundle)
        rng = np.random.default_rng([seed, _crc(gname), 3])
        worst = {"a": 0.0, "b": 0.0}
        for _ in range(100):
            v = rng.uniform(-2.0, 2.0, size=2)
            block = semi.sample_g2(rng)
            matrix = semi.assemble(v, block)
            for V in verified.values():
                g1p, g2p = semidirect_S_inverse(V, bundle, v, block)
                direct = V.s_map.apply(matrix, inverse=True)
                err = float(np.max(np.abs(semi.assemble(g1p, g2p) - direct)))
                worst[V.case] = max(worst[V.case], err)
        lines.append(_ok(f"corollary3-case-a[{gname}]", worst["a"], 1e-10))
        lines.append(_ok(f"corollary3-case-b[{gname}]", worst["b"], 1e-10))

    if "so3" in wanted:
        bundle = builtin("so3")
        algebra = bundle.algebra
        H_sr = bundle.hamiltonians["sr"]
        HK = bundle.hamiltonians["killing"]
        rng = np.random.default_rng([seed, 4])

        worst = 0.0
        for _ in range(100):
            p = algebra.covector(rng.standard_normal(3))
            worst = max(worst, float(np.max(np.abs(vertical_field(HK, p).coords))))
        lines.append(_ok("corollary2-killing-vertical[so3]", worst, 1e-14))

        V = verify_candidate(bundle.symmetries["flip_xz"], H_sr)
        met = 0
        for _ in range(10):
            p = algebra.covector(0.8 * rng.standard_normal(3))
            t = float(rng.uniform(0.5, 1.2))
            end = exp_map(H_sr, p, t)
            xi = group_log(end) * (1.0 / t)
            if corollary2_check(algebra, H_sr, V, p, xi, t):
                met += 1
        lines.append(
            CheckLine(
                "corollary2-symmetric-meetings[so3]",
                met == 10,
                f"{met}/10 symmetric meetings within 1e-6",
            )
        )

        # two problems sharing a symmetry: meetings map to meetings
        VK = verify_candidate(bundle.symmetries["flip_xz"], HK)
        worst = 0.0
        for _ in range(5):
            p1 = algebra.covector(0.8 * rng.standard_normal(3))
            t = float(rng.uniform(0.5, 1.2))
            end = exp_map(H_sr, p1, t)
            p2 = group_log(end) * (2.0 / t)
            p2 = algebra.covector(p2.coords)
            meet0 = float(np.max(np.abs(exp_map(HK, p2, t).matrix - end.matrix)))
            m1, _ = apply_s(V, H_sr, p1, t)
            m2, _ = apply_s(VK, HK, p2, t)
            e1 = exp_map(H_sr, m1, t)
            e2 = exp_map(HK, m2, t)
            worst = max(worst, meet0, float(np.max(np.abs(e1.matrix - e2.matrix))))
        lines.append(_ok("corollary1-shared-symmetry[so3]", worst, 1e-6))
    return lines


def run_suites(
    suite: str, groups: list[str] | None, seed: int, pairs: int = 20
) -> list[CheckLine]:
    if suite not in SUITES:
        raise ValueError(f"unknown suite '{suite}'; choose from {SUITES}")
    if groups is not None and not groups:
        return []
    lines: list[CheckLine] = []
    if suite in ("invariants", "all"):
        lines += suite_invariants(groups, seed)
    if suite in ("theorem", "all"):
        lines += suite_theorem(groups, seed, pairs)
    if suite in ("prop1", "all"):
        lines += suite_prop1(groups, seed, pairs)
    if suite in ("corollaries", "all"):
        lines += suite_corollaries(groups, seed)
    return lines
