"""Certification of Drazin-inverse perturbation results for ``B = A + E``.

For a perturbation living inside the core of ``A``,
``E = A A^D E A A^D``, with ``rho_QT(A^D E) < 1`` the following hold:

    A A^D = B B^D
    B^D - A^D = -B^D E A^D = -A^D E B^D
    B^D = (I + A^D E)^{-1} A^D = A^D (I + E A^D)^{-1}

and, when ``||A^D E||_s < 1`` and the resolvent bound
``||(I + A^D E)^{-1}||_s <= 1 / (1 - ||A^D E||_s)`` (condition Delta) holds,

    ||A^D|| / (1 + ||A^D E||) <= ||B^D|| <= ||A^D|| / (1 - ||A^D E||)
    ||B^D - A^D|| / ||A^D|| <= ||A^D E|| / (1 - ||A^D E||)
                            <= (kappa ||E|| / ||A||) / (1 - kappa ||E|| / ||A||)

with ``kappa = ||A||_s ||A^D||_s``. (Products are QT-products.) This module
checks the hypotheses numerically, measures every identity residual and
evaluates the bound chain; nothing is assumed.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

from .errors import BoundInapplicableError, DimensionError, HypothesisError, InconsistencyError, SingularError
from .spectral import norm_s, qt_drazin, qt_index, qt_inverse, qt_spectral_radius
from .tensor import QTensor, identity_tensor, qt_product

CORE_TOL = 1e-8
IDENTITY_TOL = 1e-6
BOUND_SLACK = 1e-9


@dataclass
class PerturbReport:
    """Everything measured for one pair ``(A, E)``.

    Residuals are raw ``||.||_s`` distances except ``cond_core_residual``,
    which is divided by ``max(1, ||E||_s)``. An identity counts as verified
    when its residual is at most ``tol * max(1, ||rhs||_s)``.
    """

    status: str = "pending"
    shape: tuple = ()
    index_a: int | None = None
    index_b: int | None = None
    cond_core_residual: float | None = None
    rho_value: float | None = None
    rho_swapped: float | None = None
    norm_value: float | None = None
    projector_residual: float | None = None
    diff_residual_left: float | None = None
    diff_residual_right: float | None = None
    resolvent_residual_left: float | None = None
    resolvent_residual_right: float | None = None
    delta_holds: bool | None = None
    delta_lhs: float | None = None
    delta_rhs: float | None = None
    hypotheses: dict = field(default_factory=dict)
    identities: dict = field(default_factory=dict)
    norms: dict = field(default_factory=dict)
    bounds: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    @property
    def verified(self) -> bool:
        return bool(self.identities) and all(self.identities.values())

    def to_dict(self) -> dict:
        out = asdict(self)
        out["shape"] = list(self.shape)
        return out


def _check_pair(a: QTensor, e: QTensor) -> None:
    if a.n1 != a.n2:
        raise DimensionError(f"A needs square frontal slices, got {a.shape}")
    if a.shape != e.shape:
        raise DimensionError(f"A and E must share a shape, got {a.shape} and {e.shape}")


def core_residual(a: QTensor, ad: QTensor, e: QTensor) -> float:
    proj = qt_product(a, ad)
    projected = qt_product(qt_product(proj, e), proj)
    return norm_s(e - projected) / max(1.0, norm_s(e))


def check_core_perturbation(a: QTensor, e: QTensor, tol: float = CORE_TOL) -> tuple[bool, float]:
    """Is ``E = A A^D E A A^D`` up to ``tol`` (relative to ``max(1, ||E||_s)``)?"""
    _check_pair(a, e)
    resid = core_residual(a, qt_drazin(a), e)
    return resid <= tol, resid


def _record(report: PerturbReport, name: str, resid: float, rhs: QTensor, tol: float) -> float:
    report.identities[name] = resid <= tol * max(1.0, norm_s(rhs))
    return resid


def _identities(a: QTensor, e: QTensor, ad: QTensor, tol: float, core_tol: float) -> PerturbReport:
    _check_pair(a, e)
    n = a.n1
    report = PerturbReport(shape=a.shape)
    report.index_a = qt_index(a)
    report.cond_core_residual = core_residual(a, ad, e)
    core_ok = report.cond_core_residual <= core_tol
    ade = qt_product(ad, e)
    ead = qt_product(e, ad)
    report.rho_value = qt_spectral_radius(ade)
    report.rho_swapped = qt_spectral_radius(ead)
    report.norm_value = norm_s(ade)
    trivial = norm_s(e) == 0.0
    report.hypotheses = {
        "core": core_ok,
        "radius": report.rho_value < 1.0,
        "radius_positive": report.rho_value > 0.0,
        "norm": report.norm_value < 1.0,
    }
    if not core_ok:
        report.status = "hypothesis-failed"
        report.notes.append("E does not satisfy E = A A^D E A A^D")
        raise HypothesisError(
            f"core condition fails: relative residual {report.cond_core_residual:.3e} > {core_tol:g}", "core", report
        )
    if report.rho_value >= 1.0:
        report.status = "hypothesis-failed"
        report.notes.append("spectral radius of A^D E is not below 1")
        raise HypothesisError(f"rho_QT(A^D E) = {report.rho_value:.6g} >= 1", "radius", report)
    if trivial:
        report.notes.append("trivial perturbation: E = 0")

    b = a + e
    bd = qt_drazin(b)
    report.index_b = qt_index(b)
    eye = identity_tensor(n, a.n3)
    try:
        inv_left = qt_inverse(eye + ade)
        inv_right = qt_inverse(eye + ead)
    except SingularError as exc:  # excluded by rho < 1, so this is a numerical breakdown
        raise InconsistencyError(f"I + A^D E is singular although rho < 1: {exc}") from exc

    proj_a = qt_product(a, ad)
    diff = bd - ad
    left = -qt_product(qt_product(bd, e), ad)
    right = -qt_product(qt_product(ad, e), bd)
    res_left = qt_product(inv_left, ad)
    res_right = qt_product(ad, inv_right)
    report.projector_residual = _record(report, "projector", norm_s(proj_a - qt_product(b, bd)), proj_a, tol)
    report.diff_residual_left = _record(report, "difference_left", norm_s(diff - left), left, tol)
    report.diff_residual_right = _record(report, "difference_right", norm_s(diff - right), right, tol)
    report.resolvent_residual_left = _record(report, "resolvent_left", norm_s(bd - res_left), res_left, tol)
    report.resolvent_residual_right = _record(report, "resolvent_right", norm_s(bd - res_right), res_right, tol)

    report.norms = {
        "A": norm_s(a),
        "AD": norm_s(ad),
        "BD": norm_s(bd),
        "BD_minus_AD": norm_s(diff),
        "ADE": report.norm_value,
        "EAD": norm_s(ead),
        "E": norm_s(e),
        "AAD": norm_s(proj_a),
        "inv_I_plus_ADE": norm_s(inv_left),
    }
    report.status = "trivial" if trivial else ("verified" if report.verified else "identities-failed")
    return report


def verify_identities(a: QTensor, e: QTensor, tol: float = IDENTITY_TOL, core_tol: float = CORE_TOL) -> PerturbReport:
    """Check the hypotheses and measure the five identities (no bounds).

    Raises :class:`HypothesisError` when the core condition or
    ``rho_QT(A^D E) < 1`` fails. ``E = 0`` (radius 0) is accepted and
    reported as a trivial perturbation.
    """
    return _identities(a, e, qt_drazin(a), tol, core_tol)


def _ratio(num: float, den: float) -> float | None:
    return num / den if den > 0 else None


def _fill_bounds(report: PerturbReport) -> None:
    nm = report.norms
    ad, bd, ade, ead = nm["AD"], nm["BD"], nm["ADE"], nm["EAD"]
    report.delta_lhs = nm["inv_I_plus_ADE"]
    report.delta_rhs = 1.0 / (1.0 - ade)
    report.delta_holds = report.delta_lhs <= report.delta_rhs * (1 + BOUND_SLACK)
    rel = nm["BD_minus_AD"] / ad if ad > 0 else 0.0
    kappa = nm["A"] * ad
    x = kappa * nm["E"] / nm["A"] if nm["A"] > 0 else 0.0
    b = {
        "lower_ADE": ad / (1 + ade),
        "upper_ADE": ad / (1 - ade),
        "lower_EAD": ad / (1 + ead),
        "upper_EAD": _ratio(ad, 1 - ead),
        "rel_error": rel,
        "rel_bound_ADE_ADE": ade / (1 - ade),
        "rel_bound_ADE_EAD": _ratio(ade, 1 - ead),
        "rel_bound_EAD_EAD": _ratio(ead, 1 - ead),
        "rel_bound_EAD_ADE": ead / (1 - ade),
        "kappa": kappa,
        "kappa_bound": _ratio(x, 1 - x),
    }
    report.bounds = b

    def holds(lhs, rhs):
        return None if lhs is None or rhs is None else lhs <= rhs + BOUND_SLACK * max(1.0, abs(rhs))

    report.checks = {
        "lower_ADE<=BD": holds(b["lower_ADE"], bd),
        "BD<=upper_ADE": holds(bd, b["upper_ADE"]),
        "lower_EAD<=BD": holds(b["lower_EAD"], bd),
        "BD<=upper_EAD": holds(bd, b["upper_EAD"]),
        "rel<=ADE/(1-ADE)": holds(rel, b["rel_bound_ADE_ADE"]),
        "rel<=ADE/(1-EAD)": holds(rel, b["rel_bound_ADE_EAD"]),
        "rel<=EAD/(1-EAD)": holds(rel, b["rel_bound_EAD_EAD"]),
        "rel<=EAD/(1-ADE)": holds(rel, b["rel_bound_EAD_ADE"]),
        "ADE/(1-ADE)<=kappa_bound": holds(b["rel_bound_ADE_ADE"], b["kappa_bound"]),
    }
    if report.delta_holds:
        required = ("lower_ADE<=BD", "BD<=upper_ADE", "rel<=ADE/(1-ADE)")
        broken = [k for k in required if report.checks[k] is False]
        if broken:
            raise InconsistencyError(f"bound chain violated although Delta holds: {', '.join(broken)}")


def compute_bounds(a: QTensor, e: QTensor, tol: float = IDENTITY_TOL, core_tol: float = CORE_TOL) -> PerturbReport:
    """Full report with the bound chain.

    Raises :class:`BoundInapplicableError` (carrying the identity-only
    report) when ``||A^D E||_s >= 1``.
    """
    report = verify_identities(a, e, tol, core_tol)
    if report.norm_value >= 1.0:
        report.notes.append("||A^D E||_s >= 1: bounds not applicable")
        report.status = "bound-inapplicable"
        raise BoundInapplicableError(f"||A^D E||_s = {report.norm_value:.6g} >= 1", report)
    _fill_bounds(report)
    return report


def perturb_report(a: QTensor, e: QTensor, tol: float = IDENTITY_TOL, core_tol: float = CORE_TOL) -> PerturbReport:
    """Run every stage, recording failed hypotheses instead of raising."""
    try:
        return compute_bounds(a, e, tol, core_tol)
    except HypothesisError as exc:
        return exc.report
    except BoundInapplicableError as exc:
        return exc.report
