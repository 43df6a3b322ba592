"""Rendering of perturbation reports as flat JSON or plain text."""

from __future__ import annotations

import hashlib
import json
import math
from datetime import datetime, timezone
from pathlib import Path

from ._version import __version__
from .perturb import PerturbReport


def file_digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _clean(v):
    if isinstance(v, bool) or v is None or isinstance(v, (int, str)):
        return v
    if isinstance(v, float):
        return v if math.isfinite(v) else None
    if isinstance(v, (list, tuple)):
        return [_clean(x) for x in v]
    try:
        return _clean(float(v))  # numpy scalars
    except (TypeError, ValueError):
        return str(v)


def flatten(report: PerturbReport) -> dict:
    """Report fields as one level of ``section.key`` entries."""
    flat = {}
    for key, value in report.to_dict().items():
        if isinstance(value, dict):
            for sub, v in value.items():
                flat[f"{key}.{sub}"] = _clean(v)
        else:
            flat[key] = _clean(value)
    flat["verified"] = report.verified
    return flat


def build_metadata(inputs: dict[str, str], tolerances: dict[str, float], reproducible: bool) -> dict:
    meta = {"tool": "qtdrazin", "tool_version": __version__}
    for name, path in inputs.items():
        meta[f"input.{name}.path"] = str(path)
        meta[f"input.{name}.sha256"] = file_digest(path)
    for name, tol in tolerances.items():
        meta[f"tolerance.{name}"] = tol
    if not reproducible:
        meta["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return meta


def render_json(report: PerturbReport, meta: dict | None = None) -> str:
    doc = dict(meta or {})
    doc.update(flatten(report))
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def _fmt(v, spec=".6f") -> str:
    if v is None:
        return "n/a"
    if isinstance(v, bool):
        return "yes" if v else "no"
    return format(v, spec)


def _mark(flag) -> str:
    return {True: "ok", False: "FAIL", None: "n/a"}[flag]


def render_text(report: PerturbReport, meta: dict | None = None) -> str:
    out = []
    add = out.append
    add("qtdrazin perturbation report")
    for key, value in (meta or {}).items():
        add(f"  {key}: {value}")
    add(f"status: {report.status}")
    if report.shape:
        add("shape: {} x {} x {}".format(*report.shape))
    add(f"index(A) = {report.index_a}   index(B) = {_fmt(report.index_b, 'd')}")
    for note in report.notes:
        add(f"note: {note}")

    add("")
    add("hypotheses")
    hyp = report.hypotheses
    add(f"  E = AA^D E AA^D       {_mark(hyp.get('core'))}  relative residual {_fmt(report.cond_core_residual, '.3e')}")
    add(f"  rho(A^D*E) < 1        {_mark(hyp.get('radius'))}  rho = {_fmt(report.rho_value)}")
    add(f"  rho(E*A^D)            {_fmt(report.rho_swapped)}")
    add(f"  ||A^D*E||_s < 1       {_mark(hyp.get('norm'))}  norm = {_fmt(report.norm_value)}")

    if report.identities:
        add("")
        add("identities (residual in ||.||_s)")
        rows = (
            ("AA^D = BB^D", "projector", report.projector_residual),
            ("B^D-A^D = -B^D E A^D", "difference_left", report.diff_residual_left),
            ("B^D-A^D = -A^D E B^D", "difference_right", report.diff_residual_right),
            ("B^D = (I+A^D E)^-1 A^D", "resolvent_left", report.resolvent_residual_left),
            ("B^D = A^D (I+E A^D)^-1", "resolvent_right", report.resolvent_residual_right),
        )
        for label, key, value in rows:
            add(f"  {label:<24} {_fmt(value, '.3e')}  {_mark(report.identities.get(key))}")

    if report.norms:
        add("")
        add("norms")
        labels = (
            ("A", "||A||_s"),
            ("E", "||E||_s"),
            ("AD", "||A^D||_s"),
            ("BD", "||B^D||_s"),
            ("BD_minus_AD", "||B^D - A^D||_s"),
            ("ADE", "||A^D*E||_s"),
            ("EAD", "||E*A^D||_s"),
        )
        for key, label in labels:
            add(f"  {label:<18} {_fmt(report.norms.get(key))}")

    b = report.bounds
    if b:
        nm = report.norms
        add("")
        add("bound chain")
        add(f"  Delta: {_fmt(report.delta_lhs)} <= {_fmt(report.delta_rhs)}  {_mark(report.delta_holds)}")
        add(
            f"  {_fmt(b['lower_ADE'])} <= ||B^D||_s = {_fmt(nm['BD'])} <= {_fmt(b['upper_ADE'])}"
            f"  {_mark(report.checks['lower_ADE<=BD'] and report.checks['BD<=upper_ADE'])}"
        )
        add(
            f"  relative error {_fmt(b['rel_error'])} <= {_fmt(b['rel_bound_ADE_ADE'])}"
            f" <= {_fmt(b['kappa_bound'])}"
            f"  {_mark(report.checks['rel<=ADE/(1-ADE)'] and report.checks['ADE/(1-ADE)<=kappa_bound'])}"
        )
        add(f"  kappa = ||A||_s ||A^D||_s = {_fmt(b['kappa'])}")
        add("  variants")
        add(f"    E*A^D interval  [{_fmt(b['lower_EAD'])}, {_fmt(b['upper_EAD'])}]")
        for key in ("ADE_EAD", "EAD_EAD", "EAD_ADE"):
            num, den = key.split("_")
            check = report.checks[f"rel<={num}/(1-{den})"]
            add(f"    rel <= {num}/(1-{den}) = {_fmt(b['rel_bound_' + key])}  {_mark(check)}")
    return "\n".join(out) + "\n"
