"""
One function per `invariants` subcommand: job in, CommandResult out.
"""
import json
import logging

from apps.analysis.serializers import ExistenceReportSerializer, TauRankReportSerializer
from apps.analysis.utils import existence_bound, odd_polarization_on_blowup, tau_rank, wall_check
from apps.core.exceptions import SpecificationError
from apps.core.serializers import flatten_errors
from apps.donaldson.builders import blowup_transform, closed_form
from apps.donaldson.expansion import evaluate, expand, series_parity
from apps.donaldson.serializers import export_series
from apps.jobs import checks
from apps.jobs.models import CommandResult, Subcommand
from apps.jobs.serializers import JobSerializer
from apps.seiberg_witten.utils import basic_classes
from apps.seiberg_witten.witten import witten_factor
from apps.series.algebra import polarized_coefficient
from apps.series.models import monomial_text
from apps.surfaces.utils import basis_frame, probe_frame, virtual_dim


logger = logging.getLogger(__name__)


# ── Job loading ────────────────────────────────────────────────────────────────

def parse_job(payload):
    serializer = JobSerializer(data=payload)
    if not serializer.is_valid():
        lines = flatten_errors(serializer.errors)
        raise SpecificationError("\n".join(lines), errors=serializer.errors)
    return serializer.save()


def load_job(path):
    try:
        with open(path, encoding="utf-8") as handle:
            payload = json.load(handle)
    except OSError as exc:
        raise SpecificationError(f"config: cannot read {path}: {exc.strerror}")
    except json.JSONDecodeError as exc:
        raise SpecificationError(f"config: invalid JSON at line {exc.lineno}: {exc.msg}")
    if not isinstance(payload, dict):
        raise SpecificationError("config: the job document must be a JSON object.")
    return parse_job(payload)


def job_frame(job, surface=None, truncation=None):
    surface = surface or job.surface
    truncation = job.truncation if truncation is None else truncation
    if job.probes:
        return probe_frame(surface, job.probes, truncation)
    return basis_frame(surface, truncation)


def expansion_rows(expanded):
    rows = []
    for monomial, coefficient in expanded.sorted_terms():
        rows.append({
            "degree": sum(monomial),
            "monomial": monomial_text(expanded.frame, monomial),
            "coefficient": coefficient,
            "polarized": polarized_coefficient(expanded, monomial),
        })
    return rows


def _require(value, field):
    if value is None:
        raise SpecificationError(f"{field}: this command needs '{field}'.", errors={field: "required"})
    return value


# ── Commands ───────────────────────────────────────────────────────────────────

def cmd_sw(job, check=False):
    surface = job.surface
    basics = basic_classes(surface, job.L)
    factor = witten_factor(surface)
    rows = [
        {
            "class": basic.cls.describe(),
            "coords": list(basic.cls.coords),
            "label": list(basic.label),
            "sw": basic.sw,
            "km": basic.km,
            "witten_factor": factor,
        }
        for basic in basics
    ]
    result = CommandResult(
        command=Subcommand.SW,
        rows=rows,
        payload={"surface": str(surface), "basis": list(surface.basis), "count": len(rows)},
    )
    if check:
        result.checks = checks.check_sw(surface, job.L, basics, factor)
    return result


def cmd_series(job, check=False):
    series = closed_form(job.surface, job.L)
    frame = job_frame(job)
    expanded = expand(series, frame)
    result = CommandResult(
        command=Subcommand.SERIES,
        rows=expansion_rows(expanded),
        payload={
            "structure": series.describe(),
            "probes": list(frame.names),
            "truncation": frame.truncation,
            "parity": series_parity(job.surface, job.L),
            "series": export_series(series),
        },
    )
    if check:
        result.checks = checks.check_series(job.surface, job.L, frame)
    return result


def cmd_evaluate(job, check=False):
    request = _require(job.request, "evaluate")
    series = closed_form(job.surface, job.L)
    frame = job_frame(job)
    value = evaluate(series, frame, request)
    result = CommandResult(
        command=Subcommand.EVALUATE,
        rows=[{
            "arguments": " ".join(f"{name}^{m}" for name, m in request.arguments),
            "point_power": request.point_power,
            "k": request.k,
            "d": virtual_dim(job.surface, job.L, request.k),
            "value": value,
        }],
    )
    if check:
        result.checks = checks.check_evaluate(series, frame, request, value)
    return result


def cmd_bounds(job, check=False):
    report = existence_bound(job.surface, job.L, job.truncation)
    surface = job.surface
    _, _, blown_verdict = odd_polarization_on_blowup(surface, job.L, job.lam)
    data = ExistenceReportSerializer(report).data
    assumptions = data.pop("assumptions")
    result = CommandResult(
        command=Subcommand.BOUNDS,
        rows=[dict(data)],
        payload={
            "wall": wall_check(surface, surface.polarization(), job.L),
            "wall_after_blowup": blown_verdict,
            "assumptions": assumptions,
        },
    )
    if check:
        result.checks = checks.check_bounds(surface, job.L, report)
    return result


def cmd_tau(job, check=False):
    k = _require(job.k, "k")
    report = tau_rank(job.surface, job.L, k)
    data = TauRankReportSerializer(report).data
    assumptions = data.pop("assumptions")
    result = CommandResult(
        command=Subcommand.TAU,
        rows=[dict(data)],
        payload={"assumptions": assumptions},
    )
    if check:
        result.checks = checks.check_tau(job.surface, k, report)
    return result


def cmd_blowup(job, check=False):
    series = closed_form(job.surface, job.L)
    transformed = blowup_transform(series, job.parity)
    blown_up = transformed.surface
    if job.probes:
        probes = [(name, job.surface.lift(cls)) for name, cls in job.probes]
        E = blown_up.exceptional(blown_up.r)
        probes.append((f"E{blown_up.r}", E))
        frame = probe_frame(blown_up, probes, job.truncation)
    else:
        frame = basis_frame(blown_up, job.truncation)
    expanded = expand(transformed, frame)
    result = CommandResult(
        command=Subcommand.BLOWUP,
        rows=expansion_rows(expanded),
        payload={
            "structure": transformed.describe(),
            "probes": list(frame.names),
            "truncation": frame.truncation,
            "series": export_series(transformed),
        },
    )
    if check:
        result.checks = checks.check_blowup(series, transformed, frame, job.parity)
    return result


COMMANDS = {
    Subcommand.SW.value: cmd_sw,
    Subcommand.SERIES.value: cmd_series,
    Subcommand.EVALUATE.value: cmd_evaluate,
    Subcommand.BOUNDS.value: cmd_bounds,
    Subcommand.TAU.value: cmd_tau,
    Subcommand.BLOWUP.value: cmd_blowup,
}


def run(subcommand, job, check=False):
    logger.info("running %s on %s", subcommand, job.surface)
    return COMMANDS[subcommand](job, check=check)
