"""Text rendering of the JSON reports.

Text output is always derived from the JSON-ready dict, so both formats
carry the same data.
"""

from __future__ import annotations

import json
from collections.abc import Callable
from dataclasses import dataclass
from typing import Any

from .const import FORMAT_JSON, STATUS_KNOWN


@dataclass(frozen=True, kw_only=True)
class FieldDescription:
    """How one report entry is labelled and formatted."""

    key: str
    name: str
    value_fn: Callable[[Any], str] = str


def _group_text(value: Any) -> str:
    if isinstance(value, dict) and "text" in value:
        return value["text"]
    return str(value)


def _field_text(field: Any) -> str:
    if field is None:
        return "not applicable"
    if field["status"] != STATUS_KNOWN:
        text = f"unknown ({field['note']})"
    else:
        value = field["value"]
        if isinstance(value, dict) and "deck" in value:
            text = (
                f"deck group {_group_text(value['deck'])} from kernel "
                f"{_group_text(value['kernel'])}, surjective={value['surjective']}"
            )
        elif isinstance(value, dict) and "homotopy_type" in value:
            text = f"pi_1 = {_group_text(value['pi_1'])}"
            if value["homotopy_type"]:
                text = (
                    f"{value['homotopy_type']}; {text}, pi_2 = {_group_text(value['pi_2'])}"
                )
        else:
            text = _group_text(value)
        if field.get("note"):
            text = f"{text} ({field['note']})"
    if field["citations"]:
        text = f"{text} [{', '.join(field['citations'])}]"
    return text


REPORT_FIELDS = (
    FieldDescription(key="pi0_hom", name="Components of Hom", value_fn=_field_text),
    FieldDescription(key="pi0_moduli", name="Components of moduli", value_fn=_field_text),
    FieldDescription(key="pi1_moduli", name="pi_1 of moduli", value_fn=_field_text),
    FieldDescription(key="covering", name="Covering", value_fn=_field_text),
    FieldDescription(key="higher_homotopy", name="Higher homotopy", value_fn=_field_text),
    FieldDescription(key="stable", name="Stable range", value_fn=_field_text),
    FieldDescription(key="real_reductive_extension", name="Real reductive extension"),
    FieldDescription(key="hypothesis_not_met", name="Hypothesis not met"),
)

LIE_FIELDS = (
    FieldDescription(key="text", name="Group"),
    FieldDescription(key="pi1", name="pi_1", value_fn=_group_text),
    FieldDescription(key="pi1_derived", name="pi_1 of derived subgroup", value_fn=_group_text),
    FieldDescription(key="pi1_torsion_free", name="pi_1 torsion-free"),
    FieldDescription(key="orthogonal_free", name="Orthogonal-free"),
    FieldDescription(
        key="universal_cover",
        name="Universal cover",
        value_fn=lambda cover: " x ".join(
            ([f"F^{cover['torus_rank']}"] if cover["torus_rank"] else []) + cover["factors"]
        )
        or "trivial",
    ),
    FieldDescription(key="unitary_type", name="Unitary type"),
)

GROUP_FIELDS = (
    FieldDescription(key="generators", name="Generators", value_fn=" ".join),
    FieldDescription(key="relators", name="Relators", value_fn=len),
    FieldDescription(key="abelianization", name="Abelianization", value_fn=_group_text),
    FieldDescription(key="exponent_canceling", name="Exponent-canceling"),
    FieldDescription(
        key="classes", name="Recognized classes", value_fn=lambda c: ", ".join(c) or "none"
    ),
)


def _lines(data: dict[str, Any], fields: tuple[FieldDescription, ...]) -> list[str]:
    width = max(len(description.name) for description in fields)
    return [
        f"{description.name:<{width}}  {description.value_fn(data.get(description.key))}"
        for description in fields
        if description.key in data
    ]


def render_report(data: dict[str, Any]) -> str:
    """Render an invariant report dict as text."""
    lines = [
        f"{data['group']['class']} into {data['target']['text']}",
        *_lines(data, REPORT_FIELDS),
        "Citations:",
    ]
    lines.extend(f"  {entry['key']}: {entry['label']}" for entry in data["citations"])
    return "\n".join(lines)


def render_lie_info(data: dict[str, Any]) -> str:
    """Render a group structure summary as text."""
    return "\n".join(_lines(data, LIE_FIELDS))


def render_group_check(data: dict[str, Any]) -> str:
    return "\n".join(_lines(data, GROUP_FIELDS))


def _suite_lines(suite: dict[str, Any]) -> list[str]:
    status = "passed" if suite["passed"] else "FAILED"
    lines = [f"Suite {suite['name']}: {status}, {suite['samples']} samples, "
             f"{suite['failures']} failures"]
    lines.extend(
        f"  max |{key} residual| = {value:.3e}" for key, value in suite["max_residuals"].items()
    )
    lines.extend(f"  {key} = {value}" for key, value in suite["statistics"].items())
    lines.extend(f"  error: {error}" for error in suite["errors"])
    return lines


def render_verification(data: dict[str, Any]) -> str:
    lines = [f"verify {data['mode']} on {data['target'] or 'sampled targets'}: "
             f"{'passed' if data['passed'] else 'FAILED'}"]
    for check in data["checks"]:
        residual = "" if check["residual"] is None else f" (residual {check['residual']:.3e})"
        detail = f": {check['detail']}" if check["detail"] else ""
        lines.append(f"  [{'ok' if check['passed'] else 'FAIL'}] {check['name']}{residual}{detail}")
    lines.extend(f"  {key} = {value}" for key, value in data["data"].items())
    for suite in data["suites"]:
        lines.extend(_suite_lines(suite))
    return "\n".join(lines)


RENDERERS: dict[str, Callable[[dict[str, Any]], str]] = {
    "analyze": render_report,
    "verify": render_verification,
    "group": render_group_check,
    "lie": render_lie_info,
}


def render(command: str, data: dict[str, Any], output_format: str) -> str:
    """Return the output text for a command result in json or text format."""
    if output_format == FORMAT_JSON:
        return json.dumps(data, indent=2, sort_keys=True) + "\n"
    return RENDERERS[command](data) + "\n"
