"""결과 표시 컴포넌트

각 render_* 함수는 JSON 으로 그대로 내보낼 수 있는 payload(dict)를 만든다.
텍스트 출력은 format_payload 가 payload 를 "키: 값" 줄로 바꾼다.
"""
import json
from typing import Any, Dict, List, Optional, Sequence

from models.complex import Complex, SetFamily
from models.face import Face, face_members
from models.schemas import (
    CrossReport,
    DepthReport,
    EkrReport,
    HibiResult,
    ReductionTrace,
    ShiftPropertyReport,
    ShiftStep,
    ShiftTrace,
    StabilityReport,
    StabilityTrace,
    VDResult,
)

Payload = Dict[str, Any]
Labels = Optional[Sequence[str]]

# 텍스트 출력에서 하나의 면으로 표시할 키
SINGLE_FACE_KEYS = {"boundary_witness", "missing_facet", "missing_set", "depth_witness_face"}
PAIR_KEYS = {"phi", "injection"}


def _label(v: int, labels: Labels) -> str:
    return labels[v] if labels is not None else str(v)


def face_labels(face: Optional[Face], labels: Labels = None) -> Optional[List[str]]:
    if face is None:
        return None
    return [_label(v, labels) for v in face_members(face)]


def faces_labels(faces, labels: Labels = None) -> List[List[str]]:
    return [face_labels(face, labels) for face in faces]


def _verdict(holds: bool) -> str:
    return "holds" if holds else "violated"


def render_complex(complex_: Complex, labels: Labels = None) -> Payload:
    """복합체 기본 정보"""
    return {
        "n": complex_.n_vertices,
        "order": list(labels) if labels is not None else [str(v) for v in range(complex_.n_vertices)],
        "facets": faces_labels(complex_.facets, labels),
        "f_vector": list(complex_.f_vector()),
    }


def render_info(complex_: Complex, labels: Labels = None) -> Payload:
    payload = render_complex(complex_, labels)
    payload.update({
        "dim": complex_.dim,
        "min_facet_size": complex_.min_facet_size,
        "near_cone_apexes": [_label(v, labels) for v in complex_.near_cone_apexes()],
        "maximal_shifted_prefix": [_label(v, labels) for v in complex_.maximal_shifted_prefix()],
        "verdict": "done",
    })
    return payload


def render_depth(report: DepthReport, labels: Labels = None) -> Payload:
    payload: Payload = {
        "depth": report.depth,
        "dim": report.dim,
        "is_cm": report.is_cm,
        "min_facet_dim": report.min_facet_dim,
        "has_facet_depth": report.has_facet_depth,
        "cross_checked": report.cross_checked,
        "verdict": "done",
    }
    if report.witness is not None:
        face, degree = report.witness
        payload["depth_witness_face"] = face_labels(face, labels)
        payload["depth_witness_degree"] = degree
    return payload


def render_vd(result: VDResult, labels: Labels = None) -> Payload:
    return {
        "is_vd": result.is_vd,
        "certificate": [_label(v, labels) for v in result.certificate],
        "verdict": "done",
    }


def _steps(steps: Sequence[ShiftStep]) -> List[str]:
    return [f"{step.operator}:{step.changed}" for step in steps]


def render_complex_shift(
    shifted: Complex,
    labels: Labels = None,
    steps: Sequence[ShiftStep] = (),
    **extra,
) -> Payload:
    payload = render_complex(shifted, labels)
    payload["steps"] = _steps(steps)
    payload.update(extra)
    payload["verdict"] = "done"
    return payload


def render_family_shift(
    family: SetFamily,
    labels: Labels = None,
    trace: Optional[ShiftTrace] = None,
    **extra,
) -> Payload:
    payload: Payload = {
        "r": family.r,
        "size": len(family),
        "family": faces_labels(family.sets, labels),
        "is_shifted": family.is_shifted(),
    }
    if trace is not None:
        payload["steps"] = _steps(trace.steps)
        payload["boundary_witness"] = face_labels(trace.boundary_witness, labels)
    payload.update(extra)
    payload["verdict"] = "done"
    return payload


def render_shift_properties(report: ShiftPropertyReport) -> Payload:
    return {
        "items": dict(report.items),
        "seeds": list(report.seeds),
        "agreement": report.agreement,
        "failures": report.failures,
        "notes": dict(report.notes),
        "verdict": _verdict(report.passed),
    }


def render_ekr(report: EkrReport, labels: Labels = None) -> Payload:
    return {
        "r": report.r,
        "max_size": report.max_size,
        "star_bound": report.star_bound,
        "best_star_vertex": None if report.best_star_vertex is None else _label(report.best_star_vertex, labels),
        "holds_ekr": report.holds_ekr,
        "strict": report.strict,
        "nonstar_max_size": report.nonstar_max_size,
        "strict_hypotheses": report.strict_hypotheses,
        "witness": [faces_labels(family, labels) for family in report.witnesses],
        "verdict": _verdict(not report.violation),
    }


def render_stability(report: StabilityReport, labels: Labels = None) -> Payload:
    return {
        "r": report.r,
        "prefix": [_label(v, labels) for v in report.prefix],
        "beta": report.beta,
        "hm_bound": report.hm_bound,
        "observed_max_nonstar": report.observed_max_nonstar,
        "extremal_size": report.extremal_size,
        "extremal_family": faces_labels(report.extremal_family.sets, labels),
        "witness": faces_labels(report.witness, labels),
        "verdict": _verdict(report.holds),
    }


def render_cross(report: CrossReport, labels: Labels = None) -> Payload:
    return {
        "r": report.r,
        "variant": report.variant,
        "prefix": [_label(v, labels) for v in report.prefix],
        "gamma": report.gamma,
        "bound": report.bound,
        "observed_max_sum": report.observed_max_sum,
        "witness": [faces_labels(report.witness_a, labels), faces_labels(report.witness_b, labels)],
        "verdict": _verdict(report.holds),
    }


def render_hibi(result: HibiResult, labels: Labels = None, expected: bool = False) -> Payload:
    payload: Payload = {"s": result.s, "r": result.r, "exists": result.exists}
    if result.exists:
        payload["injection"] = [
            [face_labels(small, labels), face_labels(large, labels)]
            for small, large in sorted(result.injection.items())
        ]
        payload["verdict"] = "holds"
    else:
        payload["witness"] = [
            faces_labels(result.hall_violator, labels),
            faces_labels(result.hall_neighbors, labels),
        ]
        payload["verdict"] = "violated" if expected else "done"
    return payload


def render_reduction(trace: ReductionTrace, labels: Labels = None) -> Payload:
    payload: Payload = {
        "apex": _label(trace.apex, labels),
        "outcome": trace.outcome,
        "steps": _steps(trace.shift_trace.steps),
        "stabilized": faces_labels(trace.shift_trace.outcome.sets, labels),
    }
    if trace.outcome == "A":
        payload["boundary_witness"] = face_labels(trace.boundary_witness, labels)
        payload["alg_shift_common_empty"] = trace.alg_shift_common_empty
    else:
        payload.update({
            "blocking_pair": [_label(v, labels) for v in trace.blocking_pair],
            "phi": [[face_labels(a, labels), face_labels(b, labels)] for a, b in sorted(trace.phi.items())],
            "phi_injective": trace.phi_injective,
            "phi_surjective": trace.phi_surjective,
            "missing_facet": face_labels(trace.missing_facet, labels),
            "missing_set": face_labels(trace.missing_set, labels),
            "b_t_size": trace.b_t_size,
            "c_t_size": trace.c_t_size,
            "alt_b": faces_labels(trace.alt_b, labels),
            "alt_c": faces_labels(trace.alt_c, labels),
            "alt_cross_intersecting": trace.alt_cross_intersecting,
        })
    payload["verdict"] = _verdict(trace.verified)
    return payload


def render_stability_trace(trace: StabilityTrace, labels: Labels = None) -> Payload:
    payload: Payload = {
        "case": trace.case,
        "steps": _steps(trace.first_trace.steps),
        "boundary_witness": face_labels(trace.boundary_witness, labels),
        "alg_shift_common_empty": trace.alg_shift_common_empty,
    }
    if trace.second_trace is not None:
        payload["blocking_pair"] = [_label(v, labels) for v in trace.first_trace.blocking_pair]
        payload["added_faces"] = faces_labels(trace.added_faces, labels)
        payload["second_steps"] = _steps(trace.second_trace.steps)
    payload["verdict"] = _verdict(trace.verified)
    return payload


def _is_face(value) -> bool:
    return isinstance(value, list) and all(isinstance(v, str) for v in value)


def _format_face(value: List[str]) -> str:
    return "{" + ",".join(value) + "}"


def _format_item(key: str, item) -> str:
    if _is_face(item):
        return _format_face(item)
    if isinstance(item, list):
        joiner = " -> " if key in PAIR_KEYS else " "
        return joiner.join(_format_item(key, x) for x in item)
    return str(item)


def _format_value(key: str, value) -> str:
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "true" if value else "false"
    if not isinstance(value, list):
        return str(value)
    if key in SINGLE_FACE_KEYS:
        return _format_face(value)
    if any(isinstance(item, list) and not _is_face(item) for item in value):
        return " | ".join(_format_item(key, item) for item in value)
    return " ".join(_format_item(key, item) for item in value)


def format_payload(payload: Payload, output_format: str = "text") -> str:
    """payload 를 text 또는 json 문자열로"""
    if output_format == "json":
        return json.dumps(payload, ensure_ascii=False, indent=2) + "\n"
    lines = []
    for key, value in payload.items():
        if isinstance(value, dict):
            lines.append(f"{key}:")
            lines.extend(f"  {name}: {_format_value(name, item)}" for name, item in value.items())
        else:
            lines.append(f"{key}: {_format_value(key, value)}")
    return "\n".join(lines) + "\n"
