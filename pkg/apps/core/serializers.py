from rest_framework import serializers

from apps.core.exceptions import EngineError, SpecificationError
from apps.core.utils import format_fraction, to_fraction


# ── Rational fields ────────────────────────────────────────────────────────────

class RationalField(serializers.Field):
    """An exact rational, written as a "p/q" string. Bare integers are accepted on input."""

    default_error_messages = {
        "invalid": "Expected an exact rational such as \"3/2\"; {detail}",
    }

    def to_internal_value(self, data):
        try:
            return to_fraction(data)
        except SpecificationError as exc:
            self.fail("invalid", detail=str(exc))

    def to_representation(self, value):
        return format_fraction(value)


class RationalListField(serializers.ListField):
    child = RationalField()


# ── Error flattening ───────────────────────────────────────────────────────────

def flatten_errors(detail, prefix=""):
    """
    DRF error detail as "field.path: message" lines.
    List indices become path segments as well.
    """
    lines = []
    if isinstance(detail, dict):
        for key, value in detail.items():
            path = key if not prefix else f"{prefix}.{key}"
            if key == "non_field_errors":
                path = prefix or "job"
            lines.extend(flatten_errors(value, path))
    elif isinstance(detail, list):
        for index, value in enumerate(detail):
            if isinstance(value, (dict, list)):
                lines.extend(flatten_errors(value, f"{prefix}.{index}" if prefix else str(index)))
            else:
                lines.append(f"{prefix or 'job'}: {value}")
    else:
        lines.append(f"{prefix or 'job'}: {detail}")
    return lines


def engine_error_detail(exc: EngineError, field=None):
    """Convert an engine error into DRF error detail under `field`."""
    context = exc.context.get("errors")
    if isinstance(context, dict):
        return {key: [str(value)] for key, value in context.items()}
    if field:
        return {field: [str(exc)]}
    return [str(exc)]
