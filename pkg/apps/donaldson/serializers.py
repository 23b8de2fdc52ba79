"""
Export format of structured series:

    {constant, gaussian, basis, exp_terms[], factors[], quotients[],
     divisor_factors[], exponential_form, metadata{surface, L, conventions, ...}}

Every rational is a "p/q" string; load_series(export(series)) == series.
"""
from rest_framework import serializers

from apps.core.exceptions import EngineError
from apps.core.serializers import RationalField, RationalListField, engine_error_detail
from apps.core.utils import format_fraction
from apps.donaldson.models import ExpTerm, FactorKind, SeriesFactor, StructuredSeries
from apps.surfaces.serializers import SurfaceSpecSerializer, load_surface


class CohClassField(RationalListField):
    """Coordinates of a class over the surface basis."""

    def to_representation(self, cls):
        return [format_fraction(c) for c in cls.coords]


class ExpTermSerializer(serializers.Serializer):
    coefficient = RationalField()
    cls         = CohClassField()


class FactorSerializer(serializers.Serializer):
    kind  = serializers.ChoiceField(choices=FactorKind.choices)
    cls   = CohClassField()
    power = serializers.IntegerField(min_value=1, default=1)


class StructuredSeriesSerializer(serializers.Serializer):
    constant         = RationalField()
    gaussian         = serializers.BooleanField(default=True)
    basis            = serializers.ListField(child=serializers.CharField(), source="surface.basis")
    exp_terms        = ExpTermSerializer(many=True, default=list)
    factors          = FactorSerializer(many=True, source="factor_terms", default=list)
    quotients        = FactorSerializer(many=True, source="quotient_terms", default=list)
    divisor_factors  = serializers.ListField(child=CohClassField(), default=list)
    exponential_form = serializers.JSONField(required=False, allow_null=True)
    metadata         = serializers.JSONField(required=False)

    def to_representation(self, series):
        data = super().to_representation(series)
        data["exponential_form"] = None
        if series.exponential_form is not None:
            nested = StructuredSeriesSerializer(series.exponential_form).data
            nested.pop("metadata")
            nested.pop("exponential_form")
            data["exponential_form"] = nested
        data["metadata"] = export_metadata(series)
        return data


def export_metadata(series):
    metadata = {
        "surface": SurfaceSpecSerializer(series.surface).data,
        "L": [format_fraction(c) for c in series.L.coords],
    }
    for key, value in series.metadata.items():
        if key not in metadata:
            metadata[key] = value
    return metadata


def export_series(series):
    return StructuredSeriesSerializer(series).data


# ── Loader ─────────────────────────────────────────────────────────────────────

def _build(validated, surface, L, metadata):
    basis = list(validated["surface"]["basis"])
    if basis != list(surface.basis):
        raise serializers.ValidationError(
            {"basis": [f"Basis {basis} does not match the surface basis {list(surface.basis)}."]}
        )

    def factor(item):
        return SeriesFactor(kind=item["kind"], cls=surface.cls(item["cls"]), power=item["power"])

    exponential_form = None
    nested = validated.get("exponential_form")
    if nested:
        inner = StructuredSeriesSerializer(data=nested)
        inner.is_valid(raise_exception=True)
        exponential_form = _build(inner.validated_data, surface, L, {})

    return StructuredSeries(
        surface=surface,
        L=L,
        constant=validated["constant"],
        gaussian=validated["gaussian"],
        exp_terms=[
            ExpTerm(coefficient=item["coefficient"], cls=surface.cls(item["cls"]))
            for item in validated["exp_terms"]
        ],
        factor_terms=[factor(item) for item in validated["factor_terms"]],
        quotient_terms=[factor(item) for item in validated["quotient_terms"]],
        divisor_factors=[surface.cls(coords) for coords in validated["divisor_factors"]],
        exponential_form=exponential_form,
        metadata=metadata,
    )


def load_series(payload):
    """Inverse of export_series; raises serializers.ValidationError on bad input."""
    serializer = StructuredSeriesSerializer(data=payload)
    serializer.is_valid(raise_exception=True)
    validated = serializer.validated_data

    metadata = dict(validated.get("metadata") or {})
    if "surface" not in metadata or "L" not in metadata:
        raise serializers.ValidationError({"metadata": ["An exported series names its surface and L."]})

    surface = load_surface(metadata.pop("surface"))
    try:
        L = surface.cls(metadata.pop("L"))
        return _build(validated, surface, L, metadata)
    except EngineError as exc:
        raise serializers.ValidationError(engine_error_detail(exc, field="metadata"))
