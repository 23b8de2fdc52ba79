from django.conf import settings
from rest_framework import serializers

from apps.core.exceptions import EngineError
from apps.core.serializers import RationalListField, engine_error_detail
from apps.donaldson.models import BlowupParity, EvalRequest
from apps.jobs.models import Job
from apps.surfaces.serializers import SurfaceSpecSerializer


# ── Nested pieces ──────────────────────────────────────────────────────────────

class ProbeSerializer(serializers.Serializer):
    """A named probe: a basis class by name, or explicit coordinates."""
    name   = serializers.CharField()
    coords = RationalListField(required=False)


class ArgumentSerializer(serializers.Serializer):
    probe        = serializers.CharField()
    multiplicity = serializers.IntegerField(min_value=0)


class EvalRequestSerializer(serializers.Serializer):
    arguments   = ArgumentSerializer(many=True)
    point_power = serializers.IntegerField(min_value=0, default=0)
    k           = serializers.IntegerField()


# ── Job ────────────────────────────────────────────────────────────────────────

class JobSerializer(SurfaceSpecSerializer):
    L          = RationalListField(required=False)
    truncation = serializers.IntegerField(min_value=0, required=False)
    k          = serializers.IntegerField(required=False)
    parity     = serializers.ChoiceField(choices=BlowupParity.choices, default=BlowupParity.ODD)
    lam        = serializers.IntegerField(min_value=1, default=1)
    probes     = ProbeSerializer(many=True, required=False)
    evaluate   = EvalRequestSerializer(required=False)

    def validate_truncation(self, value):
        limit = getattr(settings, "INVARIANTS_MAX_TRUNCATION", 24)
        if value > limit:
            raise serializers.ValidationError(
                f"Truncation {value} is above INVARIANTS_MAX_TRUNCATION={limit}."
            )
        return value

    def validate(self, attrs):
        attrs = super().validate(attrs)
        surface = attrs["built"]
        errors = {}

        coords = attrs.get("L")
        try:
            attrs["L_class"] = (
                surface.zero() if coords is None else surface.algebraic_cls(coords)
            )
        except EngineError as exc:
            errors.update(engine_error_detail(exc, field="L"))

        probes = []
        for index, probe in enumerate(attrs.get("probes") or []):
            try:
                probes.append((probe["name"], _probe_class(surface, probe)))
            except EngineError as exc:
                errors[f"probes.{index}"] = [str(exc)]
        names = [name for name, _ in probes]
        if len(set(names)) != len(names):
            errors["probes"] = ["Probe names must be unique."]
        attrs["probe_classes"] = tuple(probes)

        if errors:
            raise serializers.ValidationError(errors)
        return attrs

    def create(self, validated_data):
        request = validated_data.get("evaluate")
        if request is not None:
            request = EvalRequest(
                arguments=tuple(
                    (item["probe"], item["multiplicity"]) for item in request["arguments"]
                ),
                point_power=request["point_power"],
                k=request["k"],
            )
        return Job(
            surface=validated_data["built"],
            L=validated_data["L_class"],
            truncation=validated_data.get(
                "truncation", getattr(settings, "INVARIANTS_DEFAULT_TRUNCATION", 8)
            ),
            k=validated_data.get("k"),
            parity=validated_data["parity"],
            lam=validated_data["lam"],
            probes=validated_data["probe_classes"],
            request=request,
        )


def _probe_class(surface, probe):
    coords = probe.get("coords")
    if coords is None:
        return surface.basis_class(probe["name"])
    if len(coords) == len(surface.basis) - 1:
        return surface.algebraic_cls(coords)
    return surface.cls(coords)
