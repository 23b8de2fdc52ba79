from rest_framework import serializers

from apps.core.exceptions import EngineError
from apps.core.serializers import RationalField, RationalListField, engine_error_detail
from apps.core.utils import format_fraction
from apps.surfaces.models import SurfaceData, SurfaceVariant
from apps.surfaces.utils import build_surface


# ── Surface data ───────────────────────────────────────────────────────────────

class SurfaceDataSerializer(serializers.Serializer):
    variant        = serializers.ChoiceField(choices=SurfaceVariant.choices)
    p_g            = serializers.IntegerField(min_value=1)
    K_min_sq       = serializers.IntegerField(default=0)
    num_blowups    = serializers.IntegerField(min_value=0, default=0)
    multiplicities = serializers.ListField(
        child=serializers.IntegerField(min_value=2), default=list,
    )
    euler          = serializers.IntegerField(required=False, allow_null=True, default=None)
    signature      = serializers.IntegerField(required=False, allow_null=True, default=None)

    def validate(self, data):
        surface_data = SurfaceData(**data)
        try:
            surface_data.clean()
        except EngineError as exc:
            raise serializers.ValidationError(
                engine_error_detail(exc, field="multiplicities" if surface_data.is_elliptic else None)
            )
        return surface_data


class PolarizationSerializer(serializers.Serializer):
    """H.primary, H.E1, ..., H.Er and H.H."""
    pairings = RationalListField(required=False)
    square   = RationalField(required=False)


# ── Surface description: data + polarization + probe weight─────────────────────────

class SurfaceSpecSerializer(serializers.Serializer):
    surface = SurfaceDataSerializer()
    H       = PolarizationSerializer(required=False)
    w       = RationalField(required=False)

    def validate(self, attrs):
        polarization = attrs.get("H") or {}
        try:
            attrs["built"] = build_surface(
                attrs["surface"],
                h_pairings=polarization.get("pairings"),
                h_square=polarization.get("square", 1),
                w=attrs.get("w", 1),
            )
        except EngineError as exc:
            field = "w" if exc.code == "invalid_probe" and "w" in exc.context else "H"
            raise serializers.ValidationError(engine_error_detail(exc, field=field))
        return attrs

    def to_representation(self, surface):
        return {
            "surface": SurfaceDataSerializer(surface.data).data,
            "H": {
                "pairings": [format_fraction(v) for v in surface.h_pairings],
                "square": format_fraction(surface.h_square),
            },
            "w": format_fraction(surface.w),
        }


def load_surface(payload):
    """Build a surface from its description; raises serializers.ValidationError."""
    serializer = SurfaceSpecSerializer(data=payload)
    serializer.is_valid(raise_exception=True)
    return serializer.validated_data["built"]
