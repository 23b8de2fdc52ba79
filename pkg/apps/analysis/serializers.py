from rest_framework import serializers

from apps.analysis.models import CaseMod4, Specialization
from apps.core.serializers import RationalField


class ExistenceReportSerializer(serializers.Serializer):
    order_n             = serializers.IntegerField()
    d_upper             = serializers.IntegerField()
    k_at_bound          = serializers.IntegerField()
    case_mod4           = serializers.ChoiceField(choices=CaseMod4.choices)
    specialization      = serializers.ChoiceField(choices=Specialization.choices)
    closed_bound        = serializers.IntegerField()
    within_closed_bound = serializers.BooleanField()
    d_lower_remark      = serializers.IntegerField(allow_null=True)
    order_after_blowup  = serializers.IntegerField(allow_null=True)
    assumptions         = serializers.ListField(child=serializers.CharField())


class TauRankReportSerializer(serializers.Serializer):
    e_divisors            = serializers.IntegerField()
    d                     = serializers.IntegerField()
    rank                  = serializers.IntegerField()
    certificate_value     = RationalField(allow_null=True)
    certificate_vanishing = RationalField(allow_null=True)
    certificate_expected  = RationalField(allow_null=True)
    degenerate            = serializers.BooleanField()
    rank_after_blowup     = serializers.IntegerField(allow_null=True)
    divisors              = serializers.ListField(child=serializers.CharField())
    assumptions           = serializers.ListField(child=serializers.CharField())
