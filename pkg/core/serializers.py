# core/serializers.py
from rest_framework import serializers

from core.utils.formatting import render_value, provenance


class SpanQuerySerializer(serializers.Serializer):
    """Input validation for a raw (m, q, r) triple"""
    m = serializers.IntegerField(
        min_value=2,
        error_messages={'min_value': 'm must be greater than 1', 'invalid': 'm must be an integer'},
    )
    q = serializers.IntegerField(
        min_value=1,
        error_messages={'min_value': 'q must be a positive integer', 'invalid': 'q must be an integer'},
    )
    r = serializers.IntegerField(
        min_value=1,
        error_messages={'min_value': 'r must be a positive integer', 'invalid': 'r must be an integer'},
    )

    def validate(self, attrs):
        cap = self.context.get('magnitude_cap')
        if cap is not None and attrs['q'] * attrs['r'] > cap:
            raise serializers.ValidationError(
                f"q*r = {attrs['q'] * attrs['r']} exceeds the magnitude cap of {cap}",
                code='magnitude_cap',
            )
        return attrs


class BoundsWindowSerializer(serializers.Serializer):
    """Serializer for {'query': SpanQuery, 'window': BoundsWindow}"""
    m = serializers.IntegerField(source='query.m')
    q = serializers.IntegerField(source='query.q')
    r = serializers.IntegerField(source='query.r')
    lb = serializers.IntegerField(source='window.lb')
    ml = serializers.IntegerField(source='window.ml')
    mh = serializers.IntegerField(source='window.mh')
    ub = serializers.IntegerField(source='window.ub')
    width_cap = serializers.IntegerField(source='window.width_cap')


class SpanResultSerializer(serializers.Serializer):
    """Schema-stable output of a solved query; sums are decimal strings"""
    m = serializers.IntegerField(source='query.m')
    q = serializers.IntegerField(source='query.q')
    r = serializers.IntegerField(source='query.r')
    f = serializers.IntegerField()
    lb = serializers.IntegerField(source='window.lb')
    ml = serializers.IntegerField(source='window.ml')
    mh = serializers.IntegerField(source='window.mh')
    ub = serializers.IntegerField(source='window.ub')
    sum_below = serializers.SerializerMethodField()
    sum_above = serializers.SerializerMethodField()
    backend = serializers.SerializerMethodField()
    precision_bits = serializers.IntegerField()
    erratum = serializers.CharField(allow_null=True)

    def _digits(self):
        return self.context.get('digits', 10)

    def get_sum_below(self, obj):
        return render_value(obj.sum_below, self._digits())

    def get_sum_above(self, obj):
        return render_value(obj.sum_above, self._digits())

    def get_backend(self, obj):
        return obj.backend.value

    @staticmethod
    def build(result, digits=10):
        return SpanResultSerializer(result, context={'digits': digits}).data

    @staticmethod
    def describe(result, digits=10):
        """Plain-text lines for the human format"""
        window = result.window
        lines = [
            f"f = {result.f}",
            f"window: lb={window.lb} ml={window.ml} mh={window.mh} ub={window.ub} (width cap {window.width_cap})",
            f"sum_below = {render_value(result.sum_below, digits)} [{provenance(result.sum_below)}]",
            f"sum_above = {render_value(result.sum_above, digits)} [{provenance(result.sum_above)}]",
            f"backend = {result.backend.value}",
            f"precision_bits = {result.precision_bits}",
        ]
        if result.erratum:
            lines.append(f"erratum = {result.erratum}")
        return lines


class TableRowSerializer(serializers.Serializer):
    """One row of the EN,m,q,r,LB,ML,RV,MH,UB table"""
    EN = serializers.IntegerField(min_value=1)
    m = serializers.IntegerField(min_value=2)
    q = serializers.IntegerField(min_value=1)
    r = serializers.IntegerField(min_value=1)
    LB = serializers.IntegerField(required=False)
    ML = serializers.IntegerField(required=False)
    RV = serializers.IntegerField(required=False)
    MH = serializers.IntegerField(required=False)
    UB = serializers.IntegerField(required=False)

    COLUMNS = ['EN', 'm', 'q', 'r', 'LB', 'ML', 'RV', 'MH', 'UB']
