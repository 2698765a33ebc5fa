import math

from rest_framework import serializers

from .models import RunRecord

COMMANDS = ('classify', 'solve', 'simulate', 'verify', 'sweep')
SIGNS = ('plus', 'minus')


class RunConfigSerializer(serializers.Serializer):
    """One validated run configuration shared by the CLI and the API."""

    command = serializers.ChoiceField(choices=COMMANDS)
    equation = serializers.ChoiceField(choices=('third', 'fifth'), default='third')

    # model parameters
    nu = serializers.FloatField(default=0.0)
    gamma = serializers.FloatField(default=1.0 / 12.0)
    delta1 = serializers.FloatField(default=1.0)
    delta2 = serializers.FloatField(default=0.0)
    mu2 = serializers.FloatField(default=None, allow_null=True)
    mu2_bracket = serializers.ListField(child=serializers.FloatField(), min_length=2, max_length=2,
                                        default=None, allow_null=True)

    # wave parameters
    c = serializers.FloatField(default=2.0)
    a0 = serializers.FloatField(default=0.0)
    a1 = serializers.FloatField(default=0.0)
    b1 = serializers.FloatField(default=0.0)
    branch = serializers.ChoiceField(choices=SIGNS, default='plus')
    a3_branch = serializers.ChoiceField(choices=SIGNS, default=None, allow_null=True)
    family = serializers.ChoiceField(choices=('auto', 'soliton', 'periodic', 'weierstrass'),
                                     default='auto')

    # profile window and verification samples
    xi_min = serializers.FloatField(default=None, allow_null=True)
    xi_max = serializers.FloatField(default=None, allow_null=True)
    samples = serializers.IntegerField(default=401, min_value=2)
    checks = serializers.IntegerField(default=50, min_value=2)
    corrupt_a2 = serializers.FloatField(default=0.0)

    # grid
    L = serializers.FloatField(default=None, allow_null=True)
    N = serializers.IntegerField(default=1024)
    dt = serializers.FloatField(default=None, allow_null=True)
    T = serializers.FloatField(default=10.0)
    initial = serializers.ChoiceField(choices=('wave', 'zero', 'pulse'), default='wave')
    amplitude = serializers.FloatField(default=0.5)
    width = serializers.FloatField(default=1.0)
    allow_unbounded = serializers.BooleanField(default=False)
    record_every = serializers.IntegerField(default=10, min_value=1)
    snapshot_every = serializers.IntegerField(default=100, min_value=1)

    # sweep ranges
    c_min = serializers.FloatField(default=-3.0)
    c_max = serializers.FloatField(default=3.0)
    c_steps = serializers.IntegerField(default=121, min_value=1)
    nu_min = serializers.FloatField(default=-2.0)
    nu_max = serializers.FloatField(default=2.0)
    nu_steps = serializers.IntegerField(default=81, min_value=1)
    mu2_min = serializers.FloatField(default=-0.1)
    mu2_max = serializers.FloatField(default=2.0)
    mu2_steps = serializers.IntegerField(default=400, min_value=2)

    out = serializers.CharField(default='', allow_blank=True)
    format = serializers.ChoiceField(choices=('csv', 'json'), default=None, allow_null=True)

    def validate(self, attrs):
        errors = {}
        for name, value in attrs.items():
            if isinstance(value, float) and not math.isfinite(value):
                errors[name] = 'Must be finite.'
        bracket = attrs.get('mu2_bracket')
        if bracket and not all(math.isfinite(v) for v in bracket):
            errors['mu2_bracket'] = 'Must be finite.'
        if errors:
            raise serializers.ValidationError(errors)

        command = attrs['command']
        if command == 'simulate':
            n = attrs['N']
            if n < 16 or n & (n - 1):
                errors['N'] = 'N must be a power of two >= 16.'
            if attrs['L'] is not None and attrs['L'] <= 0.0:
                errors['L'] = 'Domain length must be positive.'
            if attrs['dt'] is not None and attrs['dt'] <= 0.0:
                errors['dt'] = 'Time step must be positive.'
            if attrs['T'] < 0.0:
                errors['T'] = 'Final time must not be negative.'
            if attrs['equation'] == 'third' and attrs['nu'] >= 1.0 / 6.0:
                errors['nu'] = 'The solver needs nu < 1/6.'
            if attrs['equation'] == 'fifth' and attrs['delta1'] <= 0.0:
                errors['delta1'] = 'The solver needs delta1 > 0.'
        if command == 'solve':
            lo, hi = attrs['xi_min'], attrs['xi_max']
            if lo is not None and hi is not None and lo >= hi:
                errors['xi_max'] = 'xi_max must exceed xi_min.'
        if command in ('classify', 'sweep'):
            if attrs['c_steps'] > 1 and attrs['c_min'] >= attrs['c_max']:
                errors['c_max'] = 'c_max must exceed c_min.'
            if attrs['mu2_min'] >= attrs['mu2_max']:
                errors['mu2_max'] = 'mu2_max must exceed mu2_min.'
        if command == 'simulate' and attrs['format'] == 'json':
            errors['format'] = 'simulate writes CSV series only.'
        if command == 'verify' and attrs['format'] == 'csv':
            errors['format'] = 'verify writes a JSON report only.'
        if errors:
            raise serializers.ValidationError(errors)

        if attrs['format'] is None:
            attrs['format'] = 'json' if command == 'verify' else 'csv'
        return attrs


class CubicCoeffsSerializer(serializers.Serializer):
    a0 = serializers.FloatField()
    a1 = serializers.FloatField()
    a2 = serializers.FloatField()
    a3 = serializers.FloatField()


class EllipticInvariantsSerializer(serializers.Serializer):
    g2 = serializers.FloatField()
    g3 = serializers.FloatField()
    delta = serializers.FloatField()
    solution_class = serializers.CharField(source='solution_class.value')
    roots = serializers.SerializerMethodField()

    def get_roots(self, obj):
        return [[r.real, r.imag] for r in obj.roots]


class ResidualReportSerializer(serializers.Serializer):
    max_abs = serializers.FloatField()
    max_rel = serializers.FloatField()
    samples = serializers.IntegerField()
    skipped = serializers.IntegerField()
    valid = serializers.BooleanField()


class EnergyReportSerializer(serializers.Serializer):
    E3 = serializers.FloatField(allow_null=True)
    E5 = serializers.FloatField(allow_null=True)
    flux = serializers.FloatField(allow_null=True)


class TravelingWaveSerializer(serializers.Serializer):
    family = serializers.CharField(source='family.value')
    coeffs = CubicCoeffsSerializer()
    invariants = EllipticInvariantsSerializer()
    amplitude = serializers.FloatField()
    wavenumber = serializers.FloatField()
    offset = serializers.FloatField()
    scale = serializers.FloatField()
    length_scale = serializers.FloatField()
    is_bounded = serializers.BooleanField()


class RunRecordSerializer(serializers.ModelSerializer):
    class Meta:
        model = RunRecord
        fields = ('id', 'command', 'equation', 'config', 'status', 'exit_code',
                  'output_path', 'detail', 'created_at')
        read_only_fields = fields
