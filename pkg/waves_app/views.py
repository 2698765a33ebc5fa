from rest_framework import status, permissions, generics, filters
from rest_framework.decorators import api_view, permission_classes
from rest_framework.response import Response
from django_filters.rest_framework import DjangoFilterBackend
from .exceptions import WaveError
from .families import (FifthOrderParams, ThirdOrderParams, fifth_order_coeffs_zero_bc,
                       region_classify_fifth, region_classify_third)
from .models import RunRecord
from .output import plain, table_payload
from .serializers import RunConfigSerializer, RunRecordSerializer
from .services import branch_from, run_solve

def _wave_error(exc):
    return Response({'error': str(exc), 'code': exc.code}, status=status.HTTP_422_UNPROCESSABLE_ENTITY)

def _config(request, command):
    data = request.data.copy() if hasattr(request.data, 'copy') else dict(request.data)
    data['command'] = command
    return RunConfigSerializer(data=data)

class RunRecordListView(generics.ListAPIView):
    queryset = RunRecord.objects.all()
    serializer_class = RunRecordSerializer
    permission_classes = [permissions.IsAuthenticated]
    filter_backends = [DjangoFilterBackend, filters.OrderingFilter]
    filterset_fields = ['command', 'equation', 'status']
    ordering_fields = ['created_at', 'exit_code']
    ordering = ['-created_at']

class RunRecordDetailView(generics.RetrieveAPIView):
    queryset = RunRecord.objects.all()
    serializer_class = RunRecordSerializer
    permission_classes = [permissions.IsAuthenticated]

@api_view(['POST'])
@permission_classes([permissions.IsAuthenticated])
def solve_wave(request):
    serializer = _config(request, 'solve')
    if not serializer.is_valid():
        return Response(serializer.errors, status=status.HTTP_400_BAD_REQUEST)
    try:
        table, _ = run_solve(dict(serializer.validated_data))
    except WaveError as exc:
        return _wave_error(exc)
    return Response(plain(table_payload(table)))

@api_view(['POST'])
@permission_classes([permissions.IsAuthenticated])
def classify_point(request):
    serializer = _config(request, 'classify')
    if not serializer.is_valid():
        return Response(serializer.errors, status=status.HTTP_400_BAD_REQUEST)
    cfg = serializer.validated_data
    c = cfg['c']
    try:
        if cfg['equation'] == 'third':
            return Response({
                'c': c,
                'nu': cfg['nu'],
                'mu1': ThirdOrderParams(cfg['nu']).mu1(c),
                'region': region_classify_third(c, cfg['nu']).value,
            })
        if cfg['mu2'] is None:
            return Response({'mu2': ['This field is required for the fifth-order equation.']},
                            status=status.HTTP_400_BAD_REQUEST)
        p = FifthOrderParams(gamma=cfg['gamma'], delta1=cfg['delta1'], delta2=cfg['delta2'])
        branch = branch_from(cfg)
        coeffs, h = fifth_order_coeffs_zero_bc(p, c, branch, mu2=cfg['mu2'])
        return Response(plain({
            'c': c,
            'mu2': cfg['mu2'],
            'branch': branch.label,
            'h': h,
            'width_radicand': coeffs.a2,
            'region': region_classify_fifth(p, cfg['mu2'], c, branch),
        }))
    except WaveError as exc:
        return _wave_error(exc)
