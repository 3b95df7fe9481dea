from django_filters.rest_framework import DjangoFilterBackend
from rest_framework import status
from rest_framework.response import Response
from drf_spectacular.utils import OpenApiParameter, extend_schema
import logging

from rioneps.views import OwnedModelViewSet

from .models import DetectionRun
from .serializers import DetectionRunSerializer

logger = logging.getLogger('rioneps')


class DetectionRunViewSet(OwnedModelViewSet):
    """
    Submit a trace for batch detection and browse the stored run summaries.

    Runs are immutable once created; there is no update endpoint.
    """
    queryset = DetectionRun.objects.all()
    serializer_class = DetectionRunSerializer
    filter_backends = [DjangoFilterBackend]
    filterset_fields = ['channel']
    http_method_names = ['get', 'post', 'delete', 'head', 'options']

    @extend_schema(parameters=[
        OpenApiParameter('include_mask', bool, description='Add the per-sample flag list to the response'),
    ])
    def create(self, request, *args, **kwargs):
        serializer = self.get_serializer(data=request.data)
        serializer.is_valid(raise_exception=True)
        self.perform_create(serializer)

        data = dict(serializer.data)
        if request.query_params.get('include_mask', '').lower() in ('1', 'true', 'yes'):
            data['mask'] = serializer.mask.tolist()
        run = serializer.instance
        logger.info(
            f"Detection run {run.pk} for {request.user}: {run.flagged_count}/{run.sample_count} samples "
            f"flagged at IT={run.inefficiency_threshold:g}"
        )
        return Response(data, status=status.HTTP_201_CREATED, headers=self.get_success_headers(data))
