import logging
import traceback

from django.conf import settings
from django.core.exceptions import ValidationError
from django.db.utils import IntegrityError
from rest_framework import status
from rest_framework.response import Response
from rest_framework.views import exception_handler

from .exceptions import RionepsError

logger = logging.getLogger('rioneps')


def error_response(error, detail, status_code):
    return Response({'error': error, 'detail': detail}, status=status_code)


def custom_exception_handler(exc, context):
    """
    DRF exception handler giving every error response the shape
    {'error': <type>, 'detail': ...}.

    Detection library errors (bad sample rate, trace too short, unreadable
    input) are the client's fault and become 400 responses. Anything DRF does
    not know about is a 500 whose detail is hidden outside DEBUG.
    """
    response = exception_handler(exc, context)
    error_type = exc.__class__.__name__

    if response is not None:
        view = context.get('view')
        request = context.get('request')
        if request is not None:
            logger.warning(f"{view.__class__.__name__} {request.method} {request.path}: {error_type}: {exc}")

        data = response.data
        if isinstance(data, dict) and set(data) == {'detail'}:
            response.data = {'error': error_type, 'detail': data['detail']}
        elif not (isinstance(data, dict) and 'error' in data):
            response.data = {'error': error_type, 'detail': data}
        return response

    if isinstance(exc, RionepsError):
        logger.warning(f"Detection request rejected: {error_type}: {exc}")
        return error_response(error_type, str(exc), status.HTTP_400_BAD_REQUEST)

    if isinstance(exc, ValidationError):
        detail = exc.message_dict if hasattr(exc, 'error_dict') else exc.messages
        return error_response('ValidationError', detail, status.HTTP_400_BAD_REQUEST)

    if isinstance(exc, IntegrityError):
        return error_response('IntegrityError', str(exc), status.HTTP_400_BAD_REQUEST)

    logger.error(f"Unhandled {error_type}: {exc}\n{traceback.format_exc()}")
    detail = str(exc) if settings.DEBUG else 'An unexpected error occurred.'
    return error_response('ServerError', detail, status.HTTP_500_INTERNAL_SERVER_ERROR)
