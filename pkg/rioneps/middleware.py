import json
import logging
import time

logger = logging.getLogger('rioneps')


class RequestLogMiddleware:
    """
    Logs one JSON line per request: method, path, user, status and duration.
    5xx responses log at ERROR and 4xx at WARNING.
    """

    def __init__(self, get_response):
        self.get_response = get_response

    def __call__(self, request):
        started = time.perf_counter()
        response = self.get_response(request)

        user = getattr(request, 'user', None)
        record = {
            'method': request.method,
            'path': request.path,
            'user': user.get_username() if user is not None and user.is_authenticated else None,
            'status_code': response.status_code,
            'duration_ms': round((time.perf_counter() - started) * 1000, 2),
        }
        if response.status_code >= 500:
            level = logging.ERROR
        elif response.status_code >= 400:
            level = logging.WARNING
        else:
            level = logging.INFO
        logger.log(level, f"Request: {json.dumps(record)}")
        return response
