from django.urls import path, include
from rest_framework.routers import DefaultRouter
from .views import DetectionRunViewSet

router = DefaultRouter()
router.register(r'runs', DetectionRunViewSet, basename='detectionrun')

urlpatterns = [
    path('', include(router.urls)),
]
