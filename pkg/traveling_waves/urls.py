"""
URL configuration for traveling_waves project.

The `urlpatterns` list routes URLs to views. The numerical API lives under
``api/`` and is served by ``waves_app``; the admin lists recorded runs.
"""
from django.contrib import admin
from django.urls import path, include

urlpatterns = [
    path('admin/', admin.site.urls),
    path('api/', include('waves_app.urls')),
]
