from django.urls import path
from . import views

urlpatterns = [
    # Run history
    path('runs/', views.RunRecordListView.as_view(), name='run-list'),
    path('runs/<int:pk>/', views.RunRecordDetailView.as_view(), name='run-detail'),

    # Computation endpoints
    path('solve/', views.solve_wave, name='solve'),
    path('classify/', views.classify_point, name='classify'),
]
