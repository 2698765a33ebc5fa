from django.contrib import admin
from .models import RunRecord

@admin.register(RunRecord)
class RunRecordAdmin(admin.ModelAdmin):
    list_display = ('command', 'equation', 'status', 'exit_code', 'output_path', 'created_at')
    list_filter = ('command', 'equation', 'status')
    search_fields = ('output_path', 'detail')
    readonly_fields = ('created_at',)
