from django.db import models


class RunRecord(models.Model):
    STATUS_CHOICES = (
        ('ok', 'Completed'),
        ('config_error', 'Configuration error'),
        ('failed', 'Construction or numerical error'),
        ('blowup', 'Blow-up (truncated output)'),
    )

    command = models.CharField(max_length=20)
    equation = models.CharField(max_length=10, blank=True)
    config = models.JSONField(default=dict)
    status = models.CharField(max_length=20, choices=STATUS_CHOICES)
    exit_code = models.PositiveSmallIntegerField(default=0)
    output_path = models.CharField(max_length=500, blank=True)
    detail = models.TextField(blank=True)
    created_at = models.DateTimeField(auto_now_add=True)

    class Meta:
        db_table = 'run_records'
        ordering = ['-created_at']

    def __str__(self):
        return f"{self.command} ({self.equation or '-'}) - {self.status}"
