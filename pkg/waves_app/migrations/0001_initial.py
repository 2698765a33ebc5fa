# Generated by Django 4.2 on 2026-10-18 09:12

from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='RunRecord',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('command', models.CharField(max_length=20)),
                ('equation', models.CharField(blank=True, max_length=10)),
                ('config', models.JSONField(default=dict)),
                ('status', models.CharField(choices=[('ok', 'Completed'), ('config_error', 'Configuration error'), ('failed', 'Construction or numerical error'), ('blowup', 'Blow-up (truncated output)')], max_length=20)),
                ('exit_code', models.PositiveSmallIntegerField(default=0)),
                ('output_path', models.CharField(blank=True, max_length=500)),
                ('detail', models.TextField(blank=True)),
                ('created_at', models.DateTimeField(auto_now_add=True)),
            ],
            options={
                'db_table': 'run_records',
                'ordering': ['-created_at'],
            },
        ),
    ]
