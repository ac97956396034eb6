import uuid

import django.db.models.deletion
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = []

    operations = [
        migrations.CreateModel(
            name='BenchmarkRun',
            fields=[
                ('id', models.UUIDField(default=uuid.uuid4, editable=False, primary_key=True, serialize=False)),
                ('family', models.CharField(db_index=True, max_length=50)),
                ('construction', models.CharField(db_index=True, max_length=50)),
                ('k', models.PositiveSmallIntegerField(blank=True, null=True)),
                ('spec', models.JSONField(default=dict, help_text='Snapshot of the experiment spec')),
                ('status', models.CharField(choices=[('PASSED', 'Passed'), ('FAILED', 'Failed')], db_index=True, max_length=20)),
                ('format_version', models.PositiveSmallIntegerField(default=1)),
                ('created_at', models.DateTimeField(auto_now_add=True, db_index=True)),
            ],
            options={
                'ordering': ['-created_at'],
                'indexes': [models.Index(fields=['construction', '-created_at'], name='hopspan_run_construction_idx')],
            },
        ),
        migrations.CreateModel(
            name='BenchmarkResult',
            fields=[
                ('id', models.BigAutoField(primary_key=True, serialize=False)),
                ('n', models.PositiveIntegerField(db_index=True)),
                ('seed', models.BigIntegerField()),
                ('m', models.PositiveBigIntegerField(default=0)),
                ('spanner_edges', models.PositiveBigIntegerField(default=0)),
                ('edges_per_n_log_n', models.FloatField(default=0.0)),
                ('declared_t', models.PositiveIntegerField(default=0)),
                ('verified_ok', models.BooleanField(default=False)),
                ('max_required_hops', models.PositiveIntegerField(default=0)),
                ('build_time_ms', models.FloatField(default=0.0)),
                ('verify_time_ms', models.FloatField(default=0.0)),
                ('verify_mode', models.CharField(blank=True, max_length=10)),
                ('aux', models.JSONField(default=dict)),
                ('error', models.TextField(blank=True)),
                ('run', models.ForeignKey(on_delete=django.db.models.deletion.CASCADE, related_name='results', to='django_hopspan.benchmarkrun')),
            ],
            options={
                'ordering': ['run', 'n', 'seed'],
            },
        ),
    ]
