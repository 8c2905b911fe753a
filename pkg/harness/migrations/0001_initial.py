# Generated by Django 6.0.4 on 2026-10-18 09:12

import django.db.models.deletion
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='SuiteRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('config', models.JSONField(default=dict)),
                ('seed', models.IntegerField(default=0)),
                ('output', models.CharField(blank=True, max_length=500)),
                ('started_at', models.DateTimeField(auto_now_add=True)),
                ('finished_at', models.DateTimeField(blank=True, null=True)),
                ('exit_code', models.SmallIntegerField(blank=True, null=True)),
                ('summary', models.TextField(blank=True)),
            ],
            options={
                'ordering': ['-started_at'],
            },
        ),
        migrations.CreateModel(
            name='CheckRecord',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('position', models.PositiveIntegerField()),
                ('check_id', models.CharField(max_length=30)),
                ('anchor', models.CharField(max_length=60)),
                ('mode', models.CharField(choices=[('exact_constant', 'Exact constant'), ('empirical_constant', 'Empirical constant'), ('report_only', 'Report only')], max_length=20)),
                ('profile', models.CharField(max_length=200)),
                ('params', models.JSONField(default=dict)),
                ('exponents', models.JSONField(default=dict)),
                ('report', models.JSONField(default=dict)),
                ('lhs', models.FloatField(blank=True, null=True)),
                ('rhs', models.FloatField(blank=True, null=True)),
                ('ratio', models.FloatField(blank=True, null=True)),
                ('passed', models.BooleanField(default=False)),
                ('run', models.ForeignKey(on_delete=django.db.models.deletion.CASCADE, related_name='records', to='harness.suiterun')),
            ],
            options={
                'ordering': ['run', 'position'],
            },
        ),
    ]
