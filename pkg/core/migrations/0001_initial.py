# Generated by Django 5.2.8 on 2026-10-18 09:12

import django.core.validators
import uuid
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = []

    operations = [
        migrations.CreateModel(
            name="Erratum",
            fields=[
                (
                    "id",
                    models.UUIDField(
                        default=uuid.uuid4,
                        editable=False,
                        primary_key=True,
                        serialize=False,
                    ),
                ),
                (
                    "kind",
                    models.CharField(
                        choices=[
                            ("bounds", "Bound window"),
                            ("midpoint", "Midpoint candidates"),
                            ("window_width", "Window width"),
                            ("table", "Printed table"),
                            ("oracle", "Oracle disagreement"),
                        ],
                        max_length=20,
                        verbose_name="Kind",
                    ),
                ),
                (
                    "m",
                    models.PositiveBigIntegerField(
                        validators=[django.core.validators.MinValueValidator(2)]
                    ),
                ),
                (
                    "q",
                    models.PositiveIntegerField(
                        validators=[django.core.validators.MinValueValidator(1)]
                    ),
                ),
                (
                    "r",
                    models.PositiveIntegerField(
                        validators=[django.core.validators.MinValueValidator(1)]
                    ),
                ),
                ("expected", models.CharField(blank=True, max_length=200)),
                ("observed", models.CharField(blank=True, max_length=200)),
                ("certificate", models.JSONField(blank=True, default=dict)),
                ("detail", models.TextField(blank=True)),
                ("created_at", models.DateTimeField(auto_now_add=True)),
            ],
            options={
                "verbose_name": "Erratum",
                "verbose_name_plural": "Errata",
                "ordering": ["m", "q", "r", "kind"],
                "indexes": [
                    models.Index(fields=["kind"], name="core_erratum_kind_idx"),
                    models.Index(fields=["m", "q", "r"], name="core_erratum_mqr_idx"),
                ],
            },
        ),
    ]
