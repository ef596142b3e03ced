# core/models.py
from django.db import models
from django.utils.translation import gettext_lazy as _
from django.core.validators import MinValueValidator
import uuid


class Erratum(models.Model):
    """A recorded disagreement between a closed-form claim and the certified answer"""

    class Kind(models.TextChoices):
        BOUNDS = 'bounds', _('Bound window')
        MIDPOINT = 'midpoint', _('Midpoint candidates')
        WINDOW_WIDTH = 'window_width', _('Window width')
        TABLE = 'table', _('Printed table')
        ORACLE = 'oracle', _('Oracle disagreement')

    id = models.UUIDField(primary_key=True, default=uuid.uuid4, editable=False)
    kind = models.CharField(max_length=20, choices=Kind.choices, verbose_name=_("Kind"))
    m = models.PositiveBigIntegerField(validators=[MinValueValidator(2)])
    q = models.PositiveIntegerField(validators=[MinValueValidator(1)])
    r = models.PositiveIntegerField(validators=[MinValueValidator(1)])
    expected = models.CharField(max_length=200, blank=True)
    observed = models.CharField(max_length=200, blank=True)
    certificate = models.JSONField(default=dict, blank=True)
    detail = models.TextField(blank=True)

    created_at = models.DateTimeField(auto_now_add=True)

    class Meta:
        verbose_name = _("Erratum")
        verbose_name_plural = _("Errata")
        ordering = ['m', 'q', 'r', 'kind']
        indexes = [
            models.Index(fields=['kind'], name='core_erratum_kind_idx'),
            models.Index(fields=['m', 'q', 'r'], name='core_erratum_mqr_idx'),
        ]

    def __str__(self):
        return f"{self.kind} (m={self.m}, q={self.q}, r={self.r}): expected {self.expected}, observed {self.observed}"
