"""
Database models for analysis runs.
"""
from django.db import models
import uuid


class AnalysisRun(models.Model):
    """
    One invocation of a management command: its inputs, outcome and report.
    """
    COMMAND_CHOICES = [
        ('solve', 'Solve game'),
        ('restrict', 'Restricted strategy spaces'),
        ('absresp', 'Abstract best response'),
        ('verify', 'Verify abstraction'),
        ('check', 'Supermodularity check'),
    ]

    STATUS_CHOICES = [
        ('pending', 'Pending'),
        ('in_progress', 'In Progress'),
        ('completed', 'Completed'),
        ('failed', 'Failed'),
    ]

    id = models.UUIDField(primary_key=True, default=uuid.uuid4, editable=False)
    command = models.CharField(max_length=20, choices=COMMAND_CHOICES)
    status = models.CharField(max_length=20, choices=STATUS_CHOICES, default='pending')
    game_kind = models.CharField(max_length=100, blank=True)

    # Timing
    started_at = models.DateTimeField(auto_now_add=True)
    completed_at = models.DateTimeField(null=True, blank=True)
    duration_seconds = models.FloatField(null=True, blank=True)

    # sha256 over the input file texts
    inputs_digest = models.CharField(max_length=64, db_index=True)

    # Error tracking
    error_message = models.TextField(blank=True, null=True)

    request_params = models.JSONField(default=dict)
    report = models.JSONField(default=dict, blank=True)
    metadata = models.JSONField(default=dict, blank=True)

    class Meta:
        db_table = 'analysis_runs'
        indexes = [
            models.Index(fields=['status', 'started_at'], name='analysis_ru_status_3c1f0a_idx'),
            models.Index(fields=['command', 'started_at'], name='analysis_ru_command_8e2b47_idx'),
        ]
        ordering = ['-started_at']

    def __str__(self):
        return f"Run {self.command} - {self.game_kind or 'unknown'} ({self.status})"
