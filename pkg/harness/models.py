from django.db import models


class SuiteRun(models.Model):
    """
    One archived `fka_suite --record` invocation.  The report file is the
    source of truth; this row only mirrors it.
    """
    config = models.JSONField(default=dict)
    seed = models.IntegerField(default=0)
    output = models.CharField(max_length=500, blank=True)

    started_at  = models.DateTimeField(auto_now_add=True)
    finished_at = models.DateTimeField(null=True, blank=True)
    exit_code   = models.SmallIntegerField(null=True, blank=True)
    summary     = models.TextField(blank=True)

    class Meta:
        ordering = ['-started_at']

    def __str__(self):
        return f'Suite run {self.pk} ({self.started_at:%Y-%m-%d %H:%M})'

    @property
    def failed_count(self):
        return self.records.filter(mode='exact_constant', passed=False).count()


class CheckRecord(models.Model):
    """A CheckReport as stored; non-finite numbers live only in `report`."""

    class Mode(models.TextChoices):
        EXACT       = 'exact_constant', 'Exact constant'
        EMPIRICAL   = 'empirical_constant', 'Empirical constant'
        REPORT_ONLY = 'report_only', 'Report only'

    run = models.ForeignKey(
        SuiteRun,
        on_delete=models.CASCADE,
        related_name='records',
    )
    position = models.PositiveIntegerField()
    check_id = models.CharField(max_length=30)
    anchor   = models.CharField(max_length=60)
    mode     = models.CharField(max_length=20, choices=Mode.choices)
    profile  = models.CharField(max_length=200)

    params    = models.JSONField(default=dict)
    exponents = models.JSONField(default=dict)
    report    = models.JSONField(default=dict)

    lhs    = models.FloatField(null=True, blank=True)
    rhs    = models.FloatField(null=True, blank=True)
    ratio  = models.FloatField(null=True, blank=True)
    passed = models.BooleanField(default=False)

    class Meta:
        ordering = ['run', 'position']

    def __str__(self):
        p = self.params
        return f'{self.check_id} (N={p.get("N")}, k={p.get("k")}, a={p.get("a")}) {self.profile}'

    @classmethod
    def from_report(cls, run, position, report):
        data = report.to_dict()

        def finite(key):
            value = data[key]
            return value if isinstance(value, float) else None

        return cls(
            run=run,
            position=position,
            check_id=report.check_id,
            anchor=report.anchor,
            mode=report.mode,
            profile=report.profile,
            params=data['params'],
            exponents=data['exponents'],
            report=data,
            lhs=finite('lhs'),
            rhs=finite('rhs'),
            ratio=finite('ratio'),
            passed=data['pass'],
        )
