from dataclasses import dataclass, field

from django.db import models


class Subcommand(models.TextChoices):
    SW = "sw", "Seiberg-Witten basic classes"
    SERIES = "series", "Donaldson series"
    EVALUATE = "evaluate", "Donaldson invariant"
    BOUNDS = "bounds", "Existence bounds"
    TAU = "tau", "Rank of the canonical two-form"
    BLOWUP = "blowup", "Blow-up transform"


class OutputFormat(models.TextChoices):
    TABLE = "table", "Aligned text table"
    JSON = "json", "JSON document"
    CSV = "csv", "CSV rows"


@dataclass(frozen=True)
class Job:
    """A validated job document."""
    surface: object
    L: object
    truncation: int
    k: int = None
    parity: str = "odd"
    lam: int = 1
    # (name, class) pairs; empty means the algebraic basis classes.
    probes: tuple = ()
    request: object = None


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class CommandResult:
    command: str
    rows: list = field(default_factory=list)
    payload: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)

    @property
    def failed_checks(self):
        return [check for check in self.checks if not check.passed]
