import os
import sys
from fractions import Fraction

from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def at(x, q=Fraction(3, 2)):
    """Numeric value of a QScalar at a rational q; an oracle independent of the canonical form."""
    num = sum(Fraction(c) * q ** i for i, c in enumerate(x.num))
    den = sum(Fraction(c) * q ** i for i, c in enumerate(x.den))
    return q ** x.e * num / den


ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, note = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {note}")
