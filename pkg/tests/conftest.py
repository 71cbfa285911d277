import numpy as np
import pytest

from nodoid_shell.profile import ProfileParams

# (h, beta) grid used by the junction, band and self-intersection checks
H_GRID = (0.5, 1.0, 2.0)
BETA_GRID = (1e-3, 0.1, 0.5, 1.0)
GRID = [(h, b) for h in H_GRID for b in BETA_GRID]


@pytest.fixture(params=GRID, ids=lambda hb: f"h{hb[0]:g}-b{hb[1]:g}")
def grid_params(request):
    h, beta = request.param
    return ProfileParams(h, beta)


def simpson(f, a, b, n=2**16):
    """Composite Simpson rule, independent of the package's quadrature."""
    x = np.linspace(a, b, n + 1)
    y = f(x)
    dx = (b - a) / n
    return dx / 3.0 * (y[0] + y[-1] + 4.0 * y[1:-1:2].sum() + 2.0 * y[2:-1:2].sum())


ACCEPTANCE_LINES = []


def record(criterion, ok, detail):
    """Log one acceptance verdict; echoed again in the terminal summary."""
    line = f"criterion {criterion:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
