import numpy as np
import pytest

from sica_nsfd import CAPE_VERDE, ModelParams, derived_constants

ACCEPTANCE_LINES = []


def random_params(rng, r0=None, rate_range=(1e-2, 2.0), mu_range=(1e-3, 0.2)):
    """Random valid parameter set; optionally rescale beta to hit a target R0."""
    lo, hi = np.log(rate_range[0]), np.log(rate_range[1])
    rates = np.exp(rng.uniform(lo, hi, 6))
    p = ModelParams(
        Lambda=rng.uniform(10.0, 1e5),
        mu=np.exp(rng.uniform(np.log(mu_range[0]), np.log(mu_range[1]))),
        beta=rates[0], phi=rates[1], rho=rates[2], alpha=rates[3], omega=rates[4], d=rates[5],
        eta_C=rng.uniform(0.01, 1.0), eta_A=rng.uniform(1.0, 3.0),
    )
    if r0 is not None:
        p = p.with_(beta=p.beta * r0 / derived_constants(p).r0)
    return p


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def cv():
    return CAPE_VERDE


@pytest.fixture
def cv_low():
    """Cape Verde rates with beta lowered to 0.1 (R0 < 1)."""
    return CAPE_VERDE.with_(beta=0.1)


@pytest.fixture
def acceptance_report():
    def report(criterion, ok, detail=""):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok
    return report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
