"""Shared factories for randomized pulse tests and the acceptance summary."""

import math

import numpy as np

from dotgate.dynamics import ConstantPulse, ProportionalPulse, QVectorPath, SechPulse


def random_constant_pulse(rng) -> ConstantPulse:
    return ConstantPulse(
        j=float(rng.uniform(-1.5, 1.5)),
        bminus_level=float(rng.uniform(-1.5, 1.5)),
        bplus_level=float(rng.uniform(-1.5, 1.5)),
        t_end=float(rng.uniform(0.5, 6.0)),
    )


def random_proportional_pulse(rng) -> ProportionalPulse:
    lam = float(rng.uniform(0.05, math.pi - 0.05))
    q0 = float(rng.uniform(0.1, 1.2))
    q1 = float(rng.uniform(0.0, 0.8)) * q0  # keeps q positive
    nu = float(rng.uniform(0.3, 2.0))
    return ProportionalPulse(
        lam=lam,
        q=lambda t, q0=q0, q1=q1, nu=nu: q0 + q1 * math.sin(nu * t),
        q_integral=lambda t, q0=q0, q1=q1, nu=nu: q0 * t + q1 * (1 - math.cos(nu * t)) / nu,
        bplus_level=float(rng.uniform(-1.0, 1.0)),
        t_end=float(rng.uniform(0.5, 6.0)),
    )


def random_sech_pulse(rng) -> SechPulse:
    return SechPulse(
        a=float(rng.uniform(-2.5, 2.5)),
        c=float(rng.uniform(-1.5, 1.5)),
        omega=float(rng.uniform(0.3, 1.8)),
        bplus_level=float(rng.uniform(-1.0, 1.0)),
        t_end=float(rng.uniform(0.5, 8.0)),
    )


def random_qvector_path(rng) -> QVectorPath:
    # q1 = eps sin(W t), q3 = c3 (constant) gives the closed-form companion
    # q2 = -c3 eps sin(W t) satisfying qdot2 = q1 qdot3 - q3 qdot1 exactly.
    eps = float(rng.uniform(0.1, 0.8))
    c3 = float(rng.uniform(-0.8, 0.8))
    w = float(rng.uniform(0.4, 1.6))

    def q(t):
        s = math.sin(w * t)
        return np.array([eps * s, -c3 * eps * s, c3])

    def qdot(t):
        cs = eps * w * math.cos(w * t)
        return np.array([cs, -c3 * cs, 0.0])

    return QVectorPath(q=q, qdot=qdot, t_end=float(rng.uniform(0.5, 6.0)),
                       bplus_level=float(rng.uniform(-1.0, 1.0)))


# one line per acceptance criterion, echoed after the test summary so the
# pass/fail verdicts survive pytest's output capture
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


FAMILY_FACTORIES = (
    random_constant_pulse,
    random_proportional_pulse,
    random_sech_pulse,
    random_qvector_path,
)
