"""Self-check suite behind ``spinprop validate``.

Each check returns the achieved error next to the tolerance it is held to,
so the report doubles as an accuracy summary.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from . import four_level, oracle, sech, su2, synthesis
from .hyp2f1 import hyp2f1


class CheckResult(NamedTuple):
    name: str
    achieved: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.achieved < self.tolerance)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: achieved {self.achieved:.3e} (tolerance {self.tolerance:.1e})"


def _params(theta, phi, alpha, perturbation):
    p = su2.euler_params_from_angles(theta, phi, alpha)
    return su2.EulerParams(p.p0 + perturbation, p.p1, p.p2, p.p3)


def check_euler_delta(rng, perturbation=0.0, n=1000):
    angles = rng.uniform(-2 * np.pi, 2 * np.pi, size=(3, n))
    p = _params(*angles, perturbation)
    return CheckResult("Euler parameters Delta = 1", float(np.max(np.abs(p.delta - 1))), 1e-14)


def _demo_trajectories():
    sine = synthesis.SineInterp
    gauss = synthesis.GaussDeriv
    return [
        synthesis.EulerTrajectory(sine(0.2, 2.5, 1.0), sine(-0.4, 1.2, 1.5), sine(0.0, 3.0, 0.8)),
        synthesis.EulerTrajectory(gauss(1.5, 0.7, 1.0), gauss(-0.8, 0.3, 1.3), gauss(2.0, -0.5, 0.9)),
        synthesis.EulerTrajectory(synthesis.LinearPeriodic(1.3), synthesis.Constant(0.9), synthesis.LinearPeriodic(-0.7)),
    ]


def check_trajectory_unitarity(perturbation=0.0):
    worst = 0.0
    for traj in _demo_trajectories():
        for t in np.linspace(-3, 3, 61):
            s = synthesis.eval_trajectory(traj, t)
            r = su2.as_matrix(_params(s.theta, s.phi, s.alpha, perturbation))
            worst = max(worst, float(np.max(np.abs(r.conj().T @ r - su2.IDENTITY_2))))
            worst = max(worst, abs(np.linalg.det(r) - 1))
    return CheckResult("R^dagger R = I, det R = 1 along synthesized trajectories", worst, 1e-10)


def check_synthesis_vs_oracle(rel_tol=1e-11):
    worst = 0.0
    times = np.linspace(-3, 3, 25)
    for traj in _demo_trajectories():
        h = oracle.HamiltonianFn.from_field(lambda t, tr=traj: synthesis.field_from_angles(tr, t))
        tr = oracle.integrate_propagator(h, times[0], times[-1], rel_tol, times=times)
        for t, u in zip(tr.times, tr.matrices):
            worst = max(worst, float(np.max(np.abs(synthesis.evolution(traj, t, times[0]) - u))))
    return CheckResult("angle synthesis vs ODE oracle", worst, 1e-6)


def check_sech_vs_oracle(rng, rel_tol=1e-11, draws=8):
    worst = 0.0
    for _ in range(draws):
        p = sech.SechPulseParams(rng.uniform(0.1, 10), rng.uniform(0.1, 12), 1.0)
        t = rng.uniform(-10, 10)
        h = oracle.HamiltonianFn.from_field(p.field)
        u_ode = oracle.integrate_propagator(h, 0.0, t, rel_tol).matrices[-1]
        worst = max(worst, float(np.max(np.abs(sech.evolution_u(p, t) - u_ode))))
    return CheckResult("sech closed form vs ODE oracle (max deviation)", worst, 1e-6)


def check_sech_unitarity(rng, draws=50):
    worst = 0.0
    for _ in range(draws):
        p = sech.SechPulseParams(rng.uniform(0.1, 10), rng.uniform(0.1, 12), 1.0)
        u = sech.evolution_u(p, rng.uniform(-10, 10))
        worst = max(worst, float(np.max(np.abs(u.conj().T @ u - su2.IDENTITY_2))))
    return CheckResult("sech closed form unitarity", worst, 1e-8)


def check_unit_circle(rng, draws=200):
    p = sech.SechPulseParams(1.0, 1.0, 1.0)
    worst = max(abs(abs(sech.z_of_time(p, t)) - 1) for t in rng.uniform(-20, 20, draws))
    return CheckResult("|z(t)| = 1", worst, 1e-14)


def _rand_complex(rng, re, im):
    return complex(rng.uniform(*re), rng.uniform(*im))


def check_hyp2f1_relations(rng, draws=100):
    worst_cont = worst_der = worst_sym = 0.0
    for _ in range(draws):
        a = _rand_complex(rng, (-2, 2), (-3, 3))
        b = _rand_complex(rng, (-2, 2), (-3, 3))
        c = _rand_complex(rng, (0.2, 3), (-2, 2))
        z = 0.9 * math.sqrt(rng.uniform()) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        f = hyp2f1(a, b, c, z)
        terms = (c * (1 - z) * f, -c * hyp2f1(a - 1, b, c, z), (c - b) * z * hyp2f1(a, b, c + 1, z))
        worst_cont = max(worst_cont, abs(sum(terms)) / max(abs(x) for x in terms))
        h = 1e-5
        fd = (hyp2f1(a, b, c, z + h) - hyp2f1(a, b, c, z - h)) / (2 * h)
        exact = a * b / c * hyp2f1(a + 1, b + 1, c + 1, z)
        worst_der = max(worst_der, abs(fd - exact) / max(1.0, abs(exact)))
        worst_sym = max(worst_sym, abs(f - hyp2f1(b, a, c, z)) / max(1.0, abs(f)))
    return [
        CheckResult("hyp2f1 contiguous relation (relative)", worst_cont, 1e-9),
        CheckResult("hyp2f1 derivative relation vs finite differences", worst_der, 1e-6),
        CheckResult("hyp2f1 symmetry in a, b", worst_sym, 1e-14),
    ]


def check_hyp2f1_paths(rng, draws=100):
    worst = 0.0
    for _ in range(draws):
        a = _rand_complex(rng, (-2, 2), (-3, 3))
        b = _rand_complex(rng, (-2, 2), (-3, 3))
        c = _rand_complex(rng, (0.2, 3), (-2, 2))
        # left half-annulus: series, Pfaff and continuation all converge
        z = rng.uniform(0.5, 0.7) * np.exp(1j * rng.uniform(0.5 * np.pi, 1.5 * np.pi))
        ref = hyp2f1(a, b, c, z, method="series")
        for m in ("pfaff", "taylor"):
            worst = max(worst, abs(hyp2f1(a, b, c, z, method=m) - ref) / abs(ref))
        # near z = 1: connection formula against continuation
        z = 1 - rng.uniform(0.05, 0.45) * np.exp(1j * rng.uniform(-0.4 * np.pi, 0.4 * np.pi))
        ref = hyp2f1(a, b, c, z, method="taylor")
        worst = max(worst, abs(hyp2f1(a, b, c, z, method="connection") - ref) / abs(ref))
    return CheckResult("hyp2f1 evaluation paths agree", worst, 1e-10)


def check_bplus_invariance(rng, alternatives=10):
    p = sech.SechPulseParams(3.0, 1.0, 1.0)
    t = 0.5
    u2 = sech.evolution_u(p, t)
    amps = []
    for _ in range(alternatives):
        k, w = rng.uniform(-50, 50), rng.uniform(0.1, 5)
        spec = four_level.ParallelFieldSpec.from_angular(
            lambda s, k=k, w=w: k * (1 + 0.3 * np.sin(w * s)),
            lambda s: p.c / np.cosh(p.omega * s),
            lambda s: p.a,
        )
        amps.append(abs(four_level.transition_amplitude(four_level.evolve_parallel(spec, t, u2), "du", "ud")))
    return CheckResult("Swap amplitude independent of B_plus", float(np.ptp(amps)), 1e-12)


def check_four_level_reduction(rng, rel_tol=1e-11, draws=3):
    worst = 0.0
    for _ in range(draws):
        p = sech.SechPulseParams(rng.uniform(0.5, 5), rng.uniform(0.5, 5), 1.0)
        k = rng.uniform(-20, 20)
        spec = four_level.ParallelFieldSpec.from_angular(
            lambda s, k=k: k + np.cos(s),
            lambda s: p.c / np.cosh(p.omega * s),
            lambda s: p.a,
        )
        t = rng.uniform(-4, 4)
        fields = spec.two_spin_fields()
        h = oracle.HamiltonianFn(4, lambda s: four_level.hamiltonian_4(fields, s))
        u_ode = oracle.integrate_propagator(h, 0.0, t, rel_tol).matrices[-1]
        u_red = four_level.evolve_parallel(spec, t, sech.evolution_u(p, t)).matrix
        worst = max(worst, float(np.max(np.abs(u_red - u_ode))))
    return CheckResult("four-level reduction vs 4x4 ODE", worst, 1e-6)


def run_suite(perturbation: float = 0.0, rel_tol: float = 1e-11, seed: int = 20090101):
    """Run every check; ``perturbation`` is added to p0 of the Euler parameters."""
    rng = np.random.default_rng(seed)
    results = [
        check_euler_delta(rng, perturbation),
        check_trajectory_unitarity(perturbation),
        check_synthesis_vs_oracle(rel_tol),
        check_sech_vs_oracle(rng, rel_tol),
        check_sech_unitarity(rng),
        check_unit_circle(rng),
        *check_hyp2f1_relations(rng),
        check_hyp2f1_paths(rng),
        check_bplus_invariance(rng),
        check_four_level_reduction(rng, rel_tol),
    ]
    return results
