"""Monte Carlo harness for the feedback coding scheme.

Trials are independent full blocks.  Each trial's randomness is an
independent stream derived from (seed, trial-index) via SeedSequence spawn
keys, so results are bit-identical regardless of execution order; the
aggregation below runs serially in trial order.
"""
from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field

import numpy as np

from .channel import max_energy_rate
from .coder import (SchemeParams, TransmissionTrace, expected_energy_rate,
                    simulate_block)


@dataclass(frozen=True)
class SimConfig:
    """One Monte Carlo experiment: scheme, trial count, outage target."""

    params: SchemeParams
    trials: int
    target_b: float = 0.0
    epsilon: float | None = None  # default 0.01 * mean energy rate
    correlation_times: tuple[int, ...] = ()

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.epsilon is not None and self.epsilon <= 0.0:
            raise ValueError("epsilon must be positive")
        bmax = max_energy_rate(self.params.cfg)
        if self.target_b > bmax + 1e-9 * max(1.0, bmax):
            raise ValueError("target_b exceeds the maximum energy rate")
        for t in self.correlation_times:
            if not 1 <= t <= self.params.n:
                raise ValueError("correlation times must lie in 1..n")

    def effective_epsilon(self) -> float:
        if self.epsilon is not None:
            return self.epsilon
        p = self.params
        return 0.01 * expected_energy_rate(p, p.rho_star())


@dataclass
class SimReport:
    """Aggregated Monte Carlo estimates."""

    trials: int
    p_error_hat: float
    outage_hat: float
    mean_b: float
    stderr_b: float
    consumed_power: tuple[float, float]  # per-use average incl. init
    correlation_trace: dict = field(default_factory=dict)  # t -> corr(U1, U2)

    def to_json(self, fh) -> None:
        payload = {
            "trials": self.trials,
            "p_error_hat": self.p_error_hat,
            "outage_hat": self.outage_hat,
            "mean_b": self.mean_b,
            "stderr_b": self.stderr_b,
            "consumed_power": list(self.consumed_power),
            "correlation_trace": {str(k): v
                                  for k, v in self.correlation_trace.items()},
        }
        json.dump(payload, fh, indent=1, sort_keys=True)
        fh.write("\n")


def _trial_streams(seed: int, trial: int):
    """(numpy Generator, message Random) for one trial, keyed by (seed, trial)."""
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(trial,))
    rng = np.random.default_rng(ss)
    msg_rng = random.Random(int.from_bytes(
        ss.generate_state(4, np.uint64).tobytes(), "little"))
    return rng, msg_rng


def run_trial(params: SchemeParams, trial: int) -> TransmissionTrace:
    """One full block with messages drawn uniformly from their index sets."""
    rng, msg_rng = _trial_streams(params.seed, trial)
    m1 = 1 + msg_rng.randrange(params.messages(1))
    m2 = 1 + msg_rng.randrange(params.messages(2))
    return simulate_block(params, m1, m2, rng)


def empirical_energy_rate(trace: TransmissionTrace) -> float:
    """Time average of y2^2 over the n payload uses."""
    return float(np.mean(trace.y2**2))


def run(sc: SimConfig) -> SimReport:
    params = sc.params
    eps = sc.effective_epsilon()
    n_err = 0
    n_out = 0
    sum_b = 0.0
    sum_b2 = 0.0
    sum_e1 = 0.0
    sum_e2 = 0.0
    times = sorted(sc.correlation_times)
    u_samples = {t: ([], []) for t in times}
    for trial in range(sc.trials):
        trace = run_trial(params, trial)
        if trace.error:
            n_err += 1
        if trace.b_hat < sc.target_b - eps:
            n_out += 1
        sum_b += trace.b_hat
        sum_b2 += trace.b_hat * trace.b_hat
        sum_e1 += trace.energy1
        sum_e2 += trace.energy2
        for t in times:
            u_samples[t][0].append(trace.u1[t - 1])
            u_samples[t][1].append(trace.u2[t - 1])
    k = sc.trials
    mean_b = sum_b / k
    var_b = max(0.0, (sum_b2 - k * mean_b * mean_b) / (k - 1)) if k > 1 else 0.0
    corr_trace = {}
    for t in times:
        u1 = np.asarray(u_samples[t][0])
        u2 = np.asarray(u_samples[t][1])
        denom = u1.std() * u2.std()
        corr_trace[t] = float(np.mean((u1 - u1.mean()) * (u2 - u2.mean()))
                              / denom) if denom > 0 else 0.0
    uses = params.n + 3
    return SimReport(trials=k,
                     p_error_hat=n_err / k,
                     outage_hat=n_out / k,
                     mean_b=mean_b,
                     stderr_b=math.sqrt(var_b / k),
                     consumed_power=(sum_e1 / (k * uses), sum_e2 / (k * uses)),
                     correlation_trace=corr_trace)


def outage_estimate(base: SimConfig, n_values) -> list[tuple[int, float]]:
    """Outage fraction versus blocklength, everything else held fixed."""
    rows = []
    for n in n_values:
        p = base.params
        params = SchemeParams(cfg=p.cfg, n=int(n), r1=p.r1, r2=p.r2,
                              beta1=p.beta1, beta2=p.beta2, seed=p.seed)
        sc = SimConfig(params=params, trials=base.trials,
                       target_b=base.target_b, epsilon=base.epsilon)
        rows.append((int(n), run(sc).outage_hat))
    return rows


def outage_table_to_csv(rows, fh) -> None:
    fh.write("n,outage_hat\n")
    for n, out in rows:
        fh.write(f"{n},{out:.17g}\n")
