"""Co-simulation: does the delay-free rewrite behave like the original?

Two requirements make a rewrite a faithful simulation:

* R1: both systems halt at the same tick,
* R2: both environments hold the same count at halting.

For pairs that do not halt within the comparison window, the verdict
falls back to tick-pointwise equality of the environment trajectories,
which is stricter than R1/R2 wherever both apply.
"""

from __future__ import annotations

from dataclasses import dataclass

from .eliminate import TransformResult
from .model import SnpSystem
from .semantics import NondeterministicChoice, Trace, run


@dataclass(frozen=True)
class Verdict:
    """Outcome of one co-simulation over ticks 0..bound."""

    source_halt: int | None
    target_halt: int | None
    r1_holds: bool | None
    r2_holds: bool | None
    source_env_at_halt: int | None
    target_env_at_halt: int | None
    trajectory_equal_through: int
    first_divergence: tuple[int, int, int] | None  # (tick, source env, target env)
    bound: int

    @property
    def equivalent(self) -> bool:
        """R1 and R2 when halting applies, trajectory equality otherwise."""
        if self.r1_holds is not None:
            return bool(self.r1_holds and self.r2_holds)
        return self.first_divergence is None


def env_trajectory(system: SnpSystem, bound: int) -> list[int]:
    """Environment count after each tick, up to halting or ``bound``."""
    if bound < 0:
        raise ValueError("bound must be >= 0")
    trace = run(system, bound)
    return [c.environment for c in trace.configurations]


def _tagged_run(system: SnpSystem, bound: int, label: str) -> Trace:
    try:
        return run(system, bound)
    except NondeterministicChoice as err:
        err.system = label
        raise


def co_simulate(source: SnpSystem, target: SnpSystem, bound: int = 200) -> Verdict:
    """Run both systems for up to ``bound`` ticks and compare.

    When both halt, R1/R2 are judged on the halting ticks and counts.  When
    neither halts within the window, R1/R2 are not applicable (None) and
    the trajectory comparison is the verdict basis.  When exactly one halts,
    both fail.  Environment trajectories are compared pointwise over the
    whole window, extending a halted system's count as constant.
    """
    src = _tagged_run(source, bound, "source")
    tgt = _tagged_run(target, bound, "target")

    src_env = _extended_env(src, bound)
    tgt_env = _extended_env(tgt, bound)
    first_divergence = None
    equal_through = bound
    for tick, (a, b) in enumerate(zip(src_env, tgt_env)):
        if a != b:
            first_divergence = (tick, a, b)
            equal_through = tick - 1
            break

    source_halt = src.outcome.at if src.halted else None
    target_halt = tgt.outcome.at if tgt.halted else None
    if source_halt is None and target_halt is None:
        r1 = r2 = None
    else:
        r1 = source_halt is not None and source_halt == target_halt
        r2 = (
            src.halted
            and tgt.halted
            and src.final.environment == tgt.final.environment
        )
    return Verdict(
        source_halt=source_halt,
        target_halt=target_halt,
        r1_holds=r1,
        r2_holds=r2,
        source_env_at_halt=src.final.environment if src.halted else None,
        target_env_at_halt=tgt.final.environment if tgt.halted else None,
        trajectory_equal_through=equal_through,
        first_divergence=first_divergence,
        bound=bound,
    )


def _extended_env(trace: Trace, bound: int) -> list[int]:
    env = [c.environment for c in trace.configurations]
    env.extend([env[-1]] * (bound + 1 - len(env)))
    return env


def check_count_law(result: TransformResult) -> bool:
    """Added neurons, net of feeders, must equal the sum of the delays
    eliminated from the normalized source."""
    total_delay = sum(
        rule.delay
        for neuron in result.normalized_source.neurons
        for rule in neuron.rules
        if rule.delayed
    )
    return result.added_count - len(result.feeders) == total_delay
