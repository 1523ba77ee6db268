"""Tick-by-tick operational semantics: delays, closed neurons, spike loss.

A run is a sequence of configurations under a global clock.  Each neuron is
either open or closed: firing a rule with delay d closes it for d ticks,
during which it neither fires nor receives (spikes aimed at it are lost),
and the parked emission is released the moment it reopens.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import Neuron, SnpSystem


class NondeterministicChoice(Exception):
    """More than one rule was enabled in a single neuron at the same tick.

    Only deterministic systems are supported; a tie is a hard error rather
    than a silent arbitrary pick.  ``system`` identifies which side raised
    when the error surfaces from a co-simulation.
    """

    def __init__(self, neuron: str, tick: int, system: str | None = None):
        self.neuron = neuron
        self.tick = tick
        self.system = system
        super().__init__()

    def __str__(self):
        where = f" in {self.system}" if self.system else ""
        return f"neuron {self.neuron} has several enabled rules at tick {self.tick}{where}"


@dataclass(frozen=True)
class NeuronState:
    """Per-neuron slice of a configuration.

    ``closed_remaining`` counts ticks until the neuron reopens;
    ``pending_emission`` is the parked spike batch of the fired delayed rule
    and is present exactly while the neuron is closed.
    """

    spikes: int
    closed_remaining: int = 0
    pending_emission: int | None = None

    def __post_init__(self):
        if (self.pending_emission is not None) != (self.closed_remaining >= 1):
            raise ValueError("pending emission must be present exactly while closed")
        if self.pending_emission is not None and self.pending_emission < 1:
            raise ValueError("pending emission must be a positive spike count")

    @property
    def open(self) -> bool:
        return self.closed_remaining == 0


@dataclass(frozen=True)
class Configuration:
    """Snapshot at one tick: neuron states in declaration order, plus the
    environment count."""

    states: tuple[NeuronState, ...]
    environment: int = 0
    tick: int = 0


@dataclass(frozen=True)
class Halted:
    at: int


@dataclass(frozen=True)
class BudgetExhausted:
    pass


Outcome = Halted | BudgetExhausted


@dataclass(frozen=True)
class Trace:
    """Consecutive configurations from tick 0, with how the run ended."""

    configurations: tuple[Configuration, ...]
    outcome: Outcome

    @property
    def final(self) -> Configuration:
        return self.configurations[-1]

    @property
    def halted(self) -> bool:
        return isinstance(self.outcome, Halted)


def initial_configuration(system: SnpSystem) -> Configuration:
    states = tuple(NeuronState(n.initial_spikes) for n in system.neurons)
    return Configuration(states, environment=0, tick=0)


def enabled_rules(neuron: Neuron, state: NeuronState) -> list[int]:
    """Indices of rules that may fire on this state.

    A rule is enabled when the guard matches the spike count and the count
    covers the consumption.  A closed neuron never has enabled rules.
    """
    if state.closed_remaining >= 1:
        return []
    return [
        i
        for i, rule in enumerate(neuron.rules)
        if state.spikes >= rule.consume and rule.guard.matches(state.spikes)
    ]


def step(system: SnpSystem, config: Configuration) -> Configuration:
    """Advance one tick.

    Three phases inside the tick:

    1. Closed counters tick down.  A counter reaching zero reopens the
       neuron and moves its pending emission into the delivery pool.
    2. Every neuron that was open at the START of the tick and has an
       enabled rule (judged on its start-of-tick spike count) applies
       exactly one rule and loses the consumed spikes.  A zero-delay rule
       pools its emission at once; a delayed rule closes the neuron and
       parks the emission.  A neuron reopened in phase 1 cannot fire
       before the next tick.
    3. Pooled emissions travel every outgoing synapse of their origin.
       Targets still closed after phases 1 and 2 lose the spikes.
       Emissions of the output neuron are also added to the environment.

    Raises NondeterministicChoice when several rules are enabled at once
    in one neuron; the reported tick is the one being computed.
    """
    states = list(config.states)
    pool: list[tuple[int, int]] = []  # (origin index, spike batch)

    for i, st in enumerate(states):
        if st.closed_remaining >= 1:
            left = st.closed_remaining - 1
            if left == 0:
                pool.append((i, st.pending_emission))
                states[i] = NeuronState(st.spikes)
            else:
                states[i] = NeuronState(st.spikes, left, st.pending_emission)

    for i, (neuron, start) in enumerate(zip(system.neurons, config.states)):
        if start.closed_remaining >= 1:
            continue
        enabled = enabled_rules(neuron, start)
        if not enabled:
            continue
        if len(enabled) > 1:
            raise NondeterministicChoice(neuron.id, config.tick + 1)
        rule = neuron.rules[enabled[0]]
        remaining = start.spikes - rule.consume
        if rule.delay == 0:
            states[i] = NeuronState(remaining)
            if rule.produce > 0:
                pool.append((i, rule.produce))
        else:
            states[i] = NeuronState(remaining, rule.delay, rule.produce)

    environment = config.environment
    out_index = system.index.get(system.output)
    for origin, batch in pool:
        for target in system.successors[origin]:
            st = states[target]
            if st.closed_remaining == 0:
                states[target] = NeuronState(st.spikes + batch)
        if origin == out_index:
            environment += batch

    return Configuration(tuple(states), environment, config.tick + 1)


def is_halting(system: SnpSystem, config: Configuration) -> bool:
    """All neurons open, nothing pending, no rule enabled anywhere."""
    for neuron, state in zip(system.neurons, config.states):
        if state.closed_remaining >= 1 or state.pending_emission is not None:
            return False
        if enabled_rules(neuron, state):
            return False
    return True


def run(system: SnpSystem, max_steps: int) -> Trace:
    """Run from the initial configuration to the first halting configuration,
    or until ``max_steps`` ticks have been simulated.

    The trace always starts at tick 0; a halting check at tick 0 is allowed,
    so a system with nothing to do halts immediately.  Runs are pure: the
    same system and budget always give the identical trace.
    """
    if max_steps < 0:
        raise ValueError("max_steps must be >= 0")
    config = initial_configuration(system)
    configs = [config]
    while True:
        if is_halting(system, config):
            return Trace(tuple(configs), Halted(config.tick))
        if config.tick >= max_steps:
            return Trace(tuple(configs), BudgetExhausted())
        config = step(system, config)
        configs.append(config)
