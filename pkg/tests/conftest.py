"""Shared fixtures, trace-invariant checks, and generators for random inputs."""

from __future__ import annotations

import random
from pathlib import Path

import pytest
from hypothesis import strategies as st

from snpkit import (
    Iteration,
    Join,
    Neuron,
    Rule,
    Sequential,
    SnpSystem,
    SpikeRegex,
    Split,
    step,
)

SYSTEMS_DIR = Path(__file__).resolve().parent.parent / "systems"


@pytest.fixture
def relay() -> SnpSystem:
    """Three-neuron relay whose middle hop delays its spike by two ticks."""
    return SnpSystem(
        (
            Neuron("1", 1, (Rule.semi_homogeneous(1),)),
            Neuron("2", 0, (Rule.semi_homogeneous(1, delay=2),)),
            Neuron("3", 0, (Rule.semi_homogeneous(1),)),
        ),
        frozenset({("1", "2"), ("2", "3")}),
        "3",
        "relay",
    )


def assert_trace_invariants(system: SnpSystem, trace) -> None:
    """Closed-neuron isolation, counter discipline, environment monotonicity,
    and halting soundness, checked on every consecutive configuration pair."""
    configs = trace.configurations
    for prev, cur in zip(configs, configs[1:]):
        assert cur.tick == prev.tick + 1
        assert cur.environment >= prev.environment
        for p, c in zip(prev.states, cur.states):
            if p.closed_remaining >= 1:
                assert c.closed_remaining == p.closed_remaining - 1
            if p.closed_remaining >= 2:
                assert c.spikes == p.spikes
                assert c.pending_emission == p.pending_emission
            if p.closed_remaining == 1:
                # reopening neuron may receive this tick but cannot fire
                assert c.spikes >= p.spikes
                assert c.pending_emission is None
            if c.closed_remaining >= 1:
                # closed after the step: gained nothing from deliveries
                assert c.spikes <= p.spikes
    if trace.halted:
        again = step(system, trace.final)
        assert again.states == trace.final.states
        assert again.environment == trace.final.environment
        assert again.tick == trace.final.tick + 1


def sweep_instances() -> list:
    """Every halting routing instance with delays over 1..8."""
    instances = []
    for d in range(1, 9):
        instances.append(Sequential((d,)))
        instances.append(Join(d))
        instances.append(Split(d_left=d))
        instances.append(Split(d_right=d))
    for d1 in range(1, 9):
        for d2 in range(1, 9):
            instances.append(Sequential((d1, d2)))
            instances.append(Split(d_left=d1, d_right=d2))
    return instances


def iteration_instances() -> list:
    return [
        Iteration(d, placement) for d in range(2, 9) for placement in ("first", "second")
    ]


def random_instance(rng: random.Random):
    kind = rng.choice(["sequential", "iteration", "join", "split"])
    if kind == "sequential":
        return Sequential(tuple(rng.randint(1, 8) for _ in range(rng.randint(1, 3))))
    if kind == "iteration":
        return Iteration(rng.randint(1, 8), rng.choice(["first", "second"]))
    if kind == "join":
        return Join(rng.randint(1, 8))
    left = rng.choice([None, rng.randint(1, 8)])
    right = rng.randint(1, 8) if left is None else rng.choice([None, rng.randint(1, 8)])
    return Split(left, right)


def random_system(rng: random.Random) -> SnpSystem:
    """A structurally valid system with arbitrary guards, rules and wiring.

    Used for parser round-trips; nothing here needs to be deterministic to
    run, only well-formed.
    """
    ids = [rng.choice(["n", "m", "22-", "x_", "q'"]) + str(i) for i in range(rng.randint(1, 6))]
    neurons = []
    for nid in ids:
        rules = []
        for _ in range(rng.randint(0, 2)):
            terms = tuple(
                (rng.randint(0, 9), rng.randint(0, 5)) for _ in range(rng.randint(1, 3))
            )
            consume = rng.randint(1, 5)
            if rng.random() < 0.2:
                produce, delay = 0, 0
            else:
                produce = rng.randint(1, consume)
                delay = rng.randint(0, 4)
            rules.append(Rule(SpikeRegex(terms), consume, produce, delay))
        neurons.append(Neuron(nid, rng.randint(0, 3), tuple(rules)))
    pairs = [(a, b) for a in ids for b in ids if a != b]
    rng.shuffle(pairs)
    synapses = frozenset(pairs[: rng.randint(0, len(pairs))])
    return SnpSystem(tuple(neurons), synapses, rng.choice(ids), f"random-{rng.randint(0, 999)}")


@st.composite
def spike_regexes(draw) -> SpikeRegex:
    terms = draw(
        st.lists(st.tuples(st.integers(0, 8), st.integers(0, 6)), min_size=1, max_size=3)
    )
    return SpikeRegex(tuple(terms))


@st.composite
def simple_systems(draw) -> SnpSystem:
    """Valid systems with at most one rule per neuron, hence deterministic."""
    ids = [f"n{i}" for i in range(draw(st.integers(1, 5)))]
    neurons = []
    for nid in ids:
        spikes = draw(st.integers(0, 3))
        rules: tuple[Rule, ...] = ()
        if draw(st.booleans()):
            k = draw(st.integers(1, 3))
            kind = draw(st.sampled_from(["semi", "forget", "exact"]))
            if kind == "semi":
                rules = (Rule.semi_homogeneous(k, delay=draw(st.integers(0, 3))),)
            elif kind == "forget":
                rules = (Rule(SpikeRegex.multiples(1), k, 0, 0),)
            else:
                produce = draw(st.integers(1, k))
                rules = (Rule(SpikeRegex.exactly(k), k, produce, draw(st.integers(0, 2))),)
        neurons.append(Neuron(nid, spikes, rules))
    pairs = [(a, b) for a in ids for b in ids if a != b]
    if pairs:
        synapses = frozenset(draw(st.sets(st.sampled_from(pairs), max_size=len(pairs))))
    else:
        synapses = frozenset()
    return SnpSystem(tuple(neurons), synapses, draw(st.sampled_from(ids)), "random")
