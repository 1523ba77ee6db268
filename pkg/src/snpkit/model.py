"""Data model for spiking neural P systems: guards, rules, neurons, graphs."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property


@dataclass(frozen=True)
class SpikeRegex:
    """A spike-count guard: a finite union of arithmetic progressions.

    Each term ``(offset, period)`` denotes the counts ``offset + n * period``
    for n >= 0; a period of 0 denotes the single count ``offset``.  Over a
    one-letter alphabet the regular languages are exactly such unions, so
    every guard the rule grammar can express (``a^c``, ``a+``, ``(a^k)+``,
    ``a^j(a^k)*`` and unions of those) is representable.

    Terms are canonicalised on construction: sorted, duplicates removed.
    """

    terms: tuple[tuple[int, int], ...]

    def __post_init__(self):
        canon = sorted({(int(o), int(p)) for o, p in self.terms})
        if not canon:
            raise ValueError("a spike guard needs at least one term")
        for o, p in canon:
            if o < 0 or p < 0:
                raise ValueError(f"negative term ({o}, {p}) in spike guard")
        object.__setattr__(self, "terms", tuple(canon))

    @classmethod
    def exactly(cls, n: int) -> "SpikeRegex":
        """The single count n, i.e. a^n."""
        return cls(((n, 0),))

    @classmethod
    def multiples(cls, k: int) -> "SpikeRegex":
        """Every positive multiple of k, i.e. (a^k)+.  multiples(1) is a+."""
        return cls(((k, k),))

    def __or__(self, other: "SpikeRegex") -> "SpikeRegex":
        return SpikeRegex(self.terms + other.terms)

    def matches(self, k: int) -> bool:
        """Whether a count of k spikes belongs to the guard's language."""
        for offset, period in self.terms:
            if period == 0:
                if k == offset:
                    return True
            elif k >= offset and (k - offset) % period == 0:
                return True
        return False


@dataclass(frozen=True)
class Rule:
    """A firing rule.

    When the neuron's spike count matches ``guard`` and is at least
    ``consume``, the rule may fire: ``consume`` spikes are removed and
    ``produce`` spikes are emitted ``delay`` ticks later (immediately for
    delay 0).  While waiting, the neuron is closed.  ``produce`` 0 is a
    forgetting rule: it eats spikes, emits nothing, and is never delayed.
    """

    guard: SpikeRegex
    consume: int
    produce: int = 1
    delay: int = 0

    @classmethod
    def semi_homogeneous(cls, k: int = 1, delay: int = 0) -> "Rule":
        """(a^k)+ / a^k -> a with an optional delay."""
        return cls(SpikeRegex.multiples(k), k, 1, delay)

    @property
    def delayed(self) -> bool:
        return self.delay >= 1


@dataclass(frozen=True)
class Neuron:
    id: str
    initial_spikes: int = 0
    rules: tuple[Rule, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "id", str(self.id))
        object.__setattr__(self, "rules", tuple(self.rules))


@dataclass(frozen=True)
class SnpSystem:
    """Immutable neuron graph with a designated output neuron.

    Synapses are ordered pairs of neuron ids; self-loops are not allowed.
    Spikes emitted by the output neuron also reach the environment, the
    external sink whose count is the result of a halted run.  Instances are
    safe to share across threads; all simulation state lives elsewhere.
    """

    neurons: tuple[Neuron, ...]
    synapses: frozenset[tuple[str, str]]
    output: str
    name: str = "system"

    def __post_init__(self):
        object.__setattr__(self, "neurons", tuple(self.neurons))
        object.__setattr__(
            self, "synapses", frozenset((str(a), str(b)) for a, b in self.synapses)
        )

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(n.id for n in self.neurons)

    @cached_property
    def index(self) -> dict[str, int]:
        """Neuron id -> position in declaration order."""
        return {n.id: i for i, n in enumerate(self.neurons)}

    @cached_property
    def successors(self) -> tuple[tuple[int, ...], ...]:
        """Outgoing synapse targets per neuron, as position indices."""
        out: list[list[int]] = [[] for _ in self.neurons]
        for a, b in sorted(self.synapses):
            ia, ib = self.index.get(a), self.index.get(b)
            if ia is not None and ib is not None:
                out[ia].append(ib)
        return tuple(tuple(t) for t in out)

    def neuron(self, neuron_id: str) -> Neuron:
        return self.neurons[self.index[neuron_id]]


# --- structural validation -------------------------------------------------
#
# Constructors above are deliberately permissive: ``validate`` reports every
# structural problem as a value so callers can show them all at once.


@dataclass(frozen=True)
class SelfLoop:
    neuron: str

    def __str__(self):
        return f"self-loop on neuron {self.neuron}"


@dataclass(frozen=True)
class DanglingSynapse:
    source: str
    target: str
    missing: str

    def __str__(self):
        return f"synapse {self.source} -> {self.target} names unknown neuron {self.missing}"


@dataclass(frozen=True)
class UnknownOutput:
    output: str

    def __str__(self):
        return f"output neuron {self.output!r} does not exist"


@dataclass(frozen=True)
class DuplicateNeuron:
    neuron: str

    def __str__(self):
        return f"neuron id {self.neuron} declared more than once"


@dataclass(frozen=True)
class NegativeSpikes:
    neuron: str

    def __str__(self):
        return f"neuron {self.neuron} has a negative initial spike count"


@dataclass(frozen=True)
class InvalidRule:
    neuron: str
    rule_index: int
    reason: str

    def __str__(self):
        return f"rule {self.rule_index} of neuron {self.neuron}: {self.reason}"


Issue = SelfLoop | DanglingSynapse | UnknownOutput | DuplicateNeuron | NegativeSpikes | InvalidRule


class ValidationError(Exception):
    """Raised by entry points that require a structurally clean system."""

    def __init__(self, issues: list[Issue]):
        self.issues = list(issues)
        super().__init__("; ".join(str(i) for i in self.issues))


def validate(system: SnpSystem) -> list[Issue]:
    """Report structural issues; an empty list means well-formed.

    Checks neuron id uniqueness, spike counts, rule shape (consume >= 1,
    produce <= consume for emitting rules, no delayed forgetting rules),
    synapse endpoints, self-loops and the output id.
    """
    issues: list[Issue] = []
    seen: set[str] = set()
    for neuron in system.neurons:
        if neuron.id in seen:
            issues.append(DuplicateNeuron(neuron.id))
        seen.add(neuron.id)
        if neuron.initial_spikes < 0:
            issues.append(NegativeSpikes(neuron.id))
        for i, rule in enumerate(neuron.rules):
            if rule.consume < 1:
                issues.append(InvalidRule(neuron.id, i, "must consume at least one spike"))
            if rule.produce < 0:
                issues.append(InvalidRule(neuron.id, i, "negative production"))
            if rule.produce > 0 and rule.consume < rule.produce:
                issues.append(
                    InvalidRule(neuron.id, i, "cannot produce more spikes than it consumes")
                )
            if rule.produce == 0 and rule.delay != 0:
                issues.append(InvalidRule(neuron.id, i, "forgetting rules cannot be delayed"))
            if rule.delay < 0:
                issues.append(InvalidRule(neuron.id, i, "negative delay"))
    for a, b in sorted(system.synapses):
        if a == b:
            issues.append(SelfLoop(a))
        for end in (a, b):
            if end not in seen:
                issues.append(DanglingSynapse(a, b, end))
    if system.output not in seen:
        issues.append(UnknownOutput(system.output))
    return issues
