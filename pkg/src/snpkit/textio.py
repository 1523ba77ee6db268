"""Text format for systems, trace rendering, and DOT export.

The system format is line oriented; ``#`` starts a comment::

    system relay
    neuron 1 spikes=1
    rule 1: a+ / a -> a
    neuron 2
    rule 2: a+ / a -> a ; 2
    neuron 3
    rule 3: a+ / a -> a
    syn 1 -> 2
    syn 2 -> 3
    out 3

Guards are ``a``, ``a^4``, ``a+``, ``(a^2)+``, ``a^3(a^2)*`` or unions of
those joined with ``|``.  A rule consumes ``a^c`` (plain ``a`` for one
spike) and produces ``a^b``, ``a``, or ``0`` for a forgetting rule, with
an optional ``; d`` delay.  Neurons must be declared before their rules;
exactly one ``out`` line is required.  Serialisation is canonical, so
parse(serialize(s)) reproduces s exactly.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from enum import Enum

from .model import Neuron, Rule, SnpSystem, SpikeRegex, ValidationError, validate
from .semantics import Configuration, Halted, Trace


class ParseError(Exception):
    def __init__(self, line: int, message: str):
        self.line = line
        self.message = message
        super().__init__(f"line {line}: {message}")


_ID = r"[A-Za-z0-9_'.\-]+"
_NEURON_RE = re.compile(rf"^neuron\s+(?P<id>{_ID})(?:\s+spikes\s*=\s*(?P<spikes>\d+))?$")
_RULE_RE = re.compile(rf"^rule\s+(?P<id>{_ID})\s*:\s*(?P<body>.+)$")
_SYN_RE = re.compile(rf"^syn\s+(?P<a>{_ID})\s*->\s*(?P<b>{_ID})$")
_OUT_RE = re.compile(rf"^out\s+(?P<id>{_ID})$")
_SYSTEM_RE = re.compile(r"^system\s+(?P<name>\S+)$")

_ATOM_EXACT = re.compile(r"^a(?:\^(\d+))?$")
_ATOM_PLUS = re.compile(r"^a\+$")
_ATOM_MULTIPLES = re.compile(r"^\(a\^(\d+)\)\+$")
_ATOM_PROGRESSION = re.compile(r"^a(?:\^(\d+))?\(a\^(\d+)\)\*$")


def parse_guard(text: str) -> SpikeRegex:
    """Parse a guard expression; unions are joined with ``|``."""
    terms: list[tuple[int, int]] = []
    for raw in text.split("|"):
        atom = raw.strip().replace(" ", "")
        if m := _ATOM_PLUS.match(atom):
            terms.append((1, 1))
        elif m := _ATOM_MULTIPLES.match(atom):
            k = int(m.group(1))
            terms.append((k, k))
        elif m := _ATOM_PROGRESSION.match(atom):
            offset = int(m.group(1)) if m.group(1) else 1
            terms.append((offset, int(m.group(2))))
        elif m := _ATOM_EXACT.match(atom):
            terms.append((int(m.group(1)) if m.group(1) else 1, 0))
        else:
            raise ValueError(f"cannot parse guard piece {raw.strip()!r}")
    return SpikeRegex(tuple(terms))


def render_guard(regex: SpikeRegex) -> str:
    pieces = []
    for offset, period in regex.terms:
        if period == 0:
            pieces.append(f"a^{offset}")
        elif offset == 1 and period == 1:
            pieces.append("a+")
        elif offset == period:
            pieces.append(f"(a^{period})+")
        else:
            pieces.append(f"a^{offset}(a^{period})*")
    return "|".join(pieces)


def _parse_count(text: str, what: str) -> int:
    m = _ATOM_EXACT.match(text.strip())
    if not m:
        raise ValueError(f"cannot parse {what} {text.strip()!r}")
    return int(m.group(1)) if m.group(1) else 1


def parse_rule_body(text: str) -> Rule:
    """Parse ``<guard> / <consume> -> <produce> [; <delay>]``."""
    if "/" not in text:
        raise ValueError("rule needs a '/' between guard and consumption")
    guard_text, rest = text.split("/", 1)
    delay = 0
    if ";" in rest:
        rest, delay_text = rest.rsplit(";", 1)
        delay = int(delay_text.strip())
    if "->" not in rest:
        raise ValueError("rule needs '->' between consumption and production")
    consume_text, produce_text = rest.split("->", 1)
    guard = parse_guard(guard_text)
    consume = _parse_count(consume_text, "consumption")
    produce_text = produce_text.strip()
    produce = 0 if produce_text == "0" else _parse_count(produce_text, "production")
    return Rule(guard, consume, produce, delay)


def render_rule(rule: Rule) -> str:
    consume = "a" if rule.consume == 1 else f"a^{rule.consume}"
    if rule.produce == 0:
        produce = "0"
    elif rule.produce == 1:
        produce = "a"
    else:
        produce = f"a^{rule.produce}"
    text = f"{render_guard(rule.guard)} / {consume} -> {produce}"
    if rule.delay:
        text += f" ; {rule.delay}"
    return text


# --- documents ---------------------------------------------------------------


@dataclass(frozen=True)
class NeuronDecl:
    id: str
    spikes: int


@dataclass(frozen=True)
class RuleDecl:
    neuron: str
    rule: Rule


@dataclass(frozen=True)
class SynapseDecl:
    source: str
    target: str


@dataclass(frozen=True)
class OutputDecl:
    id: str


Statement = NeuronDecl | RuleDecl | SynapseDecl | OutputDecl


@dataclass(frozen=True)
class SystemDocument:
    name: str
    statements: tuple[Statement, ...]

    def to_system(self) -> SnpSystem:
        neurons: dict[str, tuple[int, list[Rule]]] = {}
        synapses: set[tuple[str, str]] = set()
        output = ""
        for stmt in self.statements:
            if isinstance(stmt, NeuronDecl):
                neurons[stmt.id] = (stmt.spikes, [])
            elif isinstance(stmt, RuleDecl):
                neurons[stmt.neuron][1].append(stmt.rule)
            elif isinstance(stmt, SynapseDecl):
                synapses.add((stmt.source, stmt.target))
            else:
                output = stmt.id
        built = tuple(
            Neuron(nid, spikes, tuple(rules)) for nid, (spikes, rules) in neurons.items()
        )
        return SnpSystem(built, frozenset(synapses), output, self.name)


def parse_document(text: str) -> SystemDocument:
    name = "system"
    named = False
    statements: list[Statement] = []
    declared: set[str] = set()
    output_seen = False
    last_line = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        last_line = lineno
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if m := _SYSTEM_RE.match(line):
            if named:
                raise ParseError(lineno, "duplicate system declaration")
            name, named = m.group("name"), True
        elif m := _NEURON_RE.match(line):
            nid = m.group("id")
            if nid in declared:
                raise ParseError(lineno, f"neuron {nid} declared twice")
            declared.add(nid)
            statements.append(NeuronDecl(nid, int(m.group("spikes") or 0)))
        elif m := _RULE_RE.match(line):
            nid = m.group("id")
            if nid not in declared:
                raise ParseError(lineno, f"rule for undeclared neuron {nid}")
            try:
                rule = parse_rule_body(m.group("body"))
            except ValueError as err:
                raise ParseError(lineno, str(err)) from None
            statements.append(RuleDecl(nid, rule))
        elif m := _SYN_RE.match(line):
            statements.append(SynapseDecl(m.group("a"), m.group("b")))
        elif m := _OUT_RE.match(line):
            if output_seen:
                raise ParseError(lineno, "duplicate output declaration")
            output_seen = True
            statements.append(OutputDecl(m.group("id")))
        else:
            raise ParseError(lineno, f"cannot parse {line!r}")
    if not output_seen:
        raise ParseError(last_line or 1, "missing output declaration")
    return SystemDocument(name, tuple(statements))


def parse_system(text: str) -> SnpSystem:
    """Parse and validate; raises ParseError or ValidationError."""
    system = parse_document(text).to_system()
    issues = validate(system)
    if issues:
        raise ValidationError(issues)
    return system


def serialize_system(system: SnpSystem) -> str:
    """Canonical document text; parsing it back reproduces the system."""
    lines = [f"system {system.name}"]
    for neuron in system.neurons:
        suffix = f" spikes={neuron.initial_spikes}" if neuron.initial_spikes else ""
        lines.append(f"neuron {neuron.id}{suffix}")
        for rule in neuron.rules:
            lines.append(f"rule {neuron.id}: {render_rule(rule)}")
    for a, b in sorted(system.synapses):
        lines.append(f"syn {a} -> {b}")
    lines.append(f"out {system.output}")
    return "\n".join(lines) + "\n"


# --- trace rendering ---------------------------------------------------------


class TraceStyle(Enum):
    PAPER = "paper"  # angle-bracket vectors, one n/t pair per neuron
    TABLE = "table"  # tab-separated rows, one tick per row
    MACHINE = "machine"  # JSON, one record per tick


def format_configuration(config: Configuration, ascii_brackets: bool = False) -> str:
    """Angle-bracket vector: one spikes/countdown pair per neuron, then the
    environment count."""
    left, right = ("<", ">") if ascii_brackets else ("⟨", "⟩")
    cells = [f"{s.spikes}/{s.closed_remaining}" for s in config.states]
    cells.append(str(config.environment))
    return f"{left}{', '.join(cells)}{right}"


def format_trace(
    trace: Trace,
    style: TraceStyle = TraceStyle.PAPER,
    ascii_brackets: bool = False,
    system: SnpSystem | None = None,
) -> str:
    """Render a trace; identical inputs give byte-identical output.

    Table style shows bare spike counts while no neuron ever closes (the
    delay-free case) and spikes/countdown pairs otherwise; passing the
    system adds a header row.  Machine style emits one JSON record per
    tick plus a final outcome record.
    """
    if style is TraceStyle.PAPER:
        lines = [
            f"C{c.tick} = {format_configuration(c, ascii_brackets)}"
            for c in trace.configurations
        ]
        return "\n".join(lines)

    if style is TraceStyle.TABLE:
        closes = any(s.closed_remaining for c in trace.configurations for s in c.states)
        lines = []
        if system is not None:
            lines.append("\t".join(["step", *system.ids, "env"]))
        for c in trace.configurations:
            if closes:
                cells = [f"{s.spikes}/{s.closed_remaining}" for s in c.states]
            else:
                cells = [str(s.spikes) for s in c.states]
            lines.append("\t".join([f"t{c.tick}", *cells, str(c.environment)]))
        return "\n".join(lines)

    records = []
    if system is not None:
        records.append({"system": system.name, "neurons": list(system.ids)})
    for c in trace.configurations:
        records.append(
            {
                "tick": c.tick,
                "spikes": [s.spikes for s in c.states],
                "closed": [s.closed_remaining for s in c.states],
                "pending": [s.pending_emission for s in c.states],
                "environment": c.environment,
            }
        )
    if isinstance(trace.outcome, Halted):
        records.append({"outcome": "halted", "at": trace.outcome.at})
    else:
        records.append({"outcome": "budget-exhausted"})
    return "\n".join(json.dumps(r, separators=(",", ":")) for r in records)


# --- DOT export --------------------------------------------------------------


def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def export_dot(system: SnpSystem) -> str:
    """Directed-graph description with one node per neuron and a
    distinguished environment node fed by the output neuron."""
    lines = [f'digraph "{_dot_escape(system.name)}" {{', "  rankdir=LR;"]
    for neuron in system.neurons:
        label_parts = [neuron.id]
        if neuron.initial_spikes == 1:
            label_parts.append("a")
        elif neuron.initial_spikes > 1:
            label_parts.append(f"a^{neuron.initial_spikes}")
        label_parts.extend(render_rule(r) for r in neuron.rules)
        label = "\\n".join(_dot_escape(p) for p in label_parts)
        lines.append(f'  "{_dot_escape(neuron.id)}" [shape=ellipse, label="{label}"];')
    lines.append('  "__env__" [shape=doublecircle, label="env"];')
    for a, b in sorted(system.synapses):
        lines.append(f'  "{_dot_escape(a)}" -> "{_dot_escape(b)}";')
    lines.append(f'  "{_dot_escape(system.output)}" -> "__env__";')
    lines.append("}")
    return "\n".join(lines) + "\n"
