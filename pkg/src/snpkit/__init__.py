"""snpkit: spiking neural P systems with delays, a delay-eliminating
rewrite, and co-simulation equivalence checking."""

from .eliminate import (
    BatchOverlapWarning,
    GadgetPlan,
    IdAllocator,
    InvalidDelay,
    Provenance,
    TransformResult,
    UnsupportedDelayedRule,
    batch_hazards,
    build_gadget,
    eliminate_delays,
    normalize_initial,
)
from .equivalence import Verdict, check_count_law, co_simulate, env_trajectory
from .model import (
    DanglingSynapse,
    DuplicateNeuron,
    InvalidRule,
    NegativeSpikes,
    Neuron,
    Rule,
    SelfLoop,
    SnpSystem,
    SpikeRegex,
    UnknownOutput,
    ValidationError,
    validate,
)
from .routing import Iteration, Join, RoutingInstance, Sequential, Split, compose, generate
from .semantics import (
    BudgetExhausted,
    Configuration,
    Halted,
    NeuronState,
    NondeterministicChoice,
    Trace,
    enabled_rules,
    initial_configuration,
    is_halting,
    run,
    step,
)
from .textio import (
    ParseError,
    SystemDocument,
    TraceStyle,
    export_dot,
    format_configuration,
    format_trace,
    parse_document,
    parse_system,
    serialize_system,
)

__version__ = "0.1.0"

__all__ = [
    "BatchOverlapWarning",
    "BudgetExhausted",
    "Configuration",
    "DanglingSynapse",
    "DuplicateNeuron",
    "GadgetPlan",
    "Halted",
    "IdAllocator",
    "InvalidDelay",
    "InvalidRule",
    "Iteration",
    "Join",
    "NegativeSpikes",
    "Neuron",
    "NeuronState",
    "NondeterministicChoice",
    "ParseError",
    "Provenance",
    "RoutingInstance",
    "Rule",
    "SelfLoop",
    "Sequential",
    "SnpSystem",
    "SpikeRegex",
    "Split",
    "SystemDocument",
    "Trace",
    "TraceStyle",
    "TransformResult",
    "UnknownOutput",
    "UnsupportedDelayedRule",
    "ValidationError",
    "Verdict",
    "batch_hazards",
    "build_gadget",
    "check_count_law",
    "co_simulate",
    "compose",
    "eliminate_delays",
    "enabled_rules",
    "env_trajectory",
    "export_dot",
    "format_configuration",
    "format_trace",
    "generate",
    "initial_configuration",
    "is_halting",
    "normalize_initial",
    "parse_document",
    "parse_system",
    "run",
    "serialize_system",
    "step",
    "validate",
]
