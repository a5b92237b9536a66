"""Digit-level function corpus: primitives, composed operations, 10-shot
instances with chain-of-thought targets, and the rule-based verifier.

An operation is an ordered composition of primitives identified by an
opaque label.  Evaluation starts from an integer in [0, 99999] and ends
with a non-negative integer; representation mismatches along the chain
are bridged implicitly (integer -> digit list by decimal decomposition,
digit list -> integer by joining digits), so every primitive sequence is
a total function.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .boxed import parse_boxed_int
from .errors import ConfigError, DomainError, ExhaustedError
from .seeding import derive_seed

MAX_INPUT = 99_999
SAMPLE_ATTEMPTS = 10_000

INT = "int"
DIGITS = "digits"

# kind -> (input representation, output representation)
PRIMITIVE_KINDS: dict[str, tuple[str, str]] = {
    "to_digits": (INT, DIGITS),
    "reverse_digits": (DIGITS, DIGITS),
    "digit_sum": (DIGITS, INT),
    "digit_product_nonzero": (DIGITS, INT),
    "sort_digits_asc": (DIGITS, DIGITS),
    "sort_digits_desc": (DIGITS, DIGITS),
    "map_add_k_mod10": (DIGITS, DIGITS),
    "pairwise_mul_with_reversed_then_sum": (DIGITS, INT),
    "alternating_sum": (DIGITS, INT),
    "from_digits": (DIGITS, INT),
}
PARAM_KINDS = {"map_add_k_mod10"}
PARAM_RANGE = range(1, 10)


@dataclass(frozen=True)
class Primitive:
    kind: str
    param: int | None = None

    def __post_init__(self):
        if self.kind not in PRIMITIVE_KINDS:
            raise ConfigError(f"unknown primitive kind {self.kind!r}")
        if (self.kind in PARAM_KINDS) != (self.param is not None):
            raise ConfigError(f"primitive {self.kind!r} param mismatch: {self.param!r}")


Composition = tuple[Primitive, ...]


@dataclass(frozen=True)
class OperationSpec:
    opaque_label: str
    composition: Composition

    @property
    def complexity(self) -> int:
        return len(self.composition)


@dataclass
class FuncInstance:
    example_id: str
    op_label: str
    shots: list[tuple[int, int]]
    query_input: int
    gold_output: int
    cot_target: str


@dataclass
class FuncCorpus:
    train_ops: list[OperationSpec]
    unseen_ops: list[OperationSpec]
    train: list[FuncInstance]
    test: list[FuncInstance]
    unseen: list[FuncInstance]


# Fixture used throughout the tests: sum of each digit times its mirror.
FUNCTION_E = OperationSpec(
    "E",
    (Primitive("to_digits"), Primitive("pairwise_mul_with_reversed_then_sum")),
)


def int_to_digits(value: int) -> list[int]:
    return [int(ch) for ch in str(value)]


def digits_to_int(digits: Sequence[int]) -> int:
    return int("".join(str(d) for d in digits)) if digits else 0


def _apply(prim: Primitive, digits: list[int]) -> list[int] | int:
    kind = prim.kind
    if kind == "reverse_digits":
        return digits[::-1]
    if kind == "digit_sum":
        return sum(digits)
    if kind == "digit_product_nonzero":
        prod = 1
        for d in digits:
            if d != 0:
                prod *= d
        return prod
    if kind == "sort_digits_asc":
        return sorted(digits)
    if kind == "sort_digits_desc":
        return sorted(digits, reverse=True)
    if kind == "map_add_k_mod10":
        return [(d + prim.param) % 10 for d in digits]
    if kind == "pairwise_mul_with_reversed_then_sum":
        rev = digits[::-1]
        return sum(a * b for a, b in zip(digits, rev))
    if kind == "alternating_sum":
        return abs(sum(d if i % 2 == 0 else -d for i, d in enumerate(digits)))
    if kind == "from_digits":
        return digits_to_int(digits)
    raise ConfigError(f"unhandled primitive {kind!r}")  # pragma: no cover


def eval_operation(op: OperationSpec, value: int) -> int:
    """Ground-truth oracle: run the composition on an integer input."""
    if not 0 <= value <= MAX_INPUT:
        raise DomainError(f"input {value} outside [0, {MAX_INPUT}]")
    state: int | list[int] = value
    for prim in op.composition:
        in_repr = PRIMITIVE_KINDS[prim.kind][0]
        if prim.kind == "to_digits":
            state = int_to_digits(state if isinstance(state, int) else digits_to_int(state))
            continue
        if in_repr == DIGITS and isinstance(state, int):
            state = int_to_digits(state)
        elif in_repr == INT and not isinstance(state, int):
            state = digits_to_int(state)
        state = _apply(prim, state)  # type: ignore[arg-type]
    return state if isinstance(state, int) else digits_to_int(state)


def default_label_pool() -> list[str]:
    letters = [chr(ord("A") + i) for i in range(26)]
    return letters + [a + b for a in letters for b in letters]


def _random_composition(rng: random.Random, lo: int, hi: int) -> Composition:
    length = rng.randint(lo, hi)
    prims = []
    for _ in range(length):
        kind = rng.choice(sorted(PRIMITIVE_KINDS))
        param = rng.choice(PARAM_RANGE) if kind in PARAM_KINDS else None
        prims.append(Primitive(kind, param))
    return tuple(prims)


def sample_operations(
    count: int,
    complexity_range: tuple[int, int],
    seed: int,
    exclude: Iterable[Composition] = (),
    label_pool: Sequence[str] | None = None,
) -> list[OperationSpec]:
    """Structurally distinct compositions with seeded opaque labels.

    Raises ExhaustedError when SAMPLE_ATTEMPTS seeded draws cannot find
    `count` distinct compositions outside `exclude`.
    """
    lo, hi = complexity_range
    if count < 0 or lo < 1 or hi < lo:
        raise ConfigError(f"bad sampling request: count={count} range={complexity_range}")
    pool = list(label_pool) if label_pool is not None else default_label_pool()
    if len(pool) < count:
        raise ConfigError(f"label pool of {len(pool)} cannot cover {count} operations")
    rng = random.Random(derive_seed(seed, "op-sampler"))
    forbidden = set(exclude)
    chosen: list[Composition] = []
    attempts = 0
    while len(chosen) < count:
        attempts += 1
        if attempts > SAMPLE_ATTEMPTS:
            raise ExhaustedError(
                f"only found {len(chosen)} of {count} distinct compositions in "
                f"{SAMPLE_ATTEMPTS} attempts (complexity {lo}-{hi})"
            )
        comp = _random_composition(rng, lo, hi)
        if comp in forbidden:
            continue
        forbidden.add(comp)
        chosen.append(comp)
    labels = rng.sample(pool, count)
    return [OperationSpec(lab, comp) for lab, comp in zip(labels, chosen)]


# ---------------------------------------------------------------- CoT text


def _digits_str(digits: Sequence[int]) -> str:
    return str(list(digits))


def _render_step(prim: Primitive, before: int | list[int], after: int | list[int]) -> str:
    kind = prim.kind
    if kind == "to_digits":
        return f"The digits of {before} are {_digits_str(after)}."
    if kind == "reverse_digits":
        return f"Reversed: {_digits_str(after)}."
    if kind == "sort_digits_asc":
        return f"Sorted ascending: {_digits_str(after)}."
    if kind == "sort_digits_desc":
        return f"Sorted descending: {_digits_str(after)}."
    if kind == "map_add_k_mod10":
        return f"Adding {prim.param} to each digit mod 10: {_digits_str(after)}."
    if kind == "digit_sum":
        terms = " + ".join(str(d) for d in before)
        return f"Sum of digits: {terms} = {after}."
    if kind == "digit_product_nonzero":
        nonzero = [d for d in before if d != 0]
        if not nonzero:
            return f"Product of nonzero digits: {after} (no nonzero digits)."
        terms = " * ".join(str(d) for d in nonzero)
        return f"Product of nonzero digits: {terms} = {after}."
    if kind == "alternating_sum":
        terms = " ".join(
            (f"- {d}" if i % 2 else f"+ {d}") if i else str(d)
            for i, d in enumerate(before)
        )
        return f"Alternating sum: |{terms}| = {after}."
    if kind == "pairwise_mul_with_reversed_then_sum":
        rev = list(before)[::-1]
        prods = [a * b for a, b in zip(before, rev)]
        lhs = " + ".join(f"{a}*{b}" for a, b in zip(before, rev))
        mid = " + ".join(str(p) for p in prods)
        line = f"Reversed: {_digits_str(rev)}.\n{lhs} = {after}." if len(prods) == 1 else (
            f"Reversed: {_digits_str(rev)}.\n{lhs} = {mid} = {after}."
        )
        return line
    if kind == "from_digits":
        return f"Joining the digits gives {after}."
    raise ConfigError(f"unhandled primitive {kind!r}")  # pragma: no cover


def render_cot(op: OperationSpec, value: int) -> str:
    """Step-by-step derivation ending in the boxed oracle answer."""
    if not 0 <= value <= MAX_INPUT:
        raise DomainError(f"input {value} outside [0, {MAX_INPUT}]")
    lines: list[str] = []
    state: int | list[int] = value
    for prim in op.composition:
        in_repr = PRIMITIVE_KINDS[prim.kind][0]
        if prim.kind == "to_digits":
            before: int | list[int] = state if isinstance(state, int) else digits_to_int(state)
            state = int_to_digits(before)
            lines.append(_render_step(prim, before, state))
            continue
        if in_repr == DIGITS and isinstance(state, int):
            digits = int_to_digits(state)
            lines.append(f"The digits of {state} are {_digits_str(digits)}.")
            state = digits
        elif in_repr == INT and not isinstance(state, int):
            joined = digits_to_int(state)
            lines.append(f"Joining the digits gives {joined}.")
            state = joined
        before = state
        state = _apply(prim, state)  # type: ignore[arg-type]
        lines.append(_render_step(prim, before, state))
    if not isinstance(state, int):
        joined = digits_to_int(state)
        lines.append(f"Joining the digits gives {joined}.")
        state = joined
    lines.append(f"{op.opaque_label}({value}) = {state}. \\boxed{{{state}}}")
    return "\n".join(lines)


def verify_answer(text: str, gold: int) -> bool:
    """True iff the last balanced boxed marker parses to exactly `gold`."""
    return parse_boxed_int(text) == gold


def render_prompt(op_label: str, shots: Sequence[tuple[int, int]], query_input: int) -> str:
    """User-facing query: the 10 shots plus the held-out input."""
    examples = ", ".join(f"{a} -> {b}" for a, b in shots)
    return (
        f"Based on the input-output examples below, infer the rule implemented by "
        f"function {op_label}. Then apply the same rule to determine the output for "
        f"the given input. Examples: {examples}. "
        f"Question: What is the output of {op_label}({query_input})?"
    )


# ---------------------------------------------------------------- corpus


@dataclass
class KgfuncConfig:
    n_ops: int = 7
    train_per_op: int = 1600
    test_per_op: int = 175
    n_unseen_ops: int = 20
    unseen_total: int = 500
    train_complexity: tuple[int, int] = (2, 3)
    unseen_complexity: tuple[int, int] = (1, 2)
    shots_per_instance: int = 10

    def validate(self) -> None:
        if min(self.n_ops, self.train_per_op, self.test_per_op) < 0:
            raise ConfigError("negative corpus sizes")
        if self.n_unseen_ops < 0 or self.unseen_total < 0:
            raise ConfigError("negative unseen sizes")
        if self.n_unseen_ops and self.unseen_total % self.n_unseen_ops:
            raise ConfigError(
                f"unseen_total {self.unseen_total} not divisible by "
                f"{self.n_unseen_ops} operations"
            )
        if self.shots_per_instance < 1:
            raise ConfigError("need at least one shot per instance")


def _make_instance(
    op: OperationSpec,
    rng: random.Random,
    split: str,
    index: int,
    n_shots: int,
    blocked_queries: set[int] | None = None,
) -> FuncInstance:
    shot_inputs = rng.sample(range(MAX_INPUT + 1), n_shots)
    shot_set = set(shot_inputs)
    while True:
        query = rng.randrange(MAX_INPUT + 1)
        if query in shot_set:
            continue
        if blocked_queries is not None and query in blocked_queries:
            continue
        break
    shots = [(x, eval_operation(op, x)) for x in shot_inputs]
    gold = eval_operation(op, query)
    return FuncInstance(
        example_id=f"kgfunc-{split}-{op.opaque_label}-{index:05d}",
        op_label=op.opaque_label,
        shots=shots,
        query_input=query,
        gold_output=gold,
        cot_target=render_cot(op, query),
    )


def build_corpus(config: KgfuncConfig, seed: int) -> FuncCorpus:
    """Seeded train/test/unseen splits; test queries never repeat an
    operation's train queries, and unseen compositions never repeat the
    train compositions."""
    config.validate()
    pool = default_label_pool()
    label_rng = random.Random(derive_seed(seed, "labels"))
    label_rng.shuffle(pool)
    train_ops = sample_operations(
        config.n_ops, config.train_complexity, derive_seed(seed, "train-ops"),
        label_pool=pool[: config.n_ops],
    )
    unseen_ops = sample_operations(
        config.n_unseen_ops, config.unseen_complexity, derive_seed(seed, "unseen-ops"),
        exclude=[op.composition for op in train_ops],
        label_pool=pool[config.n_ops : config.n_ops + config.n_unseen_ops],
    )

    train: list[FuncInstance] = []
    test: list[FuncInstance] = []
    unseen: list[FuncInstance] = []
    for op in train_ops:
        rng = random.Random(derive_seed(seed, "instances", op.opaque_label))
        train_queries: set[int] = set()
        for i in range(config.train_per_op):
            inst = _make_instance(op, rng, "train", i, config.shots_per_instance)
            train_queries.add(inst.query_input)
            train.append(inst)
        for i in range(config.test_per_op):
            test.append(
                _make_instance(op, rng, "test", i, config.shots_per_instance, train_queries)
            )
    per_unseen = config.unseen_total // config.n_unseen_ops if config.n_unseen_ops else 0
    for op in unseen_ops:
        rng = random.Random(derive_seed(seed, "instances", op.opaque_label))
        for i in range(per_unseen):
            unseen.append(_make_instance(op, rng, "unseen", i, config.shots_per_instance))
    return FuncCorpus(train_ops, unseen_ops, train, test, unseen)


def instance_row(inst: FuncInstance) -> dict:
    return {
        "example_id": inst.example_id,
        "op_label": inst.op_label,
        "shots": [[a, b] for a, b in inst.shots],
        "query_input": inst.query_input,
        "gold_output": inst.gold_output,
        "cot_target": inst.cot_target,
    }


def operations_manifest(corpus: FuncCorpus) -> dict:
    def entry(op: OperationSpec) -> dict:
        return {
            "composition": [
                {"kind": p.kind, **({"param": p.param} if p.param is not None else {})}
                for p in op.composition
            ],
            "complexity": op.complexity,
        }

    return {
        "train_operations": {op.opaque_label: entry(op) for op in corpus.train_ops},
        "unseen_operations": {op.opaque_label: entry(op) for op in corpus.unseen_ops},
    }
