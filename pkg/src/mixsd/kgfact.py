"""World-graph construction and the QA / retrieval corpora derived from it.

A graph is a pure function of (config, seed): regenerating with the same
inputs yields byte-identical serializations.  Every relation is
functional, so each (source entity, relation) question has exactly one
answer.
"""

from __future__ import annotations

import math
import random
import string
from dataclasses import dataclass, field

from . import naming
from .errors import ConfigError
from .fileio import atomic_write, dumps_stable, write_jsonl
from .relations import DEFAULT_DOMAIN_NAMES, DEFAULT_RELATION_BANK
from .seeding import derive_seed

GOLD_TARGET_TEMPLATE = "The answer is {name}. \\boxed{{{name}}}"


@dataclass(frozen=True)
class DomainSpec:
    name: str
    entity_count: int


@dataclass(frozen=True)
class Entity:
    id: int
    canonical_name: str
    domain: str


@dataclass(frozen=True)
class RelationType:
    label: str
    source_domain: str
    target_domain: str
    question_template: str
    statement_template: str


@dataclass(frozen=True)
class FactEdge:
    relation: str
    source_id: int
    target_id: int


@dataclass
class WorldGraph:
    domains: list[DomainSpec]
    entities: list[Entity]
    relations: list[RelationType]
    edges: list[FactEdge]
    seed: int

    def entity(self, entity_id: int) -> Entity:
        return self.entities[entity_id]

    def relation(self, label: str) -> RelationType:
        return self._relation_index()[label]

    def _relation_index(self) -> dict[str, RelationType]:
        cached = getattr(self, "_rel_cache", None)
        if cached is None:
            cached = {r.label: r for r in self.relations}
            object.__setattr__(self, "_rel_cache", cached)
        return cached

    def statement(self, edge: FactEdge) -> str:
        rel = self.relation(edge.relation)
        return rel.statement_template.format(
            source=self.entity(edge.source_id).canonical_name,
            target=self.entity(edge.target_id).canonical_name,
        )


@dataclass
class QaExample:
    example_id: str
    question: str
    answer_name: str
    gold_target: str
    edge_index: int


@dataclass
class RetrievalExample:
    example_id: str
    question: str
    answer_name: str
    context_facts: list[str]
    gold_index: int


@dataclass
class GraphConfig:
    domains: list[DomainSpec]
    relations_per_domain_pair: int = 2
    edge_density: float = 0.25
    custom_relations: list[RelationType] | None = None


def default_graph_config(
    n_domains: int,
    entities_per_domain: int,
    relations_per_domain_pair: int = 2,
    edge_density: float = 0.25,
) -> GraphConfig:
    if not 1 <= n_domains <= len(DEFAULT_DOMAIN_NAMES):
        raise ConfigError(
            f"default domain inventory supports 1..{len(DEFAULT_DOMAIN_NAMES)} domains, "
            f"got {n_domains}"
        )
    if entities_per_domain < 1:
        raise ConfigError("entities_per_domain must be >= 1")
    domains = [DomainSpec(name, entities_per_domain) for name in DEFAULT_DOMAIN_NAMES[:n_domains]]
    return GraphConfig(domains, relations_per_domain_pair, edge_density)


def _template_placeholders(template: str) -> set[str]:
    return {name for _, name, _, _ in string.Formatter().parse(template) if name}


def validate_relation(rel: RelationType) -> None:
    if _template_placeholders(rel.question_template) != {"source"}:
        raise ConfigError(f"question template of {rel.label!r} must use exactly {{source}}")
    if _template_placeholders(rel.statement_template) != {"source", "target"}:
        raise ConfigError(
            f"statement template of {rel.label!r} must use exactly {{source}} and {{target}}"
        )


def _build_inventory(config: GraphConfig) -> list[RelationType]:
    domain_names = [d.name for d in config.domains]
    if config.custom_relations is not None:
        for rel in config.custom_relations:
            if rel.source_domain not in domain_names or rel.target_domain not in domain_names:
                raise ConfigError(f"relation {rel.label!r} references an unknown domain")
            validate_relation(rel)
        labels = [r.label for r in config.custom_relations]
        if len(labels) != len(set(labels)):
            raise ConfigError("relation labels must be globally unique")
        return list(config.custom_relations)

    per_pair = config.relations_per_domain_pair
    relations: list[RelationType] = []
    for src in domain_names:
        for tgt in domain_names:
            if src == tgt:
                continue
            bank = DEFAULT_RELATION_BANK.get((src, tgt), [])
            for k in range(per_pair):
                if k < len(bank):
                    label, q, s = bank[k]
                else:
                    # beyond the handwritten bank: generic numbered links
                    label = f"{src.lower()}_{tgt.lower()}_link_{k}"
                    q = f"Which {tgt.lower()} does {{source}} connect to via link {k}?"
                    s = f"{{source}} connects to {{target}} via link {k}."
                relations.append(RelationType(label, src, tgt, q, s))
    return relations


def generate_world_graph(config: GraphConfig, seed: int) -> WorldGraph:
    """Seeded graph: fresh fictional entities plus one random functional
    matching per relation type, covering ceil(edge_density * E) sources."""
    if not config.domains:
        raise ConfigError("need at least one domain")
    names = [d.name for d in config.domains]
    if len(names) != len(set(names)):
        raise ConfigError("domain names must be unique")
    if not 0.0 < config.edge_density <= 1.0:
        raise ConfigError(f"edge_density {config.edge_density} outside (0, 1]")
    if config.relations_per_domain_pair < 0:
        raise ConfigError("relations_per_domain_pair must be >= 0")
    for d in config.domains:
        if d.entity_count < 1:
            raise ConfigError(f"domain {d.name!r} needs at least one entity")

    relations = _build_inventory(config)

    name_rng = random.Random(derive_seed(seed, "names"))
    taken: set[str] = set()
    entities: list[Entity] = []
    by_domain: dict[str, list[Entity]] = {d.name: [] for d in config.domains}
    for dom in config.domains:
        for _ in range(dom.entity_count):
            name = naming.mint_name(dom.name, name_rng, taken)
            taken.add(name)
            ent = Entity(len(entities), name, dom.name)
            entities.append(ent)
            by_domain[dom.name].append(ent)

    edge_rng = random.Random(derive_seed(seed, "edges"))
    edges: list[FactEdge] = []
    for rel in relations:
        sources = by_domain[rel.source_domain]
        targets = by_domain[rel.target_domain]
        if not targets:
            raise ConfigError(f"relation {rel.label!r} has no candidate targets")
        n_src = math.ceil(config.edge_density * len(sources))
        for src in edge_rng.sample(sources, n_src):
            tgt = edge_rng.choice(targets)
            edges.append(FactEdge(rel.label, src.id, tgt.id))

    return WorldGraph(list(config.domains), entities, relations, edges, seed)


def render_qa(graph: WorldGraph) -> list[QaExample]:
    """One question-answer pair per edge, in edge order."""
    out = []
    for i, edge in enumerate(graph.edges):
        rel = graph.relation(edge.relation)
        src = graph.entity(edge.source_id)
        tgt = graph.entity(edge.target_id)
        out.append(
            QaExample(
                example_id=f"kgfact-{i:05d}",
                question=rel.question_template.format(source=src.canonical_name),
                answer_name=tgt.canonical_name,
                gold_target=GOLD_TARGET_TEMPLATE.format(name=tgt.canonical_name),
                edge_index=i,
            )
        )
    return out


@dataclass
class RetrievalBuild:
    examples: list[RetrievalExample]
    underfilled: list[tuple[str, int]] = field(default_factory=list)


def build_retrieval_split(
    graph: WorldGraph,
    qa: list[QaExample],
    distractor_count: int = 50,
    seed: int = 0,
) -> RetrievalBuild:
    """Retrieval contexts: the gold statement shuffled among distractor
    facts that mention either query entity.

    Items whose graph neighborhood cannot supply `distractor_count`
    distinct distractors get everything available and are listed in the
    returned `underfilled` summary.
    """
    if distractor_count < 0:
        raise ConfigError("distractor_count must be >= 0")
    incident: dict[int, list[int]] = {e.id: [] for e in graph.entities}
    for idx, edge in enumerate(graph.edges):
        incident[edge.source_id].append(idx)
        if edge.target_id != edge.source_id:
            incident[edge.target_id].append(idx)

    build = RetrievalBuild([])
    for item in qa:
        edge = graph.edges[item.edge_index]
        candidates = sorted(
            (set(incident[edge.source_id]) | set(incident[edge.target_id])) - {item.edge_index}
        )
        rng = random.Random(derive_seed(seed, "retrieval", item.example_id))
        if len(candidates) < distractor_count:
            chosen = candidates
            build.underfilled.append((item.example_id, len(candidates)))
        else:
            chosen = rng.sample(candidates, distractor_count)
        statements = [(True, graph.statement(edge))]
        seen = {statements[0][1]}
        for idx in chosen:
            stmt = graph.statement(graph.edges[idx])
            if stmt in seen:
                continue
            seen.add(stmt)
            statements.append((False, stmt))
        rng.shuffle(statements)
        gold_index = next(i for i, (is_gold, _) in enumerate(statements) if is_gold)
        build.examples.append(
            RetrievalExample(
                example_id=item.example_id,
                question=item.question,
                answer_name=item.answer_name,
                context_facts=[s for _, s in statements],
                gold_index=gold_index,
            )
        )
    return build


def entity_lexicon(graph: WorldGraph) -> set[str]:
    """All canonical entity names; feeds the leakage classifier."""
    return {e.canonical_name for e in graph.entities}


# ---------------------------------------------------------------- output


def graph_to_dict(graph: WorldGraph) -> dict:
    return {
        "seed": graph.seed,
        "domains": [{"name": d.name, "entity_count": d.entity_count} for d in graph.domains],
        "entities": [
            {"id": e.id, "canonical_name": e.canonical_name, "domain": e.domain}
            for e in graph.entities
        ],
        "relations": [
            {
                "label": r.label,
                "source_domain": r.source_domain,
                "target_domain": r.target_domain,
                "question_template": r.question_template,
                "statement_template": r.statement_template,
            }
            for r in graph.relations
        ],
        "edges": [
            {"relation": e.relation, "source_id": e.source_id, "target_id": e.target_id}
            for e in graph.edges
        ],
    }


def write_graph(path, graph: WorldGraph) -> None:
    with atomic_write(path) as fh:
        fh.write(dumps_stable(graph_to_dict(graph)))
        fh.write("\n")


def write_qa(path, qa: list[QaExample]) -> int:
    return write_jsonl(
        path,
        (
            {
                "example_id": q.example_id,
                "question": q.question,
                "answer_name": q.answer_name,
                "gold_target": q.gold_target,
            }
            for q in qa
        ),
    )


def write_retrieval(path, examples: list[RetrievalExample]) -> int:
    return write_jsonl(
        path,
        (
            {
                "example_id": r.example_id,
                "question": r.question,
                "answer_name": r.answer_name,
                "context_facts": r.context_facts,
                "gold_index": r.gold_index,
            }
            for r in examples
        ),
    )


def write_lexicon(path, graph: WorldGraph) -> int:
    names = sorted(entity_lexicon(graph))
    with atomic_write(path) as fh:
        for name in names:
            fh.write(name)
            fh.write("\n")
    return len(names)
