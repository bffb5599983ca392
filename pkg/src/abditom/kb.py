"""Clause store with provenance tags and cheap fact overlays.

Clauses are indexed by (predicate, arity, sign).  Every entry carries a
provenance tag saying where it came from:

    ontology       static domain facts and rules loaded from files
    percept        observation facts asserted each turn
    tom            knows/2 clauses
    abducible-def  abducible/1 clauses
    action-rule    prioritised action clauses
    aic            constraints installed by explanation assimilation
    assumed        temporary facts layered on by an overlay

Resolution order is load order.  Internally each predicate keeps a mixed
sequence in that order where a ground fact is stored as its bare argument
tuple and anything else as the clause itself; the solver pattern-matches
tuples positionally, which avoids renaming and full unification for the
fact lookups that dominate query time.  Ground facts are also mirrored in
per-predicate sets so entailment checks on ground literals short-circuit.
"""

from __future__ import annotations

from typing import Callable, Dict, Iterable, Iterator, List, Optional, Tuple, Union

from .terms import Clause, Lit, lit_is_ground

TAGS = ("ontology", "percept", "tom", "abducible-def", "action-rule", "aic", "assumed")

ResolutionEntry = Union[tuple, Clause]  # ground-fact args | full clause


class KnowledgeBase:
    __slots__ = ("owner", "_index", "_seq", "_ground", "aic_records")

    def __init__(self, owner: Optional[str] = None):
        self.owner = owner
        self._index: Dict[tuple, List[Tuple[Clause, str]]] = {}
        self._seq: Dict[tuple, List[ResolutionEntry]] = {}
        self._ground: Dict[tuple, set] = {}
        self.aic_records: list = []  # managed by the assimilation module

    # -- updates -------------------------------------------------------------

    def assert_clause(self, clause: Clause, tag: str) -> None:
        if tag not in TAGS:
            raise ValueError(f"unknown provenance tag: {tag}")
        key = clause.head.key
        self._index.setdefault(key, []).append((clause, tag))
        if clause.is_fact and lit_is_ground(clause.head):
            self._seq.setdefault(key, []).append(clause.head.args)
            self._ground.setdefault(key, set()).add(clause.head.args)
        else:
            self._seq.setdefault(key, []).append(clause)

    def assert_fact(self, lit: Lit, tag: str) -> None:
        self.assert_clause(Clause(lit, ()), tag)

    def assert_program(self, clauses: Iterable[Clause], tag_for: Callable[[Clause], str]) -> None:
        for c in clauses:
            self.assert_clause(c, tag_for(c))

    def retract_where(self, pred: Callable[[str, Clause], bool]) -> int:
        """Remove entries for which pred(tag, clause) holds; returns count."""
        removed = 0
        removed_clauses: List[Clause] = []
        for key in list(self._index):
            kept = []
            changed = False
            for clause, tag in self._index[key]:
                if pred(tag, clause):
                    removed += 1
                    changed = True
                    removed_clauses.append(clause)
                else:
                    kept.append((clause, tag))
            if not changed:
                continue
            if kept:
                self._index[key] = kept
                self._rebuild_key(key, kept)
            else:
                del self._index[key]
                self._seq.pop(key, None)
                self._ground.pop(key, None)
        if removed_clauses and self.aic_records:
            gone = {id(c) for c in removed_clauses}
            self.aic_records = [r for r in self.aic_records if id(r.clause) not in gone]
        return removed

    def _rebuild_key(self, key: tuple, kept: List[Tuple[Clause, str]]) -> None:
        seq: List[ResolutionEntry] = []
        ground = set()
        for clause, _tag in kept:
            if clause.is_fact and lit_is_ground(clause.head):
                seq.append(clause.head.args)
                ground.add(clause.head.args)
            else:
                seq.append(clause)
        self._seq[key] = seq
        if ground:
            self._ground[key] = ground
        else:
            self._ground.pop(key, None)

    def retract_tag(self, tag: str) -> int:
        return self.retract_where(lambda t, _c: t == tag)

    # -- lookups -------------------------------------------------------------

    def resolution_entries(self, key: tuple) -> List[ResolutionEntry]:
        return self._seq.get(key, _EMPTY_LIST)

    def clauses_for(self, key: tuple) -> Iterator[Clause]:
        for clause, _tag in self._index.get(key, ()):
            yield clause

    def entries_for(self, key: tuple) -> Iterator[Tuple[Clause, str]]:
        yield from self._index.get(key, ())

    def all_entries(self) -> Iterator[Tuple[Clause, str]]:
        for key in self._index:
            yield from self._index[key]

    def has_ground_fact(self, lit: Lit) -> bool:
        return lit.args in self._ground.get(lit.key, _EMPTY_SET)

    def ground_facts(self, key: tuple) -> frozenset:
        return frozenset(self._ground.get(key, ()))

    def __len__(self) -> int:
        return sum(len(v) for v in self._index.values())

    # -- derived views -------------------------------------------------------

    def clone(self, owner: Optional[str] = None) -> "KnowledgeBase":
        kb = KnowledgeBase(owner if owner is not None else self.owner)
        for key, entries in self._index.items():
            kb._index[key] = list(entries)
            kb._seq[key] = list(self._seq[key])
        for key, facts in self._ground.items():
            kb._ground[key] = set(facts)
        kb.aic_records = list(self.aic_records)
        return kb

    def extended(self, extra: Iterable[Lit]) -> "FactOverlay":
        return FactOverlay(self, extra)


_EMPTY_LIST: list = []
_EMPTY_SET: frozenset = frozenset()


class FactOverlay:
    """A knowledge base view with extra ground facts layered on top.

    The base is shared, not copied; extras come after base clauses in
    resolution order.
    """

    __slots__ = ("base", "_extra_seq", "_extra_ground", "owner")

    def __init__(self, base, extra: Iterable[Lit]):
        self.base = base
        self.owner = base.owner
        self._extra_seq: Dict[tuple, List[ResolutionEntry]] = {}
        self._extra_ground: Dict[tuple, set] = {}
        for lit in extra:
            if lit_is_ground(lit):
                self._extra_seq.setdefault(lit.key, []).append(lit.args)
                self._extra_ground.setdefault(lit.key, set()).add(lit.args)
            else:
                self._extra_seq.setdefault(lit.key, []).append(Clause(lit, ()))

    def resolution_entries(self, key: tuple) -> List[ResolutionEntry]:
        extra = self._extra_seq.get(key)
        base = self.base.resolution_entries(key)
        if not extra:
            return base
        if not base:
            return extra
        return base + extra

    def clauses_for(self, key: tuple) -> Iterator[Clause]:
        yield from self.base.clauses_for(key)
        for entry in self._extra_seq.get(key, ()):
            if isinstance(entry, Clause):
                yield entry
            else:
                pred, _arity, pos = key
                yield Clause(Lit(pred, entry, pos), ())

    def has_ground_fact(self, lit: Lit) -> bool:
        if lit.args in self._extra_ground.get(lit.key, _EMPTY_SET):
            return True
        return self.base.has_ground_fact(lit)
