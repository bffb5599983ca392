"""Action selection under incomplete knowledge.

A strategy rule fires only when its body holds in every world consistent
with what the agent knows.  Rather than enumerate worlds, the selector
resolves the rule body once in a widened mode: a subgoal about an unknown
fact, if it unifies with a candidate assumption from the abducible set, is
satisfied by a placeholder assumption whose unknown arguments become rigid
placeholder constants (one per unknown, shared across the body).  Subgoals
that depend on a placeholder and cannot be resolved or assumed are deferred
rather than failed.  Each completed derivation yields a form: the action
head
plus the placeholder assumptions it rests on.

Each form is then grounded: every consistent way of instantiating its
placeholders from the abducible set is a candidate completion of the
agent's knowledge.  Completions that trip an integrity constraint are
discarded — this is where installed constraints from past observations cut
the space.  The rule fires only if at least one completion survives, the
fully instantiated body is entailed under every surviving completion, and
all completions agree on the action.  Rules are tried by ascending
priority, then source order; the first one that fires decides the turn.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import count
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

from .abduction import AbducibleSet
from .errors import (
    DepthExceeded,
    FlounderedNaf,
    FormLimitExceeded,
    InstanceLimitExceeded,
)
from .solver import SolveLimits, _EngineBase, _eval_arith, _has_arith, entails, violates_imp
from .terms import (
    Builtin,
    Clause,
    Conj,
    Disj,
    Goal,
    Lit,
    Naf,
    Skolem,
    Struct,
    Term,
    Var,
    goal_vars,
    is_ground,
    lit_is_ground,
    lit_key,
    lit_skolems,
    resolve,
    subst_goal,
    term_skolems,
    undo,
    unify_terms,
)


@dataclass(frozen=True)
class SelectLimits:
    max_depth: int = 10_000
    max_forms: int = 1_000
    max_instances: int = 100_000


_DEFAULT_LIMITS = SelectLimits()


@dataclass(frozen=True)
class Form:
    """One derivation shape of a rule body over placeholder assumptions."""

    head: Lit
    body: Tuple[Goal, ...]
    assumed: Tuple[Lit, ...]
    deferred: Tuple[Goal, ...]


@dataclass(frozen=True)
class Instance:
    """One consistent completion of a form's placeholders."""

    assumed: FrozenSet[Lit]
    head: Lit
    entails: bool


@dataclass
class Decision:
    action: Lit
    rule: Clause
    rule_index: int
    form: Form
    instances: Tuple[Instance, ...]


# ---------------------------------------------------------------------------
# Placeholder substitution and pattern matching
# ---------------------------------------------------------------------------


def replace_skolems_term(term: Term, mapping: Dict[Skolem, Term]) -> Term:
    if isinstance(term, Skolem):
        return mapping.get(term, term)
    if isinstance(term, Struct):
        return Struct(term.functor, tuple(replace_skolems_term(a, mapping) for a in term.args))
    return term


def replace_skolems_lit(lit: Lit, mapping: Dict[Skolem, Term]) -> Lit:
    return Lit(lit.pred, tuple(replace_skolems_term(a, mapping) for a in lit.args), lit.pos)


def replace_skolems_goal(goal: Goal, mapping: Dict[Skolem, Term]) -> Goal:
    if isinstance(goal, Lit):
        return replace_skolems_lit(goal, mapping)
    if isinstance(goal, Naf):
        return Naf(replace_skolems_goal(goal.goal, mapping))
    if isinstance(goal, Conj):
        return Conj(tuple(replace_skolems_goal(g, mapping) for g in goal.items))
    if isinstance(goal, Disj):
        return Disj(tuple(replace_skolems_goal(g, mapping) for g in goal.items))
    if isinstance(goal, Builtin):
        return Builtin(goal.op, replace_skolems_term(goal.lhs, mapping),
                       replace_skolems_term(goal.rhs, mapping))
    raise TypeError(f"not a goal: {goal!r}")


def _match_term(pattern: Term, concrete: Term, val: Optional[dict]) -> bool:
    """Wildcard match: placeholders and variables match anything.

    When val is a dict, placeholder bindings are recorded and must stay
    consistent across the whole pattern.
    """
    if isinstance(pattern, Skolem):
        if val is None:
            return True
        seen = val.get(pattern)
        if seen is None:
            val[pattern] = concrete
            return True
        return seen == concrete
    if isinstance(pattern, Var):
        return True
    if isinstance(pattern, Struct):
        if not (isinstance(concrete, Struct) and concrete.functor == pattern.functor
                and len(concrete.args) == len(pattern.args)):
            return False
        return all(_match_term(p, c, val) for p, c in zip(pattern.args, concrete.args))
    return pattern == concrete


def _match_lit(pattern: Lit, member: Lit, val: Optional[dict]) -> bool:
    if pattern.key != member.key:
        return False
    return all(_match_term(p, m, val) for p, m in zip(pattern.args, member.args))


# ---------------------------------------------------------------------------
# Form enumeration
# ---------------------------------------------------------------------------


class _FormEngine(_EngineBase):
    __slots__ = ("abducibles", "skgen", "assumed", "deferred")

    def __init__(self, kb, abducibles: AbducibleSet):
        super().__init__(kb)
        self.abducibles = abducibles
        self.skgen = count(1)
        self.assumed: List[Lit] = []
        self.deferred: List[Goal] = []

    def solve_lit(self, goal: Lit, depth: int) -> Iterator[None]:
        if depth <= 0:
            raise DepthExceeded(f"while widening {goal!r}")
        current = Lit(goal.pred, tuple(resolve(a, self.bind) for a in goal.args), goal.pos)
        key = current.key
        mark = len(self.trail)
        produced = False
        if lit_is_ground(current) and self.kb.has_ground_fact(current):
            yield None
            return
        for _ in self._kb_entries(current, depth):
            produced = True
            yield None
        # Assumptions already standing on this branch (shares placeholders).
        for lit in list(self.assumed):
            if lit.key != key:
                continue
            ok = True
            for ga, fa in zip(current.args, lit.args):
                if not unify_terms(ga, fa, self.bind, self.trail):
                    ok = False
                    break
            if ok:
                produced = True
                yield None
            undo(self.bind, self.trail, mark)
        # A fresh assumption, with unknown arguments as new placeholders.
        # Skipped when every matching candidate is already a stored fact:
        # those completions are exactly the resolution branches above, so
        # the assumption branch would only duplicate them.
        matching = [m for m in self.abducibles.members_for(key) if _match_lit(current, m, None)]
        if matching and not all(self.kb.has_ground_fact(m) for m in matching):
            new_args: List[Term] = []
            for arg in current.args:
                arg = resolve(arg, self.bind)
                if isinstance(arg, Var):
                    sk = Skolem(next(self.skgen))
                    unify_terms(arg, sk, self.bind, self.trail)
                    new_args.append(sk)
                else:
                    new_args.append(arg)
            new_lit = Lit(current.pred, tuple(new_args), current.pos)
            self.assumed.append(new_lit)
            produced = True
            yield None
            self.assumed.pop()
            undo(self.bind, self.trail, mark)
        # Last resort: carry a placeholder-dependent goal forward unproven.
        if not produced and any(lit_skolems(current)):
            self.deferred.append(current)
            yield None
            self.deferred.pop()

    def solve_naf(self, goal: Naf, depth: int) -> Iterator[None]:
        inner = subst_goal(goal.goal, self.bind)
        for _v in goal_vars(inner):
            raise FlounderedNaf(f"non-ground goal under not: {inner!r}")
        # Placeholders are treated as rigid constants here; a proof that
        # succeeds despite them holds under every completion, so failing the
        # branch is sound, and optimistic passes are re-checked per instance.
        view = self.kb.extended(tuple(self.assumed))
        if not entails(view, inner, SolveLimits(max_depth=depth)):
            yield None

    def solve_builtin(self, goal: Builtin) -> Iterator[None]:
        lhs = resolve(goal.lhs, self.bind)
        rhs = resolve(goal.rhs, self.bind)
        op = goal.op
        if op == "=":
            if _has_arith(rhs):
                if _arith_unready(rhs):
                    self.deferred.append(Builtin(op, lhs, rhs))
                    yield None
                    self.deferred.pop()
                    return
                rhs = _eval_arith(rhs)
            mark = len(self.trail)
            if unify_terms(lhs, rhs, self.bind, self.trail):
                yield None
            elif _term_has_skolem(lhs) or _term_has_skolem(rhs):
                undo(self.bind, self.trail, mark)
                self.deferred.append(Builtin(op, lhs, rhs))
                yield None
                self.deferred.pop()
                return
            undo(self.bind, self.trail, mark)
            return
        free = any(True for t in (lhs, rhs) for _ in _free_vars(t))
        sk = _term_has_skolem(lhs) or _term_has_skolem(rhs)
        if op == "\\==":
            if not free and not sk:
                if lhs != rhs:
                    yield None
                return
            if not free and sk and lhs == rhs:
                return  # equal under every completion: genuinely fails
            self.deferred.append(Builtin(op, lhs, rhs))
            yield None
            self.deferred.pop()
            return
        if free or sk:
            self.deferred.append(Builtin(op, lhs, rhs))
            yield None
            self.deferred.pop()
            return
        a, b = _eval_arith(lhs), _eval_arith(rhs)
        if (
            (op == "<" and a < b)
            or (op == ">" and a > b)
            or (op == "=<" and a <= b)
            or (op == ">=" and a >= b)
        ):
            yield None


def _free_vars(term: Term):
    if isinstance(term, Var):
        yield term
    elif isinstance(term, Struct):
        for a in term.args:
            yield from _free_vars(a)


def _term_has_skolem(term: Term) -> bool:
    return any(True for _ in term_skolems(term))


def _arith_unready(term: Term) -> bool:
    if isinstance(term, (Var, Skolem)):
        return True
    if isinstance(term, Struct):
        return any(_arith_unready(a) for a in term.args)
    return False


def skolemise(kb, abducibles: AbducibleSet, rule: Clause,
              limits: SelectLimits = _DEFAULT_LIMITS) -> List[Form]:
    """All derivation shapes of the rule body, with placeholder assumptions."""
    engine = _FormEngine(kb, abducibles)
    forms: List[Form] = []
    seen = set()
    for _ in engine.solve_seq(rule.body, 0, limits.max_depth):
        head = Lit(rule.head.pred,
                   tuple(resolve(a, engine.bind) for a in rule.head.args),
                   rule.head.pos)
        body = tuple(subst_goal(g, engine.bind) for g in rule.body)
        assumed = tuple(engine.assumed)
        deferred = tuple(subst_goal(g, engine.bind) for g in engine.deferred)
        sig = (head, assumed, deferred)
        if sig in seen:
            continue
        seen.add(sig)
        forms.append(Form(head=head, body=body, assumed=assumed, deferred=deferred))
        if len(forms) > limits.max_forms:
            raise FormLimitExceeded(f"more than {limits.max_forms} forms for {rule.head!r}")
    return forms


# ---------------------------------------------------------------------------
# Grounding forms into candidate completions
# ---------------------------------------------------------------------------


def ground_instances(kb, abducibles: AbducibleSet, form: Form,
                     limits: SelectLimits = _DEFAULT_LIMITS,
                     stop_on_refute: bool = False,
                     violates=violates_imp) -> Tuple[List[Instance], int, bool]:
    """Consistent completions of the form. Returns (kept, raw_count, aborted).

    raw_count is the number of placeholder valuations before integrity
    filtering; kept holds the surviving instances with their entailment
    verdicts. With stop_on_refute the scan stops at the first consistent
    completion that fails entailment, since one such completion already
    settles that the form cannot fire; aborted reports whether that
    happened, in which case kept covers only the prefix that was
    examined (raw_count is always the full valuation count).
    """
    per_lit: List[List[dict]] = []
    for lit in form.assumed:
        if not any(lit_skolems(lit)):
            per_lit.append([{}] if lit in abducibles else [])
            continue
        options = []
        for member in abducibles.members_for(lit.key):
            val: dict = {}
            if _match_lit(lit, member, val):
                options.append(val)
        per_lit.append(options)

    valuations: List[dict] = []

    def join(i: int, acc: dict) -> None:
        if i == len(per_lit):
            valuations.append(dict(acc))
            if len(valuations) > limits.max_instances:
                raise InstanceLimitExceeded(f"more than {limits.max_instances} completions")
            return
        for opt in per_lit[i]:
            merged = dict(acc)
            ok = True
            for k, v in opt.items():
                if merged.get(k, v) != v:
                    ok = False
                    break
                merged[k] = v
            if ok:
                join(i + 1, merged)

    join(0, {})

    # Dedup identical valuations arising from symmetric join orders.
    unique: List[dict] = []
    seen = set()
    for val in valuations:
        sig = tuple(sorted((k.id, repr(v)) for k, v in val.items()))
        if sig not in seen:
            seen.add(sig)
            unique.append(val)
    raw_count = len(unique)

    kept: List[Instance] = []
    aborted = False
    for val in unique:
        assumed_ground = frozenset(replace_skolems_lit(l, val) for l in form.assumed)
        head = replace_skolems_lit(form.head, val)
        body = Conj(tuple(replace_skolems_goal(g, val) for g in form.body))
        view = kb.extended(assumed_ground)
        # Entailment is checked before the integrity filter: a completion
        # that fails both is discarded either way, and the filter is the
        # expensive half, so it only runs on completions whose verdict
        # actually matters.
        ent = entails(view, body)
        if violates(kb, assumed_ground):
            continue
        kept.append(Instance(assumed=assumed_ground, head=head, entails=ent))
        if stop_on_refute and not ent:
            aborted = True
            break
    return kept, raw_count, aborted


# ---------------------------------------------------------------------------
# Rule-by-rule selection
# ---------------------------------------------------------------------------


def ordered_rules(rules: Sequence[Clause]) -> List[Tuple[int, Clause]]:
    """(original_index, rule) pairs by ascending priority, then source order."""
    indexed = list(enumerate(rules))
    indexed.sort(key=lambda pair: (pair[1].priority if pair[1].priority is not None else 0,
                                   pair[0]))
    return indexed


def select_action(kb, abducibles: AbducibleSet, rules: Sequence[Clause],
                  limits: SelectLimits = _DEFAULT_LIMITS,
                  trace: Optional[list] = None,
                  exhaustive: bool = False,
                  violates=violates_imp) -> Optional[Decision]:
    """First rule, in priority order, whose body holds in every completion.

    exhaustive forces every completion of every form to be evaluated even
    after one already refutes the form, so traces carry full instance
    counts; the default stops early because the verdict is settled.
    violates may be swapped for a checker specialised to the installed
    ruleset, as in abduce.
    """
    for idx, rule in ordered_rules(rules):
        forms = skolemise(kb, abducibles, rule, limits)
        rule_entry = None
        if trace is not None:
            rule_entry = {
                "rule_index": idx,
                "priority": rule.priority,
                "head": rule.head,
                "n_forms": len(forms),
                "forms": [],
            }
            trace.append(rule_entry)
        for form in forms:
            kept, raw, aborted = ground_instances(
                kb, abducibles, form, limits, stop_on_refute=not exhaustive,
                violates=violates)
            n_entailed = sum(1 for inst in kept if inst.entails)
            heads = {inst.head for inst in kept}
            fires = (
                bool(kept)
                and n_entailed == len(kept)
                and len(heads) == 1
                and lit_is_ground(next(iter(heads)))
                and not any(lit_skolems(next(iter(heads))))
            )
            if rule_entry is not None:
                rule_entry["forms"].append({
                    "assumed": form.assumed,
                    "deferred": len(form.deferred),
                    "instances_raw": raw,
                    "instances_kept": len(kept),
                    "instances_entailed": n_entailed,
                    "aborted": aborted,
                    "fired": fires,
                })
            if fires:
                action = next(iter(heads))
                if rule_entry is not None:
                    rule_entry["decision"] = action
                return Decision(action=action, rule=rule, rule_index=idx,
                                form=form, instances=tuple(kept))
    return None
