"""Exact minimum-bin search for small 1-D instances (optionally colored).

Complete branch and bound: items are branched in decreasing size, the next
item goes into each distinguishable open bin and then one fresh bin.  Bins
with identical remaining room and color set are interchangeable for every
future decision, so only the first of each signature is branched.  A greedy
first-fit-decreasing packing seeds the incumbent; the search proves
optimality or improves on it.  All arithmetic is exact, because adversarial
instances differ by amounts no float can see.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Optional

from .exact import Exact, rat
from .model import Item, Packing, Placement, VariantRules, validate_packing

__all__ = ["OracleInstance", "OracleResult", "BudgetExceeded", "min_bins"]

ONE = rat(1)
ZERO = rat(0)

DEFAULT_NODE_BUDGET = 2_000_000


class BudgetExceeded(RuntimeError):
    """Search budget ran out; carries the best packing found so far."""

    def __init__(self, best_cost, message="node budget exceeded"):
        super().__init__(message)
        self.best_cost = best_cost


@dataclass(frozen=True)
class OracleInstance:
    items: tuple[Item, ...]
    rules: VariantRules
    node_budget: int = DEFAULT_NODE_BUDGET

    def __post_init__(self):
        if self.rules.is_geometric:
            raise ValueError("exact search covers one-dimensional variants only")


@dataclass
class OracleResult:
    count: int
    witness: Packing
    nodes: int
    proven: bool  # True: provably minimal; False: budget ran out


def _env_budget() -> Optional[int]:
    raw = os.environ.get("PACKBOUND_NODE_BUDGET")
    return int(raw) if raw else None


def _sorted_items(items) -> list[Item]:
    return sorted(items, key=lambda it: (it.size, -it.ident), reverse=True)


def _lower_bound(rules: VariantRules, items) -> int:
    total = sum((it.size for it in items), ZERO)
    # ceil of an Exact total: tiny perturbations cannot cross an integer on
    # their own, so ceil(rational part) + adjustment via exact comparison
    bound = 0
    while rat(bound) < total:
        bound += 1
    if rules.colored:
        colors = {it.color for it in items}
        per_bin = rules.t
        color_bound = -(-len(colors) // per_bin)
        bound = max(bound, color_bound)
    return max(bound, 1 if items else 0)


def _greedy(rules: VariantRules, ordered: list[Item]) -> Packing:
    packing = Packing(rules)
    for item in ordered:
        placed = False
        for b in range(packing.cost):
            load_ok = packing.bin_load(b) + item.size <= ONE
            color_ok = True
            if rules.colored:
                colors = packing.bin_colors(b)
                color_ok = item.color in colors or len(colors) < rules.t
            if load_ok and color_ok:
                packing.add_item(item, Placement(b))
                placed = True
                break
        if not placed:
            packing.add_item(item, Placement(packing.cost))
    return packing


def min_bins(instance: OracleInstance) -> OracleResult:
    """Provably minimum bin count with a witness packing."""
    rules = instance.rules
    search_rules = rules
    if rules.kind == "known-opt":  # packing rules are plain 1-D
        search_rules = VariantRules("one-d")
        instance = OracleInstance(instance.items, search_rules, instance.node_budget)
        rules = search_rules
    ordered = _sorted_items(instance.items)
    if not ordered:
        return OracleResult(0, Packing(rules), 0, True)

    budget = _env_budget() or instance.node_budget
    lower = _lower_bound(rules, ordered)
    best_packing = _greedy(rules, ordered)
    best = best_packing.cost
    if best == lower:
        return OracleResult(best, best_packing, 0, True)

    sizes = [it.size for it in ordered]
    suffix_total = [ZERO] * (len(ordered) + 1)
    for i in range(len(ordered) - 1, -1, -1):
        suffix_total[i] = suffix_total[i + 1] + sizes[i]

    nodes = 0
    # bins held as parallel lists: loads, color sets, assignment lists
    loads: list[Exact] = []
    colors: list[set] = []
    content: list[list[Item]] = []

    def remaining_bound(index: int) -> int:
        # open bins stay; remaining volume beyond total free room forces more
        free = sum((ONE - l for l in loads), ZERO)
        need = suffix_total[index] - free
        extra = 0
        while rat(extra) < need:
            extra += 1
        return len(loads) + extra

    def search(index: int):
        nonlocal nodes, best, best_packing
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded(best)
        if index == len(ordered):
            if len(loads) < best:
                best = len(loads)
                packing = Packing(rules)
                for b, items_in_bin in enumerate(content):
                    for it in items_in_bin:
                        packing.add_item(it, Placement(b))
                best_packing = packing
            return
        if remaining_bound(index) >= best:
            return
        item = ordered[index]
        seen_signatures = set()
        for b in range(len(loads)):
            if loads[b] + item.size > ONE:
                continue
            if rules.colored:
                cols = colors[b]
                if item.color not in cols and len(cols) >= rules.t:
                    continue
            signature = (loads[b], frozenset(colors[b]) if rules.colored else None)
            if signature in seen_signatures:
                continue
            seen_signatures.add(signature)
            loads[b] = loads[b] + item.size
            added_color = rules.colored and item.color not in colors[b]
            if added_color:
                colors[b].add(item.color)
            content[b].append(item)
            search(index + 1)
            content[b].pop()
            if added_color:
                colors[b].discard(item.color)
            loads[b] = loads[b] - item.size
        if len(loads) + 1 < best:  # fresh bin, only if it can still improve
            loads.append(item.size)
            colors.append({item.color} if rules.colored else set())
            content.append([item])
            search(index + 1)
            content.pop()
            colors.pop()
            loads.pop()
        return

    proven = True
    if best > lower:
        try:
            search(0)
        except BudgetExceeded:
            proven = False  # best is an upper bound only
    result = OracleResult(best, best_packing, nodes, proven)
    assert not validate_packing(result.witness)
    assert result.witness.cost == result.count
    return result
