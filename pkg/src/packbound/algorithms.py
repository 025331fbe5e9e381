"""Deterministic online packing algorithms (the adversary's opponents).

Every algorithm receives one item at a time and must commit a placement
before seeing the next item.  Placements are applied to a live packing with
full rule validation, so an algorithm bug surfaces as IllegalPlacement and is
reported as an algorithm failure, never an adversary failure.

Algorithms see only the variant rules, the optional packed-cost advice, and
the items themselves; adversary internals are off limits.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Optional

from .exact import Exact, rat
from .model import Item, Packing, PackingError, Placement, VariantRules

__all__ = [
    "AlgorithmSession",
    "IllegalPlacement",
    "AdviceMismatch",
    "UnknownAlgorithm",
    "make_session",
    "fork_replay",
    "register_algorithm",
    "algorithm_ids",
]

ONE = rat(1)
ZERO = rat(0)


class IllegalPlacement(RuntimeError):
    """The algorithm proposed a placement that violates the rules."""


class AdviceMismatch(ValueError):
    """Advice supplied for a variant that takes none, or missing for known-opt."""


class UnknownAlgorithm(KeyError):
    pass


class AlgorithmSession:
    """One run of one algorithm: owns a packing and a placement transcript."""

    def __init__(self, algorithm_id: str, rules: VariantRules, advice: Optional[int]):
        if (rules.kind == "known-opt") != (advice is not None):
            raise AdviceMismatch("advice must be present exactly for known-opt")
        if advice is not None and advice != rules.advice:
            raise AdviceMismatch("advice disagrees with the rules")
        self.algorithm_id = algorithm_id
        self.rules = rules
        self.advice = advice
        self.packing = Packing(rules)
        self.transcript: list[tuple[Item, Placement]] = []
        self._strategy = _REGISTRY[algorithm_id](rules, advice)

    @property
    def cost(self) -> int:
        return self.packing.cost

    def place(self, item: Item) -> Placement:
        """Ask the algorithm for a placement and commit it."""
        placement = self._strategy(self.packing, item)
        try:
            self.packing.add_item(item, placement)
        except PackingError as exc:
            raise IllegalPlacement(
                f"{self.algorithm_id} broke the rules on item {item.ident}: {exc}"
            ) from exc
        self.transcript.append((item, placement))
        return placement


def make_session(algorithm_id: str, rules: VariantRules,
                 advice: Optional[int] = None) -> AlgorithmSession:
    if algorithm_id not in _REGISTRY:
        raise UnknownAlgorithm(algorithm_id)
    return AlgorithmSession(algorithm_id, rules, advice)


def fork_replay(rules: VariantRules, advice: Optional[int], prefix: list[Item],
                algorithm_id: str) -> AlgorithmSession:
    """Fresh session fed the prefix; determinism makes it equal any earlier run."""
    session = make_session(algorithm_id, rules, advice)
    for item in prefix:
        session.place(item)
    return session


# -- strategies ------------------------------------------------------------
#
# A strategy is a callable (packing, item) -> Placement.  It may keep its own
# state but must be deterministic.


def _fits(packing: Packing, index: int, item: Item) -> bool:
    if packing.bin_load(index) + item.size > ONE:
        return False
    if packing.rules.colored:
        colors = packing.bin_colors(index)
        if item.color not in colors and len(colors) >= packing.rules.t:
            return False
    return True


def _next_fit(rules, advice):
    def place(packing: Packing, item: Item) -> Placement:
        last = packing.cost - 1
        if last >= 0 and _fits(packing, last, item):
            return Placement(last)
        return Placement(packing.cost)

    return place


def _first_fit(rules, advice):
    def place(packing: Packing, item: Item) -> Placement:
        for b in range(packing.cost):
            if _fits(packing, b, item):
                return Placement(b)
        return Placement(packing.cost)

    return place


def _best_fit(rules, advice):
    def place(packing: Packing, item: Item) -> Placement:
        best = None
        best_room = None
        for b in range(packing.cost):
            if not _fits(packing, b, item):
                continue
            room = ONE - packing.bin_load(b)
            if best_room is None or room < best_room:
                best, best_room = b, room
        if best is None:
            return Placement(packing.cost)
        return Placement(best)

    return place


def _harmonic(classes: int):
    """Interval classes (1/(i+1), 1/i] for i < classes, then (0, 1/classes]."""

    def factory(rules, advice):
        open_bin: dict[int, Optional[int]] = {i: None for i in range(1, classes + 1)}
        count_in_open: dict[int, int] = {i: 0 for i in range(1, classes + 1)}

        def classify(size: Exact) -> int:
            for i in range(1, classes):
                if size > rat(Fraction(1, i + 1)):
                    return i
            return classes

        def place(packing: Packing, item: Item) -> Placement:
            cls = classify(item.size)
            b = open_bin[cls]
            if b is not None:
                if cls < classes:
                    ok = count_in_open[cls] < cls
                else:
                    ok = packing.bin_load(b) + item.size <= ONE
                if ok and (not packing.rules.colored or _fits(packing, b, item)):
                    count_in_open[cls] += 1
                    return Placement(b)
            fresh = packing.cost
            open_bin[cls] = fresh
            count_in_open[cls] = 1
            return Placement(fresh)

        return place

    return factory


def _color_first_fit(rules, advice):
    # plain first fit that respects the color cap through _fits
    return _first_fit(rules, advice)


def _shelf_first_fit(rules, advice):
    """Shelves stacked bottom-up; shelf height is its first square's side.

    Squares go left-to-right on the first shelf (scanning bins in creation
    order) that is tall enough and has horizontal room; a new shelf opens on
    top of the current stack when it fits, else a new bin opens.
    """
    shelves: list[list[dict]] = []  # per bin: [{y, height, cursor}]

    def place(packing: Packing, item: Item) -> Placement:
        side = item.size
        for b, bin_shelves in enumerate(shelves):
            for shelf in bin_shelves:
                if side <= shelf["height"] and shelf["cursor"] + side <= ONE:
                    x = shelf["cursor"]
                    shelf["cursor"] = x + side
                    return Placement(b, x, shelf["y"])
            used = sum((s["height"] for s in bin_shelves), ZERO)
            if used + side <= ONE:
                bin_shelves.append({"y": used, "height": side, "cursor": side})
                return Placement(b, ZERO, used)
        shelves.append([{"y": ZERO, "height": side, "cursor": side}])
        return Placement(len(shelves) - 1, ZERO, ZERO)

    return place


_REGISTRY: dict[str, Callable] = {
    "next-fit": _next_fit,
    "first-fit": _first_fit,
    "best-fit": _best_fit,
    "harmonic-5": _harmonic(5),
    "ccff": _color_first_fit,
    "shelf-first-fit": _shelf_first_fit,
}

ONE_D_BASELINES = ("next-fit", "first-fit", "best-fit", "harmonic-5")


def register_algorithm(algorithm_id: str, factory: Callable) -> None:
    """Add a strategy factory (rules, advice) -> (packing, item) -> Placement."""
    _REGISTRY[algorithm_id] = factory


def algorithm_ids() -> list[str]:
    return sorted(_REGISTRY)
