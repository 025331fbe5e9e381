"""Exact minimum-bin search, cross-checked against brute-force enumeration."""

from fractions import Fraction

from hypothesis import given, settings, strategies as st

from packbound.exact import power, rat
from packbound.model import Item, VariantRules, validate_packing
from packbound.optoracle import OracleInstance, min_bins

ONED = VariantRules("one-d")


def items_of(sizes, colors=None):
    return tuple(
        Item(i, rat(s), color=colors[i] if colors else None)
        for i, s in enumerate(sizes)
    )


def brute_force_min(sizes, colors=None, t=None):
    """Try every partition of items into bins (set-partition enumeration)."""
    n = len(sizes)
    if n == 0:
        return 0
    best = n

    def feasible(group):
        total = sum(Fraction(s) for s in (sizes[i] for i in group))
        if total > 1:
            return False
        if colors is not None:
            if len({colors[i] for i in group}) > t:
                return False
        return True

    def partitions(rest):
        if not rest:
            yield []
            return
        head, tail = rest[0], rest[1:]
        for sub in partitions(tail):
            for i, group in enumerate(sub):
                yield sub[:i] + [group + [head]] + sub[i + 1 :]
            yield sub + [[head]]

    for part in partitions(list(range(n))):
        if all(feasible(g) for g in part):
            best = min(best, len(part))
    return best


class TestKnownAnswers:
    def test_pairing(self):
        result = min_bins(OracleInstance(items_of(["3/5", "3/5", "2/5", "2/5"]), ONED))
        assert result.count == 2 and result.proven

    def test_empty(self):
        assert min_bins(OracleInstance((), ONED)).count == 0

    def test_single_full(self):
        assert min_bins(OracleInstance(items_of(["1"]), ONED)).count == 1

    def test_known_opt_rules_treated_as_one_d(self):
        rules = VariantRules("known-opt", advice=2)
        result = min_bins(OracleInstance(items_of(["3/5", "3/5"]), rules))
        assert result.count == 2

    def test_perturbed_adversary_sizes(self):
        # four 4/5-items and four sevenths pair up: cost 4
        sizes = [rat("4/5")] * 4 + [rat("1/7") + power(10, 64 + 2 * i) for i in range(4)]
        items = tuple(Item(i, s) for i, s in enumerate(sizes))
        result = min_bins(OracleInstance(items, ONED))
        assert result.count == 4 and result.proven

    def test_colored_tiny_plus_huge(self):
        rules = VariantRules("class-constrained", t=2)
        # four tiny distinct colors + one huge sharing color 0: two bins
        sizes = ["1/1000"] * 4 + ["9/10"]
        colors = [0, 1, 2, 3, 0]
        result = min_bins(OracleInstance(items_of(sizes, colors), rules))
        assert result.count == brute_force_min(
            [Fraction(1, 1000)] * 4 + [Fraction(9, 10)], colors, 2
        ) == 2

    def test_color_bound_drives_count(self):
        rules = VariantRules("class-constrained", t=2)
        sizes = ["1/100"] * 6
        colors = [0, 1, 2, 3, 4, 5]
        result = min_bins(OracleInstance(items_of(sizes, colors), rules))
        assert result.count == 3  # six colors, two per bin

    def test_budget_exhaustion_flags_result(self):
        sizes = ["5/12", "4/12", "3/12", "5/13", "4/13", "3/13", "6/13", "7/24", "5/24"]
        result = min_bins(OracleInstance(items_of(sizes), ONED, node_budget=3))
        if not result.proven:
            assert result.count >= 3
        assert validate_packing(result.witness) == []


class TestWitness:
    @given(st.lists(
        st.fractions(min_value=Fraction(1, 12), max_value=1, max_denominator=24),
        min_size=1, max_size=7,
    ))
    @settings(max_examples=80, deadline=None)
    def test_count_matches_brute_force_and_witness_validates(self, sizes):
        result = min_bins(OracleInstance(items_of(sizes), ONED))
        assert result.proven
        assert result.count == brute_force_min(sizes)
        assert validate_packing(result.witness) == []
        assert result.witness.cost == result.count

    @given(
        st.lists(st.fractions(min_value=Fraction(1, 10), max_value=Fraction(1, 2),
                              max_denominator=20), min_size=1, max_size=6),
        st.data(),
    )
    @settings(max_examples=50, deadline=None)
    def test_colored_matches_brute_force(self, sizes, data):
        colors = [data.draw(st.integers(min_value=0, max_value=3)) for _ in sizes]
        rules = VariantRules("class-constrained", t=2)
        result = min_bins(OracleInstance(items_of(sizes, colors), rules))
        assert result.count == brute_force_min(sizes, colors, 2)
        assert validate_packing(result.witness) == []
