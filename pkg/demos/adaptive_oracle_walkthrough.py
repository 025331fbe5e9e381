"""Watch the adaptive size oracle steer against an opponent's choices.

Each emitted value is a power 10^-e with e drawn by bisecting an integer
window; the opponent's placement decides whether future values grow or
shrink, and whatever it does, a threshold ends up strictly between the two
classes with a factor >= 100 separating them.
"""

from packbound import AdaptiveOracle, OracleConfig

oracle = AdaptiveOracle(OracleConfig(k=10, n=6))
print(f"window [{oracle.e_lo}, {oracle.e_hi}]")

answers = [False, True, True, False, True, False]  # large, small, small, ...
for ans in answers:
    value = oracle.next_value()
    oracle.observe(ans)
    tag = "small (condition held)" if ans else "large (fresh bin)"
    print(f"  emitted 10^-{oracle.emitted[-1].exponent:4d}  -> {tag}; "
          f"window now [{oracle.e_lo}, {oracle.e_hi}]")

sep = oracle.separator()
print(f"\nseparator gamma = 10^-{sep.gamma_exponent}")
for e in oracle.emitted:
    side = "<" if e.small else ">"
    print(f"  value 10^-{e.exponent:4d} {side} gamma "
          f"({'small' if e.small else 'large'})")
print(f"class ratio at least 10^{sep.ratio_exponent}")
