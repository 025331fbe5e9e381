"""Re-derive every built-in lower-bound value with exact arithmetic.

The two known-opt programs are linear in the ratio variable and solved
outright by the exact simplex; the square-packing and class-constrained
programs carry ratio-times-variable products and are bracketed by exact
feasibility bisection.  The hand multiplier certificates are replayed
symbolically as an independent route to the known-opt bounds.
"""

from fractions import Fraction

from packbound import (
    bisect_min_r,
    builtin_program,
    builtin_program_ids,
    check_certificate,
    decimal_str,
    ko_certificate_suite,
    solve_min_r_exact,
)

print("exact optima (simplex)")
for pid in ("ko-case1", "ko-case2"):
    value = solve_min_r_exact(builtin_program(pid))
    print(f"  {pid:14s} min ratio = {value}  ({decimal_str(value)})")

print("\nbisection brackets (tolerance 1e-9)")
for pid in builtin_program_ids():
    program = builtin_program(pid)
    if program.linear_in_r:
        continue
    lo, hi = bisect_min_r(program, Fraction(1, 10**9))
    print(f"  {pid:14s} in [{decimal_str(lo)}, {decimal_str(hi)}]")

print("\nmultiplier certificates, replayed symbolically")
program = builtin_program("ko-case1")
for cert in ko_certificate_suite():
    derived = check_certificate(program, cert)
    print(f"  {cert.name:16s} -> {derived.render()}")
