"""
Exact counts on small tori
==========================

"""

from pointca import oracle_report
from pointca.analysis import p_max_formula

# Every valid pattern up to n = 8, counted exactly and grouped into
# classes under shifts, rotations and reflections.
for n in range(2, 8):
    r = oracle_report(n)
    print(f"n={n}: {r.total} valid, p in [{r.p_min}, {r.p_max}], "
          f"{r.w_max} max classes, formula {p_max_formula(n)}")

# The classes themselves, here the two 6x6 maximum patterns.
for text in oracle_report(6).classes_max:
    print(text)
