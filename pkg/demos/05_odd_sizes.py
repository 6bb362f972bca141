"""
Odd sizes: transient optima
===========================

"""

from pointca import odd_n_study

# For odd n the best patterns come and go, so the study records the best
# valid pattern seen before each time limit. Runs are shared across limits.
res = odd_n_study(9, (100, 200, 400, 800), runs=50)
for t in res.t_max_list:
    print(f"T_max={t}: {dict(sorted(res.best_p[t].items()))}  at {res.p_max}: {res.fraction_at_max(t):.0%}")
print("never above the maximum:", res.max_seen <= res.p_max)
