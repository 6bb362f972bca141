"""
How long until a maximum pattern
================================

"""

from pointca.harness import compare_orders

# Average time-steps until ABC1C2 settles, for several even sizes, with a
# power law t = a * N**b fitted in log space. Both visiting orders are run
# so the cost of picking cells with replacement shows up as a ratio.
pure, sweep, ratio = compare_orders([6, 8, 10, 12], runs=50, workers=2)
for res in (sweep, pure):
    print(res.order, [f"{t:.1f}" for t in res.t_avg], f"a={res.a:.4f} b={res.b:.3f}")
print(f"pure random is {ratio:.2f} times slower")
