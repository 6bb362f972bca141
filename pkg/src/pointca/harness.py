"""Batch experiments: many seeded runs, CSV output and summary statistics.

Run ``i`` of an experiment uses seed ``seed + i`` for both its initial grid
and its update stream, so an experiment is replayed exactly from its spec.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import logging
import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .analysis import is_valid, p_max_formula
from .lattice import Grid, InitSpec, make_rng, new_grid, write_pattern
from .rules import Pipeline, RuleParams
from .scheduler import StopSpec, parse_order, run

__all__ = [
    "CSV_SCHEMA",
    "CSV_COLUMNS",
    "ExperimentSpec",
    "RunRecord",
    "StatsRow",
    "ExperimentResult",
    "experiment",
    "single_run",
    "summarize",
    "ScalingResult",
    "scaling_study",
    "compare_orders",
    "OddStudyResult",
    "odd_n_study",
]

log = logging.getLogger(__name__)

CSV_SCHEMA = "pointca-runs/1"
CSV_COLUMNS = ("run_id", "seed", "n", "pipeline", "order", "tau_stable", "t_stable",
               "p_final", "p_best", "valid", "quiescent")


@dataclass
class ExperimentSpec:
    n: int
    init: str = "random"
    pipeline: str = "A"
    order: str = "random_sequence"
    runs: int = 100
    t_max: int = 1000
    stop_on_stable: bool = True
    seed: int = 0
    pi0: float = 0.01
    pi1: float = 0.25
    pi2: float = 0.02
    c2_mode: str = "diag"
    hit_form: str = "simplified3"
    hit_pre_adjust: bool = False
    workers: int = 1
    csv: str | None = None
    pattern_dir: str | None = None

    def validate(self) -> ExperimentSpec:
        """Raise ``ValueError`` on any inconsistent field; returns ``self``."""
        if self.n < 2:
            raise ValueError(f"n must be >= 2, got {self.n}")
        if self.runs < 1:
            raise ValueError(f"runs must be >= 1, got {self.runs}")
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")
        InitSpec.parse(self.init)
        parse_order(self.order)
        self.stop_spec()
        self.rule_params()
        self.pipeline_obj()
        return self

    def rule_params(self) -> RuleParams:
        return RuleParams(self.pi0, self.pi1, self.pi2)

    def pipeline_obj(self) -> Pipeline:
        return Pipeline.parse(self.pipeline, c2_mode=self.c2_mode, hit_form=self.hit_form,
                              hit_pre_adjust=self.hit_pre_adjust)

    def stop_spec(self) -> StopSpec:
        return StopSpec(self.t_max, self.stop_on_stable)

    @classmethod
    def from_dict(cls, d: dict) -> ExperimentSpec:
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(d) - names
        if unknown:
            raise ValueError(f"unknown experiment fields: {sorted(unknown)}")
        return cls(**d)

    @classmethod
    def from_json(cls, path: str | os.PathLike) -> ExperimentSpec:
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


@dataclass
class RunRecord:
    run_id: int
    seed: int
    n: int
    pipeline: str
    order: str
    tau_stable: int | None
    t_stable: int | None
    p_final: int
    p_best: int | None
    valid: bool
    quiescent: bool
    final: Grid | None = field(default=None, repr=False, compare=False)
    best: Grid | None = field(default=None, repr=False, compare=False)

    def csv_row(self) -> list:
        return [_fmt(getattr(self, c)) for c in CSV_COLUMNS]


@dataclass
class StatsRow:
    runs: int
    quiescent: int
    tau_avg: float | None
    tau_min: int | None
    tau_max: int | None
    time_steps: float | None
    p_avg: float
    frac_at_pmax: float
    t_stable_avg: float | None


@dataclass
class ExperimentResult:
    spec: ExperimentSpec
    records: list[RunRecord]
    summary: StatsRow

    def csv_text(self) -> str:
        buf = io.StringIO()
        buf.write(f"# {CSV_SCHEMA}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in self.records:
            w.writerow(r.csv_row())
        s = self.summary
        w.writerow(["summary", "", self.spec.n, self.records[0].pipeline, self.records[0].order,
                    _fmt(s.tau_avg), _fmt(s.t_stable_avg), _fmt(s.p_avg), _fmt(s.frac_at_pmax),
                    _fmt(sum(r.valid for r in self.records)), _fmt(s.quiescent)])
        return buf.getvalue()


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, float):
        return f"{v:.6f}"
    return str(v)


def single_run(spec: ExperimentSpec, run_id: int) -> RunRecord:
    seed = spec.seed + run_id
    rng = make_rng(seed)
    g = new_grid(spec.n, InitSpec.parse(spec.init), rng)
    pipe = spec.pipeline_obj()
    tr = run(g, pipe, spec.rule_params(), spec.order, spec.stop_spec(), rng)
    return RunRecord(
        run_id=run_id,
        seed=seed,
        n=spec.n,
        pipeline=pipe.name,
        order=parse_order(spec.order),
        tau_stable=tr.tau_stable,
        t_stable=tr.t_stable,
        p_final=tr.points,
        p_best=tr.best_points,
        valid=is_valid(tr.final),
        quiescent=tr.quiescent,
        final=tr.final,
        best=tr.best_grid,
    )


def _run_many(spec: ExperimentSpec, ids) -> list[RunRecord]:
    ids = list(ids)
    if spec.workers == 1 or len(ids) == 1:
        records = [single_run(spec, i) for i in ids]
    else:
        with ProcessPoolExecutor(max_workers=spec.workers) as pool:
            records = list(pool.map(single_run, [spec] * len(ids), ids, chunksize=max(1, len(ids) // (4 * spec.workers))))
    return sorted(records, key=lambda r: r.run_id)


def summarize(records: list[RunRecord], n: int) -> StatsRow:
    stable = [r for r in records if r.quiescent]
    taus = [r.tau_stable for r in stable]
    ts = [r.t_stable for r in stable]
    p = np.array([r.p_final for r in records], dtype=float)
    tau_avg = float(np.mean(taus)) if taus else None
    return StatsRow(
        runs=len(records),
        quiescent=len(stable),
        tau_avg=tau_avg,
        tau_min=min(taus) if taus else None,
        tau_max=max(taus) if taus else None,
        time_steps=tau_avg / n**2 if taus else None,
        p_avg=float(p.mean()),
        frac_at_pmax=float((p == p_max_formula(n)).mean()),
        t_stable_avg=float(np.mean(ts)) if ts else None,
    )


def experiment(spec: ExperimentSpec) -> ExperimentResult:
    """Execute ``spec.runs`` runs, write the requested artefacts, return the summary."""
    spec.validate()
    records = _run_many(spec, range(spec.runs))
    result = ExperimentResult(spec, records, summarize(records, spec.n))
    if spec.csv:
        _write_text(spec.csv, result.csv_text())
    if spec.pattern_dir:
        try:
            os.makedirs(spec.pattern_dir, exist_ok=True)
            for r in records:
                write_pattern(r.final, os.path.join(spec.pattern_dir, f"run{r.run_id:05d}_final.txt"))
                if r.best is not None:
                    write_pattern(r.best, os.path.join(spec.pattern_dir, f"run{r.run_id:05d}_best.txt"))
        except OSError as exc:
            raise OSError(f"{spec.pattern_dir}: {exc.strerror or exc}") from exc
    return result


def _write_text(path, text: str) -> None:
    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"{path}: {exc.strerror or exc}") from exc


# -- scaling of convergence time -------------------------------------------


@dataclass
class ScalingResult:
    sizes: list[int]
    order: str
    t_avg: list[float]
    converged: list[int]
    excluded: list[int]
    a: float
    b: float

    def predict(self, N):
        return self.a * np.asarray(N, dtype=float) ** self.b

    def csv_text(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("n", "N", "order", "t_avg", "converged", "excluded"))
        for row in zip(self.sizes, self.t_avg, self.converged, self.excluded):
            n, t, c, e = row
            w.writerow((n, n * n, self.order, _fmt(t), c, e))
        w.writerow(("fit", "", self.order, f"a={self.a:.6f}", f"b={self.b:.6f}", ""))
        return buf.getvalue()


def scaling_study(
    sizes,
    runs: int = 100,
    order: str = "random_sequence",
    pipeline: str = "ABC1C2",
    params: RuleParams = RuleParams(),
    t_max: int = 2000,
    seed: int = 0,
    workers: int = 1,
    csv_path: str | None = None,
) -> ScalingResult:
    """Average time-steps to a stable max pattern per even size and a power-law fit.

    Runs that end without a quiescent ``n^2 / 4`` pattern are left out of the
    averages and counted in ``excluded``. The fit is least squares of
    ``log t`` on ``log N``, giving ``t ~ a * N**b``.
    """
    sizes = sorted(set(int(n) for n in sizes))
    if len(sizes) < 3:
        raise ValueError(f"a scaling fit needs at least 3 distinct sizes, got {sizes}")
    if any(n % 2 for n in sizes):
        raise ValueError(f"scaling study is defined for even sizes, got {sizes}")
    t_avg, converged, excluded = [], [], []
    for n in sizes:
        spec = ExperimentSpec(n=n, pipeline=pipeline, order=order, runs=runs, t_max=t_max, seed=seed,
                              pi0=params.pi0, pi1=params.pi1, pi2=params.pi2, workers=workers)
        recs = _run_many(spec.validate(), range(runs))
        ok = [r.t_stable for r in recs if r.quiescent and r.p_final == n * n // 4]
        if not ok:
            raise RuntimeError(f"no run converged for n={n} within t_max={t_max}")
        t_avg.append(float(np.mean(ok)))
        converged.append(len(ok))
        excluded.append(runs - len(ok))
        log.info("n=%d order=%s t_avg=%.2f excluded=%d", n, order, t_avg[-1], excluded[-1])
    N = np.array(sizes, dtype=float) ** 2
    b, log_a = np.polyfit(np.log(N), np.log(t_avg), 1)
    res = ScalingResult(sizes, parse_order(order), t_avg, converged, excluded, float(np.exp(log_a)), float(b))
    if csv_path:
        _write_text(csv_path, res.csv_text())
    return res


def compare_orders(sizes, runs: int = 100, slow: str = "pure_random", fast: str = "random_sequence", **kw):
    """Scaling studies for two orders plus the mean per-size ratio of their times."""
    a = scaling_study(sizes, runs, order=slow, **kw)
    b = scaling_study(sizes, runs, order=fast, **kw)
    ratio = float(np.mean(np.array(a.t_avg) / np.array(b.t_avg)))
    return a, b, ratio


# -- odd sizes ---------------------------------------------------------------


@dataclass
class OddStudyResult:
    n: int
    p_max: int
    t_max_list: list[int]
    best_p: dict[int, Counter]
    max_seen: int

    def fraction_at_max(self, t_max: int) -> float:
        c = self.best_p[t_max]
        return c[self.p_max] / sum(c.values())

    @property
    def monotone(self) -> bool:
        fr = [self.fraction_at_max(t) for t in self.t_max_list]
        return all(x <= y for x, y in zip(fr, fr[1:]))


def odd_n_study(
    n: int,
    t_max_list=(200, 400, 800),
    runs: int = 100,
    order: str = "random_sequence",
    params: RuleParams = RuleParams(),
    seed: int = 0,
    workers: int = 1,
) -> OddStudyResult:
    """Best valid point count reached within each time limit, over ``runs`` runs.

    Each run evolves once up to the largest limit without stopping at
    stability; the best valid boundary pattern with ``t <= T`` gives the
    entry for limit ``T``. Runs share seeds across limits.
    """
    t_max_list = sorted(int(t) for t in t_max_list)
    spec = ExperimentSpec(n=n, pipeline="ABC1", order=order, runs=runs, t_max=t_max_list[-1],
                          stop_on_stable=False, seed=seed, pi0=params.pi0, pi1=params.pi1,
                          pi2=params.pi2, workers=workers).validate()
    best = {t: Counter() for t in t_max_list}
    max_seen = 0
    for i in range(runs):
        rng = make_rng(seed + i)
        g = new_grid(n, InitSpec.parse(spec.init), rng)
        tr = run(g, spec.pipeline_obj(), spec.rule_params(), order, spec.stop_spec(), rng)
        for T in t_max_list:
            ps = [r.points for r in tr.rows if r.valid and r.t <= T]
            best[T][max(ps) if ps else 0] += 1
        max_seen = max([max_seen] + [r.points for r in tr.rows if r.valid])
    return OddStudyResult(n, p_max_formula(n), t_max_list, best, max_seen)
