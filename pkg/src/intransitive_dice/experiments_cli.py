"""Seeded, sharded Monte-Carlo experiments and the command-line front end.

Experiment kinds: ``ties``, ``transitivity``, ``tournament``, ``clt``,
``enumerate``, ``sample``; plus the ``beats`` utility subcommand for a
one-off comparison.  Each experiment consumes an :class:`ExperimentConfig`
and produces an :class:`ExperimentReport` that serialises to JSON, CSV or
a two-column plotdata format.

Reproducibility contract: trials are split into fixed-size shards, shard
``i`` of the run owns the Philox stream ``(seed, i)``, and shard results
are aggregated in shard order.  The thread pool only changes which worker
executes a shard, never the stream it reads or the order results are
combined, so reports are byte-identical for any ``--threads`` value.  The
wall-clock time is printed for humans but deliberately excluded from the
serialised report for the same reason.

Confidence radii are 99% two-sided normal approximations,
``2.5758 * sqrt(p(1-p)/N)``; exact values carry no radius.
"""

from __future__ import annotations

import argparse
import itertools
import json
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Optional

import numpy as np

from . import enumeration, fourier_clt, tournament_stats
from .dice_core import Die, Model, beats, new_die, score_sum
from .samplers import (
    RngStream,
    sample_balanced_block,
    sample_balanced_exact,
    sample_multiset,
)

TOOL_NAME = "intransitive-dice"
TOOL_VERSION = "0.1.0"
SCHEMA_VERSION = 1

#: 99% two-sided quantile of the standard normal.
Z99 = 2.5758293035489004

KINDS = ("ties", "transitivity", "tournament", "clt", "enumerate", "sample")
FORMATS = ("json", "csv", "plotdata")
MODELS = {"balanced": Model.BALANCED_SEQUENCE, "multiset": Model.MULTISET_CANONICAL}

SHARD_SIZE = 4096


class ConfigError(ValueError):
    """Invalid experiment configuration."""


@dataclass
class ExperimentConfig:
    """Everything an experiment needs; round-trips through ``to_dict``."""

    kind: str
    ns: tuple[int, ...] = (6,)
    trials: int = 10_000
    seed: int = 0
    model: str = "balanced"
    threads: int = 1
    out: Optional[str] = None
    format: str = "json"
    m: int = 200
    k: tuple[int, ...] = (3, 4)
    epsilon: float = 0.1
    grid: int = 161
    exact: bool = False
    shard_size: int = SHARD_SIZE

    def validate(self) -> None:
        if self.kind not in KINDS:
            raise ConfigError(f"unknown experiment kind {self.kind!r}")
        if not self.ns or any(n < 1 for n in self.ns):
            raise ConfigError("--n values must be >= 1")
        if self.trials < 1:
            raise ConfigError("--trials must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("--seed must fit in 64 bits")
        if self.model not in MODELS:
            raise ConfigError(f"unknown model {self.model!r}")
        if self.threads < 1:
            raise ConfigError("--threads must be >= 1")
        if self.format not in FORMATS:
            raise ConfigError(f"unknown format {self.format!r}")
        if self.m < 2:
            raise ConfigError("--m must be >= 2")
        if any(k not in (3, 4) for k in self.k):
            raise ConfigError("--k supports only 3 and 4")
        if not 0 < self.epsilon <= 0.5:
            raise ConfigError("--epsilon must lie in (0, 0.5]")
        if self.grid < 3:
            raise ConfigError("--grid must be >= 3")
        if self.shard_size < 1:
            raise ConfigError("shard_size must be >= 1")

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "n": list(self.ns),
            "trials": self.trials,
            "seed": self.seed,
            "model": self.model,
            "threads": self.threads,
            "out": self.out,
            "format": self.format,
            "m": self.m,
            "k": list(self.k),
            "epsilon": self.epsilon,
            "grid": self.grid,
            "exact": self.exact,
            "shard_size": self.shard_size,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "ExperimentConfig":
        ns = d.get("n", 6)
        ks = d.get("k", (3, 4))
        return cls(
            kind=d["kind"],
            ns=tuple(ns) if isinstance(ns, (list, tuple)) else (int(ns),),
            trials=int(d.get("trials", 10_000)),
            seed=int(d.get("seed", 0)),
            model=d.get("model", "balanced"),
            threads=int(d.get("threads", 1)),
            out=d.get("out"),
            format=d.get("format", "json"),
            m=int(d.get("m", 200)),
            k=tuple(ks) if isinstance(ks, (list, tuple)) else (int(ks),),
            epsilon=float(d.get("epsilon", 0.1)),
            grid=int(d.get("grid", 161)),
            exact=bool(d.get("exact", False)),
            shard_size=int(d.get("shard_size", SHARD_SIZE)),
        )


@dataclass
class ExperimentReport:
    """Structured result; serialise with :func:`emit_report`.

    ``estimates`` maps metric names to ``{value, radius, trials, exact}``
    entries; ``checks`` maps check names to a status string among
    ``pass | fail | vacuous | skipped | undefined_conditional``.
    ``wall_time_s`` is for console display only and never serialised.
    """

    config: ExperimentConfig
    estimates: dict[str, dict[str, Any]] = field(default_factory=dict)
    checks: dict[str, str] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    payload: dict[str, Any] = field(default_factory=dict)
    wall_time_s: Optional[float] = None
    version: str = TOOL_VERSION

    def add_estimate(
        self,
        name: str,
        value: float,
        trials: Optional[int] = None,
        exact: bool = False,
    ) -> None:
        radius = None
        if not exact and trials:
            p = min(max(value, 0.0), 1.0)
            radius = Z99 * math.sqrt(p * (1.0 - p) / trials)
        self.estimates[name] = {
            "value": value,
            "radius": radius,
            "trials": trials,
            "exact": exact,
        }

    def to_canonical_dict(self) -> dict[str, Any]:
        # Thread count is an execution knob, not an experiment parameter:
        # results are independent of it by construction, and serialised
        # reports must stay byte-identical across --threads values.
        cfg = self.config.to_dict()
        del cfg["threads"]
        doc: dict[str, Any] = {
            "schema_version": SCHEMA_VERSION,
            "tool": {"name": TOOL_NAME, "version": self.version},
            "config": cfg,
            "estimates": self.estimates,
            "checks": self.checks,
            "notes": self.notes,
        }
        if self.payload:
            doc["payload"] = self.payload
        return doc

    @property
    def failed(self) -> bool:
        return any(status == "fail" for status in self.checks.values())


# ---------------------------------------------------------------------------
# Deterministic sharding
# ---------------------------------------------------------------------------

def _shard_counts(trials: int, shard_size: int) -> list[int]:
    full, rem = divmod(trials, shard_size)
    return [shard_size] * full + ([rem] if rem else [])


def _run_shards(
    cfg: ExperimentConfig,
    jobs: list[tuple[int, Callable[[], Any]]],
) -> list[Any]:
    """Run (stream-tagged) shard jobs, returning results in job order."""
    if cfg.threads <= 1 or len(jobs) <= 1:
        return [job() for _, job in jobs]
    with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
        futures = [pool.submit(job) for _, job in jobs]
        return [f.result() for f in futures]


def _pair_scores(a_faces: np.ndarray, b_faces: np.ndarray) -> np.ndarray:
    """Doubled score sums for row-aligned batches of dice.

    Row p compares die ``a_faces[p]`` against ``b_faces[p]``; the result is
    ``sum_t 2 f_A(b_t) - n^2`` per row (negative iff A beats B).
    """
    pairs, n = a_faces.shape
    width = n + 2
    offsets = np.arange(pairs, dtype=np.int64) * width
    flat = (a_faces.astype(np.int64) + offsets[:, None]).ravel()
    counts = np.bincount(flat, minlength=pairs * width).reshape(pairs, width)
    cum = np.cumsum(counts, axis=1)
    values = np.arange(1, n + 1)
    f2 = 2 * cum[:, values - 1] + counts[:, values]  # (pairs, n), f2 at value v
    row_idx = np.arange(pairs)[:, None]
    gathered = f2[row_idx, b_faces.astype(np.int64) - 1]
    return gathered.sum(axis=1, dtype=np.int64) - n * n


def _sample_block_any_model(
    cfg: ExperimentConfig, n: int, count: int, stream: RngStream
) -> tuple[np.ndarray, int]:
    """(count, n) faces in the configured model plus attempt count."""
    if cfg.model == "balanced":
        block, stats = sample_balanced_block(n, count, stream)
        return block, stats.attempts
    gen = stream.generator()
    rows = np.empty((count, n), dtype=np.int64)
    for i in range(count):
        rows[i] = sample_multiset(n, gen).faces
    return rows, count


# ---------------------------------------------------------------------------
# Experiment drivers
# ---------------------------------------------------------------------------

def run_ties(cfg: ExperimentConfig) -> ExperimentReport:
    cfg.validate()
    report = ExperimentReport(config=cfg)
    stream_counter = itertools.count()
    frequencies: list[tuple[int, float]] = []
    for n in cfg.ns:
        if cfg.exact:
            census = enumeration.exact_pairwise_stats(n, MODELS[cfg.model])
            value = float(census.tie_probability)
            report.add_estimate(f"tie_frequency_n{n}", value, exact=True)
            report.notes.append(
                f"n={n}: exact tie probability "
                f"{census.tie_probability.numerator}/{census.tie_probability.denominator}"
            )
            frequencies.append((n, value))
            continue
        shard_ids = [
            (next(stream_counter), c)
            for c in _shard_counts(cfg.trials, cfg.shard_size)
        ]

        def make_job(stream_idx: int, count: int, n: int = n):
            def job() -> tuple[int, int]:
                stream = RngStream(cfg.seed, stream_idx)
                block, attempts = _sample_block_any_model(
                    cfg, n, 2 * count, stream
                )
                scores = _pair_scores(block[0::2], block[1::2])
                return int((scores == 0).sum()), attempts
            return job

        results = _run_shards(
            cfg, [(sid, make_job(sid, c)) for sid, c in shard_ids]
        )
        tie_count = sum(r[0] for r in results)
        attempts = sum(r[1] for r in results)
        value = tie_count / cfg.trials
        report.add_estimate(f"tie_frequency_n{n}", value, trials=cfg.trials)
        if cfg.model == "balanced":
            report.add_estimate(
                f"sampler_acceptance_n{n}",
                 2 * cfg.trials / attempts,
                exact=False,
            )
        frequencies.append((n, value))
    if len(cfg.ns) >= 2:
        decreasing = all(
            frequencies[i][1] > frequencies[i + 1][1]
            for i in range(len(frequencies) - 1)
        )
        report.checks["monotone_decrease"] = "pass" if decreasing else "fail"
    return report


def run_transitivity(cfg: ExperimentConfig) -> ExperimentReport:
    cfg.validate()
    report = ExperimentReport(config=cfg)
    n = cfg.ns[0]
    if cfg.exact:
        try:
            value = enumeration.exact_triple_stats(n, MODELS[cfg.model])
        except enumeration.UndefinedConditionalError:
            report.checks["conditional_defined"] = "undefined_conditional"
            return report
        report.add_estimate(
            "conditional_transitivity", float(value), exact=True
        )
        report.notes.append(
            f"exact value {value.numerator}/{value.denominator}"
        )
        report.checks["conditional_defined"] = "pass"
        return report
    shard_ids = [
        (i, c) for i, c in enumerate(_shard_counts(cfg.trials, cfg.shard_size))
    ]

    def make_job(stream_idx: int, count: int):
        def job() -> tuple[int, int]:
            stream = RngStream(cfg.seed, stream_idx)
            block, _ = _sample_block_any_model(cfg, n, 3 * count, stream)
            a, b, c = block[0::3], block[1::3], block[2::3]
            sab = _pair_scores(a, b)
            sbc = _pair_scores(b, c)
            sac = _pair_scores(a, c)
            conditioned = (sab < 0) & (sbc < 0)
            successes = conditioned & (sac < 0)
            return int(successes.sum()), int(conditioned.sum())
        return job

    results = _run_shards(cfg, [(sid, make_job(sid, c)) for sid, c in shard_ids])
    successes = sum(r[0] for r in results)
    conditioned = sum(r[1] for r in results)
    report.add_estimate(
        "conditioning_rate", conditioned / cfg.trials, trials=cfg.trials
    )
    if conditioned == 0:
        report.checks["conditional_defined"] = "undefined_conditional"
        return report
    report.checks["conditional_defined"] = "pass"
    report.add_estimate(
        "conditional_transitivity", successes / conditioned, trials=conditioned
    )
    return report


def run_tournament(cfg: ExperimentConfig) -> ExperimentReport:
    cfg.validate()
    report = ExperimentReport(config=cfg)
    n = cfg.ns[0]
    block, _ = _sample_block_any_model(cfg, n, cfg.m, RngStream(cfg.seed, 0))
    model = MODELS[cfg.model]
    dice = [Die(tuple(int(v) for v in row), n, model) for row in block]
    t = tournament_stats.build_tournament(dice)
    census = tournament_stats.triple_census(t)
    complete = census.transitive + census.intransitive
    report.add_estimate(
        "tie_pair_fraction",
        len(t.tie_pairs) / math.comb(cfg.m, 2),
        trials=math.comb(cfg.m, 2),
    )
    if complete:
        report.add_estimate(
            "intransitive_fraction",
            census.intransitive / complete,
            trials=complete,
        )
    report.add_estimate(
        "incomplete_fraction", census.incomplete / census.total, trials=census.total
    )
    conc = tournament_stats.outdegree_concentration(t, cfg.epsilon)
    report.add_estimate(
        "concentrated_fraction", conc.concentrated_fraction, trials=cfg.m
    )
    report.add_estimate("mean_out_degree", conc.mean, exact=False)
    path2 = tournament_stats.path2_identity_check(t)
    if path2.holds is None:
        report.checks["path2_identity"] = "skipped"
        report.notes.append(
            "path2 identity not asserted (ties present): "
            f"paths={path2.paths_direct} sum_d+d-={path2.sum_out_in} "
            f"triangle_form={path2.triangle_form}"
        )
    else:
        report.checks["path2_identity"] = "pass" if path2.holds else "fail"
    for k in cfg.k:
        pat = tournament_stats.pattern_frequencies(
            t, k, rng=RngStream(cfg.seed, 2**32 + k)
        )
        ref = pat.reference()
        for name, freq in pat.frequencies().items():
            report.add_estimate(
                f"pattern_k{k}_{name}", freq, trials=pat.tie_free
            )
            report.add_estimate(
                f"pattern_k{k}_{name}_reference", ref[name], exact=True
            )
        report.notes.append(
            f"k={k}: {pat.tie_free} tie-free subsets of {pat.examined} examined "
            f"({'exhaustive' if pat.exhaustive else 'sampled'})"
        )
    return report


def run_clt(cfg: ExperimentConfig) -> ExperimentReport:
    cfg.validate()
    report = ExperimentReport(config=cfg)
    tail_cs = (1.0, 1.5)
    defect_medians: list[tuple[int, float]] = []
    for n_index, n in enumerate(cfg.ns):
        block, _ = _sample_block_any_model(
            cfg, n, cfg.trials, RngStream(cfg.seed, n_index)
        )
        model = MODELS[cfg.model]
        dice = [Die(tuple(int(v) for v in row), n, model) for row in block]
        maxnorm_failures = 0
        box_statuses: set[str] = set()
        defects: list[float] = []
        mode_errors: list[float] = []
        tie_probs: list[float] = []
        tail_ok = tail_skipped = tail_failed = 0
        convolution_skipped = False
        census = None
        if n <= enumeration.PAIRWISE_CAP:
            census = enumeration.exact_pairwise_stats(n, Model.BALANCED_SEQUENCE)
            census_index = {d.faces: i for i, d in enumerate(census.dice)}
            enum_matches = True
        for die in dice:
            if n >= 2:
                mn = fourier_clt.maxnorm_check(die)
                if not mn.passes:
                    maxnorm_failures += 1
            box = fourier_clt.box_bound_report(die, grid_points=cfg.grid)
            if box.vacuous:
                box_statuses.add("vacuous")
            else:
                box_statuses.add("pass" if box.holds else "fail")
            if n > fourier_clt.CONVOLUTION_CAP:
                convolution_skipped = True
                continue
            pmf = fourier_clt.convolve_exact(die)
            fit = fourier_clt.gaussian_compare(pmf)
            if not fit.degenerate:
                defects.append(fit.symmetry_defect_norm)
                if fit.mode_relative_error is not None:
                    mode_errors.append(fit.mode_relative_error)
            cond = fourier_clt.conditional_beat_prob(die, pmf=pmf)
            tie_probs.append(float(cond[1]))
            if census is not None:
                key = tuple(sorted(die.faces))
                per = census.per_die[census_index[key]]
                # per_die is (win, loss, tie); cond is (win, tie, loss).
                if per != (cond[0], cond[2], cond[1]):
                    enum_matches = False
            if n >= 2:
                for c_param in tail_cs:
                    tr = fourier_clt.tail_check(die, c_param, pmf=pmf)
                    if tr.holds is None:
                        tail_skipped += 1
                    elif tr.holds:
                        tail_ok += 1
                    else:
                        tail_failed += 1
        report.add_estimate(
            f"maxnorm_failure_fraction_n{n}",
            maxnorm_failures / len(dice),
            trials=len(dice),
        )
        if box_statuses == {"vacuous"}:
            report.checks[f"box_bound_n{n}"] = "vacuous"
        elif "fail" in box_statuses:
            report.checks[f"box_bound_n{n}"] = "fail"
        else:
            report.checks[f"box_bound_n{n}"] = "pass"
        if convolution_skipped:
            report.checks[f"convolution_n{n}"] = "skipped"
            report.notes.append(
                f"n={n} above convolution cap {fourier_clt.CONVOLUTION_CAP}; "
                "exact-lattice checks skipped"
            )
            continue
        if defects:
            med = float(np.median(defects))
            defect_medians.append((n, med))
            report.add_estimate(f"median_symmetry_defect_n{n}", med, exact=False)
        if mode_errors:
            report.add_estimate(
                f"median_mode_relative_error_n{n}",
                float(np.median(mode_errors)),
                exact=False,
            )
        if tie_probs:
            med_tie = float(np.median(tie_probs))
            report.add_estimate(f"median_conditional_tie_n{n}", med_tie, exact=False)
            slack_bound = 1e18 * math.log(n) ** 2.5 / n if n > 1 else math.inf
            report.notes.append(
                f"n={n}: median conditional tie {med_tie:.3e} vs slack bound "
                f"{slack_bound:.3e} (reported, not asserted)"
            )
        if n >= 2:
            report.checks[f"tail_bound_n{n}"] = (
                "fail" if tail_failed else ("pass" if tail_ok else "skipped")
            )
        if census is not None:
            report.checks[f"conditional_matches_enumeration_n{n}"] = (
                "pass" if enum_matches else "fail"
            )
    if len(defect_medians) >= 2:
        decreasing = all(
            defect_medians[i][1] > defect_medians[i + 1][1]
            for i in range(len(defect_medians) - 1)
        )
        report.checks["symmetry_defect_decreasing"] = (
            "pass" if decreasing else "fail"
        )
    return report


def run_enumerate(cfg: ExperimentConfig) -> ExperimentReport:
    cfg.validate()
    report = ExperimentReport(config=cfg)
    n = cfg.ns[0]
    dice = enumeration.enumerate_multiset(n)
    payload: dict[str, Any] = {"dice": [list(d.faces) for d in dice]}
    report.add_estimate("multiset_count", float(len(dice)), exact=True)
    if cfg.model == "balanced":
        payload["multiplicities"] = [
            enumeration.multiplicity(d) for d in dice
        ]
        count = enumeration.count_balanced(n)
        report.add_estimate("balanced_count", float(count), exact=True)
        report.notes.append(f"count_balanced({n}) = {count}")
    report.payload = payload
    return report


def run_sample(cfg: ExperimentConfig) -> ExperimentReport:
    cfg.validate()
    report = ExperimentReport(config=cfg)
    n = cfg.ns[0]
    payload: dict[str, Any] = {}
    if cfg.model == "multiset":
        gen = RngStream(cfg.seed, 0).generator()
        dice = [sample_multiset(n, gen) for _ in range(cfg.trials)]
        payload["dice"] = [list(d.faces) for d in dice]
    elif cfg.exact:
        gen = RngStream(cfg.seed, 0).generator()
        dice = [sample_balanced_exact(n, gen) for _ in range(cfg.trials)]
        payload["dice"] = [list(d.faces) for d in dice]
    else:
        block, stats = sample_balanced_block(n, cfg.trials, RngStream(cfg.seed, 0))
        payload["dice"] = [[int(v) for v in row] for row in block]
        report.add_estimate(
            "acceptance_rate", stats.acceptance_rate, exact=False
        )
        report.notes.append(
            f"rejection attempts {stats.attempts} for {stats.accepts} accepts; "
            f"lower bound n^-1.5/4 = {n ** -1.5 / 4:.3e}"
        )
    report.payload = payload
    return report


RUNNERS: dict[str, Callable[[ExperimentConfig], ExperimentReport]] = {
    "ties": run_ties,
    "transitivity": run_transitivity,
    "tournament": run_tournament,
    "clt": run_clt,
    "enumerate": run_enumerate,
    "sample": run_sample,
}


def run_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    start = time.perf_counter()
    report = RUNNERS[cfg.kind](cfg)
    report.wall_time_s = time.perf_counter() - start
    return report


# ---------------------------------------------------------------------------
# Serialisation
# ---------------------------------------------------------------------------

def emit_report(report: ExperimentReport, fmt: str, path: Optional[str] = None) -> str:
    """Serialise a report; deterministic bytes for identical (config, seed).

    ``json`` is the canonical format (sorted keys); ``csv`` flattens the
    same content; ``plotdata`` emits two-column series for metrics swept
    over n, one row per n.
    """
    if fmt == "json":
        text = json.dumps(
            report.to_canonical_dict(), sort_keys=True, indent=2
        ) + "\n"
    elif fmt == "csv":
        lines = ["section,name,value,radius,trials,exact,status"]
        for key, value in sorted(report.to_canonical_dict()["config"].items()):
            lines.append(f"config,{key},{_csv_cell(value)},,,,")
        for name in sorted(report.estimates):
            e = report.estimates[name]
            lines.append(
                "estimate,{},{},{},{},{},".format(
                    name,
                    _csv_cell(e["value"]),
                    _csv_cell(e["radius"]),
                    _csv_cell(e["trials"]),
                    _csv_cell(e["exact"]),
                )
            )
        for name in sorted(report.checks):
            lines.append(f"check,{name},,,,,{report.checks[name]}")
        text = "\n".join(lines) + "\n"
    elif fmt == "plotdata":
        lines = [
            f"# {TOOL_NAME} {report.version} kind={report.config.kind} "
            f"seed={report.config.seed}"
        ]
        series: dict[str, list[tuple[int, float]]] = {}
        singles: list[tuple[str, float]] = []
        for name in sorted(report.estimates):
            value = report.estimates[name]["value"]
            stem, _, suffix = name.rpartition("_n")
            if stem and suffix.isdigit():
                series.setdefault(stem, []).append((int(suffix), value))
            else:
                singles.append((name, value))
        for stem in sorted(series):
            lines.append(f"# series: {stem}")
            for x, y in sorted(series[stem]):
                lines.append(f"{x} {_plot_num(y)}")
        if singles:
            lines.append("# series: scalars (index value; names follow)")
            for i, (name, value) in enumerate(singles):
                lines.append(f"# {i}: {name}")
            for i, (name, value) in enumerate(singles):
                lines.append(f"{i} {_plot_num(value)}")
        text = "\n".join(lines) + "\n"
    else:
        raise ConfigError(f"unknown format {fmt!r}")
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return text


def _csv_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (list, tuple)):
        return '"' + json.dumps(list(value)) + '"'
    return str(value)


def _plot_num(value: float) -> str:
    return repr(float(value))


# ---------------------------------------------------------------------------
# CLI
# ---------------------------------------------------------------------------

def _parse_int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(",") if part)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad integer list {text!r}") from exc


def _add_common(sub: argparse.ArgumentParser, default_trials: int) -> None:
    sub.add_argument("--n", type=_parse_int_list, default=(6,),
                     help="side count, or comma list for sweeps (e.g. 30,60,120)")
    sub.add_argument("--trials", type=int, default=default_trials)
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--model", choices=sorted(MODELS), default="balanced")
    sub.add_argument("--threads", type=int, default=1)
    sub.add_argument("--out", default=None, help="output path (default stdout)")
    sub.add_argument("--format", choices=FORMATS, default="json")
    sub.add_argument("--exact", action="store_true",
                     help="exact enumeration instead of Monte Carlo (small n)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=TOOL_NAME,
        description="Intransitive dice experiments with reproducible seeding.",
    )
    parser.add_argument("--version", action="version",
                        version=f"{TOOL_NAME} {TOOL_VERSION}")
    subs = parser.add_subparsers(dest="command", required=True)

    for kind, trials, blurb in (
        ("sample", 10, "draw random dice and report them"),
        ("ties", 10_000, "estimate or enumerate the tie probability"),
        ("transitivity", 10_000,
         "P(A beats C) conditioned on A beats B beats C"),
        ("enumerate", 1, "list every die at small n, with multiplicities"),
    ):
        sub = subs.add_parser(kind, help=blurb)
        _add_common(sub, trials)

    tournament = subs.add_parser(
        "tournament", help="sample one tournament and census its structure"
    )
    _add_common(tournament, 1)
    tournament.add_argument("--m", type=int, default=200,
                            help="number of dice in the tournament")
    tournament.add_argument("--k", type=_parse_int_list, default=(3, 4),
                            help="pattern sizes to census (3 and/or 4)")
    tournament.add_argument("--epsilon", type=float, default=0.1,
                            help="out-degree concentration window half-width")

    clt = subs.add_parser(
        "clt", help="Gaussian fit and tail checks for the pair statistic"
    )
    _add_common(clt, 20)
    clt.add_argument("--grid", type=int, default=161,
                     help="grid resolution per axis for the box-bound sweep")

    beats_cmd = subs.add_parser(
        "beats", help="compare two explicit dice, e.g. beats 1,1,4,4 1,3,3,3"
    )
    beats_cmd.add_argument("die_a", type=_parse_int_list)
    beats_cmd.add_argument("die_b", type=_parse_int_list)
    beats_cmd.add_argument("--model", choices=sorted(MODELS), default="balanced")
    beats_cmd.add_argument("--format", choices=FORMATS, default="json")
    beats_cmd.add_argument("--out", default=None)
    return parser


def _cmd_beats(args: argparse.Namespace) -> int:
    model = MODELS[args.model]
    a = new_die(args.die_a, model)
    b = new_die(args.die_b, model)
    outcome = beats(a, b)
    doc = {
        "a": list(a.faces),
        "b": list(b.faces),
        "greater": outcome.greater,
        "less": outcome.less,
        "equal": outcome.equal,
        "verdict": outcome.verdict.value,
        "score_sum_doubled": score_sum(a, b),
    }
    if args.format == "json":
        text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    else:
        text = "".join(f"{k},{v}\n" for k, v in sorted(doc.items()))
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    cfg = ExperimentConfig(
        kind=args.command,
        ns=args.n,
        trials=args.trials,
        seed=args.seed,
        model=args.model,
        threads=args.threads,
        out=args.out,
        format=args.format,
        exact=args.exact,
    )
    if args.command == "tournament":
        cfg.m = args.m
        cfg.k = args.k
        cfg.epsilon = args.epsilon
    if args.command == "clt":
        cfg.grid = args.grid
    cfg.validate()
    return cfg


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "beats":
            return _cmd_beats(args)
        cfg = config_from_args(args)
        report = run_experiment(cfg)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = emit_report(report, cfg.format, cfg.out)
    if cfg.out:
        print(f"wrote {cfg.out} ({len(text)} bytes) "
              f"in {report.wall_time_s:.2f}s", file=sys.stderr)
    else:
        sys.stdout.write(text)
        print(f"wall time {report.wall_time_s:.2f}s", file=sys.stderr)
    for name, status in sorted(report.checks.items()):
        print(f"check {name}: {status}", file=sys.stderr)
    return 1 if report.failed else 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
