"""Seeded experiment sweeps: many games, CSV rows, summary statistics.

Row order and content are fully determined by the configuration, so a
sweep rerun with identical flags reproduces the same rows. wall_ms is
the one cell that is a measurement rather than an outcome; rows built
with timing="none" leave it empty so the whole file is reproducible.
"""

from __future__ import annotations

import csv
import math
import statistics
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from .prng import derive_game_seed
from .runtime import GameRecord, run_game

CSV_COLUMNS = (
    "players", "seed", "score", "hints", "efficiency", "turns",
    "aic_installed", "aic_retracted", "violations", "wall_ms",
)


@dataclass(frozen=True)
class SweepConfig:
    sizes: Tuple[int, ...] = (2, 3, 4, 5)
    games: int = 100
    base_seed: int = 2026
    policy: str = "model"
    use_aics: bool = True
    counterfactual: bool = False
    jobs: int = 1

    def tasks(self) -> Iterator[Tuple[int, int]]:
        for n in self.sizes:
            for i in range(self.games):
                yield n, derive_game_seed(self.base_seed, n, i)


def row_for(record: GameRecord, timing: str = "wall") -> dict:
    eff = record.efficiency
    return {
        "players": record.players,
        "seed": record.seed,
        "score": record.score,
        "hints": record.hints,
        "efficiency": "" if eff is None else f"{eff:.4f}",
        "turns": record.turns,
        "aic_installed": record.aic_installed,
        "aic_retracted": record.aic_retracted,
        "violations": record.violations,
        "wall_ms": "" if timing == "none" else f"{record.wall_ms:.3f}",
    }


def _run_task(task: Tuple[int, int, str, bool, bool]) -> GameRecord:
    players, seed, policy, use_aics, counterfactual = task
    return run_game(players, seed, policy=policy, use_aics=use_aics,
                    counterfactual=counterfactual)


def sweep_records(cfg: SweepConfig) -> Iterator[GameRecord]:
    """Game records for the whole sweep, in configuration order."""
    tasks = [(n, seed, cfg.policy, cfg.use_aics, cfg.counterfactual)
             for n, seed in cfg.tasks()]
    if cfg.jobs > 1:
        import multiprocessing

        with multiprocessing.Pool(cfg.jobs) as pool:
            yield from pool.imap(_run_task, tasks, chunksize=1)
    else:
        for task in tasks:
            yield _run_task(task)


def write_csv(rows: Iterable[dict], path: str) -> int:
    """Write sweep rows; flushed per row so a crash keeps the prefix."""
    n = 0
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
            fh.flush()
            n += 1
    return n


def summarise(rows: Sequence[dict]) -> Dict[int, dict]:
    """Per-size five-number score summary plus efficiency and upkeep."""
    by_size: Dict[int, List[dict]] = {}
    for row in rows:
        by_size.setdefault(int(row["players"]), []).append(row)
    out: Dict[int, dict] = {}
    for n, group in sorted(by_size.items()):
        scores = [int(r["score"]) for r in group]
        effs = [float(r["efficiency"]) for r in group if r["efficiency"] != ""]
        q1, med, q3 = (statistics.quantiles(scores, n=4, method="inclusive")
                       if len(scores) > 1 else (scores[0],) * 3)
        out[n] = {
            "games": len(group),
            "score_mean": statistics.mean(scores),
            "score_min": min(scores),
            "score_q1": q1,
            "score_median": med,
            "score_q3": q3,
            "score_max": max(scores),
            "efficiency_median": statistics.median(effs) if effs else None,
            "violations": sum(int(r["violations"]) for r in group),
        }
    return out


def summary_lines(summary: Dict[int, dict]) -> List[str]:
    lines = []
    for n, s in summary.items():
        eff = s["efficiency_median"]
        lines.append(
            f"players={n} games={s['games']} "
            f"score mean={s['score_mean']:.2f} "
            f"five-num=[{s['score_min']}, {s['score_q1']:.1f}, "
            f"{s['score_median']:.1f}, {s['score_q3']:.1f}, {s['score_max']}] "
            f"efficiency median={'n/a' if eff is None else f'{eff:.3f}'} "
            f"violations={s['violations']}"
        )
    return lines


def sign_test_p(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Two-sided exact sign test over paired samples; ties are dropped."""
    if len(xs) != len(ys):
        raise ValueError("paired samples differ in length")
    wins = sum(1 for x, y in zip(xs, ys) if x > y)
    losses = sum(1 for x, y in zip(xs, ys) if x < y)
    n = wins + losses
    if n == 0:
        return 1.0
    k = min(wins, losses)
    tail = sum(math.comb(n, i) for i in range(k + 1)) / 2 ** n
    return min(1.0, 2.0 * tail)
