"""Benchmark the beam-step kernel: compiled extension vs numpy fallback.

Times one masked top-k selection over a (beam, vocab) score matrix, the
operation the decoder calls once per output token. Run from the repo
root after installing the package:

    python3 benchmarks/bench_beamstep.py
    python3 benchmarks/bench_beamstep.py --beam 8 --vocab 32000 --repeats 200
"""

from __future__ import annotations

import argparse
import statistics
import time

import numpy as np

from mintox import BanSet
from mintox._kernels import beam_step_compiled, beam_step_python


def build_case(rng: np.random.Generator, beam: int, vocab: int, ban: bool):
    step = rng.uniform(-10.0, 0.0, size=(beam, vocab))
    beam_scores = rng.uniform(-30.0, 0.0, size=beam)
    if not ban:
        return (step, beam_scores), None
    seqs = sorted({tuple(int(t) for t in rng.integers(0, vocab, size=n))
                   for n in (1, 2, 2, 3) for _ in range(8)})
    trie = BanSet(seqs)
    n_nodes = len(trie.child_offsets) - 1
    offsets = np.zeros(beam + 1, dtype=np.int32)
    flat: list[int] = []
    for i in range(beam):
        picks = rng.integers(1, n_nodes, size=2) if n_nodes > 1 else []
        flat.extend(int(p) for p in sorted(set(picks)))
        offsets[i + 1] = len(flat)
    return (step, beam_scores), (trie, offsets, np.asarray(flat, dtype=np.int32))


def run(fn, case, trie_part, k: int, repeats: int) -> float:
    step, beam_scores = case
    if trie_part is None:
        args = (step, beam_scores, k)
    else:
        trie, offsets, flat = trie_part
        args = (step, beam_scores, k, trie.child_offsets, trie.child_tokens,
                trie.child_terminal, offsets, flat)
    fn(*args)  # warmup and correctness touch
    samples = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        samples.append(time.perf_counter() - t0)
    return statistics.median(samples)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--beam", type=int, default=5)
    parser.add_argument("--vocab", type=int, nargs="*",
                        default=[256, 4096, 32000, 256000])
    parser.add_argument("--repeats", type=int, default=100)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    if beam_step_compiled is None:
        print("compiled extension not available; nothing to compare")
        return 1

    rng = np.random.default_rng(args.seed)
    k = 2 * args.beam
    print(f"beam={args.beam} k={k} repeats={args.repeats} "
          f"(median wall time per call)")
    header = f"{'vocab':>8} {'ban':>4} {'python':>12} {'compiled':>12} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for vocab in args.vocab:
        for ban in (False, True):
            case, trie_part = build_case(rng, args.beam, vocab, ban)
            t_py = run(beam_step_python, case, trie_part, k, args.repeats)
            t_cc = run(beam_step_compiled, case, trie_part, k, args.repeats)
            print(f"{vocab:>8} {str(ban):>4} {t_py * 1e6:>10.1f}us "
                  f"{t_cc * 1e6:>10.1f}us {t_py / t_cc:>7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
