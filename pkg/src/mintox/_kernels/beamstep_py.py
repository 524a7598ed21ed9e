"""Reference beam-step kernel in numpy.

One decode step: add cumulative scores to the next-token rows, mask
tokens that would complete a banned sequence, and select the best k
candidates in the fixed deterministic order (score descending, then
hypothesis index, then token id). The compiled kernel in _beamstep.pyx
must match this function bit for bit; parity is enforced by tests.
"""

from __future__ import annotations

import numpy as np

_EMPTY = (np.empty(0, dtype=np.int32), np.empty(0, dtype=np.int32),
          np.empty(0, dtype=np.float64))


def beam_step(step_scores, beam_scores, k,
              child_offsets=None, child_tokens=None, child_terminal=None,
              active_offsets=None, active_nodes=None):
    """Return (hyp_idx, token, combined_score) arrays, best first.

    step_scores: (B, V) float64 next-token log-probs per live hypothesis.
    beam_scores: (B,) float64 cumulative scores.
    child_*: flat ban trie (None when unconstrained); active_* give each
    hypothesis's active trie nodes in CSR form. Candidates with
    non-finite combined score are invalid and never returned.
    """
    if k <= 0:
        return _EMPTY
    n_live, vocab = step_scores.shape
    combined = beam_scores[:, None] + step_scores
    if child_offsets is not None:
        for i in range(n_live):
            banned = [int(child_tokens[j])
                      for j in range(child_offsets[0], child_offsets[1])
                      if child_terminal[j]]
            for node in active_nodes[active_offsets[i]:active_offsets[i + 1]]:
                banned.extend(int(child_tokens[j])
                              for j in range(child_offsets[node], child_offsets[node + 1])
                              if child_terminal[j])
            if banned:
                combined[i, banned] = -np.inf
    flat = combined.ravel()
    valid = np.flatnonzero(np.isfinite(flat))
    if valid.size == 0:
        return _EMPTY
    scores = flat[valid]
    hyp = (valid // vocab).astype(np.int32)
    tok = (valid % vocab).astype(np.int32)
    order = np.lexsort((tok, hyp, -scores))[:k]
    return hyp[order], tok[order], scores[order]
