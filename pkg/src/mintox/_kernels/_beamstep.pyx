# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled beam-step kernel.

Bit-for-bit equivalent to beamstep_py.beam_step: same masking, same
validity rule, same (score desc, hyp, token) candidate order. The trie
walk stamps banned tokens into a per-call scratch array instead of
building Python sets, and selection keeps a bounded, sorted top-k.
"""

from libc.math cimport isfinite

import numpy as np


def beam_step(double[:, ::1] step_scores, double[::1] beam_scores, Py_ssize_t k,
              int[::1] child_offsets=None, int[::1] child_tokens=None,
              unsigned char[::1] child_terminal=None,
              int[::1] active_offsets=None, int[::1] active_nodes=None):
    cdef Py_ssize_t n_live = step_scores.shape[0]
    cdef Py_ssize_t vocab = step_scores.shape[1]
    cdef Py_ssize_t cap = k if k < n_live * vocab else n_live * vocab
    if k <= 0:
        cap = 0
    out_hyp = np.empty(cap, dtype=np.int32)
    out_tok = np.empty(cap, dtype=np.int32)
    out_score = np.empty(cap, dtype=np.float64)
    if cap == 0:
        return out_hyp, out_tok, out_score

    stamp_arr = np.zeros(vocab, dtype=np.longlong)
    cdef long long[::1] stamp = stamp_arr
    cdef int[::1] top_hyp = out_hyp
    cdef int[::1] top_tok = out_tok
    cdef double[::1] top_score = out_score

    cdef Py_ssize_t m = 0          # entries currently held, best first
    cdef Py_ssize_t i, t, j, p, node, lo, hi
    cdef long long gen
    cdef double base, s
    cdef bint banned_any = child_offsets is not None

    for i in range(n_live):
        gen = i + 1
        if banned_any:
            lo = child_offsets[0]
            hi = child_offsets[1]
            for j in range(lo, hi):
                if child_terminal[j]:
                    stamp[child_tokens[j]] = gen
            for p in range(active_offsets[i], active_offsets[i + 1]):
                node = active_nodes[p]
                for j in range(child_offsets[node], child_offsets[node + 1]):
                    if child_terminal[j]:
                        stamp[child_tokens[j]] = gen
        base = beam_scores[i]
        for t in range(vocab):
            if banned_any and stamp[t] == gen:
                continue
            s = base + step_scores[i, t]
            if not isfinite(s):
                continue
            # Candidates arrive in increasing (hyp, token); a score tie
            # with the current worst therefore never displaces it.
            if m == cap and s <= top_score[m - 1]:
                continue
            p = m if m < cap else cap - 1
            while p > 0 and top_score[p - 1] < s:
                top_hyp[p] = top_hyp[p - 1]
                top_tok[p] = top_tok[p - 1]
                top_score[p] = top_score[p - 1]
                p -= 1
            top_hyp[p] = <int> i
            top_tok[p] = <int> t
            top_score[p] = s
            if m < cap:
                m += 1

    return out_hyp[:m], out_tok[:m], out_score[:m]
