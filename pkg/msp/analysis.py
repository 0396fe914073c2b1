"""
Random-string model of minimum substring partitioning.

Covers the clean-probability dynamic program and the minimum-word probabilities
built on it, the capacity recurrence alpha(k, p), break-count simulation, the
P1/P2 break probabilities and the total partition size estimate. Words are
tuples of symbol codes 0..3 (A, C, G, T), most significant first.
"""

from __future__ import annotations

import logging
import math
from typing import Iterable, Literal, Optional, Sequence, Union

import numpy as np
import pandas as pd
from numpy.lib.stride_tricks import sliding_window_view

from configs.config import MAX_EXHAUSTIVE_P
from msp.errors import InvalidArgumentError
from msp.minimizer import simple_scan
from msp.schemas import DPTable, ModelEstimate, P1Report, SymbolDistribution
from msp.sequence_core import ALPHABET, PackedSequence

logger = logging.getLogger(__name__)

Word = tuple[int, ...]
WordLike = Union[str, Sequence[int]]

# Monte Carlo work is done in slices of this many random strings
MC_BATCH = 100_000

_TWO = np.uint64(2)


def _probabilities(dist: Optional[SymbolDistribution]) -> np.ndarray:
    return np.array((dist or SymbolDistribution.uniform()).probabilities, dtype=np.float64)


def _greater(pr: np.ndarray) -> np.ndarray:
    """gt[c] = Pr{symbol > c}."""
    return np.array([pr[c + 1 :].sum() for c in range(4)])


def parse_word(word: WordLike) -> Word:
    """Accept "ACGT" letters, "0123" digits or a sequence of codes."""
    if isinstance(word, str):
        if all(ch in "0123" for ch in word):
            return tuple(int(ch) for ch in word)
        try:
            return tuple(ALPHABET.index(ch) for ch in word.upper())
        except ValueError:
            raise InvalidArgumentError(f"word {word!r} is neither ACGT nor 0123") from None
    codes = tuple(int(c) for c in word)
    if any(c not in (0, 1, 2, 3) for c in codes):
        raise InvalidArgumentError(f"word {word!r} has codes outside 0..3")
    return codes


def format_word(code: int, m: int) -> str:
    return "".join(ALPHABET[(code >> (2 * (m - 1 - i))) & 3] for i in range(m))


def word_rank(word: WordLike) -> int:
    """0-based lexicographic rank of a word among all words of its length."""
    rank = 0
    for c in parse_word(word):
        rank = rank * 4 + c
    return rank


def predecessor(word: WordLike) -> Optional[Word]:
    """The next smaller word of the same length, or None for 0...0."""
    w = parse_word(word)
    rank = word_rank(w)
    if rank == 0:
        return None
    rank -= 1
    return tuple((rank >> (2 * (len(w) - 1 - i))) & 3 for i in range(len(w)))


def _colex_greater(a: Sequence[int], b: Sequence[int]) -> bool:
    return tuple(reversed(a)) > tuple(reversed(b))


def minstb(word: WordLike, n: int, dist: Optional[SymbolDistribution] = None) -> DPTable:
    """
    Fill the clean-probability table of a word.

    Q[n, 0] is the probability that no m-substring of a random n-string is
    lexicographically <= word. The word is processed reversed, so the case
    analysis compares suffixes of the word in colexicographic order.

    Args:
        word: target word W of length m
        n: random string length, n >= m
        dist: symbol distribution, uniform by default

    Returns:
        The (n+1) x m table with its cell counter

    Raises:
        InvalidArgumentError: m > n or an empty word
    """
    w = parse_word(word)
    m = len(w)
    if m < 1 or m > n:
        raise InvalidArgumentError(f"need 1 <= m <= n, got m={m}, n={n}")
    pr = _probabilities(dist)
    gt = _greater(pr)
    u = w[::-1]

    deep = [False] * m
    for j in range(2, m):
        deep[j] = _colex_greater(u[m - j : m - 1], u[0 : j - 1])

    Q = np.zeros((n + 1, m), dtype=np.float64)
    Q[0, :] = 1.0
    cells = m
    wm = u[m - 1]
    for i in range(n):
        row, prev = Q[i + 1], Q[i]
        if i + 1 < m:
            row[0] = 1.0
            if m > 1:
                row[1] = gt[u[0]]
            for j in range(2, m):
                row[j] = gt[u[j - 1]] + prev[j - 1] * pr[u[j - 1]]
        else:
            base = prev[0] * gt[wm] + (prev[m - 1] * pr[wm] if m > 1 else 0.0)
            row[0] = base
            for j in range(1, m):
                wj = u[j - 1]
                if wm > wj:
                    row[j] = base
                elif wm < wj:
                    row[j] = prev[0] * gt[wj] + (prev[j - 1] * pr[wj] if j > 1 else 0.0)
                elif j == 1:
                    row[j] = prev[0] * gt[wj]
                elif deep[j]:
                    row[j] = prev[0] * gt[wj] + prev[m - 1] * pr[wj]
                else:
                    row[j] = prev[0] * gt[wj] + prev[j - 1] * pr[wj]
        cells += m
    return DPTable(word=w, n=n, Q=Q, cells_filled=cells)


def clean_probability(word: WordLike, n: int, dist: Optional[SymbolDistribution] = None) -> float:
    return minstb(word, n, dist).clean_probability


def prob_min_word(word: WordLike, n: int, dist: Optional[SymbolDistribution] = None) -> float:
    """Probability that the minimum m-substring of a random n-string is exactly word."""
    previous = predecessor(word)
    upper = 1.0 if previous is None else clean_probability(previous, n, dist)
    return upper - clean_probability(word, n, dist)


def _all_words(m: int) -> np.ndarray:
    codes = np.arange(4**m, dtype=np.int64)
    shifts = 2 * np.arange(m - 1, -1, -1, dtype=np.int64)
    return ((codes[:, None] >> shifts) & 3).astype(np.int64)


def clean_probabilities(m: int, n: int, dist: Optional[SymbolDistribution] = None) -> np.ndarray:
    """
    Clean probability of every m-word at once, indexed by word rank.

    Runs the same recurrence as `minstb` with each cell vectorised over all 4^m words.
    """
    if m < 1 or m > n:
        raise InvalidArgumentError(f"need 1 <= m <= n, got m={m}, n={n}")
    pr = _probabilities(dist)
    gt = _greater(pr)
    u = _all_words(m)[:, ::-1]
    n_words = u.shape[0]

    deep = np.zeros((m, n_words), dtype=bool)
    for j in range(2, m):
        length = j - 1
        weights = 4 ** np.arange(length, dtype=np.int64)  # reversed tuples, last element most significant
        deep[j] = (u[:, m - j : m - 1] * weights).sum(axis=1) > (u[:, 0 : j - 1] * weights).sum(axis=1)

    prev = np.ones((m, n_words), dtype=np.float64)
    wm = u[:, m - 1]
    for i in range(n):
        row = np.empty_like(prev)
        if i + 1 < m:
            row[0] = 1.0
            if m > 1:
                row[1] = gt[u[:, 0]]
            for j in range(2, m):
                row[j] = gt[u[:, j - 1]] + prev[j - 1] * pr[u[:, j - 1]]
        else:
            base = prev[0] * gt[wm] + (prev[m - 1] * pr[wm] if m > 1 else 0.0)
            row[0] = base
            for j in range(1, m):
                wj = u[:, j - 1]
                equal_tail = prev[m - 1] if j > 1 else 0.0
                equal_same = prev[j - 1] if j > 1 else 0.0
                equal = prev[0] * gt[wj] + np.where(deep[j], equal_tail, equal_same) * pr[wj]
                less = prev[0] * gt[wj] + (prev[j - 1] * pr[wj] if j > 1 else 0.0)
                row[j] = np.where(wm > wj, base, np.where(wm < wj, less, equal))
        prev = row
    return prev[0]


def min_word_probabilities(m: int, n: int, dist: Optional[SymbolDistribution] = None) -> np.ndarray:
    """Probability of each m-word, by rank, being the minimum m-substring of a random n-string."""
    clean = clean_probabilities(m, n, dist)
    return np.concatenate([[1.0], clean[:-1]]) - clean


def random_reads(
    rng: np.random.Generator, count: int, length: int, dist: Optional[SymbolDistribution] = None
) -> np.ndarray:
    """count x length matrix of random symbol codes."""
    if dist is None:
        return rng.integers(0, 4, size=(count, length), dtype=np.uint8)
    return rng.choice(4, size=(count, length), p=_probabilities(dist)).astype(np.uint8)


def enumerate_strings(length: int) -> np.ndarray:
    """Every string of the given length, one per row, in lexicographic order."""
    return _all_words(length).astype(np.uint8)


def string_weights(strings: np.ndarray, dist: Optional[SymbolDistribution] = None) -> np.ndarray:
    """Probability of each row under the symbol distribution."""
    return _probabilities(dist)[strings].prod(axis=1)


def p_substring_codes(reads: np.ndarray, p: int, canonical: bool = False) -> np.ndarray:
    """Integer code of every p-substring of every read, shape (reads, length - p + 1)."""
    n_sub = reads.shape[1] - p + 1
    symbols = reads.astype(np.uint64)
    codes = np.zeros((reads.shape[0], n_sub), dtype=np.uint64)
    for i in range(p):
        codes = (codes << _TWO) | symbols[:, i : i + n_sub]
    if canonical:
        rc = np.zeros_like(codes)
        for i in range(p):
            rc |= (np.uint64(3) - symbols[:, i : i + n_sub]) << np.uint64(2 * i)
        codes = np.minimum(codes, rc)
    return codes


def window_minima(codes: np.ndarray, window: int) -> np.ndarray:
    return sliding_window_view(codes, window, axis=1).min(axis=-1)


def count_breaks(reads: np.ndarray, k: int, p: int, canonical: bool = False) -> np.ndarray:
    """Breaks per read: positions where consecutive k-mers change minimum p-substring."""
    minima = window_minima(p_substring_codes(reads, p, canonical), k - p + 1)
    return (minima[:, 1:] != minima[:, :-1]).sum(axis=1)


def _check_kp(k: int, p: int) -> None:
    if p < 1 or p > k:
        raise InvalidArgumentError(f"need 1 <= p <= k, got p={p}, k={k}")


def simulate_breaks(
    m: int,
    k: int,
    p: int,
    trials: int,
    seed: int = 0,
    dist: Optional[SymbolDistribution] = None,
    engine: Literal["vectorized", "scan"] = "vectorized",
    canonical: bool = False,
) -> ModelEstimate:
    """
    Mean number of breaks of random m-reads.

    Args:
        m: read length
        k: k-mer length
        p: minimizer length
        trials: number of random reads
        seed: RNG seed
        dist: symbol distribution, uniform by default
        engine: "vectorized" (numpy window minima) or "scan" (the simple scanner per read)
        canonical: use reverse-complement-aware minimizers

    Returns:
        Mean breaks per read with its standard error
    """
    _check_kp(k, p)
    if k > m:
        raise InvalidArgumentError(f"need k <= m, got k={k}, m={m}")
    if trials < 1:
        raise InvalidArgumentError("simulate_breaks needs at least one trial")
    rng = np.random.default_rng(seed)
    samples = []
    for start in range(0, trials, MC_BATCH):
        reads = random_reads(rng, min(MC_BATCH, trials - start), m, dist)
        if engine == "scan":
            samples.append(
                np.array([simple_scan(PackedSequence.from_codes(r), k, p, canonical)[1].breaks for r in reads])
            )
        else:
            samples.append(count_breaks(reads, k, p, canonical))
    estimate = ModelEstimate.from_samples(np.concatenate(samples))
    logger.debug(f"Breaks simulated - m: {m}, k: {k}, p: {p}, mean: {estimate.mean:.4f}, stderr: {estimate.stderr:.4f}")
    return estimate


def _boundary_minimum(strings: np.ndarray, p: int, unique: bool) -> np.ndarray:
    codes = p_substring_codes(strings, p)
    lowest = codes.min(axis=1)
    at_end = (codes[:, 0] == lowest) | (codes[:, -1] == lowest)
    if not unique:
        return at_end
    return at_end & ((codes == lowest[:, None]).sum(axis=1) == 1)


def _estimate_boundary(
    k: int, p: int, trials: int, seed: int, dist: Optional[SymbolDistribution], unique: bool
) -> ModelEstimate:
    _check_kp(k, p)
    if trials < 1:
        raise InvalidArgumentError("Monte Carlo estimate needs at least one trial")
    rng = np.random.default_rng(seed)
    hits = []
    for start in range(0, trials, MC_BATCH):
        strings = random_reads(rng, min(MC_BATCH, trials - start), k + 1, dist)
        hits.append(_boundary_minimum(strings, p, unique))
    return ModelEstimate.from_samples(np.concatenate(hits))


def estimate_p1(
    k: int, p: int, trials: int, seed: int = 0, dist: Optional[SymbolDistribution] = None
) -> ModelEstimate:
    """Fraction of random (k+1)-strings whose first or last p-substring is the unique minimum."""
    return _estimate_boundary(k, p, trials, seed, dist, unique=True)


def estimate_p2(
    k: int, p: int, trials: int, seed: int = 0, dist: Optional[SymbolDistribution] = None
) -> ModelEstimate:
    """Fraction of random (k+1)-strings whose first or last p-substring is a minimum."""
    return _estimate_boundary(k, p, trials, seed, dist, unique=False)


def _exact_boundary(k: int, p: int, dist: Optional[SymbolDistribution], unique: bool) -> float:
    _check_kp(k, p)
    if k + 1 > 2 * MAX_EXHAUSTIVE_P:
        raise InvalidArgumentError(f"exact enumeration limited to k+1 <= {2 * MAX_EXHAUSTIVE_P}, got k={k}")
    strings = enumerate_strings(k + 1)
    return float((string_weights(strings, dist) * _boundary_minimum(strings, p, unique)).sum())


def exact_p1(k: int, p: int, dist: Optional[SymbolDistribution] = None) -> float:
    return _exact_boundary(k, p, dist, unique=True)


def exact_p2(k: int, p: int, dist: Optional[SymbolDistribution] = None) -> float:
    return _exact_boundary(k, p, dist, unique=False)


def expected_breaks_from_p1(m: int, k: int, p1: float) -> float:
    """Each of the m-k adjacent k-mer pairs of a read breaks with probability P1."""
    return p1 * (m - k)


def p1_inequalities(k: int, p: int, a: int, trials: int, seed: int = 0) -> P1Report:
    """Monte Carlo check of the shift inequality for P1 and of P1 <= (p+1)/(k+1)."""
    if a < 0:
        raise InvalidArgumentError(f"shift a must be non-negative, got {a}")
    p1 = estimate_p1(k, p, trials, seed)
    shifted = estimate_p1(k + a, p + a, trials, seed + 1)
    p2 = estimate_p2(k, p, trials, seed + 2)
    shift_bound = 2 * p1.mean + (p + 2) / 4**p
    ring_bound = (p + 1) / (k + 1)
    return P1Report(
        k=k,
        p=p,
        a=a,
        p1=p1,
        p1_shifted=shifted,
        p2=p2,
        shift_bound=shift_bound,
        ring_bound=ring_bound,
        shift_bound_holds=shifted.mean - 3 * shifted.stderr <= shift_bound + 6 * p1.stderr,
        ring_bound_holds=p1.mean - 3 * p1.stderr <= ring_bound,
    )


def alpha(k: int, p: int) -> float:
    """
    Probability that a uniform random k-mer contains p zeros in a row.

    This is the share of k-mers covered by the all-zero minimizer, the largest
    partition under identity wrap.
    """
    _check_kp(k, p)
    step = 0.75 / 4**p
    a = [0.0] * (k + 1)
    a[p] = 1.0 / 4**p
    for j in range(p + 1, k + 1):
        before = a[j - p - 1] if j - p - 1 >= p else 0.0
        a[j] = a[j - 1] + (1.0 - before) * step
    return a[k]


def alpha_bounds(k: int, p: int) -> tuple[float, float]:
    return 2 * k / 4 ** (p + 1), 3 * k / 4 ** (p + 1)


def alpha_bounds_table(ks: Iterable[int], ps: Iterable[int]) -> pd.DataFrame:
    rows = []
    for p in ps:
        for k in ks:
            if p > k:
                continue
            lower, upper = alpha_bounds(k, p)
            value = alpha(k, p)
            rows.append(
                {"k": k, "p": p, "alpha": value, "lower": lower, "upper": upper, "within": lower < value < upper}
            )
    return pd.DataFrame(rows, columns=["k", "p", "alpha", "lower", "upper", "within"])


def capacity_distribution(
    k: int,
    p: int,
    dist: Optional[SymbolDistribution] = None,
    monte_carlo: bool = False,
    trials: int = 1_000_000,
    seed: int = 0,
) -> np.ndarray:
    """
    Expected share of k-mers whose minimum p-substring is each p-word, indexed by word rank.

    Exact for p <= MAX_EXHAUSTIVE_P; larger p requires monte_carlo=True.
    """
    _check_kp(k, p)
    if not monte_carlo:
        if p > MAX_EXHAUSTIVE_P:
            raise InvalidArgumentError(
                f"exact capacity limited to p <= {MAX_EXHAUSTIVE_P}; pass monte_carlo=True for p={p}"
            )
        return min_word_probabilities(p, k, dist)

    rng = np.random.default_rng(seed)
    counts = np.zeros(4**p, dtype=np.int64)
    for start in range(0, trials, MC_BATCH):
        kmers = random_reads(rng, min(MC_BATCH, trials - start), k, dist)
        counts += np.bincount(p_substring_codes(kmers, p).min(axis=1).astype(np.int64), minlength=4**p)
    return counts / trials


def capacity_table(k: int, p: int, dist: Optional[SymbolDistribution] = None, **kwargs) -> pd.DataFrame:
    """Capacity distribution sorted from the largest partition down."""
    shares = capacity_distribution(k, p, dist, **kwargs)
    order = np.argsort(-shares, kind="stable")
    return pd.DataFrame(
        {
            "rank": np.arange(1, len(order) + 1),
            "word": [format_word(int(code), p) for code in order],
            "share": shares[order],
        }
    )


def simulate_capacity(
    k: int, p: int, trials: int, seed: int = 0, dist: Optional[SymbolDistribution] = None
) -> ModelEstimate:
    """Monte Carlo share of random k-mers falling in the largest identity-wrap partition."""
    _check_kp(k, p)
    if trials < 1:
        raise InvalidArgumentError("simulate_capacity needs at least one trial")
    rng = np.random.default_rng(seed)
    minima = np.concatenate(
        [
            p_substring_codes(random_reads(rng, min(MC_BATCH, trials - start), k, dist), p).min(axis=1)
            for start in range(0, trials, MC_BATCH)
        ]
    )
    values, counts = np.unique(minima, return_counts=True)
    largest = values[np.argmax(counts)]
    return ModelEstimate.from_samples(minima == largest)


def total_size_estimate(
    n_bases: int,
    m: int,
    k: int,
    p: int,
    breaks_per_read: Optional[float] = None,
    trials: int = 10_000,
    seed: int = 0,
) -> float:
    """
    Expected total bases written to partitions for n_bases of m-long reads.

    Every break starts a new super k-mer that repeats the k-1 bases it shares
    with the previous one.
    """
    if breaks_per_read is None:
        breaks_per_read = simulate_breaks(m, k, p, trials, seed).mean
    return n_bases + breaks_per_read * (k - 1) / m * n_bases


def breaks_table(
    ms: Iterable[int], ks: Iterable[int], ps: Iterable[int], trials: int, seed: int = 0
) -> pd.DataFrame:
    """Break statistics over a parameter grid, with the (p+1)/(k+1) rate bound."""
    rows = []
    for m in ms:
        for k in ks:
            for p in ps:
                if not p <= k <= m:
                    continue
                estimate = simulate_breaks(m, k, p, trials, seed)
                rate = estimate.mean / (m - k) if m > k else 0.0
                rows.append(
                    {
                        "m": m,
                        "k": k,
                        "p": p,
                        "mean_breaks": estimate.mean,
                        "stderr": estimate.stderr,
                        "rate": rate,
                        "rate_bound": (p + 1) / (k + 1),
                        "trials": estimate.trials,
                    }
                )
    return pd.DataFrame(rows)


def size_table(n_bases: int, m: int, ks: Iterable[int], ps: Iterable[int], trials: int, seed: int = 0) -> pd.DataFrame:
    rows = []
    for k in ks:
        for p in ps:
            if not p <= k <= m:
                continue
            estimate = total_size_estimate(n_bases, m, k, p, trials=trials, seed=seed)
            rows.append({"m": m, "k": k, "p": p, "n_bases": n_bases, "estimate": estimate, "ratio": estimate / n_bases})
    return pd.DataFrame(rows)


def minstb_table(word: WordLike, n: int, dist: Optional[SymbolDistribution] = None) -> pd.DataFrame:
    """The filled table as rows i = 0..n."""
    table = minstb(word, n, dist)
    frame = pd.DataFrame(table.Q, columns=[f"Q{j}" for j in range(table.m)])
    frame.insert(0, "i", np.arange(n + 1))
    return frame


def p1_table(report: P1Report) -> pd.DataFrame:
    return pd.DataFrame(
        [
            {"quantity": "P1(k,p)", "mean": report.p1.mean, "stderr": report.p1.stderr},
            {"quantity": "P1(k+a,p+a)", "mean": report.p1_shifted.mean, "stderr": report.p1_shifted.stderr},
            {"quantity": "P2(k,p)", "mean": report.p2.mean, "stderr": report.p2.stderr},
            {"quantity": "shift_bound", "mean": report.shift_bound, "stderr": math.nan},
            {"quantity": "ring_bound", "mean": report.ring_bound, "stderr": math.nan},
        ]
    )
