"""Shared generators and brute-force reference implementations for the tests."""

import numpy as np

from fmblock.textcore import Text

BANANA_ALPHABET = {"$": 0, "A": 1, "B": 2, "N": 3}


def codes_of(s, mapping=BANANA_ALPHABET):
    return [mapping[ch] for ch in s]


def random_codes(rng, n, sigma):
    return [rng.randrange(1, sigma) for _ in range(n)]


def random_text(rng, n, sigma):
    return Text.from_codes(random_codes(rng, n, sigma), sigma)


def random_bytes_text(rng, n, alphabet=b"ab"):
    return bytes(rng.choice(alphabet) for _ in range(n))


def markov2_codes(seed, n, sigma=8, peak=0.95):
    """Order-2 chain where each context strongly prefers one successor."""
    rng = np.random.default_rng(seed)
    pref = rng.integers(1, sigma, size=(sigma - 1, sigma - 1))
    u = rng.random(n)
    alt = rng.integers(1, sigma, size=n)
    out = np.empty(n, dtype=np.int64)
    a = b = 1
    for i in range(n):
        c = int(pref[a - 1, b - 1]) if u[i] < peak else int(alt[i])
        out[i] = c
        a, b = b, c
    return out.tolist()


def brute_suffix_array(data):
    seq = [int(x) for x in data]
    n = len(seq)
    return sorted(range(n), key=lambda i: seq[i:])


def brute_bwt(data):
    seq = [int(x) for x in data]
    n = len(seq)
    rows = sorted(range(n), key=lambda i: seq[i:] + seq[:i])
    return [seq[(i - 1) % n] for i in rows]


def brute_count(codes, pattern):
    """Quadratic overlapping-occurrence scan, independent of the library."""
    m = len(pattern)
    if m == 0 or m > len(codes):
        return 0
    return sum(1 for i in range(len(codes) - m + 1) if codes[i : i + m] == list(pattern))


def brute_h0(counts):
    import math

    counts = [c for c in counts if c > 0]
    n = sum(counts)
    return sum(c / n * math.log2(n / c) for c in counts)


def pattern_batch(rng, codes, sigma, extracted=80, adversarial=20, max_len=12):
    """Patterns that occur (substrings) plus ones that usually do not."""
    n = len(codes)
    out = []
    for _ in range(extracted):
        ln = rng.randint(1, min(max_len, max(1, n - 1)))
        if n > ln:
            at = rng.randrange(n - ln)
            out.append(codes[at : at + ln])
    for _ in range(adversarial):
        out.append([rng.randrange(1, sigma) for _ in range(rng.randint(1, 6))])
    out.append([])
    out.append([0])  # sentinel is never a legal pattern symbol
    out.append([sigma + 3])  # neither is an out-of-range code
    return out
