"""Acceptance checks.

Each test prints one line, ACCEPTANCE <name>: PASS/FAIL with the measured
values, then asserts. Lines go to the unbuffered real stdout so they appear
in the pytest log regardless of capture settings.
"""

import io
import os
import random
import struct
import time
from pathlib import Path

import numpy as np
import pytest

from fmblock.bitrank import build_plain, build_rrr
from fmblock.entropy import (
    concat_entropy_terms,
    context_partition,
    h0,
    hk,
    partition_entropy,
    verify_lemma3,
)
from fmblock.fmindex import IndexVariant, build_index
from fmblock.storage import CorruptIndexError, UnsupportedFormatError, deserialize, serialize
from fmblock.textcore import Text, build_text, bwt, inverse_bwt, naive_count
from fmblock.wavelet import build_wt
from helpers import markov2_codes, pattern_batch, random_codes

REL = 1e-9
ALL_VARIANTS = list(IndexVariant)

_CAPSYS = None


@pytest.fixture(autouse=True)
def _terminal(capsys):
    global _CAPSYS
    _CAPSYS = capsys
    yield
    _CAPSYS = None


def note(line):
    if _CAPSYS is not None:
        with _CAPSYS.disabled():
            print(line, flush=True)
    else:
        print(line, flush=True)


def report(name, ok, detail):
    note(f"ACCEPTANCE {name}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, f"{name}: {detail}"


def test_01_count_matches_naive_for_all_variants():
    rng = random.Random(42)
    started = time.perf_counter()
    texts = 1000
    checked = 0
    for i in range(texts):
        sigma = (2, 4, 26, 100)[i % 4]
        n = 10**4 if i % 100 == 99 else int(10 ** rng.uniform(1.0, 4.0))
        codes = random_codes(rng, n, sigma)
        t = Text.from_codes(codes, sigma)
        patterns = pattern_batch(rng, codes, sigma, extracted=80, adversarial=20)
        assert len(patterns) >= 100
        expected = [naive_count(t, p) for p in patterns]
        for variant in ALL_VARIANTS:
            ix = build_index(t, variant)
            got = [ix.count_codes(p) for p in patterns]
            if got != expected:
                report("count-oracle", False, f"text {i} variant {variant.value}")
            checked += len(patterns)
    elapsed = time.perf_counter() - started
    report(
        "count-oracle",
        elapsed <= 120.0,
        f"{texts} texts, {checked} pattern checks x 4 variants, {elapsed:.1f}s <= 120s",
    )


def test_02_exhaustive_rank_agreement():
    rng = random.Random(7)
    bit_inputs = [
        [rng.randint(0, 1) for _ in range(2048)],
        [int(rng.random() < 0.02) for _ in range(2048)],
        [int(rng.random() < 0.98) for _ in range(2047)],
        [0] * 2048,
        [1] * 1024,
        [i % 2 for i in range(321)],
        [],
    ]
    checks = 0
    for bits in bit_inputs:
        vectors = [build_plain(bits), build_rrr(bits, 15), build_rrr(bits, 8)]
        acc = 0
        for j in range(len(bits) + 1):
            if j:
                acc += bits[j - 1]
            for v in vectors:
                assert v.rank(1, j) == acc and v.rank(0, j) == j - acc
                checks += 2

    seq_inputs = [
        [rng.randrange(2) for _ in range(2048)],
        [rng.randrange(26) for _ in range(2048)],
        [rng.randrange(100) for _ in range(601)],
        [5] * 700,
    ]
    for seq in seq_inputs:
        trees = [
            build_wt(seq, shape, backend)
            for shape in ("balanced", "huffman")
            for backend in ("plain", "rrr")
        ]
        symbols = sorted(set(seq)) + [max(seq) + 1]
        running = {c: 0 for c in symbols}
        for j in range(len(seq) + 1):
            if j:
                running[seq[j - 1]] = running.get(seq[j - 1], 0) + 1
            for c in symbols:
                want = running.get(c, 0)
                for wt in trees:
                    assert wt.rank(c, j) == want
                    checks += 1
    report("exhaustive-rank", True, f"{checks} rank positions agree with scans")


def test_03_context_partition_identity():
    rng = random.Random(11)
    worst = 0.0
    texts = 0
    cases = []
    for _ in range(90):
        sigma = rng.choice([2, 3, 4, 26])
        cases.append(Text.from_codes(random_codes(rng, rng.randint(2, 2000), sigma), sigma))
    for seed in range(8):
        cases.append(Text.from_codes(markov2_codes(seed, 1500, 6), 6))
    cases.append(build_text(b"BANANA"))
    cases.append(build_text(b"abracadabra" * 100))
    cases.append(Text.from_codes([1] * 500, 2))
    cases.append(Text.from_codes([1, 2] * 250, 3))
    for t in cases:
        b = bwt(t)
        texts += 1
        for k in range(4):
            lhs = partition_entropy(b.l, context_partition(b, t, k))
            rhs = t.n * hk(t, k)
            worst = max(worst, abs(lhs - rhs) / max(1.0, abs(rhs)))
    report(
        "context-identity",
        texts >= 100 and worst <= REL,
        f"{texts} texts x k in 0..3, worst residual {worst:.2e} <= 1e-09",
    )


def test_04_concat_chain_of_bounds():
    terms = concat_entropy_terms([1, 1], [2, 2])
    exact = terms.delta == 4.0 and terms.length_split_bits == 4.0 and terms.symbol_split_bits == 0.0
    rng = random.Random(13)
    worst = 0.0
    for _ in range(10**4):
        sigma = rng.choice([2, 3, 5, 16])
        x = [rng.randrange(sigma) for _ in range(rng.randint(1, 60))]
        y = [rng.randrange(sigma) for _ in range(rng.randint(1, 60))]
        tm = concat_entropy_terms(x, y)
        scale = max(1.0, tm.length_split_bits)
        violations = (
            max(0.0, -tm.delta),
            abs(tm.delta - (tm.length_split_bits - tm.symbol_split_bits)),
            max(0.0, tm.delta - tm.length_split_bits),
            max(0.0, tm.length_split_bits - (len(x) + len(y))),
        )
        worst = max(worst, max(violations) / scale)
    report(
        "concat-bounds",
        exact and worst <= REL,
        f"disjoint pair exact, 10000 random pairs worst violation {worst:.2e}",
    )


def test_05_fixed_vs_arbitrary_partition_bound():
    rng = random.Random(17)
    worst = 0.0
    triples = 0
    for i in range(1000):
        sigma = rng.choice([2, 3, 4, 8])
        n = rng.randint(2, 400)
        t = Text.from_codes(random_codes(rng, n, sigma), sigma)
        b = bwt(t)
        k = i % 4
        blk = rng.choice([1, 2, 3, 8, 64, 197, t.n])
        part = context_partition(b, t, k)
        lhs, rhs = verify_lemma3(b.l, part, blk)
        worst = max(worst, (lhs - rhs) / max(1.0, abs(rhs)))
        triples += 1
    report(
        "fixed-partition-bound",
        triples == 1000 and worst <= REL,
        f"1000 (text, k, b) triples, worst normalized excess {worst:.2e}",
    )


def test_06_code_length_bounds():
    rng = random.Random(19)
    hwt_ok = balanced_ok = True
    cases = 0
    for _ in range(200):
        n = rng.randint(1, 600)
        sigma = rng.choice([2, 4, 26, 100])
        skew = rng.choice([1.0, 2.0, 4.0])
        seq = [min(sigma - 1, int(sigma * rng.random() ** skew)) for _ in range(n)]
        local = len(set(seq))
        hwt = build_wt(seq, "huffman", "plain")
        bal = build_wt(seq, "balanced", "plain")
        entropy_bits = n * h0(seq)
        hwt_ok &= hwt.code_length_bits <= entropy_bits + n + 1e-9
        width = (local - 1).bit_length() if local > 1 else 0
        balanced_ok &= bal.code_length_bits == n * width
        cases += 1
    report(
        "code-length-bounds",
        hwt_ok and balanced_ok and cases == 200,
        f"{cases} sequences: huffman <= n(H0+1), balanced == n*ceil(log2(sigma_local))",
    )


def test_07_desk_scale_size_comparison():
    n = 10**6
    t = Text.from_codes(markov2_codes(5, n, 8), 8)
    h0_val, h2_val = h0(t.data), hk(t, 2)
    bps = {}
    for variant in ALL_VARIANTS:
        bps[variant.value] = build_index(t, variant).size_report().bits_per_symbol
    rng = random.Random(23)
    iid = Text.from_codes([rng.randrange(1, 5) for _ in range(n)], 5)
    iid_ssa = build_index(iid, "ssa_rrr").size_report().bits_per_symbol
    iid_fixed = build_index(iid, "fixed_block_rrr").size_report().bits_per_symbol
    ok = (
        h2_val < 0.5 * h0_val
        and bps["fixed_block_rrr"] < bps["ssa"]
        and bps["fixed_block"] < bps["ssa"] + 0.1
        and iid_ssa <= iid_fixed
    )
    report(
        "size-comparison",
        ok,
        f"markov H0={h0_val:.2f} H2={h2_val:.2f}, bps ssa={bps['ssa']:.3f} "
        f"fixed={bps['fixed_block']:.3f} fixed_rrr={bps['fixed_block_rrr']:.3f}; "
        f"iid ssa_rrr={iid_ssa:.3f} <= fixed_rrr={iid_fixed:.3f}",
    )


def test_08_reference_corpus_entropy():
    targets = {
        "xml": 5.23,
        "dna": 1.98,
        "english": 4.53,
        "sources": 5.54,
    }
    root = Path(os.environ.get("PIZZA_CHILI_DIR", Path(__file__).resolve().parent.parent / "data"))
    found = {}
    for name in targets:
        for candidate in (f"{name}.100MB", name, f"{name}.100mb"):
            path = root / candidate
            if path.is_file():
                found[name] = path
                break
    if not found:
        note(f"ACCEPTANCE corpus-entropy: SKIP (no reference corpus under {root})")
        pytest.skip("reference corpus not present")
    results = []
    ok = True
    for name, path in found.items():
        data = np.fromfile(path, dtype=np.uint8)
        value = h0(data)
        ok &= abs(value - targets[name]) <= 0.01
        results.append(f"{name}={value:.3f}~{targets[name]}")
    report("corpus-entropy", ok, ", ".join(results))


def test_09_serialization_round_trip():
    rng = random.Random(29)
    ok = True
    for variant in ALL_VARIANTS:
        sigma = rng.choice([4, 26])
        codes = random_codes(rng, 1200, sigma)
        t = Text.from_codes(codes, sigma)
        ix = build_index(t, variant, 100 if variant.fixed else None)
        buf = io.BytesIO()
        serialize(ix, buf)
        raw = buf.getvalue()
        again = io.BytesIO()
        serialize(ix, again)
        ok &= again.getvalue() == raw
        back = deserialize(raw)
        third = io.BytesIO()
        serialize(back, third)
        ok &= third.getvalue() == raw
        patterns = pattern_batch(rng, codes, sigma, extracted=60, adversarial=40)
        ok &= all(back.count_codes(p) == ix.count_codes(p) for p in patterns)
        for j in (0, ix.n // 3, ix.n):
            ok &= all(back.rank_l(c, j) == ix.rank_l(c, j) for c in range(sigma))

    base = io.BytesIO()
    serialize(build_index(build_text(b"BANANA" * 16), "fixed_block", 12), base)
    raw = base.getvalue()
    rejected = 0
    try:
        deserialize(b"XXXXXXXX" + raw[8:])
    except UnsupportedFormatError:
        rejected += 1
    try:
        deserialize(raw[:8] + struct.pack("<H", 3) + raw[10:])
    except UnsupportedFormatError:
        rejected += 1
    for mutant in (raw[: len(raw) // 3], raw + b"\x01", _flip(raw, len(raw) - 9)):
        try:
            deserialize(mutant)
        except CorruptIndexError:
            rejected += 1
    report(
        "serialization",
        ok and rejected == 5,
        f"4 variants round-trip byte-identically, {rejected}/5 corruptions rejected",
    )


def _flip(raw, at):
    out = bytearray(raw)
    out[at] ^= 0xFF
    return bytes(out)


def test_10_bwt_round_trip():
    rng = random.Random(31)
    count = 0
    for i in range(500):
        sigma = rng.choice([2, 3, 4, 26, 100, 257])
        n = rng.randint(0, 300) if i % 10 else rng.randint(1000, 3000)
        t = Text.from_codes(random_codes(rng, n, sigma), sigma)
        if inverse_bwt(bwt(t)) != t:
            report("bwt-round-trip", False, f"text {i} (n={n}, sigma={sigma})")
        count += 1
    report("bwt-round-trip", count == 500, f"{count} texts reconstructed exactly")
