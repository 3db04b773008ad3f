"""Backward-search count index over the BWT.

Four variants share one query path. The ssa variants keep a single
Huffman-shaped wavelet tree over the whole BWT; the fixed_block variants
split the BWT into fixed-size blocks, build one tree per block over that
block's own local alphabet, and keep a row of absolute rank snapshots at
every block boundary. The *_rrr variants swap the node bitvectors for the
compressed representation. Counting never touches the text: rank over the
last column drives the backward search.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import textcore
from .wavelet import WaveletTree


class IndexVariant(str, Enum):
    SSA = "ssa"
    SSA_RRR = "ssa_rrr"
    FIXED_BLOCK = "fixed_block"
    FIXED_BLOCK_RRR = "fixed_block_rrr"

    @property
    def fixed(self):
        return self in (IndexVariant.FIXED_BLOCK, IndexVariant.FIXED_BLOCK_RRR)

    @property
    def bitvector_backend(self):
        return "rrr" if self in (IndexVariant.SSA_RRR, IndexVariant.FIXED_BLOCK_RRR) else "plain"


def default_block_size(n, sigma):
    """sigma * ceil(log2 n)^2, clamped to [64, n]."""
    if n < 2:
        raise ValueError("text too short for an index")
    lg = (n - 1).bit_length()
    return min(n, max(64, sigma * lg * lg))


@dataclass
class SizeReport:
    """Index size broken into components, all in bits."""

    n: int
    variant: str
    wavelet_payload: int
    rank_directories: int
    boundary_occ: int
    codebooks: int
    c_array: int
    remap: int

    @property
    def total(self):
        return (
            self.wavelet_payload
            + self.rank_directories
            + self.boundary_occ
            + self.codebooks
            + self.c_array
            + self.remap
        )

    @property
    def bits_per_symbol(self):
        return self.total / self.n

    def components(self):
        return {
            "wavelet_payload": self.wavelet_payload,
            "rank_directories": self.rank_directories,
            "boundary_occ": self.boundary_occ,
            "codebooks": self.codebooks,
            "c_array": self.c_array,
            "remap": self.remap,
        }


class BlockedFMIndex:
    """Count-only FM-index; construct through build_index or storage.deserialize."""

    def __init__(
        self,
        variant,
        n,
        sigma,
        c,
        blocks,
        boundary_occ,
        block_size,
        byte_for_code,
        rrr_block_size=15,
    ):
        self.variant = IndexVariant(variant)
        self.n = n
        self.sigma = sigma
        self.c = [int(x) for x in c]
        self.blocks = blocks
        self.boundary_occ = boundary_occ
        self.block_size = block_size
        self.byte_for_code = bytes(byte_for_code)
        self.rrr_block_size = rrr_block_size
        lut = [0] * 256
        for code, byte in enumerate(self.byte_for_code, start=1):
            lut[byte] = code
        self._code_for_byte = lut

    def rank_l(self, c, j):
        """Occurrences of code c in the first j BWT symbols."""
        if not 0 <= j <= self.n:
            raise ValueError("rank position out of range")
        if not 0 <= c < self.sigma:
            return 0
        if self.boundary_occ is None:
            return self.blocks[0].rank(c, j)
        bi, r = divmod(j, self.block_size)
        if bi == len(self.blocks):
            bi -= 1
            r = self.block_size
        return self.boundary_occ[bi][c] + self.blocks[bi].rank(c, r)

    def count_codes(self, pattern, early_break=True):
        """Backward search over a code-space pattern."""
        sigma = self.sigma
        for code in pattern:
            if not 1 <= code < sigma:
                return 0
        b, e = 0, self.n
        c = self.c
        for code in reversed(pattern):
            base = c[code]
            b = base + self.rank_l(code, b)
            e = base + self.rank_l(code, e)
            if early_break and b >= e:
                return 0
        return e - b

    def count(self, pattern):
        """Occurrences of a byte pattern in the indexed text."""
        codes = self.translate(bytes(pattern))
        if codes is None:
            return 0
        return self.count_codes(codes)

    def translate(self, pattern):
        lut = self._code_for_byte
        out = []
        for byte in pattern:
            code = lut[byte]
            if code == 0:
                return None
            out.append(code)
        return out

    @property
    def counter_width(self):
        """Bits per boundary counter; must reach n."""
        return self.n.bit_length()

    def size_report(self):
        boundary = 0
        if self.boundary_occ is not None:
            boundary = len(self.blocks) * self.sigma * self.counter_width
        return SizeReport(
            n=self.n,
            variant=self.variant.value,
            wavelet_payload=sum(wt.payload_bits for wt in self.blocks),
            rank_directories=sum(wt.directory_bits for wt in self.blocks),
            boundary_occ=boundary,
            codebooks=sum(wt.codebook_bits for wt in self.blocks),
            c_array=64 * (self.sigma + 1),
            remap=8 * (self.sigma - 1),
        )


def build_index(t, variant, block_size=None, rrr_block_size=15):
    """Index a Text under the chosen variant.

    block_size applies to the fixed_block variants only and defaults to
    default_block_size(n, sigma); passing it with an ssa variant is an error.
    """
    variant = IndexVariant(variant)
    backend = variant.bitvector_backend
    b = textcore.bwt(t)
    l = b.l
    if variant.fixed:
        bs = default_block_size(t.n, t.sigma) if block_size is None else int(block_size)
        if bs < 1:
            raise ValueError("block size must be >= 1")
        blocks = []
        boundary = []
        running = np.zeros(t.sigma, dtype=np.int64)
        for s in range(0, t.n, bs):
            seg = l[s : s + bs]
            boundary.append(running.tolist())
            blocks.append(WaveletTree(seg, "huffman", backend, rrr_block_size))
            running += np.bincount(seg, minlength=t.sigma)
    else:
        if block_size is not None:
            raise ValueError("block size applies to the fixed_block variants only")
        bs = None
        blocks = [WaveletTree(l, "huffman", backend, rrr_block_size)]
        boundary = None
    return BlockedFMIndex(
        variant,
        t.n,
        t.sigma,
        b.c,
        blocks,
        boundary,
        bs,
        t.byte_for_code,
        rrr_block_size,
    )


def rank_l(index, c, j):
    return index.rank_l(c, j)


def count(index, pattern):
    return index.count(pattern)


def index_size_report(index):
    return index.size_report()
