"""Binary serialization of a built index.

Layout (all integers little-endian):

  header   magic "FBFMIDX1", u16 version, u8 variant, u8 rrr block size
           (0 for plain backends), u64 n, u32 sigma, u64 block size
           (0 for ssa variants), u32 block count
  sections each prefixed with its u32 byte length, in order: remap,
           c array, boundary rows (fixed variants only), then per block a
           codebook section and a node payload section

Bitstreams are LSB-first within bytes and sections are padded to whole
bytes, so a stored index is a few bytes per section larger than the
in-memory size report. Deserialization validates structure and symbol
counts and answers queries identically to the index that was saved.
"""

import struct

from .bitio import BitReader, BitWriter
from .bitrank import PlainBitVector, RrrBitVector, offset_width
from .fmindex import BlockedFMIndex, IndexVariant
from .wavelet import WaveletTree

MAGIC = b"FBFMIDX1"
VERSION = 1

_HEADER = struct.Struct("<8sHBBQIQI")
_VARIANT_CODES = {v: i for i, v in enumerate(IndexVariant)}
_VARIANTS = list(IndexVariant)


class UnsupportedFormatError(ValueError):
    pass


class CorruptIndexError(ValueError):
    pass


def _corrupt(check):
    raise CorruptIndexError(f"corrupt index: {check}")


def _block_lengths(n, block_size, block_count):
    if block_size is None:
        return [n]
    out = [block_size] * (block_count - 1)
    out.append(n - block_size * (block_count - 1))
    return out


def _codebook_section(wt):
    head = bytearray(struct.pack("<H", len(wt.codes)))
    bits = BitWriter()
    for sym in sorted(wt.codes):
        length, code = wt.codes[sym]
        head += struct.pack("<HB", sym, length)
        bits.write(code, length)
    return bytes(head) + bits.getvalue()


def _write_plain_node(w, bv):
    remaining = bv.m
    for word in bv.words():
        chunk = min(64, remaining)
        w.write(word, chunk)
        remaining -= chunk
    blockrel, supers = bv.directory()
    for v in blockrel:
        w.write(v, 16)
    for v in supers:
        w.write(v, 64)


def _write_rrr_node(w, bv):
    wc = bv.class_field_width
    for k in bv.block_classes():
        w.write(k, wc)
    buf, base, nbits = bv.offset_stream()
    w.write_bits_from(buf, base, nbits)
    for opos, rank in bv.samples():
        w.write(opos, 32)
        w.write(rank, 32)


def _payload_section(wt):
    w = BitWriter()
    for node in wt.nodes:
        if node.bv.backend == "plain":
            _write_plain_node(w, node.bv)
        else:
            _write_rrr_node(w, node.bv)
    return w.getvalue()


def _boundary_section(index):
    w = BitWriter()
    width = index.counter_width
    for row in index.boundary_occ:
        for v in row:
            w.write(v, width)
    return w.getvalue()


def serialize(index, sink):
    """Write the index to a binary sink; returns the number of bytes written."""
    variant = index.variant
    header = _HEADER.pack(
        MAGIC,
        VERSION,
        _VARIANT_CODES[variant],
        index.rrr_block_size if variant.bitvector_backend == "rrr" else 0,
        index.n,
        index.sigma,
        index.block_size or 0,
        len(index.blocks),
    )
    sections = [bytes(index.byte_for_code)]
    sections.append(struct.pack(f"<{index.sigma + 1}Q", *index.c))
    if variant.fixed:
        sections.append(_boundary_section(index))
    for wt in index.blocks:
        sections.append(_codebook_section(wt))
        sections.append(_payload_section(wt))
    written = 0
    try:
        sink.write(header)
        written += len(header)
        for body in sections:
            sink.write(struct.pack("<I", len(body)))
            sink.write(body)
            written += 4 + len(body)
    except OSError as exc:
        raise OSError(f"index write failed after {written} bytes: {exc}") from exc
    return written


class _SectionCursor:
    def __init__(self, data):
        self.data = data
        self.at = _HEADER.size

    def next(self, name):
        if self.at + 4 > len(self.data):
            _corrupt(f"missing {name} section")
        (length,) = struct.unpack_from("<I", self.data, self.at)
        start = self.at + 4
        if start + length > len(self.data):
            _corrupt(f"truncated {name} section")
        self.at = start + length
        return self.data[start : start + length]

    def finish(self):
        if self.at != len(self.data):
            _corrupt("trailing data")


def _parse_codebook(body, sigma):
    if len(body) < 2:
        _corrupt("codebook header")
    (sigma_local,) = struct.unpack_from("<H", body, 0)
    if sigma_local < 1:
        _corrupt("codebook alphabet size")
    head_len = 2 + 3 * sigma_local
    if len(body) < head_len:
        _corrupt("codebook entries")
    entries = []
    prev = -1
    for i in range(sigma_local):
        sym, length = struct.unpack_from("<HB", body, 2 + 3 * i)
        if sym <= prev or sym >= sigma:
            _corrupt("codebook symbols")
        if (length == 0) != (sigma_local == 1) or length > 64:
            _corrupt("codebook code lengths")
        entries.append((sym, length))
        prev = sym
    reader = BitReader(body[head_len:])
    codes = {}
    try:
        for sym, length in entries:
            codes[sym] = (length, reader.read(length))
    except EOFError:
        _corrupt("codebook bits")
    if len(body) - head_len - (reader.pos + 7) // 8 > 0:
        _corrupt("codebook length")
    return codes


def _read_plain_node(reader, m):
    words = []
    remaining = m
    while remaining >= 64:
        words.append(reader.read(64))
        remaining -= 64
    words.append(reader.read(remaining) if remaining else 0)
    blockrel = [reader.read(16) for _ in range(m // 64 + 1)]
    supers = [reader.read(64) for _ in range(m // 512 + 1)]
    return PlainBitVector.from_parts(m, words, blockrel, supers)


def _read_rrr_node(reader, m, t, body):
    nblocks = (m + t - 1) // t
    wc = t.bit_length()
    classes = [reader.read(wc) for _ in range(nblocks)]
    if any(k > t for k in classes):
        _corrupt("rrr class out of range")
    offbits = sum(offset_width(t, k) for k in classes)
    offbase = reader.pos
    if offbase + offbits > reader.bit_length:
        _corrupt("rrr offsets truncated")
    reader.pos = offbase + offbits
    bv = RrrBitVector.from_parts(m, t, classes, body, offbase, offbits)
    stored = [(reader.read(32), reader.read(32)) for _ in bv.samples()]
    if stored != bv.samples():
        _corrupt("rrr samples")
    return bv


def _load_tree(body, codes, m, backend, rrr_t):
    reader = BitReader(body)

    def node_reader(nbits):
        if backend == "plain":
            return _read_plain_node(reader, nbits)
        return _read_rrr_node(reader, nbits, rrr_t, body)

    try:
        wt = WaveletTree.from_codebook(
            codes, m, "huffman", backend, rrr_t or 15, node_reader
        )
    except EOFError:
        _corrupt("payload truncated")
    except ValueError as exc:
        _corrupt(f"codebook ({exc})")
    if len(body) - (reader.pos + 7) // 8 > 0:
        _corrupt("payload length")
    return wt


def deserialize(source):
    """Read an index back from bytes or a binary file object."""
    data = source.read() if hasattr(source, "read") else bytes(source)
    if len(data) < _HEADER.size:
        _corrupt("truncated header")
    magic, version, vcode, rrr_t, n, sigma, block_size, block_count = _HEADER.unpack_from(
        data, 0
    )
    if magic != MAGIC:
        raise UnsupportedFormatError("unsupported format: bad magic")
    if version != VERSION:
        raise UnsupportedFormatError(f"unsupported format: version {version}")
    if vcode >= len(_VARIANTS):
        _corrupt("variant")
    variant = _VARIANTS[vcode]
    if n < 1 or not 2 <= sigma <= 257:
        _corrupt("header ranges")
    backend = variant.bitvector_backend
    if backend == "rrr":
        if not 1 <= rrr_t <= 63:
            _corrupt("rrr block size")
    elif rrr_t != 0:
        _corrupt("rrr block size")
    if variant.fixed:
        if block_size < 1 or block_count != (n + block_size - 1) // block_size:
            _corrupt("block count")
    elif block_size != 0 or block_count != 1:
        _corrupt("block count")

    cursor = _SectionCursor(data)
    remap = cursor.next("remap")
    if len(remap) != sigma - 1 or list(remap) != sorted(set(remap)):
        _corrupt("remap")
    c_body = cursor.next("c array")
    if len(c_body) != 8 * (sigma + 1):
        _corrupt("c_array length")
    c = list(struct.unpack(f"<{sigma + 1}Q", c_body))
    if c[0] != 0 or c[sigma] != n or any(a > b for a, b in zip(c, c[1:])):
        _corrupt("c_array")
    if c[1] - c[0] != 1:
        _corrupt("sentinel count")

    boundary = None
    if variant.fixed:
        body = cursor.next("boundary")
        width = n.bit_length()
        need = (block_count * sigma * width + 7) // 8
        if len(body) != need:
            _corrupt("boundary_occ length")
        reader = BitReader(body)
        boundary = [
            [reader.read(width) for _ in range(sigma)] for _ in range(block_count)
        ]
        if any(v != 0 for v in boundary[0]):
            _corrupt("boundary_occ")
        for prev, row in zip(boundary, boundary[1:]):
            if any(a > b or b > n for a, b in zip(prev, row)):
                _corrupt("boundary_occ")

    lengths = _block_lengths(n, block_size if variant.fixed else None, block_count)
    blocks = []
    for i, m in enumerate(lengths):
        if m < 1:
            _corrupt("block count")
        codes = _parse_codebook(cursor.next(f"codebook {i}"), sigma)
        blocks.append(
            _load_tree(
                cursor.next(f"payload {i}"),
                codes,
                m,
                backend,
                rrr_t if backend == "rrr" else 0,
            )
        )
    cursor.finish()

    index = BlockedFMIndex(
        variant,
        n,
        sigma,
        c,
        blocks,
        boundary,
        block_size if variant.fixed else None,
        remap,
        rrr_t if backend == "rrr" else 15,
    )
    for code in range(sigma):
        if index.rank_l(code, n) != c[code + 1] - c[code]:
            _corrupt("symbol counts")
    return index


def save_index(index, path):
    with open(path, "wb") as fh:
        return serialize(index, fh)


def load_index(path):
    try:
        with open(path, "rb") as fh:
            return deserialize(fh)
    except OSError as exc:
        raise OSError(f"cannot read index file {path!r}: {exc}") from exc
