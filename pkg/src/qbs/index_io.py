"""Binary index file.

Layout (little-endian)::

    b"QBS1"  u16 version  u32 n  u16 k  k*u32 landmark ids
    per vertex:      u16 count, count * (u16 landmark_index, u16 distance)
    u32 meta_count,  meta_count * (u16 i, u16 j, u16 weight)
    per meta-edge:   u32 count, count * (u32 x, u32 y)

Meta APSP and the meta shortest-path sets are recomputed on load.
"""
from __future__ import annotations

import struct
from typing import BinaryIO

import numpy as np

from .graph import INF
from .labelling import LabellingScheme, LandmarkSet

MAGIC = b"QBS1"
VERSION = 1


class IndexDecodeError(ValueError):
    pass


def encode(scheme: LabellingScheme) -> bytes:
    n, k = scheme.vertex_count, scheme.k
    parts = [MAGIC, struct.pack("<HIH", VERSION, n, k),
             scheme.landmarks.astype("<u4").tobytes()]

    has = scheme.table != INF
    counts = has.sum(axis=1)
    # per-vertex block in u16 words: [count, (idx, dist) * count]
    words = np.empty(n + 2 * int(counts.sum()), dtype="<u2")
    starts = np.arange(n) + 2 * (np.cumsum(counts) - counts)
    words[starts] = counts
    rows, cols = np.nonzero(has)
    slot = starts[rows] + 1 + 2 * (np.arange(len(rows)) - (np.cumsum(counts) - counts)[rows])
    words[slot] = cols
    words[slot + 1] = scheme.table[rows, cols]
    parts.append(words.tobytes())

    parts.append(struct.pack("<I", len(scheme.meta_edges)))
    parts.append(scheme.meta_edges.astype("<u2").tobytes())
    for d in scheme.delta:
        parts.append(struct.pack("<I", len(d)))
        parts.append(np.asarray(d, dtype="<u4").tobytes())
    return b"".join(parts)


def serialize(scheme: LabellingScheme, writer: BinaryIO) -> int:
    data = encode(scheme)
    writer.write(data)
    return len(data)


class _Reader:
    def __init__(self, buf: bytes):
        self.buf = buf
        self.pos = 0

    def take(self, size: int, what: str) -> bytes:
        if self.pos + size > len(self.buf):
            raise IndexDecodeError(f"truncated index while reading {what} at byte {self.pos}")
        out = self.buf[self.pos:self.pos + size]
        self.pos += size
        return out

    def unpack(self, fmt: str, what: str):
        return struct.unpack(fmt, self.take(struct.calcsize(fmt), what))

    def array(self, dtype: str, count: int, what: str) -> np.ndarray:
        dt = np.dtype(dtype)
        return np.frombuffer(self.take(dt.itemsize * count, what), dtype=dt)


def decode(buf: bytes) -> LabellingScheme:
    r = _Reader(buf)
    if r.take(4, "magic") != MAGIC:
        raise IndexDecodeError("bad magic; not a QBS index file")
    version, n, k = r.unpack("<HIH", "header")
    if version != VERSION:
        raise IndexDecodeError(f"unsupported index version {version}")
    landmarks = r.array("<u4", k, "landmarks").astype(np.int32)
    try:
        lset = LandmarkSet(landmarks, n)
    except ValueError as exc:
        raise IndexDecodeError(f"invalid landmark block: {exc}") from None

    table = np.full((n, k), INF, dtype=np.uint16)
    for v in range(n):
        (c,) = r.unpack("<H", "label count")
        if c:
            ent = r.array("<u2", 2 * c, "label entries").reshape(c, 2)
            if ent[:, 0].max() >= k:
                raise IndexDecodeError(f"label of vertex {v} references landmark {ent[:, 0].max()}")
            table[v, ent[:, 0]] = ent[:, 1]

    (m,) = r.unpack("<I", "meta-edge count")
    meta = r.array("<u2", 3 * m, "meta-edges").reshape(m, 3).astype(np.int32)
    if m and meta[:, :2].max() >= k:
        raise IndexDecodeError("meta-edge references unknown landmark")
    delta = []
    for _ in range(m):
        (c,) = r.unpack("<I", "delta count")
        pairs = r.array("<u4", 2 * c, "delta edges").reshape(c, 2).astype(np.int32)
        if c and pairs.max() >= n:
            raise IndexDecodeError("delta edge references unknown vertex")
        delta.append(np.ascontiguousarray(pairs))
    if r.pos != len(buf):
        raise IndexDecodeError(f"{len(buf) - r.pos} trailing bytes after index")
    return LabellingScheme(lset, table, meta, delta)


def deserialize(reader: BinaryIO) -> LabellingScheme:
    return decode(reader.read())


def save(scheme: LabellingScheme, path) -> int:
    with open(path, "wb") as fh:
        return serialize(scheme, fh)


def load(path) -> LabellingScheme:
    with open(path, "rb") as fh:
        return deserialize(fh)
