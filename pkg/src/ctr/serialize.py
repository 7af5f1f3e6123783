"""Index file: magic, version, payload length, payload, CRC-32 of the payload.

All integers little-endian. The payload is a config block (JSON, sorted keys)
followed by the spatial and temporal sections; arrays are stored as
(dtype code, element count, raw little-endian bytes).
"""
import io
import json
import struct
import zlib
from dataclasses import asdict

import numpy as np

from . import _backend
from .bitvector import from_state as bitvector_from_state
from .csa import SpatialIndex
from .errors import ChecksumError, IndexFormatError
from .query import BuildConfig, CtrIndex

MAGIC = b"CTR1"
VERSION = 1

_DTYPES = {1: "<u1", 2: "<u2", 3: "<u8", 4: "<i8"}
_CODES = {np.dtype(v).newbyteorder("="): k for k, v in _DTYPES.items()}
_BV_TAGS = {"plain": 0, "rrr": 1, "sparse": 2}
_BV_PARAMS = {
    "plain": (("m", "factor"), ("words", "sb", "blk")),
    "rrr": (("m", "sampling"), ("classes", "offsets", "rank_samples", "pos_samples")),
    "sparse": (("m", "ones", "low_width", "high_len"), ("low", "high", "sel1", "sel0")),
}
_WTHT_ARRAYS = ("codes", "code_lens", "node_depth", "node_off", "node_ones",
                "node_lo", "node_mid", "node_hi", "node_left", "node_right")


class _Writer:
    def __init__(self):
        self.buf = io.BytesIO()

    def u8(self, v):
        self.buf.write(struct.pack("<B", v))

    def u64(self, v):
        self.buf.write(struct.pack("<Q", v))

    def i64(self, v):
        self.buf.write(struct.pack("<q", v))

    def blob(self, b):
        self.u64(len(b))
        self.buf.write(b)

    def array(self, a):
        a = np.asarray(a)
        code = _CODES.get(a.dtype.newbyteorder("="))
        if code is None:
            raise TypeError(f"cannot serialize dtype {a.dtype}")
        self.u8(code)
        self.u64(len(a))
        self.buf.write(np.ascontiguousarray(a, dtype=_DTYPES[code]).tobytes())

    def bitvector(self, bv):
        tag, params, arrays = bv.state()
        pnames, anames = _BV_PARAMS[tag]
        self.u8(_BV_TAGS[tag])
        for p in pnames:
            self.u64(params[p])
        for a in anames:
            self.array(arrays[a])


class _Reader:
    def __init__(self, data):
        self.data = memoryview(data)
        self.pos = 0

    def _take(self, k):
        if self.pos + k > len(self.data):
            raise IndexFormatError("truncated index payload")
        out = self.data[self.pos:self.pos + k]
        self.pos += k
        return out

    def u8(self):
        return struct.unpack("<B", self._take(1))[0]

    def u64(self):
        return struct.unpack("<Q", self._take(8))[0]

    def i64(self):
        return struct.unpack("<q", self._take(8))[0]

    def blob(self):
        return bytes(self._take(self.u64()))

    def array(self):
        code = self.u8()
        if code not in _DTYPES:
            raise IndexFormatError(f"unknown array dtype code {code}")
        dt = np.dtype(_DTYPES[code])
        count = self.u64()
        raw = self._take(count * dt.itemsize)
        return np.frombuffer(raw, dtype=dt)

    def bitvector(self, core):
        tag_code = self.u8()
        tags = {v: k for k, v in _BV_TAGS.items()}
        if tag_code not in tags:
            raise IndexFormatError(f"unknown bitvector tag {tag_code}")
        tag = tags[tag_code]
        pnames, anames = _BV_PARAMS[tag]
        params = {p: self.u64() for p in pnames}
        arrays = {a: self.array() for a in anames}
        return bitvector_from_state(tag, params, arrays, core)


def dumps(index):
    w = _Writer()
    w.blob(json.dumps(asdict(index.config), sort_keys=True).encode("utf-8"))

    sp = index.spatial
    w.buf.write(b"SPAT")
    for v in (sp.t_psi, sp.n, sp.z, sp.sigma_s):
        w.u64(v)
    w.array(sp.V.astype(np.int64))
    w.bitvector(sp.D)
    pparams, parrays = sp.psi.state()
    w.u64(pparams["sample_rate"])
    for a in ("samples", "ptrs", "stream"):
        w.array(parrays[a])

    tm = index.temporal
    w.buf.write(b"TEMP")
    w.u8(0 if tm.kind == "wm" else 1)
    w.blob(index.config.bitvector.encode("ascii"))
    params, arrays, levels = tm.state()
    w.u64(params["sigma"])
    w.u64(params["n"])
    if tm.kind == "wm":
        w.array(np.asarray(arrays["zeros"], dtype=np.uint64))
    else:
        w.i64(params["root"])
        for a in _WTHT_ARRAYS:
            w.array(np.asarray(arrays[a], dtype=np.int64))
    w.u64(len(levels))
    for bv in levels:
        w.bitvector(bv)

    payload = w.buf.getvalue()
    head = MAGIC + struct.pack("<IQ", VERSION, len(payload))
    return head + payload + struct.pack("<I", zlib.crc32(payload))


def loads(data, core=None):
    core = core or _backend.core
    data = bytes(data)
    if len(data) < 20 or data[:4] != MAGIC:
        raise IndexFormatError("not a CTR index (bad magic)")
    version, length = struct.unpack("<IQ", data[4:16])
    if version != VERSION:
        raise IndexFormatError(f"unsupported index version {version}")
    if len(data) != 16 + length + 4:
        raise IndexFormatError("index length field does not match file size")
    payload = data[16:16 + length]
    (crc,) = struct.unpack("<I", data[16 + length:])
    if zlib.crc32(payload) != crc:
        raise ChecksumError("index checksum mismatch")

    r = _Reader(payload)
    try:
        config = BuildConfig(**json.loads(r.blob().decode("utf-8")))
        if bytes(r._take(4)) != b"SPAT":
            raise IndexFormatError("missing spatial section")
        t_psi, n, z, sigma_s = (r.u64() for _ in range(4))
        V = r.array()
        D = r.bitvector(core)
        rate = r.u64()
        samples, ptrs, stream = r.array(), r.array(), r.array()
        psi = core.PsiArray(n, rate, samples, ptrs, stream)
        spatial = SpatialIndex(psi, D, V, n, z, sigma_s, t_psi)

        if bytes(r._take(4)) != b"TEMP":
            raise IndexFormatError("missing temporal section")
        kind = "wm" if r.u8() == 0 else "wtht"
        r.blob()
        sigma, tn = r.u64(), r.u64()
        if kind == "wm":
            zeros = r.array()
        else:
            root = r.i64()
            table = {a: r.array() for a in _WTHT_ARRAYS}
        levels = [r.bitvector(core) for _ in range(r.u64())]
        if kind == "wm":
            temporal = core.WaveletMatrix(tn, sigma, zeros, levels)
        else:
            temporal = core.WaveletTreeHT(tn, sigma, root, levels=levels, **table)
    except (KeyError, TypeError, ValueError, UnicodeDecodeError, struct.error) as exc:
        raise IndexFormatError(f"corrupt index payload: {exc}") from None
    if r.pos != len(payload):
        raise IndexFormatError("trailing bytes in index payload")
    idx = CtrIndex(spatial, temporal, config)
    idx.stats = idx.describe()
    return idx


def save_index(index, path):
    data = dumps(index)
    with open(path, "wb") as fh:
        fh.write(data)
    return len(data)


def load_index(path, core=None):
    with open(path, "rb") as fh:
        return loads(fh.read(), core)
