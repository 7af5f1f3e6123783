"""Bitvectors with rank/select: plain (rank directory), RRR-style, sparse.

Positions are 1-based: rank1(i) counts ones in the first i bits, select1(k)
returns the position of the k-th one, access(i) reads bit i.
"""
from . import _backend

FLAVORS = ("plain", "rrr32", "rrr64", "rrr128", "sparse")

PlainBitvector = _backend.core.PlainBitvector
RRRBitvector = _backend.core.RRRBitvector
CompressedBitvector = RRRBitvector
SparseBitvector = _backend.core.SparseBitvector


def parse_flavor(flavor):
    """'rrr64' -> ('rrr', 64); 'plain' -> ('plain', 32)."""
    if flavor == "plain":
        return "plain", 32
    if flavor == "sparse":
        return "sparse", 0
    if flavor.startswith("rrr") and flavor[3:].isdigit():
        return "rrr", int(flavor[3:])
    raise ValueError(f"unknown bitvector flavor {flavor!r}; expected one of {FLAVORS}")


def build_bitvector(bits, flavor="plain", core=None):
    core = core or _backend.core
    kind, param = parse_flavor(flavor)
    if kind == "plain":
        return core.PlainBitvector.from_bits(bits, param)
    if kind == "rrr":
        return core.RRRBitvector.from_bits(bits, param)
    return core.SparseBitvector.from_bits(bits)


def flavor_name(bv):
    """Inverse of parse_flavor for a built bitvector."""
    if bv.flavor == "rrr":
        return f"rrr{bv.sampling}"
    return bv.flavor


def from_state(tag, params, arrays, core=None):
    core = core or _backend.core
    cls = {"plain": core.PlainBitvector, "rrr": core.RRRBitvector, "sparse": core.SparseBitvector}[tag]
    return cls(**params, **arrays)
