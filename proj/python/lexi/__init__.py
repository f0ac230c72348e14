"""Lossless BF16 exponent compression."""

from ._lexi import (
    ContractViolation,
    CorruptStream,
    DataError,
    FramingError,
    UnsupportedVersion,
    analytic_reduction,
    bench,
    build_codebook,
    compress,
    decode_layer,
    decompress,
    encode_layer,
    from_bytes,
    generate,
    join,
    profile,
    simulate,
    split,
    to_bytes,
    transfer_time,
)

__all__ = [
    "ContractViolation",
    "CorruptStream",
    "DataError",
    "FramingError",
    "UnsupportedVersion",
    "analytic_reduction",
    "bench",
    "build_codebook",
    "compress",
    "decode_layer",
    "decompress",
    "encode_layer",
    "from_bytes",
    "generate",
    "join",
    "profile",
    "simulate",
    "split",
    "to_bytes",
    "transfer_time",
]
