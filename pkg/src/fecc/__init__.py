"""Desk-scale simulator for error-correcting codes with limited noiseless feedback."""

from .bits import TriBitString, hamming
from .binary_codes import (
    CodeHandle,
    TieredCode,
    ConstructionFailed,
    LengthMismatch,
    TooManyErasures,
    build_base_code,
    min_distance,
    list_decode_errors,
    list_decode_erasures,
    repeat_code,
    complement_extend,
    make_tiered_code,
)
from .partitions import (
    PartitionDescriptor,
    TooManyStrings,
    distinguishing_indices,
    partition_descriptor,
    partition_index,
)

__all__ = [
    "TriBitString",
    "hamming",
    "CodeHandle",
    "TieredCode",
    "ConstructionFailed",
    "LengthMismatch",
    "TooManyErasures",
    "TooManyStrings",
    "build_base_code",
    "min_distance",
    "list_decode_errors",
    "list_decode_erasures",
    "repeat_code",
    "complement_extend",
    "make_tiered_code",
    "PartitionDescriptor",
    "distinguishing_indices",
    "partition_descriptor",
    "partition_index",
]
