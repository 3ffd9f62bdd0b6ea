"""Succinct interval graph representations with adjacency and degree queries."""

from .adjacency import AdjCode, adj_decode_endpoint, adj_query, adj_reconstruct, build_adj
from .audit import AuditReport, log_factorial_bits, redundancy_curve, redundancy_report
from .cellprobe import CellProbeCode, build_cellprobe, cp_adj_query, cp_reconstruct
from .core import (
    ClassicRep,
    UniversalRep,
    classic_to_universal,
    normalize_to_classic,
    oracle_adj,
    oracle_deg,
    reconstruct_from_degrees,
    sample_uniform,
    validate_universal,
)
from .degree import DegCode, build_deg, deg_query, deg_reconstruct
from .errors import CorruptCode, FormatError, InconsistentDegrees, InvalidRepresentation, InvariantError
from .spill import SpillCode, access_chain, encode_chain, spill_decode_x, spill_decode_y, spill_encode, spill_params

__all__ = [name for name in dir() if not name.startswith("_")]
