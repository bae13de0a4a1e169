"""Exact enumeration of square-lattice self-avoiding polygons and walks."""

from .census import CensusConfig, CensusResult, Method, census, choose_k, inscribed_incl_excl
from .core import (
    BoundarySignature,
    CountSeries,
    CrossingSlot,
    LatticeMode,
    LinkLabel,
    Rect,
    Segment,
    SignatureError,
    Touch,
    encode_signature,
    match_partner,
    merge_series,
)
from .oracle import enumerate_polygons_oracle, enumerate_walks_oracle, inscribed_oracle
from .sweep import SweepPlan, full_sweep, make_plan, skip_sweep

__all__ = [
    "BoundarySignature", "CensusConfig", "CensusResult", "CountSeries", "CrossingSlot",
    "LatticeMode", "LinkLabel", "Method", "Rect", "Segment", "SignatureError", "SweepPlan",
    "Touch", "census", "choose_k", "encode_signature", "enumerate_polygons_oracle",
    "enumerate_walks_oracle", "full_sweep", "inscribed_incl_excl", "inscribed_oracle",
    "make_plan", "match_partner", "merge_series", "skip_sweep",
]
