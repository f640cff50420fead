"""Pull-based P2P live streaming: mean-field diffusion models and a slot-synchronous simulator."""

from .params import (
    PeerSelectionKind,
    ReplyMode,
    Scheme,
    SchemeSpec,
    SelectionMode,
    StrategyKind,
    SystemParams,
)

__version__ = "0.1.0"
