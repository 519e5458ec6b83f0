"""Per-query counters mirroring the two-step candidate-generation cost model.

probes / ball_size track the step-1 index lookups, box_checks the
step-2 chain extensions, viable_boxes the step-1 hits, candidates the
survivors handed to verification.  candidates_l1 records what a plain
single-box filter would have produced on the same query, for
comparison.
"""

from dataclasses import dataclass, field


_FIELDS = (
    "probes",
    "ball_size",
    "viable_boxes",
    "box_checks",
    "candidates",
    "candidates_l1",
    "verifications",
    "results",
)


@dataclass
class QueryStats:
    probes: int = 0
    ball_size: int = 0
    viable_boxes: int = 0
    box_checks: int = 0
    candidates: int = 0
    candidates_l1: int = 0
    verifications: int = 0
    results: int = 0
    time_probe: float = 0.0
    time_chain: float = 0.0
    time_verify: float = 0.0

    def record(self, query_index: int, include_times: bool = False) -> str:
        """One machine-readable line; field order is fixed for diffing.

        Wall times are opt-in so that repeated runs over the same input
        produce byte-identical stats files.
        """
        parts = [f"query={query_index}"]
        parts += [f"{name}={getattr(self, name)}" for name in _FIELDS]
        if include_times:
            parts += [
                f"time_probe={self.time_probe:.6f}",
                f"time_chain={self.time_chain:.6f}",
                f"time_verify={self.time_verify:.6f}",
            ]
        return " ".join(parts)
