"""Plane curves over Q, blow-up towers, pencils and linear systems."""

from .linsys import condition_matrix, linear_system_dim
from .poly import CurveError, PlaneCurve, linear_form
from .smooth import SmoothnessReport, check_smooth, is_smooth
from .tower import (
    BasePoint,
    Cluster,
    ClusterError,
    ClusterPoint,
    FiberComponent,
    IrrationalBasePoint,
    PencilError,
    PencilState,
    StepRecord,
    Tower,
    blow_up_base_point,
    cluster_fiber,
    degenerate_member_config,
    member_fiber,
    pencil_base_points,
    resolve_pencil,
    start_pencil,
)

__all__ = [
    "BasePoint",
    "Cluster",
    "ClusterError",
    "ClusterPoint",
    "CurveError",
    "FiberComponent",
    "IrrationalBasePoint",
    "PencilError",
    "PencilState",
    "PlaneCurve",
    "SmoothnessReport",
    "StepRecord",
    "Tower",
    "blow_up_base_point",
    "check_smooth",
    "cluster_fiber",
    "condition_matrix",
    "degenerate_member_config",
    "is_smooth",
    "linear_form",
    "linear_system_dim",
    "member_fiber",
    "pencil_base_points",
    "resolve_pencil",
    "start_pencil",
]
