"""Geometric substrate: projection, ray ratios, box corners, and rotated IoU."""

from .backend import BACKEND_NAME
from .core import (
    Box2,
    Box3,
    BoxBEV,
    Pixel,
    Point3,
    aabb_iou,
    bev_corners,
    bev_iou,
    box_corner_array,
    box_corners,
    iou_3d,
    pairwise_bev_iou,
    pairwise_iou_3d,
    project_box_aabb,
    project_point,
    ray_ratios,
)

__all__ = [
    "BACKEND_NAME",
    "Box2",
    "Box3",
    "BoxBEV",
    "Pixel",
    "Point3",
    "aabb_iou",
    "bev_corners",
    "bev_iou",
    "box_corner_array",
    "box_corners",
    "iou_3d",
    "pairwise_bev_iou",
    "pairwise_iou_3d",
    "project_box_aabb",
    "project_point",
    "ray_ratios",
]
