"""Element geometry: rectangles, IoU, and grounding annotations to elements.

Coordinates are CSS pixels with the origin at the top left. Geometry maps
are produced by a renderer (real or stub), serialized as a tab-separated
text file with a viewport header line:

    viewport\t<width>\t<height>
    <element path>\t<x>\t<y>\t<w>\t<h>
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import ValidationError
from .dom import path_sort_key

Rect = tuple[float, float, float, float]


@dataclass(frozen=True)
class ElementBox:
    element_path: str
    bbox: Rect

    def __post_init__(self):
        if self.bbox[2] < 0 or self.bbox[3] < 0:
            raise ValidationError("element box extent must be non-negative")

    @property
    def area(self) -> float:
        return self.bbox[2] * self.bbox[3]

    def contains(self, x: float, y: float) -> bool:
        bx, by, bw, bh = self.bbox
        return bx <= x <= bx + bw and by <= y <= by + bh


@dataclass(frozen=True)
class GeometryMap:
    viewport: tuple[float, float]
    boxes: tuple[ElementBox, ...]

    def __post_init__(self):
        if self.viewport[0] <= 0 or self.viewport[1] <= 0:
            raise ValidationError("viewport dimensions must be positive")

    @property
    def root(self) -> ElementBox:
        """Shallowest element, first in document order."""
        if not self.boxes:
            raise ValidationError("geometry map is empty")
        return min(self.boxes, key=lambda b: (len(path_sort_key(b.element_path)), path_sort_key(b.element_path)))


@dataclass(frozen=True)
class Region:
    """A drawn annotation: a box with positive extent, or a bare point."""

    kind: str
    bbox: Rect | None = None
    point: tuple[float, float] | None = None

    def __post_init__(self):
        if self.kind == "box":
            if self.bbox is None or self.bbox[2] <= 0 or self.bbox[3] <= 0:
                raise ValidationError("box regions need positive width and height")
        elif self.kind == "point":
            if self.point is None:
                raise ValidationError("point regions need coordinates")
        else:
            raise ValidationError(f"unknown region kind {self.kind!r}")

    @classmethod
    def box(cls, x: float, y: float, w: float, h: float) -> "Region":
        return cls(kind="box", bbox=(x, y, w, h))

    @classmethod
    def at_point(cls, x: float, y: float) -> "Region":
        return cls(kind="point", point=(x, y))

    def anchor(self) -> tuple[float, float]:
        """The point used for containment fallback (box center for boxes)."""
        if self.kind == "point":
            assert self.point is not None
            return self.point
        assert self.bbox is not None
        x, y, w, h = self.bbox
        return (x + w / 2, y + h / 2)

    def scaled(self, factor: float) -> "Region":
        """Convert screenshot pixels to CSS pixels by dividing by factor."""
        if factor <= 0:
            raise ValidationError("scale factor must be positive")
        if self.kind == "box":
            x, y, w, h = self.bbox  # type: ignore[misc]
            return Region.box(x / factor, y / factor, w / factor, h / factor)
        px, py = self.point  # type: ignore[misc]
        return Region.at_point(px / factor, py / factor)


def iou(a: Rect, b: Rect) -> float:
    """Intersection over union of two (x, y, w, h) rectangles; 0 on zero union."""
    ax, ay, aw, ah = a
    bx, by, bw, bh = b
    if aw < 0 or ah < 0 or bw < 0 or bh < 0:
        raise ValidationError("rectangles must have non-negative extent")
    ix = max(0.0, min(ax + aw, bx + bw) - max(ax, bx))
    iy = max(0.0, min(ay + ah, by + bh) - max(ay, by))
    inter = ix * iy
    union = aw * ah + bw * bh - inter
    if union <= 0:
        return 0.0
    # cancellation in the edge arithmetic can push the ratio a few ulps
    # past 1 for near-identical thin rectangles
    return min(1.0, inter / union)


def match_annotation(region: Region, geometry: GeometryMap) -> ElementBox:
    """Ground an annotation to the element it most plausibly refers to.

    Box regions pick the element with maximal IoU (ties: smaller area, then
    earlier document order). Point regions, and box regions overlapping
    nothing, fall back to the smallest element containing the anchor point;
    if nothing contains it, the root element is returned.
    """
    if not geometry.boxes:
        raise ValidationError("geometry map is empty")

    if region.kind == "box":
        assert region.bbox is not None
        scored = [(iou(region.bbox, b.bbox), b) for b in geometry.boxes]
        best_iou = max(s for s, _ in scored)
        if best_iou > 0:
            candidates = [b for s, b in scored if s == best_iou]
            return min(candidates, key=lambda b: (b.area, path_sort_key(b.element_path)))

    px, py = region.anchor()
    containing = [b for b in geometry.boxes if b.contains(px, py)]
    if containing:
        return min(containing, key=lambda b: (b.area, path_sort_key(b.element_path)))
    return geometry.root


def serialize_geometry(geometry: GeometryMap) -> str:
    lines = [f"viewport\t{geometry.viewport[0]:g}\t{geometry.viewport[1]:g}"]
    for box in geometry.boxes:
        x, y, w, h = box.bbox
        lines.append(f"{box.element_path}\t{x:g}\t{y:g}\t{w:g}\t{h:g}")
    return "\n".join(lines) + "\n"


def parse_geometry(text: str) -> GeometryMap:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("viewport\t"):
        raise ValidationError("geometry file must start with a viewport header")
    _, w, h = lines[0].split("\t")
    boxes = []
    for line in lines[1:]:
        path, x, y, bw, bh = line.split("\t")
        boxes.append(ElementBox(element_path=path, bbox=(float(x), float(y), float(bw), float(bh))))
    return GeometryMap(viewport=(float(w), float(h)), boxes=tuple(boxes))
