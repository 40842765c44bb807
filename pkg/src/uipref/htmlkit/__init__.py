from .dom import Document, DomNode, parse_document, path_sort_key
from .geometry import (
    ElementBox,
    GeometryMap,
    Rect,
    Region,
    iou,
    match_annotation,
    parse_geometry,
    serialize_geometry,
)
from .images import ImageRef, extract_images
from .snippets import snippet
from .staging import (
    DEFAULT_LIBRARIES,
    LibraryPin,
    StagingConfig,
    StagingManifest,
    asset_filename,
    stage_assets,
)

__all__ = [
    "DEFAULT_LIBRARIES",
    "Document",
    "DomNode",
    "ElementBox",
    "GeometryMap",
    "ImageRef",
    "LibraryPin",
    "Rect",
    "Region",
    "StagingConfig",
    "StagingManifest",
    "asset_filename",
    "extract_images",
    "iou",
    "match_annotation",
    "parse_document",
    "parse_geometry",
    "path_sort_key",
    "serialize_geometry",
    "snippet",
    "stage_assets",
]
