"""Synthetic cue imaging and the classical corner-detection pipeline.

Stages mirror the close-range perception chain: HSV band filtering,
morphological open/close, watershed-style boundary refinement, connected
component bounding rectangles, Foerstner sub-pixel corner refinement with a
variable window (area = w*h/5), and geometric screening (+-10% side lengths,
+-5% side slopes). A mock long-range detector reproduces the
range-proportional-to-area detection rule.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import cv2
import numpy as np

from .errors import (
    EmptyMask,
    InsufficientRects,
    NonPositiveDepth,
    ScreenReject,
    SingularWindow,
)
from .geometry import CameraModel, CueSpec, Pose, cue_corners_world, project_points

HSV_LOWER = (35, 70, 90)
HSV_UPPER = (85, 255, 255)

GREEN_RGB = (40, 200, 60)
GREY_RGB = (128, 128, 128)

MIN_COMPONENT_AREA = 25      # px^2, small-patch rejection
LENGTH_TOLERANCE = 0.10
SLOPE_TOLERANCE = 0.05       # fraction of a right angle

SHIP_DETECT_RANGE = 250.0    # m at the reference area
SHIP_REFERENCE_AREA = 1.8 * 1.8
BAR_DETECT_RANGE = 100.0


@dataclass(frozen=True)
class Raster:
    """HSV image (H: 0-179, S: 0-255, V: 0-255), shape (height, width, 3) uint8."""

    hsv: np.ndarray

    @property
    def width(self) -> int:
        return self.hsv.shape[1]

    @property
    def height(self) -> int:
        return self.hsv.shape[0]

    def value_channel(self) -> np.ndarray:
        return self.hsv[:, :, 2].astype(float)


@dataclass(frozen=True)
class RenderResult:
    raster: Raster
    corner_pixels: np.ndarray  # (8, 2) ground-truth sub-pixel projections


@dataclass(frozen=True)
class BoundingRect:
    x: int
    y: int
    w: int
    h: int

    def corners(self) -> np.ndarray:
        return np.array([
            (self.x, self.y),
            (self.x + self.w - 1, self.y),
            (self.x + self.w - 1, self.y + self.h - 1),
            (self.x, self.y + self.h - 1),
        ], dtype=float)


@dataclass(frozen=True)
class CornerSet:
    """Eight screened sub-pixel corners in canonical order."""

    pixels: np.ndarray  # (8, 2)
    timestamp: float = 0.0


@dataclass(frozen=True)
class Detection:
    """Long-range bounding-box observation of the ship or bar."""

    kind: str                     # "ship" | "bar"
    center: tuple[float, float]   # px
    area: float                   # px^2
    timestamp: float = 0.0


# --------------------------------------------------------------------------
# Rendering


def render_cue(camera_pose: Pose, camera: CameraModel, cue: CueSpec, bar_pose: Pose,
               noise: float = 0.0, rng: np.random.Generator | None = None,
               supersample: int = 4) -> RenderResult:
    """Rasterize the cue: green rectangles on grey, anti-aliased by supersampling.

    ``noise`` is a per-pixel Gaussian value-noise level in [0, 1]. Ground
    truth corner projections are returned alongside the image.
    """
    corners_world = cue_corners_world(cue, bar_pose)
    pixels = project_points(camera_pose, camera, corners_world)  # NonPositiveDepth if behind
    w, h = camera.resolution
    ss = max(int(supersample), 1)
    shift = 4
    coverage = np.zeros((h * ss, w * ss), dtype=np.uint8)
    # fine-grid pixel k has center (k + 0.5)/ss - 0.5 in image coordinates,
    # so polygons must be shifted by (ss - 1)/2 fine pixels to stay aligned
    grid_offset = (ss - 1) / 2.0
    for quad in (pixels[:4], pixels[4:]):
        poly = np.round((quad * ss + grid_offset) * (1 << shift)).astype(np.int64).reshape(1, -1, 2)
        cv2.fillPoly(coverage, poly, 255, lineType=cv2.LINE_8, shift=shift)
    alpha = cv2.resize(coverage, (w, h), interpolation=cv2.INTER_AREA).astype(np.float32) / 255.0
    rgb = np.empty((h, w, 3), dtype=np.float32)
    for c in range(3):
        rgb[:, :, c] = GREY_RGB[c] * (1.0 - alpha) + GREEN_RGB[c] * alpha
    if noise > 0.0:
        if rng is None:
            rng = np.random.default_rng(0)
        rgb += rng.normal(0.0, noise * 255.0, rgb.shape).astype(np.float32)
    rgb = np.clip(rgb, 0, 255).astype(np.uint8)
    hsv = cv2.cvtColor(rgb, cv2.COLOR_RGB2HSV)
    return RenderResult(raster=Raster(hsv=hsv), corner_pixels=pixels)


# --------------------------------------------------------------------------
# Pipeline stages


def hsv_filter(img: Raster) -> np.ndarray:
    """Boolean mask: pixel true iff HSV falls inside the (inclusive) green band."""
    mask = cv2.inRange(img.hsv, np.array(HSV_LOWER, np.uint8), np.array(HSV_UPPER, np.uint8))
    return mask.astype(bool)


def morph_open_close(mask: np.ndarray, kernel_radius: int = 1) -> np.ndarray:
    """Opening then closing with a square structuring element."""
    if kernel_radius < 1:
        raise ValueError("kernel_radius must be >= 1")
    side = 2 * kernel_radius + 1
    kernel = np.ones((side, side), np.uint8)
    m = mask.astype(np.uint8)
    m = cv2.morphologyEx(m, cv2.MORPH_OPEN, kernel)
    m = cv2.morphologyEx(m, cv2.MORPH_CLOSE, kernel)
    return m.astype(bool)


def watershed_refine(mask: np.ndarray) -> np.ndarray:
    """Boundary refinement by simultaneous growth of sure-foreground/background seeds.

    Per connected component, sure-foreground is the component eroded by 1% of
    its bounding-rect diagonal (minimum 1 px) and sure-background the
    complement of the same dilation; both regions grow at equal speed until
    they meet, which reduces the refined boundary to the mid-surface between
    the seeds.
    """
    m = mask.astype(np.uint8)
    if not m.any():
        raise EmptyMask("watershed_refine requires at least one foreground region")
    n, labels, stats, _ = cv2.connectedComponentsWithStats(m, connectivity=8)
    out = np.zeros_like(m, dtype=bool)
    height, width = m.shape
    for i in range(1, n):
        x, y, w, h, _area = stats[i]
        d = max(1, round(0.01 * math.hypot(w, h)))
        pad = d + 2
        x0, y0 = max(x - pad, 0), max(y - pad, 0)
        x1, y1 = min(x + w + pad, width), min(y + h + pad, height)
        comp = (labels[y0:y1, x0:x1] == i).astype(np.uint8)
        kernel = np.ones((2 * d + 1, 2 * d + 1), np.uint8)
        sure_fg = cv2.erode(comp, kernel)
        if not sure_fg.any():
            out[y0:y1, x0:x1] |= comp.astype(bool)
            continue
        sure_bg = 1 - cv2.dilate(comp, kernel)
        # Equal-speed growth: a pixel belongs to the refined region iff it is
        # nearer the foreground seed than the background seed.
        d_fg = cv2.distanceTransform(1 - sure_fg, cv2.DIST_L2, 5)
        d_bg = cv2.distanceTransform(1 - sure_bg, cv2.DIST_L2, 5)
        out[y0:y1, x0:x1] |= d_fg <= d_bg
    return out


def find_bounding_rects(mask: np.ndarray, min_area: int = MIN_COMPONENT_AREA) -> list[BoundingRect]:
    """Axis-aligned bounding rect per 8-connected component, left to right."""
    m = mask.astype(np.uint8)
    n, _labels, stats, _ = cv2.connectedComponentsWithStats(m, connectivity=8)
    rects = []
    for i in range(1, n):
        x, y, w, h, area = stats[i]
        if area >= min_area:
            rects.append(BoundingRect(int(x), int(y), int(w), int(h)))
    rects.sort(key=lambda r: r.x)
    return rects


def foerstner_window_side(w: float, h: float) -> int:
    """Window side from the variable-area rule sw = (w*h)/5, rounded odd."""
    side = round(math.sqrt(w * h / 5.0))
    if side % 2 == 0:
        side += 1
    return max(side, 3)


def _rough_corners(mask: np.ndarray, rect: BoundingRect) -> np.ndarray:
    """Component points nearest each bounding-rect corner (contour extremes)."""
    sub = mask[rect.y:rect.y + rect.h, rect.x:rect.x + rect.w]
    ys, xs = np.nonzero(sub)
    pts = np.column_stack([xs + rect.x, ys + rect.y]).astype(float)
    rough = []
    for cx, cy in rect.corners():
        i = np.argmin(np.abs(pts[:, 0] - cx) + np.abs(pts[:, 1] - cy))
        rough.append(pts[i])
    return np.array(rough)


def _foerstner_refine(gray: np.ndarray, center: np.ndarray, side: int) -> np.ndarray:
    """Solve the structure-tensor normal equations for one sub-pixel corner."""
    h, w = gray.shape
    half = side // 2
    cx = int(round(center[0]))
    cy = int(round(center[1]))
    x0 = min(max(cx - half, 1), w - side - 1)
    y0 = min(max(cy - half, 1), h - side - 1)
    win = gray[y0 - 1:y0 + side + 1, x0 - 1:x0 + side + 1]
    gy, gx = np.gradient(win)
    gx = gx[1:-1, 1:-1]
    gy = gy[1:-1, 1:-1]
    a11 = float(np.sum(gx * gx))
    a12 = float(np.sum(gx * gy))
    a22 = float(np.sum(gy * gy))
    a = np.array([[a11, a12], [a12, a22]])
    det = a11 * a22 - a12 * a12
    trace = a11 + a22
    if trace <= 1e-9 or det <= 1e-9 * trace * trace:
        raise SingularWindow("gradient structure matrix is rank-deficient")
    xs, ys = np.meshgrid(np.arange(x0, x0 + side, dtype=float),
                         np.arange(y0, y0 + side, dtype=float))
    b = np.array([
        np.sum(gx * gx * xs + gx * gy * ys),
        np.sum(gx * gy * xs + gy * gy * ys),
    ])
    return np.linalg.solve(a, b)


def foerstner_corners(img: Raster, rects: list[BoundingRect],
                      mask: np.ndarray | None = None) -> np.ndarray:
    """Sub-pixel refine the 8 rough corners of the two cue rectangles.

    ``mask`` (the refined binary mask) locates the rough corners; when absent
    it is recomputed from the image.
    """
    if len(rects) != 2:
        raise InsufficientRects(f"expected exactly 2 rects, got {len(rects)}")
    if mask is None:
        mask = hsv_filter(img)
    gray = img.value_channel()
    refined = []
    for rect in rects:
        side = foerstner_window_side(rect.w, rect.h)
        roughs = _rough_corners(mask, rect)
        # For rotated rectangles the bounding box overstates the feature size;
        # keep the window from reaching across the quad's shortest side.
        shortest = min(np.linalg.norm(roughs[(i + 1) % 4] - roughs[i]) for i in range(4))
        limit = int(0.8 * shortest)
        if limit % 2 == 0:
            limit -= 1
        side = max(min(side, limit), 3)
        for rough in roughs:
            refined.append(_foerstner_refine(gray, rough, side))
    return np.array(refined)


def order_corners(corners: np.ndarray) -> np.ndarray:
    """Canonical order: rectangles sorted by center column, corners clockwise from top-left."""
    pts = np.asarray(corners, dtype=float).reshape(8, 2)
    by_u = pts[np.argsort(pts[:, 0], kind="stable")]
    quads = [by_u[:4], by_u[4:]]
    quads.sort(key=lambda q: q[:, 0].mean())
    ordered = []
    for quad in quads:
        s = quad[:, 0] + quad[:, 1]
        d = quad[:, 0] - quad[:, 1]
        tl = quad[np.argmin(s)]
        br = quad[np.argmax(s)]
        tr = quad[np.argmax(d)]
        bl = quad[np.argmin(d)]
        ordered.extend([tl, tr, br, bl])
    return np.array(ordered)


def _side_vectors(quad: np.ndarray) -> np.ndarray:
    return np.array([quad[(i + 1) % 4] - quad[i] for i in range(4)])


def screen_corners(corners: np.ndarray, timestamp: float = 0.0,
                   length_tolerance: float = LENGTH_TOLERANCE,
                   slope_tolerance: float = SLOPE_TOLERANCE) -> CornerSet:
    """Order corners canonically and verify the two rectangles agree geometrically.

    Corresponding side lengths must match within the length tolerance
    (relative to their mean) and side directions within the slope tolerance
    expressed as a fraction of a right angle. Raises ScreenReject on failure.
    """
    ordered = order_corners(corners)
    left = _side_vectors(ordered[:4])
    right = _side_vectors(ordered[4:])
    for i, (a, b) in enumerate(zip(left, right)):
        la, lb = np.linalg.norm(a), np.linalg.norm(b)
        mean = 0.5 * (la + lb)
        if mean <= 0 or abs(la - lb) > length_tolerance * mean:
            raise ScreenReject("length", f"side {i}: {la:.2f} px vs {lb:.2f} px")
        ang_a = math.atan2(a[1], a[0])
        ang_b = math.atan2(b[1], b[0])
        diff = abs(math.degrees(ang_a - ang_b)) % 180.0
        diff = min(diff, 180.0 - diff)
        if diff > slope_tolerance * 90.0:
            raise ScreenReject("slope", f"side {i}: direction differs by {diff:.2f} deg")
    return CornerSet(pixels=ordered, timestamp=timestamp)


def detect_corners(img: Raster, timestamp: float = 0.0,
                   kernel_radius: int = 1, min_area: int = MIN_COMPONENT_AREA) -> CornerSet:
    """Full close-range pipeline: filter, morphology, watershed, rects, refine, screen."""
    mask = hsv_filter(img)
    mask = morph_open_close(mask, kernel_radius)
    mask = watershed_refine(mask)
    rects = find_bounding_rects(mask, min_area)
    corners = foerstner_corners(img, rects, mask=mask)
    return screen_corners(corners, timestamp=timestamp)


def write_debug_images(img: Raster, out_dir: str, prefix: str = "pipeline",
                       kernel_radius: int = 1) -> list[str]:
    """Write per-stage masks and a corner overlay as PNG files for inspection."""
    os.makedirs(out_dir, exist_ok=True)
    paths = []

    def save(name, array):
        path = os.path.join(out_dir, f"{prefix}_{name}.png")
        cv2.imwrite(path, array)
        paths.append(path)

    bgr = cv2.cvtColor(img.hsv, cv2.COLOR_HSV2BGR)
    save("input", bgr)
    mask = hsv_filter(img)
    save("hsv_mask", mask.astype(np.uint8) * 255)
    mask = morph_open_close(mask, kernel_radius)
    save("morphology", mask.astype(np.uint8) * 255)
    mask = watershed_refine(mask)
    save("watershed", mask.astype(np.uint8) * 255)
    rects = find_bounding_rects(mask)
    overlay = bgr.copy()
    for r in rects:
        cv2.rectangle(overlay, (r.x, r.y), (r.x + r.w - 1, r.y + r.h - 1), (255, 0, 0), 1)
    try:
        corners = foerstner_corners(img, rects, mask=mask)
        for u, v in corners:
            cv2.circle(overlay, (int(round(u)), int(round(v))), 3, (0, 0, 255), 1)
    except (InsufficientRects, SingularWindow):
        pass
    save("corners", overlay)
    return paths


# --------------------------------------------------------------------------
# Mock long-range detector


def max_detection_range(kind: str, physical_area: float,
                        bar_reference_area: float) -> float:
    """Detection limit: linear in the object's physical area."""
    if kind == "ship":
        return SHIP_DETECT_RANGE * (physical_area / SHIP_REFERENCE_AREA)
    if kind == "bar":
        return BAR_DETECT_RANGE * (physical_area / bar_reference_area)
    raise ValueError(f"unknown detection class {kind!r}")


def mock_detect(kind: str, object_center_world, physical_area: float,
                camera_pose: Pose, camera: CameraModel,
                bar_reference_area: float | None = None,
                rng: np.random.Generator | None = None,
                center_noise_px: float = 0.0, area_noise: float = 0.0,
                timestamp: float = 0.0) -> Detection | None:
    """Range-gated stand-in for the learned object detector.

    Returns None when out of range, behind the camera, or projected outside
    the frame; otherwise a bounding-box center and pixel area with optional
    multiplicative/additive noise. The consumer is responsible for applying
    the long-range pipeline latency.
    """
    center = np.asarray(object_center_world, dtype=float)
    rng_range = np.linalg.norm(center - camera_pose.position)
    if bar_reference_area is None:
        bar_reference_area = physical_area
    if rng_range > max_detection_range(kind, physical_area, bar_reference_area):
        return None
    try:
        uv = project_points(camera_pose, camera, center.reshape(1, 3))[0]
    except NonPositiveDepth:
        return None
    u, v = float(uv[0]), float(uv[1])
    area_px = (camera.focal_length / rng_range) ** 2 * physical_area
    if rng is not None:
        if center_noise_px > 0:
            u += rng.normal(0.0, center_noise_px)
            v += rng.normal(0.0, center_noise_px)
        if area_noise > 0:
            area_px *= 1.0 + rng.normal(0.0, area_noise)
    if not camera.contains((u, v)) or area_px <= 0:
        return None
    return Detection(kind=kind, center=(u, v), area=area_px, timestamp=timestamp)
