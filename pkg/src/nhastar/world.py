"""Occupancy-grid construction: shape builders and PGM raster import/export."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import OccupancyGrid


@dataclass(frozen=True)
class Rect:
    """Filled cell rectangle, columns ``x0..x1-1`` and rows ``y0..y1-1``."""

    x0: int
    y0: int
    x1: int
    y1: int
    kind = "rect"

    def mask(self, w: int, h: int) -> np.ndarray:
        m = np.zeros((h, w), dtype=bool)
        m[max(self.y0, 0):max(self.y1, 0), max(self.x0, 0):max(self.x1, 0)] = True
        return m


@dataclass(frozen=True)
class Circle:
    """Cells whose centers lie within ``r`` cells of (cx, cy)."""

    cx: float
    cy: float
    r: float
    kind = "circle"

    def mask(self, w: int, h: int) -> np.ndarray:
        jj, ii = np.mgrid[0:h, 0:w]
        return (ii + 0.5 - self.cx) ** 2 + (jj + 0.5 - self.cy) ** 2 <= self.r ** 2


@dataclass(frozen=True)
class Border:
    thickness: int = 1
    kind = "border"

    def mask(self, w: int, h: int) -> np.ndarray:
        t = self.thickness
        m = np.zeros((h, w), dtype=bool)
        m[:t, :] = m[h - t:, :] = True
        m[:, :t] = m[:, w - t:] = True
        return m


Shape = Rect | Circle | Border


@dataclass
class GridBuilder:
    width: int
    height: int
    cell_size: float = 1.0
    shapes: list = field(default_factory=list)

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError(f"grid dimensions must be positive, got {self.width} x {self.height}")

    def add(self, shape) -> "GridBuilder":
        if isinstance(shape, Border) and shape.thickness < 1:
            raise ValueError("border thickness must be >= 1")
        if not shape.mask(self.width, self.height).any():
            raise ValueError(f"{shape} lies entirely outside the {self.width} x {self.height} grid")
        self.shapes.append(shape)
        return self

    def rect(self, x0: int, y0: int, x1: int, y1: int) -> "GridBuilder":
        return self.add(Rect(x0, y0, x1, y1))

    def circle(self, cx: float, cy: float, r: float) -> "GridBuilder":
        return self.add(Circle(cx, cy, r))

    def border(self, thickness: int = 1) -> "GridBuilder":
        return self.add(Border(thickness))

    def build(self) -> OccupancyGrid:
        return build_grid(self)


def build_grid(builder: GridBuilder) -> OccupancyGrid:
    occ = np.zeros((builder.height, builder.width), dtype=bool)
    for shape in builder.shapes:
        m = shape.mask(builder.width, builder.height)
        if not m.any():
            raise ValueError(f"{shape} lies entirely outside the grid")
        occ |= m
    return OccupancyGrid(occ, builder.cell_size)


# ---------------------------------------------------------------- PGM


class PGMError(ValueError):
    pass


class PGMFormatError(PGMError):
    """Unsupported magic number."""


class PGMHeaderError(PGMError):
    """Malformed width/height/maxval header."""


class PGMTruncatedError(PGMError):
    """Raster shorter than the header promises."""


@dataclass(frozen=True)
class RasterImportConfig:
    threshold: float = 0.5
    invert: bool = False
    cell_size: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.threshold <= 1.0:
            raise ValueError(f"threshold must lie in [0, 1], got {self.threshold}")
        if not self.cell_size > 0:
            raise ValueError("cell_size must be positive")


_WS = b" \t\r\n\x0b\x0c"


def _header_tokens(data: bytes, count: int) -> tuple[list[bytes], int]:
    """Read ``count`` whitespace-separated header tokens after the magic, skipping comments."""
    pos = 2
    tokens = []
    n = len(data)
    while len(tokens) < count:
        while pos < n and (data[pos] in _WS or data[pos] == ord("#")):
            if data[pos] == ord("#"):
                while pos < n and data[pos] not in b"\r\n":
                    pos += 1
            else:
                pos += 1
        if pos >= n:
            raise PGMHeaderError("header ends before width, height and maxval")
        start = pos
        while pos < n and data[pos] not in _WS and data[pos] != ord("#"):
            pos += 1
        tokens.append(data[start:pos])
    return tokens, pos


def parse_pgm(data: bytes) -> tuple[np.ndarray, int]:
    """Return (pixels as a height x width integer array, maxval)."""
    magic = data[:2]
    if magic not in (b"P2", b"P5"):
        raise PGMFormatError(f"unsupported magic number {magic!r}; expected P2 or P5")
    if len(data) < 3 or data[2] not in _WS:
        raise PGMHeaderError("magic number must be followed by whitespace")
    tokens, pos = _header_tokens(data, 3)
    if pos < len(data) and data[pos] not in _WS:
        raise PGMHeaderError("maxval must be followed by a single whitespace byte")
    try:
        width, height, maxval = (int(t) for t in tokens)
    except ValueError as e:
        raise PGMHeaderError(f"non-integer header field in {tokens!r}") from e
    if width < 1 or height < 1:
        raise PGMHeaderError(f"image dimensions must be positive, got {width} x {height}")
    if not 0 < maxval < 65536:
        raise PGMHeaderError(f"maxval must lie in 1..65535, got {maxval}")

    npix = width * height
    if magic == b"P5":
        if pos >= len(data):
            raise PGMTruncatedError("no raster after header")
        pos += 1  # single whitespace byte before the raster
        bpp = 1 if maxval < 256 else 2
        raw = data[pos:pos + npix * bpp]
        if len(raw) < npix * bpp:
            raise PGMTruncatedError(f"raster has {len(raw)} bytes, expected {npix * bpp}")
        dtype = np.uint8 if bpp == 1 else np.dtype(">u2")
        pix = np.frombuffer(raw, dtype=dtype).astype(np.int64)
    else:
        body = data[pos:].split()
        if len(body) < npix:
            raise PGMTruncatedError(f"raster has {len(body)} samples, expected {npix}")
        try:
            pix = np.array([int(t) for t in body[:npix]], dtype=np.int64)
        except ValueError as e:
            raise PGMHeaderError("non-integer sample in P2 raster") from e
    if pix.size and pix.max() > maxval:
        raise PGMHeaderError(f"sample value {pix.max()} exceeds maxval {maxval}")
    return pix.reshape(height, width), maxval


def load_raster(data: bytes, cfg: RasterImportConfig | None = None) -> OccupancyGrid:
    """Threshold a PGM image into an occupancy grid.

    Dark pixels (luminance below ``threshold``) are obstacles unless
    ``invert`` is set.  Image row 0 becomes the top grid row.
    """
    cfg = cfg or RasterImportConfig()
    pix, maxval = parse_pgm(data)
    occ = (pix / maxval) < cfg.threshold
    if cfg.invert:
        occ = ~occ
    return OccupancyGrid(np.flipud(occ), cfg.cell_size)


def write_pgm(grid: OccupancyGrid, binary: bool = True) -> bytes:
    """Occupied cells black, free cells white; inverse of :func:`load_raster` at default settings."""
    img = np.where(np.flipud(grid.occupied), 0, 255).astype(np.uint8)
    h, w = img.shape
    if binary:
        return f"P5\n{w} {h}\n255\n".encode() + img.tobytes()
    rows = "\n".join(" ".join(str(v) for v in row) for row in img)
    return f"P2\n{w} {h}\n255\n{rows}\n".encode()


def shape_to_dict(shape) -> dict:
    d = {"type": shape.kind}
    for name in shape.__dataclass_fields__:
        d[name] = getattr(shape, name)
    return d


def shape_from_dict(d: dict):
    d = dict(d)
    kind = d.pop("type", None)
    cls = {"rect": Rect, "circle": Circle, "border": Border}.get(kind)
    if cls is None:
        raise ValueError(f"unknown shape type {kind!r}")
    unknown = set(d) - set(cls.__dataclass_fields__)
    if unknown:
        raise ValueError(f"unknown keys for {kind}: {sorted(unknown)}")
    return cls(**d)


def lane_width(grid: OccupancyGrid, column: int, row_lo: int, row_hi: int) -> int:
    """Longest run of free cells in ``column`` between rows ``row_lo`` and ``row_hi`` (exclusive)."""
    best = run = 0
    for j in range(row_lo, row_hi):
        run = 0 if grid.is_occupied(column, j) else run + 1
        best = max(best, run)
    return best


def scenario_fixtures():
    """Named built-in scenarios; see :mod:`nhastar.fixtures`."""
    from .fixtures import scenario_fixtures as _fixtures  # fixtures build on this module

    return _fixtures()
