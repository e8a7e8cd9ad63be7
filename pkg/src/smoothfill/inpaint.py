"""Raster image inpainting: PNM I/O, pixel boundary data, per-channel fills.

Images travel as binary PNM (P5 gray / P6 RGB, maxval 255). The mask is a P5
file where a pixel value of 128 or more marks a missing pixel. Each channel
is classified, boundary data is read off the known pixels (unit spacing), the
selected completion scheme fills the hole, and the result is clamped to
[0, 255] and rounded half away from zero. Known pixels pass through bit for
bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dataclass_field

import numpy as np

from .assembly import GHOST_REFLECT, BoundaryData, Point
from .grid import (
    CellClassification,
    CellKind,
    CollarError,
    classify_mask,
    outward_direction,
    stencil_data_points,
)
from .schemes import (
    BIHARMONIC_L,
    BIHARMONIC_N,
    HARMONIC,
    CompletedField,
    complete_biharmonic_laplacian,
    complete_biharmonic_normal,
    complete_harmonic,
)
from .solver import SolverOptions

INPAINT_METHODS = (HARMONIC, BIHARMONIC_L, BIHARMONIC_N)
MASK_THRESHOLD = 128  # pixel value >= 128 in a P5 mask means missing


class PNMError(ValueError):
    """Malformed or unsupported PNM data."""


@dataclass(frozen=True)
class RasterImage:
    """Gray or RGB raster with real-valued samples in [0, 255].

    ``samples`` has shape (height, width, channels).
    """

    width: int
    height: int
    channels: int
    samples: np.ndarray

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("image dimensions must be >= 1")
        if self.channels not in (1, 3):
            raise ValueError("channels must be 1 (gray) or 3 (RGB)")
        if self.samples.shape != (self.height, self.width, self.channels):
            raise ValueError("sample array shape does not match the declared dimensions")
        if not np.all(np.isfinite(self.samples)):
            raise ValueError("samples must be finite")
        if self.samples.min() < 0.0 or self.samples.max() > 255.0:
            raise ValueError("samples must lie in [0, 255]")

    @classmethod
    def from_array(cls, samples: np.ndarray) -> "RasterImage":
        samples = np.asarray(samples, dtype=np.float64)
        if samples.ndim == 2:
            samples = samples[:, :, None]
        h, w, c = samples.shape
        return cls(width=w, height=h, channels=c, samples=samples)

    def channel(self, c: int) -> np.ndarray:
        return self.samples[:, :, c]


def quantize(values: np.ndarray) -> np.ndarray:
    """Clamp to [0, 255] and round half away from zero."""
    return np.floor(np.clip(values, 0.0, 255.0) + 0.5)


def _skip_header_space(data: bytes, pos: int) -> int:
    while pos < len(data):
        ch = data[pos : pos + 1]
        if ch in b" \t\r\n":
            pos += 1
        elif ch == b"#":
            nl = data.find(b"\n", pos)
            if nl < 0:
                raise PNMError("unterminated comment in header")
            pos = nl + 1
        else:
            break
    return pos


def _read_header_int(data: bytes, pos: int) -> tuple[int, int]:
    pos = _skip_header_space(data, pos)
    start = pos
    while pos < len(data) and data[pos : pos + 1].isdigit():
        pos += 1
    if start == pos:
        raise PNMError("malformed header: expected an integer")
    return int(data[start:pos]), pos


def read_pnm(data: bytes) -> RasterImage:
    """Parse binary P5/P6 bytes with maxval 255."""
    magic = data[:2]
    if magic == b"P5":
        channels = 1
    elif magic == b"P6":
        channels = 3
    else:
        raise PNMError(f"unsupported magic {magic!r}; only binary P5/P6 are accepted")
    width, pos = _read_header_int(data, 2)
    height, pos = _read_header_int(data, pos)
    maxval, pos = _read_header_int(data, pos)
    if maxval != 255:
        raise PNMError(f"unsupported maxval {maxval}; only 255 is accepted")
    if pos >= len(data) or data[pos : pos + 1] not in b" \t\r\n":
        raise PNMError("header must end with a single whitespace byte")
    pos += 1
    count = width * height * channels
    payload = data[pos : pos + count]
    if len(payload) < count:
        raise PNMError(f"truncated payload: expected {count} bytes, got {len(payload)}")
    samples = np.frombuffer(payload, dtype=np.uint8).astype(np.float64)
    return RasterImage(width, height, channels, samples.reshape(height, width, channels))


def write_pnm(image: RasterImage) -> bytes:
    """Serialize as comment-free binary P5/P6 with maxval 255."""
    magic = b"P5" if image.channels == 1 else b"P6"
    header = magic + f"\n{image.width} {image.height}\n255\n".encode("ascii")
    payload = quantize(image.samples).astype(np.uint8).tobytes()
    return header + payload


def read_mask(data: bytes) -> np.ndarray:
    """Missing-pixel flags from a P5 mask: value >= 128 means missing."""
    image = read_pnm(data)
    if image.channels != 1:
        raise PNMError("mask must be a single-channel P5 file")
    return image.channel(0) >= MASK_THRESHOLD


def _axis_second_difference(
    channel: np.ndarray, missing: np.ndarray, row: int, col: int, dr: int, dc: int
) -> float:
    """Second difference along one axis at a known pixel, h = 1.

    Uses the centred stencil when both neighbours are known; otherwise falls
    back to the one-sided difference u(Q) - 2 u(Q+d) + u(Q+2d) built from two
    known pixels on the side away from the hole.
    """
    nr, nc = channel.shape

    def known(r: int, c: int) -> bool:
        return 0 <= r < nr and 0 <= c < nc and not missing[r, c]

    if known(row - dr, col - dc) and known(row + dr, col + dc):
        return float(
            channel[row - dr, col - dc] - 2.0 * channel[row, col] + channel[row + dr, col + dc]
        )
    for sr, sc in ((dr, dc), (-dr, -dc)):
        if known(row + sr, col + sc) and known(row + 2 * sr, col + 2 * sc):
            return float(
                channel[row, col]
                - 2.0 * channel[row + sr, col + sc]
                + channel[row + 2 * sr, col + 2 * sc]
            )
    raise CollarError(
        f"cannot form a Laplacian trace at (row={row}, col={col}): "
        "no two known pixels along one axis"
    )


def extract_boundary_data(
    channel: np.ndarray, cls: CellClassification, method: str
) -> BoundaryData:
    """Boundary data for one channel from known pixels only (unit spacing).

    Dirichlet values cover every known pixel a stencil tap can reach. For the
    Laplacian-trace scheme, traces are the 5-point Laplacian of the image at
    boundary pixels, with a one-sided fallback per axis where the centred
    stencil would touch missing pixels. For the normal-derivative scheme, q
    at a ring-1 pixel is the one-sided outward difference to the next known
    pixel; pixels with an ambiguous outward axis are skipped.
    """
    if method not in INPAINT_METHODS:
        raise ValueError(f"unknown inpainting method {method!r}")
    missing = cls.unknown_mask()
    g: dict[Point, float] = {}
    for row, col in sorted(stencil_data_points(cls)):
        g[(row, col)] = float(channel[row, col])
    f: dict[Point, float] | None = None
    q: dict[Point, float] | None = None
    if method == BIHARMONIC_L:
        f = {}
        for row, col in np.argwhere(cls.kinds == CellKind.BOUNDARY):
            row, col = int(row), int(col)
            f[(row, col)] = _axis_second_difference(
                channel, missing, row, col, 0, 1
            ) + _axis_second_difference(channel, missing, row, col, 1, 0)
    if method == BIHARMONIC_N:
        q = {}
        nr, nc = channel.shape
        for row, col in np.argwhere(cls.ring1):
            row, col = int(row), int(col)
            out = outward_direction(cls, row, col)
            if out is None:
                continue
            r, c = row + out[0], col + out[1]
            if 0 <= r < nr and 0 <= c < nc and not missing[r, c]:
                q[(row, col)] = float(channel[r, c] - channel[row, col])
    return BoundaryData(g=g, f=f, q=q)


@dataclass(frozen=True)
class InpaintJob:
    """One inpainting run: image, missing-pixel flags, scheme, solver options."""

    image: RasterImage
    mask: np.ndarray
    method: str
    options: SolverOptions = dataclass_field(default_factory=SolverOptions)
    strict_stencil: bool = False
    ghost: str = GHOST_REFLECT

    def __post_init__(self):
        if self.method not in INPAINT_METHODS:
            raise ValueError(f"unknown inpainting method {self.method!r}")
        mask = np.asarray(self.mask, dtype=bool)
        if mask.shape != (self.image.height, self.image.width):
            raise ValueError("mask dimensions do not match the image")
        object.__setattr__(self, "mask", mask)


@dataclass(frozen=True)
class InpaintResult:
    image: RasterImage
    fields: tuple[CompletedField, ...]  # one per channel; empty for an empty mask

    @property
    def iterations(self) -> int:
        return sum(s.iterations for f in self.fields for s in f.stats)


def run_inpaint_job(job: InpaintJob) -> InpaintResult:
    """Classify once, then fill each channel independently."""
    image = job.image
    out = image.samples.copy()
    if not job.mask.any():
        return InpaintResult(RasterImage(image.width, image.height, image.channels, out), ())
    cls = classify_mask(image.width, image.height, job.mask)
    pts = cls.index.points
    fields = []
    for c in range(image.channels):
        channel = image.channel(c)
        data = extract_boundary_data(channel, cls, job.method)
        if job.method == HARMONIC:
            completed = complete_harmonic(cls, None, data.g, job.options)
        elif job.method == BIHARMONIC_L:
            completed = complete_biharmonic_laplacian(cls, None, data.g, data.f, job.options)
        else:
            completed = complete_biharmonic_normal(
                cls,
                None,
                data.g,
                data.q,
                job.options,
                strict_stencil=job.strict_stencil,
                ghost=job.ghost,
            )
        out[pts[:, 0], pts[:, 1], c] = quantize(completed.unknown_values())
        fields.append(completed)
    return InpaintResult(
        RasterImage(image.width, image.height, image.channels, out), tuple(fields)
    )


def inpaint(job: InpaintJob) -> RasterImage:
    """Fill the masked pixels and return the finalized image."""
    return run_inpaint_job(job).image


def inpaint_metrics(
    result: InpaintResult,
    job: InpaintJob,
    truth: RasterImage | None = None,
) -> dict:
    """Metrics over the missing pixels: sup error and PSNR need a truth image."""
    out = {"method": job.method, "sup_error": None, "psnr": None, "iterations": result.iterations}
    if truth is not None:
        if (truth.height, truth.width, truth.channels) != (
            job.image.height,
            job.image.width,
            job.image.channels,
        ):
            raise ValueError("truth image dimensions do not match the input")
        if job.mask.any():
            diff = result.image.samples[job.mask] - truth.samples[job.mask]
            out["sup_error"] = float(np.max(np.abs(diff)))
            mse = float(np.mean(diff**2))
            out["psnr"] = math.inf if mse == 0.0 else 10.0 * math.log10(255.0**2 / mse)
        else:
            out["sup_error"] = 0.0
            out["psnr"] = math.inf
    return out


def synthetic_bump(size: int = 64) -> RasterImage:
    """Smooth separable cosine bump peaking at the top-left corner."""
    idx = np.arange(size, dtype=np.float64)
    profile = 1.0 + np.cos(math.pi * idx / (size / 2.0))
    samples = 127.5 * np.outer(profile, profile) / 2.0
    return RasterImage.from_array(samples)


def synthetic_ramp(width: int = 64, height: int = 64) -> RasterImage:
    """Integer horizontal ramp: pixel value equals the column index, capped at 255."""
    cols = np.minimum(np.arange(width, dtype=np.float64), 255.0)
    return RasterImage.from_array(np.tile(cols, (height, 1)))


def synthetic_edge(width: int = 64, height: int = 64) -> RasterImage:
    """Hard vertical edge: dark left half (64), bright right half (192)."""
    samples = np.full((height, width), 64.0)
    samples[:, width // 2 :] = 192.0
    return RasterImage.from_array(samples)
