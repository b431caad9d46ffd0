"""Seeded placement of movable bodies: boxes and synthetic ice fields."""
from __future__ import annotations

import math

import numpy as np

from ..physics import Body, ConvexPolygon, Role, box, collide_convex, convex_hull

MAX_ATTEMPTS = 10_000
CLEARANCE = 0.01  # m, minimum pairwise gap for placed bodies


class PlacementError(RuntimeError):
    """Rejection sampling failed; the spec is over-dense."""


def inflate(shape, margin: float):
    """Grow a convex shape outward by roughly `margin` (used for clearance)."""
    from ..physics.shapes import Compound, Disc

    if margin <= 0:
        return shape
    if isinstance(shape, Disc):
        return Disc(shape.radius + margin, center=shape.center)
    if isinstance(shape, Compound):
        return Compound([inflate(p, margin) for p in shape.parts])
    factor = 1.0 + margin / shape.bounding_radius()
    return ConvexPolygon(shape.vertices * factor)


def _collides_any(shape, pose, others, margin=CLEARANCE):
    big = inflate(shape, margin)
    r_big = big.bounding_radius()
    for other_shape, other_pose in others:
        if math.dist(pose[:2], other_pose[:2]) > r_big + other_shape.bounding_radius():
            continue
        if collide_convex(big, pose, other_shape, other_pose) is not None:
            return True
    return False


def place_bodies(
    rng,
    shapes_roles,
    region_lo,
    region_hi,
    avoid,
    next_id,
    clearance=CLEARANCE,
):
    """Place each (shape, role) at a random non-overlapping pose in the region.

    `avoid` is a list of (shape, pose) that must stay clear (walls, robot,
    goal keep-out). Raises PlacementError after MAX_ATTEMPTS rejections.
    """
    placed = []
    occupied = list(avoid)
    attempts = 0
    for shape, role in shapes_roles:
        r = shape.bounding_radius()
        while True:
            attempts += 1
            if attempts > MAX_ATTEMPTS:
                raise PlacementError(
                    f"could not place body {len(placed) + 1}/{len(shapes_roles)} "
                    f"after {MAX_ATTEMPTS} attempts"
                )
            x = rng.uniform(region_lo[0] + r, region_hi[0] - r)
            y = rng.uniform(region_lo[1] + r, region_hi[1] - r)
            theta = rng.uniform(-math.pi, math.pi)
            pose = np.array([x, y, theta])
            if not _collides_any(shape, pose, occupied, clearance):
                break
        body = Body.make(next_id, shape, role, pose)
        next_id += 1
        placed.append(body)
        occupied.append((shape, pose))
    return placed, next_id


def random_convex_floe(rng, n_points=None) -> ConvexPolygon:
    """Unit-scale convex floe: hull of 6-10 points around a circle."""
    n = int(n_points or rng.integers(6, 11))
    angles = np.sort(rng.uniform(0, 2 * math.pi, n))
    radii = rng.uniform(0.75, 1.0, n)
    pts = np.stack([radii * np.cos(angles), radii * np.sin(angles)], axis=1)
    hull = convex_hull(pts)
    return ConvexPolygon.centered(hull)


def generate_ice_field(
    region_lo,
    region_hi,
    concentration: float,
    rng,
    char_radius: float = 0.3,
    next_id: int = 1000,
):
    """Non-overlapping convex floes covering `concentration` of the region.

    Floes are laid out on a jittered cell grid (one floe per cell, scaled to
    the cell's area budget) so the realized area fraction lands within +/-2%
    of the target and floes can never overlap.
    """
    if not 0.0 <= concentration <= 0.5:
        raise PlacementError(f"ice concentration {concentration} outside [0, 0.5]")
    if concentration == 0.0:
        return []

    width = region_hi[0] - region_lo[0]
    height = region_hi[1] - region_lo[1]
    band_area = width * height
    target_area = concentration * band_area

    s = 2.1 * char_radius
    nx = max(1, int(width // s))
    ny = max(1, int(height // s))
    cell_w = width / nx
    cell_h = height / ny
    cell = min(cell_w, cell_h)
    n_cells = nx * ny

    # per-cell area budgets: lognormal spread, normalized to the target,
    # clipped so each floe fits inside its cell (a resampled hull scaled to
    # its cell's bounding box reliably covers ~65% of the cell)
    a_max = 0.65 * cell_w * cell_h
    budgets = np.exp(rng.normal(0.0, 0.25, n_cells))
    budgets *= target_area / budgets.sum()
    for _ in range(30):
        over = budgets > a_max
        if not over.any():
            break
        excess = float(np.sum(budgets[over] - a_max))
        budgets[over] = a_max
        under = ~over
        room = a_max - budgets[under]
        if room.sum() <= excess - 1e-12:
            raise PlacementError(
                f"cannot realize concentration {concentration} in this region"
            )
        budgets[under] += excess * room / room.sum()

    # each floe is scaled and placed to stay strictly inside its own cell,
    # which guarantees pairwise non-overlap; the fit-to-cell area cap varies
    # per hull, so shortfall carries over to later cells via `deficit`
    margin = 1e-3
    floes = []
    order = rng.permutation(n_cells)
    realized = 0.0
    deficit = 0.0
    for idx in order:
        remaining = target_area - realized
        if remaining <= 1e-9:
            break
        want = float(min(budgets[idx] + deficit, remaining))
        poly, cap = None, -1.0
        for _ in range(8):
            cand = random_convex_floe(rng)
            v = cand.vertices
            s_fit = min(
                (cell_w - 2 * margin) / (v[:, 0].max() - v[:, 0].min()),
                (cell_h - 2 * margin) / (v[:, 1].max() - v[:, 1].min()),
            )
            c_cap = cand.area * s_fit**2
            if c_cap > cap:
                poly, cap = cand, c_cap
            if cap >= want:
                break
        a_i = min(want, cap)
        deficit = want - a_i
        if a_i < 1e-4:
            continue
        scale = math.sqrt(a_i / poly.area)
        poly = ConvexPolygon(poly.vertices * scale)
        v = poly.vertices
        cx_i, cy_i = idx % nx, idx // nx
        x_lo = region_lo[0] + cx_i * cell_w
        y_lo = region_lo[1] + cy_i * cell_h
        x0, x1 = x_lo + margin - v[:, 0].min(), x_lo + cell_w - margin - v[:, 0].max()
        y0, y1 = y_lo + margin - v[:, 1].min(), y_lo + cell_h - margin - v[:, 1].max()
        # x1 can dip a hair below x0 when the floe exactly fills its cell
        x = rng.uniform(x0, x1) if x1 > x0 else (x0 + x1) / 2
        y = rng.uniform(y0, y1) if y1 > y0 else (y0 + y1) / 2
        body = Body.make(next_id, poly, Role.ICE_FLOE, np.array([x, y, 0.0]))
        next_id += 1
        realized += poly.area
        floes.append(body)

    if abs(realized - target_area) > 0.02 * band_area:
        raise PlacementError(
            f"realized concentration {realized / band_area:.3f} misses target {concentration}"
        )
    return floes
