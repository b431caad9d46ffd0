"""Narrowphase collision between convex shapes (SAT + face clipping)."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .shapes import Compound, ConvexPolygon, Disc, transform_points


@dataclass
class Contact:
    """Single contact point between two bodies; normal points from A to B."""

    body_a: int
    body_b: int
    point: np.ndarray
    normal: np.ndarray
    penetration: float


@dataclass
class ContactPoint:
    point: np.ndarray
    normal: np.ndarray  # from A to B, unit
    penetration: float


def _rotate(vecs: np.ndarray, theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    rot = np.array([[c, -s], [s, c]])
    return vecs @ rot.T


def _poly_world(shape: ConvexPolygon, pose):
    verts = transform_points(shape.vertices, pose)
    normals = _rotate(shape.normals, pose[2])
    return verts, normals


def _best_separation(verts_a, normals_a, verts_b):
    """Max over faces of A of min signed distance of B's verts to the face."""
    # (na, nb) signed distances of B vertices past each A face
    proj = normals_a @ verts_b.T  # (na, nb)
    face_offsets = np.einsum("ij,ij->i", normals_a, verts_a)
    sep = proj.min(axis=1) - face_offsets
    i = int(np.argmax(sep))
    return float(sep[i]), i


def _clip_segment(v0, v1, normal, offset):
    """Keep the part of segment [v0,v1] with normal·p <= offset."""
    d0 = float(normal @ v0) - offset
    d1 = float(normal @ v1) - offset
    pts = []
    if d0 <= 0:
        pts.append(v0)
    if d1 <= 0:
        pts.append(v1)
    if d0 * d1 < 0:
        t = d0 / (d0 - d1)
        pts.append(v0 + t * (v1 - v0))
    return pts


def collide_poly_poly(pa: ConvexPolygon, pose_a, pb: ConvexPolygon, pose_b):
    va, na = _poly_world(pa, pose_a)
    vb, nb = _poly_world(pb, pose_b)
    sep_a, face_a = _best_separation(va, na, vb)
    if sep_a > 0:
        return []
    sep_b, face_b = _best_separation(vb, nb, va)
    if sep_b > 0:
        return []

    # Reference face: the one with the larger (least negative) separation.
    if sep_b > sep_a + 1e-12:
        ref_verts, ref_normals, ref_face = vb, nb, face_b
        inc_verts, inc_normals = va, na
        flip = True
    else:
        ref_verts, ref_normals, ref_face = va, na, face_a
        inc_verts, inc_normals = vb, nb
        flip = False

    ref_n = ref_normals[ref_face]
    ref_v0 = ref_verts[ref_face]
    ref_v1 = ref_verts[(ref_face + 1) % len(ref_verts)]

    # Incident face: most anti-parallel face on the other polygon.
    inc_face = int(np.argmin(inc_normals @ ref_n))
    i0 = inc_verts[inc_face]
    i1 = inc_verts[(inc_face + 1) % len(inc_verts)]

    # Clip incident face against the two side planes of the reference face.
    tangent = ref_v1 - ref_v0
    tangent = tangent / np.linalg.norm(tangent)
    pts = _clip_segment(i0, i1, -tangent, float(-tangent @ ref_v0))
    if len(pts) == 2:
        pts = _clip_segment(pts[0], pts[1], tangent, float(tangent @ ref_v1))
    if not pts:
        return []

    face_offset = float(ref_n @ ref_v0)
    out = []
    for p in pts:
        depth = face_offset - float(ref_n @ p)
        if depth >= 0:
            normal = -ref_n if flip else ref_n  # from A to B
            out.append(ContactPoint(point=np.asarray(p, dtype=float), normal=normal, penetration=depth))
    return out


def collide_disc_disc(da: Disc, pose_a, db: Disc, pose_b):
    ca = transform_points(da.center[None, :], pose_a)[0]
    cb = transform_points(db.center[None, :], pose_b)[0]
    d = cb - ca
    dist = float(np.linalg.norm(d))
    r = da.radius + db.radius
    if dist >= r:
        return []
    normal = d / dist if dist > 1e-12 else np.array([1.0, 0.0])
    point = ca + normal * da.radius
    return [ContactPoint(point=point, normal=normal, penetration=r - dist)]


def collide_disc_poly(disc: Disc, pose_d, poly: ConvexPolygon, pose_p):
    """Contacts with normal pointing from the disc (A) to the polygon (B)."""
    c = transform_points(disc.center[None, :], pose_d)[0]
    verts, normals = _poly_world(poly, pose_p)
    d_faces = normals @ c - np.einsum("ij,ij->i", normals, verts)
    max_i = int(np.argmax(d_faces))
    max_d = float(d_faces[max_i])

    if max_d <= 0:
        # Disc center inside the polygon: push out along least-penetrated face.
        n = normals[max_i]  # outward from polygon
        pen = disc.radius - max_d
        point = c + n * (-max_d)
        return [ContactPoint(point=point, normal=-n, penetration=pen)]

    # Closest point on the polygon boundary (all edges at once).
    nxt = np.roll(verts, -1, axis=0)
    edges = nxt - verts
    tt = np.einsum("ij,ij->i", c - verts, edges) / np.einsum("ij,ij->i", edges, edges)
    np.clip(tt, 0.0, 1.0, out=tt)
    cand = verts + tt[:, None] * edges
    d2 = np.einsum("ij,ij->i", cand - c, cand - c)
    closest = cand[int(np.argmin(d2))]
    delta = c - closest
    dist = float(np.linalg.norm(delta))
    if dist >= disc.radius:
        return []
    normal_pd = delta / dist if dist > 1e-12 else normals[max_i]
    # normal from disc to polygon
    return [ContactPoint(point=closest, normal=-normal_pd, penetration=disc.radius - dist)]


def _flip(points):
    return [ContactPoint(point=p.point, normal=-p.normal, penetration=p.penetration) for p in points]


def collide_shapes(sa, pose_a, sb, pose_b):
    """All contact points between two shapes; normals point from A to B."""
    if isinstance(sa, Compound):
        out = []
        for part in sa.parts:
            out.extend(collide_shapes(part, pose_a, sb, pose_b))
        return out
    if isinstance(sb, Compound):
        out = []
        for part in sb.parts:
            out.extend(collide_shapes(sa, pose_a, part, pose_b))
        return out
    if isinstance(sa, Disc) and isinstance(sb, Disc):
        return collide_disc_disc(sa, pose_a, sb, pose_b)
    if isinstance(sa, Disc):
        return collide_disc_poly(sa, pose_a, sb, pose_b)
    if isinstance(sb, Disc):
        return _flip(collide_disc_poly(sb, pose_b, sa, pose_a))
    return collide_poly_poly(sa, pose_a, sb, pose_b)


def collide_convex(shape_a, pose_a, shape_b, pose_b):
    """Deepest single contact between two shapes, or None when disjoint."""
    pts = collide_shapes(shape_a, pose_a, shape_b, pose_b)
    if not pts:
        return None
    return max(pts, key=lambda p: p.penetration)


def shape_aabb(shape, pose):
    if isinstance(shape, Compound):
        boxes = [shape_aabb(p, pose) for p in shape.parts]
        arr = np.array(boxes)
        return np.array([arr[:, 0].min(), arr[:, 1].min(), arr[:, 2].max(), arr[:, 3].max()])
    if isinstance(shape, Disc):
        c = transform_points(shape.center[None, :], pose)[0]
        r = shape.radius
        return np.array([c[0] - r, c[1] - r, c[0] + r, c[1] + r])
    verts = transform_points(shape.vertices, pose)
    return np.array([verts[:, 0].min(), verts[:, 1].min(), verts[:, 0].max(), verts[:, 1].max()])
