"""Independent reference implementations used to cross-check the library.

Everything here is deliberately written the slow, obvious way (pure Python
scalars, dictionaries, and recursion) and never calls into the production
code paths it verifies.
"""

from __future__ import annotations

import math
import sys

sys.setrecursionlimit(100_000)

FACE_STEPS = ((1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1))


def rotation_ref(yaw, pitch, roll):
    """Sensor-to-world rotation, same yaw-pitch-roll convention, as lists."""
    ca, sa = math.cos(yaw), math.sin(yaw)
    cb, sb = math.cos(pitch), math.sin(pitch)
    cg, sg = math.cos(roll), math.sin(roll)
    return [
        [ca * cb, ca * sb * sg - sa * cg, ca * sb * cg + sa * sg],
        [sa * cb, sa * sb * sg + ca * cg, sa * sb * cg - ca * sg],
        [-sb, cb * sg, cb * cg],
    ]


def world_to_lidar_ref(position, yaw, pitch, roll, point):
    """R^T (p - t) with plain scalar arithmetic."""
    r = rotation_ref(yaw, pitch, roll)
    dx = point[0] - position[0]
    dy = point[1] - position[1]
    dz = point[2] - position[2]
    return (
        dx * r[0][0] + dy * r[1][0] + dz * r[2][0],
        dx * r[0][1] + dy * r[1][1] + dz * r[2][1],
        dx * r[0][2] + dy * r[1][2] + dz * r[2][2],
    )


def beam_digit_ref(tangents, x, y, z):
    """Band digit via the three explicit interval rules (if/elif chain)."""
    r = math.sqrt(x * x + y * y)
    n = len(tangents)
    if z < tangents[0] * r:
        return 0
    if z >= tangents[n - 1] * r:
        return n
    for k in range(1, n):
        if tangents[k - 1] * r <= z < tangents[k] * r:
            return k
    raise AssertionError("band rules failed to assign a digit")


def flood_fill_components(cells, order=None):
    """Face-connected components of equal-valued cells, by recursive fill.

    ``cells`` maps index triples to a hashable code.  ``order`` optionally
    fixes the visitation order (any permutation of the keys) to demonstrate
    order independence.  Returns a list of frozensets.
    """
    remaining = set(cells)
    components = []

    def fill(cell, code, bucket):
        if cell not in remaining or cells[cell] != code:
            return
        remaining.discard(cell)
        bucket.add(cell)
        i, j, k = cell
        for di, dj, dk in FACE_STEPS:
            fill((i + di, j + dj, k + dk), code, bucket)

    for seed in order if order is not None else sorted(cells):
        if seed in remaining:
            bucket = set()
            fill(seed, cells[seed], bucket)
            components.append(frozenset(bucket))
    return components


def exposed_face_counts(cells):
    """(along-x, along-y, along-z) exposed-face counts of a voxel set."""
    cell_set = set(map(tuple, cells))
    counts = [0, 0, 0]
    for i, j, k in cell_set:
        for axis, step in ((0, (1, 0, 0)), (1, (0, 1, 0)), (2, (0, 0, 1))):
            for sign in (1, -1):
                neighbor = (i + sign * step[0], j + sign * step[1], k + sign * step[2])
                if neighbor not in cell_set:
                    counts[axis] += 1
    return tuple(counts)


def exposed_face_area(cells, resolution):
    """Total surface area from per-face exposure counting."""
    ex, ey, ez = float(resolution[0]), float(resolution[1]), float(resolution[2])
    nx, ny, nz = exposed_face_counts(cells)
    return nz * (ex * ey) + ny * (ex * ez) + nx * (ey * ez)


def component_vsr(cells, resolution):
    """volume / surface-area of one voxel set."""
    ex, ey, ez = float(resolution[0]), float(resolution[1]), float(resolution[2])
    vol = ex * ey * ez * len(cells)
    return vol / exposed_face_area(cells, resolution)


def brute_force_pipeline(poses, beam_pitches, extent, resolution, excluded_boxes=()):
    """Label and segment the whole ROI with nested loops.

    ``poses`` is a sequence of (x, y, z, yaw, pitch, roll) tuples and
    ``beam_pitches`` one list of pitches per sensor.  Returns
    ``(cells, components)`` where ``cells`` maps active voxel triples to code
    tuples and ``components`` is the flood-fill partition.
    """
    dims = [int(round(extent[a] / resolution[a])) for a in range(3)]
    tangent_sets = [[math.tan(p) for p in pitches] for pitches in beam_pitches]

    cells = {}
    for i in range(dims[0]):
        cx = (i + 0.5) * resolution[0]
        for j in range(dims[1]):
            cy = (j + 0.5) * resolution[1]
            for k in range(dims[2]):
                cz = (k + 0.5) * resolution[2]
                excluded = any(
                    lo[0] <= cx <= hi[0] and lo[1] <= cy <= hi[1] and lo[2] <= cz <= hi[2]
                    for lo, hi in excluded_boxes
                )
                if excluded:
                    continue
                code = []
                for (px, py, pz, yaw, pitch, roll), tangents in zip(poses, tangent_sets):
                    lx, ly, lz = world_to_lidar_ref((px, py, pz), yaw, pitch, roll, (cx, cy, cz))
                    code.append(beam_digit_ref(tangents, lx, ly, lz))
                cells[(i, j, k)] = tuple(code)
    return cells, flood_fill_components(cells)


def brute_force_max_vsr(poses, beam_pitches, extent, resolution, excluded_boxes=()):
    """End-to-end reference objective: the largest component VSR."""
    _, components = brute_force_pipeline(poses, beam_pitches, extent, resolution, excluded_boxes)
    return max(component_vsr(comp, resolution) for comp in components)


def assert_valid_partition(grid, labels, comp, count):
    """Partition sanity: one component per active voxel, volumes that add up."""
    assert comp.shape == (grid.num_active,)
    assert count == len(set(comp.tolist()))
    assert comp.min() == 0 and comp.max() == count - 1, "component ids must be dense"
    voxels_per_comp = {}
    for row, c in enumerate(comp.tolist()):
        voxels_per_comp.setdefault(c, []).append(row)
    total = sum(len(v) for v in voxels_per_comp.values())
    assert total == grid.num_active, "every active voxel in exactly one component"
    import lidarplace as lp

    vol_sum = sum(
        lp.volume(grid.active_indices[rows], grid.resolution)
        for rows in voxels_per_comp.values()
    )
    expected = grid.num_active * grid.voxel_volume
    assert abs(vol_sum - expected) <= 1e-9 * expected, "subspace volumes must sum to the ROI volume"
