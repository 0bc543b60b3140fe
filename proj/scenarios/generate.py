#!/usr/bin/env python3
"""Regenerates the bundled scenario files."""
import json
import pathlib

HERE = pathlib.Path(__file__).resolve().parent
T = 0.1  # wall thickness [m]


def box(name, lo, hi, textured=(), edges=()):
    b = {"name": name, "min_m": list(lo), "max_m": list(hi)}
    if textured:
        b["textured_faces"] = list(textured)
    if edges:
        b["edges"] = [{"face": f, "a_m": list(a), "b_m": list(c)} for f, a, c in edges]
    return b


def stripes(face, axis_coord, along_axis, lo, hi, z0, z1, step):
    out = []
    n = int(round((hi - lo) / step))
    for i in range(1, n):
        s = lo + i * step
        a = [0.0, 0.0, z0]
        a[along_axis] = s
        a[1 - along_axis] = axis_coord
        c = list(a)
        c[2] = z1
        out.append((face, a, c))
    return out


def shell(prefix, x0, x1, y0, y1, h, step=0.5):
    """Floor, ceiling and four striped walls around [x0,x1]x[y0,y1]x[0,h]."""
    return [
        box(prefix + "floor", (x0 - T, y0 - T, -T), (x1 + T, y1 + T, 0.0), textured=["+z"]),
        box(prefix + "ceiling", (x0 - T, y0 - T, h), (x1 + T, y1 + T, h + T)),
        box(prefix + "wall_w", (x0 - T, y0, 0.0), (x0, y1, h),
            edges=stripes("+x", x0, 1, y0, y1, 0.0, h, step)),
        box(prefix + "wall_e", (x1, y0, 0.0), (x1 + T, y1, h),
            edges=stripes("-x", x1, 1, y0, y1, 0.0, h, step)),
        box(prefix + "wall_s", (x0, y0 - T, 0.0), (x1, y0, h),
            edges=stripes("+y", y0, 0, x0, x1, 0.0, h, step)),
        box(prefix + "wall_n", (x0, y1, 0.0), (x1, y1 + T, h),
            edges=stripes("-y", y1, 0, x0, x1, 0.0, h, step)),
    ]


def base(boxes, start, max_discoveries, out_dir):
    return {
        "world": {"boxes": boxes},
        "camera": {"fx_px": 537.0, "fy_px": 537.0, "cx_px": 320.0, "cy_px": 240.0,
                   "width_px": 640, "height_px": 480},
        "render": {"edge_pixel_radius_px": 3.0, "pixel_stride_px": 4,
                   "depth_noise_sigma0": 0.01, "variance_coeff": 1.0},
        "map": {"resolution_m": 0.1, "storage": "dense", "bounds_margin_m": 0.3},
        "exploration": {"n_rays": 16, "n_candidates": 8,
                        "inflate_hor_voxels": 3, "inflate_ver_voxels": 1},
        "mission": {"start_m": list(start), "max_star_discoveries": max_discoveries, "seed": 1,
                    "look_around_steps": 12, "look_around_amp_m": 0.1, "capture_spacing_m": 0.25},
        "output": {"dir": out_dir},
    }


def convex_room():
    return base(shell("room/", 0.0, 4.0, 0.0, 4.0, 2.5), (2.0, 2.0, 1.2), 3, "out/convex_room")


def two_rooms():
    h = 2.5
    boxes = shell("house/", 0.0, 8.1, 0.0, 4.0, h)
    # dividing wall at x in [4.0, 4.1] with a 1.0 m wide door, 2.0 m high
    door_lo, door_hi, door_top = 1.5, 2.5, 2.0
    boxes += [
        box("divider/left", (4.0, 0.0, 0.0), (4.1, door_lo, h),
            edges=stripes("-x", 4.0, 1, 0.0, door_lo, 0.0, h, 0.5) + stripes("+x", 4.1, 1, 0.0, door_lo, 0.0, h, 0.5)),
        box("divider/right", (4.0, door_hi, 0.0), (4.1, 4.0, h),
            edges=stripes("-x", 4.0, 1, door_hi, 4.0, 0.0, h, 0.5) + stripes("+x", 4.1, 1, door_hi, 4.0, 0.0, h, 0.5)),
        box("divider/lintel", (4.0, door_lo, door_top), (4.1, door_hi, h)),
    ]
    return base(boxes, (2.0, 2.0, 1.0), 3, "out/two_rooms")


def striped_wall():
    # a single untextured wall with vertical stripes, seen from 2 m away
    boxes = [
        box("ground", (-1.0, -3.0, -T), (5.0, 3.0, 0.0)),
        box("wall", (4.0, -3.0, 0.0), (4.2, 3.0, 2.5),
            edges=stripes("-x", 4.0, 1, -3.0, 3.0, 0.0, 2.5, 0.25)),
    ]
    return base(boxes, (2.0, 0.0, 1.2), 0, "out/striped_wall")


if __name__ == "__main__":
    for name, fn in [("convex_room", convex_room), ("two_rooms", two_rooms), ("striped_wall", striped_wall)]:
        (HERE / f"{name}.json").write_text(json.dumps(fn(), indent=2) + "\n")
