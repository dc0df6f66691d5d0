"""Deterministic SVG pictures of tilings and limit-set point clouds."""

import json
import re
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

import corpus
from vinberg.hilbert import GeometryError, witness_chart
from vinberg.limits import sample_limit_set
from vinberg.orbits import domain_approx
from vinberg.svg import conic_loop, render_points_svg, render_tiling_svg


def _metadata(svg_text):
    blob = re.search(r"<metadata>(.*?)</metadata>", svg_text, re.S).group(1)
    return json.loads(blob)


def test_tiling_picture_is_deterministic():
    P = corpus.build("t237")
    chart = witness_chart(P)
    dom = domain_approx(P, 2)
    one = render_tiling_svg(dom, chart)
    two = render_tiling_svg(dom, chart)
    assert one == two
    assert one.startswith('<svg xmlns="http://www.w3.org/2000/svg"')
    assert one.endswith("</svg>\n")


def test_tiling_metadata_and_classes():
    P = corpus.build("t237")
    chart = witness_chart(P)
    svg = render_tiling_svg(domain_approx(P, 2), chart)
    assert _metadata(svg) == {"kind": "tiling", "depth": 2, "tile_counts": [1, 3, 5]}
    assert svg.count('class="tile depth-0 fundamental"') == 1
    assert svg.count('class="tile depth-2"') == 5
    # every tile path is a closed loop
    assert all(d.endswith("Z") for d in re.findall(r'd="([^"]*)"', svg))


def test_tiling_with_conic_overlay():
    P = corpus.build("t237")
    chart = witness_chart(P)
    loop = conic_loop(P, chart, n=128)
    assert loop.shape == (128, 2)
    # the loop is star-shaped around the chart origin and strictly planar
    radii = np.linalg.norm(loop, axis=1)
    assert (radii > 0).all() and np.isfinite(radii).all()
    svg = render_tiling_svg(domain_approx(P, 2), chart, conic_points=loop)
    assert svg.count('class="conic"') == 1


def test_conic_loop_absent_when_no_quadric():
    aff = corpus.build("aff")  # no invariant form (not symmetrizable)
    assert conic_loop(aff, witness_chart(aff)) is None
    seg = corpus.build("seg")  # planar pictures only
    assert conic_loop(seg, witness_chart(seg)) is None


def test_tiling_needs_planar_chart():
    seg = corpus.build("seg")
    with pytest.raises(GeometryError, match="planar"):
        render_tiling_svg(domain_approx(seg, 2), witness_chart(seg))


def test_point_cloud_picture():
    P = corpus.build("t237")
    chart = witness_chart(P)
    sample = sample_limit_set(P, word_length=8, count=100, seed=1)
    pts = [chart.to_chart(p) for p in sample.points]
    svg = render_points_svg(pts, conic_points=conic_loop(P, chart))
    assert svg == render_points_svg(pts, conic_points=conic_loop(P, chart))
    assert _metadata(svg) == {"kind": "points", "count": len(pts)}
    assert svg.count("<circle") == len(pts)
    with pytest.raises(GeometryError, match="no points"):
        render_points_svg([])
    with pytest.raises(GeometryError, match="planar"):
        render_points_svg([(1.0, 2.0, 3.0)])
