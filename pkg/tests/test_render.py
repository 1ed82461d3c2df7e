import logging

import numpy as np
import pytest

from twodigit import attract, render
from twodigit.errors import BudgetError, ValidationError
from twodigit.intpoly import parse_poly


def reference_mask(sys, depth, W, H, P=None):
    P = render.default_projection(sys.dim) if P is None else P
    xmin, xmax, ymin, ymax = render.default_viewport(sys, P)
    xy = attract.point_cloud(sys, depth).as_float() @ P.T
    px = np.floor((xy[:, 0] - xmin) / (xmax - xmin) * W).astype(int)
    py = H - 1 - np.floor((xy[:, 1] - ymin) / (ymax - ymin) * H).astype(int)
    out = np.zeros((H, W), dtype=bool)
    ok = (px >= 0) & (px < W) & (py >= 0) & (py < H)
    out[py[ok], px[ok]] = True
    return out


@pytest.mark.parametrize("poly, depth", [("2,2,1", 10), ("2,1,1", 13), ("2,1,1,1", 18)])
def test_mask_matches_cloud(poly, depth):
    sys = attract.default_system(parse_poly(poly))
    masks = render.rasterize(render.RenderJob(sys, depth, 90, 70))
    assert np.array_equal(masks.any(axis=0), reference_mask(sys, depth, 90, 70))


def test_labelled_masks_follow_first_digit():
    sys = attract.default_system(parse_poly("2,2,1"))
    masks = render.rasterize(render.RenderJob(sys, 12, 64, 64))
    cloud, labels = attract.labelled_cloud(sys, 12)
    P = render.default_projection(2)
    view = render.default_viewport(sys, P)
    sub = attract.PointCloud(cloud.depth, cloud.num[labels == 1], cloud.den)
    xy = sub.as_float()
    px = np.floor((xy[:, 0] - view[0]) / (view[1] - view[0]) * 64).astype(int)
    py = 63 - np.floor((xy[:, 1] - view[2]) / (view[3] - view[2]) * 64).astype(int)
    assert masks[1][py, px].all()


def test_square_tile_fills_its_cells():
    # z^2 - 2 at depth 12 is a 64 x 64 grid filling the square
    sys = attract.default_system(parse_poly("-2,0,1"))
    masks = render.rasterize(render.RenderJob(sys, 12, 64, 64, viewport=(0, 1, 0, 1)))
    assert masks.any(axis=0).mean() == 1.0


def test_ppm_roundtrip_and_colours():
    sys = attract.default_system(parse_poly("2,2,1"))
    for mode in render.MODES:
        data = render.render(render.RenderJob(sys, 10, 40, 30, mode=mode))
        assert data.startswith(b"P6\n40 30\n255\n")
        img = render.read_ppm(data)
        assert img.shape == (30, 40, 3)
        colours = {tuple(c) for c in img.reshape(-1, 3)}
        assert render.WHITE in colours
        assert len(colours) >= 2


def test_one_dimensional_and_projection():
    line = attract.default_system(parse_poly("2,1"))
    img = render.read_ppm(render.render(render.RenderJob(line, 8, 32, 4)))
    assert (img == 0).all(axis=2).any()
    cube = attract.default_system(parse_poly("2,0,0,1"))
    P = render.default_projection(3, (0, 2))
    masks = render.rasterize(render.RenderJob(cube, 12, 40, 40, projection=P))
    assert np.array_equal(masks.any(axis=0), reference_mask(cube, 12, 40, 40, P))


def test_budget_names_affordable_depth():
    sys = attract.default_system(parse_poly("2,2,1"))
    with pytest.raises(BudgetError, match="largest affordable depth is 10"):
        render.rasterize(render.RenderJob(sys, 11, 8, 8, budget=2 ** 10))


def test_validation():
    sys = attract.default_system(parse_poly("2,2,1"))
    with pytest.raises(ValidationError):
        render.rasterize(render.RenderJob(sys, 4, 8, 8, mode="other"))
    with pytest.raises(ValidationError):
        render.rasterize(render.RenderJob(sys, 0, 8, 8))
    with pytest.raises(ValidationError):
        render.auto_depth(0.5, 2.0)


@pytest.mark.parametrize("alpha, k", [(0.5, 10), (1.0, 5), (0.25, 20), (0.3, 17)])
def test_auto_depth(alpha, k):
    assert render.auto_depth(alpha, 2 ** -5) == k


def test_plan_depth_clips(caplog):
    sys = attract.default_system(parse_poly("2,-2,0,1"))
    with caplog.at_level(logging.WARNING):
        suggested, used = render.plan_depth(sys, 0.02563, 2 ** -5)
    assert suggested > used == render.max_affordable_depth(2)
    assert "exceeds the point budget" in caplog.text
