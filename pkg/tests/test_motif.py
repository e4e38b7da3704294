import numpy as np
import pytest

from motiflab import expr as ex
from motiflab import motif
from motiflab.render import render_scene


def checker_tile(h=8, w=8):
    tile = np.zeros((h, w, 3), dtype=np.uint8)
    tile[: h // 2, : w // 2] = (200, 10, 10)
    tile[h // 2:, w // 2:] = (10, 200, 10)
    return tile


class TestPresets:
    def test_ding_dong_entry(self):
        p = motif.preset("ding-dong")
        assert p.equation == "x^2+y^2+z^3-z^2"
        assert p.params == {}

    def test_atom_fish_entry(self):
        p = motif.preset("atom-fish")
        assert p.params == {"a": 0.02}
        assert p.zoom == 0.91
        assert ex.free_params(ex.parse(p.equation)) == {"a"}

    def test_ring_blaster_entry(self):
        p = motif.preset("ring-blaster")
        assert p.zoom == 0.47
        assert p.params == {"a": 0.02}

    def test_fig8_family_four_factors(self):
        p = motif.preset("fig8-family")
        assert p.equation.count("*(") >= 3
        for k in (2, 3, 5):
            assert f"(x/{k})^2" in p.equation
        assert "(x/5)^2+(y/5)^2+(z/5)^2-2*x/5*y/5*z/5-1" in p.equation

    def test_unknown_name_lists_available(self):
        with pytest.raises(motif.UnknownPresetError) as err:
            motif.preset("nope")
        assert "ring-blaster" in str(err.value)

    def test_catalog_json_contract(self):
        docs = motif.catalog_json()
        names = {d["name"] for d in docs}
        assert names == set(motif.preset_names())
        for d in docs:
            assert set(d) == {"name", "title", "equation", "params", "zoom"}

    @pytest.mark.parametrize("name", motif.preset_names())
    def test_every_preset_renders_visibly(self, name):
        sc = motif.preset(name).scene(width=96, height=96)
        from motiflab.render import render_with_stats
        img, stats = render_with_stats(sc)
        assert stats.eval_error_count == 0
        bg = np.array(sc.color_background, dtype=np.uint8)
        frac = (img != bg).any(axis=2).mean()
        assert frac >= 0.005
        assert len(np.unique(img.reshape(-1, 3), axis=0)) <= 3


class TestFibonacciLayout:
    def test_single_copy_centered(self):
        tile = checker_tile()
        canvas, placements = motif.fibonacci_layout(tile, 1, 100, 100)
        assert len(placements) == 1
        x, y, w, h = placements[0]
        assert (x, y) == ((100 - w) // 2, (100 - h) // 2)

    def test_five_copies_exact_size_ratios(self):
        tile = checker_tile()
        canvas, placements = motif.fibonacci_layout(tile, 5, 200, 150)
        assert len(placements) == 5
        widths = sorted(p[2] for p in placements)
        heights = sorted(p[3] for p in placements)
        uw, uh = widths[0], heights[0]
        assert widths == [uw * f for f in (1, 1, 2, 3, 5)]
        assert heights == [uh * f for f in (1, 1, 2, 3, 5)]

    def test_deterministic(self):
        tile = checker_tile()
        a, pa = motif.fibonacci_layout(tile, 6, 160, 160)
        b, pb = motif.fibonacci_layout(tile, 6, 160, 160)
        assert (a == b).all()
        assert pa == pb

    def test_copies_land_on_canvas(self):
        canvas, placements = motif.fibonacci_layout(checker_tile(), 7, 300, 240)
        for x, y, w, h in placements:
            assert 0 <= x and x + w <= 300
            assert 0 <= y and y + h <= 240

    def test_canvas_too_small(self):
        with pytest.raises(ValueError):
            motif.fibonacci_layout(checker_tile(), 6, 4, 4)


class TestGridTile:
    def test_identity(self):
        tile = checker_tile()
        assert (motif.grid_tile(tile, 1, 1) == tile).all()

    def test_2x2_plain_copies(self):
        tile = checker_tile()
        out = motif.grid_tile(tile, 2, 2, mirror=False)
        assert out.shape == (16, 16, 3)
        for i in range(2):
            for j in range(2):
                assert (out[i * 8:(i + 1) * 8, j * 8:(j + 1) * 8] == tile).all()

    def test_2x2_mirror_checkerboard(self):
        tile = checker_tile()
        out = motif.grid_tile(tile, 2, 2, mirror=True)
        flipped = tile[:, ::-1]
        assert (out[0:8, 8:16] == flipped).all()
        assert (out[8:16, 0:8] == flipped).all()
        assert (out[0:8, 0:8] == tile).all()
        assert (out[8:16, 8:16] == tile).all()

    def test_dimensions(self):
        out = motif.grid_tile(checker_tile(6, 10), 3, 4)
        assert out.shape == (18, 40, 3)

    def test_bad_counts(self):
        with pytest.raises(ValueError):
            motif.grid_tile(checker_tile(), 0, 2)


class TestApplyPalette:
    def test_identity_mapping(self):
        tile = checker_tile()
        colors = {tuple(c) for c in np.unique(tile.reshape(-1, 3), axis=0)}
        mapping = {c: c for c in colors}
        assert (motif.apply_palette(tile, mapping) == tile).all()

    def test_class_sizes_preserved(self):
        sc = motif.preset("atom-fish").scene(width=64, height=64)
        img = render_scene(sc)
        present = [tuple(int(v) for v in c)
                   for c in np.unique(img.reshape(-1, 3), axis=0)]
        palette = [(10, 20, 30), (200, 100, 0), (240, 240, 220)]
        mapping = {old: palette[i] for i, old in enumerate(present)}
        out = motif.apply_palette(img, mapping)
        for old, new in mapping.items():
            n_old = ((img == np.uint8(old)).all(axis=2)).sum()
            n_new = ((out == np.uint8(new)).all(axis=2)).sum()
            assert n_old == n_new

    def test_missing_color_rejected(self):
        tile = checker_tile()
        with pytest.raises(ValueError):
            motif.apply_palette(tile, {(0, 0, 0): (1, 1, 1)})
