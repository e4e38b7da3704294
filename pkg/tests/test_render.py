import math

import numpy as np
import pytest

from motiflab import expr as ex
from motiflab import render as rn

import conftest as eqs

SPHERE = ex.parse("x^2+y^2+z^2-1")


def sphere_scene(**kw):
    defaults = dict(equation=SPHERE, zoom=1.0, width=256, height=256)
    defaults.update(kw)
    return rn.Scene(**defaults)


def nonbackground_fraction(img, scene):
    bg = np.array(scene.color_background, dtype=np.uint8)
    return float((img != bg).any(axis=2).mean())


def disk_square_intersection_area(r, size):
    """Area of a radius-r disk centered on a size x size square."""
    a = size / 2
    if r <= a:
        return math.pi * r * r
    if r * r >= 2 * a * a:
        return size * size
    segment = r * r * math.acos(a / r) - a * math.sqrt(r * r - a * a)
    return math.pi * r * r - 4 * segment


class TestScene:
    def test_rejects_nondistinct_colors(self):
        with pytest.raises(ValueError):
            rn.Scene(equation=SPHERE, color_front=(1, 2, 3), color_back=(1, 2, 3))

    def test_rejects_unbound_params(self):
        with pytest.raises(ValueError):
            rn.Scene(equation=ex.parse("x^2-a"))

    def test_json_round_trip(self):
        sc = sphere_scene(zoom=0.47, params={}, width=128, height=96)
        assert rn.Scene.from_dict(sc.to_dict()) == sc

    def test_clip_radius_circumscribes_view(self):
        sc = sphere_scene(zoom=0.04)
        assert sc.clip_radius == pytest.approx(math.sqrt(2) * 25)


class TestCameraRay:
    def test_center_pixel_on_axis(self):
        sc = sphere_scene(width=256, height=256)
        r1 = rn.camera_ray(sc, 127, 127)
        r2 = rn.camera_ray(sc, 128, 128)
        # pixel centers straddle the axis symmetrically
        assert r1.origin[0] == pytest.approx(-r2.origin[0])
        assert r1.origin[1] == pytest.approx(-r2.origin[1])
        assert abs(r1.origin[0]) <= 1.0 / 256
        assert r1.direction == (0.0, 0.0, -1.0)

    def test_corner_maps_to_unit_extent(self):
        sc = sphere_scene(width=200, height=200, zoom=1.0)
        r = rn.camera_ray(sc, 199, 0)
        assert r.origin[0] == pytest.approx(1.0, abs=1.01 / 200)
        assert r.origin[1] == pytest.approx(1.0, abs=1.01 / 200)

    def test_zoom_004_shows_25_world_units(self):
        sc = sphere_scene(width=512, height=512, zoom=0.04)
        r = rn.camera_ray(sc, 511, 256)
        assert r.origin[0] == pytest.approx(25.0, abs=25.0 / 256)

    def test_out_of_range_pixel(self):
        sc = sphere_scene()
        with pytest.raises(ValueError):
            rn.camera_ray(sc, 256, 0)


class TestFirstHit:
    def test_analytic_sphere_hit(self):
        sc = sphere_scene(zoom=0.2)  # clip ball big enough for origin at z=5
        hit = rn.first_hit(sc, rn.Ray((0, 0, 5.0), (0, 0, -1.0)))
        assert hit is not None
        assert hit.t == pytest.approx(4.0, abs=1e-7)
        assert hit.point == pytest.approx((0, 0, 1.0), abs=1e-7)
        assert hit.normal == pytest.approx((0, 0, 1.0), abs=1e-6)
        assert hit.front_facing

    def test_empty_zero_set(self):
        sc = sphere_scene(equation=ex.parse("x^2+y^2+z^2+1"))
        assert rn.first_hit(sc, rn.Ray((0, 0, 5.0), (0, 0, -1.0))) is None

    def test_random_rays_match_quadratic_formula(self, rng):
        sc = sphere_scene(zoom=0.2, n_march=1024)
        checked = 0
        while checked < 1000:
            # aim from a random direction at a point near the sphere
            origin = np.array([rng.gauss(0, 2) for _ in range(3)])
            if np.linalg.norm(origin) < 1.5:
                continue
            target = np.array([rng.gauss(0, 0.4) for _ in range(3)])
            d = target - origin
            d = d / np.linalg.norm(d)
            # closed-form smallest positive root of |o + t d| = 1
            b = float(origin @ d)
            c = float(origin @ origin) - 1.0
            disc = b * b - c
            hit = rn.first_hit(sc, rn.Ray(tuple(origin), tuple(d)))
            if disc <= 0:
                assert hit is None
                checked += 1
                continue
            roots = [-b - math.sqrt(disc), -b + math.sqrt(disc)]
            pos = [t for t in roots if t > 0]
            if not pos:
                assert hit is None
            else:
                assert hit is not None
                assert hit.t == pytest.approx(min(pos), abs=1e-7)
            checked += 1

    def test_hit_refinement_invariant(self, rng):
        e = ex.parse(eqs.EQ_ATOM_FISH)
        sc = rn.Scene(equation=e, params={"a": 0.02}, zoom=0.91,
                      width=64, height=64)
        surf = rn.compiled(e)
        for _ in range(200):
            px, py = rng.randrange(64), rng.randrange(64)
            ray = rn.camera_ray(sc, px, py)
            hit = rn.first_hit(sc, ray)
            if hit is None:
                continue
            fval = abs(surf.f_scalar(*hit.point, sc.params))
            f0 = abs(surf.f_scalar(*ray.origin, sc.params))
            assert fval < 1e-6 * (1.0 + f0)

    def test_no_hit_outside_clipping_ball(self):
        # surface far outside the ball is never reported
        sc = sphere_scene(equation=ex.parse("z-100"), zoom=1.0)
        for px in (0, 128, 255):
            assert rn.first_hit(sc, rn.camera_ray(sc, px, 128)) is None


class TestShade:
    def test_miss_is_background(self):
        sc = sphere_scene()
        assert rn.shade(None, sc) == sc.color_background

    def test_front_face(self):
        sc = sphere_scene(zoom=0.2)
        hit = rn.first_hit(sc, rn.Ray((0, 0, 5.0), (0, 0, -1.0)))
        assert rn.shade(hit, sc) == sc.color_front

    def test_back_face_color(self):
        # gradient of -(sphere) points away from the viewer at the front cap
        sc = sphere_scene(equation=ex.parse("1-x^2-y^2-z^2"), zoom=0.2)
        hit = rn.first_hit(sc, rn.Ray((0, 0, 5.0), (0, 0, -1.0)))
        assert not hit.front_facing
        assert rn.shade(hit, sc) == sc.color_back

    def test_lit_variant_scales_colors(self):
        sc = sphere_scene(zoom=0.2, lit=True)
        hit = rn.first_hit(sc, rn.Ray((0, 0, 5.0), (0, 0, -1.0)))
        shaded = rn.shade(hit, sc)
        assert all(s <= c for s, c in zip(shaded, sc.color_front))


class TestRenderScene:
    def test_silhouette_area(self):
        sc = sphere_scene(width=256, height=256, zoom=1.0)
        img = rn.render_scene(sc)
        disk = nonbackground_fraction(img, sc) * 256 * 256
        expected = math.pi * (1.0 * 256 / 2) ** 2
        assert abs(disk - expected) / expected < 0.02

    @pytest.mark.parametrize("zoom", [0.5, 1.0, 2.0])
    def test_silhouette_scales_with_zoom(self, zoom):
        # silhouette pixel radius = zoom * 256 / 2; compare against the
        # analytic disk clipped to the screen square
        sc = sphere_scene(width=256, height=256, zoom=zoom)
        img = rn.render_scene(sc)
        covered = nonbackground_fraction(img, sc) * 256 * 256
        expected = disk_square_intersection_area(zoom * 256 / 2, 256)
        assert abs(covered - expected) / expected < 0.02

    def test_deterministic_across_worker_counts(self):
        sc = sphere_scene(width=128, height=96)
        imgs = [rn.render_scene(sc, workers=w) for w in (1, 2, 7)]
        assert all((im == imgs[0]).all() for im in imgs[1:])

    def test_repeat_renders_bit_identical(self):
        e = ex.parse(eqs.EQ_ATOM_FISH)
        sc = rn.Scene(equation=e, params={"a": 0.02}, zoom=0.91,
                      width=128, height=128)
        a = rn.render_scene(sc)
        b = rn.render_scene(sc)
        assert (a == b).all()

    def test_atom_fish_nonempty(self):
        e = ex.parse(eqs.EQ_ATOM_FISH)
        sc = rn.Scene(equation=e, params={"a": 0.02}, zoom=0.91,
                      width=128, height=128)
        assert nonbackground_fraction(rn.render_scene(sc), sc) >= 0.01

    def test_ring_blaster_nonempty(self):
        e = ex.parse("((x^2+y^2-1)^2+(y^2+z^2-1)^2-a)"
                     "*((x-y)(x+y)-a)((x+y)(x-y)+a)")
        sc = rn.Scene(equation=e, params={"a": 0.02}, zoom=0.47,
                      width=128, height=128)
        assert nonbackground_fraction(rn.render_scene(sc), sc) > 0.0

    def test_flat_shading_color_cardinality(self):
        e = ex.parse(eqs.EQ_ATOM_FISH)
        sc = rn.Scene(equation=e, params={"a": 0.02}, zoom=0.91,
                      width=128, height=128)
        img = rn.render_scene(sc)
        assert len(np.unique(img.reshape(-1, 3), axis=0)) <= 3

    def test_eval_error_pixels_are_background(self):
        # 1/(x*y) is non-finite on the axes; those pixels must fall back to
        # background and be counted
        sc = rn.Scene(equation=ex.parse("1/(x*y)"), width=33, height=33)
        img, stats = rn.render_with_stats(sc)
        assert stats.eval_error_count > 0
        bg = np.array(sc.color_background, dtype=np.uint8)
        assert (img[16, 16] == bg).all()


class TestWriteImage:
    def test_1x1_ppm_payload(self, tmp_path):
        img = np.full((1, 1, 3), 7, dtype=np.uint8)
        data = rn.ppm_bytes(img)
        assert data == b"P6\n1 1\n255\n\x07\x07\x07"

    def test_ppm_round_trip(self, tmp_path):
        sc = sphere_scene(width=32, height=24)
        img = rn.render_scene(sc)
        path = tmp_path / "out.ppm"
        rn.write_image(img, str(path))
        assert (rn.read_ppm(path.read_bytes()) == img).all()

    def test_png_written(self, tmp_path):
        from PIL import Image as PILImage

        sc = sphere_scene(width=32, height=24)
        img = rn.render_scene(sc)
        path = tmp_path / "out.png"
        rn.write_image(img, str(path))
        back = np.asarray(PILImage.open(path).convert("RGB"))
        assert (back == img).all()

    def test_invalid_path_raises(self):
        img = np.zeros((1, 1, 3), dtype=np.uint8)
        with pytest.raises(OSError):
            rn.write_image(img, "/nonexistent-dir/x.png")
