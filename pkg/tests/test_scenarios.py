"""Scenario files: strict validation, bundled catalog, unit conversions."""

import json
import math

import pytest

from ris_kspace.scenarios import (
    ApBeam,
    BandpassOp,
    GaussianBeam,
    MultibeamOp,
    PlaneBeam,
    Scenario,
    ScenarioError,
    SteerOp,
    WavefrontOp,
    bundled_scenarios,
    load_scenario,
    parse_scenario,
)

MINIMAL = {
    "schema": "ris-kspace/1",
    "name": "t",
    "frequency_ghz": 150.0,
    "grid": {"nx": 32, "ny": 32, "pitch": "lambda/2"},
    "shape": {"kind": "full"},
    "beam": {"kind": "plane", "theta_i_deg": 0.0},
    "operation": {"kind": "steer", "theta_r_deg": 30.0},
}


def doc(**overrides) -> dict:
    out = json.loads(json.dumps(MINIMAL))
    out.update(overrides)
    return out


class TestBundled:
    def test_catalog_contains_the_cross_validation_trio(self):
        names = bundled_scenarios()
        for name in ("fig4a", "fig4b", "fig4c"):
            assert name in names

    def test_every_bundled_scenario_loads(self):
        names = bundled_scenarios()
        assert len(names) >= 20
        for name in names:
            sc = load_scenario(name)
            assert sc.name == name
            assert sc.k0 == pytest.approx(2 * math.pi / sc.wavelength_m)

    def test_unknown_name_lists_the_catalog(self):
        with pytest.raises(ScenarioError, match="bundled"):
            load_scenario("no-such-scenario")


class TestLoading:
    def test_load_from_path_uses_filename_as_fallback_name(self, tmp_path):
        body = doc()
        del body["name"]
        p = tmp_path / "custom_run.json"
        p.write_text(json.dumps(body))
        sc = load_scenario(str(p))
        assert sc.name == "custom_run"

    def test_invalid_json_reports_line_and_column(self, tmp_path):
        p = tmp_path / "broken.json"
        p.write_text('{\n  "schema": "ris-kspace/1",\n  oops\n}\n')
        with pytest.raises(ScenarioError, match=r"line 3, column 3"):
            load_scenario(str(p))

    def test_schema_tag_checked(self):
        with pytest.raises(ScenarioError, match="schema"):
            parse_scenario(doc(schema="ris-kspace/99"))

    def test_top_level_must_be_object(self):
        with pytest.raises(ScenarioError, match="expected an object"):
            parse_scenario([1, 2, 3])


class TestStrictness:
    def test_unknown_top_level_key_rejected(self):
        with pytest.raises(ScenarioError, match="unknown field\\(s\\): extra"):
            parse_scenario(doc(extra=1))

    def test_unknown_nested_key_reported_with_dotted_path(self):
        body = doc(grid={"nx": 32, "ny": 32, "pitch": "lambda/2", "color": "red"})
        with pytest.raises(ScenarioError, match="grid: unknown field"):
            parse_scenario(body)

    def test_missing_field_names_its_dotted_path(self):
        body = doc(beam={"kind": "gaussian", "theta_i_deg": 0.0})
        with pytest.raises(ScenarioError, match="beam.waist_m: missing"):
            parse_scenario(body)

    def test_type_errors_name_offending_value(self):
        body = doc(operation={"kind": "steer", "theta_r_deg": "thirty"})
        with pytest.raises(ScenarioError, match="operation.theta_r_deg"):
            parse_scenario(body)

    def test_booleans_are_not_numbers(self):
        body = doc(frequency_ghz=True)
        with pytest.raises(ScenarioError, match="frequency_ghz"):
            parse_scenario(body)


class TestPitch:
    def test_lambda_fraction(self):
        sc = parse_scenario(doc(grid={"nx": 32, "ny": 32, "pitch": "lambda/5"}))
        assert sc.grid.dx == pytest.approx(sc.wavelength_m / 5)

    def test_pitch_in_meters(self):
        sc = parse_scenario(doc(grid={"nx": 32, "ny": 32, "pitch": 0.001}))
        assert sc.grid.dx == 0.001

    @pytest.mark.parametrize("bad", ["lambda", "lam/5", "lambda/zero", "lambda/-2", 0, -1e-3])
    def test_malformed_pitch_rejected(self, bad):
        with pytest.raises(ScenarioError, match="pitch"):
            parse_scenario(doc(grid={"nx": 32, "ny": 32, "pitch": bad}))


class TestSections:
    def test_beam_variants_resolve_to_their_dataclasses(self):
        plane = parse_scenario(doc()).beam
        assert isinstance(plane, PlaneBeam) and plane.e0 == 1.0
        gauss = parse_scenario(
            doc(beam={"kind": "gaussian", "theta_i_deg": 45.0, "waist_m": 0.02})
        ).beam
        assert isinstance(gauss, GaussianBeam) and gauss.waist_m == 0.02
        ap = parse_scenario(
            doc(beam={"kind": "ap", "theta_i_deg": 45.0, "power_w": 1.0,
                      "gain_db": 40.0, "distance_m": 2.0})
        ).beam
        assert isinstance(ap, ApBeam) and ap.gain_db == 40.0

    def test_interferers_parsed_in_order(self):
        body = doc(beam={"kind": "plane", "theta_i_deg": 40.0,
                         "interferers": [{"theta_i_deg": 60.0},
                                         {"theta_i_deg": 15.0, "e0": 0.5}]})
        beam = parse_scenario(body).beam
        assert beam.interferers == ((60.0, 1.0), (15.0, 0.5))

    def test_multibeam_weight_count_must_match(self):
        body = doc(operation={"kind": "multibeam", "theta_r_deg": [0, 30, 60],
                              "weights": [1, 1]})
        with pytest.raises(ScenarioError, match="expected 3 weights"):
            parse_scenario(body)

    def test_multibeam_defaults(self):
        body = doc(operation={"kind": "multibeam", "theta_r_deg": [0, 60]})
        op = parse_scenario(body).operation
        assert isinstance(op, MultibeamOp)
        assert op.weights == (1.0, 1.0) and op.normalize == "incident"

    def test_bandpass_center_defaults_to_none(self):
        body = doc(operation={"kind": "bandpass", "width_k0": 0.025,
                              "target_theta_deg": 0.0})
        op = parse_scenario(body).operation
        assert isinstance(op, BandpassOp) and op.center_theta_deg is None

    def test_wavefront_presets_fill_their_defaults(self):
        bessel = parse_scenario(
            doc(operation={"kind": "wavefront", "preset": "bessel"})
        ).operation
        assert isinstance(bessel, WavefrontOp) and bessel.cone == 0.0125
        airy = parse_scenario(
            doc(operation={"kind": "wavefront", "preset": "airy"})
        ).operation
        assert airy.bend_per_m == 0.0025
        with pytest.raises(ScenarioError, match="focal_m"):
            parse_scenario(doc(operation={"kind": "wavefront", "preset": "focus"}))

    def test_shape_must_fit_the_grid(self):
        body = doc(shape={"kind": "rect", "lx_m": 1.0, "ly_m": 1.0})
        with pytest.raises(ScenarioError, match="shape"):
            parse_scenario(body)


class TestObservation:
    def test_sweep_parsed_with_route_dedup(self):
        body = doc(observation={"sweep": {
            "r_m": 20.0, "a_r_m2": 1e-4, "theta_min_deg": -10.0,
            "theta_max_deg": 10.0, "points": 21,
            "routes": ["numeric", "analytic", "numeric"]}})
        sweep = parse_scenario(body).sweep
        assert sweep.routes == ("numeric", "analytic")
        assert sweep.points == 21

    def test_empty_sweep_range_rejected(self):
        body = doc(observation={"sweep": {
            "r_m": 20.0, "a_r_m2": 1e-4, "theta_min_deg": 10.0,
            "theta_max_deg": 10.0, "points": 21}})
        with pytest.raises(ScenarioError, match="sweep range is empty"):
            parse_scenario(body)

    def test_plane_trio_expands_to_a_uniform_ladder(self):
        body = doc(observation={"planes": {"z_min_m": 2.0, "z_max_m": 4.0, "points": 5}})
        planes = parse_scenario(body).planes
        assert planes.z_m == (2.0, 2.5, 3.0, 3.5, 4.0)
        assert planes.save_fields is False

    def test_explicit_plane_list_must_increase(self):
        body = doc(observation={"planes": {"z_m": [1.0, 1.0, 2.0]}})
        with pytest.raises(ScenarioError, match="strictly increasing"):
            parse_scenario(body)

    def test_defaults_without_observation(self):
        sc = parse_scenario(doc())
        assert isinstance(sc, Scenario)
        assert (sc.sweep, sc.planes, sc.pad, sc.seed) == (None, None, 2, 0)

    def test_steer_op_round_trip(self):
        op = parse_scenario(doc()).operation
        assert isinstance(op, SteerOp) and op.theta_r_deg == 30.0
