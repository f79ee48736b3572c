import pytest

from xxzfloquet.config import (
    DEFAULTS,
    ConfigError,
    build_basis,
    build_lattice,
    build_params,
    load_file,
    resolve,
    snapshot_times,
    time_unit,
)
from xxzfloquet.errors import InvalidArgumentError


def test_defaults_resolve():
    cfg = resolve()
    assert cfg == DEFAULTS
    graph = build_lattice(cfg)
    assert graph.num_sites == 16 and graph.is_periodic_chain
    p = build_params(cfg)
    assert p.amplitude_a == 2.4048 and p.omega == 10.0
    assert build_basis(cfg, graph).dim == 2**16
    assert time_unit(p) == 1.0


def test_overrides_and_exclusive_drive():
    cfg = resolve({"model": {"delta_j": 20.0}})
    assert "amplitude_a" not in cfg["model"]
    assert build_params(cfg).amplitude_a == pytest.approx(2.0)
    back = resolve(cfg, {"model": {"amplitude_a": 1.0}})
    assert "delta_j" not in back["model"]
    with pytest.raises(ConfigError):
        resolve({"model": {"delta_j": 1.0, "amplitude_a": 1.0}})


@pytest.mark.parametrize(
    "override,path",
    [
        ({"modle": {}}, "modle"),
        ({"model": {"omgea": 1}}, "model.omgea"),
        ({"model": {"omega": -1.0}}, "model.omega"),
        ({"model": {"omega": "fast"}}, "model.omega"),
        ({"lattice": {"kind": "hex"}}, "lattice.kind"),
        ({"lattice": {"periodic": "yes"}}, "lattice.periodic"),
        ({"lattice": {"length": 2}}, "lattice"),
    ],
)
def test_errors_name_the_key(override, path):
    with pytest.raises(ConfigError) as err:
        cfg = resolve(override)
        build_lattice(cfg)
        build_params(cfg)
    assert err.value.path == path
    assert isinstance(err.value, InvalidArgumentError)


def test_custom_lattice_is_one_based():
    cfg = resolve({"lattice": {"kind": "custom", "edges": [[1, 2], [2, 3], [3, 1]]}})
    g = build_lattice(cfg)
    assert g.num_sites == 3 and g.has_edge(0, 2)
    with pytest.raises(ConfigError):
        build_lattice(resolve({"lattice": {"kind": "custom", "edges": [[1, 2, 3]]}}))


def test_square_lattice():
    g = build_lattice(resolve({"lattice": {"kind": "square", "lx": 3, "ly": 3}}))
    assert g.num_edges == 18


def test_snapshot_forms():
    assert snapshot_times(resolve({"evolve": {"t_max": 1.0, "snapshots": {"every": 0.25}}})) == [0, 0.25, 0.5, 0.75, 1.0]
    assert snapshot_times(resolve({"evolve": {"t_max": 1.0, "snapshots": {"every": 0.4}}})) == [0, 0.4, 0.8, 1.0]
    assert snapshot_times(resolve({"evolve": {"t_max": 2.0, "snapshots": [2, 0.5]}})) == [0.5, 2.0]
    with pytest.raises(ConfigError):
        snapshot_times(resolve({"evolve": {"t_max": 1.0, "snapshots": [3.0]}}))
    with pytest.raises(ConfigError):
        snapshot_times(resolve({"evolve": {"snapshots": {"each": 1}}}))


def test_time_unit_scales_with_coupling():
    assert time_unit(build_params(resolve({"model": {"j_par_bar": -2.0}}))) == 0.5


def test_load_file(tmp_path):
    f = tmp_path / "run.yaml"
    f.write_text("model:\n  omega: 4.0\nrun:\n  state: A1\n")
    cfg = resolve(load_file(f))
    assert cfg["model"]["omega"] == 4.0 and cfg["run"]["state"] == "A1"
    bad = tmp_path / "bad.yaml"
    bad.write_text("- 1\n- 2\n")
    with pytest.raises(ConfigError):
        load_file(bad)
    with pytest.raises(ConfigError):
        load_file(tmp_path / "missing.yaml")
    (tmp_path / "empty.yaml").write_text("")
    assert load_file(tmp_path / "empty.yaml") == {}
