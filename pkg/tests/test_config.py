import pytest
from hypothesis import given, strategies as st

from qfed.config import ConfigError, Grid, LayerSpec, Options, RunConfig, cavity_config, parse_config, serialize_config
from qfed.fixtures import cavity

MINIMAL = """
layers:
  - eps: [1, 0]
frequency:
  energy_eV: 0.5
"""


def test_minimal_homogeneous_config():
    cfg = parse_config(MINIMAL)
    assert cfg.stack.N == 0
    assert cfg.quantity == "ldos"
    assert cfg.options == Options()
    assert cfg.options.loss_floor == 1e-9 and cfg.options.quad_tol == 1e-8 and cfg.options.ldos_units == "natural"
    assert len(cfg.positions_m()) == 0


@pytest.mark.parametrize("emitter", [None, "electric", "magnetic"])
def test_cavity_round_trip(emitter):
    cfg = cavity_config(emitter)
    text = serialize_config(cfg)
    once = parse_config(text)
    assert once == cfg
    assert parse_config(serialize_config(once)) == once
    assert serialize_config(once) == text
    stack = once.stack
    ref = cavity(emitter)
    assert [(a.epsilon, a.mu, a.temperature) for a in stack.layers] == [(a.epsilon, a.mu, a.temperature) for a in ref.layers]
    assert stack.interfaces == pytest.approx(ref.interfaces, abs=1e-18)


def test_negative_thickness_names_layer():
    text = serialize_config(cavity_config("magnetic")).replace("thickness_um: 4.5", "thickness_um: -4.5", 1)
    with pytest.raises(ConfigError) as exc:
        parse_config(text)
    assert "layer 3 (gap)" in str(exc.value)
    assert exc.value.path == "layers[2].thickness_um"
    assert exc.value.line is not None


@pytest.mark.parametrize("text,path", [
    (MINIMAL + "colour: red\n", "colour"),
    (MINIMAL + "options: {quad_tol: -1}\n", "options.quad_tol"),
    (MINIMAL + "options: {ldos_units: cgs}\n", "options.ldos_units"),
    (MINIMAL + "quantity: magic\n", "quantity"),
    (MINIMAL + "quantity: nldos\n", "source_positions"),
    (MINIMAL + "quantity: steady-temperature\n", "options"),
    ("layers:\n  - {eps: [1, -0.1]}\nfrequency: {energy_eV: 0.5}\n", "layers[0]"),
    ("layers:\n  - {thickness_um: 1}\nfrequency: {energy_eV: 0.5}\n", "layers[0].thickness_um"),
    ("layers: []\nfrequency: {energy_eV: 0.5}\n", "layers"),
    ("layers:\n  - {}\nfrequency: {energy_eV: -1}\n", "frequency.energy_eV[0]"),
    ("layers:\n  - {}\nfrequency: {energy_eV: 1, sweep_eV: {min: 1, max: 2, count: 3}}\n", "frequency"),
    ("layers:\n  - {}\nfrequency: {sweep_eV: {min: 1, max: 2, count: 0}}\n", "frequency.sweep_eV.count"),
    ("layers:\n  - {}\n", "<root>"),
])
def test_validation_errors_are_addressed(text, path):
    with pytest.raises(ConfigError) as exc:
        parse_config(text)
    assert exc.value.path == path


def test_error_line_numbers():
    with pytest.raises(ConfigError) as exc:
        parse_config(MINIMAL + "options:\n  loss_floor: 1e-9\n  bogus: 1\n")
    assert exc.value.line == 8


def test_malformed_yaml():
    with pytest.raises(ConfigError) as exc:
        parse_config("layers: [\n")
    assert "malformed" in str(exc.value)


def test_grids():
    assert list(Grid(linear=(0.0, 1.0, 3)).points()) == [0.0, 0.5, 1.0]
    cfg = parse_config(MINIMAL.replace("energy_eV: 0.5", "sweep_eV: {min: 0.1, max: 0.2, count: 11}")
                       + "positions: {list_um: [0, 1.5]}\n")
    assert len(cfg.energies_ev()) == 11
    assert list(cfg.positions_m()) == [0.0, 1.5e-6]


finite = st.floats(-1e3, 1e3, allow_nan=False).map(lambda v: round(v, 6))


@given(st.lists(st.tuples(st.floats(0.5, 20), st.floats(0, 5), st.floats(0.5, 5), st.floats(0, 2),
                          st.floats(0.01, 50), st.floats(0, 2000)), min_size=1, max_size=6),
       finite, st.sampled_from(["ldos", "photon-number", "poynting"]))
def test_round_trip_property(rows, origin, quantity):
    n = len(rows)
    layers = tuple(LayerSpec(complex(a, b), complex(c, d), None if i in (0, n - 1) else t, T, f"L{i}")
                   for i, (a, b, c, d, t, T) in enumerate(rows))
    cfg = RunConfig(layers, Grid(linear=(0.1, 0.3, 5)), Grid(values=(0.0, 1.0)), quantity, origin)
    assert parse_config(serialize_config(cfg)) == cfg
