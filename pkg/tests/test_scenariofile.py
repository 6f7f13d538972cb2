"""Strict scenario-file parsing."""

import textwrap

import pytest

from reflexgrid.agents import RuleKind
from reflexgrid.scenariofile import ScenarioFileError, parse_scenario_text

MINIMAL = """\
[circuit]
r_source = 0.08
r_base = 100.0
r_flex = 50.0

[source]
v_base = 10.0

[agents]
count = 10
period = 10
on_steps = 5
rule = reactive

[run]
horizon = 100
seed = 7
"""


def test_minimal_scenario(
):
    bundle = parse_scenario_text(MINIMAL)
    sc = bundle.scenario
    assert sc.n_agents == 10
    assert sc.horizon == 100
    assert sc.seed == 7
    assert sc.sensing_delay == 1
    assert sc.disturbance.t_start == sc.disturbance.t_end == 0
    assert sc.controller is None
    assert all(a.rule is RuleKind.REACTIVE for a in sc.agents)
    assert [a.phase for a in sc.agents] == [i % 10 for i in range(10)]
    # agent thresholds default to the scenario band
    assert all(a.v_low == sc.band.v_low and a.v_high == sc.band.v_high for a in sc.agents)


def test_unknown_key_reports_line_number():
    bad = MINIMAL.replace("period = 10", "perod = 10")
    with pytest.raises(ScenarioFileError) as exc:
        parse_scenario_text(bad)
    assert exc.value.line == 11
    assert "perod" in str(exc.value)


def test_unknown_section_rejected():
    with pytest.raises(ScenarioFileError) as exc:
        parse_scenario_text(MINIMAL + "\n[market]\nprice = 3\n")
    assert "market" in str(exc.value)


def test_duplicate_key_rejected():
    with pytest.raises(ScenarioFileError):
        parse_scenario_text(MINIMAL + "\n[circuit]\nr_source = 0.1\n")


def test_missing_section_rejected():
    text = MINIMAL.replace("[source]\nv_base = 10.0\n", "")
    with pytest.raises(ScenarioFileError) as exc:
        parse_scenario_text(text)
    assert "source" in str(exc.value)


def test_malformed_line_reports_position():
    with pytest.raises(ScenarioFileError) as exc:
        parse_scenario_text(MINIMAL + "\n[band]\nratio\n")
    assert exc.value.line is not None


def test_bad_value_reports_line():
    bad = MINIMAL.replace("count = 10", "count = ten")
    with pytest.raises(ScenarioFileError) as exc:
        parse_scenario_text(bad)
    assert exc.value.line == 10


def test_probabilistic_requires_p():
    bad = MINIMAL.replace("rule = reactive", "rule = probabilistic")
    with pytest.raises(ScenarioFileError) as exc:
        parse_scenario_text(bad)
    assert "'p'" in str(exc.value)


def test_probabilistic_with_p():
    text = MINIMAL.replace("rule = reactive", "rule = probabilistic\np = 0.25")
    bundle = parse_scenario_text(text)
    assert all(a.p == 0.25 for a in bundle.scenario.agents)


def test_disturbance_and_band_sections():
    text = MINIMAL + textwrap.dedent(
        """
        [disturbance]
        t_start = 10
        t_end = 20
        delta_v = 0.5

        [band]
        ratio = 0.01
        """
    )
    sc = parse_scenario_text(text).scenario
    assert (sc.disturbance.t_start, sc.disturbance.t_end, sc.disturbance.delta_v) == (10, 20, 0.5)
    assert sc.band.v_high / sc.band.v_low == pytest.approx(1.01 / 0.99)


def test_explicit_band_overrides_calibration():
    text = MINIMAL + "\n[band]\nv_low = 9.0\nv_high = 9.5\n"
    sc = parse_scenario_text(text).scenario
    assert (sc.band.v_low, sc.band.v_high) == (9.0, 9.5)


def test_band_edges_must_come_together():
    with pytest.raises(ScenarioFileError):
        parse_scenario_text(MINIMAL + "\n[band]\nv_low = 9.0\n")


def test_band_ratio_and_edges_conflict():
    with pytest.raises(ScenarioFileError):
        parse_scenario_text(MINIMAL + "\n[band]\nratio = 0.01\nv_low = 9.0\nv_high = 9.5\n")


def test_controller_section():
    text = MINIMAL.replace("rule = reactive", "rule = commanded") + textwrap.dedent(
        """
        [controller]
        enabled = true
        control_interval = 5
        """
    )
    bundle = parse_scenario_text(text)
    ctrl = bundle.scenario.controller
    assert ctrl is not None
    assert ctrl.control_interval == 5
    assert ctrl.band == bundle.scenario.band
    # wiring gains the controller atom and channels
    assert bundle.awareness.controller_atom is not None
    assert all(bundle.awareness.controller_channel)


def test_per_agent_overrides():
    text = MINIMAL + textwrap.dedent(
        """
        [agent.3]
        rule = passive
        phase = 7

        [agent.4]
        v_low = 1.0
        v_high = 2.0
        """
    )
    sc = parse_scenario_text(text).scenario
    assert sc.agents[3].rule is RuleKind.PASSIVE
    assert sc.agents[3].phase == 7
    assert (sc.agents[4].v_low, sc.agents[4].v_high) == (1.0, 2.0)
    assert sc.agents[2].rule is RuleKind.REACTIVE


def test_override_for_missing_agent_rejected():
    with pytest.raises(ScenarioFileError):
        parse_scenario_text(MINIMAL + "\n[agent.10]\nphase = 0\n")


def test_peer_awareness_values():
    full = MINIMAL.replace("rule = reactive", "rule = reactive\npeer_awareness = full")
    bundle = parse_scenario_text(full)
    assert all(len(p) == 10 for p in bundle.awareness.peer_images)
    none = MINIMAL.replace("rule = reactive", "rule = reactive\npeer_awareness = none")
    assert all(len(p) == 0 for p in parse_scenario_text(none).awareness.peer_images)
    with pytest.raises(ScenarioFileError):
        parse_scenario_text(MINIMAL.replace("rule = reactive", "rule = reactive\npeer_awareness = maybe"))


def test_comments_and_blank_lines_ignored():
    text = "# leading comment\n; alt comment\n" + MINIMAL.replace(
        "count = 10", "count = 10  # trailing"
    )
    assert parse_scenario_text(text).scenario.n_agents == 10


def test_scenario_invariant_errors_surface():
    bad = MINIMAL.replace("on_steps = 5", "on_steps = 10")
    with pytest.raises(ScenarioFileError):
        parse_scenario_text(bad)


def test_reference_files_load():
    from pathlib import Path

    for name, rule in (
        ("scenario_a.cfg", RuleKind.REACTIVE),
        ("scenario_b.cfg", RuleKind.PROBABILISTIC),
        ("scenario_c.cfg", RuleKind.COMMANDED),
    ):
        bundle = parse_scenario_text((Path(__file__).parent.parent / "scenarios" / name).read_text())
        assert bundle.scenario.n_agents == 100
        assert all(a.rule is rule for a in bundle.scenario.agents)
