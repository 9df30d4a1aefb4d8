"""Tests for the named figure-sweep presets."""

from __future__ import annotations

import pytest

from dss_alloc import (
    PRESETS,
    ConfigurationError,
    FixedSize,
    Probabilistic,
    ScaledExp,
    ShiftedExp,
    SmallExp,
    SweepRow,
    alpha_table,
    preset_rows,
)


def test_the_catalogue_covers_all_ten_figures():
    assert set(PRESETS) == {f"fig{i}" for i in range(2, 12)}
    assert all(preset.nodes == 40 for preset in PRESETS.values())


def test_presets_pair_each_service_model_with_both_access_kinds():
    assert isinstance(PRESETS["fig2"].service, SmallExp)
    assert isinstance(PRESETS["fig4"].service, ScaledExp)
    assert isinstance(PRESETS["fig10"].service, ShiftedExp)
    kinds = {p.access_kind for p in PRESETS.values()}
    assert kinds == {"fixed-size", "probabilistic"}


def test_parameter_types_match_the_access_kind():
    for preset in PRESETS.values():
        for _, parameter in preset.cases:
            if preset.access_kind == "fixed-size":
                assert isinstance(parameter, int)
            else:
                assert isinstance(parameter, float)


def test_redundancy_panel_cases():
    assert PRESETS["fig2"].cases == ((1, 10), (2, 10), (3, 10), (4, 10))
    assert PRESETS["fig2"].alphas == tuple(range(1, 11))
    assert PRESETS["fig3"].cases == ((3, 10), (3, 11), (3, 12), (3, 13), (3, 14))
    assert PRESETS["fig3"].alphas == tuple(range(1, 13))


def test_probabilistic_presets_plot_alpha_up_to_ten():
    for name in ("fig6", "fig7", "fig10", "fig11"):
        assert PRESETS[name].alphas == tuple(range(1, 11))


def test_preset_rows_yield_case_tagged_sweep_rows():
    rows = preset_rows("fig4")
    assert rows
    for m, r, row in rows:
        assert isinstance(row, SweepRow)
        assert (m, r) in PRESETS["fig4"].cases


def test_preset_rows_match_a_direct_alpha_table():
    preset = PRESETS["fig6"]
    rows = [row for m, p, row in preset_rows("fig6") if (m, p) == (2, 0.5)]
    assert tuple(rows) == alpha_table(Probabilistic(0.5), preset.service, 40, 2, preset.alphas)


def test_minimal_spreading_anchor_value():
    # m = 1, r = 10 at alpha = 1: mu * m * r / nodes = 1/4, and recovery matches
    rows = {(m, r, row.alpha): row for m, r, row in preset_rows("fig2")}
    anchor = rows[(1, 10, 1)]
    assert anchor.service_rate == pytest.approx(0.25, rel=1e-12)
    assert anchor.recovery_probability == pytest.approx(0.25, rel=1e-12)


def test_full_range_presets_stop_where_recovery_becomes_impossible():
    # alpha > r yields all-zero rows, so the default range ends at r = 10
    rows = [row for m, r, row in preset_rows("fig4") if (m, r) == (1, 10)]
    assert [row.alpha for row in rows] == list(range(1, 11))


def test_small_file_panel_peaks_inside_the_plotted_range():
    # the r = 14 case would admit alpha = 13, but the panel stops at 12
    rows = [row for m, r, row in preset_rows("fig3") if r == 14]
    assert max(row.alpha for row in rows) == 12
    best = max(rows, key=lambda row: row.recovery_probability)
    assert best.alpha == 12


def test_unknown_preset_is_rejected_by_name():
    with pytest.raises(ConfigurationError):
        preset_rows("fig99")
