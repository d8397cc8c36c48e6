import pytest
from hypothesis import given
from hypothesis import strategies as st

from fpcount import (
    ComplexityLevel,
    DomainError,
    ParseError,
    UnknownEntryError,
    ValidationError,
    format_duration,
    load_factor_tables,
    load_task_catalog,
    parse_duration,
    productivity,
)
from fpcount.catalog import bundled_text, find_task

HEADER = "task,complexity,optimistic,pessimistic,most_likely\n"


@pytest.mark.parametrize(
    "text, hours",
    [
        ("0:30:00", 0.5),
        ("240:00:00", 240.0),
        ("0:00:00", 0.0),
        ("1:40:00", 5 / 3),
        ("0:23:00", 23 / 60),
        ("1.83", 1.83),
        ("4", 4.0),
        ("3,6", 3.6),
    ],
)
def test_parse_duration(text, hours):
    assert parse_duration(text) == pytest.approx(hours, abs=1e-12)


def test_parse_duration_table_value_four_decimals():
    assert round(parse_duration("1:40:00"), 4) == 1.6667


@pytest.mark.parametrize(
    "text, field",
    [("1:60:00", "minutes"), ("1:00:75", "seconds"), ("-1:00:00", "hours"), ("1:-5:00", "minutes"), ("abc", "duration"), ("-2.5", "hours")],
)
def test_parse_duration_errors_name_the_field(text, field):
    with pytest.raises(ParseError) as info:
        parse_duration(text)
    assert info.value.field == field


@given(st.integers(min_value=0, max_value=10_000 * 3600))
def test_duration_round_trip(seconds):
    hours = seconds / 3600
    assert abs(parse_duration(format_duration(hours)) - hours) <= 1 / 3600
    assert format_duration(parse_duration(format_duration(hours))) == format_duration(hours)


def test_catalog_row_from_survey():
    (entry,) = load_task_catalog(HEADER + "Survey with the client, standard, 24:00:00, 36:00:00, 32:00:00\n")
    assert entry.complexity is ComplexityLevel.STANDARD
    assert (entry.optimistic, entry.most_likely, entry.pessimistic) == (24, 32, 36)


def test_empty_catalog():
    assert load_task_catalog(HEADER) == []


def test_catalog_ordering_violation_cites_row():
    with pytest.raises(ValidationError) as info:
        load_task_catalog(HEADER + "Bad, low, 4:00:00, 2:00:00, 3:00:00\n")
    assert info.value.problems[0].row == 2


def test_catalog_duplicates_rejected():
    text = HEADER + "A,low,1:00:00,2:00:00,1:30:00\nA,Low,1:00:00,3:00:00,2:00:00\n"
    with pytest.raises(ValidationError, match="duplicate"):
        load_task_catalog(text)


def test_catalog_collects_all_problems():
    text = HEADER + "A,low,1:00:00,2:00:00,1:30:00\nB,medium,1:00:00,2:00:00,1:30:00\nC,low,9:00:00,2:00:00,1:30:00\n"
    with pytest.raises(ValidationError) as info:
        load_task_catalog(text)
    assert [p.row for p in info.value.problems] == [3, 4]


def test_standard_is_not_average(catalog):
    pdf = find_task(catalog, "PDF conversion", "standard")
    assert pdf.complexity is ComplexityLevel.STANDARD
    with pytest.raises(UnknownEntryError):
        find_task(catalog, "PDF conversion", "average")


def test_bundled_catalog_invariants(catalog):
    assert len(catalog) == 41
    assert all(e.optimistic <= e.most_likely <= e.pessimistic for e in catalog)
    # Most-likely is stored verbatim, not recomputed as a midpoint.
    tables_low = find_task(catalog, "Creation of Tables", "low")
    assert tables_low.most_likely == pytest.approx(5 / 3)
    assert find_task(catalog, "site conversion to cms", "HIGH").pessimistic == 472


def test_bundled_effort_factors(factors):
    effort = factors.effort
    assert {k: effort.step(k) for k in ("survey", "elaboration", "tests", "alteration", "implantation")} == {
        "survey": 3.2, "elaboration": 5.8, "tests": 2.6, "alteration": 1.5, "implantation": 1.2,
    }
    assert effort.language("PHP") == effort.language("JS") == effort.language("ASP") == 3.5
    assert effort.language("HTML") == 1.8
    assert effort.language("Java") == effort.language("CMS") == effort.language("ETL") == 5.4
    assert effort.lookup("Elaboration") == 5.8


def test_construction_resolves_through_languages(factors):
    with pytest.raises(UnknownEntryError, match="language"):
        factors.effort.step("construction")


def test_bundled_inertia(factors):
    table = factors.inertia
    expected = {
        "HTML": 1.00, "ASP": 0.90, "CMS": 0.70, "PHP": 0.70, "statistics": 0.65, "management": 0.60,
        "DBA": 0.52, "text processors": 0.60, "text editors": 0.50, "development tools": 0.68,
        "Humanware": 0.0, "ETL": 0.36,
    }
    assert {name: table[name] for name in expected} == expected
    values = [v for k, v in table.tool_inertia.items()]
    assert max(values) == table["HTML"] == 1.0
    assert min(v for v in values if v > 0) == table["ETL"] == 0.36


def test_productivity_gain_converted_to_inertia(factors):
    assert factors.inertia["Lumis"] == pytest.approx(0.7)


def test_bundled_prices(factors):
    assert factors.prices.unit_price("adequation") == 537.00
    assert factors.prices.unit_price("new_implementation") == 480.00
    assert factors.prices.currency_label == "R$"


def _config(**overrides):
    text = bundled_text("factors.ini")
    for old, new in overrides.items():
        text = text.replace(old, new)
    return text


def test_inertia_out_of_range_rejected():
    with pytest.raises(ValidationError, match="inertia"):
        load_factor_tables(_config(**{"ASP = 0.90": "ASP = 1.3"}))


def test_nonpositive_factor_rejected():
    with pytest.raises(ValidationError, match="> 0"):
        load_factor_tables(_config(**{"tests = 2.6": "tests = 0"}))


def test_all_config_problems_reported_together():
    with pytest.raises(ValidationError) as info:
        load_factor_tables(_config(**{"ASP = 0.90": "ASP = 1.3", "adequation = 537.00": "adequation = -1"}))
    assert len(info.value.problems) == 2


def test_config_decimal_point_independent_of_locale():
    tables = load_factor_tables(_config(**{"survey = 3.2": "survey = 3,2"}))
    assert tables.effort.step("survey") == 3.2


@pytest.mark.parametrize("i, p", [(1.0, 1.0), (0.70, 1 / 0.70), (0.5, 2.0)])
def test_productivity(i, p):
    assert productivity(i) == pytest.approx(p)


def test_productivity_value_by_hand():
    # 1 / 0.7 = 1.428571...
    assert round(productivity(0.70), 4) == 1.4286


def test_humanware_has_no_productivity():
    with pytest.raises(DomainError, match="humanware"):
        productivity(0.0)
