import pytest

from otdp.catalog import (
    CkcStep,
    QueryFilter,
    load_catalog,
    parse_catalog_text,
    query_datasets,
    resolve_attack,
    resolve_step,
    summary_stats,
)
from otdp.errors import CatalogError, UnknownAttackError, UnknownDatasetError


@pytest.fixture(scope="module")
def catalog():
    return load_catalog()


def test_embedded_catalog_shape(catalog):
    assert len(catalog.records) == 32
    assert len(catalog.ml_ready_records) == 17
    assert [r.id for r in catalog.records] == list(range(1, 33))


def test_edge_iiot_record(catalog):
    record = catalog.find("Edge-IIoT")
    assert record.year == 2022
    assert record.scenario == "IoT and IIoT"
    assert record.attack_type_count == 14


def test_hdgm_stats(catalog):
    stats = catalog.find("HDGM").stats
    assert stats.n_points == 3890
    assert stats.n_features == 78
    assert stats.ir == 1.00
    assert stats.avg_cs == 0.479


def test_ransomware_query(catalog):
    names = {r.name for r in query_datasets(catalog, QueryFilter(attack="Ransomware"))}
    assert names == {"Edge-IIoT", "X-IIOTID"}


def test_attack_name_matching_is_forgiving(catalog):
    a = query_datasets(catalog, QueryFilter(attack="dos/ddos"))
    b = query_datasets(catalog, QueryFilter(attack="DoS /DDoS"))
    assert [r.id for r in a] == [r.id for r in b]
    assert len(a) > 5


def test_unknown_attack_lists_valid_names(catalog):
    with pytest.raises(UnknownAttackError) as err:
        query_datasets(catalog, QueryFilter(attack="Phishing"))
    assert "Ransomware" in str(err.value)


def test_year_2011_query(catalog):
    hits = query_datasets(catalog, QueryFilter(year_range=(2011, 2011)))
    assert [r.name for r in hits] == ["ICS Gas Pipeline & Water Storage Tank"]


def test_recon_ml_ready_matches_row_scan(catalog):
    hits = query_datasets(
        catalog, QueryFilter(step=CkcStep.RECONNAISSANCE, ml_ready_only=True)
    )
    # Brute-force oracle over all records.
    expected = [
        r.id
        for r in catalog.records
        if r.ml_ready and any(f.step is CkcStep.RECONNAISSANCE for f in r.attack_flags)
    ]
    assert [r.id for r in hits] == expected
    assert expected  # non-empty


def test_scenario_substring_query(catalog):
    hits = query_datasets(catalog, QueryFilter(scenario_substring="water"))
    assert {r.name for r in hits} >= {"BATADAL", "SWaT", "WADI"}


def test_empty_filter_returns_all(catalog):
    assert len(query_datasets(catalog)) == 32


def test_results_sorted_by_id(catalog):
    hits = query_datasets(catalog, QueryFilter(step=CkcStep.EXPLOITATION))
    assert [r.id for r in hits] == sorted(r.id for r in hits)


def test_weaponisation_and_delivery_never_flagged(catalog):
    for record in catalog.records:
        steps = record.steps()
        assert CkcStep.WEAPONISATION not in steps
        assert CkcStep.DELIVERY not in steps


def test_stats_ranges(catalog):
    for record in catalog.ml_ready_records:
        assert record.stats.ir >= 1.0
        assert 0.0 <= record.stats.avg_cs <= 1.0


def test_summary_aggregates(catalog):
    summary = summary_stats(catalog)
    assert summary.avg_ir == pytest.approx(20.8, abs=0.05)
    assert summary.avg_cs == pytest.approx(0.323, abs=0.001)
    assert summary.cs_histogram == (1, 0, 6, 7, 3, 0)
    assert summary.ir_above(30) == 4


def test_find_suggests_near_name(catalog):
    with pytest.raises(UnknownDatasetError) as err:
        catalog.find("HDGN")
    assert err.value.suggestion == "HDGM"


def test_find_case_insensitive(catalog):
    assert catalog.find("hdgm").name == "HDGM"


def test_year_discrepancies_preserved(catalog):
    cic = catalog.find("CIC Modbus 2023")
    assert (cic.year, cic.ckc_year) == (2017, 2023)
    wustl = catalog.find("WUSTL-IIOT-2018 ICS (SCADA)")
    assert (wustl.year, wustl.ckc_year) == (2018, 2020)
    assert catalog.find("HDGM").ckc_year is None


def test_subheading_count_is_23():
    from otdp.catalog import SUBHEADINGS

    assert len(SUBHEADINGS) == 23
    assert len({s.name for s in SUBHEADINGS}) == 23


def test_resolve_step_variants():
    assert resolve_step("command & control") is CkcStep.COMMAND_AND_CONTROL
    assert resolve_step("CommandAndControl") is CkcStep.COMMAND_AND_CONTROL
    assert resolve_step("Actions on Objectives") is CkcStep.ACTIONS_ON_OBJECTIVES
    with pytest.raises(CatalogError, match="unknown kill-chain step"):
        resolve_step("lateral movement")


def test_resolve_attack_exact_names():
    for name in ("TCP/UDP Port Scan", "DoS/DDoS", "MITM", "Ransomware"):
        assert resolve_attack(name).name == name


def test_catalog_file_roundtrip(tmp_path, catalog):
    # Loading from an explicit path behaves like the embedded default.
    from importlib import resources

    text = resources.files("otdp").joinpath("data/datasets.otcat").read_text("utf-8")
    path = tmp_path / "cat.otcat"
    path.write_text(text)
    loaded = load_catalog(str(path))
    assert [r.name for r in loaded.records] == [r.name for r in catalog.records]


def test_catalog_corrupt_wrong_count():
    text = (
        "version: 1\n[dataset]\nid: 1\nname: only\nyear: 2020\n"
        "scenario: x\nattack-types: 1\n"
    )
    with pytest.raises(CatalogError, match="expected 32 records"):
        parse_catalog_text(text)


def test_catalog_corrupt_partial_stats(catalog):
    from importlib import resources

    text = resources.files("otdp").joinpath("data/datasets.otcat").read_text("utf-8")
    broken = text.replace("avg-cs: 0.479\n", "", 1)
    with pytest.raises(CatalogError, match="partial stats"):
        parse_catalog_text(broken)
