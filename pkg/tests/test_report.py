import pytest

from ddmine.datamodel import format_dd
from ddmine.distance import AttributeSpec, DistanceSchema
from ddmine.lattice import DiscoveryConfig
from ddmine.report import outlier_report


def outlier_table(k=19):
    """A constant column and a near-constant column with one far value: the
    far pairs are a sub-10% tail that approximate satisfaction drops."""
    a = [0] * (k + 1)
    b = [0] * k + [2]
    specs = [AttributeSpec(name="A", kind="numeric"), AttributeSpec(name="B", kind="numeric")]
    cols = [a, b]
    return cols, DistanceSchema.build(specs, cols)


class TestOutlierReport:
    def test_interval_shrink_ratio(self):
        cols, schema = outlier_table()
        report = outlier_report(cols, schema, DiscoveryConfig(epsilon=0.9))
        shrunk = [r for r in report.rows if r.ratio < 1.0]
        assert len(shrunk) == 1
        row = shrunk[0]
        assert format_dd(row.full, schema.names) == "A[0,0] -> B[0,2]"
        assert format_dd(row.approx, schema.names) == "A[0,0] -> B[0,0]"
        assert row.ratio == pytest.approx(1 / 3)
        assert row.rr == pytest.approx(2 / 3)
        assert row.full.support == pytest.approx(1.0)

    def test_rows_sorted_by_ratio_and_sum_to_one(self):
        cols, schema = outlier_table()
        report = outlier_report(cols, schema, DiscoveryConfig(epsilon=0.9))
        ratios = [r.ratio for r in report.rows]
        assert ratios == sorted(ratios)
        for r in report.rows:
            assert r.ratio + r.rr == pytest.approx(1.0)

    def test_equal_intervals_give_full_ratio(self, table1):
        cols, schema = table1
        report = outlier_report(cols, schema, DiscoveryConfig(epsilon=0.9))
        for row in report.rows:
            if row.full.rhs_interval == row.approx.rhs_interval:
                assert row.ratio == pytest.approx(1.0)
                assert row.rr == pytest.approx(0.0)

    def test_unmatched_are_counted_not_paired(self):
        cols, schema = outlier_table()
        report = outlier_report(cols, schema, DiscoveryConfig(epsilon=0.9))
        paired_full = len(report.rows) + report.unmatched_full
        assert paired_full >= len(report.rows)
        assert report.unmatched_full >= 0 and report.unmatched_approx >= 0

    def test_requires_approximate_epsilon(self):
        cols, schema = outlier_table()
        with pytest.raises(ValueError):
            outlier_report(cols, schema, DiscoveryConfig(epsilon=1.0))

    def test_report_lines_format(self):
        cols, schema = outlier_table()
        report = outlier_report(cols, schema, DiscoveryConfig(epsilon=0.9))
        lines = report.lines()
        assert lines[0].startswith("support")
        assert any("33.33" in ln for ln in lines)
